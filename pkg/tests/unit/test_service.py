from treembed import gen_grid, build_oracle
from treembed._decorators import authenticate, password_digest, load_config, reset_config
from treembed.service import create_app
import base64
import json
import mock
import os
import shutil
import tempfile
import unittest

CONFIG = {
    'accounts': [
        {'username': 'reader', 'password': password_digest('password'), 'roles': ['read']},
        {'username': 'nobody', 'password': password_digest('secret'), 'roles': []},
    ]
}


def _auth(username, password):
    token = base64.b64encode('{0}:{1}'.format(username, password).encode('utf-8')).decode('ascii')
    return {'Authorization': 'Basic ' + token}


class TestCredentials(unittest.TestCase):

    def setUp(self):
        patcher = mock.patch('treembed._decorators.load_config', return_value=CONFIG)
        patcher.start()
        self.addCleanup(patcher.stop)

    def test_hash(self):
        assert password_digest('password') == '5baa61e4c9b93f3f0682250b6cf8331b7ee68fd8'

    def test_authenticate(self):
        assert authenticate('reader', 'password')['username'] == 'reader'
        assert authenticate('reader', 'password', ['read']) is not None
        assert authenticate('reader', 'wrong') is None
        assert authenticate('nobody', 'secret') is not None
        assert authenticate('nobody', 'secret', ['read']) is None
        assert authenticate('ghost', 'password') is None


class TestLoadConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        reset_config()

    def tearDown(self):
        reset_config()
        shutil.rmtree(self.tmp)

    def test_from_env(self):
        path = os.path.join(self.tmp, 'config.json')
        with open(path, 'w') as f:
            json.dump({'bench': {'pairs': 50}}, f)
        with mock.patch.dict(os.environ, {'TREEMBED_CONFIG': path}):
            assert load_config() == {'bench': {'pairs': 50}}
        # cached after the first read
        assert load_config() == {'bench': {'pairs': 50}}

    def test_missing(self):
        assert load_config(os.path.join(self.tmp, 'none.json')) == {}


class TestService(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.oracle = build_oracle(gen_grid([6, 6]), 3, seed=4)

    def setUp(self):
        for patcher in (mock.patch('treembed._decorators.load_config', return_value=CONFIG),
                        mock.patch('treembed._decorators.time')):
            patcher.start()
            self.addCleanup(patcher.stop)
        self.client = create_app(self.oracle).test_client()

    def test_login_required(self):
        response = self.client.get('/')
        assert response.status_code == 401
        assert response.headers['WWW-Authenticate'] == 'Basic realm="treembed oracle"'

    def test_forbidden(self):
        assert self.client.get('/', headers=_auth('reader', 'nope')).status_code == 403
        assert self.client.get('/query?u=0&v=1', headers=_auth('ghost', 'password')).status_code == 403

    def test_index(self):
        response = self.client.get('/', headers=_auth('reader', 'password'))
        assert response.status_code == 200
        assert b'Distance oracle' in response.data

    def test_query(self):
        response = self.client.get('/query?u=0&v=35', headers=_auth('reader', 'password'))
        assert response.status_code == 200
        body = response.get_json()
        assert body == {'u': 0, 'v': 35, 'distance': self.oracle.query(0, 35), 'trees': 3}

    def test_query_errors(self):
        headers = _auth('reader', 'password')
        assert self.client.get('/query?u=0&v=x', headers=headers).status_code == 400
        response = self.client.get('/query?u=0&v=99', headers=headers)
        assert response.status_code == 400
        assert 'error' in response.get_json()

    def test_batch(self):
        headers = _auth('reader', 'password')
        response = self.client.post('/query', json=[[0, 1], [2, 30]], headers=headers)
        assert [a['distance'] for a in response.get_json()] == [self.oracle.query(0, 1), self.oracle.query(2, 30)]
        assert self.client.post('/query', json={'u': 0}, headers=headers).status_code == 400
        assert self.client.post('/query', json=[[0, 1, 2]], headers=headers).status_code == 400

    def test_lazy_loader(self):
        loader = mock.Mock(return_value=None)
        client = create_app(loader).test_client()
        assert client.get('/', headers=_auth('reader', 'password')).status_code == 404
        loader.return_value = self.oracle
        assert client.get('/query?u=1&v=2', headers=_auth('reader', 'password')).status_code == 200
