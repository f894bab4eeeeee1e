# treembed, probabilistic tree embeddings and distance oracles
# Copyright (C) 2026  treembed authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import functools
import hashlib
import hmac
import json
import logging
import os
import random
import time

from flask import Response, request

log = logging.getLogger(__name__)

CONFIG_ENV = 'TREEMBED_CONFIG'
REALM = 'treembed oracle'
FAILED_LOGIN_DELAY = 2.0

_config = None


def load_config(path=None):
    """
    Parsed config.json, read once. A missing file yields an empty config.
    """
    global _config
    if path is None and _config is not None:
        return _config
    path = path or os.environ.get(CONFIG_ENV, 'config.json')
    try:
        with open(path) as data_file:
            config = json.load(data_file)
    except FileNotFoundError:
        log.debug('no config at %s', path)
        config = {}
    _config = config
    return config


def reset_config():
    global _config
    _config = None


def account_by_name():
    return {account['username']: account for account in load_config().get('accounts', [])}


def bench_defaults():
    return dict(load_config().get('bench', {}))


def password_digest(password):
    """
    sha1 hex digest, the form passwords take in the ``accounts`` of config.json.
    """
    return hashlib.sha1(password.encode('utf-8')).hexdigest()


def authenticate(username, password, roles=None):
    """
    :return: the matching account, or None when the password is wrong or
        the account lacks one of ``roles``
    """
    account = account_by_name().get(username)
    digest = password_digest(password).encode('ascii')
    if account is None or not hmac.compare_digest(account.get('password', '').encode('utf-8'), digest):
        log.info('rejected credentials for %r', username)
        return None
    missing = set(roles or ()) - set(account.get('roles', ()))
    if missing:
        log.info('account %r lacks roles %s', username, ', '.join(sorted(missing)))
        return None
    return account


def basic_auth(required_roles=None):
    """
    Guard an oracle route with HTTP basic auth. Missing credentials get a
    401 challenge, rejected ones a 403 after a random delay.
    """
    def decorator(view):
        @functools.wraps(view)
        def guarded(*args, **kwargs):
            auth = request.authorization
            if auth is None or not auth.username or not auth.password:
                return Response('Credentials required for oracle queries', 401,
                                {'WWW-Authenticate': 'Basic realm="{0}"'.format(REALM)})
            if authenticate(auth.username, auth.password, required_roles) is None:
                time.sleep(random.uniform(0, FAILED_LOGIN_DELAY))
                return Response('Forbidden', 403)
            return view(*args, **kwargs)
        return guarded
    return decorator
