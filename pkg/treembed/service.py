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

import logging

from flask import Flask, abort, jsonify, request

from ._decorators import basic_auth
from .exceptions import ArgumentError

log = logging.getLogger(__name__)


def _vertex(value, name):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ArgumentError('{0} must be an integer vertex id, got {1!r}'.format(name, value))


def _answer(oracle, u, v):
    return {'u': u, 'v': v, 'distance': oracle.query(u, v), 'trees': oracle.k}


def create_app(oracle):
    """
    Flask app answering distance queries from a loaded oracle.

    :param oracle: DistanceOracle, or a callable returning one (lazy load)
    """
    app = Flask(__name__)
    loader = oracle if callable(oracle) else (lambda: oracle)

    def get_oracle():
        o = loader()
        if o is None:
            abort(404)
        return o

    @app.errorhandler(ArgumentError)
    def bad_argument(e):
        return jsonify({'error': str(e)}), 400

    @app.route('/')
    @basic_auth()
    def root():
        o = get_oracle()
        if o.empty():
            return 'Nothing to see here yet, the oracle covers no vertices.'
        return o.to_html()

    @app.route('/query', methods=['GET'])
    @basic_auth()
    def query_get():
        o = get_oracle()
        u = _vertex(request.args.get('u'), 'u')
        v = _vertex(request.args.get('v'), 'v')
        return jsonify(_answer(o, u, v))

    @app.route('/query', methods=['POST'])
    @basic_auth()
    def query_post():
        o = get_oracle()
        pairs = request.get_json(silent=True)
        if not isinstance(pairs, list):
            raise ArgumentError('expected a JSON list of [u, v] pairs')
        answers = []
        for pair in pairs:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ArgumentError('each pair must be [u, v], got {0!r}'.format(pair))
            answers.append(_answer(o, _vertex(pair[0], 'u'), _vertex(pair[1], 'v')))
        log.debug('answered %d queries', len(answers))
        return jsonify(answers)

    return app
