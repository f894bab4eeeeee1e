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

"""
Graph carrier, experiment-suite generators, graph files, seeded permutations
and the exact Dijkstra reference.
"""

import hashlib
import heapq
import logging
import math
from collections import deque
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .exceptions import ArgumentError, GraphFormatError

log = logging.getLogger(__name__)

INF = math.inf
MAX_WEIGHT = 10 ** 9
MAX_GRID_VERTICES = 10 ** 7

# float64 holds every integer below this exactly
_EXACT_FLOAT_LIMIT = 2 ** 53


class Graph(object):
    """
    Undirected graph with positive integer edge weights.

    Parallel edges are collapsed to their minimum weight; edges are kept as
    ``(u, v, w)`` with ``u < v`` sorted by ``(u, v)``.
    """

    __slots__ = ('n', 'edges', 'adjacency', '_digest')

    def __init__(self, n, edges=()):
        if n < 1:
            raise ArgumentError('a graph needs at least one vertex, got n={0}'.format(n))
        best = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), int(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ArgumentError('edge ({0}, {1}) out of range for n={2}'.format(u, v, n))
            if u == v:
                raise ArgumentError('self-loop at vertex {0}'.format(u))
            if w < 1:
                raise ArgumentError('edge ({0}, {1}) has weight {2} < 1'.format(u, v, w))
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        self.n = n
        self.edges = tuple((u, v, w) for (u, v), w in sorted(best.items()))
        adjacency = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        self.adjacency = tuple(tuple(a) for a in adjacency)
        self._digest = None

    @property
    def m(self):
        return len(self.edges)

    @property
    def max_weight(self):
        return max((w for _, _, w in self.edges), default=1)

    def degree(self, v):
        return len(self.adjacency[v])

    def is_unweighted(self):
        return all(w == 1 for _, _, w in self.edges)

    def is_connected(self):
        return all(h != INF for h in bfs_hops(self, 0))

    def digest(self):
        """
        :return: sha1 hex digest of the canonical graph file text
        """
        if self._digest is None:
            self._digest = hashlib.sha1(write_graph(self).encode('utf-8')).hexdigest()
        return self._digest

    def to_networkx(self):
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_weighted_edges_from(self.edges)
        return h

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return 'Graph(n={0}, m={1})'.format(self.n, self.m)


@dataclass(frozen=True)
class Permutation:
    """
    Bijection between vertices and ranks ``1..n``; rank 1 is the highest priority.

    ``pi[v]`` is the rank of vertex ``v`` and ``inv[r - 1]`` the vertex of rank ``r``.
    """
    pi: tuple
    inv: tuple

    @classmethod
    def from_order(cls, order):
        """
        :param order: vertices listed from rank 1 to rank n
        """
        order = tuple(int(v) for v in order)
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ArgumentError('order is not a permutation of 0..{0}'.format(n - 1))
        pi = [0] * n
        for r, v in enumerate(order, start=1):
            pi[v] = r
        return cls(tuple(pi), order)

    @classmethod
    def from_ranks(cls, ranks):
        order = [None] * len(ranks)
        for v, r in enumerate(ranks):
            if not 1 <= r <= len(ranks) or order[r - 1] is not None:
                raise ArgumentError('ranks must be exactly 1..{0}'.format(len(ranks)))
            order[r - 1] = v
        return cls.from_order(order)

    @property
    def n(self):
        return len(self.pi)

    def rank(self, v):
        return self.pi[v]

    def vertex(self, rank):
        return self.inv[rank - 1]


@dataclass(frozen=True)
class ExactDistances:
    source: int
    d: tuple

    def __getitem__(self, v):
        return self.d[v]


def _rng(seed, *spawn_key):
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(spawn_key)))


def _random_weights(count, weighted, seed):
    if not weighted:
        return [1] * count
    return [int(w) for w in _rng(seed, 1).integers(1, 1001, size=count)]


def _from_networkx(h, weighted, seed):
    h = nx.convert_node_labels_to_integers(h, ordering='sorted')
    pairs = sorted((min(u, v), max(u, v)) for u, v in h.edges())
    weights = _random_weights(len(pairs), weighted, seed)
    return Graph(h.number_of_nodes(), [(u, v, w) for (u, v), w in zip(pairs, weights)])


def decode_lines(data, error):
    """
    Decode UTF-8 file contents; undecodable bytes raise ``error(line, reason)``.
    """
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as e:
        raise error(data.count(b'\n', 0, e.start) + 1, 'not valid UTF-8 text')


def parse_graph(text):
    """
    Parse the text graph format: a ``n m`` header, then ``m`` lines ``u v w``.
    Lines starting with '#' and blank lines are ignored.

    :param text: graph file contents, str or UTF-8 bytes
    :return: Graph with duplicate edges collapsed to their minimum weight
    :raises GraphFormatError: naming the offending 1-based line
    """
    if isinstance(text, bytes):
        text = decode_lines(text, GraphFormatError)
    header = None
    edges = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise GraphFormatError(lineno, 'expected integers, got {0!r}'.format(line))
        if header is None:
            if len(values) != 2 or values[0] < 1 or values[1] < 0:
                raise GraphFormatError(lineno, 'header must be "n m" with n >= 1, m >= 0')
            header = values
            continue
        if len(values) != 3:
            raise GraphFormatError(lineno, 'edge line must be "u v w"')
        u, v, w = values
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, 'vertex id out of range for n={0}'.format(n))
        if u == v:
            raise GraphFormatError(lineno, 'self-loop at vertex {0}'.format(u))
        if w < 1:
            raise GraphFormatError(lineno, 'weight {0} < 1'.format(w))
        if len(edges) == header[1]:
            raise GraphFormatError(lineno, 'more than {0} edge lines'.format(header[1]))
        edges.append((u, v, w))
    if header is None:
        raise GraphFormatError(max(lineno, 1), 'missing "n m" header')
    if len(edges) != header[1]:
        raise GraphFormatError(lineno, 'expected {0} edge lines, found {1}'.format(header[1], len(edges)))
    return Graph(header[0], edges)


def write_graph(g, comment=None):
    """
    :param comment: optional text emitted as leading '#' lines
    :return: graph file text with edges sorted by (u, v)
    """
    lines = []
    if comment:
        lines.extend('# ' + c for c in comment.splitlines())
    lines.append('{0} {1}'.format(g.n, g.m))
    lines.extend('{0} {1} {2}'.format(u, v, w) for u, v, w in g.edges)
    return '\n'.join(lines) + '\n'


def gen_grid(dims, weighted=False, seed=0):
    dims = [int(d) for d in dims]
    if not 1 <= len(dims) <= 3:
        raise ArgumentError('grids have 1 to 3 dimensions, got {0}'.format(len(dims)))
    if any(d < 1 for d in dims):
        raise ArgumentError('grid extents must be >= 1, got {0}'.format(dims))
    if math.prod(dims) > MAX_GRID_VERTICES:
        raise ArgumentError('grid {0} exceeds {1} vertices'.format(dims, MAX_GRID_VERTICES))
    return _from_networkx(nx.grid_graph(dim=dims), weighted, seed)


def gen_power_law(n, m, seed=0, weighted=False):
    """
    Preferential attachment: each new vertex attaches ``ceil(m / n)`` edges
    to existing vertices chosen proportionally to their degree. The edge
    count lands within ``n`` of ``m``.
    """
    if n < 1:
        raise ArgumentError('n must be >= 1')
    if m < n - 1:
        raise ArgumentError('m={0} cannot connect n={1} vertices'.format(m, n))
    if n == 1:
        return Graph(1)
    arity = max(1, min(-(-m // n), n - 1))
    return _from_networkx(nx.barabasi_albert_graph(n, arity, seed=int(seed)), weighted, seed)


def gen_slim(n, m, diameter, seed=0, weighted=False):
    """
    A backbone path ``0..diameter`` with the remaining vertices hung off
    random backbone vertices, then random chords inside short consecutive
    backbone segments so that the hop-diameter stays close to ``diameter``.

    The segment length starts at 2 and grows until the segments can hold a
    quarter more chords than are needed.
    """
    if n < 1 or m < n - 1:
        raise ArgumentError('m={0} cannot connect n={1} vertices'.format(m, n))
    if not 0 <= diameter < n or (n > 1 and diameter < 1):
        raise ArgumentError('diameter must lie in [1, n) for n > 1, got {0}'.format(diameter))
    if n == 1:
        return Graph(1)
    rng = _rng(seed)
    edges = set((i, i + 1) for i in range(diameter))
    anchor = list(range(diameter + 1))
    for v in range(diameter + 1, n):
        b = int(rng.integers(0, diameter + 1))
        anchor.append(b)
        edges.add((b, v))
    needed = m - (n - 1)
    if needed > 0:
        _add_segment_chords(n, diameter, anchor, edges, needed, rng)
    pairs = sorted(edges)
    weights = _random_weights(len(pairs), weighted, seed)
    return Graph(n, [(u, v, w) for (u, v), w in zip(pairs, weights)])


def _add_segment_chords(n, diameter, anchor, edges, needed, rng):
    length = 2
    while True:
        members = {}
        for v in range(n):
            members.setdefault(anchor[v] // length, []).append(v)
        capacity = sum(len(ms) * (len(ms) - 1) // 2 for ms in members.values()) - len(edges)
        capacity += len(members) - 1  # backbone links between segments are not chords
        if capacity >= 1.25 * needed:
            break
        if length > diameter:
            raise ArgumentError('cannot place {0} extra edges with diameter {1}'.format(needed, diameter))
        length += 1
    log.debug('slim graph: segment length %d for %d chords', length, needed)
    attempts = 0
    budget = 50 * needed + 1000
    while needed:
        attempts += 1
        if attempts > budget:
            raise ArgumentError('gave up placing chords after {0} attempts'.format(budget))
        u = int(rng.integers(0, n))
        segment = members[anchor[u] // length]
        v = segment[int(rng.integers(0, len(segment)))]
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in edges:
            continue
        edges.add(key)
        needed -= 1


def random_permutation(n, seed, *spawn_key):
    """
    Uniform permutation from a seeded generator (Fisher-Yates).

    :param spawn_key: extra stream coordinates, e.g. the tree index
    """
    if n < 1:
        raise ArgumentError('cannot permute {0} vertices'.format(n))
    return Permutation.from_order(_rng(seed, *spawn_key).permutation(n))


def dijkstra_exact(g, s):
    if not 0 <= s < g.n:
        raise ArgumentError('source {0} out of range for n={1}'.format(s, g.n))
    d = [INF] * g.n
    d[s] = 0
    heap = [(0, s)]
    adjacency = g.adjacency
    while heap:
        du, u = heapq.heappop(heap)
        if du > d[u]:
            continue
        for v, w in adjacency[u]:
            nd = du + w
            if nd < d[v]:
                d[v] = nd
                heapq.heappush(heap, (nd, v))
    return ExactDistances(s, tuple(d))


def exact_distances_many(g, sources, chunk=256):
    """
    Exact distances from many sources at once.

    :return: dict source -> ExactDistances
    """
    sources = sorted(set(int(s) for s in sources))
    if g.n * g.max_weight >= _EXACT_FLOAT_LIMIT:
        return {s: dijkstra_exact(g, s) for s in sources}
    rows = [u for u, _, _ in g.edges]
    cols = [v for _, v, _ in g.edges]
    data = [float(w) for _, _, w in g.edges]
    matrix = csr_matrix((data, (rows, cols)), shape=(g.n, g.n))
    out = {}
    for start in range(0, len(sources), chunk):
        block = sources[start:start + chunk]
        dist = _csgraph_dijkstra(matrix, directed=False, indices=block)
        for s, row in zip(block, dist):
            out[s] = ExactDistances(s, tuple(INF if math.isinf(x) else int(x) for x in row))
    return out


def bfs_hops(g, s):
    hops = [INF] * g.n
    hops[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v, _ in g.adjacency[u]:
            if hops[v] == INF:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def hop_diameter_estimate(g, start=0):
    """
    Double-sweep lower bound on the hop diameter of ``start``'s component.
    """
    def farthest(s):
        hops = bfs_hops(g, s)
        return max((h, v) for v, h in enumerate(hops) if h != INF)

    _, far = farthest(start)
    h, _ = farthest(far)
    return h


SUITE = {
    'grid1d': lambda scale, w, seed: gen_grid([10000 // scale], w, seed),
    'grid2d': lambda scale, w, seed: gen_grid([max(1, int(100 / math.sqrt(scale)))] * 2, w, seed),
    'grid3d': lambda scale, w, seed: gen_grid([max(1, int(22 / scale ** (1 / 3)))] * 3, w, seed),
    'slim': lambda scale, w, seed: gen_slim(10000 // scale, 100000 // scale, max(1, 1000 // scale), seed, w),
    'powerlaw': lambda scale, w, seed: gen_power_law(10000 // scale, 100000 // scale, seed, w),
}


def suite_graph(name, weighted=False, seed=0, scale=1):
    """
    One of the five experiment families at full size, or shrunk by ``scale``.
    """
    if name not in SUITE:
        raise ArgumentError('unknown graph family {0!r}, expected one of {1}'.format(name, sorted(SUITE)))
    if scale < 1:
        raise ArgumentError('scale must be >= 1')
    g = SUITE[name](int(scale), weighted, seed)
    log.info('generated %s (%s): n=%d m=%d', name, 'weighted' if weighted else 'unweighted', g.n, g.m)
    return g


def gen_random(n, m, seed=0, max_weight=1):
    """
    Connected random graph: a random recursive spanning tree plus
    ``m - (n - 1)`` uniformly placed extra edges, weights uniform in
    ``[1, max_weight]``.
    """
    if n < 1 or m < n - 1:
        raise ArgumentError('m={0} cannot connect n={1} vertices'.format(m, n))
    if not 1 <= max_weight <= MAX_WEIGHT:
        raise ArgumentError('max_weight must lie in [1, {0}]'.format(MAX_WEIGHT))
    rng = _rng(seed, 2)
    pairs = set()
    for v in range(1, n):
        pairs.add((int(rng.integers(0, v)), v))
    extra = nx.gnm_random_graph(n, min(m - (n - 1), n * (n - 1) // 2), seed=int(seed) % (1 << 32))
    pairs.update((min(u, v), max(u, v)) for u, v in extra.edges())
    pairs = sorted(pairs)
    weights = rng.integers(1, max_weight + 1, size=len(pairs))
    return Graph(n, [(u, v, int(w)) for (u, v), w in zip(pairs, weights)])
