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
FRT trees from dominance sequences.

Scales are ``beta * 2**(delta - i)`` for levels ``i = 0..delta``. ``beta``
is kept as an integer numerator over ``2**52`` so every radius comparison
is exact integer arithmetic.

Tree edges are weighted on the root side: leaving level ``i`` towards
level ``i + 1`` costs ``beta * 2**(delta - i)``. Two leaves whose deepest
common node ends at level ``b`` are therefore ``4 * beta * (2**(delta - b) - 1)``
apart. The leaf level ``delta`` belongs to the vertex alone, so distinct
vertices always get distinct leaves.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ArgumentError, ContractViolation, StructuralError

log = logging.getLogger(__name__)

BETA_BITS = 52
BETA_ONE = 1 << BETA_BITS

LEVEL = 'level'
ACTUAL = 'actual'
MODES = (LEVEL, ACTUAL)


def beta_from_unit(u):
    """
    :param u: a draw from [0, 1)
    :return: numerator of ``beta = 2**u`` over ``2**52``
    """
    return min(2 * BETA_ONE, int(math.ldexp(2.0 ** u, BETA_BITS)))


def sample_beta(rng):
    """
    Draw ``beta`` in [1, 2) with density ``1 / (x ln 2)``.

    :param rng: numpy Generator
    :return: fixed-point numerator, see :func:`beta_value`
    """
    return beta_from_unit(float(rng.random()))


def beta_value(num):
    return num / BETA_ONE


def choose_delta(max_distance):
    """
    ``ceil(log2(max_distance))``, at least 1.
    """
    return max(1, (int(max_distance) - 1).bit_length())


def covers(dist, beta_num, delta, i):
    """
    Exact test of ``dist <= beta * 2**(delta - i)``.
    """
    return dist << (BETA_BITS + i) <= beta_num << delta


def top_level(dist, beta_num, delta):
    """
    Largest level ``i`` in ``[0, delta]`` whose radius still covers ``dist``.
    """
    if not covers(dist, beta_num, delta, 0):
        raise ContractViolation('distance {0} exceeds beta * 2**{1}; delta too small'.format(dist, delta))
    lo, hi = 0, delta
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if covers(dist, beta_num, delta, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class Cps:
    """
    Compressed partition sequence: ``(dominator, highest level it covers)``
    pairs with strictly increasing levels, ending at ``(vertex, delta)``.
    """
    vertex: int
    entries: tuple
    beta_num: int
    delta: int

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def expand(self):
        """
        :return: the partition sequence, one label per level ``0..delta``
        """
        sigma = []
        for p, level in self.entries:
            sigma.extend([p] * (level + 1 - len(sigma)))
        return sigma


def domseq_to_cps(seq, beta_num, delta, vertex=None):
    """
    Keep, for each level, the highest-priority dominator whose distance is
    within that level's radius.

    :param seq: one vertex's dominance list of (dominator, distance)
    """
    if vertex is None:
        vertex = seq[-1][0]
    entries = []
    previous = -1
    for p, dist in seq:
        if dist == 0:
            level = delta
        else:
            if delta < 1:
                raise ContractViolation('delta must be >= 1 for sequences with positive distances')
            level = min(delta - 1, top_level(dist, beta_num, delta))
        if level > previous:
            entries.append((p, level))
            previous = level
    return Cps(vertex, tuple(entries), beta_num, delta)


def partition_sequence(distances, ranks, x, beta_num, delta):
    """
    Partition sequence of ``x`` straight from its definition.

    :param distances: distance from ``x`` to every vertex
    :param ranks: permutation ranks, 1 is the highest priority
    """
    sigma = []
    for i in range(delta):
        inside = [y for y, d in enumerate(distances) if d != math.inf and covers(d, beta_num, delta, i)]
        sigma.append(min(inside, key=lambda y: ranks[y]))
    sigma.append(x)
    return sigma


class FrtTree(object):
    """
    Compressed FRT tree.

    Node ``k`` carries its parent, dominator label, end level and the
    weight of the edge to its parent in units of ``beta``; node 0 is the
    root. Queries run between leaves only: the leaves are laid out in
    depth-first order and a sparse table over the shallowest node between
    consecutive leaves answers lowest-common-ancestor queries.
    """

    def __init__(self, parent, label, end, weight, leaf_of, beta_num, delta, mode=LEVEL,
                 ancestors=None, seed=None):
        if mode not in MODES:
            raise ArgumentError('unknown weight mode {0!r}'.format(mode))
        if mode == ACTUAL and ancestors is None:
            raise ArgumentError('actual mode needs per-leaf ancestor distances')
        self.parent = list(parent)
        self.label = list(label)
        self.end = list(end)
        self.weight = list(weight)
        self.leaf_of = list(leaf_of)
        self.beta_num = beta_num
        self.delta = delta
        self.mode = mode
        self.ancestors = [tuple(a) for a in ancestors] if ancestors is not None else None
        self.seed = seed
        self._finish()

    @property
    def n(self):
        return len(self.leaf_of)

    @property
    def beta(self):
        return beta_value(self.beta_num)

    def __len__(self):
        return len(self.parent)

    def _finish(self):
        size = len(self.parent)
        children = [[] for _ in range(size)]
        for k in range(1, size):
            children[self.parent[k]].append(k)
        vertex_at = {leaf: v for v, leaf in enumerate(self.leaf_of)}
        self.depth = [0] * size
        self.W = [0] * size
        self.W[0] = self.weight[0]
        self.leaf_rank = [0] * self.n
        # Euler walk; between consecutive leaves keep the shallowest node seen
        gaps = []
        shallowest = None
        seen_leaf = False
        stack = [(0, 0)]
        while stack:
            node, idx = stack.pop()
            if shallowest is None or self.depth[node] < self.depth[shallowest]:
                shallowest = node
            if idx == 0 and node in vertex_at:
                if seen_leaf:
                    gaps.append(shallowest)
                seen_leaf = True
                self.leaf_rank[vertex_at[node]] = len(gaps)
                shallowest = node
            if idx < len(children[node]):
                stack.append((node, idx + 1))
                child = children[node][idx]
                self.depth[child] = self.depth[node] + 1
                self.W[child] = self.W[node] + self.weight[child]
                stack.append((child, 0))
        self._gap_node = np.asarray(gaps, dtype=np.int64)
        self._gap_depth = np.asarray([self.depth[k] for k in gaps], dtype=np.int64)
        table = [np.arange(len(gaps), dtype=np.int64)]
        span = 1
        while 2 * span <= len(gaps):
            prev = table[-1]
            left = prev[:len(gaps) - 2 * span + 1]
            right = prev[span:span + len(left)]
            table.append(np.where(self._gap_depth[left] <= self._gap_depth[right], left, right))
            span *= 2
        self._table = table

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise ArgumentError('vertex {0} is not a leaf of a tree over {1} vertices'.format(v, self.n))

    def lca(self, u, v):
        """
        :return: node index of the lowest common ancestor of leaves ``u`` and ``v``
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return self.leaf_of[u]
        i, j = sorted((self.leaf_rank[u], self.leaf_rank[v]))
        j -= 1
        k = (j - i + 1).bit_length() - 1
        a = self._table[k][i]
        b = self._table[k][j - (1 << k) + 1]
        best = a if self._gap_depth[a] <= self._gap_depth[b] else b
        return int(self._gap_node[best])

    def units(self, u, v):
        """
        Level-mode distance in units of ``beta``.
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return 0
        return self.W[self.leaf_of[u]] + self.W[self.leaf_of[v]] - 2 * self.W[self.lca(u, v)]

    def distance(self, u, v):
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return 0
        if self.mode == ACTUAL:
            k = self.depth[self.lca(u, v)]
            return self.ancestors[u][k] + self.ancestors[v][k]
        return self.units(u, v) * self.beta_num / BETA_ONE

    def levels_of_leaves(self):
        return [self.end[leaf] for leaf in self.leaf_of]


def tree_distance(t, u, v):
    return t.distance(u, v)


def level_weight(delta, start, end):
    """
    Edge weight, in units of ``beta``, from a node ending at ``start`` to a
    child ending at ``end``.
    """
    return 2 * ((1 << (delta - start)) - (1 << (delta - end)))


class _Trie(object):

    def __init__(self):
        # node 0 is a sentinel above level 0
        self.parent = [-1]
        self.label = [None]
        self.end = [-1]
        self.children = [{}]

    def new(self, parent, label, end):
        self.parent.append(parent)
        self.label.append(label)
        self.end.append(end)
        self.children.append({})
        self.children[parent][label] = len(self.parent) - 1
        return len(self.parent) - 1

    def insert(self, entries):
        cur = 0
        seg = 0
        p, m = entries[0]
        while True:
            child = self.children[cur].get(p)
            if child is None:
                cur = self.new(cur, p, m)
                for p, m in entries[seg + 1:]:
                    cur = self.new(cur, p, m)
                return cur
            if m > self.end[child]:
                cur = child
                continue
            if m < self.end[child]:
                # split the edge at level m
                mid = self.new(cur, p, m)
                self.parent[child] = mid
                self.children[mid][p] = child
                child = mid
            cur = child
            seg += 1
            if seg == len(entries):
                return cur
            p, m = entries[seg]


def build_frt_tree(cps_all, mode=LEVEL, dist_map=None, seed=None):
    """
    Insert every compressed partition sequence into a Patricia trie keyed by
    dominator, splitting an edge where two sequences part mid-span.

    :param cps_all: one Cps per vertex, indexed by vertex
    :param dist_map: the DominanceSequence the sequences came from; needed
        in actual mode
    :raises ArgumentError: on mixed (beta, delta), or when the sequences do
        not share a root dominator (disconnected input)
    """
    cps_all = list(cps_all)
    if not cps_all:
        raise ArgumentError('no sequences to build a tree from')
    beta_num, delta = cps_all[0].beta_num, cps_all[0].delta
    if any((c.beta_num, c.delta) != (beta_num, delta) for c in cps_all):
        raise ArgumentError('all sequences must share beta and delta')
    if mode == ACTUAL and dist_map is None:
        raise ArgumentError('actual mode needs the dominance distance map')
    trie = _Trie()
    leaves = []
    for x, cps in enumerate(cps_all):
        if cps.vertex != x or cps.entries[-1] != (x, delta):
            raise ContractViolation('sequence {0} does not end at its own leaf'.format(x))
        leaves.append(trie.insert(cps.entries))
    if len(trie.children[0]) != 1:
        raise ArgumentError('sequences have {0} distinct roots; the graph must be connected'.format(
            len(trie.children[0])))
    if len(set(leaves)) != len(leaves):
        raise StructuralError('two vertices share a leaf')

    # renumber in creation order without the sentinel, parents first
    order = _topological(trie)
    index = {node: k for k, node in enumerate(order)}
    parent = [index.get(trie.parent[node], -1) for node in order]
    label = [trie.label[node] for node in order]
    end = [trie.end[node] for node in order]
    weight = [level_weight(delta, 0 if parent[k] < 0 else end[parent[k]], end[k]) for k in range(len(order))]
    leaf_of = [index[leaf] for leaf in leaves]

    ancestors = None
    if mode == ACTUAL:
        ancestors = []
        for x, leaf in enumerate(leaf_of):
            chain = []
            k = leaf
            while k >= 0:
                chain.append(dist_map.dist(label[k], x))
                k = parent[k]
            ancestors.append(tuple(reversed(chain)))
    tree = FrtTree(parent, label, end, weight, leaf_of, beta_num, delta, mode, ancestors, seed)
    log.debug('frt tree: %d nodes over %d leaves, delta=%d', len(tree), tree.n, delta)
    return tree


def _topological(trie):
    root = next(iter(trie.children[0].values()))
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(trie.children[node].values())
    return order


def build_cps_all(seqs, beta_num, delta=None):
    """
    :param seqs: a DominanceSequence
    :return: (list of Cps, delta)
    """
    if delta is None:
        delta = choose_delta(seqs.max_distance)
    return [domseq_to_cps(seq, beta_num, delta, x) for x, seq in enumerate(seqs)], delta


def expanded_tree_distance(cps_u, cps_v, mode=LEVEL, dist_map=None):
    """
    Distance read off the uncompressed level-by-level trie.
    """
    if cps_u.vertex == cps_v.vertex:
        return 0
    su, sv = cps_u.expand(), cps_v.expand()
    b = -1
    while b + 1 < len(su) and su[b + 1] == sv[b + 1]:
        b += 1
    if b < 0:
        raise ArgumentError('sequences share no root')
    if mode == ACTUAL:
        w = su[b]
        return dist_map.dist(w, cps_u.vertex) + dist_map.dist(w, cps_v.vertex)
    return 4 * ((1 << (cps_u.delta - b)) - 1) * cps_u.beta_num / BETA_ONE
