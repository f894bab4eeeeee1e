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
Leveled bucket queue and the quarter-preserving approximate SSSP built on it.

Buckets are the nodes of an infinite in-order binary tree over the
non-negative integers: position ``x > 0`` lives at level ``tz(x) + 1`` where
``tz`` counts trailing zero bits, so level-``r`` buckets are ``2**r`` apart
and level-1 buckets sit on the odd numbers. Bit ``i`` of the current
position says whether its level-``i`` ancestor is a right (1) or left (0)
child; that bit string is the path string. Positions that are multiples of
``2**levels`` form the apex level ``levels + 1``; the source starts there at
position 0.
"""

import logging
import math
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import ArgumentError, ContractViolation, StructuralError
from .graph import INF, Graph

log = logging.getLogger(__name__)

ALPHA = Fraction(1, 4)


def levels_for(n, k):
    """
    ``ceil((1 + k) * log2(n))``, computed exactly.
    """
    return max(1, (n ** (1 + k) - 1).bit_length())


def weight_exponent(n, max_weight):
    """
    Smallest ``k >= 1`` with ``max_weight <= n**k``.
    """
    if n < 2:
        return 1
    k, bound = 1, n
    while bound < max_weight:
        bound *= n
        k += 1
    return k


def exponent_of(weight):
    """
    ``floor(log2(weight + 1))``; 0 only for zero-weight edges.
    """
    return (weight + 1).bit_length() - 1


def level_of(position, levels):
    if position == 0:
        return levels + 1
    return min(levels + 1, (position & -position).bit_length())


def frontier(level, position):
    """
    First bucket of ``level`` strictly after ``position``.
    """
    half = 1 << (level - 1)
    x = ((position >> level) << level) + half
    if x <= position:
        x += 1 << level
    return x


def path_bits(position, levels):
    return ''.join(str((position >> i) & 1) for i in range(1, levels + 1))


def find_insert_level(b, r, path):
    """
    Choose the frontier level for an edge of rounded exponent ``r`` when the
    bucket being drained sits at level ``b``.

    :param path: path string, character ``i - 1`` holding the bit of level ``i``
    :return: a level in ``[1, len(path) + 1]``; its frontier bucket lies
        between ``2**(r-1)`` and ``2**r - 1`` ahead of the current position
    :raises StructuralError: if ``r`` is outside ``[1, len(path)]``
    """
    position = sum(1 << i for i, c in enumerate(path, start=1) if c == '1')
    return insert_level(b, r, position, len(path))[0]


def insert_level(b, r, position, levels):
    """
    :func:`find_insert_level` reading the path bits straight from ``position``.

    :return: (level, number of path bits inspected)
    """
    if not 1 <= r <= levels:
        raise StructuralError('edge exponent {0} outside levels 1..{1}'.format(r, levels))

    def bit(i):
        return i <= levels and (position >> i) & 1 == 1

    if b > r:
        return r, 0
    if b < r and bit(r - 1):
        return r, 1
    read = 1 if b == r else 2
    if not bit(r):
        return r + 1, read
    # parent of the lowest left-child ancestor above ``r``; an all-right
    # spine climbs to the apex
    for j in range(r + 1, levels + 1):
        if not bit(j):
            return j + 1, read + j - r
    return levels + 1, read + levels - r


class _Bucket(object):
    __slots__ = ('position', 'items')

    def __init__(self, position):
        self.position = position
        self.items = OrderedDict()


class BucketTree(object):
    """
    Monotone priority queue with one live bucket per level.

    Each vertex sits in exactly one bucket and its bucket position is its
    tentative distance. Buckets drain first-in first-out.
    """

    def __init__(self, n, k, low=1):
        if n < 1 or k < 1:
            raise ArgumentError('bucket tree needs n >= 1 and k >= 1, got n={0} k={1}'.format(n, k))
        self.n = n
        self.k = k
        self.levels = levels_for(n, k)
        if not 1 <= low <= self.levels:
            raise ArgumentError('lowest level {0} outside 1..{1}'.format(low, self.levels))
        # levels below ``low`` never receive an insertion
        self.low = low
        self.current_distance = 0
        self.counters = Counter()
        self._buckets = {}
        self._level_of_vertex = {}

    def __len__(self):
        return len(self._level_of_vertex)

    def __contains__(self, vertex):
        return vertex in self._level_of_vertex

    @property
    def current_level(self):
        return level_of(self.current_distance, self.levels)

    @property
    def path_string(self):
        return path_bits(self.current_distance, self.levels)

    @property
    def active_levels(self):
        return sorted(self._buckets)

    def active_bucket(self, level):
        """
        :return: list of (vertex, tentative distance) in the live bucket of ``level``
        """
        bucket = self._buckets.get(level)
        if bucket is None:
            return []
        return [(v, bucket.position) for v in bucket.items]

    def tentative(self, vertex):
        level = self._level_of_vertex.get(vertex)
        return None if level is None else self._buckets[level].position

    def decrease_key(self, vertex, weight, base=None):
        """
        Relax an edge of ``weight`` from the bucket being drained into ``vertex``.

        :param base: distance of the relaxing vertex; must be the current distance
        :return: the new tentative distance, or None if it would not decrease
        :raises ContractViolation: if the relaxation starts behind or ahead of
            the bucket being drained
        """
        c = self.current_distance
        if base is not None and base != c:
            raise ContractViolation('relaxation from distance {0} while draining {1}'.format(base, c))
        if weight < 0:
            raise ArgumentError('negative weight {0}'.format(weight))
        if weight == 0:
            level, target = self.current_level, c
        else:
            r = exponent_of(weight)
            if r < self.low:
                raise StructuralError('edge weight {0} below the lowest level {1}'.format(weight, self.low))
            level, bits = insert_level(self.current_level, r, c, self.levels)
            self.counters['bits_read'] += bits
            target = frontier(level, c)
            offset = target - c
            assert 4 * offset >= weight and offset <= weight, (weight, offset)
            if target > (1 << self.levels):
                raise StructuralError('distance {0} beyond the range of {1} levels'.format(target, self.levels))
        old = self._level_of_vertex.get(vertex)
        if old is not None:
            if self._buckets[old].position <= target:
                return None
            self._remove(vertex, old)
        self._add(vertex, level, target)
        self.counters['decrease_key'] += 1
        return target

    def extract_min(self):
        """
        :return: (vertex, distance) from the current bucket, advancing to the
            nearest live bucket when it runs dry; None once empty
        """
        bucket = self._buckets.get(self.current_level)
        if bucket is None or bucket.position != self.current_distance:
            if not self._buckets:
                return None
            bucket = min(self._buckets.values(), key=lambda bk: bk.position)
            self.current_distance = bucket.position
            self.counters['advance'] += 1
        vertex, _ = bucket.items.popitem(last=False)
        level = self._level_of_vertex.pop(vertex)
        if not bucket.items:
            del self._buckets[level]
        self.counters['extract_min'] += 1
        return vertex, bucket.position

    def _add(self, vertex, level, position):
        bucket = self._buckets.get(level)
        if bucket is None:
            bucket = self._buckets[level] = _Bucket(position)
        elif bucket.position != position:
            raise StructuralError('level {0} already holds bucket {1}, not {2}'.format(
                level, bucket.position, position))
        bucket.items[vertex] = None
        self._level_of_vertex[vertex] = level

    def _remove(self, vertex, level):
        bucket = self._buckets[level]
        del bucket.items[vertex]
        del self._level_of_vertex[vertex]
        if not bucket.items:
            del self._buckets[level]


def bucket_tree_new(n, k):
    return BucketTree(n, k)


@dataclass(frozen=True)
class ApproxDistances:
    source: int
    d: tuple
    visit_order: tuple
    alpha: Fraction = ALPHA
    counters: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, v):
        return self.d[v]


def _adjacency(graph_or_adjacency):
    if isinstance(graph_or_adjacency, Graph):
        return graph_or_adjacency.adjacency
    return graph_or_adjacency


def approx_sssp(adjacency, s, k=None, allow_zero=False):
    """
    Dijkstra's loop with a BucketTree for the queue.

    Every reported distance lies in ``[d_G / 4, d_G]`` and extraction order
    is nondecreasing in it.

    :param adjacency: a Graph, or per-vertex lists of (neighbor, weight);
        directed lists are accepted
    :param k: weight exponent; derived from the largest weight when omitted
    :param allow_zero: accept zero-weight edges (reweighted residual graphs)
    """
    adjacency = _adjacency(adjacency)
    n = len(adjacency)
    if not 0 <= s < n:
        raise ArgumentError('source {0} out of range for n={1}'.format(s, n))
    low = 0 if allow_zero else 1
    max_weight = 1
    for row in adjacency:
        for _, w in row:
            if w < low:
                raise ArgumentError('edge weight {0} below {1}'.format(w, low))
            max_weight = max(max_weight, w)
    if k is None:
        k = weight_exponent(n, max_weight)
    elif n > 1 and max_weight > n ** k:
        raise ArgumentError('edge weight {0} exceeds n**k = {1}'.format(max_weight, n ** k))
    tree = BucketTree(max(n, 2), k)
    d = [INF] * n
    order = []
    tree.decrease_key(s, 0)
    while True:
        item = tree.extract_min()
        if item is None:
            break
        v, dv = item
        d[v] = dv
        order.append(v)
        for u, w in adjacency[v]:
            if d[u] == INF:
                tree.decrease_key(u, w)
    return ApproxDistances(s, tuple(d), tuple(order), ALPHA, dict(tree.counters))


def gabow_rounds(eps):
    """
    Smallest ``i`` with ``(3/4)**i <= eps``.
    """
    if not 0 < eps < 1:
        raise ArgumentError('eps must lie in (0, 1), got {0}'.format(eps))
    target = Fraction(eps)
    rounds, residual = 1, 1 - ALPHA
    while residual > target:
        residual *= 1 - ALPHA
        rounds += 1
    return rounds


def iter_gabow_rounds(g, s, rounds):
    """
    Yield the running sum of per-round distances after each round.

    Round ``j`` reweights edge ``u -> v`` to ``w + P(u) - P(v)`` where ``P`` is
    the running sum so far; those weights stay non-negative.
    """
    total = None
    reachable = None
    for j in range(rounds):
        adjacency = []
        for u in range(g.n):
            row = []
            if reachable is None or reachable[u]:
                for v, w in g.adjacency[u]:
                    if reachable is None:
                        row.append((v, w))
                    elif reachable[v]:
                        residual = w + total[u] - total[v]
                        if residual < 0:
                            raise ContractViolation('negative residual weight on ({0}, {1})'.format(u, v))
                        row.append((v, residual))
            adjacency.append(row)
        result = approx_sssp(adjacency, s, allow_zero=True)
        if total is None:
            total = list(result.d)
            reachable = [x != INF for x in total]
        else:
            total = [t + x if r else INF for t, x, r in zip(total, result.d, reachable)]
        log.debug('gabow round %d/%d from %d done', j + 1, rounds, s)
        yield tuple(total)


def refine_gabow(g, s, eps):
    """
    ``(1 - eps)``-approximate distances from ``s`` by repeated approximate SSSP.

    :return: tuple of per-vertex distance sums, INF for unreachable vertices
    """
    rounds = gabow_rounds(eps)
    total = None
    for total in iter_gabow_rounds(g, s, rounds):
        pass
    return total
