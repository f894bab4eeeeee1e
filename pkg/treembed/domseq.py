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
Dominance sequences (least-element lists).

Vertex ``p`` dominates ``x`` when no vertex of smaller rank lies at distance
``<= d(p, x)`` from ``x``. Each vertex's sequence lists its dominators by
increasing rank; stored distances strictly decrease and the list ends with
``(x, 0)``.
"""

import bisect
import heapq
import logging
from collections import Counter
from dataclasses import dataclass, field

from .bucket import BucketTree, approx_sssp
from .exceptions import ArgumentError, ContractViolation
from .graph import INF, dijkstra_exact

log = logging.getLogger(__name__)

EXACT = 'exact'
APPROX = 'approx'
MODES = (EXACT, APPROX)

# 4 from the bucket queue times 2 from the range decomposition
OVERESTIMATE = 8


class DominanceSequence(object):
    """
    Per-vertex dominator lists, plus the (dominator, vertex) -> distance map
    they define.
    """

    def __init__(self, lists, approximate=False, stats=None):
        self.lists = tuple(tuple(lst) for lst in lists)
        self.approximate = approximate
        self.stats = stats
        self._maps = None

    def __getitem__(self, x):
        return self.lists[x]

    def __len__(self):
        return len(self.lists)

    def __iter__(self):
        return iter(self.lists)

    def __eq__(self, other):
        return isinstance(other, DominanceSequence) and self.lists == other.lists

    def __hash__(self):
        return hash(self.lists)

    @property
    def mode(self):
        return APPROX if self.approximate else EXACT

    @property
    def total_size(self):
        return sum(len(lst) for lst in self.lists)

    @property
    def mean_length(self):
        return self.total_size / len(self.lists)

    @property
    def max_distance(self):
        return max((lst[0][1] for lst in self.lists if lst), default=0)

    def dist(self, p, x):
        """
        :return: stored distance of dominator ``p`` in ``x``'s list
        :raises KeyError: if ``p`` is not one of ``x``'s dominators
        """
        if self._maps is None:
            self._maps = [dict(lst) for lst in self.lists]
        return self._maps[x][p]

    def validate(self, pi):
        """
        Check the sequence shape against permutation ``pi``.

        :raises ContractViolation: on the first malformed list
        """
        for x, lst in enumerate(self.lists):
            if not lst or lst[-1] != (x, 0):
                raise ContractViolation('list of {0} does not end with ({0}, 0)'.format(x))
            for (p, dp), (q, dq) in zip(lst, lst[1:]):
                if not pi.rank(p) < pi.rank(q):
                    raise ContractViolation('ranks not increasing in list of {0}'.format(x))
                if not dp > dq:
                    raise ContractViolation('distances not decreasing in list of {0}'.format(x))

    def rows(self):
        """
        :return: iterable of (vertex, rank_in_list, dominator, stored_distance)
        """
        for x, lst in enumerate(self.lists):
            for j, (p, dp) in enumerate(lst):
                yield x, j, p, dp


def brute_force_domseq(g, pi):
    """
    Definitional construction from all-pairs exact distances; disconnected
    pairs never dominate.
    """
    order = pi.inv
    lists = []
    for x in range(g.n):
        dx = dijkstra_exact(g, x).d
        best = INF
        lst = []
        for p in order:
            if dx[p] < best:
                best = dx[p]
                lst.append((p, dx[p]))
        lists.append(lst)
    return DominanceSequence(lists)


def build_domseq_exact(g, pi):
    """
    Pruned Dijkstra from every vertex in rank order.

    ``best[v]`` holds the smallest distance from any earlier source and is
    never reset; a source only dominates, and only expands, vertices it
    reaches strictly closer than that.
    """
    n = g.n
    best = [INF] * n
    lists = [[] for _ in range(n)]
    stats = Counter()
    adjacency = g.adjacency
    for s in pi.inv:
        local = {s: 0}
        heap = [(0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            stats['pop'] += 1
            if du > local[u] or du >= best[u]:
                continue
            best[u] = du
            lists[u].append((s, du))
            for v, w in adjacency[u]:
                nd = du + w
                if nd < best[v] and nd < local.get(v, INF):
                    local[v] = nd
                    heapq.heappush(heap, (nd, v))
                    stats['push'] += 1
    log.debug('exact dominance sequences: %d entries, %d heap pops', sum(map(len, lists)), stats['pop'])
    return DominanceSequence(lists, stats=dict(stats))


class PriorityUnionFind(object):
    """
    Union by rank without path compression. Every link remembers the
    subproblem tag at which it was made, so the structure answers
    component queries for any past tag.
    """

    def __init__(self, n, ranks=None):
        self.n = n
        self.ranks = ranks
        self.parent = list(range(n))
        self.tag = [None] * n
        self.rank = [0] * n
        self.children = [[] for _ in range(n)]
        # per root: (tag, highest-priority member) after each merge into it
        self.best = [[(-1, v)] for v in range(n)]
        self.merges = []

    def find_root(self, v):
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def union(self, u, v, tag):
        ru, rv = self.find_root(u), self.find_root(v)
        if ru == rv:
            return False
        if self.rank[ru] < self.rank[rv]:
            ru, rv = rv, ru
        elif self.rank[ru] == self.rank[rv]:
            self.rank[ru] += 1
        self.parent[rv] = ru
        self.tag[rv] = tag
        self.children[ru].append((rv, tag))
        self.best[ru].append((tag, self._higher(self.best[ru][-1][1], self.best[rv][-1][1])))
        self.merges.append((rv, ru, tag))
        return True

    def _higher(self, a, b):
        if self.ranks is None:
            return min(a, b)
        return a if self.ranks[a] < self.ranks[b] else b

    def component_of(self, v, i):
        """
        Root of ``v``'s component once every link tagged ``<= i`` is in place.
        """
        while self.parent[v] != v and self.tag[v] <= i:
            v = self.parent[v]
        return v

    def component_members(self, root, i):
        members = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for child, tag in self.children[u]:
                if tag > i:
                    break
                members.append(child)
                stack.append(child)
        return members

    def priority_vertex(self, root, i):
        """
        Highest-priority member of the tag-``i`` component rooted at ``root``.
        """
        history = self.best[root]
        j = bisect.bisect_right(history, (i, self.n)) - 1
        return history[j][1]

    def depth(self, v):
        steps = 0
        while self.parent[v] != v:
            v = self.parent[v]
            steps += 1
        return steps


@dataclass(frozen=True)
class SubproblemPlan:
    """
    Edges sorted by weight with their tags: tag ``e`` means
    ``n**e <= w < n**(e + 1)``. Subproblem ``i`` sees tags ``i - 1`` and ``i``.
    """
    n: int
    edges: tuple
    tags: tuple
    gaps: tuple
    spans: dict = field(default_factory=dict)

    @property
    def indices(self):
        """
        Non-empty subproblems, largest first.
        """
        present = set()
        for e in self.spans:
            present.add(e)
            present.add(e + 1)
        return tuple(sorted(present, reverse=True))

    def window(self, i):
        lo = self.spans.get(i - 1, self.spans.get(i, (0, 0)))[0]
        hi = self.spans.get(i, self.spans.get(i - 1, (0, 0)))[1]
        return self.edges[lo:hi]


def build_priority_union_find(g, pi=None):
    """
    Scan the sorted edges once, tagging each by weight range with only
    comparisons and multiplications, and merge components per tag.

    :return: (PriorityUnionFind, SubproblemPlan)
    """
    n = g.n
    puf = PriorityUnionFind(n, pi.pi if pi is not None else None)
    edges = tuple(sorted(g.edges, key=lambda e: (e[2], e[0], e[1])))
    tags = []
    spans = {}
    gaps = []
    tag, upper = 0, n
    previous = None
    for idx, (u, v, w) in enumerate(edges):
        if previous is not None and w >= previous * n * n:
            gaps.append((previous, w))
        while w >= upper:
            upper *= n
            tag += 1
        tags.append(tag)
        lo, _ = spans.get(tag, (idx, idx))
        spans[tag] = (lo, idx + 1)
        puf.union(u, v, tag)
        previous = w
    if gaps:
        log.debug('weight gaps elided: %s', gaps)
    return puf, SubproblemPlan(n, edges, tuple(tags), tuple(gaps), spans)


def component_of(puf, v, i):
    return puf.component_of(v, i)


@dataclass
class ApproxBuildStats:
    subproblems: int = 0
    sources: int = 0
    decrease_key: int = 0
    extract_min: int = 0
    advance: int = 0
    anchored: int = 0
    rejected: int = 0
    bits_read: int = 0

    @property
    def ops(self):
        return self.decrease_key + self.extract_min

    def absorb(self, counters):
        self.decrease_key += counters.get('decrease_key', 0)
        self.extract_min += counters.get('extract_min', 0)
        self.advance += counters.get('advance', 0)
        self.bits_read += counters.get('bits_read', 0)


def _try_append(lst, p, dist, ranks):
    if lst:
        q, dq = lst[-1]
        if not (ranks[p] > ranks[q] and dist < dq):
            return False
    lst.append((p, dist))
    return True


def _run_subproblem(i, g, pi, puf, plan, lists, stats):
    n = g.n
    ranks = pi.pi
    cap = n ** (i + 1)
    contracted = i - 2  # links tagged <= i - 2 carry weights below n**(i - 1)
    # window edges weigh at least n**(i - 1), so lower bucket levels stay empty
    low = max(1, (n ** (i - 1)).bit_length() - 1) if i >= 1 else 1

    def accept(delta):
        if i == 0:
            return 1 <= delta < cap
        return n ** i <= 4 * delta and delta < cap

    def comp(v):
        return puf.component_of(v, contracted) if contracted >= 0 else v

    neighbours = {}
    for u, v, w in plan.window(i):
        cu, cv = comp(u), comp(v)
        if cu == cv:
            continue
        for a, b in ((cu, cv), (cv, cu)):
            row = neighbours.setdefault(a, {})
            if w < row.get(b, INF):
                row[b] = w
    if not neighbours:
        return

    def priority(c):
        return puf.priority_vertex(c, contracted) if contracted >= 0 else c

    heads = {c: priority(c) for c in neighbours}
    members = {}
    delta = {}
    for c in sorted(neighbours, key=lambda c: ranks[heads[c]]):
        p = heads[c]
        delta[c] = 0
        tree = BucketTree(n, i + 1, low)
        tree.decrease_key(c, 0)
        settled = set()
        while True:
            item = tree.extract_min()
            if item is None:
                break
            x, dx = item
            settled.add(x)
            if x != c:
                if dx >= delta.get(x, INF):
                    continue
                delta[x] = dx
                if accept(dx):
                    if x not in members:
                        members[x] = puf.component_members(x, contracted) if contracted >= 0 else [x]
                    for y in members[x]:
                        if ranks[p] > ranks[y]:
                            continue
                        if not _try_append(lists[y], p, OVERESTIMATE * dx, ranks):
                            stats.rejected += 1
            if dx >= cap:
                continue
            for y, w in neighbours[x].items():
                if y not in settled:
                    tree.decrease_key(y, w)
        stats.sources += 1
        stats.absorb(tree.counters)
    stats.subproblems += 1
    log.debug('subproblem %d: %d components', i, len(neighbours))


def _anchor(g, pi, lists, stats):
    # every list must open with the rank-1 vertex for the tree root to be shared
    top = pi.vertex(1)
    result = approx_sssp(g, top)
    stats.absorb(result.counters)
    for x in range(g.n):
        if x == top or result.d[x] == INF:
            continue
        lst = lists[x]
        if lst and lst[0][0] == top:
            continue
        bound = OVERESTIMATE * result.d[x]
        while lst and lst[0][1] >= bound:
            lst.pop(0)
        lst.insert(0, (top, bound))
        stats.anchored += 1


def build_domseq_approx(g, pi):
    """
    Approximate dominance sequences over edge-range subproblems.

    Subproblem ``i`` contracts edges lighter than ``n**(i - 1)``, keeps edges
    below ``n**(i + 1)``, and runs the bucket-queue SSSP from each component
    in rank order with per-subproblem pruning. A reached component takes the
    entry ``(source, 8 * delta)`` when ``delta`` lands in the subproblem's
    window, which keeps every stored value within ``[d_G, 8 * d_G]``.
    """
    lists = [[] for _ in range(g.n)]
    stats = ApproxBuildStats()
    if g.n > 1 and g.m:
        puf, plan = build_priority_union_find(g, pi)
        for i in plan.indices:
            _run_subproblem(i, g, pi, puf, plan, lists, stats)
        _anchor(g, pi, lists, stats)
    ranks = pi.pi
    for x, lst in enumerate(lists):
        while lst and ranks[lst[-1][0]] >= ranks[x]:
            lst.pop()
        lst.append((x, 0))
    log.debug('approximate dominance sequences: %d entries, %d bucket ops', sum(map(len, lists)), stats.ops)
    return DominanceSequence(lists, approximate=True, stats=stats)


def build_domseq(g, pi, mode=EXACT):
    if mode == EXACT:
        return build_domseq_exact(g, pi)
    if mode == APPROX:
        return build_domseq_approx(g, pi)
    raise ArgumentError('unknown dominance mode {0!r}'.format(mode))
