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
Distance oracle over independently sampled FRT trees: a query returns the
smallest of the tree distances.
"""

import logging
import math
import os
import struct
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .domseq import APPROX, EXACT, build_domseq
from .exceptions import ArgumentError, OracleFormatError, OracleVersionError
from .frt import ACTUAL, LEVEL, FrtTree, build_cps_all, build_frt_tree, sample_beta
from .graph import INF, _rng, exact_distances_many, random_permutation
from .renderable import Renderable

log = logging.getLogger(__name__)

MAGIC = b'FRTO'
VERSION = 1

# spawn-key streams; tree streams use the tree index
PAIR_STREAM = 1 << 31
# exact rows held in memory at once while evaluating stretch
SOURCE_CHUNK = 256
_BETA_STREAM = 1

_WEIGHT_MODES = {LEVEL: 0, ACTUAL: 1}
_DOMSEQ_MODES = {EXACT: 0, APPROX: 1}
_HEADER = struct.Struct('<4sHQHBBQ20s')
_TREE_HEADER = struct.Struct('<QIQ')
_NODE = np.dtype([('parent', '<u8'), ('label', '<u8'), ('end', '<u4'), ('weight', '<u8')])
_NO_PARENT = (1 << 64) - 1


def sample_tree(g, seed, index, mode=ACTUAL, domseq_mode=EXACT):
    """
    Tree ``index`` of the oracle seeded by ``seed``: its permutation and
    ``beta`` come from their own streams so trees are independent.

    :return: (FrtTree, build operation count)
    """
    pi = random_permutation(g.n, seed, index)
    beta_num = sample_beta(_rng(seed, index, _BETA_STREAM))
    seqs = build_domseq(g, pi, domseq_mode)
    cps, _ = build_cps_all(seqs, beta_num)
    tree = build_frt_tree(cps, mode, seqs, seed)
    return tree, _operation_count(seqs.stats)


def _operation_count(stats):
    if stats is None:
        return 0
    if isinstance(stats, dict):
        return stats.get('push', 0) + stats.get('pop', 0)
    return stats.ops


def _sample_tree_job(args):
    return sample_tree(*args)


class DistanceOracle(Renderable):
    template = 'oracle.html.j2'

    def __init__(self, trees, seed=0, mode=ACTUAL, domseq_mode=EXACT, digest='', build_ops=None):
        if not trees:
            raise ArgumentError('an oracle needs at least one tree')
        n = trees[0].n
        if any(t.n != n for t in trees):
            raise ArgumentError('all trees must span the same vertex set')
        self.trees = list(trees)
        self.n = n
        self.seed = seed
        self.mode = mode
        self.domseq_mode = domseq_mode
        self.digest = digest
        self.build_ops = list(build_ops) if build_ops is not None else [0] * len(trees)

    @property
    def k(self):
        return len(self.trees)

    def prefix(self, k):
        """
        :return: oracle over the first ``k`` trees
        """
        if not 1 <= k <= self.k:
            raise ArgumentError('prefix size {0} outside 1..{1}'.format(k, self.k))
        return DistanceOracle(self.trees[:k], self.seed, self.mode, self.domseq_mode, self.digest,
                              self.build_ops[:k])

    def _check(self, v):
        if not 0 <= v < self.n:
            raise ArgumentError('vertex {0} out of range for n={1}'.format(v, self.n))

    def query(self, u, v):
        self._check(u)
        self._check(v)
        if u == v:
            return 0
        return min(t.distance(u, v) for t in self.trees)

    def tree_distances(self, u, v):
        self._check(u)
        self._check(v)
        return [t.distance(u, v) for t in self.trees]

    def empty(self):
        return self.n == 0

    def context(self):
        return {'oracle': self}

    def __eq__(self, other):
        return isinstance(other, DistanceOracle) and serialize(self) == serialize(other)

    def __hash__(self):
        return hash(serialize(self))


def build_oracle(g, k, mode=ACTUAL, domseq_mode=EXACT, seed=0, threads=1):
    """
    :param threads: worker processes for tree builds; 0 picks the CPU count
    """
    if k < 1:
        raise ArgumentError('tree count must be >= 1, got {0}'.format(k))
    if mode not in _WEIGHT_MODES:
        raise ArgumentError('unknown weight mode {0!r}'.format(mode))
    if domseq_mode not in _DOMSEQ_MODES:
        raise ArgumentError('unknown dominance mode {0!r}'.format(domseq_mode))
    if not g.is_connected():
        raise ArgumentError('the oracle needs a connected graph')
    jobs = [(g, seed, index, mode, domseq_mode) for index in range(k)]
    workers = threads or os.cpu_count() or 1
    if workers > 1 and k > 1:
        with ProcessPoolExecutor(max_workers=min(workers, k)) as pool:
            built = list(pool.map(_sample_tree_job, jobs))
    else:
        built = []
        for index, job in enumerate(jobs):
            built.append(_sample_tree_job(job))
            log.info('built tree %d/%d', index + 1, k)
    trees = [t for t, _ in built]
    return DistanceOracle(trees, seed, mode, domseq_mode, g.digest(), [ops for _, ops in built])


def query(o, u, v):
    return o.query(u, v)


def sample_pairs(n, count, seed):
    """
    ``count`` uniform ordered pairs with ``u != v``; repeats allowed.
    """
    if n < 2:
        raise ArgumentError('need at least two vertices to sample pairs')
    if count < 1:
        raise ArgumentError('pair count must be >= 1')
    rng = _rng(seed, PAIR_STREAM)
    u = rng.integers(0, n, size=count)
    v = (u + rng.integers(1, n, size=count)) % n
    return [(int(a), int(b)) for a, b in zip(u, v)]


@dataclass
class StretchReport(Renderable):
    template = 'stretch-report.html.j2'

    k: int
    pairs: int
    skipped: int
    average: float
    worst: float
    geomean: float
    rows: list = field(default_factory=list, repr=False)
    graph: str = None

    def empty(self):
        return self.pairs == 0

    def context(self):
        return {'reports': [self]}

    def csv_rows(self):
        """
        :return: header then (u, v, exact, oracle, stretch) rows
        """
        yield ('u', 'v', 'exact', 'oracle', 'stretch')
        for row in self.rows:
            yield row


def _summarize(k, rows, skipped):
    if not rows:
        return StretchReport(k, 0, skipped, math.nan, math.nan, math.nan, rows)
    stretches = np.asarray([r[4] for r in rows], dtype=float)
    return StretchReport(k, len(rows), skipped, float(stretches.mean()), float(stretches.max()),
                         float(np.exp(np.log(stretches).mean())), rows)


def _exact_for_pairs(g, pairs):
    """
    :return: dict (u, v) -> d_G(u, v), holding only the sampled pairs
    """
    started = time.perf_counter()
    wanted = defaultdict(set)
    for u, v in pairs:
        wanted[u].add(v)
    sources = sorted(wanted)
    exact = {}
    for start in range(0, len(sources), SOURCE_CHUNK):
        block = sources[start:start + SOURCE_CHUNK]
        rows = exact_distances_many(g, block)
        for s in block:
            d = rows[s].d
            exact.update(((s, v), d[v]) for v in wanted[s])
    log.info('exact distances from %d sources in %.2fs', len(sources), time.perf_counter() - started)
    return exact


def eval_stretch(o, g, pairs, seed):
    """
    Stretch ``query / d_G`` over ``pairs`` random pairs; disconnected pairs
    are skipped and counted.
    """
    if g.n != o.n:
        raise ArgumentError('oracle covers {0} vertices, graph has {1}'.format(o.n, g.n))
    sample = sample_pairs(g.n, pairs, seed)
    return eval_stretch_prefixes(o, g, sample, [o.k])[0]


def eval_stretch_prefixes(o, g, sample, ks):
    """
    One report per tree-count prefix in ``ks``, sharing the pair sample and
    the exact distances.
    """
    exact = _exact_for_pairs(g, sample)
    kept = []
    skipped = 0
    for u, v in sample:
        if exact[u, v] == INF:
            skipped += 1
        else:
            kept.append((u, v))
    per_tree = [o.tree_distances(u, v) for u, v in kept]
    reports = []
    for k in ks:
        if not 1 <= k <= o.k:
            raise ArgumentError('prefix size {0} outside 1..{1}'.format(k, o.k))
        rows = []
        for (u, v), dists in zip(kept, per_tree):
            answer = min(dists[:k])
            d = exact[u, v]
            rows.append((u, v, d, answer, answer / d))
        reports.append(_summarize(k, rows, skipped))
        log.info('k=%d: average %.4f worst %.4f over %d pairs', k, reports[-1].average, reports[-1].worst,
                 len(rows))
    return reports


def serialize(o):
    """
    Little-endian binary image: header, then per tree its beta numerator,
    delta, node table, leaf table and, in actual mode, the per-leaf
    ancestor distances from root to leaf.
    """
    digest = bytes.fromhex(o.digest) if o.digest else b''
    chunks = [_HEADER.pack(MAGIC, VERSION, o.n, o.k, _WEIGHT_MODES[o.mode], _DOMSEQ_MODES[o.domseq_mode],
                           o.seed, digest.ljust(20, b'\0'))]
    for t in o.trees:
        chunks.append(_TREE_HEADER.pack(t.beta_num, t.delta, len(t)))
        nodes = np.empty(len(t), dtype=_NODE)
        nodes['parent'] = np.asarray([_NO_PARENT if p < 0 else p for p in t.parent], dtype=np.uint64)
        nodes['label'] = t.label
        nodes['end'] = t.end
        nodes['weight'] = t.weight
        chunks.append(nodes.tobytes())
        chunks.append(np.asarray(t.leaf_of, dtype='<u8').tobytes())
        if t.mode == ACTUAL:
            flat = [x for chain in t.ancestors for x in chain]
            chunks.append(np.asarray(flat, dtype='<u8').tobytes())
    return b''.join(chunks)


class _Reader(object):

    def __init__(self, data):
        self.data = memoryview(data)
        self.offset = 0

    def take(self, size):
        if self.offset + size > len(self.data):
            raise OracleFormatError('truncated oracle: wanted {0} bytes at offset {1}'.format(size, self.offset))
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, st):
        return st.unpack(self.take(st.size))

    def array(self, dtype, count):
        dtype = np.dtype(dtype)
        return np.frombuffer(self.take(dtype.itemsize * count), dtype=dtype)


def _check_nodes(parent, leaf_of, labels, n):
    size = len(parent)
    if size < 1 or parent[0] != -1:
        raise OracleFormatError('corrupt node table: node 0 must be the root')
    # parents precede their children
    if any(not 0 <= p < idx for idx, p in enumerate(parent[1:], start=1)):
        raise OracleFormatError('corrupt node table: parent index out of range')
    if any(not 0 <= leaf < size for leaf in leaf_of):
        raise OracleFormatError('corrupt node table: leaf index out of range')
    if int(labels.max()) >= n:
        raise OracleFormatError('corrupt node table: label outside 0..{0}'.format(n - 1))


def deserialize(data):
    reader = _Reader(data)
    if len(data) < len(MAGIC) + 2 or bytes(data[:4]) != MAGIC:
        raise OracleFormatError('not an oracle file (bad magic)')
    magic, version, n, k, mode, domseq_mode, seed, digest = reader.unpack(_HEADER)
    if version != VERSION:
        raise OracleVersionError('unsupported oracle version {0}, expected {1}'.format(version, VERSION))
    modes = {v: m for m, v in _WEIGHT_MODES.items()}
    domseq_modes = {v: m for m, v in _DOMSEQ_MODES.items()}
    if mode not in modes or domseq_mode not in domseq_modes or k < 1:
        raise OracleFormatError('corrupt oracle header')
    mode = modes[mode]
    trees = []
    for _ in range(k):
        beta_num, delta, size = reader.unpack(_TREE_HEADER)
        nodes = reader.array(_NODE, size)
        leaf_of = [int(x) for x in reader.array('<u8', n)]
        parent = [-1 if p == _NO_PARENT else int(p) for p in nodes['parent']]
        _check_nodes(parent, leaf_of, nodes['label'], n)
        ancestors = None
        if mode == ACTUAL:
            depth = [0] * size
            for idx in range(1, size):
                depth[idx] = depth[parent[idx]] + 1
            flat = reader.array('<u8', sum(depth[leaf] + 1 for leaf in leaf_of))
            ancestors, at = [], 0
            for leaf in leaf_of:
                ancestors.append(tuple(int(x) for x in flat[at:at + depth[leaf] + 1]))
                at += depth[leaf] + 1
        trees.append(FrtTree(parent, [int(x) for x in nodes['label']], [int(x) for x in nodes['end']],
                             [int(x) for x in nodes['weight']], leaf_of, beta_num, delta, mode, ancestors, seed))
    if reader.offset != len(data):
        raise OracleFormatError('{0} trailing bytes after the last tree'.format(len(data) - reader.offset))
    digest = bytes(digest).hex() if any(digest) else ''
    return DistanceOracle(trees, seed, mode, domseq_modes[domseq_mode], digest)
