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
Benchmark harness: stretch tables over the experiment graph suite and
operation-count scaling of the approximate dominance construction.
"""

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field

from ._decorators import bench_defaults
from ._version import __version__
from .domseq import EXACT, MODES as DOMSEQ_MODES, build_domseq_approx
from .exceptions import ArgumentError
from .frt import ACTUAL, MODES as WEIGHT_MODES
from .graph import SUITE, gen_power_law, gen_random, parse_graph, random_permutation, suite_graph
from .oracle import build_oracle, eval_stretch_prefixes, sample_pairs
from .renderable import Renderable
from .storage import read_bytes

log = logging.getLogger(__name__)

BENCH_SCHEMA = 'treembed-bench/1'
SCALING_SCHEMA = 'treembed-scaling/1'

BENCH_COLUMNS = ('graph', 'weighted', 'n', 'm', 'k', 'pairs', 'skipped', 'average', 'worst', 'geomean',
                 'build_ops')
TIMING_COLUMNS = ('build_seconds', 'eval_seconds')
SCALING_COLUMNS = ('family', 'n', 'm', 'ops', 'ops_per_mlogn')

DENSITY = 8


def configured_seed():
    """
    :return: ``seed`` from the ``bench`` section of config.json, or None
    """
    return bench_defaults().get('seed')


@dataclass
class BenchConfig:
    """
    One benchmark run. ``family`` names a suite graph unless ``graph_path``
    points at a graph file.
    """
    family: str = 'grid2d'
    weighted: bool = False
    scale: int = 1
    ks: tuple = (1, 2, 4, 8, 16, 32)
    pairs: int = 10000
    seed: int = 0
    mode: str = ACTUAL
    domseq_mode: str = EXACT
    threads: int = 1
    graph_path: str = None
    output: str = None
    timings: bool = True

    def __post_init__(self):
        self.ks = tuple(int(k) for k in self.ks)
        if not self.ks or any(k < 1 for k in self.ks):
            raise ArgumentError('tree counts must be positive')
        if any(a >= b for a, b in zip(self.ks, self.ks[1:])):
            raise ArgumentError('tree counts must be strictly ascending, got {0}'.format(list(self.ks)))
        if self.pairs < 1:
            raise ArgumentError('pair count must be >= 1')
        if self.mode not in WEIGHT_MODES:
            raise ArgumentError('unknown weight mode {0!r}'.format(self.mode))
        if self.domseq_mode not in DOMSEQ_MODES:
            raise ArgumentError('unknown dominance mode {0!r}'.format(self.domseq_mode))
        if self.graph_path is None and self.family not in SUITE:
            raise ArgumentError('unknown graph family {0!r}'.format(self.family))

    @classmethod
    def from_config(cls, **overrides):
        """
        Defaults from the ``bench`` section of config.json, then ``overrides``
        (``None`` values are ignored).
        """
        values = bench_defaults()
        values.update((key, value) for key, value in overrides.items() if value is not None)
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise ArgumentError('unknown bench settings: {0}'.format(', '.join(sorted(unknown))))
        return cls(**values)

    @property
    def label(self):
        return self.graph_path or self.family

    def load_graph(self):
        if self.graph_path is not None:
            return parse_graph(read_bytes(self.graph_path))
        return suite_graph(self.family, self.weighted, self.seed, self.scale)


@dataclass
class BenchResult(Renderable):
    template = 'stretch-report.html.j2'

    rows: list
    reports: list = field(default_factory=list, repr=False)
    timings: bool = True

    def to_csv(self):
        columns = BENCH_COLUMNS + (TIMING_COLUMNS if self.timings else ())
        return _csv(BENCH_SCHEMA, columns, [row[:len(columns)] for row in self.rows])

    def empty(self):
        return not self.rows

    def context(self):
        return {'reports': self.reports}


def _csv(schema, columns, rows):
    out = io.StringIO()
    out.write('# {0} treembed {1}\n'.format(schema, __version__))
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return out.getvalue()


def _cell(value):
    if isinstance(value, float):
        return 'nan' if math.isnan(value) else '{0:.6f}'.format(value)
    if isinstance(value, bool):
        return int(value)
    return value


def run_bench(cfg, graph=None):
    """
    Build the largest oracle once and evaluate every tree-count prefix on
    one shared pair sample.

    :param graph: use this graph instead of loading ``cfg``'s
    :return: BenchResult with one row per k
    """
    g = graph if graph is not None else cfg.load_graph()
    k_max = cfg.ks[-1]
    started = time.perf_counter()
    oracle = build_oracle(g, k_max, cfg.mode, cfg.domseq_mode, cfg.seed, cfg.threads)
    build_seconds = time.perf_counter() - started
    log.info('built %d trees over %s in %.2fs', k_max, cfg.label, build_seconds)
    started = time.perf_counter()
    reports = eval_stretch_prefixes(oracle, g, sample_pairs(g.n, cfg.pairs, cfg.seed), cfg.ks)
    eval_seconds = time.perf_counter() - started
    rows = []
    for report in reports:
        report.graph = cfg.label
        rows.append((cfg.label, cfg.weighted, g.n, g.m, report.k, report.pairs, report.skipped, report.average,
                     report.worst, report.geomean, sum(oracle.build_ops[:report.k]), build_seconds,
                     eval_seconds))
    return BenchResult(rows, reports, cfg.timings)


SCALING_FAMILIES = {
    'random': lambda n, seed: gen_random(n, DENSITY * n, seed, max_weight=1000),
    'powerlaw': lambda n, seed: gen_power_law(n, DENSITY * n, seed, weighted=True),
}


def run_scaling(families, sizes, seed):
    """
    Bucket operations of the approximate dominance construction across
    ``sizes`` at edge density ``m / n = 8``.

    :return: CSV text with one row per (family, size)
    """
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 2 for s in sizes):
        raise ArgumentError('sizes must be >= 2')
    if any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise ArgumentError('sizes must be strictly ascending')
    for family in families:
        if family not in SCALING_FAMILIES:
            raise ArgumentError('unknown scaling family {0!r}, expected one of {1}'.format(
                family, sorted(SCALING_FAMILIES)))
    return _csv(SCALING_SCHEMA, SCALING_COLUMNS, scaling_rows(families, sizes, seed))


def scaling_rows(families, sizes, seed):
    rows = []
    for family in families:
        for n in sizes:
            g = SCALING_FAMILIES[family](n, seed)
            seqs = build_domseq_approx(g, random_permutation(g.n, seed, 0))
            ops = seqs.stats.ops
            normalized = ops / (g.m * math.log2(g.n))
            log.info('%s n=%d m=%d: %d bucket ops (%.4f per m log n)', family, g.n, g.m, ops, normalized)
            rows.append((family, g.n, g.m, ops, normalized))
    return rows
