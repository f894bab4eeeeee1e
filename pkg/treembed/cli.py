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

import argparse
import csv
import io
import logging
import sys

from ._version import __version__
from .bench import BenchConfig, configured_seed, run_bench, run_scaling
from .bucket import approx_sssp, refine_gabow
from .domseq import MODES as DOMSEQ_MODES, build_domseq
from .exceptions import ArgumentError, PairFormatError, TreembedError
from .frt import ACTUAL, LEVEL, MODES as WEIGHT_MODES
from .graph import (INF, SUITE, decode_lines, dijkstra_exact, gen_grid, gen_power_law, gen_random, gen_slim,
                    parse_graph, random_permutation, suite_graph, write_graph)
from .oracle import DistanceOracle, build_oracle, deserialize, eval_stretch_prefixes, sample_pairs, \
    sample_tree, serialize
from .ramsey import MetricView, default_eps, estimate_padding, simulate_bucket_lemma, simulate_range_lemma
from .storage import read_bytes, write_bytes

log = logging.getLogger('treembed')

GENERATORS = sorted(SUITE) + ['grid', 'powerlaw-custom', 'slim-custom', 'random']


def _ints(text):
    try:
        return [int(part) for part in text.replace('x', ',').split(',') if part]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, got {0!r}'.format(text))


def _global_flags(suppress):
    flags = argparse.ArgumentParser(add_help=False)

    def default(value):
        return argparse.SUPPRESS if suppress else value

    flags.add_argument('--seed', type=int, default=default(None), help='seed for every random draw')
    flags.add_argument('--out', default=default(None), help='output path (local or gs://bucket/...)')
    flags.add_argument('--threads', type=int, default=default(1), help='worker processes, 0 = auto')
    flags.add_argument('-v', '--verbose', action='store_true', default=default(False))
    flags.add_argument('--quiet', action='store_true', default=default(False))
    return flags


def build_parser():
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog='treembed', parents=[_global_flags(suppress=False)],
                                     description='Probabilistic tree embeddings and distance oracles.',
                                     allow_abbrev=False)
    parser.add_argument('--version', action='version', version='treembed {0}'.format(__version__))
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen', parents=[common], help='write a generated graph')
    p.add_argument('family', choices=GENERATORS)
    p.add_argument('--weighted', action='store_true')
    p.add_argument('--scale', type=int, default=1, help='shrink suite graphs by this divisor')
    p.add_argument('--dims', type=_ints, help='grid extents, e.g. 100x100')
    p.add_argument('-n', type=int)
    p.add_argument('-m', type=int)
    p.add_argument('--diameter', type=int)
    p.add_argument('--max-weight', type=int, default=1)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser('sssp', parents=[common], help='approximate against exact single-source distances')
    p.add_argument('--graph', required=True)
    p.add_argument('--source', type=int, default=0)
    p.add_argument('--eps', type=float, help='refine to (1 - eps) with repeated rounds')
    p.set_defaults(handler=cmd_sssp)

    p = sub.add_parser('domseq', parents=[common], help='dominance sequences under a random permutation')
    p.add_argument('--graph', required=True)
    p.add_argument('--mode', choices=DOMSEQ_MODES, default='exact')
    p.add_argument('--index', type=int, default=0, help='permutation stream index')
    p.set_defaults(handler=cmd_domseq)

    p = sub.add_parser('tree', parents=[common], help='one compacted FRT tree, in the oracle file format')
    p.add_argument('--graph', required=True)
    p.add_argument('--mode', choices=WEIGHT_MODES, default=LEVEL)
    p.add_argument('--domseq', choices=DOMSEQ_MODES, default='exact')
    p.add_argument('--index', type=int, default=0, help='tree stream index')
    p.set_defaults(handler=cmd_tree)

    p = sub.add_parser('oracle', help='build, query, evaluate or serve an oracle')
    osub = p.add_subparsers(dest='oracle_command', required=True)
    q = osub.add_parser('build', parents=[common])
    q.add_argument('--graph', required=True)
    q.add_argument('--trees', type=int, required=True)
    q.add_argument('--mode', choices=WEIGHT_MODES, default=ACTUAL)
    q.add_argument('--domseq', choices=DOMSEQ_MODES, default='exact')
    q.set_defaults(handler=cmd_oracle_build)
    q = osub.add_parser('query', parents=[common])
    q.add_argument('--oracle', required=True)
    q.add_argument('--pairs', help='file of "u v" lines')
    q.add_argument('--u', type=int)
    q.add_argument('--v', type=int)
    q.set_defaults(handler=cmd_oracle_query)
    q = osub.add_parser('eval', parents=[common])
    q.add_argument('--oracle', required=True)
    q.add_argument('--graph', required=True)
    q.add_argument('--pairs', type=int, default=10000)
    q.add_argument('--ks', type=_ints, help='tree-count prefixes, default all trees')
    q.add_argument('--rows', action='store_true', help='emit per-pair rows instead of the summary')
    q.set_defaults(handler=cmd_oracle_eval)
    q = osub.add_parser('serve', parents=[common])
    q.add_argument('--oracle', required=True)
    q.add_argument('--host', default='127.0.0.1')
    q.add_argument('--port', type=int, default=8080)
    q.set_defaults(handler=cmd_oracle_serve)

    p = sub.add_parser('ramsey', parents=[common], help='padding and selection-lemma estimates')
    p.add_argument('--graph', help='graph whose shortest-path metric is partitioned')
    p.add_argument('--a', type=int, default=3)
    p.add_argument('--trials', type=int, default=20000)
    p.add_argument('--statement-radius', action='store_true', help='use radius alpha * Delta * 2**-i')
    p.add_argument('--lemma', choices=('bucket', 'range'), help='simulate a selection lemma instead')
    p.add_argument('--points', type=int, default=1000, help='clustered adversary size for --lemma')
    p.add_argument('--eps', type=float)
    p.set_defaults(handler=cmd_ramsey)

    p = sub.add_parser('bench', parents=[common], help='stretch table over tree-count prefixes')
    p.add_argument('--family', choices=sorted(SUITE))
    p.add_argument('--graph', dest='graph_path')
    p.add_argument('--weighted', action='store_true', default=None)
    p.add_argument('--scale', type=int)
    p.add_argument('--ks', type=_ints)
    p.add_argument('--pairs', type=int)
    p.add_argument('--mode', choices=WEIGHT_MODES)
    p.add_argument('--domseq', dest='domseq_mode', choices=DOMSEQ_MODES)
    p.add_argument('--html', help='also write an HTML report here')
    p.add_argument('--no-timings', dest='timings', action='store_false', default=None)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser('scaling', parents=[common], help='operation counts of the approximate build')
    p.add_argument('--families', type=lambda s: s.split(','), default=['random'])
    p.add_argument('--sizes', type=_ints, required=True)
    p.set_defaults(handler=cmd_scaling)
    return parser


def _seed(args):
    if args.seed is None:
        raise ArgumentError('--seed is required for randomized commands')
    if not 0 <= args.seed < 1 << 64:
        raise ArgumentError('--seed must be an unsigned 64-bit integer')
    return args.seed


def _load_graph(path):
    return parse_graph(read_bytes(path))


def _load_oracle(path):
    return deserialize(read_bytes(path))


def _emit(args, content, stdout):
    if args.out:
        write_bytes(args.out, content)
        log.info('wrote %s', args.out)
    elif isinstance(content, bytes):
        stdout.buffer.write(content)
    else:
        stdout.write(content)


def _csv_text(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    for row in rows:
        writer.writerow(['inf' if value == INF else value for value in row])
    return out.getvalue()


def _float(value):
    return '{0:.6f}'.format(value)


def _number(value):
    return _float(value) if isinstance(value, float) else value


def cmd_gen(args, stdout):
    randomized = args.weighted or args.family != 'grid'
    seed = _seed(args) if randomized else 0
    if args.family in SUITE:
        g = suite_graph(args.family, args.weighted, seed, args.scale)
        comment = '{0} weighted={1} scale={2} seed={3}'.format(args.family, args.weighted, args.scale, seed)
    elif args.family == 'grid':
        if not args.dims:
            raise ArgumentError('grid needs --dims')
        g = gen_grid(args.dims, args.weighted, seed)
        comment = 'grid {0} weighted={1} seed={2}'.format('x'.join(map(str, args.dims)), args.weighted, seed)
    else:
        if args.n is None or args.m is None:
            raise ArgumentError('{0} needs -n and -m'.format(args.family))
        if args.family == 'powerlaw-custom':
            g = gen_power_law(args.n, args.m, seed, args.weighted)
        elif args.family == 'slim-custom':
            if args.diameter is None:
                raise ArgumentError('slim-custom needs --diameter')
            g = gen_slim(args.n, args.m, args.diameter, seed, args.weighted)
        else:
            g = gen_random(args.n, args.m, seed, args.max_weight)
        comment = '{0} n={1} m={2} seed={3}'.format(args.family, args.n, args.m, seed)
    _emit(args, write_graph(g, comment + ' edges={0}'.format(g.m)), stdout)


def cmd_sssp(args, stdout):
    g = _load_graph(args.graph)
    exact = dijkstra_exact(g, args.source).d
    if args.eps is not None:
        approx = refine_gabow(g, args.source, args.eps)
    else:
        approx = approx_sssp(g, args.source).d
    rows = [('vertex', 'approx_d', 'exact_d', 'ratio')]
    for v, (a, d) in enumerate(zip(approx, exact)):
        ratio = '' if d == INF else _float(1.0 if d == 0 else a / d)
        rows.append((v, a, d, ratio))
    _emit(args, _csv_text(rows), stdout)


def cmd_domseq(args, stdout):
    g = _load_graph(args.graph)
    pi = random_permutation(g.n, _seed(args), args.index)
    seqs = build_domseq(g, pi, args.mode)
    log.info('%s sequences: mean length %.3f, %d entries', args.mode, seqs.mean_length, seqs.total_size)
    rows = [('vertex', 'rank_in_list', 'dominator', 'stored_distance')]
    rows.extend(seqs.rows())
    _emit(args, _csv_text(rows), stdout)


def cmd_tree(args, stdout):
    if not args.out:
        raise ArgumentError('tree needs --out')
    g = _load_graph(args.graph)
    seed = _seed(args)
    if not g.is_connected():
        raise ArgumentError('FRT trees need a connected graph')
    tree, ops = sample_tree(g, seed, args.index, args.mode, args.domseq)
    log.info('tree with %d nodes, beta=%.6f delta=%d', len(tree), tree.beta, tree.delta)
    _emit(args, serialize(DistanceOracle([tree], seed, args.mode, args.domseq, g.digest(), [ops])), stdout)


def cmd_oracle_build(args, stdout):
    if not args.out:
        raise ArgumentError('oracle build needs --out')
    g = _load_graph(args.graph)
    o = build_oracle(g, args.trees, args.mode, args.domseq, _seed(args), args.threads)
    _emit(args, serialize(o), stdout)


def _read_pairs(path):
    pairs = []
    text = decode_lines(read_bytes(path), lambda line, reason: PairFormatError(path, line, reason))
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0].startswith('#'):
            continue
        try:
            u, v = (int(f) for f in fields)
        except ValueError:
            raise PairFormatError(path, lineno, 'expected "u v"')
        pairs.append((u, v))
    return pairs


def cmd_oracle_query(args, stdout):
    o = _load_oracle(args.oracle)
    if args.pairs is not None:
        pairs = _read_pairs(args.pairs)
    elif args.u is not None and args.v is not None:
        pairs = [(args.u, args.v)]
    else:
        raise ArgumentError('oracle query needs --pairs FILE or --u and --v')
    rows = [('u', 'v', 'distance')]
    rows.extend((u, v, _number(o.query(u, v))) for u, v in pairs)
    _emit(args, _csv_text(rows), stdout)


def cmd_oracle_eval(args, stdout):
    o = _load_oracle(args.oracle)
    g = _load_graph(args.graph)
    if g.n != o.n:
        raise ArgumentError('oracle covers {0} vertices, graph has {1}'.format(o.n, g.n))
    ks = args.ks or [o.k]
    reports = eval_stretch_prefixes(o, g, sample_pairs(g.n, args.pairs, _seed(args)), ks)
    if args.rows:
        rows = [tuple(_number(x) for x in row) for row in reports[-1].csv_rows()]
    else:
        rows = [('k', 'pairs', 'skipped', 'average', 'worst', 'geomean')]
        rows.extend((r.k, r.pairs, r.skipped, _float(r.average), _float(r.worst), _float(r.geomean))
                    for r in reports)
    _emit(args, _csv_text(rows), stdout)


def cmd_oracle_serve(args, stdout):
    from .service import create_app
    app = create_app(_load_oracle(args.oracle))
    app.run(host=args.host, port=args.port)


def cmd_ramsey(args, stdout):
    seed = _seed(args)
    if args.lemma is not None:
        eps = default_eps(args.a) if args.eps is None else args.eps
        if args.lemma == 'bucket':
            estimate = simulate_bucket_lemma([1] * args.points, args.a, args.trials, seed, eps=eps)
        else:
            estimate = simulate_range_lemma([0.0] * args.points, args.a, eps, args.trials, seed)
        rows = [('lemma', 'a', 'eps', 'points', 'trials', 'probability', 'stderr', 'bound'),
                (args.lemma, args.a, _float(float(eps)), args.points, args.trials, _float(estimate.probability),
                 _float(estimate.stderr), _float(estimate.bound))]
        _emit(args, _csv_text(rows), stdout)
        return
    if args.graph is None:
        raise ArgumentError('ramsey needs --graph unless --lemma is given')
    mv = MetricView.from_graph(_load_graph(args.graph))
    estimate = estimate_padding(mv, args.a, args.trials, seed, args.statement_radius)
    rows = [('vertex', 'success_freq', 'stderr', 'bound')]
    rows.extend((v, _float(f), _float(s), _float(b)) for v, f, s, b in estimate.rows())
    log.info('minimum padded frequency %.5f against bound %.5f', estimate.minimum, estimate.bound)
    _emit(args, _csv_text(rows), stdout)


def cmd_bench(args, stdout):
    if args.seed is None:
        args.seed = configured_seed()
    cfg = BenchConfig.from_config(
        family=args.family, graph_path=args.graph_path, weighted=args.weighted, scale=args.scale, ks=args.ks,
        pairs=args.pairs, seed=_seed(args), mode=args.mode, domseq_mode=args.domseq_mode, threads=args.threads,
        timings=args.timings)
    result = run_bench(cfg)
    if args.html:
        write_bytes(args.html, result.to_html())
        log.info('wrote %s', args.html)
    _emit(args, result.to_csv(), stdout)


def cmd_scaling(args, stdout):
    _emit(args, run_scaling(args.families, args.sizes, _seed(args)), stdout)


def configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None, stdout=None):
    """
    :return: process exit code
    """
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    configure_logging(args)
    try:
        args.handler(args, stdout)
    except TreembedError as e:
        log.error('%s', e)
        return e.exit_code
    return 0
