from treembed import parse_graph, deserialize
from treembed.cli import main
import io
import mock
import os
import shutil
import tempfile
import unittest


class TestCli(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)
        patcher = mock.patch('treembed.bench.bench_defaults', return_value={})
        patcher.start()
        self.addCleanup(patcher.stop)
        self.graph = self.path('g.txt')
        assert main(['gen', 'random', '-n', '40', '-m', '100', '--max-weight', '50', '--seed', '3',
                     '--out', self.graph]) == 0

    def path(self, name):
        return os.path.join(self.tmp, name)

    def run_cli(self, *argv):
        out = io.StringIO()
        code = main(list(argv), stdout=out)
        return code, out.getvalue()

    def read(self, path):
        with open(path, 'rb') as f:
            return f.read()

    def test_gen_grid(self):
        path = self.path('grid.txt')
        assert main(['gen', 'grid', '--dims', '4x4', '--out', path]) == 0
        g = parse_graph(self.read(path).decode('utf-8'))
        assert (g.n, g.m) == (16, 24)

    def test_gen_deterministic(self):
        argv = ('gen', 'powerlaw', '--scale', '100', '--weighted', '--seed', '9')
        first, second = self.run_cli(*argv), self.run_cli(*argv)
        assert first[0] == 0 and first == second
        assert first[1].startswith('# powerlaw weighted=True scale=100 seed=9')

    def test_gen_needs_seed(self):
        assert self.run_cli('gen', 'powerlaw', '--scale', '100')[0] == 2
        assert self.run_cli('gen', 'random', '-n', '5', '-m', '4', '--seed', '-1')[0] == 2
        assert self.run_cli('gen', 'grid')[0] == 2

    def test_sssp(self):
        code, text = self.run_cli('sssp', '--graph', self.graph, '--source', '2')
        lines = text.splitlines()
        assert code == 0 and lines[0] == 'vertex,approx_d,exact_d,ratio'
        assert len(lines) == 41
        ratios = [float(line.split(',')[3]) for line in lines[1:]]
        assert all(0.25 <= r <= 1 for r in ratios)
        code, text = self.run_cli('sssp', '--graph', self.graph, '--eps', '0.01')
        assert all(float(line.split(',')[3]) >= 0.99 for line in text.splitlines()[1:])

    def test_domseq(self):
        first = self.run_cli('domseq', '--graph', self.graph, '--seed', '5')
        assert first[0] == 0
        assert first[1].splitlines()[0] == 'vertex,rank_in_list,dominator,stored_distance'
        assert first == self.run_cli('domseq', '--graph', self.graph, '--seed', '5')
        assert self.run_cli('domseq', '--graph', self.graph)[0] == 2

    def test_tree(self):
        out = self.path('tree.frto')
        assert main(['tree', '--graph', self.graph, '--seed', '1', '--out', out]) == 0
        o = deserialize(self.read(out))
        assert o.k == 1 and o.n == 40 and o.mode == 'level'
        again = self.path('again.frto')
        assert main(['--seed', '1', 'tree', '--graph', self.graph, '--out', again]) == 0
        assert self.read(out) == self.read(again)
        assert self.run_cli('tree', '--graph', self.graph, '--seed', '1')[0] == 2

    def test_oracle(self):
        oracle = self.path('o.frto')
        assert main(['oracle', 'build', '--graph', self.graph, '--trees', '3', '--seed', '2', '--out', oracle]) == 0
        o = deserialize(self.read(oracle))

        code, text = self.run_cli('oracle', 'query', '--oracle', oracle, '--u', '0', '--v', '5')
        assert code == 0
        assert text.splitlines() == ['u,v,distance', '0,5,{0}'.format(o.query(0, 5))]

        pairs = self.path('pairs.txt')
        with open(pairs, 'w') as f:
            f.write('# u v\n1 2\n3 4\n')
        code, text = self.run_cli('oracle', 'query', '--oracle', oracle, '--pairs', pairs)
        assert code == 0 and len(text.splitlines()) == 3

        code, text = self.run_cli('oracle', 'eval', '--oracle', oracle, '--graph', self.graph, '--pairs', '200',
                                  '--seed', '1', '--ks', '1,3')
        lines = text.splitlines()
        assert code == 0 and lines[0] == 'k,pairs,skipped,average,worst,geomean'
        assert [line.split(',')[0] for line in lines[1:]] == ['1', '3']
        assert float(lines[1].split(',')[3]) >= float(lines[2].split(',')[3]) >= 1

        code, text = self.run_cli('oracle', 'eval', '--oracle', oracle, '--graph', self.graph, '--pairs', '20',
                                  '--seed', '1', '--rows')
        assert code == 0 and text.splitlines()[0] == 'u,v,exact,oracle,stretch'
        assert len(text.splitlines()) == 21

    def test_oracle_errors(self):
        oracle = self.path('o.frto')
        assert main(['oracle', 'build', '--graph', self.graph, '--trees', '1', '--seed', '2', '--out', oracle]) == 0
        assert self.run_cli('oracle', 'query', '--oracle', oracle)[0] == 2
        assert self.run_cli('oracle', 'query', '--oracle', oracle, '--u', '0', '--v', '99')[0] == 2
        assert self.run_cli('oracle', 'query', '--oracle', self.path('missing.frto'), '--u', '0', '--v', '1')[0] == 3
        assert self.run_cli('oracle', 'query', '--oracle', self.graph, '--u', '0', '--v', '1')[0] == 4
        assert self.run_cli('oracle', 'build', '--graph', self.graph, '--trees', '0', '--seed', '1',
                            '--out', oracle)[0] == 2

    def test_bad_graph(self):
        bad = self.path('bad.txt')
        with open(bad, 'w') as f:
            f.write('3 2\n0 1 1\n')
        assert self.run_cli('sssp', '--graph', bad)[0] == 4
        assert self.run_cli('sssp', '--graph', self.path('none.txt'))[0] == 3

    def test_undecodable_input(self):
        bad = self.path('bad.txt')
        with open(bad, 'wb') as f:
            f.write(b'2 1\n0 1 \xff\n')
        assert self.run_cli('sssp', '--graph', bad)[0] == 4
        assert self.run_cli('bench', '--graph', bad, '--ks', '1', '--pairs', '10', '--seed', '1')[0] == 4
        oracle = self.path('o.frto')
        assert main(['oracle', 'build', '--graph', self.graph, '--trees', '1', '--seed', '2', '--out', oracle]) == 0
        pairs = self.path('pairs.txt')
        with open(pairs, 'wb') as f:
            f.write(b'1 2\n\xff 4\n')
        assert self.run_cli('oracle', 'query', '--oracle', oracle, '--pairs', pairs)[0] == 4
        with open(pairs, 'w') as f:
            f.write('1 2 3\n')
        assert self.run_cli('oracle', 'query', '--oracle', oracle, '--pairs', pairs)[0] == 4

    def test_ramsey(self):
        code, text = self.run_cli('ramsey', '--graph', self.graph, '--a', '3', '--trials', '30', '--seed', '1')
        lines = text.splitlines()
        assert code == 0 and lines[0] == 'vertex,success_freq,stderr,bound'
        assert len(lines) == 41
        code, text = self.run_cli('ramsey', '--lemma', 'range', '--points', '50', '--a', '4', '--trials', '2000',
                                  '--seed', '1')
        assert code == 0 and text.splitlines()[1].startswith('range,4,0.500000,50,2000,')
        assert self.run_cli('ramsey', '--seed', '1')[0] == 2
        assert self.run_cli('ramsey', '--lemma', 'range', '--eps', '0.3', '--a', '4', '--seed', '1')[0] == 2

    def test_bench(self):
        argv = ('bench', '--graph', self.graph, '--ks', '1,2', '--pairs', '50', '--seed', '4', '--no-timings')
        first = self.run_cli(*argv)
        assert first[0] == 0 and first == self.run_cli(*argv)
        lines = first[1].splitlines()
        assert lines[0].startswith('# treembed-bench/1')
        assert len(lines) == 4
        html = self.path('report.html')
        assert self.run_cli(*(argv + ('--html', html)))[0] == 0
        assert b'Stretch' in self.read(html)
        assert self.run_cli('bench', '--graph', self.graph, '--ks', '2,1', '--seed', '4')[0] == 2

    def test_bench_seed_from_config(self):
        argv = ('bench', '--graph', self.graph, '--ks', '1', '--pairs', '20', '--no-timings')
        assert self.run_cli(*argv)[0] == 2
        with mock.patch('treembed.bench.bench_defaults', return_value={'seed': 4}):
            code, text = self.run_cli(*argv)
        assert code == 0
        assert (code, text) == self.run_cli(*(argv + ('--seed', '4')))

    def test_scaling(self):
        out = self.path('scaling.csv')
        assert main(['scaling', '--sizes', '32,64', '--seed', '1', '--out', out]) == 0
        lines = self.read(out).decode('utf-8').splitlines()
        assert lines[1] == 'family,n,m,ops,ops_per_mlogn'
        assert len(lines) == 4
