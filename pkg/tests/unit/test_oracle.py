from treembed import Graph, gen_random, gen_grid, build_oracle, query, eval_stretch, serialize, deserialize, \
    exact_distances_many, DistanceOracle, ArgumentError, OracleFormatError, OracleVersionError
from treembed.frt import LEVEL, ACTUAL
from treembed.domseq import APPROX
from treembed.oracle import sample_pairs, sample_tree, eval_stretch_prefixes, MAGIC, _HEADER, _TREE_HEADER, _NODE
import struct
import unittest


class TestBuild(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.g = gen_random(80, 240, 3, max_weight=100)
        cls.oracle = build_oracle(cls.g, 6, seed=17)

    def test_metadata(self):
        o = self.oracle
        assert o.k == 6 and o.n == 80
        assert o.mode == ACTUAL
        assert o.digest == self.g.digest()
        assert len(o.build_ops) == 6 and all(ops > 0 for ops in o.build_ops)

    def test_query_is_min_over_trees(self):
        for u, v in sample_pairs(80, 200, 1):
            assert self.oracle.query(u, v) == min(t.distance(u, v) for t in self.oracle.trees)
            assert query(self.oracle, u, v) == query(self.oracle, v, u)
        assert self.oracle.query(5, 5) == 0

    def test_monotone_in_k(self):
        for u, v in sample_pairs(80, 200, 2):
            answers = [self.oracle.prefix(k).query(u, v) for k in range(1, 7)]
            assert answers == sorted(answers, reverse=True)

    def test_single_tree(self):
        tree, _ = sample_tree(self.g, 17, 0)
        one = self.oracle.prefix(1)
        assert all(one.query(u, v) == tree.distance(u, v) for u, v in sample_pairs(80, 100, 3))

    def test_dominating(self):
        exact = exact_distances_many(self.g, range(0, 80, 4))
        for mode in (LEVEL, ACTUAL):
            o = build_oracle(self.g, 3, mode=mode, seed=5)
            assert all(o.query(u, v) >= row[v] for u, row in exact.items() for v in range(80))

    def test_deterministic(self):
        again = build_oracle(self.g, 6, seed=17)
        assert serialize(again) == serialize(self.oracle)
        assert serialize(build_oracle(self.g, 6, seed=18)) != serialize(self.oracle)

    def test_parallel_matches_serial(self):
        assert serialize(build_oracle(self.g, 3, seed=17, threads=2)) == serialize(self.oracle.prefix(3))

    def test_errors(self):
        self.assertRaises(ArgumentError, build_oracle, self.g, 0)
        self.assertRaises(ArgumentError, build_oracle, self.g, 1, mode='fuzzy')
        self.assertRaises(ArgumentError, build_oracle, self.g, 1, domseq_mode='fast')
        self.assertRaises(ArgumentError, build_oracle, Graph(3, [(0, 1, 1)]), 1)
        self.assertRaises(ArgumentError, self.oracle.query, 0, 80)
        self.assertRaises(ArgumentError, self.oracle.prefix, 7)
        self.assertRaises(ArgumentError, DistanceOracle, [])

    def test_to_html(self):
        html = self.oracle.to_html()
        assert '<td>80</td>' in html
        assert self.g.digest() in html


class TestStretch(unittest.TestCase):

    def test_sample_pairs(self):
        pairs = sample_pairs(10, 500, 4)
        assert len(pairs) == 500
        assert all(u != v and 0 <= u < 10 and 0 <= v < 10 for u, v in pairs)
        assert pairs == sample_pairs(10, 500, 4)
        self.assertRaises(ArgumentError, sample_pairs, 1, 5, 0)
        self.assertRaises(ArgumentError, sample_pairs, 5, 0, 0)

    def test_two_vertices(self):
        g = Graph(2, [(0, 1, 7)])
        report = eval_stretch(build_oracle(g, 1, seed=0), g, 10, 0)
        assert report.pairs == 10 and report.skipped == 0
        assert report.average == report.worst >= 1
        assert abs(report.geomean - report.average) < 1e-12

    def test_report(self):
        g = gen_grid([12, 12])
        o = build_oracle(g, 8, seed=2)
        report = eval_stretch(o, g, 300, 9)
        assert report.k == 8 and report.pairs == 300
        assert 1 <= report.geomean <= report.average <= report.worst
        rows = list(report.csv_rows())
        assert rows[0] == ('u', 'v', 'exact', 'oracle', 'stretch')
        assert len(rows) == 301
        assert report.graph is None
        assert 'Stretch' in report.to_html()
        assert '<td>-</td>' in report.to_html()

    def test_prefixes_share_sample(self):
        g = gen_random(60, 200, 6, max_weight=50)
        o = build_oracle(g, 8, seed=6, domseq_mode=APPROX)
        reports = eval_stretch_prefixes(o, g, sample_pairs(60, 200, 1), [1, 2, 4, 8])
        averages = [r.average for r in reports]
        assert averages == sorted(averages, reverse=True)
        assert all(r.average >= 1 for r in reports)
        self.assertRaises(ArgumentError, eval_stretch_prefixes, o, g, [(0, 1)], [9])

    def test_mismatched_graph(self):
        g = gen_grid([4, 4])
        self.assertRaises(ArgumentError, eval_stretch, build_oracle(g, 1), gen_grid([5, 5]), 10, 0)


class TestSerialization(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        g = gen_random(70, 200, 9, max_weight=1000)
        cls.actual = build_oracle(g, 4, seed=9)
        cls.level = build_oracle(g, 4, mode=LEVEL, domseq_mode=APPROX, seed=9)

    def test_round_trip(self):
        for o in (self.actual, self.level):
            copy = deserialize(serialize(o))
            assert copy == o
            assert (copy.mode, copy.domseq_mode, copy.seed, copy.digest) == (o.mode, o.domseq_mode, o.seed, o.digest)
            assert all(copy.query(u, v) == o.query(u, v) for u, v in sample_pairs(70, 1000, 5))
            assert [t.beta_num for t in copy.trees] == [t.beta_num for t in o.trees]

    def test_header(self):
        data = serialize(self.actual)
        magic, version, n, k, mode, domseq_mode, seed, _ = _HEADER.unpack_from(data)
        assert (magic, version, n, k, mode, domseq_mode, seed) == (MAGIC, 1, 70, 4, 1, 0, 9)

    def test_empty(self):
        self.assertRaises(OracleFormatError, deserialize, b'')

    def test_bad_magic(self):
        self.assertRaises(OracleFormatError, deserialize, b'FRTX' + serialize(self.actual)[4:])

    def test_version(self):
        data = bytearray(serialize(self.actual))
        struct.pack_into('<H', data, 4, 2)
        self.assertRaises(OracleVersionError, deserialize, bytes(data))
        assert issubclass(OracleVersionError, OracleFormatError)

    def test_truncated(self):
        data = serialize(self.level)
        for cut in (10, _HEADER.size + 3, len(data) - 1):
            self.assertRaises(OracleFormatError, deserialize, data[:cut])

    def test_trailing(self):
        self.assertRaises(OracleFormatError, deserialize, serialize(self.level) + b'\0')

    def test_corrupt_node_table(self):
        for o in (self.actual, self.level):
            data = serialize(o)
            nodes = _HEADER.size + _TREE_HEADER.size
            _, _, size = _TREE_HEADER.unpack_from(data, _HEADER.size)
            leaves = nodes + size * _NODE.itemsize
            for offset, value in ((nodes + _NODE.itemsize, 10 ** 6), (nodes + _NODE.itemsize, 1),
                                  (nodes, 0), (leaves, size), (leaves + 8, 10 ** 9), (nodes + 8, 70)):
                corrupt = bytearray(data)
                struct.pack_into('<Q', corrupt, offset, value)
                self.assertRaises(OracleFormatError, deserialize, bytes(corrupt))
