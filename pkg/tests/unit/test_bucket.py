from treembed import Graph, BucketTree, bucket_tree_new, approx_sssp, refine_gabow, gen_grid, gen_random, \
    dijkstra_exact, ArgumentError, ContractViolation, StructuralError
from treembed.bucket import find_insert_level, insert_level, frontier, level_of, levels_for, exponent_of, path_bits, gabow_rounds, \
    iter_gabow_rounds
from treembed.graph import bfs_hops, _rng
import math
import unittest


class TestBucketTreeShape(unittest.TestCase):

    def test_levels(self):
        assert bucket_tree_new(16, 1).levels == 8
        assert bucket_tree_new(2, 1).levels == 2
        assert bucket_tree_new(1024, 2).levels == 30
        assert levels_for(1, 1) == 1

    def test_new_is_empty(self):
        t = bucket_tree_new(16, 1)
        assert t.current_distance == 0
        assert t.path_string == '0' * 8
        assert t.active_levels == []
        assert t.extract_min() is None
        assert len(t) == 0

    def test_bad_arguments(self):
        self.assertRaises(ArgumentError, BucketTree, 0, 1)
        self.assertRaises(ArgumentError, BucketTree, 4, 0)

    def test_positions(self):
        assert level_of(0, 8) == 9
        assert level_of(1, 8) == 1
        assert level_of(6, 8) == 2
        assert level_of(8, 8) == 4
        assert level_of(256, 8) == 9
        # level-r buckets are 2**r apart
        assert frontier(1, 4) == 5
        assert frontier(2, 4) == 6
        assert frontier(3, 4) == 12
        assert frontier(1, 5) == 7
        assert exponent_of(1) == 1
        assert exponent_of(7) == 3
        assert exponent_of(8) == 3


class TestFindInsertLevel(unittest.TestCase):

    def test_current_above_edge(self):
        assert find_insert_level(5, 3, '0' * 8) == 3
        assert find_insert_level(5, 3, '1' * 8) == 3

    def test_same_level_left_child(self):
        assert find_insert_level(3, 3, '0' * 8) == 4

    def test_same_level_right_child(self):
        # bit 3 set, bits 4 and 5 set, bit 6 clear: climb to level 7
        assert find_insert_level(3, 3, '00111000') == 7
        # all-right spine climbs to the apex
        assert find_insert_level(3, 3, '00111111') == 9

    def test_below_edge(self):
        # bit at level r - 1 set: the frontier of level r is close enough
        assert find_insert_level(2, 4, '00100000') == 4
        # bit r - 1 clear and bit r clear
        assert find_insert_level(2, 4, '00000000') == 5
        # bit r - 1 clear and bit r set
        assert find_insert_level(2, 4, '00010000') == 6

    def test_out_of_range(self):
        self.assertRaises(StructuralError, find_insert_level, 1, 9, '0' * 8)
        self.assertRaises(StructuralError, find_insert_level, 1, 0, '0' * 8)

    def test_bits_read_from_position(self):
        position = sum(1 << i for i in (3, 4, 5))
        assert insert_level(5, 3, position, 8) == (3, 0)
        assert insert_level(3, 3, position, 8) == (7, 4)
        assert insert_level(2, 4, 1 << 3, 8) == (4, 1)
        assert insert_level(2, 4, 0, 8) == (5, 2)
        # all-right spine reads every bit from r to the apex
        assert insert_level(3, 3, sum(1 << i for i in range(3, 9)), 8) == (9, 6)
        self.assertRaises(StructuralError, insert_level, 1, 9, 0, 8)

    def test_offsets_within_quarter(self):
        levels = 12
        for c in range(0, 600):
            b = level_of(c, levels)
            for w in range(1, 300):
                level = find_insert_level(b, exponent_of(w), path_bits(c, levels))
                offset = frontier(level, c) - c
                assert 4 * offset >= w and offset <= w, (c, w, level, offset)


class TestBucketTreeOperations(unittest.TestCase):

    def test_unit_edge(self):
        t = BucketTree(16, 1)
        t.decrease_key(0, 0)
        assert t.extract_min() == (0, 0)
        assert t.decrease_key(1, 1) == 1

    def test_weight_seven(self):
        t = BucketTree(16, 1)
        t.decrease_key(0, 0)
        t.extract_min()
        pos = t.decrease_key(1, 7)
        assert 2 <= pos <= 7

    def test_reinsert_keeps_one_copy(self):
        t = BucketTree(16, 1)
        assert t.decrease_key(5, 7) == 4
        assert t.decrease_key(5, 1) == 1
        assert len(t) == 1
        assert t.tentative(5) == 1
        assert t.decrease_key(5, 7) is None
        assert t.active_bucket(1) == [(5, 1)]
        assert t.active_bucket(3) == []

    def test_fifo_within_bucket(self):
        t = BucketTree(16, 1)
        t.decrease_key(1, 1)
        t.decrease_key(2, 1)
        assert t.extract_min() == (1, 1)
        assert t.extract_min() == (2, 1)
        assert t.extract_min() is None

    def test_lowest_level(self):
        t = BucketTree(16, 4, low=8)
        assert t.decrease_key(0, 0) == 0
        assert 4 * t.decrease_key(1, 300) >= 300
        self.assertRaises(StructuralError, t.decrease_key, 2, 100)
        self.assertRaises(ArgumentError, BucketTree, 16, 1, 0)
        self.assertRaises(ArgumentError, BucketTree, 16, 1, 9)

    def test_contract_violation(self):
        t = BucketTree(16, 1)
        self.assertRaises(ContractViolation, t.decrease_key, 1, 3, 5)
        self.assertRaises(ArgumentError, t.decrease_key, 1, -1)

    def test_random_operations_monotone(self):
        rng = _rng(11)
        t = BucketTree(64, 2)
        t.decrease_key(0, 0)
        last = 0
        next_vertex = 1
        extracted = 0
        while extracted < 10000:
            item = t.extract_min()
            if item is None:
                break
            v, d = item
            assert d >= last
            assert t.current_distance == d
            last = d
            extracted += 1
            for _ in range(int(rng.integers(1, 3))):
                if next_vertex < 20000:
                    w = int(rng.integers(1, 5000))
                    pos = t.decrease_key(next_vertex, w, base=d)
                    assert d + math.ceil(w / 4) <= pos <= d + w
                    next_vertex += 1
        assert extracted > 100
        assert t.counters['extract_min'] == extracted


class TestApproxSssp(unittest.TestCase):

    def test_singleton(self):
        result = approx_sssp(Graph(1), 0)
        assert result.d == (0,)
        assert result.visit_order == (0,)
        assert result.alpha == 0.25

    def test_single_edge(self):
        for w in range(1, 200):
            d = approx_sssp(Graph(2, [(0, 1, w)]), 0).d[1]
            assert math.ceil(w / 4) <= d <= w

    def test_errors(self):
        g = Graph(2, [(0, 1, 5)])
        self.assertRaises(ArgumentError, approx_sssp, g, 2)
        self.assertRaises(ArgumentError, approx_sssp, g, 0, 1)
        self.assertRaises(ArgumentError, approx_sssp, [[(1, 0)], [(0, 0)]], 0)

    def test_quarter_preservation(self):
        for seed in range(40):
            rng = _rng(seed, 5)
            n = int(rng.integers(2, 200))
            g = gen_random(n, int(rng.integers(n - 1, 4 * n)), seed, max_weight=n * n)
            result = approx_sssp(g, 0)
            exact = dijkstra_exact(g, 0).d
            for v in range(n):
                assert exact[v] <= 4 * result.d[v] and result.d[v] <= exact[v], (seed, v)
            for u, v, w in g.edges:
                assert abs(result.d[v] - result.d[u]) <= w
            order = [result.d[v] for v in result.visit_order]
            assert order == sorted(order)
            assert len(result.visit_order) == n

    def test_unweighted_is_exact(self):
        g = gen_grid([12, 9])
        assert list(approx_sssp(g, 5).d) == bfs_hops(g, 5)

    def test_unreachable(self):
        result = approx_sssp(Graph(3, [(0, 1, 3)]), 0)
        assert math.isinf(result.d[2])
        assert result.visit_order == (0, 1)

    def test_directed_adjacency(self):
        result = approx_sssp([[(1, 4)], [], [(0, 1)]], 0)
        assert result.d[0] == 0 and 1 <= result.d[1] <= 4
        assert math.isinf(result.d[2])


class TestGabow(unittest.TestCase):

    def test_rounds(self):
        assert gabow_rounds(0.75) == 1
        assert gabow_rounds(0.5) == 3
        assert gabow_rounds(0.01) == 17
        self.assertRaises(ArgumentError, gabow_rounds, 0)
        self.assertRaises(ArgumentError, gabow_rounds, 1)

    def test_refinement_bound(self):
        for seed in range(10):
            g = gen_random(120, 400, seed, max_weight=10000)
            total = refine_gabow(g, 0, 0.01)
            exact = dijkstra_exact(g, 0).d
            for v in range(g.n):
                assert 0.99 * exact[v] <= total[v] <= exact[v]

    def test_residual_shrinks(self):
        g = gen_random(80, 300, 3, max_weight=5000)
        exact = dijkstra_exact(g, 0).d
        previous = 1.0
        for total in iter_gabow_rounds(g, 0, 6):
            residual = max((exact[v] - total[v]) / exact[v] for v in range(1, g.n))
            assert residual <= 0.75 * previous + 1e-12
            previous = residual

    def test_exact_first_round(self):
        g = gen_grid([6, 6])
        totals = list(iter_gabow_rounds(g, 0, 3))
        assert totals[0] == totals[1] == totals[2]
        assert list(totals[0]) == bfs_hops(g, 0)
