import math
from math import perm

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynroute.errors import ExperimentInvariantError, OracleRefusal, ParameterError
from dynroute.oracle import (GenerationRecord, dijkstra, enumerate_all_paths, iter_simple_paths,
                             offline_performance, path_cost, quality, recovery_times)

from oracles import all_simple_paths, brute_cost, make_graph, random_graph


def rec(q, env=0, g=1):
    return GenerationRecord("x", 0, g, env, 1.0, 1.0, q, 1.0)


class TestDijkstra:
    def test_single_edge(self):
        r = dijkstra(make_graph({(0, 1): 7.0}), 0, 1)
        assert (r.cost, r.path) == (7.0, (0, 1))

    def test_unreachable(self):
        r = dijkstra(make_graph({(0, 1): 1.0}, n=3), 0, 2)
        assert r.cost == math.inf and r.path == () and not r.reachable

    def test_lexicographic_tie_break(self):
        g = make_graph({(0, 2): 1, (2, 3): 1, (0, 1): 1, (1, 3): 1})
        assert dijkstra(g, 0, 3).path == (0, 1, 3)

    def test_path_cost_equals_reported_cost(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            g = random_graph(rng, 12, p=0.3)
            r = dijkstra(g, 0, 11)
            if r.reachable:
                assert path_cost(g, r.path) == r.cost

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 10), p=st.floats(0.1, 0.9))
    def test_agrees_with_brute_force(self, seed, n, p):
        g = random_graph(np.random.default_rng(seed), n, p=p)
        paths = all_simple_paths(g, 0, n - 1)
        expected = min((brute_cost(g, q) for q in paths), default=math.inf)
        assert dijkstra(g, 0, n - 1).cost == pytest.approx(expected, rel=1e-12)
        assert enumerate_all_paths(g, 0, n - 1).cost == dijkstra(g, 0, n - 1).cost

    def test_scale_invariant_quality(self):
        g = random_graph(np.random.default_rng(4), 9, p=0.5)
        scaled = make_graph({e: 3.5 * c for e, c in g.edges.items()}, n=9)
        opt, opt_scaled = dijkstra(g, 0, 8), dijkstra(scaled, 0, 8)
        for path in all_simple_paths(g, 0, 8)[:20]:
            assert quality(path_cost(g, path), opt.cost) == pytest.approx(
                quality(path_cost(scaled, path), opt_scaled.cost), rel=1e-12)


class TestEnumeration:
    def test_triangle(self, triangle):
        r = enumerate_all_paths(triangle, 0, 2)
        assert (r.cost, r.path) == (2.0, (0, 1, 2))

    def test_line_has_one_path(self, line_graph):
        assert [p for p, _ in iter_simple_paths(line_graph, 0, 2)] == [(0, 1, 2)]

    def test_complete_graph_path_count(self):
        k5 = make_graph({(i, j): 1.0 for i in range(5) for j in range(i + 1, 5)})
        expected = sum(perm(3, k) for k in range(4))
        assert expected == 16
        assert len(list(iter_simple_paths(k5, 0, 4))) == expected

    def test_refuses_large_graphs(self):
        g = make_graph({(0, 12): 1.0})
        with pytest.raises(OracleRefusal):
            enumerate_all_paths(g, 0, 12)
        with pytest.raises(OracleRefusal):
            enumerate_all_paths(make_graph({(0, 1): 1.0}), 0, 1, node_cap=13)


class TestMetrics:
    def test_quality(self):
        assert quality(10.0, 10.0) == 1.0
        assert quality(math.inf, 10.0) == 0.0
        assert quality(12.5, 10.0) == pytest.approx(0.8)

    def test_quality_needs_reachable_optimum(self):
        with pytest.raises(ExperimentInvariantError):
            quality(5.0, math.inf)

    def test_offline_performance(self):
        assert offline_performance([rec(1.0)] * 4) == 1.0
        assert offline_performance([rec(0.0), rec(1.0)]) == 0.5
        with pytest.raises(ParameterError):
            offline_performance([])

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=50))
    def test_offline_performance_bounded(self, qs):
        assert 0 <= offline_performance([rec(q) for q in qs]) <= 1

    def test_recovery_times(self):
        run = [rec(q, env, g) for g, (q, env) in enumerate(
            [(1.0, 0), (1.0, 0), (0.5, 1), (0.8, 1), (0.95, 1), (0.2, 2), (0.3, 2)], start=1)]
        assert recovery_times(run, horizon=50) == [2, 50]
        assert recovery_times(run[:2], horizon=50) == []
