import pytest
from hypothesis import given, settings

from conftest import cycle, path, small_graphs
from src.application.chain_service import (basis_size_bound, boundary,
                                           boundary_column, build_complex,
                                           chain_rank, complex_homology,
                                           dump_basis, enumerate_basis,
                                           first_gap, first_smooth_before_gap,
                                           is_smooth, smooth_points)
from src.application.graph_service import BallMetric, all_pairs_distances
from src.domain.exceptions import ArgumentError, BudgetExceeded
from src.domain.models import ChainTuple


class TestSmoothness:
    def test_geodesic_middle_is_smooth(self):
        d = all_pairs_distances(path(3))
        t = ChainTuple.of((0, 1, 2), d)
        assert is_smooth(t, 1, d)
        assert smooth_points(t, d) == [1]

    def test_backtrack_is_not_smooth(self):
        d = all_pairs_distances(path(3))
        t = ChainTuple.of((0, 1, 0), d)
        assert not is_smooth(t, 1, d)
        assert first_smooth_before_gap(t, d) is None

    def test_endpoints_are_not_interior(self):
        d = all_pairs_distances(path(3))
        t = ChainTuple.of((0, 1, 2), d)
        with pytest.raises(ArgumentError):
            is_smooth(t, 0, d)
        with pytest.raises(ArgumentError):
            is_smooth(t, 2, d)

    def test_first_gap(self):
        d = all_pairs_distances(cycle(7))
        t = ChainTuple.of((0, 1, 3, 4), d)
        assert first_gap(t, d) == (1, 2)
        assert first_gap(ChainTuple.of((0, 1, 2), d), d) is None

    def test_smooth_point_must_precede_gap(self):
        d = all_pairs_distances(cycle(9))
        # 0 -> 1 -> 2 is geodesic, then a gap 2 -> 4
        t = ChainTuple.of((0, 1, 2, 4), d)
        assert first_smooth_before_gap(t, d) == 1
        # the only smooth point sits after the gap
        t = ChainTuple.of((0, 2, 3, 4), d)
        assert first_smooth_before_gap(t, d) is None


class TestEnumeration:
    def test_degree_zero(self):
        g = cycle(5)
        d = all_pairs_distances(g)
        assert chain_rank(g, d, 0, 0) == 5
        assert chain_rank(g, d, 0, 1) == 0

    def test_degree_above_length_is_empty(self):
        g = cycle(5)
        assert len(enumerate_basis(g, 3, 2, all_pairs_distances(g))) == 0

    def test_negative_bidegree_rejected(self):
        g = path(2)
        with pytest.raises(ArgumentError):
            enumerate_basis(g, -1, 2, all_pairs_distances(g))

    def test_walk_counts_on_diagonal(self):
        g = cycle(5)
        d = all_pairs_distances(g)
        assert chain_rank(g, d, 1, 1) == 2 * g.edge_count
        assert chain_rank(g, d, 2, 2) == 5 * 2 * 2

    def test_endpoint_restriction(self):
        g = path(3)
        d = all_pairs_distances(g)
        basis = enumerate_basis(g, 1, 2, d, start=0, end=2)
        assert dump_basis(basis) == ["(0,2)"]
        assert len(enumerate_basis(g, 2, 2, d, start=0, end=2)) == 1

    def test_budget(self):
        g = cycle(6)
        with pytest.raises(BudgetExceeded) as info:
            enumerate_basis(g, 2, 3, all_pairs_distances(g), budget=3)
        assert info.value.budget == 3

    @given(small_graphs(max_n=5))
    @settings(max_examples=30, deadline=None)
    def test_size_bound(self, g):
        d = all_pairs_distances(g)
        for length in range(0, 4):
            for k in range(0, length + 1):
                assert chain_rank(g, d, k, length) <= basis_size_bound(k, length, g.max_degree, g.n)

    @given(small_graphs(max_n=5))
    @settings(max_examples=30, deadline=None)
    def test_ball_metric_gives_same_generators(self, g):
        full = all_pairs_distances(g)
        ball = BallMetric(g, 3)
        for x in range(g.n):
            a = build_complex(g, full, 3, x)
            b = build_complex(g, ball, 3, x)
            assert a.cells == b.cells


class TestBoundary:
    def test_column_sign(self):
        d = all_pairs_distances(path(3))
        t = ChainTuple.of((0, 1, 2), d)
        assert boundary_column(t, d) == {ChainTuple((0, 2), 2): -1}

    def test_matrix(self):
        g = path(3)
        d = all_pairs_distances(g)
        source = enumerate_basis(g, 2, 2, d)
        target = enumerate_basis(g, 1, 2, d)
        spec = boundary(g, source, target, d)
        assert spec.matrix.shape == (len(target), len(source))
        assert spec.matrix.nnz == 2

    def test_mismatched_bidegrees(self):
        g = path(3)
        d = all_pairs_distances(g)
        with pytest.raises(ArgumentError):
            boundary(g, enumerate_basis(g, 2, 2, d), enumerate_basis(g, 1, 1, d), d)

    @given(small_graphs(max_n=6))
    @settings(max_examples=40, deadline=None)
    def test_boundary_squares_to_zero(self, g):
        d = all_pairs_distances(g)
        for x in range(g.n):
            cx = build_complex(g, d, 4, x)
            for k in range(2, 5):
                assert (cx.differential(k - 1) @ cx.differential(k)).is_zero()


class TestComplexHomology:
    def test_edge(self):
        g = path(2)
        d = all_pairs_distances(g)
        for length in range(0, 4):
            cx = build_complex(g, d, length, 0)
            for k in range(0, length + 1):
                expected = 1 if k == length else 0
                assert complex_homology(cx, k) == (expected, [])

    @given(small_graphs(max_n=5))
    @settings(max_examples=30, deadline=None)
    def test_euler_characteristic(self, g):
        d = all_pairs_distances(g)
        for length in range(0, 4):
            chains = sum((-1) ** k * chain_rank(g, d, k, length) for k in range(length + 1))
            homology = 0
            for x in range(g.n):
                cx = build_complex(g, d, length, x)
                homology += sum(
                    (-1) ** k * complex_homology(cx, k, torsion=False)[0]
                    for k in range(length + 1)
                )
            assert chains == homology
