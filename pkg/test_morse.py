import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import cycle, from_nx, path, small_graphs
from src.application.chain_service import build_complex, complex_homology
from src.application.graph_service import all_pairs_distances, girth_vertex
from src.application.morse import (MatchedPair, MorseMatching,
                                   build_f_matching, build_h_matching,
                                   classify_unmatched, dump_critical_cells,
                                   h_depth, morse_reduce_vertex, reduce,
                                   restriction_mismatches, validate_matching)
from src.domain.exceptions import (ArgumentError, ContractViolation,
                                   PreconditionError)
from src.domain.models import Graph
from src.domain.models import INF, ChainTuple


def homology_profile(cx, length):
    return [complex_homology(cx, k) for k in range(length + 1)]


def connected_graphs(max_n: int, min_n: int = 1):
    """Every connected graph with min_n..max_n vertices, up to isomorphism."""
    return [
        from_nx(h) for h in nx.graph_atlas_g()
        if min_n <= h.number_of_nodes() <= max_n and nx.is_connected(h)
    ]


def high_girth_starts(g: Graph):
    starts = []
    for x in range(g.n):
        gx = girth_vertex(g, x)
        if gx >= 5:
            starts.append((x, gx))
    return starts


def assert_unmatched_are_classified(g: Graph, lmax: int):
    d = all_pairs_distances(g)
    for x, gx in high_girth_starts(g):
        for length in range(1, lmax + 1):
            cx = build_complex(g, d, length, x)
            m = build_f_matching(g, x, length, d, cx=cx, girth_x=gx)
            critical = {t for cells in reduce(cx, m, validate=False).cells.values() for t in cells}
            tagged = {
                t for cells in cx.cells.values() for t in cells
                if classify_unmatched(t, g, x, d, girth_x=gx) != "matched"
            }
            assert critical == tagged, (g.edge_list, x, length)


def assert_reduction_preserves_homology(g: Graph, lmax: int):
    d = all_pairs_distances(g)
    for x, gx in high_girth_starts(g):
        for length in range(1, lmax + 1):
            cx = build_complex(g, d, length, x)
            reduced = morse_reduce_vertex(g, x, length, d, girth_x=gx, cx=cx, validate=True)
            assert homology_profile(reduced, length) == homology_profile(cx, length), (g.edge_list, x, length)


class TestFMatching:
    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_is_a_morse_matching(self, n):
        g = cycle(n)
        d = all_pairs_distances(g)
        for length in range(1, 5):
            cx = build_complex(g, d, length, 0)
            m = build_f_matching(g, 0, length, d, cx=cx)
            report = validate_matching(cx, m)
            assert report.valid, report.detail
            assert all(abs(p.coefficient) == 1 for p in m.pairs)

    def test_needs_girth_five(self):
        g = cycle(4)
        with pytest.raises(PreconditionError):
            build_f_matching(g, 0, 2, all_pairs_distances(g))

    def test_depth_out_of_range(self):
        g = cycle(5)
        with pytest.raises(ArgumentError):
            build_f_matching(g, 0, 2, all_pairs_distances(g), i_max=2)

    def test_length_zero_is_empty(self):
        g = cycle(5)
        assert len(build_f_matching(g, 0, 0, all_pairs_distances(g))) == 0

    def test_trees_reduce_to_the_diagonal(self):
        g = path(5)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 3, 2)
        reduced = morse_reduce_vertex(g, 2, 3, d, cx=cx)
        assert homology_profile(reduced, 3) == [(0, []), (0, []), (0, []), (2, [])]
        assert reduced.total_size < cx.total_size


class TestHMatching:
    def test_needs_enough_girth(self):
        g = cycle(5)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 3, 0)
        reduced = reduce(cx, build_f_matching(g, 0, 3, d, cx=cx))
        with pytest.raises(PreconditionError):
            build_h_matching(g, 0, 3, 1, d, reduced)

    def test_valid_on_reduced_complex(self):
        g = cycle(9)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 4, 0)
        reduced = reduce(cx, build_f_matching(g, 0, 4, d, cx=cx))
        m = build_h_matching(g, 0, 4, 2, d, reduced)
        assert validate_matching(reduced, m).valid

    def test_depth(self):
        assert h_depth(4, INF) == 3
        assert h_depth(4, 5) == 0
        assert h_depth(4, 7) == 1
        assert h_depth(2, 9) == 1
        assert h_depth(0, INF) == 0


class TestReduction:
    @pytest.mark.parametrize("graph", [cycle(5), cycle(7), cycle(9), path(4),
                                       from_nx(nx.petersen_graph())],
                             ids=["C5", "C7", "C9", "P4", "petersen"])
    def test_homology_is_preserved(self, graph):
        d = all_pairs_distances(graph)
        for length in range(2, 5):
            cx = build_complex(graph, d, length, 0)
            reduced = morse_reduce_vertex(graph, 0, length, d, cx=cx, validate=True)
            assert homology_profile(reduced, length) == homology_profile(cx, length)
            assert reduced.total_size <= cx.total_size

    def test_f_only_agrees_with_f_then_h(self):
        g = cycle(11)
        d = all_pairs_distances(g)
        f_only = morse_reduce_vertex(g, 0, 4, d, use_h=False)
        both = morse_reduce_vertex(g, 0, 4, d)
        assert homology_profile(f_only, 4) == homology_profile(both, 4)
        assert both.total_size <= f_only.total_size
        assert both.truncation == (0, 4)

    def test_empty_matching_changes_nothing(self):
        g = cycle(5)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 3, 0)
        same = reduce(cx, MorseMatching())
        assert same.cells == cx.cells
        assert restriction_mismatches(cx, same) == []

    def test_rejects_overlapping_pairs(self):
        g = path(3)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 2, 0)
        upper = ChainTuple.of((0, 1, 2), d)
        lower = ChainTuple((0, 2), 2)
        pair = MatchedPair(upper=upper, lower=lower, coefficient=-1)
        report = validate_matching(cx, MorseMatching(pairs=(pair, pair)))
        assert report.violation == "disjointness"
        with pytest.raises(PreconditionError):
            reduce(cx, MorseMatching(pairs=(pair, pair)))

    def test_rejects_non_unit_coefficient(self):
        g = path(3)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 2, 0)
        backtrack = ChainTuple.of((0, 1, 0), d)
        pair = MatchedPair(upper=backtrack, lower=ChainTuple((0, 2), 2), coefficient=0)
        assert validate_matching(cx, MorseMatching(pairs=(pair,))).violation == "coefficient"

    @pytest.mark.parametrize("coefficient", [0, 2, -3])
    def test_non_unit_coefficient_is_refused_without_validation(self, coefficient):
        g = path(3)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 2, 0)
        pair = MatchedPair(upper=ChainTuple.of((0, 1, 2), d), lower=ChainTuple((0, 2), 2),
                           coefficient=coefficient)
        with pytest.raises(ContractViolation):
            reduce(cx, MorseMatching(pairs=(pair,)), validate=False)

    def test_short_cycles_away_from_the_start(self):
        # five-cycle through 0 with a triangle hanging off vertex 2
        g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5), (5, 6), (6, 2)])
        assert [x for x, _ in high_girth_starts(g)] == [0, 1, 3, 4]
        assert_reduction_preserves_homology(g, 4)

    def test_small_connected_graphs(self):
        for g in connected_graphs(6):
            assert_reduction_preserves_homology(g, 3)

    @pytest.mark.slow
    def test_connected_graphs_on_seven_vertices(self):
        for g in connected_graphs(7, min_n=7):
            assert_reduction_preserves_homology(g, 4)

    def test_critical_cell_dump(self):
        g = path(2)
        d = all_pairs_distances(g)
        cx = build_complex(g, d, 2, 0)
        assert dump_critical_cells(cx) == ["2\t(0,1,0)"]


class TestClassification:
    def setup_method(self):
        self.g = cycle(7)
        self.d = all_pairs_distances(self.g)

    def tag(self, vertices):
        return classify_unmatched(ChainTuple.of(vertices, self.d), self.g, 0, self.d)

    def test_matched_upper_and_lower(self):
        assert self.tag((0, 1, 2)) == "matched"
        assert self.tag((0, 2)) == "matched"

    def test_no_gap(self):
        assert self.tag((0,)) == "i"
        assert self.tag((0, 1, 0)) == "i"

    def test_late_gaps(self):
        assert self.tag((0, 1, 4)) == "ii"
        assert self.tag((0, 1, 3)) == "iii"

    def test_gap_at_start(self):
        assert self.tag((0, 3)) == "iv"

    def test_wrong_start(self):
        with pytest.raises(ArgumentError):
            self.tag((1, 2))

    def test_short_girth(self):
        g = cycle(4)
        d = all_pairs_distances(g)
        with pytest.raises(PreconditionError):
            classify_unmatched(ChainTuple.of((0, 1), d), g, 0, d)

    def test_small_connected_graphs(self):
        for g in connected_graphs(6):
            assert_unmatched_are_classified(g, 3)

    @pytest.mark.slow
    def test_connected_graphs_on_seven_vertices(self):
        for g in connected_graphs(7, min_n=7):
            assert_unmatched_are_classified(g, 5)

    @pytest.mark.slow
    @given(small_graphs(min_n=8, max_n=8))
    @settings(max_examples=40, deadline=None)
    def test_graphs_on_eight_vertices(self, g):
        assert_unmatched_are_classified(g, 5)
