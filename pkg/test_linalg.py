import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from src.application.linalg import (SparseIntMatrix, homology_of_pair,
                                    random_prime, rank, rank_mod_p,
                                    smith_normal_form)
from src.domain.exceptions import ArgumentError, ContractViolation
from src.domain.value_objects import SmithForm


@st.composite
def dense_matrices(draw, max_side: int = 6, bound: int = 3):
    rows = draw(st.integers(min_value=0, max_value=max_side))
    cols = draw(st.integers(min_value=0, max_value=max_side))
    entry = st.integers(min_value=-bound, max_value=bound)
    return [[draw(entry) for _ in range(cols)] for _ in range(rows)], cols


@st.composite
def sparse_matrices(draw, max_side: int = 50, bound: int = 4):
    rows = draw(st.integers(min_value=0, max_value=max_side))
    cols = draw(st.integers(min_value=0, max_value=max_side))
    if not rows or not cols:
        return SparseIntMatrix(rows, cols)
    positions = st.tuples(st.integers(0, rows - 1), st.integers(0, cols - 1))
    values = st.integers(min_value=-bound, max_value=bound).filter(bool)
    entries = draw(st.dictionaries(positions, values, max_size=min(rows * cols, 150)))
    return SparseIntMatrix(rows, cols, entries)


class TestSparseIntMatrix:
    def test_zeros_are_not_stored(self):
        m = SparseIntMatrix(2, 2)
        m[0, 1] = 3
        m[0, 1] = 0
        assert m.is_zero()
        assert m.nnz == 0

    def test_out_of_range_index(self):
        with pytest.raises(ArgumentError):
            SparseIntMatrix(2, 2)[2, 0]

    def test_product(self):
        a = SparseIntMatrix.from_dense([[1, 2], [0, 1]])
        b = SparseIntMatrix.from_dense([[1, 0], [-1, 1]])
        assert (a @ b).to_dense() == [[-1, 2], [-1, 1]]

    def test_product_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            SparseIntMatrix(2, 3) @ SparseIntMatrix(2, 3)

    def test_transpose_and_permute(self):
        m = SparseIntMatrix.from_dense([[1, 2, 0], [0, 0, 5]])
        assert m.transpose().to_dense() == [[1, 0], [2, 0], [0, 5]]
        assert m.permuted([1, 0], [2, 1, 0]).to_dense() == [[5, 0, 0], [0, 2, 1]]


class TestRank:
    def test_known_ranks(self):
        assert rank(SparseIntMatrix.identity(4)) == 4
        assert rank(SparseIntMatrix.from_dense([[1, 2], [2, 4]])) == 1
        assert rank(SparseIntMatrix(3, 0)) == 0

    @given(dense_matrices())
    @settings(max_examples=100, deadline=None)
    def test_matches_sympy(self, drawn):
        dense, cols = drawn
        m = SparseIntMatrix.from_dense(dense, cols)
        expected = Matrix(len(dense), cols, [v for row in dense for v in row]).rank() if dense and cols else 0
        assert rank(m) == expected
        assert rank(m, check_modular=True) == expected

    @given(sparse_matrices(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_invariant_under_permutation_and_transpose(self, m, data):
        row_perm = data.draw(st.permutations(range(m.rows)))
        col_perm = data.draw(st.permutations(range(m.cols)))
        expected = rank(m, check_modular=False)
        assert rank(m.permuted(row_perm, col_perm), check_modular=False) == expected
        assert rank(m.transpose(), check_modular=False) == expected

    @given(sparse_matrices())
    @settings(max_examples=200, deadline=None)
    def test_exact_rank_matches_modular_rank(self, m):
        assert rank_mod_p(m, random_prime()) == rank(m, check_modular=False)

    def test_modular_rank_drops_at_dividing_prime(self):
        m = SparseIntMatrix.from_dense([[2, 0], [0, 3]])
        assert rank_mod_p(m, 2) == 1
        assert rank_mod_p(m, 3) == 1
        assert rank_mod_p(m, 5) == 2


class TestSmithNormalForm:
    def test_diagonal_example(self):
        assert smith_normal_form(SparseIntMatrix.from_dense([[2, 0], [0, 3]])).factors == [1, 6]

    def test_gcd_chain(self):
        form = smith_normal_form(SparseIntMatrix.from_dense([[2, 4], [6, 8]]))
        assert form.factors == [2, 4]
        assert form.torsion == [2, 4]
        assert form.rank == 2

    def test_rejects_broken_chain(self):
        with pytest.raises(ValueError):
            SmithForm(factors=[2, 3])

    @given(dense_matrices(max_side=5))
    @settings(max_examples=60, deadline=None)
    def test_matches_sympy_invariant_factors(self, drawn):
        dense, cols = drawn
        m = SparseIntMatrix.from_dense(dense, cols)
        if dense and cols:
            block = DomainMatrix([[ZZ(v) for v in row] for row in dense], (len(dense), cols), ZZ)
            expected = sorted(abs(int(f)) for f in invariant_factors(block) if f != 0)
        else:
            expected = []
        assert smith_normal_form(m).factors == expected


class TestHomologyOfPair:
    def test_torsion_from_degree_two_map(self):
        d_k = SparseIntMatrix(0, 1)
        d_k1 = SparseIntMatrix.from_dense([[2]])
        assert homology_of_pair(d_k, d_k1) == (0, [2])
        assert homology_of_pair(d_k, d_k1, torsion=False) == (0, [])

    def test_circle(self):
        # boundary of the triangle's three edges onto its three vertices
        d1 = SparseIntMatrix.from_dense([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
        d2 = SparseIntMatrix(3, 0)
        assert homology_of_pair(d1, d2) == (1, [])
        assert homology_of_pair(SparseIntMatrix(0, 3), d1) == (1, [])

    def test_not_composable(self):
        with pytest.raises(ContractViolation):
            homology_of_pair(SparseIntMatrix(1, 2), SparseIntMatrix(3, 1))

    def test_nonzero_composition(self):
        with pytest.raises(ContractViolation):
            homology_of_pair(SparseIntMatrix.identity(1), SparseIntMatrix.identity(1))
