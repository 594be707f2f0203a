"""
Exact sparse integer matrices: rank, Smith normal form and the homology of a
composable pair of boundary matrices.
"""

import heapq
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from sympy import ZZ, randprime
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from src.config import settings
from src.domain.exceptions import ArgumentError, ContractViolation
from src.domain.value_objects import SmithForm
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

Row = Dict[int, int]


class SparseIntMatrix:
    """Integer matrix stored column-wise as {col: {row: value}} with no stored zeros."""

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], int]] = None):
        if rows < 0 or cols < 0:
            raise ArgumentError(f"invalid shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._columns: Dict[int, Row] = {}
        for (r, c), v in (entries or {}).items():
            self[r, c] = v

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: Optional[int] = None) -> "SparseIntMatrix":
        rows = len(dense)
        width = cols if cols is not None else (len(dense[0]) if rows else 0)
        return cls(
            rows,
            width,
            {(r, c): v for r, row in enumerate(dense) for c, v in enumerate(row) if v},
        )

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def _check(self, r: int, c: int):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ArgumentError(f"index ({r}, {c}) outside {self.rows}x{self.cols}")

    def __setitem__(self, key: Tuple[int, int], value: int):
        r, c = key
        self._check(r, c)
        if value:
            self._columns.setdefault(c, {})[r] = int(value)
        else:
            column = self._columns.get(c)
            if column is not None:
                column.pop(r, None)
                if not column:
                    del self._columns[c]

    def __getitem__(self, key: Tuple[int, int]) -> int:
        r, c = key
        self._check(r, c)
        return self._columns.get(c, {}).get(r, 0)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self._columns.values())

    def column(self, c: int) -> Row:
        return dict(self._columns.get(c, {}))

    def items(self) -> Iterator[Tuple[Tuple[int, int], int]]:
        for c in sorted(self._columns):
            column = self._columns[c]
            for r in sorted(column):
                yield (r, c), column[r]

    def row_dicts(self) -> Dict[int, Row]:
        rows: Dict[int, Row] = {}
        for c, column in self._columns.items():
            for r, v in column.items():
                rows.setdefault(r, {})[c] = v
        return rows

    def is_zero(self) -> bool:
        return not self._columns

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.items()})

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseIntMatrix":
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return SparseIntMatrix(
            self.rows, self.cols, {(row_perm[r], col_perm[c]): v for (r, c), v in self.items()}
        )

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ContractViolation(f"cannot compose {self.shape} with {other.shape}")
        result = SparseIntMatrix(self.rows, other.cols)
        for c, column in other._columns.items():
            acc: Row = {}
            for k, b in column.items():
                for r, a in self._columns.get(k, {}).items():
                    acc[r] = acc.get(r, 0) + a * b
            for r, v in acc.items():
                if v:
                    result._columns.setdefault(c, {})[r] = v
        return result

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.items():
            dense[r][c] = v
        return dense

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseIntMatrix)
            and self.shape == other.shape
            and self._columns == other._columns
        )

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


class _Eliminator:
    """
    Row-reduction state shared by the exact, modular and unit-pivot passes.

    Rows live in `rows`; `col_rows[c]` holds the ids of rows with an entry
    in column c. Pivot columns come from a lazy heap keyed by column count.
    """

    def __init__(self, m: SparseIntMatrix, modulus: Optional[int] = None):
        self.modulus = modulus
        self.rows: Dict[int, Row] = {}
        for r, row in m.row_dicts().items():
            if modulus is not None:
                row = {c: v % modulus for c, v in row.items() if v % modulus}
            if row:
                self.rows[r] = row
        self.col_rows: Dict[int, Set[int]] = {}
        for r, row in self.rows.items():
            for c in row:
                self.col_rows.setdefault(c, set()).add(r)
        self._heap: List[Tuple[int, int]] = [(len(rs), c) for c, rs in self.col_rows.items()]
        heapq.heapify(self._heap)

    def _touch(self, c: int):
        rs = self.col_rows.get(c)
        if rs:
            heapq.heappush(self._heap, (len(rs), c))
        elif rs is not None:
            del self.col_rows[c]

    def next_column(self) -> Optional[int]:
        while self._heap:
            count, c = heapq.heappop(self._heap)
            rs = self.col_rows.get(c)
            if rs and len(rs) == count:
                return c
        return None

    def choose_row(self, c: int, units_only: bool = False) -> Optional[int]:
        best = None
        best_key = None
        for r in self.col_rows[c]:
            v = self.rows[r][c]
            if units_only and abs(v) != 1:
                continue
            key = (len(self.rows[r]), abs(v), r)
            if best_key is None or key < best_key:
                best, best_key = r, key
        return best

    def _replace_row(self, r: int, new_row: Row):
        old = self.rows[r]
        for c in old:
            if c not in new_row:
                self.col_rows[c].discard(r)
                self._touch(c)
        for c in new_row:
            if c not in old:
                self.col_rows.setdefault(c, set()).add(r)
                self._touch(c)
        if new_row:
            self.rows[r] = new_row
        else:
            del self.rows[r]

    def _combine(self, target: Row, pivot: Row, c: int) -> Row:
        a = pivot[c]
        b = target[c]
        p = self.modulus
        if p is not None:
            factor = b * pow(a, -1, p) % p
            out = dict(target)
            for j, v in pivot.items():
                w = (out.get(j, 0) - factor * v) % p
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
            return out
        if abs(a) == 1:
            factor = b * a
            out = dict(target)
            for j, v in pivot.items():
                w = out.get(j, 0) - factor * v
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
            return out
        out = {j: a * v for j, v in target.items()}
        for j, v in pivot.items():
            w = out.get(j, 0) - b * v
            if w:
                out[j] = w
            else:
                out.pop(j, None)
        g = reduce(gcd, out.values(), 0)
        if g > 1:
            out = {j: v // g for j, v in out.items()}
        return out

    def pivot(self, r: int, c: int):
        """Clear column c below and above row r, then retire row r and column c."""
        pivot_row = self.rows[r]
        for other in sorted(self.col_rows[c] - {r}):
            self._replace_row(other, self._combine(self.rows[other], pivot_row, c))
        for j in pivot_row:
            rs = self.col_rows.get(j)
            if rs is not None:
                rs.discard(r)
                self._touch(j)
        del self.rows[r]
        self.col_rows.pop(c, None)


def _eliminate_rank(m: SparseIntMatrix, modulus: Optional[int] = None) -> int:
    state = _Eliminator(m, modulus)
    rank = 0
    while True:
        c = state.next_column()
        if c is None:
            return rank
        r = state.choose_row(c)
        state.pivot(r, c)
        rank += 1


def rank_mod_p(m: SparseIntMatrix, prime: int) -> int:
    return _eliminate_rank(m, modulus=prime)


def random_prime(bits: int = 61) -> int:
    return randprime(2 ** (bits - 1), 2 ** bits)


def rank(m: SparseIntMatrix, check_modular: Optional[bool] = None) -> int:
    """Rank over the rationals by fraction-free elimination."""
    result = _eliminate_rank(m)
    if check_modular is None:
        check_modular = settings.MODULAR_RANK_CHECK
    if check_modular:
        prime = random_prime()
        modular = rank_mod_p(m, prime)
        if modular != result:
            raise ContractViolation(
                f"exact rank {result} disagrees with rank {modular} mod {prime}"
            )
    return result


def smith_normal_form(m: SparseIntMatrix) -> SmithForm:
    """
    Invariant factors of an integer matrix.

    Unit pivots are eliminated sparsely, each contributing a factor 1; the
    remaining block is handed to sympy as a dense matrix over ZZ.
    """
    state = _Eliminator(m)
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(state.col_rows):
            if c not in state.col_rows:
                continue
            r = state.choose_row(c, units_only=True)
            if r is not None:
                state.pivot(r, c)
                units += 1
                progress = True

    residual_rows = sorted(state.rows)
    residual_cols = sorted(state.col_rows)
    factors: List[int] = []
    if residual_rows and residual_cols:
        col_index = {c: j for j, c in enumerate(residual_cols)}
        dense = [[ZZ(0)] * len(residual_cols) for _ in residual_rows]
        for i, r in enumerate(residual_rows):
            for c, v in state.rows[r].items():
                dense[i][col_index[c]] = ZZ(v)
        block = DomainMatrix(dense, (len(residual_rows), len(residual_cols)), ZZ)
        logger.debug(f"Smith form residual block {block.shape} after {units} unit pivots")
        factors = sorted(abs(int(f)) for f in invariant_factors(block) if f != 0)
    return SmithForm(factors=[1] * units + factors)


def homology_of_pair(d_k: SparseIntMatrix, d_k1: SparseIntMatrix, torsion: bool = True,
                     check_exact: bool = True) -> Tuple[int, List[int]]:
    """
    Rank and torsion of ker(d_k) / im(d_k1).

    d_k maps C_k -> C_{k-1} and d_k1 maps C_{k+1} -> C_k.
    """
    if d_k.cols != d_k1.rows:
        raise ContractViolation(
            f"boundaries are not composable: {d_k.shape} after {d_k1.shape}"
        )
    if check_exact and not (d_k @ d_k1).is_zero():
        raise ContractViolation("boundary composition is nonzero")
    nullity = d_k.cols - rank(d_k)
    if torsion:
        form = smith_normal_form(d_k1)
        return nullity - form.rank, form.torsion
    return nullity - rank(d_k1), []
