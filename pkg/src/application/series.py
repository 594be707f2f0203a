"""Integer power series truncated at a fixed order."""

from typing import Iterable, List, Sequence

from src.domain.exceptions import ArgumentError, DomainError


class TruncatedSeries:
    """a_0 + a_1 q + ... + a_N q^N with arithmetic modulo q^{N+1}."""

    __slots__ = ("coefficients", "order")

    def __init__(self, coefficients: Iterable[int], order: int):
        if order < 0:
            raise ArgumentError(f"order must be non-negative, got {order}")
        coefficients = list(coefficients)[: order + 1]
        coefficients += [0] * (order + 1 - len(coefficients))
        self.coefficients = tuple(int(c) for c in coefficients)
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def constant(cls, c: int, order: int) -> "TruncatedSeries":
        return cls((c,), order)

    @classmethod
    def monomial(cls, exponent: int, order: int, c: int = 1) -> "TruncatedSeries":
        if exponent > order:
            return cls.zero(order)
        return cls([0] * exponent + [c], order)

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, int):
            return TruncatedSeries.constant(other, self.order)
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ArgumentError(f"orders differ: {self.order} vs {other.order}")
            return other
        return NotImplemented

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(
            (a + b for a, b in zip(self.coefficients, other.coefficients)), self.order
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-a for a in self.coefficients), self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        out = [0] * (self.order + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(self.order + 1 - i):
                    out[i + j] += ai * b[j]
        return TruncatedSeries(out, self.order)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        a0 = self.coefficients[0]
        if a0 not in (1, -1):
            raise DomainError(f"constant term {a0} is not a unit of the integers")
        out: List[int] = [a0]
        for n in range(1, self.order + 1):
            acc = sum(self.coefficients[i] * out[n - i] for i in range(1, n + 1))
            out.append(-a0 * acc)
        return TruncatedSeries(out, self.order)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TruncatedSeries.constant(other, self.order)
        return (
            isinstance(other, TruncatedSeries)
            and self.order == other.order
            and self.coefficients == other.coefficients
        )

    def __hash__(self) -> int:
        return hash((self.coefficients, self.order))

    def __repr__(self) -> str:
        terms = [f"{c}q^{i}" for i, c in enumerate(self.coefficients) if c]
        return " + ".join(terms) if terms else "0"


def solve_series_system(matrix: Sequence[Sequence[TruncatedSeries]],
                        rhs: Sequence[TruncatedSeries]) -> List[TruncatedSeries]:
    """
    Solve M w = rhs by Gaussian elimination over truncated series.

    Every pivot must have a unit constant term; for M congruent to the
    identity modulo q this holds throughout the elimination.
    """
    n = len(matrix)
    a = [list(row) for row in matrix]
    b = list(rhs)
    for p in range(n):
        pivot_inverse = a[p][p].inverse()
        for r in range(p + 1, n):
            if a[r][p].is_zero():
                continue
            factor = a[r][p] * pivot_inverse
            for c in range(p, n):
                a[r][c] = a[r][c] - factor * a[p][c]
            b[r] = b[r] - factor * b[p]
    w: List[TruncatedSeries] = [TruncatedSeries.zero(b[0].order if b else 0)] * n
    for p in reversed(range(n)):
        acc = b[p]
        for c in range(p + 1, n):
            acc = acc - a[p][c] * w[c]
        w[p] = acc * a[p][p].inverse()
    return w
