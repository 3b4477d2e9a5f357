"""Exact dense linear algebra over scalars and polynomial entries.

Determinants use fraction-free (Bareiss) elimination so polynomial entries
never leave the ring.  ``solve_linear_exact`` handles the recurrence systems
of the Lyapunov solver: a constant scalar matrix with a polynomial
right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .poly import MultiPoly
from .scalars import QuadExt, is_zero

Entry = Union[Fraction, QuadExt, MultiPoly]


def _inv(x):
    if isinstance(x, QuadExt):
        return x.inverse()
    return 1 / Fraction(x)


def _entry_zero(x) -> bool:
    if isinstance(x, MultiPoly):
        return x.is_zero()
    return is_zero(x)


def _exact_div(num, den):
    """num / den, exact in the entry ring; raises if the division fails."""
    if isinstance(num, MultiPoly):
        if isinstance(den, MultiPoly):
            q = num.exact_div(den)
        else:
            q = num * _inv(den)
        if q is None:
            raise ArithmeticError("inexact division in Bareiss elimination")
        return q
    if isinstance(den, MultiPoly):
        if _entry_zero(num):
            return Fraction(0)
        q = MultiPoly.const(num).exact_div(den)
        if q is None:
            raise ArithmeticError("inexact division in Bareiss elimination")
        return q
    return num * _inv(den)


class ExactMatrix:
    """Rectangular matrix with exact scalar or polynomial entries."""

    def __init__(self, entries: Sequence[Sequence[Entry]]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Fraction(0)
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return ExactMatrix(out)

    def determinant(self) -> Entry:
        return determinant(self)

    def __repr__(self):
        return f"ExactMatrix({self.entries!r})"


def determinant(A: ExactMatrix) -> Entry:
    """Exact determinant via Bareiss fraction-free elimination.

    Works for scalar entries and for polynomial entries (the intermediate
    divisions are exact by the Bareiss identity).
    """
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in A.entries]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _entry_zero(m[k][k]):
            pivot_row = next(
                (i for i in range(k + 1, n) if not _entry_zero(m[i][k])), None
            )
            if pivot_row is None:
                return Fraction(0)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = _exact_div(num, prev)
            m[i][k] = Fraction(0)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


@dataclass
class LinearSolution:
    """Outcome of solve_linear_exact.

    kind is "unique", "parametrized" or "inconsistent".  For solvable
    systems ``solution`` holds one solution with every free variable pinned
    to zero; ``free_indices`` lists the pinned unknowns.  For inconsistent
    systems ``failing_rows`` lists the original equation indices that
    reduce to 0 = nonzero.
    """

    kind: str
    solution: Optional[list] = None
    free_indices: list = field(default_factory=list)
    failing_rows: list = field(default_factory=list)


def solve_linear_exact(
    A: ExactMatrix,
    b: Sequence[Entry],
    column_order: Optional[Sequence[int]] = None,
) -> LinearSolution:
    """Solve A x = b with constant scalar A and scalar/polynomial b.

    Gaussian elimination over the coefficient field; the right-hand side may
    contain polynomials in parameters.  ``column_order`` fixes the pivot
    search order (earlier columns are preferred as pivots), which pins which
    unknowns end up free in underdetermined systems.
    """
    if A.rows != len(b):
        raise ValueError("dimension mismatch between matrix and rhs")
    n, m = A.rows, A.cols
    order = list(column_order) if column_order is not None else list(range(m))
    if sorted(order) != list(range(m)):
        raise ValueError("column_order must be a permutation of the columns")
    rows = [[Fraction(x) if isinstance(x, int) else x for x in row]
            for row in A.entries]
    rhs = list(b)
    pivot_of_col: dict = {}
    used_rows: list = []
    row_origin = list(range(n))
    r = 0
    for col in order:
        pr = next((i for i in range(r, n) if not _entry_zero(rows[i][col])), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        rhs[r], rhs[pr] = rhs[pr], rhs[r]
        row_origin[r], row_origin[pr] = row_origin[pr], row_origin[r]
        inv = _inv(rows[r][col])
        rows[r] = [x * inv for x in rows[r]]
        rhs[r] = rhs[r] * inv
        for i in range(n):
            if i != r and not _entry_zero(rows[i][col]):
                factor = rows[i][col]
                rows[i] = [a - factor * p for a, p in zip(rows[i], rows[r])]
                rhs[i] = rhs[i] - factor * rhs[r]
        pivot_of_col[col] = r
        used_rows.append(r)
        r += 1
        if r == n:
            break
    failing = [row_origin[i] for i in range(r, n) if not _entry_zero(rhs[i])]
    if failing:
        return LinearSolution(kind="inconsistent", failing_rows=failing)
    free = [c for c in range(m) if c not in pivot_of_col]
    x: list = [Fraction(0)] * m
    for col, prow in pivot_of_col.items():
        x[col] = rhs[prow]
    kind = "unique" if not free else "parametrized"
    return LinearSolution(kind=kind, solution=x, free_indices=free)
