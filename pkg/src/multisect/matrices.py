"""Exact integer matrices and Smith normal form.

Everything here works over the integers with Python's arbitrary-precision
arithmetic; no value is ever rounded or wrapped.  The Smith normal form is
returned together with the unimodular transforms that witness it, and the
identity ``U @ A @ V == D`` is checked on every call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows:
            raise ValueError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("matrix is not rectangular")
            for x in row:
                if not isinstance(x, int):
                    raise ValueError("entries must be exact integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        prod = tuple(
            tuple(sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                  for j in range(other.cols))
            for i in range(self.rows)
        )
        return IntegerMatrix(self.rows, other.cols, prod)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j] == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)


def determinant(a: IntegerMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant requires a square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(row) for row in a.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """Diagonalization U @ A @ V = D with unimodular U, V.

    ``invariant_factors`` lists the nonzero, non-unit diagonal entries of D
    in divisibility order; ``rank`` counts all nonzero diagonal entries.
    """

    matrix: IntegerMatrix
    D: IntegerMatrix
    U: IntegerMatrix
    V: IntegerMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diagonal() if d != 0)


def _swap_rows(m, u, i, j):
    m[i], m[j] = m[j], m[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(m, v, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_row(m, u, dst, src, q):
    # row dst += q * row src
    mr, ms = m[dst], m[src]
    for j in range(len(mr)):
        mr[j] += q * ms[j]
    ur, us = u[dst], u[src]
    for j in range(len(ur)):
        ur[j] += q * us[j]


def _add_col(m, v, dst, src, q):
    for row in m:
        row[dst] += q * row[src]
    for row in v:
        row[dst] += q * row[src]


def smith_normal_form(a: IntegerMatrix) -> SmithForm:
    """Smith normal form by gcd-pivot elimination.

    Pivot rule: smallest nonzero absolute value in the trailing block,
    ties broken by (row, col).  The rule is fixed, so output is
    deterministic for a given input.
    """
    r, c = a.rows, a.cols
    m = [list(row) for row in a.entries]
    u = [list(row) for row in IntegerMatrix.identity(r).entries]
    v = [list(row) for row in IntegerMatrix.identity(c).entries]

    t = 0
    while t < min(r, c):
        pivot = None
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = m[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            _swap_rows(m, u, t, pivot[0])
        if pivot[1] != t:
            _swap_cols(m, v, t, pivot[1])

        dirty = False
        for i in range(t + 1, r):
            if m[i][t] != 0:
                q = m[i][t] // m[t][t]
                _add_row(m, u, i, t, -q)
                if m[i][t] != 0:
                    dirty = True
        for j in range(t + 1, c):
            if m[t][j] != 0:
                q = m[t][j] // m[t][t]
                _add_col(m, v, j, t, -q)
                if m[t][j] != 0:
                    dirty = True
        if dirty:
            continue

        # enforce the divisibility chain before moving on
        offender = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if m[i][j] % m[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(m, u, t, offender, 1)
            continue

        if m[t][t] < 0:
            for j in range(c):
                m[t][j] = -m[t][j]
            for j in range(r):
                u[t][j] = -u[t][j]
        t += 1

    d_mat = IntegerMatrix.from_rows(m, c)
    u_mat = IntegerMatrix.from_rows(u, r)
    v_mat = IntegerMatrix.from_rows(v, c)

    diag = d_mat.diagonal()
    factors = tuple(d for d in diag if d not in (0, 1))

    if (u_mat @ a) @ v_mat != d_mat:
        raise AssertionError("Smith normal form identity U*A*V = D failed")
    if determinant(u_mat) not in (1, -1) or determinant(v_mat) not in (1, -1):
        raise AssertionError("Smith normal form transforms are not unimodular")
    if not d_mat.is_diagonal():
        raise AssertionError("Smith normal form result is not diagonal")
    nonzero = [d for d in diag if d != 0]
    for x, y in zip(nonzero, nonzero[1:]):
        if y % x != 0:
            raise AssertionError("invariant factors do not form a divisibility chain")

    return SmithForm(a, d_mat, u_mat, v_mat, factors)
