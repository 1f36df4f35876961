"""Exact rational linear algebra.

Scalars are ``fractions.Fraction`` (arbitrary precision, always normalized:
positive denominator, gcd(|num|, den) = 1). Matrices are immutable grids of
such scalars. Everything here is exact; there is no floating point on any
code path.

Determinants use fraction-free Bareiss elimination over the integers (rows
are scaled by their denominator lcm first), which keeps intermediate values
at minor size instead of letting naive fraction arithmetic blow up.

Inertia (the signature of a symmetric matrix) is computed by symmetric
Gaussian reduction with diagonal pivoting and an exact 2x2 symmetric pivot
for the all-zero-diagonal case, then read off via Sylvester's law.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction

Vector = tuple[Rat, ...]


def rat(value) -> Rat:
    """Coerce ints, strings and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not allowed in exact computations")
    return Fraction(value)


def rat_to_str(value: Rat) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1; sign on p."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_from_str(text: str) -> Rat:
    return Fraction(text)


def vec(values: Iterable) -> Vector:
    return tuple(rat(v) for v in values)


def dot(u: Sequence[Rat], v: Sequence[Rat]) -> Rat:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), start=Fraction(0))


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue sign counts (n_pos, n_neg, n_zero) of a symmetric matrix."""

    n_pos: int
    n_neg: int
    n_zero: int

    @property
    def dim(self) -> int:
        return self.n_pos + self.n_neg + self.n_zero


class RatMatrix:
    """Immutable matrix of exact rationals.

    Rows are stored as a tuple of tuples of ``Fraction``. All operations
    return new matrices; instances are safe to share between threads.
    """

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable]):
        grid = tuple(tuple(rat(x) for x in row) for row in rows)
        if grid and any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", len(grid[0]) if grid else 0)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    def __getitem__(self, ij: tuple[int, int]) -> Rat:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rat_to_str(x) for x in row) for row in self.entries)
        return f"RatMatrix({self.rows}x{self.cols}: {body})"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        e = self.entries
        return all(e[i][j] == e[j][i] for i in range(self.rows) for j in range(i))

    @property
    def is_positive(self) -> bool:
        """All entries strictly positive."""
        return all(x > 0 for row in self.entries for x in row)

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.entries)) if self.rows else RatMatrix([])

    def matvec(self, v: Sequence[Rat]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(dot(row, v) for row in self.entries)

    def matmul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = other.transpose().entries
        return RatMatrix([[dot(r, c) for c in cols] for r in self.entries])

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix([[Fraction(i == j) for j in range(n)] for i in range(n)])

    def to_lists(self) -> list[list[Rat]]:
        return [list(row) for row in self.entries]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _integer_rows(m: RatMatrix) -> tuple[list[list[int]], Rat]:
    """Scale each row to integers; return (rows, product of scale factors)."""
    rows = []
    scale = Fraction(1)
    for row in m.entries:
        f = 1
        for x in row:
            f = _lcm(f, x.denominator)
        scale *= f
        rows.append([int(x * f) for x in row])
    return rows, scale


def det(m: RatMatrix) -> Rat:
    """Exact determinant via fraction-free Bareiss elimination.

    Rational input is scaled to an integer matrix row by row; every Bareiss
    division is exact over the integers.
    """
    if not m.is_square:
        raise ValueError("determinant requires a square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai = a[i]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * pivot - aik * ak[j]) // prev
            ai[k] = 0
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1]) / scale


def inertia(m: RatMatrix) -> Inertia:
    """Exact (n_pos, n_neg, n_zero) of a symmetric matrix.

    Symmetric Gaussian reduction with diagonal pivoting; when every
    remaining diagonal entry is zero but the block is not, a 2x2 symmetric
    pivot [[0, a], [a, 0]] is split off, contributing (1, 1, 0). Correctness
    rests on Sylvester's law of inertia: all reductions used here are
    congruences.
    """
    if not m.is_symmetric:
        raise ValueError("inertia requires a symmetric matrix")
    a = m.to_lists()
    live = list(range(m.rows))
    n_pos = n_neg = n_zero = 0
    while live:
        pivot = next((p for p in live if a[p][p] != 0), None)
        if pivot is not None:
            d = a[pivot][pivot]
            if d > 0:
                n_pos += 1
            else:
                n_neg += 1
            live.remove(pivot)
            # One-sided row elimination suffices: the pivot column of each
            # updated row becomes 0, so the transposed side of the congruence
            # A -> E A E^T does nothing more on the remaining block, and
            # A[r][c] - A[r][p]A[p][c]/d is already symmetric.
            for r in live:
                if a[r][pivot] == 0:
                    continue
                f = a[r][pivot] / d
                ar, ap = a[r], a[pivot]
                for c in live:
                    ar[c] -= f * ap[c]
            continue
        off = next(
            ((i, j) for i in live for j in live if j > i and a[i][j] != 0), None
        )
        if off is None:
            n_zero += len(live)
            break
        # All remaining diagonal entries vanish: split off the block
        # [[0, d], [d, 0]], congruent to diag(d, -d).
        i, j = off
        d = a[i][j]
        n_pos += 1
        n_neg += 1
        live.remove(i)
        live.remove(j)
        for r in live:
            u, v = a[r][i], a[r][j]
            if u == 0 and v == 0:
                continue
            fi, fj = v / d, u / d
            ar, ai, aj = a[r], a[i], a[j]
            for c in live:
                ar[c] -= fi * ai[c] + fj * aj[c]
    return Inertia(n_pos, n_neg, n_zero)


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = m.to_lists()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if row is None:
            continue
        a[r], a[row] = a[row], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix(a), pivots


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def nullspace_basis(m: RatMatrix) -> list[Vector]:
    """Basis of {z : Mz = 0}, one vector per free column of the RREF.

    Vectors are linearly independent by construction (each has a 1 in its
    own free column and 0 in every other free column).
    """
    reduced, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        z = [Fraction(0)] * m.cols
        z[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            z[pc] = -reduced[r, fc]
        basis.append(tuple(z))
    return basis


def solve(m: RatMatrix, b: Sequence[Rat]) -> Vector:
    """Solve Mz = b exactly; raises if the system is inconsistent."""
    if m.rows != len(b):
        raise ValueError("dimension mismatch")
    aug = RatMatrix([list(row) + [bi] for row, bi in zip(m.entries, b)])
    reduced, pivots = rref(aug)
    if m.cols in pivots:
        raise ValueError("inconsistent linear system")
    z = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        z[pc] = reduced[r, m.cols]
    return tuple(z)


def principal_submatrix(m: RatMatrix, subset: Iterable[int]) -> RatMatrix:
    """Rows and columns of a symmetric matrix restricted to ``subset``.

    Indices are 0-based, must be nonempty, in range, and are taken in
    ascending order.
    """
    if not m.is_symmetric:
        raise ValueError("principal submatrix requires a symmetric matrix")
    idx = sorted(set(subset))
    if not idx:
        raise ValueError("empty index subset")
    if idx[0] < 0 or idx[-1] >= m.rows:
        raise ValueError(f"index out of range: {idx}")
    e = m.entries
    return RatMatrix([[e[i][j] for j in idx] for i in idx])
