"""Exact rational linear algebra: vectors, matrices, Kronecker products,
rank and linear solves over Q.

Scalars are `fractions.Fraction` (arbitrary precision, always in lowest
terms with positive denominator, which is exactly the invariant we need).
Vectors are tuples of Fractions; matrices are a thin immutable wrapper
around a row-major tuple grid so they can be hashed (group closure keys
on them) and shared freely between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rational = Fraction
Vector = tuple[Fraction, ...]


def rat(x) -> Fraction:
    """Coerce ints / strings / Fractions to an exact rational."""
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs) -> Vector:
    return tuple(rat(x) for x in xs)


def format_rational(x: Fraction) -> str:
    """Serialize as "num/den", denominator omitted when 1."""
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    """Parse "num/den" or "num" (also accepts ints for convenience)."""
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    return Fraction(str(s).strip())


@dataclass(frozen=True)
class Matrix:
    """Dense row-major exact rational matrix."""

    entries: tuple[Vector, ...]

    @classmethod
    def from_rows(cls, rows) -> "Matrix":
        grid = tuple(vec(r) for r in rows)
        if grid and any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged rows")
        return cls(grid)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(self.col(j) for j in range(self.cols)))

    def matvec(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} @ {len(v)}")
        return tuple(sum(r[j] * v[j] for j in range(self.cols)) for r in self.entries)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        return Matrix(
            tuple(
                tuple(sum(a * b for a, b in zip(r, c)) for c in ot.entries)
                for r in self.entries
            )
        )

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        return self.matvec(vec(other))

    def inverse(self) -> "Matrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("not square")
        cols = []
        for j in range(n):
            e = tuple(Fraction(int(i == j)) for i in range(n))
            x = solve_exact(self, e)
            if x is None:
                raise ValueError("singular matrix")
            cols.append(x)
        return Matrix(tuple(cols)).transpose()

    def inverse_transpose(self) -> "Matrix":
        return self.inverse().transpose()


def dot(a: Vector, b: Vector) -> Fraction:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def kron(a: Vector, b: Vector) -> Vector:
    """Kronecker product: result[len(b)*i + j] = a[i]*b[j]."""
    return tuple(x * y for x in a for y in b)


def kron_matrix(A: Matrix, B: Matrix) -> Matrix:
    return Matrix.from_rows(
        [
            [
                A.entries[i // B.rows][j // B.cols] * B.entries[i % B.rows][j % B.cols]
                for j in range(A.cols * B.cols)
            ]
            for i in range(A.rows * B.rows)
        ]
    )


def _clear_denominators(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        L = 1
        for x in r:
            L = L * x.denominator // gcd(L, x.denominator)
        out.append([int(x * L) for x in r])
    return out


def rank(M: Matrix) -> int:
    """Exact rank over Q by fraction-free (Bareiss-style) elimination."""
    rows = _clear_denominators([list(r) for r in M.entries])
    m, n = len(rows), (len(rows[0]) if rows else 0)
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                rows[i][j] = (rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]) // prev
            rows[i][c] = 0
        prev = rows[r][c]
        r += 1
        if r == m:
            break
    return r


def _rref(aug: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    m = len(aug)
    n = len(aug[0]) if m else 0
    piv = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    return aug, piv


def solve_exact(A: Matrix, b: Vector) -> Vector | None:
    """Any exact solution x of A x = b, or None when the system is inconsistent.

    Underdetermined systems return the solution with free variables at 0.
    """
    if A.rows != len(b):
        raise ValueError("dimension mismatch")
    n = A.cols
    aug = [list(A.entries[i]) + [rat(b[i])] for i in range(A.rows)]
    R, piv = _rref(aug)
    piv = [c for c in piv if c < n]
    for i, row in enumerate(R):
        if all(x == 0 for x in row[:n]) and row[n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return tuple(x)


def solve_affine(A: Matrix, b: Vector) -> tuple[Vector, list[Vector]] | None:
    """Particular solution plus a nullspace basis for A x = b, or None."""
    if A.rows != len(b):
        raise ValueError("dimension mismatch")
    n = A.cols
    aug = [list(A.entries[i]) + [rat(b[i])] for i in range(A.rows)]
    R, piv = _rref(aug)
    piv = [c for c in piv if c < n]
    for row in R:
        if all(x == 0 for x in row[:n]) and row[n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    pivset = set(piv)
    basis = []
    for fc in (c for c in range(n) if c not in pivset):
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][fc]
        basis.append(tuple(v))
    return tuple(x), basis


def primitive_integer(v) -> tuple[int, ...]:
    """Scale a rational vector by the positive rational that makes it an
    integer vector with content 1 (direction is preserved)."""
    fr = [rat(x) for x in v]
    L = 1
    for x in fr:
        L = L * x.denominator // gcd(L, x.denominator)
    ints = [int(x * L) for x in fr]
    g = 0
    for t in ints:
        g = gcd(g, t)
    if g > 1:
        ints = [t // g for t in ints]
    return tuple(ints)
