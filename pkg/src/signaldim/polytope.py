"""Exact H-description to V-description conversion via the double
description method.

Equalities are eliminated first by projecting onto the affine hull (exact
nullspace basis), the remaining inequality system is homogenized, and the
DD loop runs on the resulting pointed cone with all-integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .ratlin import Matrix, Vector, dot, primitive_integer, rank, rat, solve_affine, vec


class UnboundedPolytopeError(ValueError):
    """A recession ray was detected where a bounded polytope was required."""


@dataclass(frozen=True)
class HPolytope:
    """{x : Aeq x = beq, Ain x >= bin}."""

    Aeq: Matrix
    beq: Vector
    Ain: Matrix
    bin: Vector

    def __post_init__(self):
        if self.Aeq.rows and self.Ain.rows and self.Aeq.cols != self.Ain.cols:
            raise ValueError("equality/inequality column counts disagree")
        if self.Aeq.rows != len(self.beq) or self.Ain.rows != len(self.bin):
            raise ValueError("right-hand side length mismatch")

    @property
    def dim(self) -> int:
        return self.Aeq.cols if self.Aeq.rows else self.Ain.cols

    @classmethod
    def from_rows(cls, eq_rows, beq, in_rows, bin_) -> "HPolytope":
        return cls(Matrix.from_rows(eq_rows), vec(beq), Matrix.from_rows(in_rows), vec(bin_))


@dataclass(frozen=True)
class VPolytope:
    vertices: tuple[Vector, ...]


def _dd_cone(H: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {z : H z >= 0}, H integer rows.

    Incremental double description: a full-rank row subset seeds a simplicial
    cone, remaining rows are inserted one at a time.  Insertion order picks
    the row satisfied by the fewest current rays (tie-break: row index).
    """
    D = len(H[0])
    n_rows = len(H)

    # seed: greedily pick D linearly independent rows
    chosen: list[int] = []
    for idx in range(n_rows):
        trial = chosen + [idx]
        if rank(Matrix.from_rows([H[i] for i in trial])) == len(trial):
            chosen.append(idx)
        if len(chosen) == D:
            break
    if len(chosen) < D:
        raise UnboundedPolytopeError("constraint matrix is rank deficient (cone has lineality)")

    B = Matrix.from_rows([H[i] for i in chosen])
    Binv = B.inverse()
    rays = [primitive_integer(Binv.col(j)) for j in range(D)]

    def zmask(r: tuple[int, ...]) -> int:
        m = 0
        for i in range(n_rows):
            if sum(a * b for a, b in zip(H[i], r)) == 0:
                m |= 1 << i
        return m

    R = [(r, zmask(r)) for r in rays]
    proc_mask = 0
    for i in chosen:
        proc_mask |= 1 << i
    remaining = [i for i in range(n_rows) if i not in set(chosen)]

    while remaining and R:
        scored = []
        for i in remaining:
            h = H[i]
            sat = sum(1 for (r, _) in R if sum(a * b for a, b in zip(h, r)) >= 0)
            scored.append((sat, i))
        _, cur = min(scored)
        remaining.remove(cur)
        h = H[cur]

        vals = [sum(a * b for a, b in zip(h, r)) for (r, _) in R]
        plus = [k for k, v in enumerate(vals) if v > 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        minus = [k for k, v in enumerate(vals) if v < 0]

        new_R = [R[k] for k in plus] + [R[k] for k in zero]
        for kp in plus:
            rp, zp = R[kp]
            for km in minus:
                rm, zm = R[km]
                common = zp & zm & proc_mask
                if common.bit_count() < D - 2:
                    continue
                # combinatorial adjacency: no third ray's active set contains
                # the common active set
                adjacent = True
                for kk, (_, zz) in enumerate(R):
                    if kk == kp or kk == km:
                        continue
                    if (zz & proc_mask) & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                a, b = vals[kp], -vals[km]
                nr = tuple(b * x + a * y for x, y in zip(rp, rm))
                g = 0
                for t in nr:
                    g = gcd(g, t)
                if g > 1:
                    nr = tuple(t // g for t in nr)
                new_R.append((nr, zmask(nr)))
        proc_mask |= 1 << cur
        R = new_R

    return [r for (r, _) in R]


def dd_enumerate(h: HPolytope) -> VPolytope:
    """All vertices of a bounded H-polytope, exactly.

    Raises UnboundedPolytopeError when a recession ray survives; an empty
    polytope yields an empty vertex list.
    """
    n = h.dim
    if h.Aeq.rows:
        aff = solve_affine(h.Aeq, h.beq)
        if aff is None:
            return VPolytope(())
        x0, basis = aff
    else:
        x0, basis = tuple(Fraction(0) for _ in range(n)), [
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        ]

    k = len(basis)
    if k == 0:
        ok = all(
            dot(h.Ain.row(i), x0) >= h.bin[i] for i in range(h.Ain.rows)
        )
        return VPolytope((x0,) if ok else ())

    # x = x0 + N t;  Ain x >= bin  ->  (Ain N) t >= bin - Ain x0
    # homogenize with coordinate s: rows [Ain N | Ain x0 - bin], plus s >= 0
    H_rows: list[tuple[int, ...]] = []
    for i in range(h.Ain.rows):
        a = h.Ain.row(i)
        coeffs = [dot(a, bvec) for bvec in basis]
        const = dot(a, x0) - h.bin[i]
        H_rows.append(primitive_integer(coeffs + [const]))
    H_rows.append(tuple([0] * k + [1]))

    rays = _dd_cone(H_rows)
    verts = []
    recession = False
    for r in rays:
        s = r[-1]
        if s == 0:
            recession = True
            continue
        t = [Fraction(c, s) for c in r[:-1]]
        v = tuple(
            x0[i] + sum(basis[j][i] * t[j] for j in range(k)) for i in range(n)
        )
        verts.append(v)
    if recession and verts:
        raise UnboundedPolytopeError("polytope has a recession ray")
    verts = sorted(set(verts))
    return VPolytope(tuple(verts))


def is_vertex(h: HPolytope, x) -> bool:
    """True iff the constraints active at x span the ambient space.

    Raises ValueError when x violates a constraint.
    """
    x = vec(x)
    rows = [list(h.Aeq.row(i)) for i in range(h.Aeq.rows)]
    for i in range(h.Aeq.rows):
        if dot(h.Aeq.row(i), x) != h.beq[i]:
            raise ValueError(f"x violates equality {i}")
    for i in range(h.Ain.rows):
        s = dot(h.Ain.row(i), x)
        if s < h.bin[i]:
            raise ValueError(f"x violates inequality {i}")
        if s == h.bin[i]:
            rows.append(list(h.Ain.row(i)))
    if not rows:
        return h.dim == 0
    return rank(Matrix.from_rows(rows)) == h.dim
