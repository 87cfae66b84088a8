"""Combinatorics of the classical polytope P^{m->n}_d: exact vertex counts,
row reduction of conditional distributions, and branch-and-bound enumeration
of the effective deterministic strategies.

A vertex of P^{m->n}_d is a 0/1 stochastic matrix using at most d distinct
columns; we represent it as the assignment row -> column (0-based).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .ratlin import Vector, format_rational, parse_rational, rat, vec

DeterministicStrategy = tuple[int, ...]


@dataclass(frozen=True)
class ConditionalDistribution:
    """Row-stochastic m x n matrix of exact rationals."""

    probs: tuple[Vector, ...]

    def __post_init__(self):
        for r in self.probs:
            if any(x < 0 for x in r):
                raise ValueError("negative probability entry")
            if sum(r) != 1:
                raise ValueError("row does not sum to 1")

    @property
    def m(self) -> int:
        return len(self.probs)

    @property
    def n(self) -> int:
        return len(self.probs[0]) if self.probs else 0

    @classmethod
    def from_rows(cls, rows) -> "ConditionalDistribution":
        return cls(tuple(vec(r) for r in rows))

    def row_support(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.probs[i]) if x > 0)

    def vectorized(self) -> Vector:
        return tuple(x for row in self.probs for x in row)

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "probs": [[format_rational(x) for x in row] for row in self.probs],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConditionalDistribution":
        return cls.from_rows(
            [[parse_rational(x) for x in row] for row in d["probs"]]
        )

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "ConditionalDistribution":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))


def stirling2(m: int, k: int) -> int:
    """Stirling number of the second kind, by the alternating-sum formula."""
    if m < 0 or k < 0:
        raise ValueError("arguments must be nonnegative")
    if k == 0:
        return 1 if m == 0 else 0
    total = sum((-1) ** (k - j) * comb(k, j) * j**m for j in range(k + 1))
    return total // factorial(k)


def count_vertices(m: int, n: int, d: int) -> int:
    """Number of vertices of P^{m->n}_d: sum_{k=1}^{d} k! C(n,k) {m brace k}."""
    if min(m, n, d) < 1:
        raise ValueError("m, n, d must be >= 1")
    return sum(factorial(k) * comb(n, k) * stirling2(m, k) for k in range(1, d + 1))


def strategy_to_distribution(s: DeterministicStrategy, m: int, n: int) -> ConditionalDistribution:
    """0/1 matrix with a single 1 per row at the assigned column."""
    if len(s) != m or any(not 0 <= c < n for c in s):
        raise ValueError("assignment out of range")
    return ConditionalDistribution.from_rows(
        [[1 if j == s[i] else 0 for j in range(n)] for i in range(m)]
    )


def _row_in_hull(target: Vector, others: list[Vector]) -> bool:
    """Exact test: is target a convex combination of the other rows?"""
    if not others:
        return False
    from .lp import exact_l1_lp  # local import: lp depends on this module

    # columns: each candidate row extended with a trailing 1 (sum lambda = 1)
    cols = [tuple(r) + (Fraction(1),) for r in others]
    b = tuple(target) + (Fraction(1),)
    opt, _, _ = exact_l1_lp(cols, b)
    return opt == 0


def reduce_rows(p: ConditionalDistribution) -> tuple[ConditionalDistribution, list[int]]:
    """Drop every row that is a convex combination of the other kept rows.

    Membership of p in P^{m->n}_d is invariant under this reduction.  Each
    candidate row is tested by exact LP feasibility; rows are scanned in
    order, so the first of a set of duplicates is the one kept.
    """
    kept = list(range(p.m))
    changed = True
    while changed:
        changed = False
        # scan from the back so the first of a duplicate set is the one kept
        for i in reversed(list(kept)):
            others = [p.probs[j] for j in kept if j != i]
            if _row_in_hull(p.probs[i], others):
                kept.remove(i)
                changed = True
    reduced = ConditionalDistribution(tuple(p.probs[i] for i in kept))
    return reduced, kept


def effective_vertices(p: ConditionalDistribution, d: int) -> list[DeterministicStrategy]:
    """Deterministic strategies that can carry weight in a decomposition of p:
    every row picks a column where p is positive, and at most d distinct
    columns are used.

    Branch and bound: rows are branched in order of increasing support size
    (fail-first), columns in ascending index; a branch is pruned as soon as
    the distinct-column budget is exceeded.  Output is in that deterministic
    depth-first order.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    m = p.m
    supports = [p.row_support(i) for i in range(m)]
    if any(not s for s in supports):
        return []
    order = sorted(range(m), key=lambda i: (len(supports[i]), i))
    out: list[DeterministicStrategy] = []
    cur = [0] * m

    def branch(k: int, used_mask: int, used_count: int) -> None:
        if k == m:
            out.append(tuple(cur))
            return
        i = order[k]
        for j in supports[i]:
            bit = 1 << j
            cur[i] = j
            if used_mask & bit:
                branch(k + 1, used_mask, used_count)
            elif used_count < d:
                branch(k + 1, used_mask | bit, used_count + 1)

    branch(0, 0, 0)
    return out


def count_effective_vertices(p: ConditionalDistribution, d: int) -> int:
    """Count of effective_vertices(p, d) without materializing the list."""
    if d < 1:
        raise ValueError("d must be >= 1")
    m = p.m
    supports = [p.row_support(i) for i in range(m)]
    if any(not s for s in supports):
        return 0
    order = sorted(range(m), key=lambda i: (len(supports[i]), i))
    total = 0

    def branch(k: int, used_mask: int, used_count: int) -> None:
        nonlocal total
        if k == m:
            total += 1
            return
        i = order[k]
        for j in supports[i]:
            bit = 1 << j
            if used_mask & bit:
                branch(k + 1, used_mask, used_count)
            elif used_count < d:
                branch(k + 1, used_mask | bit, used_count + 1)

    branch(0, 0, 0)
    return total
