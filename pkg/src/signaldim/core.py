"""GPT system model: extremal states, barycenter-normalized extremal effects,
the unit effect, and finite symmetry groups acting on them.

A system of linear dimension l is a pair of finite vector families in Q^l.
Effects are stored normalized against the barycenter of the extremal states,
so any resolution of the unit effect is automatically a probability
distribution over effect indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ratlin import (
    Matrix,
    Vector,
    dot,
    format_rational,
    parse_rational,
    rat,
    vec,
)

DEFAULT_CLOSURE_BOUND = 10**6


class NotASymmetryError(ValueError):
    """Raised when a matrix does not permute the system's states/effects."""


@dataclass(frozen=True)
class GptSystem:
    linear_dimension: int
    states: tuple[Vector, ...]
    effects: tuple[Vector, ...]
    unit_effect: Vector
    symmetry_generators: tuple[Matrix, ...] = ()

    def validate(self) -> None:
        l = self.linear_dimension
        for v in (*self.states, *self.effects, self.unit_effect):
            if len(v) != l:
                raise ValueError("vector length does not match linear_dimension")
        for w in self.states:
            if dot(self.unit_effect, w) != 1:
                raise ValueError("unit effect must pair to 1 with every state")
            for e in self.effects:
                if dot(e, w) < 0:
                    raise ValueError("negative state/effect pairing")
        sset = set(self.states)
        eset = set(self.effects)
        for U in self.symmetry_generators:
            Uinvt = U.inverse_transpose()
            if {U.matvec(w) for w in self.states} != sset:
                raise NotASymmetryError("generator does not permute the states")
            if {Uinvt.matvec(e) for e in self.effects} != eset:
                raise NotASymmetryError("generator does not permute the effects")
            if Uinvt.matvec(self.unit_effect) != self.unit_effect:
                raise NotASymmetryError("generator does not fix the unit effect")

    def barycenter(self) -> Vector:
        n = len(self.states)
        return tuple(
            sum(col, Fraction(0)) / n for col in zip(*self.states)
        )

    def effect_matrix(self) -> Matrix:
        """l x n matrix whose columns are the stored extremal effects."""
        return Matrix.from_rows(
            [[e[i] for e in self.effects] for i in range(self.linear_dimension)]
        )

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "linear_dimension": self.linear_dimension,
            "states": [[format_rational(x) for x in w] for w in self.states],
            "effects": [[format_rational(x) for x in e] for e in self.effects],
            "unit_effect": [format_rational(x) for x in self.unit_effect],
            "symmetry_generators": [
                [[format_rational(x) for x in row] for row in U.entries]
                for U in self.symmetry_generators
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GptSystem":
        sys = cls(
            linear_dimension=int(d["linear_dimension"]),
            states=tuple(tuple(parse_rational(x) for x in w) for w in d["states"]),
            effects=tuple(tuple(parse_rational(x) for x in e) for e in d["effects"]),
            unit_effect=tuple(parse_rational(x) for x in d["unit_effect"]),
            symmetry_generators=tuple(
                Matrix.from_rows([[parse_rational(x) for x in row] for row in U])
                for U in d.get("symmetry_generators", [])
            ),
        )
        sys.validate()
        return sys

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "GptSystem":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))


@dataclass(frozen=True)
class SymmetryGroup:
    """Finite matrix group, closed under product, containing the identity."""

    elements: tuple[Matrix, ...]

    def __len__(self) -> int:
        return len(self.elements)


def normalize_effects(raw_effects, states) -> list[Vector]:
    """Rescale each effect ray so it pairs to 1 with the state barycenter.

    After this, any p >= 0 with sum_y p_y e_y = unit effect satisfies
    sum_y p_y = 1 (pair both sides with the barycenter).
    """
    states = [vec(w) for w in states]
    n = len(states)
    bary = tuple(sum(col, Fraction(0)) / n for col in zip(*states))
    out = []
    for e in raw_effects:
        e = vec(e)
        s = dot(e, bary)
        if s <= 0:
            raise ValueError(
                f"effect {tuple(map(str, e))} has nonpositive barycenter pairing {s}"
            )
        out.append(tuple(x / s for x in e))
    return out


def close_group(generators, bound: int = DEFAULT_CLOSURE_BOUND) -> SymmetryGroup:
    """Finite closure of a generator set under matrix product (BFS)."""
    gens = [g if isinstance(g, Matrix) else Matrix.from_rows(g) for g in generators]
    for g in gens:
        try:
            g.inverse()
        except ValueError:
            raise ValueError("non-invertible generator") from None
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].rows
    ident = Matrix.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = a.matmul(g)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
                    if len(seen) > bound:
                        raise ValueError(f"closure exceeds bound {bound}")
        frontier = nxt
    return SymmetryGroup(tuple(sorted(seen, key=lambda m: m.entries)))


def effect_permutation(U: Matrix, system: GptSystem) -> tuple[int, ...]:
    """Permutation j -> j' with e_{j'} = U^{-T} e_j, by exact vector lookup."""
    uinvt = U.inverse_transpose()
    index = {e: i for i, e in enumerate(system.effects)}
    perm = []
    for j, e in enumerate(system.effects):
        img = uinvt.matvec(e)
        if img not in index:
            raise NotASymmetryError(
                f"transformed effect {j} is not among the stored effects"
            )
        perm.append(index[img])
    return tuple(perm)


def act_on_measurement(U: Matrix, system: GptSystem, p) -> Vector:
    """Push measurement weights through a symmetry: the weight on e_j moves
    to the index of U^{-T} e_j.  Accepts a weight vector or anything with a
    ``weights`` attribute; returns the transformed weight vector.
    """
    weights = getattr(p, "weights", p)
    perm = effect_permutation(U, system)
    out = [Fraction(0)] * len(weights)
    for j, w in enumerate(weights):
        out[perm[j]] = w
    return tuple(out)
