"""Extremal measurements with ray-extremal effects, and their reduction to
symmetry orbits.

A measurement is a probability vector p over the stored extremal normalized
effects with E p = unit effect.  The extremal ones are exactly the vertices
of that polytope, equivalently (support linear independence) the resolutions
whose supported effects are linearly independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import GptSystem, SymmetryGroup, effect_permutation
from .polytope import HPolytope, dd_enumerate
from .ratlin import Matrix, Vector, rank, vec


@dataclass(frozen=True)
class Measurement:
    """Probability weights over effect indices; sum_y w_y e_y = unit effect."""

    weights: Vector

    def support(self) -> tuple[int, ...]:
        return tuple(j for j, w in enumerate(self.weights) if w != 0)

    def support_size(self) -> int:
        return sum(1 for w in self.weights if w != 0)


@dataclass(frozen=True)
class MeasurementOrbit:
    representative: Measurement
    size: int
    class_id: int


def measurement_polytope(system: GptSystem) -> HPolytope:
    """Faces description {p : E p = unit effect, p >= 0}."""
    n = len(system.effects)
    E = system.effect_matrix()
    eye = Matrix.identity(n)
    zeros = vec([0] * n)
    return HPolytope(E, system.unit_effect, eye, zeros)


def enumerate_extremal_measurements(system: GptSystem) -> list[Measurement]:
    """All vertices of the measurement polytope, via double description."""
    vp = dd_enumerate(measurement_polytope(system))
    return [Measurement(v) for v in vp.vertices]


def check_extremality(system: GptSystem, p: Measurement) -> bool:
    """Support linear independence test (the vertex criterion)."""
    supp = p.support()
    if not supp:
        return False
    M = Matrix.from_rows([system.effects[j] for j in supp])
    return rank(M) == len(supp)


def support_size_bound_check(system: GptSystem, measurements) -> bool:
    """Every support size must be bounded by the linear dimension."""
    return all(m.support_size() <= system.linear_dimension for m in measurements)


def reduce_to_orbits(
    measurements, group: SymmetryGroup, system: GptSystem
) -> list[MeasurementOrbit]:
    """Partition measurements into orbits under the group action on effect
    indices.  Representative = lexicographically smallest weight vector;
    orbits are emitted sorted by (support size, representative).
    """
    perms = [effect_permutation(U, system) for U in group.elements]
    seen: dict[Vector, Vector] = {}
    orbit_members: dict[Vector, set[Vector]] = {}
    for m in measurements:
        w = m.weights
        if w in seen:
            continue
        images = set()
        for perm in perms:
            img = [Fraction(0)] * len(w)
            for j, wj in enumerate(w):
                img[perm[j]] = wj
            images.add(tuple(img))
        rep = min(images)
        orbit_members.setdefault(rep, set()).update(images)
        for img in images:
            seen[img] = rep
    input_set = {m.weights for m in measurements}
    orbits = []
    order = sorted(
        orbit_members, key=lambda rep: (sum(1 for x in rep if x != 0), rep)
    )
    for cid, rep in enumerate(order):
        members = orbit_members[rep] & input_set
        orbits.append(
            MeasurementOrbit(
                representative=Measurement(rep),
                size=len(orbit_members[rep]),
                class_id=cid,
            )
        )
        if len(members) != len(orbit_members[rep]):
            raise ValueError(
                "orbit leaves the input measurement set; "
                "group is not a symmetry of the enumerated polytope"
            )
    assert sum(o.size for o in orbits) == len(input_set)
    return orbits
