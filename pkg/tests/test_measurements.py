from fractions import Fraction as F

import pytest

from signaldim.core import close_group
from signaldim.measurements import (
    Measurement,
    check_extremality,
    enumerate_extremal_measurements,
    measurement_polytope,
    reduce_to_orbits,
    support_size_bound_check,
)
from signaldim.models import HS_MODEL, classical_simplex, compose, squit
from signaldim.polytope import is_vertex
from signaldim.ratlin import Matrix, vec


def test_squit_two_measurements():
    ms = enumerate_extremal_measurements(squit())
    assert {m.weights for m in ms} == {
        vec((F(1, 2), 0, F(1, 2), 0)),
        vec((0, F(1, 2), 0, F(1, 2))),
    }


def test_classical_bit_single_measurement():
    ms = enumerate_extremal_measurements(classical_simplex(2))
    assert [m.weights for m in ms] == [vec((F(1, 2), F(1, 2)))]


def test_hs_408():
    ms = enumerate_extremal_measurements(compose(HS_MODEL))
    assert len(ms) == 408


def test_extremality_squit_pair():
    sq = squit()
    assert check_extremality(sq, Measurement(vec((F(1, 2), 0, F(1, 2), 0))))


def test_uniform_mixture_not_extremal():
    sq = squit()
    uniform = Measurement(vec((F(1, 4), F(1, 4), F(1, 4), F(1, 4))))
    # 4 effects spanning a rank-3 space cannot be linearly independent
    assert not check_extremality(sq, uniform)


def test_every_enumerated_measurement_is_extremal_and_vertex():
    # Lemma-1 equivalence, both directions, on the squit
    sq = squit()
    h = measurement_polytope(sq)
    for m in enumerate_extremal_measurements(sq):
        assert check_extremality(sq, m)
        assert is_vertex(h, m.weights)


def test_support_size_bound():
    sq = squit()
    ms = enumerate_extremal_measurements(sq)
    assert support_size_bound_check(sq, ms)
    assert max(m.support_size() for m in ms) == 2 <= 3
    fabricated = Measurement(vec([F(1, 10)] * 10))
    fake_system = squit()
    assert not support_size_bound_check(fake_system, [fabricated])


def test_squit_orbit_reduction():
    sq = squit()
    ms = enumerate_extremal_measurements(sq)
    g = close_group(sq.symmetry_generators)
    orbits = reduce_to_orbits(ms, g, sq)
    assert len(orbits) == 1
    assert orbits[0].size == 2


def test_trivial_group_orbit_per_measurement():
    sq = squit()
    ms = enumerate_extremal_measurements(sq)
    g = close_group([Matrix.identity(3)])
    orbits = reduce_to_orbits(ms, g, sq)
    assert len(orbits) == len(ms)
    assert all(o.size == 1 for o in orbits)


def test_hs_orbits_15():
    hs = compose(HS_MODEL)
    ms = enumerate_extremal_measurements(hs)
    g = close_group(hs.symmetry_generators)
    orbits = reduce_to_orbits(ms, g, hs)
    assert len(orbits) == 15
    assert sum(o.size for o in orbits) == 408
    # representatives are canonical: lexicographic minimum over the orbit
    from signaldim.core import act_on_measurement

    rep = orbits[3].representative
    images = [act_on_measurement(U, hs, rep) for U in g.elements]
    assert min(images) == rep.weights


def test_measurement_identity_holds_exactly():
    hs = compose(HS_MODEL)
    E = hs.effect_matrix()
    for m in enumerate_extremal_measurements(hs):
        assert E.matvec(m.weights) == hs.unit_effect
        assert sum(m.weights) == 1
        assert all(w >= 0 for w in m.weights)
