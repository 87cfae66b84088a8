from fractions import Fraction as F

import pytest

from signaldim.classical import ConditionalDistribution
from signaldim.lp import verify_certificate
from signaldim.measurements import Measurement, enumerate_extremal_measurements
from signaldim.models import classical_simplex, squit
from signaldim.signaling import (
    induced_distribution,
    measurement_dimension_report,
    minimal_classical_dimension,
    signaling_dimension,
)


def test_induced_squit_distribution():
    sq = squit()
    m = Measurement((F(1, 2), F(0), F(1, 2), F(0)))
    p = induced_distribution(sq, m)
    # e_0 pairs to 2 on states 0,1 and to 0 on states 2,3; e_2 the reverse
    assert p.probs == (
        (F(1), F(0)),
        (F(1), F(0)),
        (F(0), F(1)),
        (F(0), F(1)),
    )


def test_induced_rows_sum_to_one():
    sq = squit()
    for m in enumerate_extremal_measurements(sq):
        p = induced_distribution(sq, m)
        assert all(sum(row) == 1 for row in p.probs)


def test_induced_on_barycenter_gives_weights():
    # a synthetic system whose single state is its own barycenter
    from signaldim.core import GptSystem
    from signaldim.ratlin import vec

    system = GptSystem(
        linear_dimension=2,
        states=(vec((1, 1)),),
        effects=(vec((1, 0)), vec((0, 1))),
        unit_effect=vec((F(1, 2), F(1, 2))),
    )
    m = Measurement((F(1, 3), F(2, 3)))
    p = induced_distribution(system, m)
    assert p.probs[0] == (F(1, 3), F(2, 3))


def test_deterministic_distribution_dimension():
    p = ConditionalDistribution.from_rows([[1, 0, 0], [0, 1, 0], [1, 0, 0]])
    report = minimal_classical_dimension(p)
    assert report.minimal_d == 2  # two distinct columns used
    assert verify_certificate_chain(p, report)


def verify_certificate_chain(p, report):
    from signaldim.classical import reduce_rows

    reduced, _ = reduce_rows(p)
    ok = verify_certificate(reduced, report.certificate_up)
    if report.minimal_d > 1:
        ok = ok and report.certificate_down is not None
        ok = ok and verify_certificate(reduced, report.certificate_down)
    return ok


def test_identical_rows_collapse_to_one_symbol():
    p = ConditionalDistribution.from_rows(
        [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]
    )
    report = minimal_classical_dimension(p)
    assert report.minimal_d == 1
    assert report.certificate_down is None


def test_linear_and_binary_search_agree():
    p = ConditionalDistribution.from_rows(
        [[F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)], [F(1, 2), 0, F(1, 2)]]
    )
    a = minimal_classical_dimension(p, search="linear")
    b = minimal_classical_dimension(p, search="binary")
    assert a.minimal_d == b.minimal_d


def test_report_serialization():
    p = ConditionalDistribution.from_rows([[1, 0], [0, 1]])
    report = minimal_classical_dimension(p)
    d = report.to_json_dict()
    assert d["minimal_d"] == report.minimal_d
    assert d["certificate_up"]["kind"] == "decomposition"


def test_squit_signaling_dimension():
    assert signaling_dimension(squit()) == 2


def test_classical_simplex_signaling_dimension():
    for d in range(1, 5):
        assert signaling_dimension(classical_simplex(d)) == d


def test_squit_measurement_report():
    sq = squit()
    m = enumerate_extremal_measurements(sq)[0]
    report = measurement_dimension_report(sq, m, measurement_class=0)
    assert report.minimal_d == 2
    assert report.support_size == 2
    assert report.certificate_down is not None
    assert report.certificate_down.value > 0


def test_monotone_feasibility():
    # if p in P_d then p in P_{d+1}: larger polytope stays feasible
    from signaldim.classical import effective_vertices
    from signaldim.lp import LpProblem, solve_feasibility

    p = ConditionalDistribution.from_rows(
        [[F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)]]
    )
    feasible_ds = []
    for d in (1, 2, 3):
        prob = LpProblem.from_distribution(p, effective_vertices(p, d))
        feasible_ds.append(solve_feasibility(prob) is not None)
    # once feasible, stays feasible
    assert feasible_ds == sorted(feasible_ds)
