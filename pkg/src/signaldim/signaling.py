"""Signaling dimension pipeline: induced conditional distributions, minimal
classical dimension per measurement, and the system-level maximum.

For one measurement, the minimal classical dimension is the smallest d with
an exact convex decomposition of the (row-reduced) induced distribution over
the effective vertices of P^{m->n}_d; the accompanying witness against d-1
certifies minimality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classical import (
    ConditionalDistribution,
    count_vertices,
    effective_vertices,
    reduce_rows,
)
from .core import GptSystem, close_group
from .lp import (
    DecompositionCertificate,
    LpProblem,
    WitnessCertificate,
    find_witness,
    solve_feasibility,
)
from .measurements import (
    Measurement,
    enumerate_extremal_measurements,
    reduce_to_orbits,
)
from .ratlin import Matrix, dot


@dataclass(frozen=True)
class DimensionReport:
    measurement_class: int
    support_size: int
    minimal_d: int
    certificate_up: DecompositionCertificate
    certificate_down: WitnessCertificate | None
    v_used: int
    V_total: int

    def __post_init__(self):
        # a k-outcome measurement is trivially simulable with k symbols
        if self.minimal_d > self.support_size:
            raise ValueError("minimal_d exceeds the support size")

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "measurement_class": self.measurement_class,
            "support_size": self.support_size,
            "minimal_d": self.minimal_d,
            "certificate_up": self.certificate_up.to_json_dict(),
            "certificate_down": None
            if self.certificate_down is None
            else self.certificate_down.to_json_dict(),
            "v_used": self.v_used,
            "V_total": str(self.V_total),
        }


def induced_distribution(system: GptSystem, p: Measurement) -> ConditionalDistribution:
    """Rows = stored extremal states, columns = effects in supp(p), entry
    = weight_y * (e_y . omega_x).  Rows sum to 1 exactly."""
    supp = p.support()
    rows = []
    for w in system.states:
        rows.append([p.weights[j] * dot(system.effects[j], w) for j in supp])
    return ConditionalDistribution.from_rows(rows)


def minimal_classical_dimension(
    p: ConditionalDistribution,
    box=Fraction(1),
    measurement_class: int = -1,
    search: str = "linear",
    objective: str = "zeros",
    presolve: bool = True,
) -> DimensionReport:
    """Smallest d with p inside P^{m->n}_d, with certificates both ways.

    Row reduction runs first; then d is searched (ascending by default,
    binary behind the flag — feasibility is monotone in d).  Termination is
    guaranteed at d = number of support columns of the reduced matrix.
    """
    if search not in ("linear", "binary"):
        raise ValueError("search must be 'linear' or 'binary'")
    reduced, _ = reduce_rows(p)
    support_cols = {j for i in range(reduced.m) for j in reduced.row_support(i)}
    d_max = len(support_cols)

    cache: dict[int, tuple] = {}

    def solve(d):
        if d not in cache:
            strategies = effective_vertices(reduced, d)
            cert = solve_feasibility(
                LpProblem.from_distribution(reduced, strategies, objective=objective),
                presolve=presolve,
            )
            cache[d] = (strategies, cert)
        return cache[d]

    if search == "binary":
        lo, hi = 1, d_max
        while lo < hi:
            mid = (lo + hi) // 2
            if solve(mid)[1] is not None:
                hi = mid
            else:
                lo = mid + 1
        minimal_d = lo
    else:
        minimal_d = next(d for d in range(1, d_max + 1) if solve(d)[1] is not None)
    strategies, cert_up = cache[minimal_d]
    if cert_up is None:
        raise ArithmeticError("no feasible dimension found; invalid distribution")

    cert_down = None
    if minimal_d > 1:
        down_strats = effective_vertices(reduced, minimal_d - 1)
        cert_down = find_witness(
            reduced, down_strats, box=box, dim=minimal_d - 1, presolve=presolve
        )
        if cert_down is None:
            raise ArithmeticError(
                "dichotomy violation: feasible at minimal_d - 1 after all"
            )

    return DimensionReport(
        measurement_class=measurement_class,
        support_size=reduced.n,
        minimal_d=minimal_d,
        certificate_up=cert_up,
        certificate_down=cert_down,
        v_used=len(strategies),
        V_total=count_vertices(reduced.m, reduced.n, minimal_d),
    )


def measurement_dimension_report(
    system: GptSystem,
    p: Measurement,
    measurement_class: int = -1,
    box=Fraction(1),
    search: str = "linear",
    objective: str = "zeros",
    presolve: bool = True,
) -> DimensionReport:
    return minimal_classical_dimension(
        induced_distribution(system, p),
        box=box,
        measurement_class=measurement_class,
        search=search,
        objective=objective,
        presolve=presolve,
    )


def system_orbits(system: GptSystem):
    """Extremal measurement orbits of a system (trivial group when no
    generators are stored)."""
    measurements = enumerate_extremal_measurements(system)
    if system.symmetry_generators:
        group = close_group(system.symmetry_generators)
    else:
        group = close_group([Matrix.identity(system.linear_dimension)])
    return reduce_to_orbits(measurements, group, system)


def _report_worker(args):
    system, rep, cid, search, objective, presolve = args
    return measurement_dimension_report(
        system, rep, measurement_class=cid, search=search, objective=objective,
        presolve=presolve,
    )


def signaling_dimension(
    system: GptSystem,
    search: str = "linear",
    objective: str = "zeros",
    presolve: bool = True,
    threads: int = 1,
    collect_reports: list | None = None,
) -> int:
    """Maximum minimal classical dimension over extremal-measurement orbits.

    One representative per orbit suffices (symmetries permute the rows and
    columns of the induced distribution).  Orbits are processed in
    descending support size and skipped once their support size cannot beat
    the best dimension so far — unless full reports were requested.
    """
    orbits = system_orbits(system)
    order = sorted(
        orbits, key=lambda o: (-o.representative.support_size(), o.class_id)
    )
    want_all = collect_reports is not None

    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        jobs = [
            (system, o.representative, o.class_id, search, objective, presolve)
            for o in order
        ]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(_report_worker, jobs))
        best = max((r.minimal_d for r in reports), default=1)
    else:
        best = 1
        reports = []
        for orbit in order:
            if not want_all and orbit.representative.support_size() <= best:
                continue
            rep = _report_worker(
                (system, orbit.representative, orbit.class_id, search, objective,
                 presolve)
            )
            best = max(best, rep.minimal_d)
            reports.append(rep)

    if want_all:
        collect_reports.extend(sorted(reports, key=lambda r: r.measurement_class))
    return best
