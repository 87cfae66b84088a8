"""Exact computation of the signaling dimension of GPT systems whose state
and effect sets are polytopes."""

from .classical import (
    ConditionalDistribution,
    DeterministicStrategy,
    count_effective_vertices,
    count_vertices,
    effective_vertices,
    reduce_rows,
    stirling2,
    strategy_to_distribution,
)
from .core import (
    GptSystem,
    SymmetryGroup,
    act_on_measurement,
    close_group,
    normalize_effects,
)
from .lp import (
    DecompositionCertificate,
    LpProblem,
    WitnessCertificate,
    find_witness,
    max_over_classical_polytope,
    solve_feasibility,
    verify_certificate,
)
from .measurements import (
    Measurement,
    MeasurementOrbit,
    check_extremality,
    enumerate_extremal_measurements,
    reduce_to_orbits,
    support_size_bound_check,
)
from .models import (
    CompositionModel,
    HS_MODEL,
    PR_MODEL,
    FROZEN_MODELS,
    check_complete_positivity,
    classical_simplex,
    classify_compositions,
    compose,
    janotta_model,
    named_system,
    squit,
    wiring_map,
)
from .polytope import HPolytope, VPolytope, dd_enumerate, is_vertex
from .ratlin import Matrix, Rational, kron, rank, solve_exact
from .signaling import (
    DimensionReport,
    induced_distribution,
    measurement_dimension_report,
    minimal_classical_dimension,
    signaling_dimension,
    system_orbits,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
