"""The squit model zoo: the single square bit, tensor compositions of two
squits with entangled states/effects, wiring algebra, complete positivity
checking, and the classification of consistent compositions.

Conventions.  The squit lives in Q^3 with extremal states the rotations of
(1,0,1) and extremal effects the rotations of (1,1,1); the unit effect is
(0,0,1).  Composite vectors live in Q^9 indexed 3a+b (first tensor factor is
the slower index), so a bipartite vector reshapes to the 3x3 matrix W with
W[a,b] the coefficient of basis_a (x) basis_b, and the swap operator is the
matrix transpose.  The eight entangled effect rays and the eight entangled
state rays are hard-coded columns; entangled states carry a trailing 2 as
rays and are stored rescaled by 1/2 so they pair to 1 with the composite
unit effect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import GptSystem, normalize_effects
from .ratlin import Matrix, Vector, dot, kron, kron_matrix, vec

ENTANGLED_INDICES = frozenset(range(16, 24))

# columns 16..23 of the entangled effect family (rows indexed 3a+b)
_ENT_EFFECT_COLUMNS = (
    (-1, -1, 1, 1, -1, 1, 1, -1),
    (1, -1, -1, 1, 1, 1, -1, -1),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (1, -1, -1, 1, -1, -1, 1, 1),
    (1, 1, -1, -1, -1, 1, 1, -1),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, 1, 1, 1, 1, 1),
)

# columns 16..23 of the entangled state family, as printed (trailing 2)
_ENT_STATE_COLUMNS = (
    (-1, -1, 1, 1, -1, 1, 1, -1),
    (1, -1, -1, 1, -1, -1, 1, 1),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (1, -1, -1, 1, 1, 1, -1, -1),
    (1, 1, -1, -1, -1, 1, 1, -1),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (2, 2, 2, 2, 2, 2, 2, 2),
)

_SWAP_PAIRS = {16: 16, 17: 17, 18: 18, 19: 19, 20: 23, 21: 22, 22: 21, 23: 20}


@dataclass(frozen=True)
class CompositionModel:
    """A two-squit composition: which entangled states/effects it includes.

    The 16 factorized states and 16 factorized effects are always present.
    Index sets of a well-formed composite system are closed under Swap;
    non-closed pairs are representable so the positivity checker can reject
    them, but compose() refuses them.
    """

    entangled_state_indices: frozenset[int]
    entangled_effect_indices: frozenset[int]
    name: str = "custom"

    def __post_init__(self):
        for s in (self.entangled_state_indices, self.entangled_effect_indices):
            if not frozenset(s) <= ENTANGLED_INDICES:
                raise ValueError("entangled indices must lie in 16..23")

    def is_swap_closed(self) -> bool:
        return _swap_closed(self.entangled_state_indices) and _swap_closed(
            self.entangled_effect_indices
        )


def _swap_closed(idx) -> bool:
    return all(_SWAP_PAIRS[i] in idx for i in idx)


PR_MODEL = CompositionModel(frozenset(range(16, 24)), frozenset(), "PR")
HS_MODEL = CompositionModel(frozenset(), frozenset(range(16, 24)), "HS")
FROZEN_MODELS = tuple(
    CompositionModel(frozenset([x]), frozenset([x]), f"FROZEN-{x}")
    for x in range(16, 20)
)


def squit_rotation(k: int, s: int = 1) -> Matrix:
    """Symmetry of the square: rotation by k*90 degrees, reflected when s=-1."""
    c = (1, 0, -1, 0)[k % 4]
    si = (0, 1, 0, -1)[k % 4]
    return Matrix.from_rows(((c, -s * si, 0), (si, s * c, 0), (0, 0, 1)))


def squit() -> GptSystem:
    """The square bit: 4 extremal states, 4 extremal normalized effects."""
    states = [squit_rotation(k).matvec(vec((1, 0, 1))) for k in range(4)]
    raw_effects = [squit_rotation(k).matvec(vec((1, 1, 1))) for k in range(4)]
    system = GptSystem(
        linear_dimension=3,
        states=tuple(states),
        effects=tuple(normalize_effects(raw_effects, states)),
        unit_effect=vec((0, 0, 1)),
        symmetry_generators=(squit_rotation(1, 1), squit_rotation(0, -1)),
    )
    system.validate()
    return system


def swap_matrix() -> Matrix:
    return Matrix.from_rows(
        [[1 if 3 * (i % 3) + i // 3 == j else 0 for j in range(9)] for i in range(9)]
    )


def _product_states() -> list[Vector]:
    sq = squit()
    return [kron(sq.states[i], sq.states[j]) for i in range(4) for j in range(4)]


def _product_effects() -> list[Vector]:
    sq = squit()
    return [kron(sq.effects[i], sq.effects[j]) for i in range(4) for j in range(4)]


def entangled_state(x: int) -> Vector:
    """Entangled state 16..23, rescaled so the unit effect pairs to 1."""
    col = x - 16
    return tuple(Fraction(_ENT_STATE_COLUMNS[r][col], 2) for r in range(9))


def entangled_effect(x: int) -> Vector:
    col = x - 16
    return tuple(Fraction(_ENT_EFFECT_COLUMNS[r][col]) for r in range(9))


def compose(model: CompositionModel) -> GptSystem:
    """Two-squit composite system for a composition model.

    State list: the 16 product states then the selected entangled states in
    ascending index; same layout for effects.  Symmetry generators: the
    local-pair and swap candidates that actually permute both families (free
    local dynamics survive for PR/HS; the frozen models keep only Swap).
    """
    if not model.is_swap_closed():
        raise ValueError("composition index sets must be closed under Swap")
    states = _product_states() + [
        entangled_state(x) for x in sorted(model.entangled_state_indices)
    ]
    effects = _product_effects() + [
        entangled_effect(x) for x in sorted(model.entangled_effect_indices)
    ]
    unit = kron(vec((0, 0, 1)), vec((0, 0, 1)))

    ident = Matrix.identity(3)
    rot = squit_rotation(1, 1)
    refl = squit_rotation(0, -1)
    candidates = [
        kron_matrix(rot, ident),
        kron_matrix(ident, rot),
        kron_matrix(refl, ident),
        kron_matrix(ident, refl),
        swap_matrix(),
    ]
    sset, eset = set(states), set(effects)
    gens = []
    for U in candidates:
        uinvt = U.inverse_transpose()
        if {U.matvec(w) for w in states} == sset and {
            uinvt.matvec(e) for e in effects
        } == eset:
            gens.append(U)

    system = GptSystem(
        linear_dimension=9,
        states=tuple(states),
        effects=tuple(effects),
        unit_effect=unit,
        symmetry_generators=tuple(gens),
    )
    system.validate()
    return system


def classical_simplex(d: int) -> GptSystem:
    """Classical system C_d: states the standard simplex vertices, effects
    the barycenter-normalized coordinate rays, symmetries the permutations."""
    if d < 1:
        raise ValueError("d must be >= 1")
    states = [
        tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
    ]
    raw = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    gens = []
    if d > 1:
        def perm_matrix(perm):
            return Matrix.from_rows(
                [[int(perm[i] == j) for j in range(d)] for i in range(d)]
            )

        transposition = [1, 0] + list(range(2, d))
        cycle = [(i + 1) % d for i in range(d)]
        gens = [perm_matrix(transposition), perm_matrix(cycle)]
    system = GptSystem(
        linear_dimension=d,
        states=tuple(states),
        effects=tuple(normalize_effects(raw, states)),
        unit_effect=tuple(Fraction(1) for _ in range(d)),
        symmetry_generators=tuple(gens),
    )
    system.validate()
    return system


NAMED_MODELS = {
    "pr": PR_MODEL,
    "hs": HS_MODEL,
    "frozen-16": FROZEN_MODELS[0],
    "frozen-17": FROZEN_MODELS[1],
    "frozen-18": FROZEN_MODELS[2],
    "frozen-19": FROZEN_MODELS[3],
}


def named_system(name: str) -> GptSystem:
    """Instantiate a system by CLI name: squit, pr, hs, frozen-16..19, or
    classical-<d>."""
    key = name.strip().lower()
    if key == "squit":
        return squit()
    if key in NAMED_MODELS:
        return compose(NAMED_MODELS[key])
    if key.startswith("classical-"):
        return classical_simplex(int(key.split("-", 1)[1]))
    raise ValueError(f"unknown model name {name!r}")


# --- wiring algebra and complete positivity -------------------------------


@dataclass(frozen=True)
class WiringMap:
    """Single-squit map induced by feeding one leg of a bipartite state into
    one leg of a bipartite effect (defined up to positive scale)."""

    matrix: Matrix


def _reshape(v: Vector) -> Matrix:
    return Matrix.from_rows([v[3 * a : 3 * a + 3] for a in range(3)])


def wiring_map(state9: Vector, effect9: Vector) -> WiringMap:
    """U[c, a] = sum_b F[a, b] W[b, c] with W, F the 3x3 reshapes."""
    W = _reshape(vec(state9))
    F = _reshape(vec(effect9))
    return WiringMap(F.matmul(W).transpose())


@dataclass(frozen=True)
class PositivityViolation:
    """Exact witness that a composition produces a negative probability."""

    kind: str  # "pairing" | "swap" | "circuit"
    state_index: int
    effect_index: int
    value: Fraction
    detail: tuple = ()

    def __str__(self):
        where = f"state {self.state_index} with effect {self.effect_index}"
        if self.kind == "swap":
            return f"swap wiring of {where} yields {self.value} < 0"
        if self.kind == "circuit":
            return f"four-wire circuit on {where} {self.detail} yields {self.value} < 0"
        return f"direct pairing of {where} yields {self.value} < 0"


def _model_vectors(model: CompositionModel):
    states = {i: vec(w) for i, w in enumerate(_product_states())}
    effects = {i: vec(e) for i, e in enumerate(_product_effects())}
    for x in sorted(model.entangled_state_indices):
        states[x] = entangled_state(x)
    for x in sorted(model.entangled_effect_indices):
        effects[x] = entangled_effect(x)
    return states, effects


def _swap_vec(v: Vector) -> Vector:
    return tuple(v[3 * (k % 3) + k // 3] for k in range(9))


@lru_cache(maxsize=1)
def _circuit_universe():
    """Integer tensor of all four-wire circuit values over the full universe
    of 24 states x 24 effects (states scaled x2 so everything is integral).

    value[n0, n1, n2, xu, yu, x, y] = tr(U^n0 W_x F_y U^n1 W_x U^n2^T F_y^T)
    with U the wiring map of pair (xu, yu); the true probability is that
    integer divided by 4 (two scaled state copies), up to the positive scale
    of U itself.
    """
    import numpy as np

    W = np.zeros((24, 3, 3), dtype=np.int64)
    F = np.zeros((24, 3, 3), dtype=np.int64)
    for i, w in enumerate(_product_states()):
        W[i] = np.array([[2 * int(w[3 * a + b]) for b in range(3)] for a in range(3)])
    for i, e in enumerate(_product_effects()):
        F[i] = np.array([[int(e[3 * a + b]) for b in range(3)] for a in range(3)])
    for x in range(16, 24):
        col = x - 16
        W[x] = np.array(
            [[_ENT_STATE_COLUMNS[3 * a + b][col] for b in range(3)] for a in range(3)]
        )
        F[x] = np.array(
            [[_ENT_EFFECT_COLUMNS[3 * a + b][col] for b in range(3)] for a in range(3)]
        )

    U = np.einsum("yab,xbc->xyca", F, W)  # wiring of pair (x, y)
    eye = np.broadcast_to(np.eye(3, dtype=np.int64), U.shape).copy()
    Upow = np.stack([eye, U])  # (2, 24, 24, 3, 3)

    A = np.einsum("nuvab,xbc->nuvxac", Upow, W)
    B = np.einsum("nuvxab,muvcb->nmuvxac", A, Upow)
    AF = np.einsum("nuvxab,ybc->nuvxyac", A, F)
    BF = np.einsum("nmuvxcd,yad->nmuvxyca", B, F)
    val = np.einsum("iuvxyac,jkuvxyca->ijkuvxy", AF, BF)
    pair_direct = np.einsum("yab,xab->xy", F, W)
    pair_swap = np.einsum("yab,xba->xy", F, W)
    return val, pair_direct, pair_swap


def _exact_circuit_value(x, y, xu, yu, n0, n1, n2) -> Fraction:
    """Recompute one circuit value with exact rationals (true scale)."""
    states, effects = _model_vectors(
        CompositionModel(ENTANGLED_INDICES, ENTANGLED_INDICES, "universe")
    )
    W = _reshape(states[x])
    F = _reshape(effects[y])
    U = wiring_map(states[xu], effects[yu]).matrix
    ident = Matrix.identity(3)
    U0 = U if n0 else ident
    U1 = U if n1 else ident
    U2 = U if n2 else ident
    A = U0.matmul(W)
    B = U1.matmul(W).matmul(U2.transpose())
    M = A.matmul(F).matmul(B).matmul(F.transpose())
    return sum((M.entries[i][i] for i in range(3)), Fraction(0))


def check_complete_positivity(model: CompositionModel):
    """None when every pairing, swap-wiring, and four-wire circuit of the
    model is nonnegative; otherwise a PositivityViolation with the exact
    negative value (scale-true for pairings and swaps; circuit values are
    reported at the wiring map's integer scale, sign being what matters).
    """
    states, effects = _model_vectors(model)
    sidx = sorted(states)
    eidx = sorted(effects)
    for x in sidx:
        for y in eidx:
            v = dot(effects[y], states[x])
            if v < 0:
                return PositivityViolation("pairing", x, y, v)
    for x in sidx:
        sw = _swap_vec(states[x])
        for y in eidx:
            v = dot(effects[y], sw)
            if v < 0:
                return PositivityViolation("swap", x, y, v)

    val, _, _ = _circuit_universe()
    import numpy as np

    sub = val[np.ix_(range(2), range(2), range(2), sidx, eidx, sidx, eidx)]
    if (sub >= 0).all():
        return None
    n0, n1, n2, iu, ju, ix, jy = map(int, np.argwhere(sub < 0)[0])
    x, y, xu, yu = sidx[ix], eidx[jy], sidx[iu], eidx[ju]
    exact = _exact_circuit_value(x, y, xu, yu, n0, n1, n2)
    return PositivityViolation(
        "circuit", x, y, exact, detail=(("wiring", xu, yu), ("powers", n0, n1, n2))
    )


def janotta_model() -> CompositionModel:
    """The inconsistent composition: entangled states {16,18,22,23} and
    entangled effects {17,19,20,21} (not even swap-closed)."""
    return CompositionModel(
        frozenset({16, 18, 22, 23}), frozenset({17, 19, 20, 21}), "janotta"
    )


def classify_compositions() -> list[CompositionModel]:
    """All maximal consistent (completely positive, swap-closed) compositions.

    Precomputes the negative tuples of the circuit/pairing/swap universe,
    reduces each to its entangled-index footprint, and keeps the subset
    pairs avoiding every footprint; returns the maximal ones.
    """
    import numpy as np

    val, pair_direct, pair_swap = _circuit_universe()

    footprints: set[tuple[frozenset, frozenset]] = set()

    def add(stat_idx, eff_idx):
        fs = frozenset(i for i in stat_idx if i >= 16)
        fe = frozenset(i for i in eff_idx if i >= 16)
        footprints.add((fs, fe))

    for x, y in np.argwhere(pair_direct < 0):
        add((int(x),), (int(y),))
    for x, y in np.argwhere(pair_swap < 0):
        add((int(x),), (int(y),))
    for n0, n1, n2, xu, yu, x, y in np.argwhere(val < 0):
        add((int(xu), int(x)), (int(yu), int(y)))

    minimal = {
        v
        for v in footprints
        if not any(w != v and w[0] <= v[0] and w[1] <= v[1] for w in footprints)
    }

    atoms = [
        frozenset([16]),
        frozenset([17]),
        frozenset([18]),
        frozenset([19]),
        frozenset([20, 23]),
        frozenset([21, 22]),
    ]
    subsets = []
    for mask in range(64):
        s = frozenset()
        for i in range(6):
            if mask >> i & 1:
                s |= atoms[i]
        subsets.append(s)

    consistent = [
        (S, E)
        for S in subsets
        for E in subsets
        if not any(fs <= S and fe <= E for fs, fe in minimal)
    ]
    maximal = [
        (S, E)
        for (S, E) in consistent
        if not any((S2, E2) != (S, E) and S <= S2 and E <= E2 for S2, E2 in consistent)
    ]

    def label(S, E):
        if S == ENTANGLED_INDICES and not E:
            return "PR"
        if E == ENTANGLED_INDICES and not S:
            return "HS"
        if len(S) == 1 and S == E:
            return f"FROZEN-{next(iter(S))}"
        return "custom"

    out = [CompositionModel(S, E, label(S, E)) for S, E in maximal]
    out.sort(key=lambda m: (m.name, sorted(m.entangled_state_indices)))
    return out
