"""Exact rational linear programming for classical-polytope membership.

Everything is driven by one LP.  For a target vector b (the vectorized
conditional distribution) and a column family A (the effective deterministic
strategies of P^{m->n}_d as 0/1 vectors), solve

    minimize  box * sum(mu+ + mu-)   s.t.   A x + mu+ - mu- = b,  all >= 0.

The optimum is 0 exactly when b is a convex combination of the columns (the
weights x are then the decomposition); when it is positive, the terminal
simplex multipliers y are an optimal solution of the bounded dual

    maximize  b . y   s.t.   A^T y <= 0,  -box <= y <= box,

i.e. a separating witness with value equal to the optimum.

The reference path is an exact rational simplex with Bland's rule for
anti-cycling.  An optional floating-point presolve (scipy/HiGHS) proposes a
small working set of columns; every exact solve over a working set ends with
an exact pricing sweep over all columns, so certificates never depend on
floating arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm

from .classical import (
    ConditionalDistribution,
    DeterministicStrategy,
    effective_vertices,
    strategy_to_distribution,
)
from .ratlin import Vector, format_rational, parse_rational, rat

_DEGENERATE_STREAK_FOR_BLAND = 12
_PRESOLVE_MIN_COLUMNS = 2000
_PRESOLVE_EXTRA_CAP = 4000
_VIOLATION_BATCH = 500
_MAX_ACTIVATION_ROUNDS = 60


@dataclass(frozen=True)
class LpProblem:
    """Decomposition LP data: columns are strategies over an m x n grid."""

    m: int
    n: int
    strategies: tuple[DeterministicStrategy, ...]
    b: Vector
    objective: str = "zeros"  # "zeros" | "ones"; constant either way

    def __post_init__(self):
        if len(self.b) != self.m * self.n:
            raise ValueError("b length must equal m*n")
        if self.objective not in ("zeros", "ones"):
            raise ValueError("objective must be 'zeros' or 'ones'")

    @classmethod
    def from_distribution(cls, p: ConditionalDistribution, strategies, objective="zeros"):
        return cls(p.m, p.n, tuple(strategies), p.vectorized(), objective)


@dataclass(frozen=True)
class DecompositionCertificate:
    weights: dict  # DeterministicStrategy -> positive Fraction
    dim: int

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "kind": "decomposition",
            "dim": self.dim,
            "weights": {
                json.dumps(list(s)): format_rational(w) for s, w in self.weights.items()
            },
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DecompositionCertificate":
        return cls(
            weights={
                tuple(json.loads(k)): parse_rational(v) for k, v in d["weights"].items()
            },
            dim=int(d["dim"]),
        )


@dataclass(frozen=True)
class WitnessCertificate:
    game: tuple[Vector, ...]  # m x n payoff grid, entries within [-box, box]
    value: Fraction  # p . g
    max_classical: Fraction | None  # max over supplied vertices of q . g
    dim: int  # the classical dimension the witness separates from
    box: Fraction = Fraction(1)

    def to_json_dict(self) -> dict:
        return {
            "format": 1,
            "kind": "witness",
            "dim": self.dim,
            "box": format_rational(self.box),
            "game": [[format_rational(x) for x in row] for row in self.game],
            "value": format_rational(self.value),
            "max_classical": None
            if self.max_classical is None
            else format_rational(self.max_classical),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "WitnessCertificate":
        return cls(
            game=tuple(tuple(parse_rational(x) for x in row) for row in d["game"]),
            value=parse_rational(d["value"]),
            max_classical=None
            if d["max_classical"] is None
            else parse_rational(d["max_classical"]),
            dim=int(d["dim"]),
            box=parse_rational(d["box"]),
        )


class _StrategyColumns:
    """Sparse column provider: strategies as 0/1 columns over m*n rows,
    followed by paired slack columns (mu+_i, mu-_i) per row."""

    def __init__(self, strategies, n, n_rows, box):
        self.strategies = strategies
        self.n = n
        self.n_rows = n_rows
        self.box = box
        self.n_struct = len(strategies)

    def n_columns(self) -> int:
        return self.n_struct + 2 * self.n_rows

    def support(self, j):
        if j < self.n_struct:
            n = self.n
            return [(r * n + c, Fraction(1)) for r, c in enumerate(self.strategies[j])]
        k = j - self.n_struct
        i, sign = divmod(k, 2)
        return [(i, Fraction(1) if sign == 0 else Fraction(-1))]

    def cost(self, j) -> Fraction:
        return Fraction(0) if j < self.n_struct else self.box


class _DenseColumns:
    """Explicit rational columns (small problems), plus slack pairs."""

    def __init__(self, cols, n_rows, box):
        self.cols = [tuple(rat(x) for x in c) for c in cols]
        self.n_rows = n_rows
        self.box = box
        self.n_struct = len(cols)

    def n_columns(self) -> int:
        return self.n_struct + 2 * self.n_rows

    def support(self, j):
        if j < self.n_struct:
            return [(i, x) for i, x in enumerate(self.cols[j]) if x != 0]
        k = j - self.n_struct
        i, sign = divmod(k, 2)
        return [(i, Fraction(1) if sign == 0 else Fraction(-1))]

    def cost(self, j) -> Fraction:
        return Fraction(0) if j < self.n_struct else self.box


class _ExactSimplex:
    """Revised simplex, exact arithmetic, slack starting basis.

    Dantzig pricing over the active column set with a deterministic index
    tie-break; switches to Bland's rule after a degenerate-pivot streak so
    cycling is impossible.
    """

    def __init__(self, columns, b):
        self.cols = columns
        self.b = [rat(x) for x in b]
        m = len(self.b)
        self.m = m
        ns = columns.n_struct
        self.basis = []
        self.Binv = [[Fraction(0)] * m for _ in range(m)]
        self.xB = []
        for i in range(m):
            if self.b[i] >= 0:
                self.basis.append(ns + 2 * i)
                self.Binv[i][i] = Fraction(1)
                self.xB.append(self.b[i])
            else:
                self.basis.append(ns + 2 * i + 1)
                self.Binv[i][i] = Fraction(-1)
                self.xB.append(-self.b[i])
        self.in_basis = set(self.basis)

    def multipliers(self) -> list[Fraction]:
        m = self.m
        y = [Fraction(0)] * m
        for i, bj in enumerate(self.basis):
            cb = self.cols.cost(bj)
            if cb != 0:
                row = self.Binv[i]
                for k in range(m):
                    if row[k] != 0:
                        y[k] += cb * row[k]
        return y

    def objective(self) -> Fraction:
        return sum(
            (self.cols.cost(bj) * self.xB[i] for i, bj in enumerate(self.basis)),
            Fraction(0),
        )

    def reduced_cost(self, j, y) -> Fraction:
        return self.cols.cost(j) - sum(v * y[i] for i, v in self.cols.support(j))

    def _pivot(self, enter: int) -> bool:
        """Bring column `enter` into the basis.  Returns False when the pivot
        was degenerate (zero step)."""
        m = self.m
        col = self.cols.support(enter)
        d = [Fraction(0)] * m
        for i in range(m):
            row = self.Binv[i]
            s = Fraction(0)
            for r, v in col:
                if row[r] != 0:
                    s += row[r] * v
            d[i] = s
        leave = None
        theta = None
        for i in range(m):
            if d[i] > 0:
                t = self.xB[i] / d[i]
                if (
                    theta is None
                    or t < theta
                    or (t == theta and self.basis[i] < self.basis[leave])
                ):
                    theta = t
                    leave = i
        if leave is None:
            raise ArithmeticError("LP unbounded; cannot happen for the L1 objective")
        piv = d[leave]
        self.Binv[leave] = [v / piv for v in self.Binv[leave]]
        self.xB[leave] = theta
        for i in range(m):
            if i != leave and d[i] != 0:
                f = d[i]
                rl = self.Binv[leave]
                self.Binv[i] = [a - f * bb for a, bb in zip(self.Binv[i], rl)]
                self.xB[i] = self.xB[i] - f * theta
        self.in_basis.discard(self.basis[leave])
        self.basis[leave] = enter
        self.in_basis.add(enter)
        return theta != 0

    def run(self, active, max_iter=2_000_000) -> tuple[Fraction, list[Fraction]]:
        """Optimize over active structural columns plus all slacks.
        Returns (objective, multipliers)."""
        slack_ids = range(self.cols.n_struct, self.cols.n_columns())
        degen = 0
        for _ in range(max_iter):
            y = self.multipliers()
            bland = degen >= _DEGENERATE_STREAK_FOR_BLAND
            enter = None
            best = Fraction(0)
            for j in list(active) + list(slack_ids):
                if j in self.in_basis:
                    continue
                rc = self.reduced_cost(j, y)
                if rc < 0:
                    if bland:
                        enter = j
                        break
                    if rc < best or (rc == best and enter is not None and j < enter):
                        best = rc
                        enter = j
            if enter is None:
                return self.objective(), y
            if self._pivot(enter):
                degen = 0
            else:
                degen += 1
        raise ArithmeticError("simplex iteration limit exceeded")

    def structural_solution(self) -> dict:
        out = {}
        ns = self.cols.n_struct
        for i, bj in enumerate(self.basis):
            if bj < ns and self.xB[i] != 0:
                out[bj] = out.get(bj, Fraction(0)) + self.xB[i]
        return out


def exact_l1_lp(columns, b, box=Fraction(1)):
    """Small dense exact LP: min box*sum(mu) s.t. [columns] x + mu = b.

    Returns (optimum, {column index: weight}, multipliers y).
    """
    prov = _DenseColumns(list(columns), len(b), rat(box))
    sx = _ExactSimplex(prov, b)
    opt, y = sx.run(range(prov.n_struct))
    return opt, sx.structural_solution(), y


def _exact_pricing_all(strategies, n, y) -> list[tuple[int, int]]:
    """Exact reduced-cost signs of all strategy columns against multipliers y.

    Returns [(score, j)] for violated columns (reduced cost < 0), most
    violated first; score is the integer numerator of -reduced_cost over the
    common denominator of y.
    """
    L = 1
    for x in y:
        L = lcm(L, x.denominator)
    nums = [int(x * L) for x in y]
    use_numpy = False
    try:
        import numpy as np

        if nums and max(abs(v) for v in nums) < (1 << 58) // (len(strategies[0]) or 1):
            use_numpy = True
    except ImportError:
        pass
    if use_numpy:
        arr = np.array(nums, dtype=np.int64)
        idx = np.array(
            [[r * n + c for r, c in enumerate(s)] for s in strategies], dtype=np.int64
        )
        sums = arr[idx].sum(axis=1)
        hits = np.nonzero(sums > 0)[0]
        out = [(int(sums[j]), int(j)) for j in hits]
    else:
        out = []
        for j, s in enumerate(strategies):
            t = 0
            for r, c in enumerate(s):
                t += nums[r * n + c]
            if t > 0:
                out.append((t, j))
    out.sort(key=lambda p: (-p[0], p[1]))
    return out


def _presolve_candidates(strategies, n, mn, b, box):
    """Floating HiGHS run proposing a working set of strategy columns."""
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import csc_matrix

    ns = len(strategies)
    data, rows, cols = [], [], []
    for j, s in enumerate(strategies):
        for r, c in enumerate(s):
            rows.append(r * n + c)
            cols.append(j)
            data.append(1.0)
    for i in range(mn):
        rows.append(i)
        cols.append(ns + 2 * i)
        data.append(1.0)
        rows.append(i)
        cols.append(ns + 2 * i + 1)
        data.append(-1.0)
    A = csc_matrix((data, (rows, cols)), shape=(mn, ns + 2 * mn))
    c = np.concatenate([np.zeros(ns), np.full(2 * mn, float(box))])
    bf = np.array([float(x) for x in b])
    res = linprog(c, A_eq=A, b_eq=bf, bounds=(0, None), method="highs")
    if res.status != 0:
        return []
    cand = {j for j in range(ns) if res.x[j] > 1e-11}
    if getattr(res, "eqlin", None) is not None:
        yf = np.asarray(res.eqlin.marginals)
        idx = np.array([[r * n + c_ for r, c_ in enumerate(s)] for s in strategies])
        rc = -yf[idx].sum(axis=1)
        near = np.nonzero(rc < 1e-9)[0].tolist()
        cand.update(near[:_PRESOLVE_EXTRA_CAP])
    return sorted(cand)


def _solve_strategy_lp(m, n, strategies, b, box=Fraction(1), presolve=True):
    """Exact optimum of the L1 decomposition LP over strategy columns.

    Returns (optimum, weights {strategy: Fraction}, y multipliers).  The
    returned data is exact; presolve only chooses which columns the exact
    simplex looks at first.  Termination always includes an exact pricing
    sweep over every column.
    """
    strategies = list(strategies)
    mn = m * n
    box = rat(box)
    prov = _StrategyColumns(strategies, n, mn, box)
    sx = _ExactSimplex(prov, b)

    if not strategies:
        opt, y = sx.run([])
        return opt, {}, y

    if presolve and len(strategies) > _PRESOLVE_MIN_COLUMNS:
        active = set(_presolve_candidates(strategies, n, mn, b, box))
    else:
        active = set(range(len(strategies)))

    full = len(active) == len(strategies)
    for _ in range(_MAX_ACTIVATION_ROUNDS):
        opt, y = sx.run(sorted(active))
        if opt == 0 or full:
            break
        violated = _exact_pricing_all(strategies, n, y)
        violated = [(s, j) for s, j in violated if j not in active]
        if not violated:
            break
        active.update(j for _, j in violated[:_VIOLATION_BATCH])
    else:
        # activation stalled; fall back to the pure exact reference path
        active = set(range(len(strategies)))
        opt, y = sx.run(sorted(active))

    weights = {
        strategies[j]: w for j, w in sorted(sx.structural_solution().items())
    }
    return opt, weights, y


def solve_feasibility(
    problem: LpProblem, presolve: bool = True
) -> DecompositionCertificate | None:
    """Exact convex decomposition of b over the strategy columns, or None.

    The certificate is re-verified by exact arithmetic before being returned.
    """
    opt, weights, _ = _solve_strategy_lp(
        problem.m, problem.n, problem.strategies, problem.b, presolve=presolve
    )
    if opt != 0:
        return None
    dim = max((len(set(s)) for s in weights), default=1)
    cert = DecompositionCertificate(weights=weights, dim=dim)
    if not _verify_decomposition(problem.m, problem.n, problem.b, cert):
        raise ArithmeticError("internal error: decomposition failed verification")
    return cert


def find_witness(
    p: ConditionalDistribution,
    vertices,
    box=Fraction(1),
    dim: int | None = None,
    presolve: bool = True,
) -> WitnessCertificate | None:
    """Separating witness maximizing p.g subject to g.q <= 0 for every
    supplied vertex and |g| <= box entrywise; None when the optimum is 0
    (p lies in the convex hull of the vertices).

    `vertices` should be the effective vertices of P^{m->n}_dim for p; when
    `dim` is omitted it is inferred as the largest distinct-column count
    among the vertices.
    """
    vertices = [tuple(q) for q in vertices]
    box = rat(box)
    opt, _, y = _solve_strategy_lp(
        p.m, p.n, vertices, p.vectorized(), box=box, presolve=presolve
    )
    if opt == 0:
        return None
    n = p.n
    game = tuple(tuple(y[i * n + j] for j in range(n)) for i in range(p.m))
    max_classical = None
    if vertices:
        max_classical = max(
            sum((game[r][c] for r, c in enumerate(q)), Fraction(0)) for q in vertices
        )
    if dim is None:
        dim = max((len(set(q)) for q in vertices), default=0)
    cert = WitnessCertificate(
        game=game, value=opt, max_classical=max_classical, dim=dim, box=box
    )
    if not _verify_witness(p, cert, vertices=vertices):
        raise ArithmeticError("internal error: witness failed verification")
    return cert


def max_over_classical_polytope(game, d: int) -> Fraction:
    """max q.g over ALL vertices of P^{m->n}_d (not only effective ones).

    A vertex restricted to a column subset S assigns each row its best column
    in S, so the max is over column subsets of size <= d.
    """
    m = len(game)
    n = len(game[0])
    best = None
    for k in range(1, min(d, n) + 1):
        for S in combinations(range(n), k):
            v = sum(max(game[x][y] for y in S) for x in range(m))
            if best is None or v > best:
                best = v
    return best


def _verify_decomposition(m, n, b, cert: DecompositionCertificate) -> bool:
    if not cert.weights:
        return False
    total = Fraction(0)
    recon = [Fraction(0)] * (m * n)
    for s, w in cert.weights.items():
        if w <= 0 or len(s) != m:
            return False
        if len(set(s)) > cert.dim:
            return False
        total += w
        for r, c in enumerate(s):
            recon[r * n + c] += w
    return total == 1 and recon == [rat(x) for x in b]


def _verify_witness(p: ConditionalDistribution, cert: WitnessCertificate, vertices=None) -> bool:
    m, n = p.m, p.n
    if len(cert.game) != m or any(len(row) != n for row in cert.game):
        return False
    if any(abs(x) > cert.box for row in cert.game for x in row):
        return False
    value = sum(
        (p.probs[i][j] * cert.game[i][j] for i in range(m) for j in range(n)),
        Fraction(0),
    )
    if value != cert.value or cert.value <= 0:
        return False
    if vertices is None:
        vertices = effective_vertices(p, cert.dim) if cert.dim >= 1 else []
    if not vertices:
        return cert.max_classical is None
    mc = max(
        sum((cert.game[r][c] for r, c in enumerate(q)), Fraction(0)) for q in vertices
    )
    return mc == cert.max_classical and mc <= 0 and cert.value > mc


def verify_certificate(p: ConditionalDistribution, certificate) -> bool:
    """Re-check every certificate invariant with exact arithmetic,
    independently of the solver path that produced it."""
    if isinstance(certificate, DecompositionCertificate):
        return _verify_decomposition(p.m, p.n, p.vectorized(), certificate)
    if isinstance(certificate, WitnessCertificate):
        return _verify_witness(p, certificate)
    raise TypeError(f"unknown certificate type {type(certificate)!r}")
