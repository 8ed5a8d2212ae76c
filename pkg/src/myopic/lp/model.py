"""LP families whose optima are adversarial submodular functions."""
from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..adversary.certificate import Certificate
from ..adversary.conditions import DEFAULT_TOL, Variant, equality_pairs, trap_sets
from ..core import SetFunction, full_mask, mask
from ..exceptions import DomainError, InvalidCertificate
from .simplex import SOLUTION_TOL, simplex

MAX_LP_ITEMS = 12


@dataclass(frozen=True)
class LPConfig:
    """Ground set ``{s_1..s_⌊n/2⌋, o_1..o_⌈n/2⌉}`` with ``A = s_1..s_k``, ``R = o_1..o_k``."""

    variant: Variant = Variant.FIXED_Q2
    n: int = 8
    k: int = 4

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.coerce(self.variant))
        if not 2 <= self.n <= MAX_LP_ITEMS:
            raise DomainError(f"n must be in [2, {MAX_LP_ITEMS}], got {self.n}")
        if not 1 <= self.k <= self.n // 2:
            raise DomainError(f"k must be in [1, n//2], got k={self.k}, n={self.n}")

    @property
    def A(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    @property
    def R(self) -> tuple[int, ...]:
        h = self.n // 2
        return tuple(range(h, h + self.k))

    @property
    def O(self) -> int:
        return mask(range(self.n // 2, self.n))


@dataclass(frozen=True)
class LPRow:
    coeffs: tuple[tuple[int, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float
    tag: str


@dataclass
class LPModel:
    num_vars: int
    objective: dict[int, float]
    rows: list[LPRow] = field(default_factory=list)
    sense: str = "max"
    config: LPConfig | None = None

    def counts(self) -> Counter:
        return Counter(r.tag for r in self.rows)

    def var_name(self, j: int) -> str:
        return f"x_{j}"

    def dense(self):
        """``(c, A_ub, b_ub, A_eq, b_eq)`` with ``>=`` rows negated into ``<=``."""
        c = np.zeros(self.num_vars)
        for j, v in self.objective.items():
            c[j] = v
        ub = [r for r in self.rows if r.sense != "="]
        eq = [r for r in self.rows if r.sense == "="]
        A_ub = np.zeros((len(ub), self.num_vars))
        b_ub = np.zeros(len(ub))
        for i, r in enumerate(ub):
            sign = -1.0 if r.sense == ">=" else 1.0
            for j, v in r.coeffs:
                A_ub[i, j] += sign * v
            b_ub[i] = sign * r.rhs
        A_eq = np.zeros((len(eq), self.num_vars))
        b_eq = np.zeros(len(eq))
        for i, r in enumerate(eq):
            for j, v in r.coeffs:
                A_eq[i, j] += v
            b_eq[i] = r.rhs
        return c, A_ub, b_ub, A_eq, b_eq


def _merge(terms) -> tuple[tuple[int, float], ...]:
    acc: dict[int, float] = {}
    for j, v in terms:
        acc[j] = acc.get(j, 0.0) + v
    return tuple(sorted((j, v) for j, v in acc.items() if v != 0.0))


def submodularity_rows(n: int):
    """``f(S+u) + f(S+v) - f(S+u+v) - f(S) >= 0`` for every ``S`` and pair outside it."""
    full = full_mask(n)
    for u, v in itertools.combinations(range(n), 2):
        pair = 1 << u | 1 << v
        rest = full ^ pair
        S = rest
        while True:
            yield LPRow(
                ((S, -1.0), (S | 1 << u, 1.0), (S | 1 << v, 1.0), (S | pair, -1.0)),
                ">=", 0.0, "C1",
            )
            if S == 0:
                break
            S = (S - 1) & rest


def _equality_rows(kind: str, tag: str, A, R, n: int):
    full = full_mask(n)
    for _, side, base, x, y, _ in equality_pairs(kind, A, R, n):
        p, q = base | 1 << x, base | 1 << y
        if side == "fbar":
            p, q = full ^ p, full ^ q
        coeffs = _merge(((p, 1.0), (q, -1.0)))
        if coeffs:
            yield LPRow(coeffs, "=", 0.0, tag)


def build_lp(cfg: LPConfig) -> LPModel:
    n, A, R = cfg.n, cfg.A, cfg.R
    model = LPModel(1 << n, {cfg.O: 1.0}, config=cfg)
    rows = model.rows
    rows.extend(submodularity_rows(n))
    if cfg.variant is Variant.FIXED_Q2:
        rows.extend(_equality_rows("cond1", "C2", A, R, n))
        rows.extend(_equality_rows("cond2", "C3", A, R, n))
    elif cfg.variant is Variant.FIXED_Q3:
        rows.extend(_equality_rows("cond1", "C2", A, R, n))
        rows.extend(_equality_rows("cond2_dagger", "C2-dagger", A, R, n))
    else:
        rows.extend(_equality_rows("cond2_star", "C2-star", A, R, n))
    rows.extend(LPRow(((S, 1.0),), "<=", 1.0, "C4") for S in trap_sets(A, R, n))
    rows.extend(LPRow(((S, 1.0),), ">=", 0.0, "C5") for S in range(1 << n))
    rows.append(LPRow(((0, 1.0),), "=", 0.0, "C6"))
    return model


@dataclass
class LPSolution:
    values: np.ndarray | None
    objective: float | None
    status: str
    residual: float = float("nan")
    iterations: int = 0
    seconds: float = 0.0


def residuals(model: LPModel, x) -> np.ndarray:
    """Per-row violation (``>= 0``; zero when the row holds)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(len(model.rows))
    for i, r in enumerate(model.rows):
        lhs = sum(v * x[j] for j, v in r.coeffs)
        if r.sense == "<=":
            out[i] = max(lhs - r.rhs, 0.0)
        elif r.sense == ">=":
            out[i] = max(r.rhs - lhs, 0.0)
        else:
            out[i] = abs(lhs - r.rhs)
    return out


@dataclass
class ResidualReport:
    max_violation: float
    worst_row: int | None
    objective: float

    @property
    def feasible(self) -> bool:
        return self.max_violation <= 1e-6


def verify_solution(model: LPModel, sol) -> ResidualReport:
    """Recompute every row's slack from scratch, independent of the solver."""
    x = sol.values if isinstance(sol, LPSolution) else np.asarray(sol, dtype=float)
    res = residuals(model, x)
    worst = int(np.argmax(res)) if res.size else None
    obj = sum(v * x[j] for j, v in model.objective.items())
    return ResidualReport(float(res.max()) if res.size else 0.0, worst, float(obj))


def _solve_via_dual(c, A_ub, b_ub, A_eq, b_eq):
    # max c.x, A_ub x <= b_ub, A_eq x = b_eq, x >= 0 has the dual
    # min b_ub.y + b_eq.z, A_ub'y + A_eq'z >= c, y >= 0, z free; its shadow
    # prices are the primal x
    dual_A = np.hstack([-A_ub.T, -A_eq.T, A_eq.T])
    dual_c = -np.concatenate([b_ub, b_eq, -b_eq])
    res = simplex(dual_c, dual_A, -c)
    if res.status != "optimal":
        status = {"unbounded": "infeasible", "infeasible": "unbounded"}.get(res.status, res.status)
        return status, None, res.iterations
    return "optimal", res.duals_ub, res.iterations


def solve_lp(model: LPModel, method: str = "dual") -> LPSolution:
    """Solve ``model`` with the embedded simplex.

    ``method="dual"`` runs the simplex on the dual program (one row per
    subset, so a much smaller tableau) and reads the subset values off its
    shadow prices; ``"primal"`` runs it on the model directly.
    """
    t0 = time.perf_counter()
    c, A_ub, b_ub, A_eq, b_eq = model.dense()
    # C5 rows duplicate the x >= 0 bounds of the standard form
    keep = np.array([r.tag != "C5" for r in model.rows if r.sense != "="], dtype=bool)
    A_ub, b_ub = A_ub[keep], b_ub[keep]
    sign = 1.0 if model.sense == "max" else -1.0
    if method == "dual":
        status, x, iterations = _solve_via_dual(sign * c, A_ub, b_ub, A_eq, b_eq)
    elif method == "primal":
        res = simplex(sign * c, A_ub, b_ub, A_eq, b_eq)
        status, x, iterations = res.status, res.x, res.iterations
    else:
        raise ValueError(f"unknown method {method!r}")
    sol = LPSolution(x, None, status, iterations=iterations, seconds=time.perf_counter() - t0)
    if status == "optimal":
        x[np.abs(x) < 1e-12] = 0.0
        sol.objective = float(c @ x)
        sol.residual = float(residuals(model, x).max())
        if sol.residual > SOLUTION_TOL:
            sol.status = "numerical_error"
    return sol


def solution_to_function(sol: LPSolution, cfg: LPConfig, tol: float = DEFAULT_TOL) -> Certificate:
    """Turn an optimal solution into a verified :class:`Certificate`.

    The table is ``certificate.f``; the condition and submodularity reports
    are attached. Any failed check raises :class:`InvalidCertificate`.
    """
    if sol.status != "optimal" or sol.values is None:
        raise InvalidCertificate(f"solution is not optimal (status={sol.status})")
    values = np.asarray(sol.values, dtype=float)
    if values.size != 1 << cfg.n:
        raise DomainError(f"solution has {values.size} values, expected {1 << cfg.n}")
    cert = Certificate(SetFunction(values, cfg.n), cfg.variant, cfg.A, cfg.R, cfg.O)
    cert = cert.require_valid(tol)
    if not cert.submodularity.ok:
        raise InvalidCertificate("table is not submodular", cert.submodularity.violation)
    return cert


def solve_certificate(cfg: LPConfig, method: str = "dual") -> tuple[Certificate, LPSolution]:
    """Build, solve and certify one configuration."""
    sol = solve_lp(build_lp(cfg), method)
    return solution_to_function(sol, cfg), sol
