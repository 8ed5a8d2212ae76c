"""Choice prefixes, trap sets and the certificate condition verifiers."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from ..core import SetFunction, check_submodular, full_mask, mask, members, subsets_of
from ..exceptions import DomainError

DEFAULT_TOL = 1e-6


class Variant(str, enum.Enum):
    FIXED_Q2 = "fixed-q2"
    FIXED_Q3 = "fixed-q3"
    ADAPTIVE_Q2 = "adaptive-q2"

    @classmethod
    def coerce(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "-")
        aliases = {"fixedq2": "fixed-q2", "fixedq3": "fixed-q3", "adaptiveq2": "adaptive-q2"}
        try:
            return cls(aliases.get(text.replace("-", ""), text))
        except ValueError:
            raise DomainError(f"unknown variant {value!r}") from None

    @property
    def indistinguishability(self) -> str:
        return {"fixed-q2": "cond2", "fixed-q3": "cond2_dagger", "adaptive-q2": "cond2_star"}[self.value]

    @property
    def templates(self) -> frozenset[str]:
        if self is Variant.ADAPTIVE_Q2:
            return frozenset({"online", "fixed", "adaptive"})
        return frozenset({"online", "fixed"})

    @property
    def models(self) -> frozenset[int]:
        return frozenset({1, 2, 3}) if self is Variant.FIXED_Q3 else frozenset({1, 2})


def choice_prefixes(A: Sequence[int], R: Sequence[int], i: int) -> Iterator[tuple[int, ...]]:
    """Every ``C_i`` in ``{a_1,r_1} x ... x {a_i,r_i}``, as item tuples."""
    for picks in itertools.product((0, 1), repeat=i):
        yield tuple(R[j] if p else A[j] for j, p in enumerate(picks))


def split_prefix(C: Sequence[int], A: Sequence[int]) -> tuple[int, int]:
    """``(C ∩ A, C ∩ R)`` as masks."""
    aset = set(A)
    return mask(c for c in C if c in aset), mask(c for c in C if c not in aset)


def trap_sets(A: Sequence[int], R: Sequence[int], n: int) -> list[int]:
    """All ``S`` extending some full prefix ``C_k`` (``C_k∩A ⊆ S``, ``S∩C_k∩R = ∅``)."""
    k = len(A)
    masks = np.arange(1 << n)
    hit = np.zeros(masks.size, dtype=bool)
    for C in choice_prefixes(A, R, k):
        ca, cr = split_prefix(C, A)
        hit |= ((masks & ca) == ca) & ((masks & cr) == 0)
    return [int(s) for s in np.nonzero(hit)[0]]


def _pairs_equal(f, n, side, base, x, y):
    full = full_mask(n)
    p, q = base | 1 << x, base | 1 << y
    if side == "fbar":
        p, q = full ^ p, full ^ q
    return p, q


def cond1_pairs(n: int):
    # every singleton compared against item 0 covers all pairs by transitivity
    for u in range(1, n):
        for side in ("f", "fbar"):
            yield ("cond1", side, 0, 0, u)


def cond2_pairs(A, R):
    k = len(A)
    for i in range(1, k):
        for C in choice_prefixes(A, R, i):
            ca, cr = split_prefix(C, A)
            for j in range(i, k):
                yield ("cond2", "f", ca, A[j], R[j], C)
                yield ("cond2", "fbar", cr, A[j], R[j], C)


def cond2_dagger_pairs(A, R):
    k = len(A)
    for i in range(k):
        for C in choice_prefixes(A, R, i):
            for S in sorted(subsets_of(mask(C))):
                yield ("cond2_dagger", "f", S, A[i], R[i], C)
                yield ("cond2_dagger", "fbar", S, A[i], R[i], C)


def cond2_star_pairs(A, R, n):
    k = len(A)
    for i in range(k):
        for C in choice_prefixes(A, R, i):
            ca, cr = split_prefix(C, A)
            rest = [u for u in range(n) if u not in C]
            for u, v in itertools.combinations(rest, 2):
                yield ("cond2_star", "f", ca, u, v, C)
                yield ("cond2_star", "fbar", cr, u, v, C)


def equality_pairs(kind: str, A, R, n: int):
    """Yield ``(tag, side, base, x, y, prefix)`` tuples: ``f(base+x) = f(base+y)`` (or ``f̄``)."""
    if kind == "cond1":
        for tag, side, base, x, y in cond1_pairs(n):
            yield tag, side, base, x, y, ()
    elif kind == "cond2":
        yield from cond2_pairs(A, R)
    elif kind == "cond2_dagger":
        yield from cond2_dagger_pairs(A, R)
    elif kind == "cond2_star":
        yield from cond2_star_pairs(A, R, n)
    else:
        raise ValueError(f"unknown condition {kind!r}")


@dataclass
class CheckResult:
    ok: bool
    checked: int = 0
    witness: object = None
    max_gap: float = 0.0


@dataclass
class ConditionReport:
    variant: Variant | None
    c: float
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.checks.values())

    @property
    def bound(self) -> float:
        return 1.0 / self.c if self.c > 0 else float("inf")

    def first_failure(self) -> tuple[str, CheckResult] | None:
        return next(((k, r) for k, r in self.checks.items() if not r.ok), None)

    def summary(self) -> str:
        parts = [f"{k}={'pass' if r.ok else 'FAIL'}" for k, r in self.checks.items()]
        return " ".join(parts)


def check_pair(f: SetFunction, side: str, base: int, x: int, y: int, tol: float = DEFAULT_TOL) -> CheckResult:
    """One equality ``f(base+x) = f(base+y)`` (``f̄`` when ``side == "fbar"``)."""
    p, q = _pairs_equal(f, f.n, side, base, x, y)
    gap = float(abs(f.values[p] - f.values[q]))
    ok = gap <= tol
    witness = None if ok else dict(side=side, base=[b + 1 for b in members(base)], items=(x + 1, y + 1))
    return CheckResult(ok, 1, witness, gap)


def check_equalities(f: SetFunction, kind: str, A, R, tol: float = DEFAULT_TOL) -> CheckResult:
    vals = f.values
    res = CheckResult(True)
    for tag, side, base, x, y, C in equality_pairs(kind, A, R, f.n):
        p, q = _pairs_equal(f, f.n, side, base, x, y)
        gap = abs(vals[p] - vals[q])
        res.checked += 1
        res.max_gap = max(res.max_gap, float(gap))
        if gap > tol and res.ok:
            res.ok = False
            res.witness = dict(
                side=side,
                base=[b + 1 for b in members(base)],
                items=(x + 1, y + 1),
                prefix=[c + 1 for c in C],
                values=(float(vals[p]), float(vals[q])),
            )
    return res


def check_trap(f: SetFunction, A, R, tol: float = DEFAULT_TOL) -> CheckResult:
    traps = trap_sets(A, R, f.n)
    vals = f.values[traps]
    worst = int(np.argmax(vals)) if traps else 0
    res = CheckResult(True, len(traps))
    if traps:
        res.max_gap = float(max(vals[worst] - 1.0, 0.0))
        if vals[worst] > 1.0 + tol:
            res.ok = False
            res.witness = dict(S=[s + 1 for s in members(traps[worst])], value=float(vals[worst]))
    return res


def verify_conditions(f: SetFunction, A, R, O: int, variant, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Check a certificate exhaustively.

    Always checks normalization, nonnegativity, full-form submodularity,
    the singleton condition and the trap closure; the variant selects the
    indistinguishability family. ``cond4`` passes when ``c = f(O) > 1``.
    """
    variant = Variant.coerce(variant)
    A, R = tuple(A), tuple(R)
    c = float(f.values[O])
    report = ConditionReport(variant, c)
    vals = f.values
    report.checks["normalized"] = CheckResult(abs(vals[0]) <= tol, 1, None if abs(vals[0]) <= tol else float(vals[0]))
    neg = int(np.argmin(vals))
    report.checks["nonnegative"] = CheckResult(
        bool(vals[neg] >= -tol), vals.size, None if vals[neg] >= -tol else dict(S=[s + 1 for s in members(neg)], value=float(vals[neg]))
    )
    sub = check_submodular(f, tol, full=True)
    report.checks["submodular"] = CheckResult(sub.ok, vals.size**2, sub.violation)
    report.checks["cond1"] = check_equalities(f, "cond1", A, R, tol)
    kind = variant.indistinguishability
    report.checks[kind] = check_equalities(f, kind, A, R, tol)
    report.checks["cond3"] = check_trap(f, A, R, tol)
    report.checks["cond4"] = CheckResult(c > 1.0 + tol, 1, None if c > 1.0 + tol else dict(c=c))
    return report
