"""Lazy-binding adversaries played against arbitrary policies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Digraph, SetFunction, brute_force_max, cut_function
from ..engine.game import (
    GameTranscript,
    Policy,
    Template,
    lowest_priority,
    play,
    true_vectors,
)
from ..engine.queries import GameState, Query, QueryModel, marginal_value
from ..exceptions import DomainError, InvalidCertificate
from .certificate import Certificate
from .conditions import DEFAULT_TOL

SIX_CYCLE_N = 6


@dataclass
class GameReport:
    alg_value: float
    opt_value: float
    ratio: float
    transcript: GameTranscript
    forced_prefix: tuple[int, ...]

    @property
    def forfeited(self) -> bool:
        return self.transcript.forfeited

    def summary(self) -> str:
        prefix = " ".join(str(u + 1) for u in self.forced_prefix)
        return (
            f"alg={self.alg_value:.4f} opt={self.opt_value:.4f} ratio={self.ratio:.4f} "
            f"prefix=[{prefix}] forfeited={str(self.forfeited).lower()}"
        )


class LazyBindingSource:
    """Presents unbound tokens while :meth:`pair` names a pair, real items afterwards.

    A token's queries are answered from the accept-side candidate after
    checking that the reject-side candidate gives the same answer; the
    decision then binds the token (accept → first of the pair, reject →
    second).
    """

    def __init__(self, f: SetFunction, tol: float = DEFAULT_TOL):
        self.f = f
        self.tol = tol
        self.start()

    def start(self):
        self.prefix: list[int] = []
        self._pair: tuple[int, int] | None = None
        self.checks = 0

    def pair(self, state: GameState) -> tuple[int, int] | None:
        raise NotImplementedError

    def query_vectors(self, items, state, model, fixed):
        """Answer priority inputs, giving near-identical vectors identical answers.

        Each item's vector is compared, in item order, with the vectors already
        chosen as representatives; within ``tol`` on every entry it reuses the
        representative's answers exactly.
        """
        raw = true_vectors(self.f, items, state, model, fixed)
        reps: list = []
        out = {}
        for u in sorted(items):
            vec = raw[u]
            vals = np.array([v for _, v in vec])
            for rep, rvals in reps:
                if rvals.shape == vals.shape and np.all(np.abs(rvals - vals) <= self.tol):
                    vec = rep
                    break
            else:
                reps.append((vec, vals))
            out[u] = vec
        return out

    def present(self, state, remaining, priorities, template):
        pair = self.pair(state)
        if pair is None:
            self._pair = None
            item = lowest_priority(remaining, priorities)[0]
            state.current = item
            return item
        best = lowest_priority(remaining, priorities)
        missing = [u for u in pair if u not in best]
        if missing:
            raise InvalidCertificate(
                f"round {state.step + 1}: priorities separate the pair",
                dict(pair=[u + 1 for u in pair], lowest=[u + 1 for u in best]),
            )
        self._pair = pair
        state.current = None
        return None

    def resolve(self, query: Query, state: GameState) -> float:
        values, n = self.f.values, self.f.n
        if query.item is not None or self._pair is None:
            item = state.current if query.item is None else query.item
            return marginal_value(values, n, query.side, item, query.base)
        a, r = self._pair
        va = marginal_value(values, n, query.side, a, query.base)
        vr = marginal_value(values, n, query.side, r, query.base)
        self.checks += 1
        if abs(va - vr) > self.tol:
            raise InvalidCertificate(
                f"round {state.step + 1}: token answers disagree on {query}",
                dict(items=(a + 1, r + 1), values=(va, vr)),
            )
        return va

    def bind(self, state: GameState, accept: bool) -> int:
        if self._pair is None:
            return state.current
        item = self._pair[0] if accept else self._pair[1]
        self.prefix.append(item)
        self._pair = None
        return item


class PairedAdversary(LazyBindingSource):
    """Rounds ``j <= k`` bind the token to ``a_j`` on accept and ``r_j`` on reject.

    The certificate is verified on construction (unless ``verify=False``);
    an invalid one raises :class:`InvalidCertificate`.
    """

    def __init__(self, cert: Certificate, verify: bool = True, tol: float = DEFAULT_TOL):
        if verify:
            cert = cert.require_valid(tol)
        self.cert = cert
        self.A, self.R, self.k = cert.A, cert.R, cert.k
        super().__init__(cert.f, tol)

    def pair(self, state):
        j = state.step
        return (self.A[j], self.R[j]) if j < self.k else None


class SixCycleAdversary(LazyBindingSource):
    """Unit directed 6-cycle: ``v1`` first, then a token over ``{v3, v4}``.

    The token becomes ``v4`` when it agrees with the decision on ``v1`` and
    ``v3`` otherwise; either way the best reachable cut is 2.
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        super().__init__(cut_function(Digraph.cycle(SIX_CYCLE_N)), tol)

    def present(self, state, remaining, priorities, template):
        if state.step == 0:
            if priorities is not None and 0 not in lowest_priority(remaining, priorities):
                raise InvalidCertificate("round 1: v1 does not have the lowest priority")
            self._pair = None
            state.current = 0
            return 0
        return super().present(state, remaining, priorities, template)

    def pair(self, state):
        if state.step != 1:
            return None
        v3, v4 = 2, 3
        return (v4, v3) if state.X & 1 else (v3, v4)


def _report(source: LazyBindingSource, transcript: GameTranscript) -> GameReport:
    _, opt = brute_force_max(source.f)
    alg = 0.0 if transcript.forfeited else transcript.value
    ratio = alg / opt if opt > 0 else 1.0
    return GameReport(alg, opt, ratio, transcript, tuple(source.prefix))


def adversary_play(adv: PairedAdversary, policy: Policy, template="fixed", model=QueryModel.QTYPE2) -> GameReport:
    """Play ``policy`` against ``adv``; a forfeited game scores 0."""
    template = Template.coerce(template)
    model = QueryModel.coerce(model)
    variant = adv.cert.variant
    if template.value not in variant.templates or int(model) not in variant.models:
        raise DomainError(f"{variant.value} certificate does not cover template={template.value}, model={model.name}")
    adv.start()
    transcript = play(policy, adv, template, model)
    return _report(adv, transcript)


def six_cycle_game(policy: Policy, model=QueryModel.QTYPE3, template="fixed") -> GameReport:
    adv = SixCycleAdversary()
    transcript = play(policy, adv, Template.coerce(template), QueryModel.coerce(model))
    return _report(adv, transcript)


def pad_isolated(g: Digraph, target_n: int) -> Digraph:
    """Append isolated vertices until ``g`` has ``target_n`` vertices."""
    if target_n < g.n:
        raise DomainError(f"cannot pad a {g.n}-vertex graph down to {target_n}")
    return Digraph(target_n, g.edges)

