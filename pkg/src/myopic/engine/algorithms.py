"""Double greedy (deterministic and randomized), doubling Max-Di-Cut and random cut."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..core import Digraph, SetFunction, cut_function, digraph_marginals
from ..exceptions import DomainError
from .game import GameTranscript, Policy, StepRecord, Template, run_online
from .queries import Gateway, QueryModel


class DoubleGreedyPolicy(Policy):
    """Accept when ``a_i >= b_i``; uses the two Q-Type 1 queries only."""

    name = "double-greedy"

    def decide(self, gw: Gateway) -> bool:
        a = gw.rho(gw.X)
        b = gw.rho_bar(gw.Y)
        return a >= b


def accept_probability(a: float, b: float) -> float:
    a, b = max(a, 0.0), max(b, 0.0)
    if a + b == 0:
        return 1.0
    return a / (a + b)


class RandomizedDoubleGreedyPolicy(Policy):
    name = "randomized-double-greedy"

    def __init__(self, seed=None):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def start(self, n):
        self._rng = np.random.default_rng(self.seed)

    def decide(self, gw: Gateway) -> bool:
        p = accept_probability(gw.rho(gw.X), gw.rho_bar(gw.Y))
        return bool(self._rng.random() < p)


class RandomCutPolicy(Policy):
    """Baseline: accept each item with probability 1/2, no queries."""

    name = "random-cut"

    def __init__(self, seed=None):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def start(self, n):
        self._rng = np.random.default_rng(self.seed)

    def decide(self, gw: Gateway) -> bool:
        return bool(self._rng.random() < 0.5)


def run_double_greedy_det(f: SetFunction, order: Sequence[int] | None = None) -> GameTranscript:
    return run_online(DoubleGreedyPolicy(), f, QueryModel.QTYPE1, order)


def run_double_greedy_rand(f: SetFunction, order: Sequence[int] | None = None, seed=None) -> GameTranscript:
    return run_online(RandomizedDoubleGreedyPolicy(seed), f, QueryModel.QTYPE1, order)


def run_random_cut(f: SetFunction, order: Sequence[int] | None = None, seed=None) -> GameTranscript:
    return run_online(RandomCutPolicy(seed), f, QueryModel.QTYPE1, order)


def doubling_scores(g: Digraph, v: int, X: int, Y: int) -> tuple[float, float, float, float]:
    """Certain and potential payoffs ``(C_0, C_1, P_0, P_1)`` of vertex ``v``."""
    me = 1 << v
    c_v_Y, c_v_X = g.between(me, Y), g.between(me, X)
    c_X_v, c_Y_v = g.between(X, me), g.between(Y, me)
    p0 = math.fsum([g.w_out[v], -c_v_Y, -c_v_X])
    p1 = math.fsum([g.w_in[v], -c_Y_v, -c_X_v])
    return c_v_Y, c_X_v, p0, p1


def run_doubling_dicut(g: Digraph, order: Sequence[int] | None = None) -> GameTranscript:
    """Online doubling rule: accept ``v`` when ``C_0 + P_0/2 >= C_1 + P_1/2``."""
    order = list(range(g.n)) if order is None else [int(v) for v in order]
    if sorted(order) != list(range(g.n)):
        raise DomainError("order must be a permutation of the vertices")
    transcript = GameTranscript(g.n, Template.ONLINE, None)
    X = Y = 0
    for v in order:
        c0, c1, p0, p1 = doubling_scores(g, v, X, Y)
        accept = c0 + p0 / 2 >= c1 + p1 / 2
        a, _ = digraph_marginals(g, v, X)
        _, b = digraph_marginals(g, v, Y)
        transcript.steps.append(StepRecord(v, a, b, accept, (c0, c1, p0, p1)))
        if accept:
            X |= 1 << v
        else:
            Y |= 1 << v
    transcript.X, transcript.Y = X, Y
    transcript.value = g.cut_value(X)
    return transcript


@dataclass
class EquivalenceReport:
    steps: int
    agreements: int
    X_doubling: int
    X_greedy: int
    divergences: list[dict] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.divergences and self.X_doubling == self.X_greedy


def compare_doubling_double_greedy(g: Digraph, order: Sequence[int] | None = None) -> EquivalenceReport:
    doubling = run_doubling_dicut(g, order)
    greedy = run_double_greedy_det(cut_function(g), order)
    report = EquivalenceReport(len(doubling.steps), 0, doubling.X, greedy.X)
    for i, (d, s) in enumerate(zip(doubling.steps, greedy.steps), 1):
        if d.item == s.item and d.accept == s.accept:
            report.agreements += 1
            continue
        c0, c1, p0, p1 = d.scores
        report.divergences.append(
            dict(step=i, item=d.item, a=s.a, b=s.b, C0=c0, C1=c1, P0=p0, P1=p1)
        )
    return report
