"""A zoo of myopic policies for stress-testing adversaries."""
from __future__ import annotations

import numpy as np

from .algorithms import DoubleGreedyPolicy, RandomizedDoubleGreedyPolicy
from .game import Policy
from .queries import Gateway, Query, QueryModel

PRIORITY_WEIGHTS = 64


class AcceptAllPolicy(Policy):
    name = "accept-all"

    def decide(self, gw):
        return True


class RejectAllPolicy(Policy):
    name = "reject-all"

    def decide(self, gw):
        return False


class ThresholdPolicy(Policy):
    """Accept when ``a - b >= theta`` (``rule="diff"``), ``a >= theta`` or ``-b >= theta``."""

    def __init__(self, theta: float = 0.0, rule: str = "diff"):
        if rule not in ("diff", "accept", "reject"):
            raise ValueError(f"unknown rule {rule!r}")
        self.theta = theta
        self.rule = rule
        self.name = f"threshold-{rule}({theta:g})"

    def decide(self, gw):
        if self.rule == "accept":
            return gw.rho(gw.X) >= self.theta
        b = gw.rho_bar(gw.Y)
        if self.rule == "reject":
            return -b >= self.theta
        return gw.rho(gw.X) - b >= self.theta


class OldestBaseGreedyPolicy(Policy):
    """Double greedy against the first attained sets ``X_0, Y_0`` (needs Q-Type 2)."""

    name = "oldest-base-greedy"

    def decide(self, gw):
        x0, y0 = gw.prefix(0)
        return gw.rho(x0) >= gw.rho_bar(y0)


class RandomPolicy(Policy):
    """Seeded random behaviour: random permitted queries, a random linear
    decision rule over the answers, and a random linear priority function.

    Under Q-Type 3 it also probes already revealed items.
    """

    def __init__(self, seed: int = 0, max_queries: int = 4):
        self.seed = seed
        self.max_queries = max_queries
        self.name = f"random({seed})"
        self.start(0)

    def start(self, n):
        self._rng = np.random.default_rng(self.seed)
        wrng = np.random.default_rng([self.seed, 1])
        self._weights = wrng.normal(size=PRIORITY_WEIGHTS)
        self._bias = float(wrng.normal())

    def priority(self, qvec) -> float:
        w = self._weights
        return float(sum(w[i % w.size] * v for i, (_, v) in enumerate(qvec)))

    def decide(self, gw: Gateway) -> bool:
        rng = self._rng
        options = gw.permitted()
        if gw.model is QueryModel.QTYPE3 and gw.revealed:
            revealed = 0
            for u in gw.revealed:
                revealed |= 1 << u
            u = int(rng.choice(gw.revealed))
            options.append(Query(str(rng.choice(["f", "fbar"])), int(rng.integers(1 << gw.n)) & revealed & ~(1 << u), u))
        count = int(rng.integers(0, self.max_queries + 1))
        answers = [gw.query(options[int(rng.integers(len(options)))]) for _ in range(count)]
        if not answers or rng.random() < 0.3:
            return bool(rng.random() < 0.5)
        coeffs = rng.normal(size=len(answers))
        return float(coeffs @ np.asarray(answers)) + self._bias * rng.random() >= 0.0


def make_zoo(size: int = 200, seed: int = 0, model=QueryModel.QTYPE1) -> list[Policy]:
    """Deterministic baselines followed by seeded random policies, ``size`` in total.

    ``model`` only gates policies needing more than Q-Type 1.
    """
    model = QueryModel.coerce(model)
    zoo: list[Policy] = [DoubleGreedyPolicy(), AcceptAllPolicy(), RejectAllPolicy()]
    for theta in (-1.0, -0.5, -0.25, 0.25, 0.5, 1.0):
        zoo.append(ThresholdPolicy(theta, "diff"))
    for theta in (0.0, 0.5):
        zoo.append(ThresholdPolicy(theta, "accept"))
        zoo.append(ThresholdPolicy(theta, "reject"))
    if model >= QueryModel.QTYPE2:
        zoo.append(OldestBaseGreedyPolicy())
    for i in range(4):
        zoo.append(RandomizedDoubleGreedyPolicy(seed=seed + i))
    i = 0
    while len(zoo) < size:
        zoo.append(RandomPolicy(seed=seed * 100_003 + i))
        i += 1
    return zoo[:size] if size >= 1 else []
