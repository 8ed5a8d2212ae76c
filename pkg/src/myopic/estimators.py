"""Estimator-style facades over the algorithms and the LP pipeline.

``fit`` runs the computation and stores results in trailing-underscore
attributes; hyperparameters are plain constructor arguments, so
``get_params``/``set_params``/``clone`` work as usual.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Digraph, SetFunction, brute_force_max, cut_function, members
from .engine.algorithms import (
    run_double_greedy_det,
    run_double_greedy_rand,
    run_doubling_dicut,
)
from .exceptions import DomainError
from .lp.model import LPConfig, build_lp, solution_to_function, solve_lp


def check_set_function(f) -> SetFunction:
    """Accept a :class:`SetFunction` or a ``2**n`` value table."""
    if isinstance(f, SetFunction):
        return f
    return SetFunction(np.asarray(f, dtype=float))


def check_digraph(g) -> Digraph:
    """Accept a :class:`Digraph` or an ``(n, n)`` weight matrix."""
    if isinstance(g, Digraph):
        return g
    W = np.asarray(g, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DomainError("weight matrix must be square")
    edges = [(int(u), int(v), float(W[u, v])) for u, v in zip(*np.nonzero(W)) if u != v]
    if np.any(np.diag(W) != 0):
        raise DomainError("weight matrix has self-loops")
    return Digraph(W.shape[0], tuple(edges))


class _SelectionMixin:
    def predict(self, X=None) -> np.ndarray:
        """Boolean membership vector of the selected items."""
        check_is_fitted(self, "selected_")
        out = np.zeros(self.n_items_, dtype=bool)
        out[members(self.selected_)] = True
        return out

    def score(self, X, y=None) -> float:
        """Achieved value divided by the brute-force optimum of ``X``."""
        check_is_fitted(self, "value_")
        _, opt = brute_force_max(self._as_function(X))
        return self.value_ / opt if opt > 0 else 1.0


class DoubleGreedyMaximizer(_SelectionMixin, BaseEstimator):
    """Deterministic (``randomized=False``) or randomized double greedy."""

    def __init__(self, randomized: bool = False, order=None, seed=None):
        self.randomized = randomized
        self.order = order
        self.seed = seed

    def _as_function(self, X):
        return check_set_function(X)

    def fit(self, X, y=None):
        f = check_set_function(X)
        if self.randomized:
            t = run_double_greedy_rand(f, self.order, self.seed)
        else:
            t = run_double_greedy_det(f, self.order)
        self.transcript_ = t
        self.selected_ = t.X
        self.value_ = t.value
        self.n_items_ = f.n
        return self


class DoublingDicut(_SelectionMixin, BaseEstimator):
    """Online doubling rule for directed cuts."""

    def __init__(self, order=None):
        self.order = order

    def _as_function(self, X):
        return cut_function(check_digraph(X))

    def fit(self, X, y=None):
        g = check_digraph(X)
        t = run_doubling_dicut(g, self.order)
        self.transcript_ = t
        self.selected_ = t.X
        self.value_ = t.value
        self.n_items_ = g.n
        return self


class InapproximabilityLP(BaseEstimator):
    """Build, solve and certify one adversarial LP; ``fit`` takes no data."""

    def __init__(self, variant: str = "fixed-q2", n: int = 8, k: int = 4, method: str = "dual"):
        self.variant = variant
        self.n = n
        self.k = k
        self.method = method

    def fit(self, X=None, y=None):
        cfg = LPConfig(self.variant, self.n, self.k)
        self.config_ = cfg
        self.model_ = build_lp(cfg)
        self.solution_ = solve_lp(self.model_, self.method)
        self.certificate_ = solution_to_function(self.solution_, cfg)
        self.objective_ = self.certificate_.c
        self.bound_ = self.certificate_.bound
        return self

    def transform(self, X=None) -> np.ndarray:
        """The certificate's value table."""
        check_is_fitted(self, "certificate_")
        return self.certificate_.f.values
