"""Seeded random instances: digraphs and normalized nonnegative submodular tables."""
from __future__ import annotations

import numpy as np

from .core import Digraph, SetFunction, cut_function
from .exceptions import DomainError

MAX_TRIES = 1000


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_digraph(n: int, seed=None, density: float = 0.5) -> Digraph:
    """Each ordered pair gets an edge with probability ``density``, weight ``U[0,1]``."""
    rng = _rng(seed)
    edges = [
        (u, v, float(rng.random()))
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < density
    ]
    return Digraph(n, tuple(edges))


def random_order(n: int, seed=None) -> list[int]:
    return [int(u) for u in _rng(seed).permutation(n)]


def repair_down(values: np.ndarray) -> np.ndarray:
    """Lower entries, by increasing cardinality, until every pairwise inequality holds.

    ``f(S)`` becomes ``min(f(S), f(S-u) + f(S-v) - f(S-u-v))`` over pairs in ``S``;
    lowering ``S`` only affects rows where it sits on the larger side, which
    are visited later.
    """
    f = np.array(values, dtype=float)
    n = f.size.bit_length() - 1
    order = sorted(range(f.size), key=lambda S: (bin(S).count("1"), S))
    for S in order:
        items = [i for i in range(n) if S >> i & 1]
        best = f[S]
        for a in range(len(items)):
            su = S ^ 1 << items[a]
            for b in range(a + 1, len(items)):
                sv = S ^ 1 << items[b]
                best = min(best, f[su] + f[sv] - f[su & sv])
        f[S] = best
    return f


def random_submodular(n: int, seed=None, noise: float = 0.5) -> SetFunction:
    """Random normalized nonnegative submodular table.

    A random cut function plus a concave-of-modular term gets nonnegative
    noise on every nonempty set, is repaired downward, and is redrawn if the
    repair produced a negative value.
    """
    if not 1 <= n <= 12:
        raise DomainError(f"n must be in [1, 12], got {n}")
    rng = _rng(seed)
    masks = np.arange(1 << n)
    bits = (masks[:, None] >> np.arange(n)) & 1
    for _ in range(MAX_TRIES):
        base = cut_function(random_digraph(n, rng, rng.uniform(0.2, 0.8))).values
        w = rng.random(n)
        base = base + rng.random() * np.sqrt(bits @ w)
        table = base + noise * rng.random(masks.size)
        table[0] = 0.0
        table = repair_down(table)
        if np.all(table >= 0):
            return SetFunction(table, n)
    raise DomainError("could not draw a nonnegative table")  # pragma: no cover
