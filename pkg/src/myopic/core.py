"""Subsets, dense set functions, directed cut functions and brute-force oracles.

Subsets are plain ``int`` bitmasks: bit ``i`` is set when item ``i`` belongs
to the set. Items are 0-based internally; every file format and every
printed label is 1-based.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import DomainError

MAX_ITEMS = 24


def mask(items: Iterable[int]) -> int:
    out = 0
    for i in items:
        out |= 1 << i
    return out


def members(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def complement(bits: int, n: int) -> int:
    return full_mask(n) ^ bits


def subsets_of(bits: int):
    """Yield every submask of ``bits`` (including 0 and ``bits`` itself)."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ITEMS:
            raise DomainError(f"ground set size must be in [1, {MAX_ITEMS}], got {self.n}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(self.n)))
        elif len(self.labels) != self.n:
            raise DomainError(f"expected {self.n} labels, got {len(self.labels)}")
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def check(self, bits: int) -> int:
        if not 0 <= bits <= self.full:
            raise DomainError(f"mask {bits} out of range for n={self.n}")
        return bits

    def format(self, bits: int) -> str:
        return " ".join(self.labels[i] for i in members(bits))

    def parse(self, text: str) -> int:
        index = {lab: i for i, lab in enumerate(self.labels)}
        bits = 0
        for tok in text.split():
            if tok not in index:
                raise DomainError(f"unknown item label {tok!r}")
            bits |= 1 << index[tok]
        return bits


class SetFunction:
    """A set function stored as a dense table of ``2**n`` values.

    ``values[S]`` is ``f(S)`` for the subset with bitmask ``S``. The table is
    copied and frozen on construction.
    """

    __slots__ = ("ground", "values")

    def __init__(self, values, ground: GroundSet | int | None = None):
        arr = np.array(values, dtype=float)
        if arr.ndim != 1:
            raise DomainError("value table must be one-dimensional")
        n = int(arr.size).bit_length() - 1
        if arr.size < 2 or 1 << n != arr.size:
            raise DomainError(f"table length {arr.size} is not a power of two")
        if ground is None:
            ground = GroundSet(n)
        elif isinstance(ground, int):
            ground = GroundSet(ground)
        if ground.n != n:
            raise DomainError(f"table has 2^{n} entries but ground set has n={ground.n}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("set function values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SetFunction is immutable")

    @property
    def n(self) -> int:
        return self.ground.n

    def __call__(self, bits: int) -> float:
        return evaluate(self, bits)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        return (
            isinstance(other, SetFunction)
            and self.n == other.n
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"SetFunction(n={self.n})"

    def is_normalized(self, tol: float = 0.0) -> bool:
        return abs(self.values[0]) <= tol

    def is_nonnegative(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.values >= -tol))


def evaluate(f: SetFunction, S: int) -> float:
    f.ground.check(S)
    return float(f.values[S])


def complement_evaluate(f: SetFunction, S: int) -> float:
    """``f̄(S) = f(N \\ S)``."""
    f.ground.check(S)
    return float(f.values[f.ground.full ^ S])


def _check_outside(f: SetFunction, u: int, S: int):
    f.ground.check(S)
    if not 0 <= u < f.n:
        raise DomainError(f"item {u} out of range for n={f.n}")
    if S >> u & 1:
        raise DomainError(f"item {u} already belongs to the base set")


def marginal(f: SetFunction, u: int, S: int) -> float:
    _check_outside(f, u, S)
    return float(f.values[S | 1 << u] - f.values[S])


def complement_marginal(f: SetFunction, u: int, S: int) -> float:
    _check_outside(f, u, S)
    full = f.ground.full
    return float(f.values[full ^ (S | 1 << u)] - f.values[full ^ S])


class SubmodularityReport(NamedTuple):
    ok: bool
    violation: tuple | None = None

    def __bool__(self):
        return self.ok


def check_submodular(f: SetFunction, tol: float = 1e-12, full: bool = False) -> SubmodularityReport:
    """Check submodularity of ``f``.

    The default pairwise form tests ``f(S+u) + f(S+v) - f(S+u+v) >= f(S) - tol``
    for every ``S`` and pair ``u, v`` outside ``S``; the violation payload is
    ``(S, u, v, slack)`` with the lowest ``S``. With ``full=True`` every pair
    ``S, T`` is checked against ``f(S|T) + f(S&T) <= f(S) + f(T) + tol`` and
    the payload is ``(S, T, slack)``.
    """
    if full:
        return _check_submodular_full(f, tol)
    vals = f.values
    n = f.n
    masks = np.arange(vals.size)
    best = None
    for u, v in itertools.combinations(range(n), 2):
        free = masks[((masks >> u) & 1 == 0) & ((masks >> v) & 1 == 0)]
        slack = vals[free | 1 << u] + vals[free | 1 << v] - vals[free | 1 << u | 1 << v] - vals[free]
        bad = np.nonzero(slack < -tol)[0]
        if bad.size:
            S = int(free[bad[0]])
            if best is None or S < best[0]:
                best = (S, u, v, float(slack[bad[0]]))
    return SubmodularityReport(best is None, best)


def _check_submodular_full(f: SetFunction, tol: float) -> SubmodularityReport:
    vals = f.values
    masks = np.arange(vals.size)
    for S in range(vals.size):
        slack = vals[S] + vals - vals[S | masks] - vals[S & masks]
        bad = np.nonzero(slack < -tol)[0]
        if bad.size:
            return SubmodularityReport(False, (S, int(bad[0]), float(slack[bad[0]])))
    return SubmodularityReport(True, None)


def brute_force_max(f: SetFunction) -> tuple[int, float]:
    """Exhaustive argmax; ties go to the lowest mask."""
    best = int(np.argmax(f.values))
    return best, float(f.values[best])


# --- directed graphs -------------------------------------------------------


@dataclass(frozen=True)
class Digraph:
    """Weighted digraph on vertices ``0..n-1``; parallel edges are merged."""

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()
    w_in: tuple[float, ...] = field(init=False, repr=False)
    w_out: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("a digraph needs at least one vertex")
        merged: dict[tuple[int, int], list[float]] = {}
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not math.isfinite(w) or w < 0:
                raise DomainError(f"edge weight must be finite and nonnegative, got {w}")
            merged.setdefault((u, v), []).append(w)
        edges = tuple((u, v, math.fsum(ws)) for (u, v), ws in sorted(merged.items()))
        object.__setattr__(self, "edges", edges)
        w_in = [[] for _ in range(self.n)]
        w_out = [[] for _ in range(self.n)]
        for u, v, w in edges:
            w_out[u].append(w)
            w_in[v].append(w)
        object.__setattr__(self, "w_in", tuple(math.fsum(ws) for ws in w_in))
        object.__setattr__(self, "w_out", tuple(math.fsum(ws) for ws in w_out))

    @classmethod
    def cycle(cls, n: int, weight: float = 1.0) -> "Digraph":
        return cls(n, tuple((i, (i + 1) % n, weight) for i in range(n)))

    def between(self, A: int, B: int) -> float:
        """``c(A, B)``: total weight of edges from ``A`` to ``B``."""
        return math.fsum(w for u, v, w in self.edges if A >> u & 1 and B >> v & 1)

    def cut_value(self, S: int) -> float:
        """Lazy cut evaluation; no bound on ``n``."""
        return math.fsum(w for u, v, w in self.edges if S >> u & 1 and not S >> v & 1)


def cut_function(g: Digraph) -> SetFunction:
    """Materialize the directed cut function ``f(S) = c(S, V \\ S)``."""
    if g.n > MAX_ITEMS:
        raise DomainError(f"cannot materialize a cut table for n={g.n}; use Digraph.cut_value")
    masks = np.arange(1 << g.n)
    values = np.zeros(masks.size)
    for u, v, w in g.edges:
        values += w * (((masks >> u) & 1) & (1 - ((masks >> v) & 1)))
    return SetFunction(values, g.n)


def digraph_marginals(g: Digraph, v: int, S: int) -> tuple[float, float]:
    """``(ρ(v|S), ρ̄(v|S))`` computed from edge weights alone."""
    if not 0 <= v < g.n:
        raise DomainError(f"vertex {v} out of range for n={g.n}")
    if S >> v & 1:
        raise DomainError(f"vertex {v} already belongs to the base set")
    into = g.between(S, 1 << v)
    out_of = g.between(1 << v, S)
    return (
        math.fsum([g.w_out[v], -into, -out_of]),
        math.fsum([g.w_in[v], -out_of, -into]),
    )


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank by Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] / p[col]
                m[r] = [a - factor * b for a, b in zip(m[r], p)]
        rank += 1
    return rank


def cut_reconstruction_rank(g: Digraph) -> tuple[list[list[int]], int]:
    """Coefficient matrix mapping edge weights to the nontrivial cut values.

    Rows are the subsets ``S`` with ``0 < S < full`` in mask order; columns
    are ``g.edges`` in order. A rank below the edge count means the weights
    cannot be recovered from the cut function.
    """
    rows = [
        [1 if S >> u & 1 and not S >> v & 1 else 0 for u, v, _ in g.edges]
        for S in range(1, full_mask(g.n))
    ]
    return rows, exact_rank(rows)


# --- file formats ----------------------------------------------------------


def _format_value(x: float, precision: int | None) -> str:
    if precision is None:
        return repr(float(x))
    return f"{x:.{precision}g}"


def write_function_csv(f: SetFunction, dest=None, precision: int | None = 7, meta: dict | None = None) -> str:
    """Write ``f`` as an ``S,f`` table; ``meta`` becomes ``# key: value`` lines.

    ``precision=None`` writes round-trip float reprs instead of
    ``precision`` significant digits.
    """
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["S", "f"])
    for S in range(len(f)):
        writer.writerow([f.ground.format(S), _format_value(f.values[S], precision)])
    text = buf.getvalue()
    if dest is not None:
        Path(dest).write_text(text)
    return text


def parse_function_csv(text: str) -> tuple[SetFunction, dict[str, str]]:
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, sep, value = stripped[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        body.append(line)
    rows = list(csv.reader(body))
    if not rows or [c.strip() for c in rows[0]] != ["S", "f"]:
        raise DomainError("function table must start with an 'S,f' header")
    rows = rows[1:]
    n = len(rows).bit_length() - 1
    if n < 1 or 1 << n != len(rows):
        raise DomainError(f"expected 2^n rows, got {len(rows)}")
    ground = GroundSet(n)
    values = np.full(len(rows), np.nan)
    for row in rows:
        if len(row) != 2:
            raise DomainError(f"malformed row {row!r}")
        S = ground.parse(row[0])
        if not np.isnan(values[S]):
            raise DomainError(f"duplicate row for subset {{{row[0]}}}")
        try:
            values[S] = float(row[1])
        except ValueError as exc:
            raise DomainError(f"bad value {row[1]!r}") from exc
    return SetFunction(values, ground), meta


def read_function_csv(path) -> tuple[SetFunction, dict[str, str]]:
    return parse_function_csv(Path(path).read_text())


def parse_edge_list(text: str, n: int | None = None) -> Digraph:
    """Parse ``u v w`` lines (1-based vertex ids, ``#`` comments)."""
    edges = []
    top = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DomainError(f"line {lineno}: expected 'u v w', got {line!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise DomainError(f"line {lineno}: {exc}") from exc
        if u < 1 or v < 1:
            raise DomainError(f"line {lineno}: vertex ids are 1-based")
        edges.append((u - 1, v - 1, w))
        top = max(top, u, v)
    if n is None:
        n = max(top, 1)
    elif n < top:
        raise DomainError(f"edge list mentions vertex {top} but n={n}")
    return Digraph(n, tuple(edges))


def read_edge_list(path, n: int | None = None) -> Digraph:
    return parse_edge_list(Path(path).read_text(), n)


def format_edge_list(g: Digraph) -> str:
    return "".join(f"{u + 1} {v + 1} {w!r}\n" for u, v, w in g.edges)
