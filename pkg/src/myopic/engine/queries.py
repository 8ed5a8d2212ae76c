"""Relevant-query models, game state, internal memory and the query gateway."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from ..core import members, subsets_of
from ..exceptions import DomainError, QueryModelViolation


class QueryModel(enum.IntEnum):
    """Nested classes of permitted oracle queries (``QTYPE1`` is the smallest)."""

    QTYPE1 = 1
    QTYPE2 = 2
    QTYPE3 = 3

    @classmethod
    def coerce(cls, value) -> "QueryModel":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            text = value.strip().lower().replace("-", "").replace("_", "")
            if text.startswith("qtype"):
                text = text[5:]
            elif text.startswith("q"):
                text = text[1:]
            value = int(text)
        return cls(int(value))

    def permits(self, query: "Query", state: "GameState") -> bool:
        if query.side not in ("f", "fbar"):
            return False
        item = state.current_key if query.item is None else query.item
        base = query.base
        if self is QueryModel.QTYPE3:
            revealed = state.X | state.Y
            if item != state.current_key and not (isinstance(item, int) and revealed >> item & 1):
                return False
            if base & ~revealed:
                return False
            return not (isinstance(item, int) and base >> item & 1)
        if item != state.current_key:
            return False
        if self is QueryModel.QTYPE1:
            return base == (state.X if query.side == "f" else state.Y)
        return base in (state.xs if query.side == "f" else state.ys)


@dataclass(frozen=True)
class Query:
    """``ρ(item | base)`` when ``side == "f"``, ``ρ̄(item | base)`` when ``"fbar"``.

    ``item=None`` names the item currently being decided.
    """

    side: str
    base: int
    item: int | None = None

    def __str__(self):
        sym = "rho" if self.side == "f" else "rho_bar"
        who = "u_i" if self.item is None else str(self.item + 1)
        inside = " ".join(str(i + 1) for i in members(self.base))
        return f"{sym}({who}|{{{inside}}})"


_CURRENT = object()


class GameState:
    """Accepted set ``X``, rejected set ``Y`` and the prefix sets ``X_j, Y_j``."""

    def __init__(self, n: int):
        self.n = n
        self.X = 0
        self.Y = 0
        self.xs = [0]
        self.ys = [0]
        self.revealed: list[int] = []
        self.current: int | None = None

    @property
    def step(self) -> int:
        return len(self.revealed)

    @property
    def current_key(self):
        # unbound tokens have no item id; queries reach them only via item=None
        return _CURRENT if self.current is None else self.current

    def apply(self, item: int, accept: bool):
        bit = 1 << item
        if (self.X | self.Y) & bit:
            raise DomainError(f"item {item} was already decided")
        if accept:
            self.X |= bit
        else:
            self.Y |= bit
        self.revealed.append(item)
        self.xs.append(self.X)
        self.ys.append(self.Y)
        self.current = None


@dataclass
class History:
    """Append-only internal memory: answered queries and decisions."""

    queries: list[tuple[int, Query, float]] = field(default_factory=list)
    decisions: list[tuple[int, int, bool]] = field(default_factory=list)
    oracle_calls: int = 0

    def log_query(self, step: int, query: Query, answer: float):
        self.queries.append((step, query, answer))
        self.oracle_calls += 2

    def log_decision(self, step: int, item: int, accept: bool):
        self.decisions.append((step, item, accept))


Resolver = Callable[[Query, GameState], float]


class Gateway:
    """The only channel through which a policy sees the instance.

    Every query is checked against the active model, answered by the
    instance's resolver and logged into the history.
    """

    def __init__(self, model: QueryModel, state: GameState, resolver: Resolver, history: History):
        self.model = QueryModel.coerce(model)
        self._state = state
        self._resolve = resolver
        self.history = history

    @property
    def n(self) -> int:
        return self._state.n

    @property
    def step(self) -> int:
        """1-based index ``i`` of the round in progress."""
        return self._state.step + 1

    @property
    def X(self) -> int:
        return self._state.X

    @property
    def Y(self) -> int:
        return self._state.Y

    def prefix(self, j: int) -> tuple[int, int]:
        """``(X_j, Y_j)`` for ``0 <= j < i``."""
        return self._state.xs[j], self._state.ys[j]

    @property
    def revealed(self) -> tuple[int, ...]:
        return tuple(self._state.revealed)

    def permitted(self) -> list[Query]:
        """The queries about the current item this model allows now."""
        return permitted_bases(self.model, self._state)

    def query(self, query: Query) -> float:
        if not self.model.permits(query, self._state):
            raise QueryModelViolation(self.model, query)
        answer = float(self._resolve(query, self._state))
        self.history.log_query(self.step, query, answer)
        return answer

    def rho(self, base: int, item: int | None = None) -> float:
        return self.query(Query("f", base, item))

    def rho_bar(self, base: int, item: int | None = None) -> float:
        return self.query(Query("fbar", base, item))


def marginal_value(values, n: int, side: str, item: int, base: int) -> float:
    """Raw table lookup for ``ρ``/``ρ̄`` without permission checks."""
    if side == "f":
        return float(values[base | 1 << item] - values[base])
    full = (1 << n) - 1
    return float(values[full ^ (base | 1 << item)] - values[full ^ base])


def permitted_bases(model: QueryModel, state: GameState) -> list[Query]:
    """Every query about the current item the model allows in ``state``."""
    model = QueryModel.coerce(model)
    if model is QueryModel.QTYPE1:
        return [Query("f", state.X), Query("fbar", state.Y)]
    if model is QueryModel.QTYPE2:
        fs = list(dict.fromkeys(state.xs))
        bs = list(dict.fromkeys(state.ys))
        return [Query("f", b) for b in fs] + [Query("fbar", b) for b in bs]
    subs = sorted(subsets_of(state.X | state.Y))
    return [Query("f", s) for s in subs] + [Query("fbar", s) for s in subs]
