"""Online, fixed-priority and adaptive-priority game runners."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from ..core import SetFunction, complement_marginal, marginal
from ..exceptions import DomainError, QueryModelViolation
from .queries import (
    GameState,
    Gateway,
    History,
    Query,
    QueryModel,
    marginal_value,
    permitted_bases,
)

QueryVector = tuple  # tuple[tuple[Query, float], ...]


class Template(str, enum.Enum):
    ONLINE = "online"
    FIXED = "fixed"
    ADAPTIVE = "adaptive"

    @classmethod
    def coerce(cls, value) -> "Template":
        return value if isinstance(value, cls) else cls(str(value).lower())


class Policy:
    """Base class for double-sided myopic algorithms.

    ``start`` is called once with the ground-set size before anything else.
    ``priority`` maps a query vector to a real (lower is served first); the
    fixed template calls it once per item with the singleton marginals, the
    adaptive template once per remaining item every round. ``decide``
    receives only the :class:`Gateway` and returns ``True`` to accept.
    """

    name = "policy"

    def start(self, n: int) -> None:
        pass

    def priority(self, qvec: QueryVector) -> float:
        return 0.0

    def decide(self, gw: Gateway) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True)
class StepRecord:
    item: int
    a: float
    b: float
    accept: bool
    scores: tuple[float, ...] | None = None


@dataclass
class GameTranscript:
    n: int
    template: Template
    model: QueryModel | None
    steps: list[StepRecord] = field(default_factory=list)
    history: History = field(default_factory=History)
    X: int = 0
    Y: int = 0
    value: float = 0.0
    forfeited: bool = False
    violation: str | None = None

    @property
    def order(self) -> list[int]:
        return [s.item for s in self.steps]

    @property
    def decisions(self) -> list[bool]:
        return [s.accept for s in self.steps]

    def replay(self, f: SetFunction) -> tuple[int, float]:
        """Recompute the final accepted set and its value from the decisions."""
        X = 0
        for s in self.steps:
            if s.accept:
                X |= 1 << s.item
        return X, float(f.values[X])

    def to_text(self) -> str:
        lines = [
            f"# template: {self.template.value}",
            f"# model: {self.model.name if self.model is not None else 'none'}",
            "# order: " + " ".join(str(i + 1) for i in self.order),
        ]
        if self.forfeited:
            lines.append(f"# forfeited: {self.violation}")
        for i, s in enumerate(self.steps, 1):
            word = "accept" if s.accept else "reject"
            lines.append(f"{i} {s.item + 1} {word} {s.a:.9g} {s.b:.9g}")
        return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> list[tuple[int, int, bool, float, float]]:
    """Parse the step lines of :meth:`GameTranscript.to_text` (0-based items)."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, item, word, a, b = line.split()
        if word not in ("accept", "reject"):
            raise DomainError(f"bad decision {word!r}")
        out.append((int(i), int(item) - 1, word == "accept", float(a), float(b)))
    return out


class ItemSource(Protocol):
    """What a runner needs from an instance: the table, presentation and binding.

    ``present`` returns the item shown this round, or ``None`` for an
    unbound token whose identity is settled by ``bind`` after the decision.
    """

    f: SetFunction

    def present(self, state: GameState, remaining: Sequence[int], priorities: dict | None, template: Template) -> int | None: ...

    def resolve(self, query: Query, state: GameState) -> float: ...

    def bind(self, state: GameState, accept: bool) -> int: ...

    # optional: ``query_vectors(items, state, model, fixed)`` overrides how the
    # priority inputs are answered (see :func:`true_vectors`)


def lowest_priority(remaining: Sequence[int], priorities: dict | None, rank=None) -> list[int]:
    """Items sharing the minimal priority, ordered by ``rank`` (default: index)."""
    key = rank or (lambda u: u)
    if priorities is None:
        return sorted(remaining, key=key)
    best = min(priorities[u] for u in remaining)
    return sorted((u for u in remaining if priorities[u] == best), key=key)


class Instance:
    """A plain set function presented without an adversary.

    Online games follow ``order``; priority ties go to the item appearing
    earliest in ``order`` (lowest index by default).
    """

    def __init__(self, f: SetFunction, order: Sequence[int] | None = None):
        self.f = f
        n = f.n
        order = list(range(n)) if order is None else [int(u) for u in order]
        if sorted(order) != list(range(n)):
            raise DomainError("order must be a permutation of the ground set")
        self.order = order
        self._rank = {u: r for r, u in enumerate(order)}

    def present(self, state, remaining, priorities, template):
        item = lowest_priority(remaining, priorities, self._rank.__getitem__)[0]
        state.current = item
        return item

    def resolve(self, query, state):
        item = state.current if query.item is None else query.item
        return marginal_value(self.f.values, self.f.n, query.side, item, query.base)

    def bind(self, state, accept):
        return state.current


def query_vector(f: SetFunction, item: int, state: GameState, model: QueryModel) -> QueryVector:
    """``Q(item)``: the permitted marginals of ``item`` as if it were next."""
    return tuple(
        (q, marginal_value(f.values, f.n, q.side, item, q.base)) for q in permitted_bases(model, state)
    )


def singleton_vector(f: SetFunction, item: int) -> QueryVector:
    return (
        (Query("f", 0), marginal_value(f.values, f.n, "f", item, 0)),
        (Query("fbar", 0), marginal_value(f.values, f.n, "fbar", item, 0)),
    )


def true_vectors(f: SetFunction, items: Sequence[int], state: GameState, model: QueryModel, fixed: bool) -> dict:
    """Priority inputs straight from the table: singleton pairs when ``fixed``, else ``Q(u)``."""
    if fixed:
        return {u: singleton_vector(f, u) for u in items}
    return {u: query_vector(f, u, state, model) for u in items}


def play(policy: Policy, source: ItemSource, template=Template.ONLINE, model=QueryModel.QTYPE1) -> GameTranscript:
    """Run one game of ``policy`` against ``source`` under a template and query model."""
    template = Template.coerce(template)
    model = QueryModel.coerce(model)
    f = source.f
    n = f.n
    policy.start(n)
    state = GameState(n)
    transcript = GameTranscript(n, template, model)
    history = transcript.history
    remaining = list(range(n))
    vectors = getattr(source, "query_vectors", None) or (lambda *a: true_vectors(f, *a))
    fixed = None
    if template is Template.FIXED:
        fixed = {u: policy.priority(v) for u, v in vectors(remaining, state, model, True).items()}

    while remaining:
        if template is Template.ONLINE:
            priorities = None
        elif template is Template.FIXED:
            priorities = fixed
        else:
            priorities = {u: policy.priority(v) for u, v in vectors(remaining, state, model, False).items()}
        source.present(state, remaining, priorities, template)
        gw = Gateway(model, state, source.resolve, history)
        try:
            accept = bool(policy.decide(gw))
        except QueryModelViolation as exc:
            transcript.forfeited = True
            transcript.violation = str(exc)
            break
        item = source.bind(state, accept)
        a = marginal(f, item, state.X)
        b = complement_marginal(f, item, state.Y)
        transcript.steps.append(StepRecord(item, a, b, accept))
        history.log_decision(state.step + 1, item, accept)
        state.apply(item, accept)
        remaining.remove(item)

    transcript.X, transcript.Y = state.X, state.Y
    transcript.value = float(f.values[state.X])
    return transcript


def _source(instance, order=None) -> ItemSource:
    return Instance(instance, order) if isinstance(instance, SetFunction) else instance


def run_online(policy: Policy, instance, model=QueryModel.QTYPE1, order=None) -> GameTranscript:
    return play(policy, _source(instance, order), Template.ONLINE, model)


def run_fixed_priority(policy: Policy, instance, model=QueryModel.QTYPE1) -> GameTranscript:
    return play(policy, _source(instance), Template.FIXED, model)


def run_adaptive_priority(policy: Policy, instance, model=QueryModel.QTYPE1) -> GameTranscript:
    return play(policy, _source(instance), Template.ADAPTIVE, model)
