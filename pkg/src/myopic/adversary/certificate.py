"""Adversarial certificates: a set function plus its pairing and trap data."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from ..core import (
    SetFunction,
    SubmodularityReport,
    check_submodular,
    members,
    parse_function_csv,
    write_function_csv,
)
from ..exceptions import DomainError, InvalidCertificate
from .conditions import DEFAULT_TOL, ConditionReport, Variant, verify_conditions


def _items(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) - 1 for t in text.split())
    except ValueError as exc:
        raise DomainError(f"bad item list {text!r}") from exc


def _labels(items) -> str:
    return " ".join(str(i + 1) for i in items)


@dataclass(frozen=True)
class Certificate:
    """``f`` with pairs ``(a_j, r_j)``, optimum designate ``O`` and a condition family.

    ``report`` and ``submodularity`` are filled by :meth:`verify`.
    """

    f: SetFunction
    variant: Variant
    A: tuple[int, ...]
    R: tuple[int, ...]
    O: int
    report: ConditionReport | None = field(default=None, compare=False)
    submodularity: SubmodularityReport | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.coerce(self.variant))
        object.__setattr__(self, "A", tuple(int(a) for a in self.A))
        object.__setattr__(self, "R", tuple(int(r) for r in self.R))
        n = self.f.n
        if len(self.A) != len(self.R):
            raise DomainError("A and R must have equal length")
        if set(self.A) & set(self.R):
            raise DomainError("A and R must be disjoint")
        if any(not 0 <= u < n for u in self.A + self.R):
            raise DomainError("pair items out of range")
        self.f.ground.check(self.O)

    @property
    def k(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def c(self) -> float:
        return float(self.f.values[self.O])

    @property
    def bound(self) -> float:
        return 1.0 / self.c if self.c > 0 else float("inf")

    def verify(self, tol: float = DEFAULT_TOL) -> "Certificate":
        """Return a copy with fresh reports attached (does not raise)."""
        report = verify_conditions(self.f, self.A, self.R, self.O, self.variant, tol)
        sub = check_submodular(self.f, tol, full=True)
        return replace(self, report=report, submodularity=sub)

    def require_valid(self, tol: float = DEFAULT_TOL) -> "Certificate":
        """Like :meth:`verify` but raise :class:`InvalidCertificate` on the first failure."""
        cert = self.verify(tol)
        failure = cert.report.first_failure()
        if failure is not None:
            name, res = failure
            raise InvalidCertificate(f"{cert.variant.value} certificate fails {name}", res.witness)
        return cert

    def meta(self) -> dict[str, str]:
        return {
            "variant": self.variant.value,
            "k": str(self.k),
            "A": _labels(self.A),
            "R": _labels(self.R),
            "O": _labels(members(self.O)),
            "c": f"{self.c:.10g}",
        }

    def to_csv(self, dest=None) -> str:
        # full precision: 7 digits can break equalities at 1e-6 after rounding
        return write_function_csv(self.f, dest, precision=None, meta=self.meta())

    @classmethod
    def from_csv(cls, text: str, variant=None) -> "Certificate":
        f, meta = parse_function_csv(text)
        missing = [key for key in ("A", "R", "O") if key not in meta]
        if variant is None:
            if "variant" not in meta:
                missing.append("variant")
            variant = meta.get("variant")
        if missing:
            raise DomainError("certificate header lacks " + ", ".join(missing))
        A, R = _items(meta["A"]), _items(meta["R"])
        O = 0
        for u in _items(meta["O"]):
            O |= 1 << u
        cert = cls(f, Variant.coerce(variant), A, R, O)
        if "k" in meta and int(meta["k"]) != cert.k:
            raise DomainError(f"header k={meta['k']} but |A|={cert.k}")
        return cert


def read_certificate(path, variant=None) -> Certificate:
    return Certificate.from_csv(Path(path).read_text(), variant)


def write_certificate(cert: Certificate, path) -> str:
    return cert.to_csv(path)


def reference_certificate(variant) -> Certificate:
    """The shipped certificate for ``variant`` at ``n=8, k=4`` (produced by our own solver)."""
    variant = Variant.coerce(variant)
    text = resources.files("myopic").joinpath("data", f"{variant.value}.csv").read_text()
    return Certificate.from_csv(text)
