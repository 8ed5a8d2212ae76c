"""CPLEX-style LP text export and a reader for the same subset of the format."""
from __future__ import annotations

import re
from pathlib import Path

from ..exceptions import DomainError
from .model import LPModel, LPRow

_KNOWN_TAGS = ("C1", "C2", "C3", "C4", "C5", "C6", "C2-dagger", "C2-star")
_SAFE = {t.replace("-", "_"): t for t in _KNOWN_TAGS}
_TERM = re.compile(r"([+-])\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*x_(\d+)")
_ROW = re.compile(r"^\s*(?:([A-Za-z_][\w.]*)\s*:)?\s*(.*?)\s*(<=|>=|=)\s*(\S+)\s*$")
LINE_LIMIT = 500


def _linear(terms) -> str:
    out = []
    for j, v in terms:
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        coef = "" if mag == 1.0 else f"{mag!r} "
        out.append(f"{sign} {coef}x_{j}")
    text = " ".join(out) if out else "0 x_0"
    return _wrap(text)


def _wrap(text: str) -> str:
    # keep every physical line under the usual reader limit
    if len(text) <= LINE_LIMIT:
        return text
    lines, cur = [], ""
    for tok in re.split(r"(?= [+-] )", text):
        if len(cur) + len(tok) > LINE_LIMIT:
            lines.append(cur)
            cur = tok.lstrip()
        else:
            cur += tok
    lines.append(cur)
    return "\n   ".join(lines)


def export_lp_text(model: LPModel) -> str:
    """Render ``model`` with Maximize/Minimize, Subject To, Bounds and End sections."""
    head = "Maximize" if model.sense == "max" else "Minimize"
    lines = [f"\\ {model.num_vars} variables, {len(model.rows)} rows", head]
    lines.append(" obj: " + _linear(sorted(model.objective.items())))
    lines.append("Subject To")
    for i, row in enumerate(model.rows):
        name = f"{row.tag.replace('-', '_')}_{i}"
        lines.append(f" {name}: {_linear(row.coeffs)} {row.sense} {row.rhs!r}")
    lines.append("Bounds")
    lines.extend(f" x_{j} >= 0" for j in range(model.num_vars))
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(model: LPModel, path) -> str:
    text = export_lp_text(model)
    Path(path).write_text(text)
    return text


def _terms(expr: str, where: str) -> tuple[tuple[int, float], ...]:
    expr = expr.strip()
    if expr and expr[0] not in "+-":
        expr = "+ " + expr
    acc: dict[int, float] = {}
    pos = 0
    for m in _TERM.finditer(expr):
        if expr[pos : m.start()].strip():
            raise DomainError(f"{where}: cannot parse {expr[pos:m.start()]!r}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        j = int(m.group(3))
        acc[j] = acc.get(j, 0.0) + sign * coef
        pos = m.end()
    if expr[pos:].strip():
        raise DomainError(f"{where}: cannot parse {expr[pos:]!r}")
    return tuple(sorted((j, v) for j, v in acc.items() if v != 0.0))


def parse_lp_text(text: str) -> LPModel:
    """Read back what :func:`export_lp_text` writes.

    Only linear rows over ``x_<index>`` variables and plain ``>= 0`` bounds
    are understood.
    """
    section = None
    sense = None
    objective: tuple = ()
    rows: list[LPRow] = []
    top = -1
    statements: list[tuple[str, str]] = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        word = line.strip().lower()
        if word in ("maximize", "maximise", "max", "minimize", "minimise", "min"):
            section, sense = "obj", "max" if word.startswith("max") else "min"
            continue
        if word in ("subject to", "such that", "st", "s.t."):
            section = "rows"
            continue
        if word == "bounds":
            section = "bounds"
            continue
        if word == "end":
            break
        if section is None:
            raise DomainError(f"text before the objective section: {line!r}")
        stripped = line.strip()
        if stripped[0] in "+-" and statements and statements[-1][0] == section != "bounds":
            # continuation of a wrapped expression
            statements[-1] = (section, statements[-1][1] + " " + stripped)
            continue
        statements.append((section, stripped))
    for section, stmt in statements:
        if section == "obj":
            expr = stmt.split(":", 1)[1] if ":" in stmt else stmt
            objective = _terms(expr, "objective")
        elif section == "rows":
            m = _ROW.match(stmt)
            if not m:
                raise DomainError(f"bad constraint {stmt!r}")
            name, expr, op, rhs = m.groups()
            tag = (name or "").rsplit("_", 1)[0]
            rows.append(LPRow(_terms(expr, name or "row"), op, float(rhs), _SAFE.get(tag, tag)))
        else:
            m = re.match(r"^x_(\d+)\s*>=\s*0(?:\.0*)?$", stmt)
            if not m:
                raise DomainError(f"unsupported bound {stmt!r}")
            top = max(top, int(m.group(1)))
    if sense is None:
        raise DomainError("missing objective section")
    for j, _ in objective:
        top = max(top, j)
    for r in rows:
        for j, _ in r.coeffs:
            top = max(top, j)
    return LPModel(top + 1, dict(objective), rows, sense)


def read_lp(path) -> LPModel:
    return parse_lp_text(Path(path).read_text())
