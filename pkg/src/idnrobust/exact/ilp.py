"""Time-expanded binary program for the minimum initial-failure problem.

Variables (all binary, one per time index d = 0..t_f):

* ``x_<name>_<d>`` / ``y_<name>_<d>``: entity on side A / B is failed at d;
* ``c_<owner>_<index>_<d>``: multi-entity minterm ``index`` of ``owner``'s
  IDR is hit at d (only for IDRs with more than one minterm).

Constraint rows, named ``<group>_<variable>``:

* ``mono``: failed entities stay failed, ``v_d >= v_{d-1}``;
* ``freeze``: entities without an IDR fail only initially, ``v_d <= v_0``;
* ``minterm``: ``c_d <= sum of its members at d``;
* ``dep``: a single-minterm IDR gives ``v_d <= sum of members at d-1 + v_0``;
  an IDR with N minterms gives ``N v_d <= sum over minterms at d-1 + N v_0``
  (a one-entity minterm contributes the member itself, a larger one its ``c``
  variable);
* ``threshold``: at least ``threshold`` entities are failed at ``t_f``.

Every row is an upper bound on failure, so any feasible assignment fails a
subset of the cascade closure of its d = 0 failures, and the exact cascade
of any initial set is itself feasible. The objective counts d = 0 failures.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from ..cascade import CascadeTrace
from ..model import IDN, EntityId, Side, require_valid
from ..robustness import threshold as rho_threshold

GROUPS = {
    "mono": "monotonicity",
    "freeze": "freeze",
    "minterm": "minterm",
    "dep": "dependency",
    "threshold": "threshold",
}

Terms = tuple  # tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class Variable:
    name: str
    time_index: int
    kind: str = "binary"


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: Terms
    sense: str
    rhs: int

    @property
    def group(self) -> str:
        return GROUPS.get(self.name.split("_", 1)[0], "other")

    def lhs(self, asg: Mapping[str, int]) -> int:
        return sum(coef * asg[var] for coef, var in self.terms)

    def holds(self, value: int) -> bool:
        if self.sense == "<=":
            return value <= self.rhs
        if self.sense == ">=":
            return value >= self.rhs
        return value == self.rhs

    def __str__(self) -> str:
        return f"{self.name}: {format_terms(self.terms)} {self.sense} {self.rhs}"


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[Variable, ...]
    objective: Terms
    constraints: tuple[Constraint, ...]
    t_f: int
    threshold: int

    def constraint(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)


def entity_var(e: EntityId, d: int) -> str:
    return f"{'x' if e.side is Side.A else 'y'}_{e.name}_{d}"


def aux_var(owner: EntityId, index: int, d: int) -> str:
    return f"c_{owner.name}_{index}_{d}"


def aux_minterms(idn: IDN) -> list[tuple[EntityId, int, frozenset[EntityId]]]:
    """Multi-entity minterms inside multi-minterm IDRs, which get ``c`` variables."""
    out = []
    for owner in idn.sorted_entities:
        idr = idn.idr(owner)
        if idr is not None and len(idr.minterms) > 1:
            out.extend((owner, i, m) for i, m in enumerate(idr.minterms) if len(m) > 1)
    return out


def build_ilp(idn: IDN, rho: float, t_f: int | None = None) -> IlpModel:
    require_valid(idn)
    if t_f is None:
        t_f = len(idn)
    if t_f < 1:
        raise ValueError(f"t_f must be >= 1, got {t_f}")
    target = rho_threshold(rho, len(idn))
    ents = idn.sorted_entities
    aux = aux_minterms(idn)
    steps = range(t_f + 1)

    variables = [Variable(entity_var(e, d), d) for e in ents for d in steps]
    variables += [Variable(aux_var(o, i, d), d) for o, i, _ in aux for d in steps]
    objective = tuple((1, entity_var(e, 0)) for e in ents)

    rows: list[Constraint] = []
    for e in ents:
        for d in range(1, t_f + 1):
            v = entity_var(e, d)
            rows.append(Constraint(f"mono_{v}", ((1, v), (-1, entity_var(e, d - 1))), ">=", 0))
    for e in ents:
        if idn.idr(e) is None:
            for d in range(1, t_f + 1):
                v = entity_var(e, d)
                rows.append(Constraint(f"freeze_{v}", ((1, v), (-1, entity_var(e, 0))), "<=", 0))
    for o, i, m in aux:
        for d in steps:
            c = aux_var(o, i, d)
            terms = ((1, c),) + tuple((-1, entity_var(x, d)) for x in sorted(m))
            rows.append(Constraint(f"minterm_{c}", terms, "<=", 0))
    for e in ents:
        idr = idn.idr(e)
        if idr is None:
            continue
        n_min = len(idr.minterms)
        for d in range(1, t_f + 1):
            v = entity_var(e, d)
            if n_min == 1:
                rest = tuple((-1, entity_var(x, d - 1)) for x in sorted(idr.minterms[0]))
            else:
                rest = tuple(
                    (-1, entity_var(next(iter(m)), d - 1) if len(m) == 1 else aux_var(e, j, d - 1))
                    for j, m in enumerate(idr.minterms)
                )
            # the v_0 term lets an initially failed entity stay failed
            rows.append(Constraint(f"dep_{v}", ((n_min, v),) + rest + ((-n_min, entity_var(e, 0)),), "<=", 0))
    rows.append(Constraint("threshold", tuple((1, entity_var(e, t_f)) for e in ents), ">=", target))

    return IlpModel(tuple(variables), objective, tuple(rows), t_f, target)


# -- assignments -------------------------------------------------------------


class MissingVariableError(KeyError):
    pass


class CheckResult(NamedTuple):
    feasible: bool
    violations: list[str]
    objective: int


def trace_to_assignment(idn: IDN, trace: CascadeTrace, t_f: int | None = None) -> dict[str, int]:
    """Assignment that reproduces ``trace`` exactly, padded to ``t_f``."""
    if t_f is None:
        t_f = len(idn)
    if t_f < trace.steady_step:
        raise ValueError(f"t_f={t_f} is before the steady state at t={trace.steady_step}")
    times = trace.failure_time
    asg: dict[str, int] = {}
    for e in idn.sorted_entities:
        ft = times[e]
        for d in range(t_f + 1):
            asg[entity_var(e, d)] = int(ft is not None and ft <= d)
    for o, i, m in aux_minterms(idn):
        hit = [times[x] for x in m if times[x] is not None]
        first = min(hit) if hit else None
        for d in range(t_f + 1):
            asg[aux_var(o, i, d)] = int(first is not None and first <= d)
    return asg


def check_assignment(model: IlpModel, asg: Mapping[str, int]) -> CheckResult:
    missing = [v.name for v in model.variables if v.name not in asg]
    if missing:
        raise MissingVariableError(f"assignment lacks {len(missing)} variable(s), e.g. {missing[0]}")
    violations = [
        f"{v.name} (binary): value {asg[v.name]}" for v in model.variables if asg[v.name] not in (0, 1)
    ]
    for c in model.constraints:
        value = c.lhs(asg)
        if not c.holds(value):
            violations.append(f"{c.name} ({c.group}): lhs {value} {c.sense} {c.rhs} fails")
    objective = sum(coef * asg[var] for coef, var in model.objective)
    return CheckResult(not violations, violations, objective)


# -- LP file format ----------------------------------------------------------

_LINE_WIDTH = 200


def format_terms(terms: Terms) -> str:
    parts = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if k == 0:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


def _wrap(head: str, body: str) -> list[str]:
    lines, cur = [], head
    for tok in _pair_tokens(body):
        if len(cur) + 1 + len(tok) > _LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   " + tok
        else:
            cur = f"{cur} {tok}" if cur else tok
    lines.append(cur)
    return lines


def _pair_tokens(body: str) -> list[str]:
    # keep "+ 2 x" together so wrapping never splits a term
    out, toks = [], body.split()
    k = 0
    while k < len(toks):
        j = k
        if toks[j] in "+-":
            j += 1
        if j + 1 < len(toks) and re.fullmatch(r"\d+", toks[j]) and toks[j + 1] not in "+-":
            j += 1
        out.append(" ".join(toks[k : j + 1]))
        k = j + 1
    return out


def export_lp(model: IlpModel) -> str:
    out = [
        f"\\ idnrobust time-expanded model t_f={model.t_f} threshold={model.threshold}",
        "Minimize",
    ]
    out += _wrap(" obj:", format_terms(model.objective))
    out.append("Subject To")
    for c in model.constraints:
        out += _wrap(f" {c.name}:", f"{format_terms(c.terms)} {c.sense} {c.rhs}")
    out.append("Binary")
    out += [f" {v.name}" for v in model.variables]
    out.append("End")
    return "\n".join(out) + "\n"


_SECTION = {
    "minimize": "obj", "minimum": "obj", "min": "obj",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "binary": "bin", "binaries": "bin", "bin": "bin",
    "end": "end",
}
_TERM_RE = re.compile(r"([+-])|(\d+(?:\.\d*)?)|([A-Za-z_][\w.\[\]]*)")
_ROW_START = re.compile(r"^\s*([A-Za-z_][\w.\[\]]*)\s*:(.*)$")
_SENSE_RE = re.compile(r"(<=|>=|=<|=>|<|>|=)")


class LpFormatError(ValueError):
    pass


def _parse_terms(text: str) -> Terms:
    terms = []
    sign, coef = 1, None
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TERM_RE.match(text, pos)
        if not m:
            raise LpFormatError(f"cannot parse expression near {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group(1):
            sign = -1 if m.group(1) == "-" else 1
        elif m.group(2):
            coef = float(m.group(2))
        else:
            value = sign * (coef if coef is not None else 1)
            terms.append((int(value) if float(value).is_integer() else value, m.group(3)))
            sign, coef = 1, None
    return tuple(terms)


def _number(text: str):
    value = float(text)
    return int(value) if value.is_integer() else value


def parse_lp(text: str) -> IlpModel:
    """Read back the LP subset written by :func:`export_lp`."""
    header = re.search(r"t_f=(\d+)\s+threshold=(\d+)", text)
    section = None
    obj_lines: list[str] = []
    rows: list[list[str]] = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTION:
            section = _SECTION[key]
            if section == "end":
                break
            continue
        if section == "obj":
            obj_lines.append(line)
        elif section == "st":
            m = _ROW_START.match(line)
            if m:
                rows.append([m.group(1), m.group(2)])
            elif rows:
                rows[-1][1] += " " + line
            else:
                raise LpFormatError(f"unnamed constraint: {line.strip()}")
        elif section == "bin":
            binaries.extend(line.split())
        else:
            raise LpFormatError(f"unexpected line outside a section: {line.strip()}")

    obj_text = " ".join(obj_lines)
    m = _ROW_START.match(obj_text)
    objective = _parse_terms(m.group(2) if m else obj_text)

    constraints = []
    for name, body in rows:
        parts = _SENSE_RE.split(body, maxsplit=1)
        if len(parts) != 3:
            raise LpFormatError(f"constraint {name} has no comparison")
        sense = {"=<": "<=", "<": "<=", "=>": ">=", ">": ">="}.get(parts[1], parts[1])
        constraints.append(Constraint(name, _parse_terms(parts[0]), sense, _number(parts[2].strip())))

    variables = []
    for name in binaries:
        t = re.search(r"_(\d+)$", name)
        variables.append(Variable(name, int(t.group(1)) if t else 0))

    if header:
        t_f, target = int(header.group(1)), int(header.group(2))
    else:
        t_f = max((v.time_index for v in variables), default=0)
        target = next((int(c.rhs) for c in constraints if c.name == "threshold"), 0)
    return IlpModel(tuple(variables), objective, tuple(constraints), t_f, target)


def read_assignment_csv(text: str) -> dict[str, int]:
    """``variable,value`` rows (header optional) into an assignment."""
    asg: dict[str, int] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or not row[0].strip() or row[0].strip().startswith("#"):
            continue
        name, value = row[0].strip(), row[1].strip() if len(row) > 1 else ""
        if name == "variable" and value == "value":
            continue
        try:
            asg[name] = int(float(value))
        except ValueError:
            raise ValueError(f"bad value for {name}: {value!r}") from None
    return asg


def write_assignment_csv(asg: Mapping[str, int]) -> str:
    return "variable,value\n" + "".join(f"{k},{v}\n" for k, v in asg.items())
