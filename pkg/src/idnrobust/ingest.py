"""The ``.idn`` text format and the CSV emitters.

Format::

    # idn-format 1
    A: a1 a2 a3
    B: b1 b2 b3 b4
    a1 <- b2 + b4        # '+' separates minterms
    a2 <- b1 b3          # juxtaposition is conjunction

Declarations must come before relations. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .cascade import CascadeTrace
from .model import IDN, IDR, NAME_RE, EntityId, IdnError, Side

FORMAT_VERSION = "1"
_HEADER_RE = re.compile(r"^#\s*idn-format\s+(\S+)")
_DECL_RE = re.compile(r"^\s*([AB])\s*:(.*)$")
_TOKEN_RE = re.compile(r"\S+")


class IdnParseError(IdnError, ValueError):
    code = "parse"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class IdnSyntaxError(IdnParseError):
    code = "syntax"


class DuplicateRelationError(IdnParseError):
    code = "duplicate-relation"


class DuplicateEntityError(IdnParseError):
    code = "duplicate-entity"


class UndeclaredEntityError(IdnParseError):
    code = "undeclared-entity"


class SelfDependencyError(IdnParseError):
    code = "self-dependency"


@dataclass(frozen=True)
class ParseNote:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


def _tokens(text: str, offset: int) -> list[tuple[str, int]]:
    """Whitespace tokens with 1-based columns."""
    return [(m.group(), offset + m.start() + 1) for m in _TOKEN_RE.finditer(text)]


def parse_idn(text: str, notes: list[ParseNote] | None = None) -> IDN:
    """Parse ``.idn`` text. Deduplicated minterm members are appended to ``notes``."""
    text = text.lstrip("\ufeff")
    side_of: dict[str, Side] = {}
    decl: dict[Side, list[str]] = {Side.A: [], Side.B: []}
    relation_line: dict[str, int] = {}
    idrs: list[IDR] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            m = _HEADER_RE.match(stripped)
            if m and m.group(1) != FORMAT_VERSION:
                raise IdnSyntaxError(f"unsupported idn-format version {m.group(1)}", lineno)
            continue
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue

        m = _DECL_RE.match(line)
        if m:
            if idrs:
                raise IdnSyntaxError("declaration after relations", lineno, m.start(1) + 1)
            side = Side(m.group(1))
            for name, col in _tokens(m.group(2), m.start(2)):
                if not NAME_RE.match(name):
                    raise IdnSyntaxError(f"invalid entity name {name!r}", lineno, col)
                if name in side_of:
                    raise DuplicateEntityError(f"entity {name} declared twice", lineno, col)
                side_of[name] = side
                decl[side].append(name)
            continue

        idrs.append(_parse_relation(line, lineno, side_of, relation_line, notes))

    return IDN(decl[Side.A], decl[Side.B], idrs)


def _parse_relation(line, lineno, side_of, relation_line, notes) -> IDR:
    arrow = line.find("<-")
    if arrow < 0:
        raise IdnSyntaxError("expected a declaration 'A: ...'/'B: ...' or a relation 'x <- ...'",
                             lineno, len(line) - len(line.lstrip()) + 1)
    head = _tokens(line[:arrow], 0)
    if len(head) != 1:
        raise IdnSyntaxError("a relation needs exactly one target before '<-'", lineno,
                             head[1][1] if len(head) > 1 else arrow + 1)
    target, tcol = head[0]
    if not NAME_RE.match(target):
        raise IdnSyntaxError(f"invalid entity name {target!r}", lineno, tcol)
    if target not in side_of:
        raise UndeclaredEntityError(f"undeclared entity {target}", lineno, tcol)
    if target in relation_line:
        raise DuplicateRelationError(
            f"second relation for {target} (first on line {relation_line[target]})", lineno, tcol)
    relation_line[target] = lineno

    base = arrow + 2
    rhs = line[base:]
    minterms: list[frozenset[EntityId]] = []
    seg_start = 0
    for plus in [m.start() for m in re.finditer(r"\+", rhs)] + [len(rhs)]:
        toks = _tokens(rhs[seg_start:plus], base + seg_start)
        if not toks:
            raise IdnSyntaxError("empty minterm", lineno, base + seg_start + 1)
        members: list[EntityId] = []
        for name, col in toks:
            if not NAME_RE.match(name):
                raise IdnSyntaxError(f"invalid entity name {name!r}", lineno, col)
            if name not in side_of:
                raise UndeclaredEntityError(f"undeclared entity {name}", lineno, col)
            if name == target:
                raise SelfDependencyError(f"self-dependency at {target}", lineno, col)
            e = EntityId(side_of[name], name)
            if e in members:
                if notes is not None:
                    notes.append(ParseNote(lineno, f"duplicate {name} in a minterm of {target} ignored"))
                continue
            members.append(e)
        minterms.append(frozenset(members))
        seg_start = plus + 1
    return IDR(EntityId(side_of[target], target), tuple(minterms))


def serialize_idn(idn: IDN) -> str:
    """Canonical text: sorted declarations, relations sorted by target."""
    a = " ".join(sorted(e.name for e in idn.entities_a))
    b = " ".join(sorted(e.name for e in idn.entities_b))
    lines = [f"# idn-format {FORMAT_VERSION}", f"A: {a}".rstrip(), f"B: {b}".rstrip()]
    idrs = idn.idrs
    if idrs:
        lines.append("")
        lines += [str(idrs[t]) for t in sorted(idrs)]
    return "\n".join(lines) + "\n"


def read_idn(path: str | Path, notes: list[ParseNote] | None = None) -> IDN:
    return parse_idn(Path(path).read_text(encoding="utf-8"), notes)


def write_idn(idn: IDN, path: str | Path) -> None:
    Path(path).write_text(serialize_idn(idn), encoding="utf-8")


def export_trace_csv(trace: CascadeTrace, until: int | None = None) -> str:
    """Entity x time 0/1 matrix through the steady state (or ``until``, padded)."""
    last = trace.steady_step if until is None else max(until, trace.steady_step)
    times = trace.failure_time
    rows = ["entity," + ",".join(f"t{t}" for t in range(last + 1))]
    for e in trace.idn.entities:
        ft = times[e]
        rows.append(e.name + "," + ",".join(
            "1" if ft is not None and ft <= t else "0" for t in range(last + 1)))
    return "\n".join(rows) + "\n"


def export_sweep_csv(points: Iterable[tuple[float, int | None]]) -> str:
    rows = ["rho,k"]
    rows += [f"{rho:.2f},{'' if k is None else k}" for rho, k in points]
    return "\n".join(rows) + "\n"


def export_killsets_csv(idn: IDN, kill_sets: Mapping[EntityId, frozenset[EntityId]]) -> str:
    rows = ["entity,size,kill_set"]
    for e in idn.entities:
        ks = kill_sets[e]
        members = " ".join(x.name for x in idn.entities if x in ks)
        rows.append(f"{e.name},{len(ks)},{members}")
    return "\n".join(rows) + "\n"
