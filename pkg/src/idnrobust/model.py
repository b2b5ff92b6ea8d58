"""Domain types for interdependent networks (IDNs) and their structural checks.

An IDN has two entity sets: side A (power) and side B (communication).
Each entity has at most one dependency relation (IDR). An IDR is a
disjunction of minterms, and each minterm is a conjunction of entities.
The target entity stays operational while at least one of its minterms
has every member operational.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Union

NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class IdnError(Exception):
    """Base class for errors raised by this package."""


class UnknownEntityError(IdnError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unknown entity {self.name}"


class InvalidInstanceError(IdnError, ValueError):
    """Raised when an operation requires a valid instance (or a given case class)."""


class Side(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True, order=True)
class EntityId:
    side: Side
    name: str

    def __post_init__(self):
        if not isinstance(self.side, Side):
            object.__setattr__(self, "side", Side(self.side))
        if not NAME_RE.match(self.name or ""):
            raise ValueError(f"invalid entity name {self.name!r}")

    def __str__(self) -> str:
        return self.name


Minterm = frozenset  # frozenset[EntityId]
EntityRef = Union[EntityId, str]


@dataclass(frozen=True)
class IDR:
    """One dependency relation: ``target <- m1 + m2 + ...``."""

    target: EntityId
    minterms: tuple[frozenset[EntityId], ...]

    def __post_init__(self):
        object.__setattr__(self, "minterms", tuple(frozenset(m) for m in self.minterms))
        if not self.minterms:
            raise ValueError(f"IDR for {self.target} has no minterms")
        if any(not m for m in self.minterms):
            raise ValueError(f"IDR for {self.target} has an empty minterm")

    def __str__(self) -> str:
        return f"{self.target} <- " + " + ".join(
            " ".join(e.name for e in sorted(m)) for m in self.minterms
        )


class CaseClass(str, Enum):
    CaseI = "CaseI"
    CaseII = "CaseII"
    CaseIII = "CaseIII"
    CaseIV = "CaseIV"


class IDN:
    """An immutable interdependent network instance.

    Entities keep their declaration order (used by CSV exports); equality is
    structural and ignores that order.
    """

    def __init__(
        self,
        entities_a: Iterable[EntityId | str],
        entities_b: Iterable[EntityId | str],
        idrs: Iterable[IDR] | Mapping[EntityId, IDR] = (),
    ):
        self._a = tuple(e if isinstance(e, EntityId) else EntityId(Side.A, e) for e in entities_a)
        self._b = tuple(e if isinstance(e, EntityId) else EntityId(Side.B, e) for e in entities_b)
        if isinstance(idrs, Mapping):
            idrs = idrs.values()
        table: dict[EntityId, IDR] = {}
        for idr in idrs:
            if idr.target in table:
                raise ValueError(f"more than one IDR for {idr.target}")
            table[idr.target] = idr
        self._idrs = table

    @property
    def entities_a(self) -> tuple[EntityId, ...]:
        return self._a

    @property
    def entities_b(self) -> tuple[EntityId, ...]:
        return self._b

    @property
    def entities(self) -> tuple[EntityId, ...]:
        """All entities, side A first, each side in declaration order."""
        return self._a + self._b

    @property
    def idrs(self) -> Mapping[EntityId, IDR]:
        return dict(self._idrs)

    def idr(self, e: EntityRef) -> IDR | None:
        return self._idrs.get(self.resolve(e))

    def __len__(self) -> int:
        return len(self._a) + len(self._b)

    @cached_property
    def _by_name(self) -> dict[str, EntityId]:
        return {e.name: e for e in self.entities}

    def resolve(self, e: EntityRef) -> EntityId:
        """Map a name or EntityId to a declared EntityId."""
        if isinstance(e, EntityId):
            if e.side is Side.A and e in self._a_set or e.side is Side.B and e in self._b_set:
                return e
            raise UnknownEntityError(e.name)
        try:
            return self._by_name[e]
        except KeyError:
            raise UnknownEntityError(e) from None

    def resolve_all(self, es: Iterable[EntityRef]) -> frozenset[EntityId]:
        return frozenset(self.resolve(e) for e in es)

    @cached_property
    def _a_set(self) -> frozenset[EntityId]:
        return frozenset(self._a)

    @cached_property
    def _b_set(self) -> frozenset[EntityId]:
        return frozenset(self._b)

    @cached_property
    def sorted_entities(self) -> tuple[EntityId, ...]:
        """Entities in canonical (side, name) order, used for all tie-breaking."""
        return tuple(sorted(self.entities))

    def minterms(self) -> list[tuple[EntityId, int, frozenset[EntityId]]]:
        """Every minterm as ``(owner, index, members)``, owners in canonical order."""
        out = []
        for owner in self.sorted_entities:
            idr = self._idrs.get(owner)
            if idr is not None:
                out.extend((owner, i, m) for i, m in enumerate(idr.minterms))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, IDN):
            return NotImplemented
        return (
            self._a_set == other._a_set
            and self._b_set == other._b_set
            and self._idrs == other._idrs
        )

    def __hash__(self) -> int:
        return hash((self._a_set, self._b_set, frozenset(self._idrs.items())))

    def __repr__(self) -> str:
        return f"IDN(|A|={len(self._a)}, |B|={len(self._b)}, idrs={len(self._idrs)})"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    entity: str | None = None
    severity: str = "error"

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    @property
    def notes(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "note"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __iter__(self):
        return iter(self.errors)

    def __len__(self) -> int:
        return len(self.errors)


def validate(idn: IDN) -> ValidationReport:
    """Collect every structural violation; never raises.

    Same-side references are legal and reported as notes only.
    """
    report = ValidationReport()
    add = report.violations.append

    seen: dict[str, Side] = {}
    for e in idn.entities:
        if e.name in seen:
            if seen[e.name] is e.side:
                add(Violation("duplicate-entity", f"duplicate entity {e.name}", e.name))
            else:
                add(Violation("ambiguous-name", f"entity name {e.name} declared on both sides", e.name))
        else:
            seen[e.name] = e.side

    declared = set(idn.entities)
    for target, idr in idn.idrs.items():
        if target not in declared:
            add(Violation("unknown-entity", f"unknown entity {target} (IDR target)", target.name))
        seen_minterms: set[frozenset[EntityId]] = set()
        for i, m in enumerate(idr.minterms):
            if target in m:
                add(Violation("self-dependency", f"self-dependency at {target}", target.name))
            for member in sorted(m):
                if member not in declared:
                    add(Violation("unknown-entity", f"unknown entity {member} in IDR of {target}", member.name))
                elif member.side is target.side and member != target:
                    add(Violation(
                        "same-side", f"IDR of {target} references same-side entity {member}",
                        target.name, severity="note",
                    ))
            if m in seen_minterms:
                label = " ".join(e.name for e in sorted(m))
                add(Violation("duplicate-minterm", f"duplicate minterm '{label}' in IDR of {target}", target.name))
            seen_minterms.add(m)
    return report


def require_valid(idn: IDN) -> None:
    report = validate(idn)
    if not report.ok:
        raise InvalidInstanceError("; ".join(str(v) for v in report.errors))


def classify(idn: IDN) -> CaseClass:
    """Return the most specific IDR shape class of a valid instance."""
    require_valid(idn)
    single_minterm = True
    unit_minterms = True
    for idr in idn.idrs.values():
        if len(idr.minterms) != 1:
            single_minterm = False
        if any(len(m) != 1 for m in idr.minterms):
            unit_minterms = False
    if single_minterm and unit_minterms:
        return CaseClass.CaseI
    if single_minterm:
        return CaseClass.CaseII
    if unit_minterms:
        return CaseClass.CaseIII
    return CaseClass.CaseIV


def make_idn(
    a: Iterable[str],
    b: Iterable[str],
    relations: Mapping[str, Iterable[Iterable[str]]] = {},
) -> IDN:
    """Build an IDN from plain names: ``make_idn(["a1"], ["b1"], {"a1": [["b1"]]})``."""
    a, b = list(a), list(b)
    side = {n: Side.A for n in a}
    side.update({n: Side.B for n in b})

    def ent(name: str) -> EntityId:
        if name not in side:
            raise UnknownEntityError(name)
        return EntityId(side[name], name)

    idrs = [IDR(ent(t), tuple(frozenset(ent(n) for n in m) for m in ms)) for t, ms in relations.items()]
    return IDN(a, b, idrs)
