"""Cascade simulation, kill sets, and minterm hit sets.

Failures propagate in synchronous unit time steps: an entity with an IDR
fails at step t+1 when every one of its minterms contains an entity that was
failed at step t. Failed entities never recover.

Internally each instance is compiled once into bit masks over the canonical
(side, name) ordering of its entities; bit i is ``idn.sorted_entities[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .model import IDN, EntityId, EntityRef

NEVER = None


class Engine:
    """Bitset view of an IDN for fast closure computation."""

    def __init__(self, idn: IDN):
        self.idn = idn
        self.entities = idn.sorted_entities
        self.n = len(self.entities)
        self.index = {e: i for i, e in enumerate(self.entities)}
        self.full = (1 << self.n) - 1
        # owner index -> tuple of minterm masks
        self.minterms: dict[int, tuple[int, ...]] = {}
        for owner, idr in idn.idrs.items():
            self.minterms[self.index[owner]] = tuple(self.mask(m) for m in idr.minterms)
        self.dependents: list[tuple[int, ...]] = [() for _ in range(self.n)]
        deps: list[set[int]] = [set() for _ in range(self.n)]
        for owner, masks in self.minterms.items():
            for m in masks:
                for i in bits(m):
                    deps[i].add(owner)
        self.dependents = [tuple(sorted(d)) for d in deps]
        self.owners = tuple(sorted(self.minterms))

    def mask(self, entities: Iterable[EntityId]) -> int:
        m = 0
        for e in entities:
            m |= 1 << self.index[e]
        return m

    def to_set(self, mask: int) -> frozenset[EntityId]:
        return frozenset(self.entities[i] for i in bits(mask))

    def step(self, failed: int) -> int:
        new = failed
        for owner in self.owners:
            if not failed >> owner & 1:
                for m in self.minterms[owner]:
                    if not m & failed:
                        break
                else:
                    new |= 1 << owner
        return new

    def closure(self, failed: int, seeds: int | None = None) -> int:
        """Steady-state failed set reachable from ``failed``.

        ``seeds`` lists the bits whose dependents still need rechecking; the
        default is all of ``failed``. Passing only the newly added bits is
        valid whenever ``failed & ~seeds`` is already closed.
        """
        todo = list(bits(failed if seeds is None else seeds))
        minterms = self.minterms
        dependents = self.dependents
        while todo:
            i = todo.pop()
            for owner in dependents[i]:
                if failed >> owner & 1:
                    continue
                for m in minterms[owner]:
                    if not m & failed:
                        break
                else:
                    failed |= 1 << owner
                    todo.append(owner)
        return failed

    def add(self, closed: int, extra: int) -> int:
        """Closure of ``closed | extra`` given that ``closed`` is already closed."""
        new = extra & ~closed
        if not new:
            return closed
        return self.closure(closed | new, new)

    @cached_property
    def kill_masks(self) -> list[int]:
        return [self.closure(1 << i) for i in range(self.n)]


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def engine(idn: IDN) -> Engine:
    eng = idn.__dict__.get("_engine")
    if eng is None:
        eng = idn.__dict__["_engine"] = Engine(idn)
    return eng


@dataclass(frozen=True)
class CascadeTrace:
    """Step-by-step record of one cascade.

    ``steps[t]`` is the failed set at time t; the last two entries are equal
    (steady state reached).
    """

    idn: IDN
    initial: frozenset[EntityId]
    steps: tuple[frozenset[EntityId], ...]

    @cached_property
    def failure_time(self) -> dict[EntityId, int | None]:
        times: dict[EntityId, int | None] = {e: NEVER for e in self.idn.entities}
        for t, failed in enumerate(self.steps):
            for e in failed:
                if times[e] is None:
                    times[e] = t
        return times

    @property
    def final(self) -> frozenset[EntityId]:
        return self.steps[-1]

    @property
    def steady_step(self) -> int:
        """First time step at which the failed set stops changing."""
        t = len(self.steps) - 1
        while t > 0 and self.steps[t - 1] == self.steps[t]:
            t -= 1
        return t


def _check(idn: IDN, failed: Iterable[EntityRef]) -> frozenset[EntityId]:
    return idn.resolve_all(failed)


def step(idn: IDN, failed: Iterable[EntityRef]) -> frozenset[EntityId]:
    """One synchronous propagation step from ``failed``."""
    eng = engine(idn)
    return eng.to_set(eng.step(eng.mask(_check(idn, failed))))


def cascade(idn: IDN, initial: Iterable[EntityRef]) -> CascadeTrace:
    initial = _check(idn, initial)
    eng = engine(idn)
    cur = eng.mask(initial)
    masks = [cur]
    while True:
        nxt = eng.step(cur)
        masks.append(nxt)
        if nxt == cur:
            break
        cur = nxt
    return CascadeTrace(idn, initial, tuple(eng.to_set(m) for m in masks))


def closure(idn: IDN, initial: Iterable[EntityRef]) -> frozenset[EntityId]:
    """Steady-state failed set of ``initial`` (same result as ``cascade(...).final``)."""
    eng = engine(idn)
    return eng.to_set(eng.closure(eng.mask(_check(idn, initial))))


def kill_set(idn: IDN, e: EntityRef) -> frozenset[EntityId]:
    eng = engine(idn)
    return eng.to_set(eng.kill_masks[eng.index[idn.resolve(e)]])


def kill_sets_all(idn: IDN) -> dict[EntityId, frozenset[EntityId]]:
    eng = engine(idn)
    return {e: eng.to_set(eng.kill_masks[eng.index[e]]) for e in idn.entities}


class MintermRef(NamedTuple):
    owner: EntityId
    index: int

    def __str__(self) -> str:
        return f"{self.owner}[{self.index}]"


def mhs(idn: IDN, e: EntityRef) -> frozenset[MintermRef]:
    """Minterm hit set: every minterm that contains ``e``."""
    e = idn.resolve(e)
    return frozenset(MintermRef(owner, i) for owner, i, m in idn.minterms() if e in m)


def tmhs(idn: IDN, e: EntityRef) -> frozenset[MintermRef]:
    """Total minterm hit set: union of ``mhs`` over the kill set of ``e``."""
    killed = kill_set(idn, e)
    return frozenset(
        MintermRef(owner, i) for owner, i, m in idn.minterms() if not killed.isdisjoint(m)
    )
