"""Seeded random IDN instances per case class.

The procedure is fixed so that a spec always yields the same instance:

1. ``rng = random.Random(seed)``; every draw is ``int(rng.random() * n)``.
   Only ``random()`` is used because its stream is stable across Python
   releases.
2. Entities are named ``a1..a<size_a>`` and ``b1..b<size_b>``.
3. For each entity in that order: with probability ``idr_probability`` it
   receives an IDR with ``1 + draw(max_minterms)`` minterms. Each minterm has
   ``1 + draw(max_minterm_size)`` members (capped by the pool size), picked
   by a partial Fisher-Yates shuffle of the pool. The pool is the opposite
   side when ``cross_only`` is set, otherwise every other entity. A minterm
   equal to an earlier one in the same IDR is dropped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .model import IDN, IDR, CaseClass, EntityId, IdnError, Side


class GeneratorError(IdnError, ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    case: CaseClass
    size_a: int
    size_b: int
    idr_probability: float = 0.8
    max_minterms: int = 3
    max_minterm_size: int = 3
    cross_only: bool = True
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "case", CaseClass(self.case))

    def normalized(self) -> GenSpec:
        """Apply the shape limits implied by the case class."""
        if self.case is CaseClass.CaseI:
            return replace(self, max_minterms=1, max_minterm_size=1)
        if self.case is CaseClass.CaseII:
            return replace(self, max_minterms=1)
        if self.case is CaseClass.CaseIII:
            return replace(self, max_minterm_size=1)
        return self

    def check(self) -> None:
        if self.size_a < 1 or self.size_b < 1:
            raise GeneratorError("size_a and size_b must be positive")
        if not 0.0 <= self.idr_probability <= 1.0:
            raise GeneratorError("idr_probability must be in [0, 1]")
        if self.max_minterms < 1 or self.max_minterm_size < 1:
            raise GeneratorError("max_minterms and max_minterm_size must be >= 1")
        if not -(2**63) <= self.seed < 2**64:
            raise GeneratorError("seed must fit in 64 bits")


def generate(spec: GenSpec) -> IDN:
    spec.check()
    spec = spec.normalized()
    rng = random.Random(spec.seed)

    def draw(n: int) -> int:
        return int(rng.random() * n)

    a = [EntityId(Side.A, f"a{i}") for i in range(1, spec.size_a + 1)]
    b = [EntityId(Side.B, f"b{i}") for i in range(1, spec.size_b + 1)]
    everyone = a + b
    idrs = []
    for target in everyone:
        if rng.random() >= spec.idr_probability:
            continue
        if spec.cross_only:
            pool = b if target.side is Side.A else a
        else:
            pool = [e for e in everyone if e != target]
        minterms: list[frozenset[EntityId]] = []
        for _ in range(1 + draw(spec.max_minterms)):
            size = min(1 + draw(spec.max_minterm_size), len(pool))
            cand = list(pool)
            for j in range(size):
                k = j + draw(len(cand) - j)
                cand[j], cand[k] = cand[k], cand[j]
            m = frozenset(cand[:size])
            if m not in minterms:
                minterms.append(m)
        idrs.append(IDR(target, tuple(minterms)))
    return IDN(a, b, idrs)
