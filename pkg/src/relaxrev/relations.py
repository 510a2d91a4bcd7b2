"""Binary relations over a bounded model space, and assignments of them to knowledge bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .core import KnowledgeBase, ModelSet, SatisfactionSystem, iter_bits


@dataclass(frozen=True, eq=False)
class ModelRelation:
    """``rows[i]`` is the bitset of models ``j`` with ``i ⪯ j``."""

    system: SatisfactionSystem
    rows: tuple

    @classmethod
    def empty(cls, system: SatisfactionSystem) -> "ModelRelation":
        return cls(system, (0,) * system.size)

    @classmethod
    def from_pairs(cls, system: SatisfactionSystem, pairs: Iterable[tuple[int, int]]) -> "ModelRelation":
        rows = [0] * system.size
        for i, j in pairs:
            rows[i] |= 1 << j
        return cls(system, tuple(rows))

    @classmethod
    def full(cls, system: SatisfactionSystem) -> "ModelRelation":
        return cls(system, (system.universe,) * system.size)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModelRelation) and self.system is other.system and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def strict(self, i: int, j: int) -> bool:
        return self.leq(i, j) and not self.leq(j, i)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                yield i, j

    def __len__(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def __or__(self, other: "ModelRelation") -> "ModelRelation":
        return ModelRelation(self.system, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: "ModelRelation") -> "ModelRelation":
        return ModelRelation(self.system, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def strictly_below(self, j: int) -> int:
        """Bitset of models ``i`` with ``i ≺ j``."""
        out = 0
        col = 1 << j
        for i, row in enumerate(self.rows):
            if row & col and not self.rows[j] >> i & 1:
                out |= 1 << i
        return out

    def to_json(self) -> list:
        return [[i, j] for i, j in self.pairs()]


def min_bits(bits: int, rel: ModelRelation) -> int:
    out = 0
    for j in iter_bits(bits):
        if rel.strictly_below(j) & bits == 0:
            out |= 1 << j
    return out


def min_models(models: ModelSet, rel: ModelRelation) -> ModelSet:
    """Members of ``models`` with no strictly smaller member."""
    return ModelSet(models.system, min_bits(models.bits, rel))


@dataclass
class Assignment:
    """Maps each knowledge base to a model relation; results are memoized."""

    system: SatisfactionSystem
    func: Callable[[KnowledgeBase], ModelRelation]
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, kb: KnowledgeBase) -> ModelRelation:
        kb = kb if isinstance(kb, KnowledgeBase) else KnowledgeBase(tuple(kb))
        rel = self._cache.get(kb)
        if rel is None:
            rel = self._cache[kb] = self.func(kb)
        return rel


def fa_join(a1: Assignment, a2: Assignment) -> Assignment:
    return Assignment(a1.system, lambda kb: a1(kb) | a2(kb))


def fa_meet(a1: Assignment, a2: Assignment) -> Assignment:
    return Assignment(a1.system, lambda kb: a1(kb) & a2(kb))


def empty_assignment(system: SatisfactionSystem) -> Assignment:
    return Assignment(system, lambda kb: ModelRelation.empty(system))


__all__ = ["ModelRelation", "min_models", "min_bits", "Assignment", "fa_join", "fa_meet",
           "empty_assignment"]
