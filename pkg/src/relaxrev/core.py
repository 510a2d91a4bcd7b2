"""Satisfaction systems over bounded, enumerable model spaces.

Every logic enumerates its bounded model space in a fixed order. A set of
models is then a Python ``int`` used as a bitset: bit ``i`` is set when the
``i``-th model belongs to the set. Sentence model sets are memoized per
system, so ``Mod(T)`` is a handful of ANDs.
"""

from __future__ import annotations

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import RelaxrevError, UnsupportedLogic

DEFAULT_BOUND = 3

LOGICS = ("PL", "HCL", "FOL", "DL-EL", "DL-ELU", "DL-ALC")


def default_bound() -> int:
    """Bound for FOL/DL spaces: ``RV_BOUND`` if set, else 3."""
    raw = os.environ.get("RV_BOUND")
    if raw is None or raw.strip() == "":
        return DEFAULT_BOUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise RelaxrevError(f"RV_BOUND must be an integer, got {raw!r}") from exc
    if value < 0:
        raise RelaxrevError("RV_BOUND must be non-negative")
    return value


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def popcount(bits: int) -> int:
    return bits.bit_count()


@dataclass(frozen=True)
class KnowledgeBase:
    """Ordered set of sentences; structural duplicates are dropped on creation."""

    sentences: tuple = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        seen: set = set()
        kept = []
        for s in self.sentences:
            if s not in seen:
                seen.add(s)
                kept.append(s)
        object.__setattr__(self, "sentences", tuple(kept))
        object.__setattr__(self, "_hash", hash(self.sentences))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def of(cls, *sentences) -> "KnowledgeBase":
        return cls(tuple(sentences))

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)

    def __getitem__(self, index):
        return self.sentences[index]

    def __contains__(self, sentence) -> bool:
        return sentence in self.sentences

    def union(self, other: Iterable) -> "KnowledgeBase":
        return KnowledgeBase(self.sentences + tuple(other))

    def issubset(self, other: "KnowledgeBase") -> bool:
        return all(s in other.sentences for s in self.sentences)


class SatisfactionSystem(ABC):
    """A logic with a finite, indexed model space.

    Subclasses provide the model enumeration, a reference satisfaction
    check on decoded models (``holds``) and a fast whole-space evaluator
    (``_compute_mask``). The two routes must agree; the test-suite checks
    this on random inputs.
    """

    logic: str = ""
    signature: Any = None
    bound: int | None = None

    def __init__(self) -> None:
        self._mask_cache: dict[Hashable, int] = {}

    # -- model space ------------------------------------------------------
    @property
    @abstractmethod
    def size(self) -> int:
        """Number of indexed models (including inadmissible ones, if any)."""

    @property
    def universe(self) -> int:
        """Bitset of admissible models; all indices unless restricted."""
        return (1 << self.size) - 1

    @property
    @abstractmethod
    def trivial(self) -> int:
        """Bitset of Triv: models satisfying every sentence."""

    @abstractmethod
    def model_at(self, index: int) -> Any: ...

    @abstractmethod
    def index_of(self, model: Any) -> int: ...

    # -- sentences --------------------------------------------------------
    @abstractmethod
    def check_sentence(self, sentence: Any) -> None:
        """Raise SignatureError if the sentence is not over the signature."""

    @abstractmethod
    def holds(self, model: Any, sentence: Any) -> bool:
        """Reference satisfaction on one decoded model."""

    @abstractmethod
    def _compute_mask(self, sentence: Any) -> int: ...

    @abstractmethod
    def tautology(self) -> Any:
        """Canonical sentence satisfied by every model."""

    def format_sentence(self, sentence: Any) -> str:
        return str(sentence)

    def theory_from_models(self, bits: int) -> KnowledgeBase:
        raise UnsupportedLogic(f"{self.logic}: no theory-from-models synthesis")

    def mask(self, sentence: Any) -> int:
        cached = self._mask_cache.get(sentence)
        if cached is None:
            self.check_sentence(sentence)
            cached = self._compute_mask(sentence) & self.universe
            self._mask_cache[sentence] = cached
        return cached

    def kb_mask(self, kb: Iterable) -> int:
        bits = self.universe
        for s in kb:
            bits &= self.mask(s)
            if not bits:
                break
        return bits

    @property
    def nontrivial(self) -> int:
        return self.universe & ~self.trivial

    def models(self, bits: int) -> "ModelSet":
        return ModelSet(self, bits & self.universe)

    def describe(self) -> str:
        b = "" if self.bound is None else f", relative to bound {self.bound}"
        return f"{self.logic} ({self.size} models{b})"


@dataclass(frozen=True, eq=False)
class ModelSet:
    """A set of models of one system, stored as a bitset over model indices."""

    system: SatisfactionSystem
    bits: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        return self.system is other.system and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((id(self.system), self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __iter__(self) -> Iterator[Any]:
        for i in iter_bits(self.bits):
            yield self.system.model_at(i)

    def __contains__(self, model: Any) -> bool:
        return bool(self.bits >> self.system.index_of(model) & 1)

    def indices(self) -> list[int]:
        return list(iter_bits(self.bits))

    def _other(self, other: "ModelSet") -> int:
        if other.system is not self.system:
            raise RelaxrevError("model sets belong to different systems")
        return other.bits

    def __or__(self, other: "ModelSet") -> "ModelSet":
        return ModelSet(self.system, self.bits | self._other(other))

    def __and__(self, other: "ModelSet") -> "ModelSet":
        return ModelSet(self.system, self.bits & self._other(other))

    def __sub__(self, other: "ModelSet") -> "ModelSet":
        return ModelSet(self.system, self.bits & ~self._other(other))

    def issubset(self, other: "ModelSet") -> bool:
        return self.bits & ~self._other(other) == 0

    __le__ = issubset


def satisfies(system: SatisfactionSystem, model: Any, sentence: Any) -> bool:
    system.check_sentence(sentence)
    return system.holds(model, sentence)


def models_of(system: SatisfactionSystem, kb: Iterable) -> ModelSet:
    """Mod(kb); the empty knowledge base yields the whole bounded space."""
    return ModelSet(system, system.kb_mask(kb))


def trivial_models(system: SatisfactionSystem) -> ModelSet:
    return ModelSet(system, system.trivial & system.universe)


def is_consistent(system: SatisfactionSystem, kb: Iterable) -> bool:
    return system.kb_mask(kb) & system.nontrivial != 0


def entails(system: SatisfactionSystem, kb: Iterable, sentence: Any) -> bool:
    return system.kb_mask(kb) & ~system.mask(sentence) == 0


def cn_equal(system: SatisfactionSystem, kb1: Iterable, kb2: Iterable) -> bool:
    return system.kb_mask(kb1) == system.kb_mask(kb2)


def star(system: SatisfactionSystem, bits: int, pool: Sequence) -> list:
    """The sentences of ``pool`` true in every model of ``bits``.

    The full sentence set is infinite, so callers supply a finite pool.
    """
    return [s for s in pool if bits & ~system.mask(s) == 0]
