"""Revision of a knowledge base by relaxing its sentences just enough.

A relaxation maps sentences to weaker sentences. Revising ``T`` by ``T'``
picks a vector ``K`` (how often each sentence of ``T`` is relaxed) and
returns the relaxed ``T`` together with ``T'``:

* ``minimal`` mode takes a consistent vector of least total; ties go to the
  lexicographically greatest vector, which spends the budget on earlier
  sentences first.
* ``coherent`` mode returns the componentwise join of the entry vectors of
  every non-trivial model reachable within that least total. This is the
  smallest vector that dominates the minimal vectors of every weaker
  ``T''``, so revising by a stronger base never relaxes less.

Every sentence gets a ladder of model sets ``Mod(ρ^k φ)`` for
``k = 0..cap``; the cap is the first ``k`` whose model set is the whole
space, or where ``ρ`` stops changing the sentence, or ``max_cap``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .core import KnowledgeBase, SatisfactionSystem, iter_bits
from .errors import RelaxrevError, RevisionFailed
from .relations import ModelRelation

MINIMAL, COHERENT = "minimal", "coherent"
DEFAULT_MAX_CAP = 8
SUBSET_GUARD = 16


@dataclass(frozen=True)
class Relaxation:
    """A sentence transformer for one logic. ``exhaustive=False`` marks operators
    that need not reach a tautology, which revision accepts only on request."""

    name: str
    logic: str
    apply: Callable[[Any], Any] = field(compare=False)
    exhaustive: bool = True

    def __call__(self, sentence: Any) -> Any:
        return self.apply(sentence)

    def power(self, sentence: Any, k: int) -> Any:
        for _ in range(k):
            sentence = self.apply(sentence)
        return sentence


def trivial_relaxation(system: SatisfactionSystem) -> Relaxation:
    taut = system.tautology()
    return Relaxation("trivial", system.logic, lambda s: taut)


# ---------------------------------------------------------------------------
# vectors


class RelaxationVector(tuple):
    """Per-sentence relaxation counts. Plain tuple order is lexicographic;
    the componentwise order is ``leq`` / ``lt``."""

    def __new__(cls, entries: Sequence[int] = ()):
        return super().__new__(cls, (int(k) for k in entries))

    @property
    def total(self) -> int:
        return sum(self)

    def leq(self, other: Sequence[int]) -> bool:
        return all(a <= b for a, b in zip(self, other))

    def lt(self, other: Sequence[int]) -> bool:
        return self.leq(other) and tuple(self) != tuple(other)

    def join(self, other: Sequence[int]) -> "RelaxationVector":
        return RelaxationVector(max(a, b) for a, b in zip(self, other))

    def meet(self, other: Sequence[int]) -> "RelaxationVector":
        return RelaxationVector(min(a, b) for a, b in zip(self, other))

    @classmethod
    def zeros(cls, n: int) -> "RelaxationVector":
        return cls((0,) * n)


def vectors_with_total(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All vectors below ``caps`` summing to ``total``, in lexicographic order."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest = sum(caps[1:])
    for first in range(max(0, total - rest), min(caps[0], total) + 1):
        for tail in vectors_with_total(total - first, caps[1:]):
            yield (first,) + tail


def vectors_in_box(lo: Sequence[int], hi: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


class RelaxationChains:
    """The relaxation ladder of every sentence of one knowledge base."""

    def __init__(self, system: SatisfactionSystem, relaxation: Relaxation, kb: KnowledgeBase,
                 max_cap: int = DEFAULT_MAX_CAP):
        self.system = system
        self.relaxation = relaxation
        self.kb = kb
        self.sentences: list[list[Any]] = []
        self.masks: list[list[int]] = []
        self.stuck: list[int] = []
        full = system.universe
        for i, phi in enumerate(kb):
            chain, masks = [phi], [system.mask(phi)]
            while masks[-1] != full and len(chain) <= max_cap:
                nxt = relaxation(chain[-1])
                if nxt == chain[-1]:
                    break
                chain.append(nxt)
                masks.append(system.mask(nxt))
            if not masks[-1]:
                # never gains a model: relaxing it is pointless
                chain, masks = chain[:1], masks[:1]
                self.stuck.append(i)
            self.sentences.append(chain)
            self.masks.append(masks)

    @property
    def caps(self) -> tuple[int, ...]:
        return tuple(len(m) - 1 for m in self.masks)

    @property
    def reaches_full(self) -> list[bool]:
        return [m[-1] == self.system.universe for m in self.masks]

    def sentence(self, i: int, k: int) -> Any:
        chain = self.sentences[i]
        if k < len(chain):
            return chain[k]
        return self.relaxation.power(chain[-1], k - len(chain) + 1)

    def vector_mask(self, vec: Sequence[int]) -> int:
        bits = self.system.universe
        for masks, k in zip(self.masks, vec):
            bits &= masks[min(k, len(masks) - 1)]
            if not bits:
                break
        return bits

    def level_mask(self, i: int, k: int) -> int:
        """Models entering sentence ``i``'s ladder exactly at step ``k``."""
        m = self.masks[i]
        return m[k] & ~m[k - 1] if k else m[0]

    def entry_vector(self, index: int) -> RelaxationVector | None:
        """Least vector whose relaxed base is satisfied by model ``index``."""
        out = []
        for masks in self.masks:
            k = next((k for k, m in enumerate(masks) if m >> index & 1), None)
            if k is None:
                return None
            out.append(k)
        return RelaxationVector(out)

    def minimal_vectors(self, target: int) -> tuple[int, list[RelaxationVector]]:
        """Least total and all vectors of that total meeting ``target``."""
        caps = self.caps
        for total in range(sum(caps) + 1):
            found = [RelaxationVector(v) for v in vectors_with_total(total, caps)
                     if self.vector_mask(v) & target]
            if found:
                return total, found
        message = "revision failed: relaxation not exhaustive enough"
        if self.stuck:
            message += f" (sentences {', '.join(map(str, self.stuck))} stay unsatisfiable)"
        raise RevisionFailed(message, caps)

    def coherent_vector(self, budget: int, allowed: int) -> RelaxationVector:
        """Join of the entry vectors of models in ``allowed`` with total at most ``budget``."""
        caps = self.caps
        out = RelaxationVector.zeros(len(caps))
        for total in range(budget + 1):
            for v in vectors_with_total(total, caps):
                if out.join(v) == out:
                    continue
                bits = allowed
                for i, k in enumerate(v):
                    bits &= self.level_mask(i, k)
                    if not bits:
                        break
                if bits:
                    out = out.join(v)
        return out


def apply_vector(relaxation: Relaxation, kb: KnowledgeBase, vector: Sequence[int]) -> KnowledgeBase:
    if len(vector) != len(kb):
        raise RelaxrevError("vector length does not match the knowledge base")
    return KnowledgeBase(tuple(relaxation.power(phi, k) for phi, k in zip(kb, vector)))


# ---------------------------------------------------------------------------
# revision


@dataclass(frozen=True)
class RevisionConfig:
    relaxation: Relaxation
    mode: str = MINIMAL
    max_cap: int = DEFAULT_MAX_CAP
    tie_break: str = "lexicographic-by-index"
    allow_non_exhaustive: bool = False

    def __post_init__(self):
        if self.mode not in (MINIMAL, COHERENT):
            raise RelaxrevError(f"unknown mode {self.mode!r}")
        if self.max_cap < 1:
            raise RelaxrevError("max_cap must be at least 1")


@dataclass(frozen=True)
class RevisionResult:
    revised: KnowledgeBase
    vector: RelaxationVector | None
    mode: str
    candidates: tuple = ()
    flags: tuple = ()
    minimal_total: int | None = None

    def to_json(self, system: SatisfactionSystem) -> dict:
        return {
            "revised": [system.format_sentence(s) for s in self.revised],
            "vector": None if self.vector is None else list(self.vector),
            "mode": self.mode,
            "candidates": [list(v) for v in self.candidates],
            "flags": list(self.flags),
        }


def revise(system: SatisfactionSystem, old: KnowledgeBase, new: KnowledgeBase,
           config: RevisionConfig, chains: RelaxationChains | None = None) -> RevisionResult:
    old, new = KnowledgeBase(tuple(old)), KnowledgeBase(tuple(new))
    target = system.kb_mask(new) & system.nontrivial
    if not target:
        return RevisionResult(new, None, config.mode, (), ("inconsistent_new",))
    rel = config.relaxation
    if rel.logic and not system.logic.startswith(rel.logic):
        raise RelaxrevError(f"relaxation {rel.name!r} is for {rel.logic}, not {system.logic}")
    if not rel.exhaustive and not config.allow_non_exhaustive:
        raise RelaxrevError(f"relaxation {rel.name!r} is not exhaustive; pass allow_non_exhaustive")
    flags = []
    if not system.kb_mask(old) & system.nontrivial:
        flags.append("inconsistent_old")
    if chains is None:
        chains = RelaxationChains(system, rel, old, config.max_cap)
    total, found = chains.minimal_vectors(target)
    if config.mode == MINIMAL:
        vector = max(found)
    else:
        vector = chains.coherent_vector(total, system.nontrivial)
    relaxed = tuple(chains.sentence(i, k) for i, k in enumerate(vector))
    revised = KnowledgeBase(relaxed + new.sentences)
    return RevisionResult(revised, vector, config.mode, tuple(found), tuple(flags), total)


class RevisionOperator:
    """``T ∘ T'`` as a callable, with per-``T`` relaxation ladders memoized."""

    def __init__(self, system: SatisfactionSystem, config: RevisionConfig):
        self.system = system
        self.config = config
        self._chains: dict[KnowledgeBase, RelaxationChains] = {}

    def chains(self, kb: KnowledgeBase) -> RelaxationChains:
        ch = self._chains.get(kb)
        if ch is None:
            ch = self._chains[kb] = RelaxationChains(self.system, self.config.relaxation, kb,
                                                     self.config.max_cap)
        return ch

    def result(self, old: KnowledgeBase, new: KnowledgeBase) -> RevisionResult:
        old = KnowledgeBase(tuple(old))
        return revise(self.system, old, new, self.config, self.chains(old))

    def __call__(self, old: KnowledgeBase, new: KnowledgeBase) -> KnowledgeBase:
        return self.result(old, new).revised


# ---------------------------------------------------------------------------
# checks


def check_extensivity(system: SatisfactionSystem, relaxation: Relaxation, sentence: Any) -> bool:
    return system.mask(sentence) & ~system.mask(relaxation(sentence)) == 0


def exhaustivity_index(system: SatisfactionSystem, relaxation: Relaxation, sentence: Any,
                       cap: int = DEFAULT_MAX_CAP) -> int | None:
    """Least ``k <= cap`` with ``Mod(ρ^k φ)`` the whole space, or None."""
    for k in range(cap + 1):
        if system.mask(sentence) == system.universe:
            return k
        if k < cap:
            nxt = relaxation(sentence)
            if nxt == sentence:
                return None
            sentence = nxt
    return None


def revision_order_leq(system: SatisfactionSystem, weaker: KnowledgeBase, stronger: KnowledgeBase) -> bool:
    """``T' ⊑ T''``: some base equivalent to ``T''`` contains ``T'``.

    ``T' ∪ T''`` is such a base exactly when ``Mod(T'') ⊆ Mod(T')``.
    """
    return system.kb_mask(stronger) & ~system.kb_mask(weaker) == 0


def revision_order_leq_witness(system: SatisfactionSystem, weaker: KnowledgeBase,
                               stronger: KnowledgeBase) -> bool:
    """Definitional form with the explicit witness ``T' ∪ T''``."""
    witness = KnowledgeBase(tuple(weaker) + tuple(stronger))
    return system.kb_mask(witness) == system.kb_mask(stronger) and set(weaker) <= set(witness)


def _consistent(chains: RelaxationChains, vector: Sequence[int], new_bits: int) -> bool:
    return chains.vector_mask(vector) & new_bits & chains.system.nontrivial != 0


def check_relevance(system: SatisfactionSystem, old: KnowledgeBase, new: KnowledgeBase,
                    result: RevisionResult, relaxation: Relaxation,
                    max_cap: int = DEFAULT_MAX_CAP) -> bool:
    """Zeroing any non-zero component of the chosen vector loses consistency."""
    if result.vector is None:
        return True
    chains = RelaxationChains(system, relaxation, KnowledgeBase(tuple(old)), max_cap)
    new_bits = system.kb_mask(new)
    for i, k in enumerate(result.vector):
        if k:
            trial = list(result.vector)
            trial[i] = 0
            if _consistent(chains, trial, new_bits):
                return False
    return True


def check_sum_minimality(system: SatisfactionSystem, old: KnowledgeBase, new: KnowledgeBase,
                         vector: Sequence[int], relaxation: Relaxation,
                         max_cap: int = DEFAULT_MAX_CAP) -> bool:
    """No consistent vector has a smaller total (exhaustive enumeration below it)."""
    chains = RelaxationChains(system, relaxation, KnowledgeBase(tuple(old)), max_cap)
    new_bits = system.kb_mask(new)
    for v in vectors_in_box([0] * len(chains.caps), chains.caps):
        if sum(v) < sum(vector) and _consistent(chains, v, new_bits):
            return False
    return True


# ---------------------------------------------------------------------------
# the relaxation-based faithful assignment


def definable_subsets(system: SatisfactionSystem) -> Iterator[tuple[int, KnowledgeBase]]:
    """Every model subset that is exactly the model set of its canonical theory."""
    members = list(iter_bits(system.universe))
    if len(members) > SUBSET_GUARD:
        raise RelaxrevError(f"{len(members)} models: subset enumeration is capped at {SUBSET_GUARD}")
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            bits = sum(1 << i for i in combo)
            theory = system.theory_from_models(bits)
            if system.kb_mask(theory) == bits:
                yield bits, theory


def f_rho_relation(system: SatisfactionSystem, relaxation: Relaxation, op: RevisionOperator,
                   kb: KnowledgeBase) -> ModelRelation:
    """``M ⪯ M'`` when, over some consistent ``T'`` containing both, every
    vector above ``K(T')`` admitting ``M'`` strictly dominates one that is
    still above ``K(T')`` and admits ``M``. Vectors range up to the caps."""
    kb = KnowledgeBase(tuple(kb))
    chains = op.chains(kb)
    caps = chains.caps
    rows = [0] * system.size
    for bits, theory in definable_subsets(system):
        if not bits & system.nontrivial:
            continue
        base = op.result(kb, theory).vector
        box = [tuple(v) for v in vectors_in_box(base, caps)]
        masks = {v: chains.vector_mask(v) for v in box}
        below = {}
        for hi in box:
            acc = 0
            for lo in box:
                if lo != hi and all(a <= b for a, b in zip(lo, hi)):
                    acc |= masks[lo]
            below[hi] = acc
        for j in iter_bits(bits):
            allowed = bits
            for hi in box:
                if masks[hi] >> j & 1:
                    allowed &= below[hi]
            for i in iter_bits(allowed):
                rows[i] |= 1 << j
    return ModelRelation(system, tuple(rows))


__all__ = [
    "MINIMAL", "COHERENT", "Relaxation", "trivial_relaxation", "RelaxationVector",
    "RelaxationChains", "apply_vector", "RevisionConfig", "RevisionResult", "revise",
    "RevisionOperator", "check_extensivity", "exhaustivity_index", "revision_order_leq",
    "revision_order_leq_witness", "check_relevance", "check_sum_minimality",
    "definable_subsets", "f_rho_relation", "vectors_with_total", "vectors_in_box",
]
