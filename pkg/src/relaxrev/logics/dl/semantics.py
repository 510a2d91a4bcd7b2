"""Bounded DL interpretations.

Domains are ``{0..n-1}`` for ``n`` up to the bound. Interpretations of one
domain size are indexed by a bit pattern (concept extensions, then free role
successor rows) with the individual map as a mixed-radix digit string on
top. Sizes are laid out one after another from the smallest.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ...core import KnowledgeBase, SatisfactionSystem, default_bound
from ...errors import EnumerationLimitError, SignatureError
from . import kernel
from .syntax import (
    BOT, TOP, TOP_ROLE, And, Axiom, BotC, Concept, ConceptAssertion, DLSignature, Exists,
    Forall, Name, Not, Or, RoleAssertion, Subsumption, TopC, format_axiom,
    signature_of,
)

DEFAULT_CEILING = 1 << 23


@dataclass(frozen=True)
class Interpretation:
    size: int
    concepts: dict
    roles: dict
    individuals: dict

    @property
    def domain(self) -> frozenset:
        return frozenset(range(self.size))

    def role(self, r: str) -> frozenset:
        if r == TOP_ROLE:
            return frozenset(itertools.product(range(self.size), repeat=2))
        return self.roles[r]

    def __hash__(self) -> int:
        return hash((self.size, tuple(sorted(self.concepts.items())),
                     tuple(sorted(self.roles.items())), tuple(sorted(self.individuals.items()))))


def eval_concept(interp: Interpretation, c: Concept) -> frozenset:
    """Extension of ``c`` by direct structural recursion (reference route)."""
    dom = interp.domain
    if isinstance(c, TopC):
        return dom
    if isinstance(c, BotC):
        return frozenset()
    if isinstance(c, Name):
        if c.name not in interp.concepts:
            raise SignatureError(f"unknown concept name {c.name}")
        return interp.concepts[c.name]
    if isinstance(c, Not):
        return dom - eval_concept(interp, c.arg)
    if isinstance(c, And):
        out = dom
        for a in c.args:
            out &= eval_concept(interp, a)
        return out
    if isinstance(c, Or):
        out = frozenset()
        for a in c.args:
            out |= eval_concept(interp, a)
        return out
    inner = eval_concept(interp, c.arg)
    rel = interp.role(c.role)
    if isinstance(c, Exists):
        return frozenset(x for x in dom if any((x, y) in rel for y in inner))
    return frozenset(x for x in dom if all(y in inner for y in dom if (x, y) in rel))


def satisfies_dl(interp: Interpretation, ax: Axiom) -> bool:
    if isinstance(ax, Subsumption):
        return eval_concept(interp, ax.lhs) <= eval_concept(interp, ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return interp.individuals[ax.individual] in eval_concept(interp, ax.concept)
    if isinstance(ax, RoleAssertion):
        pair = (interp.individuals[ax.subject], interp.individuals[ax.object])
        return pair in interp.role(ax.role)
    raise TypeError(f"not an axiom: {ax!r}")


class _SizeBlock:
    def __init__(self, n: int, nc: int, nr: int, ni: int):
        self.n, self.nc, self.nr, self.ni = n, nc, nr, ni
        self.low_bits = n * nc + nr * n * n
        self.low_count = 1 << self.low_bits
        self.ind_count = n ** ni
        self.count = self.low_count * self.ind_count

    def ind_values(self, k: int) -> np.ndarray:
        """Value of individual ``k`` at every local index of the block."""
        codes = np.arange(self.ind_count, dtype=np.int64)
        return np.repeat(((codes // self.n ** k) % self.n).astype(np.uint8), self.low_count)

    def low_index(self) -> np.ndarray:
        return np.tile(np.arange(self.low_count, dtype=np.uint64), self.ind_count)


class DLSystem(SatisfactionSystem):
    """All interpretations of a DL signature with domain size at most ``bound``."""

    def __init__(self, signature: DLSignature, bound: int | None = None, fragment: str = "ALC",
                 ceiling: int = DEFAULT_CEILING, backend: str | None = None):
        super().__init__()
        self.signature = signature
        self.bound = default_bound() if bound is None else bound
        self.fragment = fragment
        self.logic = f"DL-{fragment}"
        self.backend = backend
        sig = signature
        self._cidx = {c: j for j, c in enumerate(sig.concepts)}
        self._ridx = {r: j for j, r in enumerate(sig.roles)}
        self._iidx = {a: j for j, a in enumerate(sig.individuals)}
        self.with_empty = sig.empty_domain and not sig.individuals and not sig.nonempty
        if self.bound < 1 and not self.with_empty:
            raise EnumerationLimitError("DL spaces need bound >= 1 (or the empty-domain flag)")
        lo = 0 if self.with_empty else 1
        self._blocks = [_SizeBlock(n, len(sig.concepts), len(sig.roles), len(sig.individuals))
                        for n in range(lo, self.bound + 1)]
        self._offsets = list(itertools.accumulate([0] + [b.count for b in self._blocks]))
        self._size = self._offsets[-1]
        if self._size > ceiling:
            raise EnumerationLimitError(
                f"{self._size} interpretations exceed the ceiling {ceiling}")
        self._ext_cache: dict[Concept, list[np.ndarray]] = {}
        self._universe = self._compute_universe()

    # -- space -----------------------------------------------------------
    @property
    def size(self) -> int:
        return self._size

    @property
    def universe(self) -> int:
        return self._universe

    @property
    def trivial(self) -> int:
        return 1 if self.with_empty else 0

    def _compute_universe(self) -> int:
        full = (1 << self._size) - 1
        if not self.signature.nonempty:
            return full
        parts = []
        for k, b in enumerate(self._blocks):
            ok = np.ones(b.count, dtype=bool)
            for name in self.signature.nonempty:
                ok &= np.tile(self._ext_low(Name(name), k) != 0, b.ind_count)
            parts.append(ok)
        return _pack(parts)

    def _locate(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self._size:
            raise IndexError(index)
        for k, b in enumerate(self._blocks):
            if index < self._offsets[k + 1]:
                return k, index - self._offsets[k]
        raise IndexError(index)

    def model_at(self, index: int) -> Interpretation:
        k, local = self._locate(index)
        b = self._blocks[k]
        n = b.n
        low, code = local % b.low_count, local // b.low_count
        concepts = {c: frozenset(x for x in range(n) if low >> (j * n + x) & 1)
                    for c, j in self._cidx.items()}
        roff = n * b.nc
        roles = {r: frozenset((x, y) for x in range(n) for y in range(n)
                              if low >> (roff + j * n * n + x * n + y) & 1)
                 for r, j in self._ridx.items()}
        inds = {}
        for a, j in self._iidx.items():
            inds[a] = (code // n ** j) % n
        return Interpretation(n, concepts, roles, inds)

    def index_of(self, interp: Interpretation) -> int:
        for k, b in enumerate(self._blocks):
            if b.n == interp.size:
                break
        else:
            raise SignatureError("domain size outside the bounded space")
        n = b.n
        low = 0
        for c, j in self._cidx.items():
            for x in interp.concepts[c]:
                low |= 1 << (j * n + x)
        roff = n * b.nc
        for r, j in self._ridx.items():
            for x, y in interp.roles[r]:
                low |= 1 << (roff + j * n * n + x * n + y)
        code = sum(interp.individuals[a] * n ** j for a, j in self._iidx.items())
        return self._offsets[k] + code * b.low_count + low

    def interpretations(self) -> Iterator[Interpretation]:
        for i in range(self._size):
            yield self.model_at(i)

    # -- sentences -------------------------------------------------------
    def check_sentence(self, ax: Axiom) -> None:
        if not isinstance(ax, Axiom):
            raise SignatureError(f"not a DL axiom: {ax!r}")
        # the fragment only constrains input documents; relaxations may leave it
        self.signature.check_axiom(ax)

    def check_concept(self, c: Concept) -> None:
        self.signature.check_concept(c)

    def holds(self, model: Interpretation, ax: Axiom) -> bool:
        return satisfies_dl(model, ax)

    def tautology(self) -> Axiom:
        return Subsumption(TOP, TOP)

    def format_sentence(self, ax: Axiom) -> str:
        return format_axiom(ax)

    def format_model(self, m: Interpretation) -> dict:
        return {
            "domain": m.size,
            "concepts": {c: sorted(v) for c, v in m.concepts.items()},
            "roles": {r: sorted(list(p) for p in v) for r, v in m.roles.items()},
            "individuals": dict(m.individuals),
        }

    # -- fast route ------------------------------------------------------
    def _ext_low(self, c: Concept, k: int) -> np.ndarray:
        exts = self._ext_cache.get(c)
        if exts is None:
            self.check_concept(c)
            prog = kernel.compile_concept(c, self._cidx, self._ridx)
            exts = [kernel.eval_program(prog, b.n, b.nc, b.nr, self.backend) for b in self._blocks]
            self._ext_cache[c] = exts
        return exts[k]

    def _axiom_block(self, ax: Axiom, k: int) -> np.ndarray:
        b = self._blocks[k]
        if isinstance(ax, Subsumption):
            lhs, rhs = self._ext_low(ax.lhs, k), self._ext_low(ax.rhs, k)
            return np.tile((lhs & ~rhs) == 0, b.ind_count)
        if isinstance(ax, ConceptAssertion):
            ext = np.tile(self._ext_low(ax.concept, k), b.ind_count)
            val = b.ind_values(self._iidx[ax.individual])
            return ((ext >> val) & 1).astype(bool)
        if isinstance(ax, RoleAssertion):
            if ax.role == TOP_ROLE:
                return np.full(b.count, b.n > 0)
            va = b.ind_values(self._iidx[ax.subject]).astype(np.uint64)
            vb = b.ind_values(self._iidx[ax.object]).astype(np.uint64)
            n = np.uint64(b.n)
            shift = np.uint64(b.n * b.nc + self._ridx[ax.role] * b.n * b.n) + va * n + vb
            return ((b.low_index() >> shift) & np.uint64(1)).astype(bool)
        raise TypeError(f"not an axiom: {ax!r}")

    def _compute_mask(self, ax: Axiom) -> int:
        return _pack([self._axiom_block(ax, k) for k in range(len(self._blocks))])

    def concept_mask(self, c: Concept, test) -> int:
        """Interpretations whose extension byte of ``c`` passes ``test`` (vectorised)."""
        return _pack([np.tile(test(self._ext_low(c, k), b), b.ind_count)
                      for k, b in enumerate(self._blocks)]) & self.universe

    # -- concept-level decisions ------------------------------------------
    def subsumed(self, c: Concept, d: Concept, within: int | None = None) -> bool:
        """``c`` is subsumed by ``d`` in every admissible interpretation of ``within``."""
        space = self.universe if within is None else within
        return space & ~self.mask(Subsumption(c, d)) == 0

    def equivalent(self, c: Concept, d: Concept, within: int | None = None) -> bool:
        return self.subsumed(c, d, within) and self.subsumed(d, c, within)

    def unsatisfiable(self, c: Concept, within: int | None = None) -> bool:
        return self.subsumed(c, BOT, within)

    def serial_mask(self, roles: Iterable[str] | None = None) -> int:
        """Interpretations where every listed role gives each element a successor."""
        bits = self.universe
        for r in (self.signature.roles if roles is None else roles):
            bits &= self.mask(Subsumption(TOP, Exists(r, TOP)))
        return bits


def _pack(parts: Sequence[np.ndarray]) -> int:
    flat = np.concatenate([np.asarray(p, dtype=bool) for p in parts]) if parts else np.zeros(0, bool)
    return int.from_bytes(np.packbits(flat, bitorder="little").tobytes(), "little")


@functools.lru_cache(maxsize=64)
def _plain_system(concepts: tuple, roles: tuple, bound: int) -> DLSystem:
    return DLSystem(DLSignature(concepts, roles), bound)


def concept_system(*concepts: Concept, bound: int | None = None,
                   signature: DLSignature | None = None) -> DLSystem:
    """Unrestricted system over the names of the given concepts (cached)."""
    sig = signature_of((), concepts)
    if signature is not None:
        sig = DLSignature(tuple(sorted(set(sig.concepts) | set(signature.concepts))),
                          tuple(sorted(set(sig.roles) | set(signature.roles))))
    return _plain_system(sig.concepts, sig.roles, default_bound() if bound is None else bound)


def concept_subsumed(c: Concept, d: Concept, bound: int | None = None) -> bool:
    return concept_system(c, d, bound=bound).subsumed(c, d)


def concept_equivalent(c: Concept, d: Concept, bound: int | None = None) -> bool:
    return concept_system(c, d, bound=bound).equivalent(c, d)


def enumerate_interpretations(signature: DLSignature, bound: int,
                              ceiling: int = DEFAULT_CEILING) -> Iterator[Interpretation]:
    system = DLSystem(signature, bound, ceiling=ceiling)
    for i in range(system.size):
        if system.universe >> i & 1:
            yield system.model_at(i)


def count_interpretations(signature: DLSignature, bound: int) -> int:
    lo = 0 if (signature.empty_domain and not signature.individuals and not signature.nonempty) else 1
    total = 0
    for n in range(lo, bound + 1):
        total += 2 ** (n * len(signature.concepts) + len(signature.roles) * n * n) * n ** len(signature.individuals)
    return total


def kb_system(*kbs: Iterable[Axiom], bound: int | None = None, fragment: str = "ALC",
              nonempty: Sequence[str] = (), empty_domain: bool = False) -> DLSystem:
    axioms = [ax for kb in kbs for ax in kb]
    sig = signature_of(axioms)
    sig = DLSignature(sig.concepts, sig.roles, sig.individuals, tuple(nonempty), empty_domain)
    return DLSystem(sig, bound, fragment)


__all__ = [
    "Interpretation", "eval_concept", "satisfies_dl", "DLSystem", "concept_system",
    "concept_subsumed", "concept_equivalent", "enumerate_interpretations",
    "count_interpretations", "kb_system",
]
