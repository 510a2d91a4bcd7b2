"""Exhaustive checks of the AGM postulates and of faithful assignments.

Everything is decided on model sets of a bounded system: two knowledge
bases agree when their masks agree. A revision operator is any callable
``op(T, T') -> KnowledgeBase``; results are memoized per input pair, and
the first call on each corpus pair is repeated to catch nondeterminism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .core import KnowledgeBase, ModelSet, SatisfactionSystem, iter_bits
from .errors import NondeterministicOperator, RelaxrevError
from .relations import (
    Assignment, ModelRelation, empty_assignment, fa_join, fa_meet, min_bits, min_models,
)
from .revision import definable_subsets

Operator = Callable[[KnowledgeBase, KnowledgeBase], KnowledgeBase]

POSTULATES = ("G1", "G2", "G3", "G4", "G5", "G6", "G'4")
MAX_STORED = 25


def kb_union(system: SatisfactionSystem, *kbs: Iterable) -> KnowledgeBase:
    """Set union in a fixed sentence order, so ``A ∪ B`` and ``B ∪ A`` coincide."""
    items = {s for kb in kbs for s in kb}
    return KnowledgeBase(tuple(sorted(items, key=system.format_sentence)))


# ---------------------------------------------------------------------------
# corpus


@dataclass(frozen=True)
class Corpus:
    """Knowledge bases to quantify over; postulates range over all pairs/triples."""

    kbs: tuple

    @classmethod
    def from_pool(cls, pool: Sequence, max_sentences: int = 2) -> "Corpus":
        kbs = [KnowledgeBase(c) for r in range(max_sentences + 1)
               for c in itertools.combinations(pool, r)]
        return cls(tuple(kbs))

    def __len__(self) -> int:
        return len(self.kbs)


def pl_corpus(atoms: Sequence[str], depth: int = 2, max_sentences: int = 2) -> Corpus:
    from .logics.pl import sentence_pool
    return Corpus.from_pool(sentence_pool(atoms, depth), max_sentences)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Counterexample:
    postulate: str
    kbs: tuple  # (T, T') or (T, T', T'') as KnowledgeBase values
    model: int | None = None  # an offending model index, when there is one

    def to_json(self, system: SatisfactionSystem) -> dict:
        out: dict[str, Any] = {
            "postulate": self.postulate,
            "kbs": [[system.format_sentence(s) for s in kb] for kb in self.kbs],
        }
        if self.model is not None:
            fmt = getattr(system, "format_model", None)
            m = system.model_at(self.model)
            out["model"] = fmt(m) if fmt else repr(m)
        return out


@dataclass
class PostulateResult:
    postulate: str
    checked: int = 0
    failed: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failed:
            return "fails"
        return "holds" if self.checked else "vacuous"

    @property
    def pass_rate(self) -> float:
        return 1.0 if not self.checked else (self.checked - self.failed) / self.checked

    def record(self, ok: bool, example: Callable[[], Counterexample]) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.counterexamples) < MAX_STORED:
                self.counterexamples.append(example())

    def to_json(self, system: SatisfactionSystem) -> dict:
        return {
            "postulate": self.postulate,
            "status": self.status,
            "checked": self.checked,
            "failed": self.failed,
            "pass_rate": round(self.pass_rate, 6),
            "counterexamples": [c.to_json(system) for c in self.counterexamples],
        }


@dataclass
class PostulateReport:
    results: dict = field(default_factory=dict)
    excluded: int = 0

    def __getitem__(self, name: str) -> PostulateResult:
        return self.results[name]

    def add(self, name: str) -> PostulateResult:
        return self.results.setdefault(name, PostulateResult(name))

    def to_json(self, system: SatisfactionSystem) -> dict:
        out = {"postulates": [r.to_json(system) for r in self.results.values()]}
        if self.excluded:
            out["excluded"] = self.excluded
        return out


# ---------------------------------------------------------------------------
# the postulates on single tuples


class _Memo:
    """Result masks of an operator, with a determinism check on first use."""

    def __init__(self, system: SatisfactionSystem, op: Operator, verify: bool = True):
        self.system, self.op, self.verify = system, op, verify
        self.cache: dict[tuple, int] = {}

    def __call__(self, t: KnowledgeBase, t2: KnowledgeBase, verify: bool | None = None) -> int:
        key = (t, t2)
        bits = self.cache.get(key)
        if bits is None:
            first = self.op(t, t2)
            if self.verify if verify is None else verify:
                second = self.op(t, t2)
                if tuple(first) != tuple(second):
                    raise NondeterministicOperator(
                        f"operator gave two answers on T={list(map(str, t))}, T'={list(map(str, t2))}")
            bits = self.cache[key] = self.system.kb_mask(first)
        return bits


def _first(bits: int) -> int | None:
    return next(iter_bits(bits), None)


def _check(system: SatisfactionSystem, memo: _Memo, name: str, t, t2, t3=None) -> tuple[bool, int | None]:
    """Evaluate one postulate; returns (holds, offending model or None)."""
    nt = system.nontrivial
    mod = system.kb_mask
    r = memo(t, t2)
    if name == "G1":
        ok = not (mod(t2) & nt) or bool(r & nt)
        return ok, None
    if name == "G2":
        bad = r & ~mod(t2)
        return not bad, _first(bad)
    if name == "G3":
        u = mod(kb_union(system, t, t2))
        if not u & nt:
            return True, None
        return r == u, _first(r ^ u)
    if name == "G4":
        r2 = memo(t, t3)
        return r == r2, _first(r ^ r2)
    if name == "G'4":
        r2 = memo(t3, t2)
        return r == r2, _first(r ^ r2)
    lhs = r & mod(t3)
    rhs = memo(t, kb_union(system, t2, t3), verify=False)
    if name == "G5":
        bad = lhs & ~rhs
        return not bad, _first(bad)
    if name == "G6":
        if not lhs & nt:
            return True, None
        bad = rhs & ~lhs
        return not bad, _first(bad)
    raise KeyError(name)


def applicable(system: SatisfactionSystem, name: str, t, t2, t3=None) -> bool:
    if name == "G4":
        return system.kb_mask(t2) == system.kb_mask(t3)
    if name == "G'4":
        return system.kb_mask(t) == system.kb_mask(t3)
    return True


def replay(system: SatisfactionSystem, op: Operator, example: Counterexample) -> bool:
    """Re-run the stored tuple; True when the failure reproduces."""
    memo = _Memo(system, op, verify=False)
    ok, _ = _check(system, memo, example.postulate, *example.kbs)
    return not ok


# ---------------------------------------------------------------------------
# corpus-level checks


class _Tables:
    """Corpus masks, operator results and cached unions shared by the corpus checks."""

    def __init__(self, system: SatisfactionSystem, op: Operator, kbs: Sequence[KnowledgeBase]):
        self.system = system
        self.memo = _Memo(system, op)
        self.masks = {kb: system.kb_mask(kb) for kb in kbs}
        self._unions: dict[tuple, KnowledgeBase] = {}

    def union(self, a: KnowledgeBase, b: KnowledgeBase) -> KnowledgeBase:
        key = (a, b)
        u = self._unions.get(key)
        if u is None:
            u = self._unions[key] = kb_union(self.system, a, b)
        return u

    def g5_g6(self, t, t2, t3) -> tuple[int, int]:
        """Offending models of G5 and of G6 (0 when the postulate holds)."""
        lhs = self.memo(t, t2) & self.masks[t3]
        rhs = self.memo(t, self.union(t2, t3), verify=False)
        g6 = rhs & ~lhs if lhs & self.system.nontrivial else 0
        return lhs & ~rhs, g6


def check_postulates(system: SatisfactionSystem, op: Operator, corpus: Corpus | Iterable,
                     postulates: Sequence[str] = POSTULATES) -> PostulateReport:
    """Evaluate each postulate on every applicable corpus pair or triple."""
    kbs = corpus.kbs if isinstance(corpus, Corpus) else tuple(KnowledgeBase(tuple(k)) for k in corpus)
    tab = _Tables(system, op, kbs)
    memo, masks = tab.memo, tab.masks
    report = PostulateReport()
    for name in postulates:
        report.add(name)
    pair_names = [p for p in postulates if p in ("G1", "G2", "G3")]
    g5 = report.results.get("G5")
    g6 = report.results.get("G6")
    classes: dict[int, list] = {}
    for kb in kbs:
        classes.setdefault(masks[kb], []).append(kb)

    def run(name, *tup):
        ok, model = _check(system, memo, name, *tup)
        report[name].record(ok, lambda: Counterexample(name, tup, model))

    for t in kbs:
        for t2 in kbs:
            for name in pair_names:
                run(name, t, t2)
            if g5 is not None or g6 is not None:
                for t3 in kbs:
                    bad5, bad6 = tab.g5_g6(t, t2, t3)
                    for res, bad in ((g5, bad5), (g6, bad6)):
                        if res is not None:
                            res.record(not bad, lambda: Counterexample(
                                res.postulate, (t, t2, t3), _first(bad)))
            if "G4" in postulates:
                for t3 in classes[masks[t2]]:
                    if t3 != t2:
                        run("G4", t, t2, t3)
            if "G'4" in postulates:
                for t3 in classes[masks[t]]:
                    if t3 != t:
                        run("G'4", t, t2, t3)
    return report


def check_g4_derivation(system: SatisfactionSystem, op: Operator, corpus: Corpus) -> PostulateReport:
    """Tuples ``(T, T'1, T'2)`` with ``T'1 ≡ T'2`` that satisfy G1-G3, G5 and G6
    in every arrangement must satisfy G4; other tuples are counted as excluded."""
    tab = _Tables(system, op, corpus.kbs)
    report = PostulateReport()
    res = report.add("G4")
    classes: dict[int, list] = {}
    for kb in corpus.kbs:
        classes.setdefault(tab.masks[kb], []).append(kb)
    for t in corpus.kbs:
        pair_ok = {t2: all(_check(system, tab.memo, p, t, t2)[0] for p in ("G1", "G2", "G3"))
                   for t2 in corpus.kbs}
        for group in classes.values():
            for t1, t2 in itertools.permutations(group, 2):
                premises = pair_ok[t1] and pair_ok[t2] and not any(
                    tab.g5_g6(t, t1, t2) + tab.g5_g6(t, t2, t1))
                if not premises:
                    report.excluded += 1
                    continue
                ok, model = _check(system, tab.memo, "G4", t, t1, t2)
                res.record(ok, lambda: Counterexample("G4", (t, t1, t2), model))
    return report


# ---------------------------------------------------------------------------
# assignments


def _relation(rel: ModelRelation | Assignment, kb: KnowledgeBase) -> ModelRelation:
    return rel(kb) if isinstance(rel, Assignment) else rel


def check_faithful(system: SatisfactionSystem, assignment: ModelRelation | Assignment,
                   kb: Iterable) -> bool:
    """No strict comparison inside ``Mod(T)``; models of ``T`` strictly below all others."""
    kb = KnowledgeBase(tuple(kb))
    rel = _relation(assignment, kb)
    inside = system.kb_mask(kb)
    outside = system.universe & ~inside
    for j in iter_bits(system.universe):
        below = rel.strictly_below(j)
        if inside >> j & 1 and below & inside:
            return False
        if outside >> j & 1 and inside & ~below:
            return False
    return True


def check_fa_plus(system: SatisfactionSystem, assignment: ModelRelation | Assignment, op: Operator,
                  corpus: Corpus, kbs: Iterable | None = None) -> PostulateReport:
    """The three conditions linking ``∘`` and ``⪯_T`` on every corpus tuple.

    ``kbs`` restricts the first argument ``T`` (default: the whole corpus).
    """
    memo = _Memo(system, op)
    nt = system.nontrivial
    report = PostulateReport()
    eq, nonempty, meet = report.add("min-equation"), report.add("nonempty"), report.add("intersection")
    firsts = corpus.kbs if kbs is None else [KnowledgeBase(tuple(k)) for k in kbs]
    masks = {kb: system.kb_mask(kb) for kb in corpus.kbs}
    for t in firsts:
        rel = _relation(assignment, t)
        mins = {t2: min_bits(masks[t2] & nt, rel) for t2 in corpus.kbs}
        for t2 in corpus.kbs:
            r = memo(t, t2)
            m = mins[t2]
            eq.record((r & nt) == m, lambda: Counterexample("min-equation", (t, t2), _first((r & nt) ^ m)))
            if masks[t2] & nt:
                nonempty.record(bool(m), lambda: Counterexample("nonempty", (t, t2)))
            for t3 in corpus.kbs:
                if not r & masks[t3] & nt:
                    continue
                u = kb_union(system, t2, t3)
                lhs = m & masks[t3]
                rhs = min_bits(system.kb_mask(u) & nt, rel)
                meet.record(lhs == rhs,
                            lambda: Counterexample("intersection", (t, t2, t3), _first(lhs ^ rhs)))
    return report


def induced_assignment(system: SatisfactionSystem, op: Operator, kb: Iterable) -> ModelRelation:
    """``M ⪯_T M'`` when some definable ``T'`` has both as models, ``M`` kept by
    ``T ∘ T'`` and ``M'`` dropped."""
    kb = KnowledgeBase(tuple(kb))
    rows = [0] * system.size
    for bits, theory in definable_subsets(system):
        kept = system.kb_mask(op(kb, theory))
        dropped = bits & ~kept
        if not dropped:
            continue
        for i in iter_bits(bits & kept):
            rows[i] |= dropped
    return ModelRelation(system, tuple(rows))


def induced(system: SatisfactionSystem, op: Operator) -> Assignment:
    return Assignment(system, lambda kb: induced_assignment(system, op, kb))


__all__ = [
    "Corpus", "pl_corpus", "kb_union", "Counterexample", "PostulateResult", "PostulateReport",
    "check_postulates", "check_g4_derivation", "check_faithful", "check_fa_plus",
    "induced_assignment", "induced", "replay", "applicable", "min_models", "fa_join", "fa_meet",
    "empty_assignment", "POSTULATES",
]
