"""Horn clause logic: sentences are finite conjunctions of ``body -> head`` clauses.

The valuation space and index order are the propositional ones. The all-true
valuation satisfies every clause, so it is the only trivial model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .._lexer import Cursor, Lexer
from ..core import KnowledgeBase, SatisfactionSystem, iter_bits
from ..errors import NotClosedError, ParseError, SignatureError
from .pl import PLSignature, PLSystem, dilate_bits


@dataclass(frozen=True)
class Clause:
    body: frozenset
    head: str

    def sort_key(self):
        return (len(self.body), sorted(self.body), self.head)

    def __str__(self) -> str:
        return format_clause(self)


@dataclass(frozen=True)
class HornSentence:
    clauses: frozenset

    def __str__(self) -> str:
        return format_horn(self)

    def sorted_clauses(self) -> list[Clause]:
        return sorted(self.clauses, key=Clause.sort_key)


def horn(*clauses: Clause) -> HornSentence:
    return HornSentence(frozenset(clauses))


def clause(body: Iterable[str], head: str) -> Clause:
    return Clause(frozenset(body), head)


# ---------------------------------------------------------------------------
# grammar: one clause per line, "a & b -> c", facts "-> c"

_LEXER = Lexer([
    ("ARROW", r"->"),
    ("AMP", r"&"),
    ("ATOM", r"[a-z][a-z0-9_]*"),
])


def parse_clause(text: str, line: int = 1) -> Clause:
    cur = Cursor(_LEXER.tokenize(text, line, 1))
    body = []
    if not cur.at("ARROW"):
        body.append(cur.expect("ATOM", what="an atom").text)
        while cur.accept("AMP"):
            body.append(cur.expect("ATOM", what="an atom").text)
    cur.expect("ARROW", what="'->'")
    head = cur.expect("ATOM", what="a head atom").text
    cur.done()
    return Clause(frozenset(body), head)


def parse_horn(lines: Sequence[tuple[int, str]]) -> HornSentence:
    """One block of ``(line number, text)`` pairs, one clause per line."""
    clauses = [parse_clause(t, n) for n, t in lines if t.strip()]
    if not clauses:
        raise ParseError("empty Horn sentence", lines[0][0] if lines else 1, 1)
    return HornSentence(frozenset(clauses))


def parse_horn_text(text: str) -> HornSentence:
    return parse_horn([(i + 1, t) for i, t in enumerate(text.splitlines())])


def format_clause(c: Clause) -> str:
    body = " & ".join(sorted(c.body))
    return f"{body} -> {c.head}" if body else f"-> {c.head}"


def format_horn(s: HornSentence) -> str:
    return "\n".join(format_clause(c) for c in s.sorted_clauses())


# ---------------------------------------------------------------------------
# semantics


def clause_holds(c: Clause, valuation: dict[str, int]) -> bool:
    return not all(valuation[a] for a in c.body) or bool(valuation[c.head])


class HornSystem(SatisfactionSystem):
    """Valuations of a propositional signature with Horn sentences."""

    logic = "HCL"

    def __init__(self, atoms: Sequence[str] | PLSignature):
        super().__init__()
        self.pl = PLSystem(atoms)
        self.signature = self.pl.signature
        self.atoms = self.pl.atoms
        self._clause_cache: dict[Clause, int] = {}

    @property
    def size(self) -> int:
        return self.pl.size

    @property
    def universe(self) -> int:
        return self.pl.universe

    @property
    def all_true(self) -> int:
        return self.size - 1

    @property
    def trivial(self) -> int:
        return 1 << self.all_true

    def model_at(self, index: int):
        return self.pl.model_at(index)

    def index_of(self, model) -> int:
        return self.pl.index_of(model)

    def format_model(self, model) -> str:
        return self.pl.format_model(model)

    def check_sentence(self, sentence: HornSentence) -> None:
        known = set(self.atoms)
        for c in sentence.clauses:
            unknown = (set(c.body) | {c.head}) - known
            if unknown:
                raise SignatureError(f"unknown atoms: {', '.join(sorted(unknown))}")

    def holds(self, model, sentence: HornSentence) -> bool:
        v = dict(zip(self.atoms, model))
        return all(clause_holds(c, v) for c in sentence.clauses)

    def clause_mask(self, c: Clause) -> int:
        bits = self._clause_cache.get(c)
        if bits is None:
            body = self.universe
            for a in c.body:
                body &= self.pl.table(a)
            bits = (self.universe & ~body) | self.pl.table(c.head)
            self._clause_cache[c] = bits
        return bits

    def _compute_mask(self, sentence: HornSentence) -> int:
        bits = self.universe
        for c in sentence.clauses:
            bits &= self.clause_mask(c)
        return bits

    def tautology(self) -> HornSentence:
        p = self.atoms[0]
        return horn(clause([p], p))

    def format_sentence(self, sentence: HornSentence) -> str:
        return format_horn(sentence)

    def theory_from_models(self, bits: int) -> KnowledgeBase:
        return KnowledgeBase.of(horn_from_models(self, bits))

    def all_clauses(self) -> list[Clause]:
        """Every non-tautological clause over the signature, in canonical order."""
        out = []
        for r in range(len(self.atoms) + 1):
            for body in itertools.combinations(self.atoms, r):
                for head in self.atoms:
                    if head not in body:
                        out.append(Clause(frozenset(body), head))
        return out


def model_intersect(v1: Sequence[int], v2: Sequence[int]) -> tuple[int, ...]:
    if len(v1) != len(v2):
        raise SignatureError("valuations of different lengths")
    return tuple(1 if a and b else 0 for a, b in zip(v1, v2))


def intersection_closure(system: HornSystem, bits: int) -> int:
    """Least superset of ``bits`` closed under pairwise intersection (fixpoint)."""
    members = set(iter_bits(bits))
    frontier = list(members)
    while frontier:
        fresh = []
        for i in frontier:
            for j in list(members):
                k = i & j  # index AND is valuation AND under MSB-first encoding
                if k not in members:
                    members.add(k)
                    fresh.append(k)
        frontier = fresh
    out = 0
    for i in members:
        out |= 1 << i
    return out


def is_closed(system: HornSystem, bits: int) -> bool:
    return intersection_closure(system, bits) == bits


def horn_from_models(system: HornSystem, bits: int) -> HornSentence:
    """All clauses true in every model of ``bits``; Mod is ``bits`` plus all-true."""
    if not is_closed(system, bits):
        raise NotClosedError("model set is not closed under intersection")
    valid = [c for c in system.all_clauses() if bits & ~system.clause_mask(c) == 0]
    if not valid:
        return system.tautology()
    return HornSentence(frozenset(valid))


def horn_relax(system: HornSystem, sentence: HornSentence) -> HornSentence:
    """Close the radius-1 dilation of Mod(sentence) under intersection, then synthesize."""
    grown = dilate_bits(system.pl, system.mask(sentence))
    return horn_from_models(system, intersection_closure(system, grown))


def random_horn(rng, atoms: Sequence[str], max_clauses: int = 3) -> HornSentence:
    n = rng.randint(1, max_clauses)
    out = set()
    for _ in range(n):
        body = [a for a in atoms if rng.random() < 0.35]
        out.add(Clause(frozenset(body), rng.choice(list(atoms))))
    return HornSentence(frozenset(out))


__all__ = [
    "Clause", "HornSentence", "HornSystem", "horn", "clause", "parse_clause",
    "parse_horn", "parse_horn_text", "format_horn", "model_intersect",
    "intersection_closure", "is_closed", "horn_from_models", "horn_relax",
    "random_horn",
]
