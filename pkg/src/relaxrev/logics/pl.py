"""Propositional logic over a finite, ordered set of atoms.

Sentences use ``!`` and ``|`` as primitives; ``&`` and ``->`` are desugared
when parsed and re-sugared when printed, so printing and re-parsing always
gives back the same tree.

Valuations are tuples of 0/1 aligned with the atom order. The valuation
``(b0, ..., bn-1)`` has index ``b0 b1 ... bn-1`` read as a binary number,
so ``(1, 0)`` over ``p, q`` is model 2 and prints as ``10``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .._lexer import Cursor, Lexer
from ..core import KnowledgeBase, SatisfactionSystem, iter_bits
from ..errors import ParseError, RelaxrevError, SignatureError


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


Formula = Atom | Not | Or


def conj(a: Formula, b: Formula) -> Formula:
    return Not(Or(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def big_or(parts: Sequence[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def big_and(parts: Sequence[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = conj(out, p)
    return out


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Not):
        return atoms_of(f.arg)
    return atoms_of(f.left) | atoms_of(f.right)


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    return 1 + max(depth(f.left), depth(f.right))


def evaluate(f: Formula, valuation: dict[str, int]) -> bool:
    """Recursive truth value under an atom -> 0/1 mapping."""
    if isinstance(f, Atom):
        return bool(valuation[f.name])
    if isinstance(f, Not):
        return not evaluate(f.arg, valuation)
    return evaluate(f.left, valuation) or evaluate(f.right, valuation)


# ---------------------------------------------------------------------------
# grammar

_LEXER = Lexer([
    ("ARROW", r"->"),
    ("OP", r"[!|&()]"),
    ("ATOM", r"[a-z][a-z0-9_]*"),
])


def parse_formula(text: str, line: int = 1, column: int = 1) -> Formula:
    cur = Cursor(_LEXER.tokenize(text, line, column))
    f = _parse_impl(cur)
    cur.done()
    return f


def _parse_impl(cur: Cursor) -> Formula:
    left = _parse_or(cur)
    if cur.accept("ARROW"):
        return implies(left, _parse_impl(cur))
    return left


def _parse_or(cur: Cursor) -> Formula:
    out = _parse_and(cur)
    while cur.accept("OP", "|"):
        out = Or(out, _parse_and(cur))
    return out


def _parse_and(cur: Cursor) -> Formula:
    out = _parse_unary(cur)
    while cur.accept("OP", "&"):
        out = conj(out, _parse_unary(cur))
    return out


def _parse_unary(cur: Cursor) -> Formula:
    if cur.accept("OP", "!"):
        return Not(_parse_unary(cur))
    if cur.accept("OP", "("):
        inner = _parse_impl(cur)
        cur.expect("OP", ")")
        return inner
    tok = cur.accept("ATOM")
    if tok is None:
        cur.fail("expected an atom, '!' or '('")
    return Atom(tok.text)


_IMPL, _OR, _AND, _NOT, _ATOM = 1, 2, 3, 4, 5


def _and_parts(f: Formula):
    if isinstance(f, Not) and isinstance(f.arg, Or):
        a, b = f.arg.left, f.arg.right
        if isinstance(a, Not) and isinstance(b, Not):
            return a.arg, b.arg
    return None


def _fmt(f: Formula) -> tuple[str, int]:
    if isinstance(f, Atom):
        return f.name, _ATOM
    parts = _and_parts(f)
    if parts is not None:
        return f"{_wrap(parts[0], _AND)} & {_wrap(parts[1], _AND + 1)}", _AND
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _NOT), _NOT
    if isinstance(f.left, Not) and _and_parts(f.left) is None:
        return f"{_wrap(f.left.arg, _IMPL + 1)} -> {_wrap(f.right, _IMPL)}", _IMPL
    return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}", _OR


def _wrap(f: Formula, at_least: int) -> str:
    text, prec = _fmt(f)
    return text if prec >= at_least else f"({text})"


def format_formula(f: Formula) -> str:
    return _fmt(f)[0]


# ---------------------------------------------------------------------------
# semantics


@dataclass(frozen=True)
class PLSignature:
    atoms: tuple[str, ...]

    def __post_init__(self):
        if not self.atoms:
            raise SignatureError("a propositional signature needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise SignatureError("duplicate atom names")


class PLSystem(SatisfactionSystem):
    """All ``2^n`` valuations of the signature's atoms."""

    logic = "PL"

    def __init__(self, atoms: Sequence[str] | PLSignature):
        super().__init__()
        sig = atoms if isinstance(atoms, PLSignature) else PLSignature(tuple(atoms))
        self.signature = sig
        self.atoms = sig.atoms
        self.n = len(sig.atoms)
        self._size = 1 << self.n
        self._universe = (1 << self._size) - 1
        self._pos = {a: i for i, a in enumerate(self.atoms)}
        # truth table of each atom as a bitset over valuation indices
        self._tables = {}
        for k, a in enumerate(self.atoms):
            shift = self.n - 1 - k
            bits = 0
            for i in range(self._size):
                if i >> shift & 1:
                    bits |= 1 << i
            self._tables[a] = bits

    @property
    def size(self) -> int:
        return self._size

    @property
    def universe(self) -> int:
        return self._universe

    @property
    def trivial(self) -> int:
        return 0

    def model_at(self, index: int) -> tuple[int, ...]:
        return tuple(index >> (self.n - 1 - k) & 1 for k in range(self.n))

    def index_of(self, model: Sequence[int]) -> int:
        if len(model) != self.n:
            raise SignatureError(f"valuation has {len(model)} bits, signature has {self.n} atoms")
        out = 0
        for b in model:
            out = out << 1 | (1 if b else 0)
        return out

    def bit_of(self, atom: str) -> int:
        """Index distance between valuations differing only on ``atom``."""
        return 1 << (self.n - 1 - self._pos[atom])

    def table(self, atom: str) -> int:
        return self._tables[atom]

    def check_sentence(self, sentence: Formula) -> None:
        unknown = atoms_of(sentence) - set(self.atoms)
        if unknown:
            raise SignatureError(f"unknown atoms: {', '.join(sorted(unknown))}")

    def holds(self, model: Sequence[int], sentence: Formula) -> bool:
        return evaluate(sentence, dict(zip(self.atoms, model)))

    def _compute_mask(self, sentence: Formula) -> int:
        cache = self._mask_cache
        hit = cache.get(sentence)
        if hit is not None:
            return hit
        if isinstance(sentence, Atom):
            bits = self._tables[sentence.name]
        elif isinstance(sentence, Not):
            bits = self._universe ^ self._compute_mask(sentence.arg)
        else:
            bits = self._compute_mask(sentence.left) | self._compute_mask(sentence.right)
        cache[sentence] = bits
        return bits

    def tautology(self) -> Formula:
        p = Atom(self.atoms[0])
        return Or(p, Not(p))

    def contradiction(self) -> Formula:
        p = Atom(self.atoms[0])
        return conj(p, Not(p))

    def format_sentence(self, sentence: Formula) -> str:
        return format_formula(sentence)

    def format_model(self, model: Sequence[int]) -> str:
        return "".join(str(b) for b in model)

    def theory_from_models(self, bits: int) -> KnowledgeBase:
        return KnowledgeBase.of(dnf_from_models(self, bits))


def hamming(v1: Sequence[int], v2: Sequence[int]) -> int:
    if len(v1) != len(v2):
        raise SignatureError("valuations of different lengths")
    return sum(1 for a, b in zip(v1, v2) if bool(a) != bool(b))


def dilate_bits(system: PLSystem, bits: int) -> int:
    """Valuations within Hamming distance 1 of ``bits`` (a bitset)."""
    out = bits
    for a in system.atoms:
        step = system.bit_of(a)
        on = bits & system.table(a)
        off = bits & ~system.table(a)
        out |= (on >> step) | (off << step)
    return out & system.universe


def minterm(system: PLSystem, index: int) -> Formula:
    lits = []
    for a, b in zip(system.atoms, system.model_at(index)):
        lits.append(Atom(a) if b else Not(Atom(a)))
    return big_and(lits)


def dnf_from_models(system: PLSystem, bits: int) -> Formula:
    """Full DNF with minterms in valuation-index order; ∅ gives the contradiction."""
    bits &= system.universe
    if not bits:
        return system.contradiction()
    return big_or([minterm(system, i) for i in iter_bits(bits)])


def theory_from_models(system: PLSystem, bits: int) -> KnowledgeBase:
    return system.theory_from_models(bits)


def dilate(system: PLSystem, formula: Formula) -> Formula:
    """Radius-1 Hamming dilation, synthesized as a full DNF."""
    return dnf_from_models(system, dilate_bits(system, system.mask(formula)))


def check_betweenness(system: PLSystem, distance: Callable = hamming) -> bool:
    """Every pair x, y has, for each k ≤ d(x,y), some z at d(x,z)=k, d(z,y)=d(x,y)-k."""
    vals = [system.model_at(i) for i in range(system.size)]
    for x in vals:
        for y in vals:
            dxy = distance(x, y)
            for k in range(dxy + 1):
                if not any(distance(x, z) == k and distance(z, y) == dxy - k for z in vals):
                    return False
    return True


def sentence_pool(atoms: Sequence[str], max_depth: int) -> list[Formula]:
    """All formulas over ``!`` and ``|`` with depth ≤ ``max_depth``, in a fixed order."""
    level: list[Formula] = [Atom(a) for a in atoms]
    for _ in range(max_depth):
        seen = set(level)
        nxt = list(level)
        for f in level:
            g = Not(f)
            if g not in seen:
                seen.add(g)
                nxt.append(g)
        for f, g in itertools.product(level, repeat=2):
            h = Or(f, g)
            if h not in seen:
                seen.add(h)
                nxt.append(h)
        level = nxt
    return level


def random_formula(rng, atoms: Sequence[str], max_depth: int) -> Formula:
    """Random formula with connectives ! | & -> (desugared)."""
    if max_depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(list(atoms)))
    op = rng.choice("!|&>")
    if op == "!":
        return Not(random_formula(rng, atoms, max_depth - 1))
    a = random_formula(rng, atoms, max_depth - 1)
    b = random_formula(rng, atoms, max_depth - 1)
    return {"|": Or, "&": conj, ">": implies}[op](a, b)


def parse_valuation(text: str, system: PLSystem) -> tuple[int, ...]:
    text = text.strip()
    if len(text) != system.n or set(text) - {"0", "1"}:
        raise RelaxrevError(f"valuation must be {system.n} binary digits, got {text!r}")
    return tuple(int(c) for c in text)


def parse_sentences(lines: Iterable[tuple[int, str]]) -> list[Formula]:
    out = []
    for lineno, text in lines:
        if text.strip():
            out.append(parse_formula(text, lineno, 1))
    return out


__all__ = [
    "Atom", "Not", "Or", "Formula", "conj", "implies", "big_or", "big_and",
    "PLSignature", "PLSystem", "parse_formula", "format_formula", "hamming",
    "dilate", "dilate_bits", "dnf_from_models", "theory_from_models",
    "check_betweenness", "sentence_pool", "random_formula", "evaluate", "depth",
    "ParseError",
]
