"""ALC concepts and axioms, with EL / ELU fragment tags.

Concrete syntax::

    Top  Bot  A  ~C  C & D  C | D  some r. C  all r. C
    C [= D        a : C        (a, b) : r

Quantifiers bind tighter than ``&`` (``some r. A & B`` is ``(some r. A) & B``);
``&`` binds tighter than ``|``. Chains become one n-ary node, explicit
parentheses are kept as nesting so that printing round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from ..._lexer import Cursor, Lexer
from ...errors import FragmentError, ParseError, SignatureError

TOP_ROLE = "r_top"
FRAGMENTS = ("EL", "ELU", "ALC")
KEYWORDS = {"some", "all", "Top", "Bot"}


class Concept:
    __slots__ = ()

    def __str__(self) -> str:
        return format_concept(self)

    def __and__(self, other: "Concept") -> "Concept":
        return And((self, other))

    def __or__(self, other: "Concept") -> "Concept":
        return Or((self, other))

    def __invert__(self) -> "Concept":
        return Not(self)


@dataclass(frozen=True, repr=False)
class TopC(Concept):
    def __repr__(self) -> str:
        return "Top"


@dataclass(frozen=True, repr=False)
class BotC(Concept):
    def __repr__(self) -> str:
        return "Bot"


TOP = TopC()
BOT = BotC()


@dataclass(frozen=True)
class Name(Concept):
    name: str


@dataclass(frozen=True)
class Not(Concept):
    arg: Concept


@dataclass(frozen=True)
class And(Concept):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments")


@dataclass(frozen=True)
class Or(Concept):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two arguments")


@dataclass(frozen=True)
class Exists(Concept):
    role: str
    arg: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: str
    arg: Concept


def conj(items: Iterable[Concept]) -> Concept:
    """n-ary conjunction; the empty conjunction is Top."""
    items = tuple(items)
    if not items:
        return TOP
    return items[0] if len(items) == 1 else And(items)


def disj(items: Iterable[Concept]) -> Concept:
    """n-ary disjunction; the empty disjunction is Bot."""
    items = tuple(items)
    if not items:
        return BOT
    return items[0] if len(items) == 1 else Or(items)


# axioms -------------------------------------------------------------------


class Axiom:
    __slots__ = ()

    def __str__(self) -> str:
        return format_axiom(self)


@dataclass(frozen=True)
class Subsumption(Axiom):
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class ConceptAssertion(Axiom):
    individual: str
    concept: Concept


@dataclass(frozen=True)
class RoleAssertion(Axiom):
    subject: str
    object: str
    role: str


# ---------------------------------------------------------------------------
# structure


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, (Not, Exists, Forall)):
        yield from subconcepts(c.arg)
    elif isinstance(c, (And, Or)):
        for a in c.args:
            yield from subconcepts(a)


def concept_names(c: Concept) -> set[str]:
    return {s.name for s in subconcepts(c) if isinstance(s, Name)}


def concept_roles(c: Concept) -> set[str]:
    return {s.role for s in subconcepts(c) if isinstance(s, (Exists, Forall))}


def axiom_concepts(ax: Axiom) -> tuple[Concept, ...]:
    if isinstance(ax, Subsumption):
        return (ax.lhs, ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return (ax.concept,)
    return ()


def role_depth(c: Concept) -> int:
    if isinstance(c, (Exists, Forall)):
        return 1 + role_depth(c.arg)
    if isinstance(c, Not):
        return role_depth(c.arg)
    if isinstance(c, (And, Or)):
        return max(role_depth(a) for a in c.args)
    return 0


def concept_size(c: Concept) -> int:
    return sum(1 for _ in subconcepts(c))


def fragment_of(c: Concept) -> str:
    """Smallest of EL, ELU, ALC containing the constructors used in ``c``."""
    rank = 0
    for s in subconcepts(c):
        if isinstance(s, (Not, Forall)):
            return "ALC"
        if isinstance(s, Or):
            rank = 1
    return FRAGMENTS[rank]


def axiom_fragment(ax: Axiom) -> str:
    return max((fragment_of(c) for c in axiom_concepts(ax)), key=FRAGMENTS.index, default="EL")


def fragment_leq(a: str, b: str) -> bool:
    return FRAGMENTS.index(a) <= FRAGMENTS.index(b)


def require_fragment(c: Concept, allowed: str, what: str = "operator") -> None:
    got = fragment_of(c)
    if not fragment_leq(got, allowed):
        raise FragmentError(f"{what} expects an {allowed} concept, got {got}: {format_concept(c)}")


def _key(c: Concept) -> tuple:
    return (type(c).__name__, format_concept(c))


def canonical(c: Concept) -> Concept:
    """Flatten nested And/Or, drop duplicate arguments and sort them by printed form."""
    if isinstance(c, (Not, Exists, Forall)):
        inner = canonical(c.arg)
        return Not(inner) if isinstance(c, Not) else type(c)(c.role, inner)
    if isinstance(c, (And, Or)):
        kind = type(c)
        flat: list[Concept] = []
        for a in c.args:
            a = canonical(a)
            flat.extend(a.args if isinstance(a, kind) else (a,))
        uniq = sorted(set(flat), key=_key)
        return (conj if kind is And else disj)(uniq)
    return c


def canonical_axiom(ax: Axiom) -> Axiom:
    if isinstance(ax, Subsumption):
        return Subsumption(canonical(ax.lhs), canonical(ax.rhs))
    if isinstance(ax, ConceptAssertion):
        return ConceptAssertion(ax.individual, canonical(ax.concept))
    return ax


# ---------------------------------------------------------------------------
# signature


@dataclass(frozen=True)
class DLSignature:
    """Concept names, free role names (``r_top`` is implicit), individuals.

    ``nonempty`` lists concept names that every admissible interpretation
    must interpret as a non-empty set. ``empty_domain`` admits the
    interpretation with an empty domain; it is dropped whenever there are
    individuals or nonempty names.
    """

    concepts: tuple = ()
    roles: tuple = ()
    individuals: tuple = ()
    nonempty: tuple = ()
    empty_domain: bool = False

    def __post_init__(self):
        for group in ("concepts", "roles", "individuals", "nonempty"):
            object.__setattr__(self, group, tuple(dict.fromkeys(getattr(self, group))))
        if TOP_ROLE in self.roles:
            object.__setattr__(self, "roles", tuple(r for r in self.roles if r != TOP_ROLE))
        c, r, i = set(self.concepts), set(self.roles), set(self.individuals)
        if c & r or c & i or r & i:
            raise SignatureError("concept, role and individual names must be pairwise disjoint")
        bad = (c | r | i) & KEYWORDS
        if bad:
            raise SignatureError(f"reserved words used as names: {', '.join(sorted(bad))}")
        if not set(self.nonempty) <= c:
            raise SignatureError("nonempty names must be declared concept names")

    @property
    def all_roles(self) -> tuple:
        return self.roles + (TOP_ROLE,)

    def merge(self, other: "DLSignature") -> "DLSignature":
        return DLSignature(
            self.concepts + other.concepts,
            self.roles + other.roles,
            self.individuals + other.individuals,
            self.nonempty + other.nonempty,
            self.empty_domain and other.empty_domain,
        )

    def check_concept(self, c: Concept) -> None:
        unknown = concept_names(c) - set(self.concepts)
        if unknown:
            raise SignatureError(f"unknown concept names: {', '.join(sorted(unknown))}")
        unknown = concept_roles(c) - set(self.all_roles)
        if unknown:
            raise SignatureError(f"unknown roles: {', '.join(sorted(unknown))}")

    def check_axiom(self, ax: Axiom) -> None:
        for c in axiom_concepts(ax):
            self.check_concept(c)
        inds = []
        if isinstance(ax, ConceptAssertion):
            inds = [ax.individual]
        elif isinstance(ax, RoleAssertion):
            inds = [ax.subject, ax.object]
            if ax.role not in self.all_roles:
                raise SignatureError(f"unknown role {ax.role}")
        unknown = set(inds) - set(self.individuals)
        if unknown:
            raise SignatureError(f"unknown individuals: {', '.join(sorted(unknown))}")


def signature_of(axioms: Iterable[Axiom], concepts: Iterable[Concept] = ()) -> DLSignature:
    """Smallest signature covering the given axioms and concepts."""
    names: list[str] = []
    roles: list[str] = []
    inds: list[str] = []
    items = [c for ax in axioms for c in axiom_concepts(ax)] + list(concepts)
    for ax in axioms:
        if isinstance(ax, ConceptAssertion):
            inds.append(ax.individual)
        elif isinstance(ax, RoleAssertion):
            inds += [ax.subject, ax.object]
            roles.append(ax.role)
    for c in items:
        for s in subconcepts(c):
            if isinstance(s, Name):
                names.append(s.name)
            elif isinstance(s, (Exists, Forall)):
                roles.append(s.role)
    return DLSignature(tuple(sorted(set(names))), tuple(sorted(set(roles) - {TOP_ROLE})),
                       tuple(sorted(set(inds))))


# ---------------------------------------------------------------------------
# parsing

_LEXER = Lexer([
    ("SUB", r"\[="),
    ("OP", r"[~&|().,:]"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
])


def _concept(cur: Cursor) -> Concept:
    items = [_conjunction(cur)]
    while cur.accept("OP", "|"):
        items.append(_conjunction(cur))
    return disj(items)


def _conjunction(cur: Cursor) -> Concept:
    items = [_unary(cur)]
    while cur.accept("OP", "&"):
        items.append(_unary(cur))
    return conj(items)


def _unary(cur: Cursor) -> Concept:
    if cur.accept("OP", "~"):
        return Not(_unary(cur))
    for word, kind in (("some", Exists), ("all", Forall)):
        if cur.accept("IDENT", word):
            role = cur.expect("IDENT", what="a role name")
            if role.text in KEYWORDS:
                raise ParseError("reserved word used as a role", role.line, role.column)
            cur.expect("OP", ".")
            return kind(role.text, _unary(cur))
    if cur.accept("OP", "("):
        inner = _concept(cur)
        cur.expect("OP", ")")
        return inner
    if cur.accept("IDENT", "Top"):
        return TOP
    if cur.accept("IDENT", "Bot"):
        return BOT
    tok = cur.expect("IDENT", what="a concept")
    return Name(tok.text)


def parse_concept(text: str, line: int = 1, column: int = 1) -> Concept:
    cur = Cursor(_LEXER.tokenize(text, line, column))
    c = _concept(cur)
    cur.done()
    return c


def parse_axiom(text: str, line: int = 1) -> Axiom:
    cur = Cursor(_LEXER.tokenize(text, line, 1))
    if cur.at("OP", "(") and cur.peek(1).kind == "IDENT" and cur.peek(2).text == ",":
        cur.i += 1
        a = cur.expect("IDENT").text
        cur.expect("OP", ",")
        b = cur.expect("IDENT", what="an individual").text
        cur.expect("OP", ")")
        cur.expect("OP", ":")
        role = cur.expect("IDENT", what="a role name").text
        cur.done()
        return RoleAssertion(a, b, role)
    if cur.at("IDENT") and cur.peek(1).text == ":" and cur.tok.text not in KEYWORDS:
        ind = cur.tok.text
        cur.i += 2
        c = _concept(cur)
        cur.done()
        return ConceptAssertion(ind, c)
    lhs = _concept(cur)
    cur.expect("SUB", what="'[='")
    rhs = _concept(cur)
    cur.done()
    return Subsumption(lhs, rhs)


# ---------------------------------------------------------------------------
# printing

_OR, _AND, _UNARY = 1, 2, 3


def _fmt(c: Concept) -> tuple[str, int]:
    if isinstance(c, TopC):
        return "Top", _UNARY
    if isinstance(c, BotC):
        return "Bot", _UNARY
    if isinstance(c, Name):
        return c.name, _UNARY
    if isinstance(c, Not):
        return "~" + _wrap(c.arg, _UNARY), _UNARY
    if isinstance(c, Exists):
        return f"some {c.role}. {_wrap(c.arg, _UNARY)}", _UNARY
    if isinstance(c, Forall):
        return f"all {c.role}. {_wrap(c.arg, _UNARY)}", _UNARY
    if isinstance(c, And):
        return " & ".join(_wrap(a, _UNARY) for a in c.args), _AND
    if isinstance(c, Or):
        # nested Or must keep its parentheses to round-trip, And need not
        return " | ".join(_wrap(a, _AND) if not isinstance(a, Or) else f"({_fmt(a)[0]})"
                          for a in c.args), _OR
    raise TypeError(f"not a concept: {c!r}")


def _wrap(c: Concept, at_least: int) -> str:
    text, prec = _fmt(c)
    return text if prec >= at_least else f"({text})"


def format_concept(c: Concept) -> str:
    return _fmt(c)[0]


def format_axiom(ax: Axiom) -> str:
    if isinstance(ax, Subsumption):
        return f"{format_concept(ax.lhs)} [= {format_concept(ax.rhs)}"
    if isinstance(ax, ConceptAssertion):
        return f"{ax.individual} : {format_concept(ax.concept)}"
    if isinstance(ax, RoleAssertion):
        return f"({ax.subject}, {ax.object}) : {ax.role}"
    raise TypeError(f"not an axiom: {ax!r}")


__all__ = [
    "TOP_ROLE", "FRAGMENTS", "Concept", "TopC", "BotC", "TOP", "BOT", "Name", "Not",
    "And", "Or", "Exists", "Forall", "conj", "disj", "Axiom", "Subsumption",
    "ConceptAssertion", "RoleAssertion", "subconcepts", "concept_names",
    "concept_roles", "role_depth", "concept_size", "fragment_of", "axiom_fragment",
    "fragment_leq", "require_fragment", "canonical", "canonical_axiom", "DLSignature",
    "signature_of", "parse_concept", "parse_axiom", "format_concept", "format_axiom",
    "axiom_concepts",
]
