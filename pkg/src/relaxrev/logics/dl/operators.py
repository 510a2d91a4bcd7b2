"""Concept relaxations and retractions, and their lifting to axioms.

Relaxations (``rho_*``) only ever add instances; retractions (``kappa_*``)
only ever remove them. Side conditions such as exception eligibility are
decided on the bounded interpretations of a ``DLSystem``, optionally
restricted to a context bitset (``within``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ...errors import FragmentError, ShapeError
from . import normal, trees
from .semantics import DLSystem, concept_system
from .syntax import (
    BOT, TOP, TOP_ROLE, And, Axiom, BotC, Concept, ConceptAssertion, Exists, Forall, Name,
    Not, Or, RoleAssertion, Subsumption, TopC, conj, disj, format_concept,
)

ConceptOp = Callable[[Concept], Concept]


@dataclass
class StepReport:
    """Notes from operators whose step can fall short of its request."""

    notes: list = field(default_factory=list)

    def note(self, message: str) -> None:
        self.notes.append(message)


# ---------------------------------------------------------------------------
# constant operators


def rho_top(c: Concept) -> Concept:
    return TOP


def kappa_bot(c: Concept) -> Concept:
    return BOT


rho_depth = trees.rho_depth
rho_leaves = trees.rho_leaves
rho_e = normal.rho_e


# ---------------------------------------------------------------------------
# exceptions


def _disjuncts(c: Concept) -> tuple[Concept, ...]:
    return c.args if isinstance(c, Or) else (c,)


def _conjuncts(c: Concept) -> tuple[Concept, ...]:
    return c.args if isinstance(c, And) else (c,)


def _system_for(c: Concept, exceptions: Sequence[Concept], system: DLSystem | None) -> DLSystem:
    return system if system is not None else concept_system(c, *exceptions)


def rho_exceptions(c: Concept, exceptions: Sequence[Concept], k: int = 1,
                   system: DLSystem | None = None, within: int | None = None,
                   report: StepReport | None = None) -> Concept:
    """Join ``c`` with up to ``k`` further exceptions disjoint from it.

    Exceptions already present as top-level disjuncts count as added; the
    disjointness test is against the remaining disjuncts, i.e. the concept
    before any exception was joined. Candidates are taken in list order.
    """
    system = _system_for(c, exceptions, system)
    parts = _disjuncts(c)
    added = [d for d in parts if d in exceptions]
    base = disj(d for d in parts if d not in exceptions) if len(added) < len(parts) else c
    out = list(parts)
    for _ in range(k):
        pick = next((e for e in exceptions if e not in out
                     and system.unsatisfiable(conj([e, base]), within)), None)
        if pick is None:
            if report is not None:
                report.note(f"no eligible exception left for {format_concept(c)}")
            break
        out.append(pick)
    return disj(out)


def kappa_exceptions(c: Concept, exceptions: Sequence[Concept], system: DLSystem | None = None,
                     within: int | None = None, report: StepReport | None = None) -> Concept:
    """Conjoin the complement of every exception subsumed by ``c``."""
    system = _system_for(c, exceptions, system)
    if system.fragment != "ALC":
        raise FragmentError("exception retraction needs complement (ALC)")
    parts = _conjuncts(c)
    negated = {p.arg for p in parts if isinstance(p, Not)} & set(exceptions)
    base = conj(p for p in parts if not (isinstance(p, Not) and p.arg in negated)) \
        if len(negated) < len(parts) else c
    fresh = [Not(e) for e in exceptions if e not in negated and system.subsumed(e, base, within)]
    if not fresh and report is not None:
        report.note(f"no eligible exception for {format_concept(c)}")
    return conj(list(parts) + fresh) if fresh else c


# ---------------------------------------------------------------------------
# quantifier prefixes


def split_prefix(c: Concept) -> tuple[list[tuple[type, str]], Concept]:
    """Peel the maximal ``Q r.`` prefix; returns ``([(Exists|Forall, role), ...], body)``."""
    prefix = []
    while isinstance(c, (Exists, Forall)):
        prefix.append((type(c), c.role))
        c = c.arg
    return prefix, c


def join_prefix(prefix: Sequence[tuple[type, str]], body: Concept) -> Concept:
    for q, r in reversed(prefix):
        body = q(r, body)
    return body


def _quantifier_free(c: Concept) -> bool:
    if isinstance(c, (Exists, Forall)):
        return False
    if isinstance(c, Not):
        return _quantifier_free(c.arg)
    if isinstance(c, (And, Or)):
        return all(_quantifier_free(a) for a in c.args)
    return True


def _prefixed(c: Concept, what: str) -> tuple[list, Concept]:
    prefix, body = split_prefix(c)
    if not _quantifier_free(body):
        raise ShapeError(f"{what} expects Q1 r1 ... Qn rn. D with D quantifier-free: {format_concept(c)}")
    return prefix, body


# ---------------------------------------------------------------------------
# Dalal-style operators on literal normal forms

Literal = tuple  # (name, positive)


def _lit_concept(lit: Literal) -> Concept:
    return Name(lit[0]) if lit[1] else Not(Name(lit[0]))


def _lit_key(lit: Literal):
    return (lit[0], not lit[1])


def _normal(c: Concept, dnf: bool) -> list[frozenset]:
    """DNF terms (``dnf=True``) or CNF clauses as sets of literals, simplified."""
    outer = Or if dnf else And

    def go(x: Concept, positive: bool) -> list[frozenset]:
        if isinstance(x, Not):
            return go(x.arg, not positive)
        if isinstance(x, Name):
            return [frozenset([(x.name, positive)])]
        if isinstance(x, (TopC, BotC)):
            true = isinstance(x, TopC) == positive
            # Top is one empty DNF term and no CNF clause; Bot the reverse
            return ([frozenset()] if true else []) if dnf else ([] if true else [frozenset()])
        kind = type(x) if positive else (And if isinstance(x, Or) else Or)
        parts = [go(a, positive) for a in x.args]
        if kind is outer:
            return [t for p in parts for t in p]
        return [frozenset().union(*combo) for combo in itertools.product(*parts)]

    items = go(c, True)
    out = []
    for t in set(items):
        if any((a, not s) in t for a, s in t):
            continue  # contradictory term / tautological clause
        out.append(t)
    out = [t for t in out if not any(o < t for o in out)]
    return sorted(out, key=lambda t: (len(t), sorted(map(_lit_key, t))))


def _term(t: frozenset) -> Concept:
    return conj(_lit_concept(x) for x in sorted(t, key=_lit_key))


def _clause(t: frozenset) -> Concept:
    return disj(_lit_concept(x) for x in sorted(t, key=_lit_key))


def dnf_terms(c: Concept) -> list[frozenset]:
    return _normal(c, True)


def cnf_clauses(c: Concept) -> list[frozenset]:
    return _normal(c, False)


def kappa_dalal(c: Concept) -> Concept:
    """``⊓_j ⊔_{i≠j} t_i`` over the DNF terms of the body, under the prefix."""
    prefix, body = _prefixed(c, "kappa_dalal")
    terms = dnf_terms(body)
    if not terms:
        return BOT  # body is already empty: only dropping the prefix can shrink further
    out = conj(disj(_term(t) for i, t in enumerate(terms) if i != j) for j in range(len(terms)))
    return join_prefix(prefix, out)


def rho_dalal(c: Concept) -> Concept:
    """``⊔_j ⊓_{i≠j} c_i`` over the CNF clauses of the body, under the prefix."""
    prefix, body = _prefixed(c, "rho_dalal")
    clauses = cnf_clauses(body)
    if not clauses:
        return TOP
    out = disj(conj(_clause(t) for i, t in enumerate(clauses) if i != j) for j in range(len(clauses)))
    return join_prefix(prefix, out)


# ---------------------------------------------------------------------------
# exception operators under a prefix


def rho_cup(c: Concept, exceptions: Sequence[Concept], k: int = 1, system: DLSystem | None = None,
            within: int | None = None, report: StepReport | None = None) -> Concept:
    prefix, body = split_prefix(c)
    return join_prefix(prefix, rho_exceptions(body, exceptions, k, system, within, report))


def kappa_cap(c: Concept, exceptions: Sequence[Concept], system: DLSystem | None = None,
              within: int | None = None, report: StepReport | None = None) -> Concept:
    prefix, body = split_prefix(c)
    return join_prefix(prefix, kappa_exceptions(body, exceptions, system, within, report))


# ---------------------------------------------------------------------------
# quantifier flips


def _flips(prefix: list, body: Concept, src: type, dst: type) -> list[Concept]:
    out = []
    for j, (q, r) in enumerate(prefix):
        if q is src:
            flipped = list(prefix)
            flipped[j] = (dst, r)
            out.append(join_prefix(flipped, body))
    return out


def kappa_q(c: Concept, report: StepReport | None = None) -> Concept:
    """Conjunction of the single-position ∃→∀ flips; conjunctions map per conjunct."""
    if isinstance(c, And):
        return conj(kappa_q(a, report) for a in c.args)
    prefix, body = _prefixed(c, "kappa_q")
    flips = _flips(prefix, body, Exists, Forall)
    if not flips:
        if report is not None:
            report.note(f"no existential to flip in {format_concept(c)}")
        return c
    return conj(flips)


def rho_q(c: Concept) -> Concept:
    """Disjunction of the single-position ∀→∃ flips; a prefix with no ∀ relaxes to Top."""
    if isinstance(c, Or):
        parts = [rho_q(a) for a in c.args]
        return TOP if TOP in parts else disj(dict.fromkeys(parts))
    prefix, body = _prefixed(c, "rho_q")
    flips = _flips(prefix, body, Forall, Exists)
    return disj(flips) if flips else TOP


# ---------------------------------------------------------------------------
# axiom-level lifting


def formula_relax_right(rho: ConceptOp, ax: Axiom) -> Axiom:
    """Relax the right-hand side or the asserted concept; role assertions go to ``r_top``."""
    if isinstance(ax, Subsumption):
        return Subsumption(ax.lhs, rho(ax.rhs))
    if isinstance(ax, ConceptAssertion):
        return ConceptAssertion(ax.individual, rho(ax.concept))
    if isinstance(ax, RoleAssertion):
        return RoleAssertion(ax.subject, ax.object, TOP_ROLE)
    raise TypeError(f"not an axiom: {ax!r}")


def formula_relax_left(kappa: ConceptOp, ax: Axiom) -> Axiom:
    """Retract the left-hand side; assertions weaken straight to Top / ``r_top``."""
    if isinstance(ax, Subsumption):
        return Subsumption(kappa(ax.lhs), ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return ConceptAssertion(ax.individual, TOP)
    if isinstance(ax, RoleAssertion):
        return RoleAssertion(ax.subject, ax.object, TOP_ROLE)
    raise TypeError(f"not an axiom: {ax!r}")


# ---------------------------------------------------------------------------
# catalogue

RELAXATIONS = ("rho_top", "rho_depth", "rho_leaves", "rho_e", "rho_exceptions", "rho_dalal",
               "rho_cup", "rho_q")
RETRACTIONS = ("kappa_bot", "kappa_exceptions", "kappa_dalal", "kappa_cap", "kappa_q")
NON_EXHAUSTIVE = frozenset({"rho_exceptions", "rho_cup", "kappa_exceptions", "kappa_cap", "kappa_q"})
NEEDS_EXCEPTIONS = frozenset({"rho_exceptions", "rho_cup", "kappa_exceptions", "kappa_cap"})
# the lowest fragment in which each operator's input may live
INPUT_FRAGMENT = {
    "rho_depth": "EL", "rho_leaves": "EL", "rho_e": "ELU",
}


def concept_operator(name: str, exceptions: Iterable[Concept] = (), k: int = 1,
                     system: DLSystem | None = None, within: int | None = None,
                     bound: int | None = None, report: StepReport | None = None) -> ConceptOp:
    """A one-argument concept operator by catalogue name, with its parameters bound."""
    exc = tuple(exceptions)
    if name == "rho_top":
        return rho_top
    if name == "kappa_bot":
        return kappa_bot
    if name == "rho_depth":
        return rho_depth
    if name == "rho_leaves":
        return rho_leaves
    if name == "rho_e":
        return lambda c: rho_e(c, bound=bound if bound is not None else
                               (system.bound if system is not None else None))
    if name == "rho_dalal":
        return rho_dalal
    if name == "kappa_dalal":
        return kappa_dalal
    if name == "rho_q":
        return rho_q
    if name == "kappa_q":
        return lambda c: kappa_q(c, report)
    if name == "rho_exceptions":
        return lambda c: rho_exceptions(c, exc, k, system, within, report)
    if name == "rho_cup":
        return lambda c: rho_cup(c, exc, k, system, within, report)
    if name == "kappa_exceptions":
        return lambda c: kappa_exceptions(c, exc, system, within, report)
    if name == "kappa_cap":
        return lambda c: kappa_cap(c, exc, system, within, report)
    raise KeyError(name)


def axiom_operator(name: str, **params) -> Callable[[Axiom], Axiom]:
    op = concept_operator(name, **params)
    if name in RETRACTIONS:
        return lambda ax: formula_relax_left(op, ax)
    return lambda ax: formula_relax_right(op, ax)


__all__ = [
    "StepReport", "rho_top", "kappa_bot", "rho_depth", "rho_leaves", "rho_e",
    "rho_exceptions", "kappa_exceptions", "split_prefix", "join_prefix", "dnf_terms",
    "cnf_clauses", "kappa_dalal", "rho_dalal", "rho_cup", "kappa_cap", "kappa_q", "rho_q",
    "formula_relax_right", "formula_relax_left", "RELAXATIONS", "RETRACTIONS",
    "NON_EXHAUSTIVE", "NEEDS_EXCEPTIONS", "concept_operator", "axiom_operator",
]
