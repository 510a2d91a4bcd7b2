"""ELU normal form with existentials grouped per role, and the relaxation defined on it.

A normal form is a list of EL disjuncts. Each disjunct is a set of concept
names plus, per role, a set of fillers that are themselves EL disjuncts;
within a group no filler subsumes another. Subsumption is decided on the
bounded interpretations of a ``DLSystem``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from ...errors import FragmentError
from .semantics import DLSystem, concept_system
from .syntax import (
    BOT, TOP, And, BotC, Concept, Exists, Name, Or, TopC, conj, disj, format_concept,
)


@dataclass(frozen=True)
class ELNormal:
    names: frozenset = frozenset()
    groups: tuple = ()  # ((role, (filler ELNormal, ...)), ...) sorted by role
    bottom: bool = False

    def to_concept(self) -> Concept:
        if self.bottom:
            return BOT
        parts: list[Concept] = [Name(a) for a in sorted(self.names)]
        for role, fillers in self.groups:
            parts += [Exists(role, f.to_concept()) for f in fillers]
        return conj(parts)

    @property
    def is_top(self) -> bool:
        return not (self.bottom or self.names or self.groups)


BOTTOM = ELNormal(bottom=True)


class _Normalizer:
    def __init__(self, system: DLSystem):
        self.system = system

    def subsumed(self, a: ELNormal, b: ELNormal) -> bool:
        return self.system.subsumed(a.to_concept(), b.to_concept())

    def prune(self, items: Sequence[ELNormal]) -> list[ELNormal]:
        """Keep only the most specific items; among equivalents keep the first in order."""
        items = sorted(set(items), key=_key)
        kept = []
        for i, x in enumerate(items):
            redundant = False
            for j, y in enumerate(items):
                if i == j:
                    continue
                # x is redundant when a strictly more specific y exists, or an
                # equivalent y sits earlier in the order
                if self.subsumed(y, x) and (not self.subsumed(x, y) or j < i):
                    redundant = True
                    break
            if not redundant:
                kept.append(x)
        return kept

    def make(self, names, groups: dict, bottom: bool = False) -> ELNormal:
        if bottom or any(f.bottom for fs in groups.values() for f in fs):
            return BOTTOM
        out = []
        for role in sorted(groups):
            # most specific fillers win: more general existentials are implied
            fillers = self.prune(groups[role])
            out.append((role, tuple(fillers)))
        return ELNormal(frozenset(names), tuple(out))

    def merge(self, parts: Sequence[ELNormal]) -> ELNormal:
        names: set[str] = set()
        groups: dict[str, list[ELNormal]] = {}
        for p in parts:
            if p.bottom:
                return BOTTOM
            names |= p.names
            for role, fillers in p.groups:
                groups.setdefault(role, []).extend(fillers)
        return self.make(names, groups)

    def dnf(self, c: Concept) -> list[ELNormal]:
        if isinstance(c, TopC):
            return [ELNormal()]
        if isinstance(c, BotC):
            return [BOTTOM]
        if isinstance(c, Name):
            return [ELNormal(frozenset([c.name]))]
        if isinstance(c, Or):
            return [d for a in c.args for d in self.dnf(a)]
        if isinstance(c, And):
            choices = [self.dnf(a) for a in c.args]
            return [self.merge(combo) for combo in itertools.product(*choices)]
        if isinstance(c, Exists):
            return [self.make((), {c.role: [d]}) for d in self.dnf(c.arg)]
        raise FragmentError(f"not an ELU concept: {format_concept(c)}")

    def normalize(self, c: Concept) -> list[ELNormal]:
        ds = self.dnf(c)
        if any(d.is_top for d in ds):
            return [ELNormal()]
        live = [d for d in ds if not d.bottom]
        if not live:
            return [BOTTOM]
        # a disjunct subsumed by another adds nothing to the union
        return self.prune_specific(live)

    def prune_specific(self, items: Sequence[ELNormal]) -> list[ELNormal]:
        items = sorted(set(items), key=_key)
        kept = []
        for i, x in enumerate(items):
            if not any(i != j and self.subsumed(x, y) and (not self.subsumed(y, x) or j < i)
                       for j, y in enumerate(items)):
                kept.append(x)
        return kept


def _key(d: ELNormal) -> str:
    return format_concept(d.to_concept())


def _normalizer(c: Concept, system: DLSystem | None, bound: int | None) -> _Normalizer:
    return _Normalizer(system if system is not None else concept_system(c, bound=bound))


def normal_form(c: Concept, system: DLSystem | None = None, bound: int | None = None) -> list[ELNormal]:
    return _normalizer(c, system, bound).normalize(c)


def normalize_grouping(c: Concept, system: DLSystem | None = None,
                       bound: int | None = None) -> Concept:
    """Equivalent disjunction of EL concepts with existentials grouped by role."""
    nf = normal_form(c, system, bound)
    return disj(d.to_concept() for d in nf)


class _RhoE:
    def __init__(self, norm: _Normalizer):
        self.norm = norm

    def concept(self, c: Concept) -> Concept:
        return disj(self.disjunct(d) for d in self.norm.normalize(c))

    def disjunct(self, d: ELNormal) -> Concept:
        if d.bottom or d.is_top:
            return TOP
        items: list[tuple[Concept, Concept]] = []  # (item, relaxed item)
        for a in sorted(d.names):
            items.append((Name(a), TOP))
        for role, fillers in d.groups:
            group = conj(Exists(role, f.to_concept()) for f in fillers)
            items.append((group, self.group(role, fillers)))
        out = []
        for i, (_, relaxed) in enumerate(items):
            rest = [x for j, (x, _) in enumerate(items) if j != i]
            out.append(conj([relaxed] + rest))
        return disj(out)

    def group(self, role: str, fillers: tuple) -> Concept:
        group = conj(Exists(role, f.to_concept()) for f in fillers)
        if self.norm.system.equivalent(group, Exists(role, TOP)):
            return TOP
        terms = []
        for r in range(len(fillers) + 1):
            for chosen in itertools.combinations(range(len(fillers)), r):
                kept = [Exists(role, f.to_concept()) for k, f in enumerate(fillers) if k not in chosen]
                inner = self.concept(conj(fillers[k].to_concept() for k in chosen))
                terms.append(conj(kept + [Exists(role, inner)]))
        return disj(terms)


def rho_e(c: Concept, system: DLSystem | None = None, bound: int | None = None) -> Concept:
    """One relaxation step on the grouped normal form; the result is re-normalized."""
    norm = _normalizer(c, system, bound)
    return normalize_grouping(_RhoE(norm).concept(c), norm.system)


__all__ = ["ELNormal", "normal_form", "normalize_grouping", "rho_e"]
