"""Named relaxations per logic, built against a concrete system and revision context."""

from __future__ import annotations

from typing import Any, Callable, Iterable

from .core import KnowledgeBase, SatisfactionSystem
from .errors import RelaxrevError
from .revision import Relaxation, trivial_relaxation

Factory = Callable[..., Relaxation]

_REGISTRY: dict[str, dict[str, Factory]] = {"PL": {}, "HCL": {}, "FOL": {}, "DL": {}}


def _family(system: SatisfactionSystem) -> str:
    return "DL" if system.logic.startswith("DL") else system.logic


def register(family: str, name: str):
    def deco(fn: Factory) -> Factory:
        _REGISTRY[family][name] = fn
        return fn
    return deco


def available(system_or_family: SatisfactionSystem | str) -> list[str]:
    fam = system_or_family if isinstance(system_or_family, str) else _family(system_or_family)
    return sorted(_REGISTRY.get(fam, {}))


def make_relaxation(name: str, system: SatisfactionSystem, params: dict | None = None,
                    old: Iterable | None = None, new: Iterable | None = None) -> Relaxation:
    """Look up ``name`` for the system's logic and bind its parameters.

    ``old`` / ``new`` are the knowledge bases of the revision at hand; the
    exception operators read their eligibility context from them.
    """
    fam = _family(system)
    table = _REGISTRY.get(fam, {})
    if name not in table:
        raise RelaxrevError(f"unknown operator {name!r} for {system.logic}; "
                            f"choose from {', '.join(sorted(table))}")
    return table[name](system, dict(params or {}),
                       KnowledgeBase(tuple(old or ())), KnowledgeBase(tuple(new or ())))


for _fam in _REGISTRY:
    register(_fam, "trivial")(lambda system, params, old, new: trivial_relaxation(system))


@register("PL", "hamming")
def _hamming(system, params, old, new):
    from .logics.pl import dilate
    return Relaxation("hamming", "PL", lambda f: dilate(system, f))


@register("HCL", "horn")
def _horn(system, params, old, new):
    from .logics.horn import horn_relax
    return Relaxation("horn", "HCL", lambda s: horn_relax(system, s))


@register("FOL", "quantifier")
def _quantifier(system, params, old, new):
    from .logics.fol import fol_relax
    return Relaxation("quantifier", "FOL", fol_relax)


def _dl_factory(name: str):
    def build(system, params: dict[str, Any], old: KnowledgeBase, new: KnowledgeBase) -> Relaxation:
        from .logics.dl import operators as ops
        exceptions = tuple(params.get("exceptions", ()))
        if name in ops.NEEDS_EXCEPTIONS and not exceptions:
            raise RelaxrevError(f"{name} needs an exception list")
        context = params.get("context", "old" if name in ops.RETRACTIONS else "new")
        if context == "new":
            within = system.kb_mask(new)
        elif context == "old":
            within = system.kb_mask(old)
        elif context in ("none", "all"):
            within = None
        else:
            raise RelaxrevError(f"context must be new, old or none, not {context!r}")
        apply = ops.axiom_operator(name, exceptions=exceptions, k=int(params.get("k", 1)),
                                   system=system, within=within, bound=params.get("bound"))
        return Relaxation(name, "DL", apply, exhaustive=name not in ops.NON_EXHAUSTIVE)
    return build


for _name in ("rho_top", "rho_depth", "rho_leaves", "rho_e", "rho_exceptions", "rho_dalal",
              "rho_cup", "rho_q", "kappa_bot", "kappa_exceptions", "kappa_dalal", "kappa_cap",
              "kappa_q"):
    register("DL", _name)(_dl_factory(_name))


__all__ = ["available", "make_relaxation", "register"]
