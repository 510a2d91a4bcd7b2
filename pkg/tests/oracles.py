"""Brute-force reference implementations used to cross-check the library.

Nothing here imports library semantics: every evaluator walks the AST by
class name and enumerates models with itertools directly.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# propositional


def pl_truth(f, val: dict) -> bool:
    kind = type(f).__name__
    if kind == "Atom":
        return bool(val[f.name])
    if kind == "Not":
        return not pl_truth(f.arg, val)
    if kind == "Or":
        return pl_truth(f.left, val) or pl_truth(f.right, val)
    raise TypeError(kind)


def pl_valuations(atoms: Sequence[str]) -> list[tuple[int, ...]]:
    """All valuations, first atom most significant (so index order is binary order)."""
    return list(itertools.product((0, 1), repeat=len(atoms)))


def pl_models(atoms: Sequence[str], formulas: Iterable) -> set[tuple[int, ...]]:
    fs = list(formulas)
    return {v for v in pl_valuations(atoms)
            if all(pl_truth(f, dict(zip(atoms, v))) for f in fs)}


def hamming_ball(models: set, atoms: Sequence[str]) -> set:
    out = set()
    for v in pl_valuations(atoms):
        if any(sum(a != b for a, b in zip(v, m)) <= 1 for m in models):
            out.add(v)
    return out


def horn_truth(sentence, val: dict) -> bool:
    return all(not all(val[a] for a in c.body) or val[c.head] for c in sentence.clauses)


def intersection_closure(models: set) -> set:
    out = set(models)
    while True:
        new = {tuple(a & b for a, b in zip(x, y)) for x in out for y in out} - out
        if not new:
            return out
        out |= new


# ---------------------------------------------------------------------------
# description logic


def dl_eval(c, dom: frozenset, names: dict, roles: dict) -> frozenset:
    kind = type(c).__name__
    if kind == "TopC":
        return dom
    if kind == "BotC":
        return frozenset()
    if kind == "Name":
        return names[c.name]
    if kind == "Not":
        return dom - dl_eval(c.arg, dom, names, roles)
    if kind == "And":
        out = dom
        for a in c.args:
            out &= dl_eval(a, dom, names, roles)
        return out
    if kind == "Or":
        out = frozenset()
        for a in c.args:
            out |= dl_eval(a, dom, names, roles)
        return out
    rel = roles[c.role] if c.role != "r_top" else frozenset(itertools.product(dom, dom))
    inner = dl_eval(c.arg, dom, names, roles)
    if kind == "Exists":
        return frozenset(x for x in dom if any((x, y) in rel for y in inner))
    if kind == "Forall":
        return frozenset(x for x in dom if all(y in inner for y in dom if (x, y) in rel))
    raise TypeError(kind)


def _subsets(items: Sequence) -> list[frozenset]:
    return [frozenset(s) for r in range(len(items) + 1) for s in itertools.combinations(items, r)]


def dl_interpretations(concepts: Sequence[str], roles: Sequence[str], bound: int):
    """Yield ``(dom, names, roles)`` for every interpretation with 1..bound elements."""
    for n in range(1, bound + 1):
        dom = frozenset(range(n))
        sets = _subsets(range(n))
        rels = _subsets(list(itertools.product(range(n), repeat=2)))
        for ext in itertools.product(sets, repeat=len(concepts)):
            for rex in itertools.product(rels, repeat=len(roles)):
                yield dom, dict(zip(concepts, ext)), dict(zip(roles, rex))


def dl_names(c, out=None) -> tuple[set, set]:
    out = out or (set(), set())
    kind = type(c).__name__
    if kind == "Name":
        out[0].add(c.name)
    elif kind == "Not":
        dl_names(c.arg, out)
    elif kind in ("And", "Or"):
        for a in c.args:
            dl_names(a, out)
    elif kind in ("Exists", "Forall"):
        if c.role != "r_top":
            out[1].add(c.role)
        dl_names(c.arg, out)
    return out


def dl_subsumed(c, d, bound: int = 2, serial: bool = False) -> bool:
    cs, rs = dl_names(c)
    dl_names(d, (cs, rs))
    for dom, names, roles in dl_interpretations(sorted(cs), sorted(rs), bound):
        if serial and any(not all(any((x, y) in r for y in dom) for x in dom) for r in roles.values()):
            continue
        if not dl_eval(c, dom, names, roles) <= dl_eval(d, dom, names, roles):
            return False
    return True


# ---------------------------------------------------------------------------
# first-order


def fol_term(t, m, env):
    if type(t).__name__ == "Var":
        return env[t.name]
    return m.funcs[t.func][tuple(fol_term(a, m, env) for a in t.args)]


def fol_truth(f, m, env=None) -> bool:
    env = env or {}
    kind = type(f).__name__
    if kind == "Pred":
        return tuple(fol_term(a, m, env) for a in f.args) in m.preds[f.name]
    if kind == "Verum":
        return True
    if kind == "Falsum":
        return False
    if kind == "Not":
        return not fol_truth(f.arg, m, env)
    if kind == "And":
        return fol_truth(f.left, m, env) and fol_truth(f.right, m, env)
    if kind == "Or":
        return fol_truth(f.left, m, env) or fol_truth(f.right, m, env)
    if kind == "Quant":
        vals = [fol_truth(f.body, m, {**env, f.var: d}) for d in range(m.sizes[f.sort])]
        return all(vals) if f.q == "forall" else any(vals)
    raise TypeError(kind)


# ---------------------------------------------------------------------------
# revision by exhaustive vector search


def ladders(system, relaxation, kb, cap: int) -> list[list[int]]:
    """Model masks of ρ^k φ for k = 0..cap, stopping once the full space is reached."""
    out = []
    for phi in kb:
        masks = [system.mask(phi)]
        cur = phi
        while masks[-1] != system.universe and len(masks) <= cap:
            nxt = relaxation(cur)
            if nxt == cur:
                break
            cur = nxt
            masks.append(system.mask(cur))
        out.append(masks)
    return out


def vector_models(ladder: list[list[int]], vec: Sequence[int], universe: int) -> int:
    bits = universe
    for masks, k in zip(ladder, vec):
        bits &= masks[min(k, len(masks) - 1)]
    return bits


def brute_minimal(system, relaxation, old, new, cap: int = 8):
    """(least total, all vectors of that total meeting Mod(new) non-trivially)."""
    ladder = ladders(system, relaxation, old, cap)
    target = system.kb_mask(new) & system.nontrivial
    box = [range(len(m)) for m in ladder]
    hits = [v for v in itertools.product(*box)
            if vector_models(ladder, v, system.universe) & target]
    if not hits:
        return None, []
    best = min(sum(v) for v in hits)
    return best, sorted(v for v in hits if sum(v) == best)


def brute_coherent(system, relaxation, old, new, cap: int = 8):
    """Join of the minimal vectors of every model-superset context of Mod(new)."""
    ladder = ladders(system, relaxation, old, cap)
    best, _ = brute_minimal(system, relaxation, old, new, cap)
    out = [0] * len(ladder)
    for x in range(system.size):
        if not system.nontrivial >> x & 1:
            continue
        entry = [next(k for k, m in enumerate(ms) if m >> x & 1) if ms[-1] >> x & 1 else None
                 for ms in ladder]
        if None in entry or sum(entry) > best:
            continue
        out = [max(a, b) for a, b in zip(out, entry)]
    return tuple(out)
