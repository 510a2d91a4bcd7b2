"""Description trees of EL concepts and the two tree-pruning relaxations."""

from __future__ import annotations

from dataclasses import dataclass

from ...errors import FragmentError
from .syntax import BOT, TOP, And, BotC, Concept, Exists, Name, TopC, conj, format_concept


@dataclass(frozen=True)
class DescriptionTree:
    """Node label set, role-labelled children, and a flag for an inconsistent node."""

    labels: frozenset = frozenset()
    children: tuple = ()  # ((role, DescriptionTree), ...)
    bottom: bool = False

    @property
    def depth(self) -> int:
        return 1 + max((t.depth for _, t in self.children), default=-1)

    @property
    def is_leaf(self) -> bool:
        return not self.children


def to_tree(c: Concept) -> DescriptionTree:
    labels: set[str] = set()
    children: list = []
    bottom = False
    stack = [c]
    while stack:
        x = stack.pop()
        if isinstance(x, And):
            stack.extend(reversed(x.args))
        elif isinstance(x, Name):
            labels.add(x.name)
        elif isinstance(x, Exists):
            children.append((x.role, to_tree(x.arg)))
        elif isinstance(x, BotC):
            bottom = True
        elif not isinstance(x, TopC):
            raise FragmentError(f"not an EL concept: {format_concept(c)}")
    return DescriptionTree(frozenset(labels), tuple(children), bottom)


def from_tree(t: DescriptionTree) -> Concept:
    parts: list[Concept] = [BOT] if t.bottom else []
    parts += [Name(a) for a in sorted(t.labels)]
    parts += [Exists(r, from_tree(s)) for r, s in t.children]
    return conj(parts)


def _prune_at(t: DescriptionTree, level: int) -> DescriptionTree:
    if level == 1:
        return DescriptionTree(t.labels, (), t.bottom)
    return DescriptionTree(t.labels, tuple((r, _prune_at(s, level - 1)) for r, s in t.children),
                           t.bottom)


def rho_depth(c: Concept) -> Concept:
    """Drop every node at maximal depth; a depth-0 concept becomes Top."""
    t = to_tree(c)
    if t.depth == 0:
        return TOP
    return from_tree(_prune_at(t, t.depth))


def _drop_leaves(t: DescriptionTree) -> DescriptionTree:
    kept = tuple((r, _drop_leaves(s)) for r, s in t.children if not s.is_leaf)
    return DescriptionTree(t.labels, kept, t.bottom)


def rho_leaves(c: Concept) -> Concept:
    """Remove all leaves with their incoming edges; a lone root becomes Top."""
    t = to_tree(c)
    if t.is_leaf:
        return TOP
    return from_tree(_drop_leaves(t))


__all__ = ["DescriptionTree", "to_tree", "from_tree", "rho_depth", "rho_leaves"]
