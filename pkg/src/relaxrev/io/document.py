"""Knowledge-base documents: a ``key: value`` header, ``---``, then sentences.

::

    logic: DL
    concepts: Tweety, bird, flies
    nonempty: Tweety
    ---
    Tweety [= bird
    bird [= flies

PL, FOL and DL bodies hold one sentence per line. A Horn sentence is a
block of clause lines; blocks are separated by blank lines. Lines starting
with ``#`` are comments everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from ..core import KnowledgeBase, SatisfactionSystem, default_bound
from ..errors import ParseError, SignatureError

LOGIC_NAMES = {"PL": "PL", "HCL": "HCL", "HORN": "HCL", "FOL": "FOL", "DL": "DL"}

# header keys per logic, in serialization order
HEADER_KEYS = {
    "PL": ("atoms",),
    "HCL": ("atoms",),
    "FOL": ("sorts", "funcs", "preds"),
    "DL": ("fragment", "concepts", "roles", "individuals", "nonempty", "exceptions", "empty-domain"),
}
COMMON_KEYS = ("logic", "name", "bound")


@dataclass(frozen=True)
class KBDocument:
    """A parsed document. ``signature`` is the logic's signature value; for DL
    ``exceptions`` is the ordered exception list and ``fragment`` the declared
    fragment (None when undeclared)."""

    logic: str
    signature: Any
    sentences: KnowledgeBase
    name: str | None = None
    bound: int | None = None
    fragment: str | None = None
    exceptions: tuple = ()
    declared: frozenset = field(default=frozenset(), compare=False)

    def system(self, bound: int | None = None) -> SatisfactionSystem:
        return build_system(self.logic, self.signature, self._bound(bound), self.fragment)

    def _bound(self, bound: int | None) -> int:
        if bound is not None:
            return bound
        return self.bound if self.bound is not None else default_bound()


# ---------------------------------------------------------------------------
# header


def _split_header(text: str) -> tuple[dict[str, tuple[int, str]], list[tuple[int, str]]]:
    lines = text.splitlines()
    header: dict[str, tuple[int, str]] = {}
    for i, raw in enumerate(lines):
        n = i + 1
        line = raw.strip()
        if line == "---":
            body = [(j + 1, lines[j]) for j in range(i + 1, len(lines))]
            return header, body
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError("expected 'key: value' in the header (or '---')", n, 1)
        key = key.strip().lower()
        if key in header:
            raise ParseError(f"duplicate header key {key!r}", n, 1)
        header[key] = (n, value.strip())
    raise ParseError("missing '---' line between header and sentences", len(lines) or 1, 1)


def _names(entry: tuple[int, str] | None) -> tuple[str, ...]:
    if entry is None:
        return ()
    return tuple(x.strip() for x in entry[1].split(",") if x.strip())


def _flag(entry: tuple[int, str] | None) -> bool:
    if entry is None:
        return False
    value = entry[1].lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0", ""):
        return False
    raise ParseError(f"expected true or false, got {entry[1]!r}", entry[0], 1)


def _body_lines(body: list[tuple[int, str]]) -> list[tuple[int, str]]:
    return [(n, t) for n, t in body if t.strip() and not t.strip().startswith("#")]


def _horn_blocks(body: list[tuple[int, str]]) -> list[list[tuple[int, str]]]:
    blocks: list[list[tuple[int, str]]] = [[]]
    for n, t in body:
        if t.strip().startswith("#"):
            continue
        if not t.strip():
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append((n, t))
    return [b for b in blocks if b]


# ---------------------------------------------------------------------------
# parse


def parse_document(text: str) -> KBDocument:
    header, body = _split_header(text)
    if "logic" not in header:
        raise ParseError("the header must declare 'logic:'", 1, 1)
    line, raw = header["logic"]
    logic = LOGIC_NAMES.get(raw.upper())
    if logic is None:
        raise ParseError(f"unknown logic {raw!r}; expected PL, HCL, FOL or DL", line, 1)
    allowed = set(COMMON_KEYS) | set(HEADER_KEYS[logic])
    for key, (n, _) in header.items():
        if key not in allowed:
            raise ParseError(f"header key {key!r} does not apply to {logic}", n, 1)
    bound = None
    if "bound" in header:
        n, value = header["bound"]
        try:
            bound = int(value)
        except ValueError:
            raise ParseError(f"bound must be an integer, got {value!r}", n, 1) from None
    name = header["name"][1] if "name" in header else None
    parser = {"PL": _parse_pl, "HCL": _parse_horn, "FOL": _parse_fol, "DL": _parse_dl}[logic]
    doc = parser(header, body)
    return replace(doc, name=name, bound=bound, declared=frozenset(header))


def _parse_pl(header, body) -> KBDocument:
    from ..logics.pl import PLSignature, atoms_of, parse_formula
    numbered = [(n, parse_formula(t, n, 1)) for n, t in _body_lines(body)]
    sentences = [f for _, f in numbered]
    atoms = _names(header.get("atoms"))
    if not atoms:
        seen: dict[str, None] = {}
        for f in sentences:
            for a in sorted(atoms_of(f)):
                seen.setdefault(a)
        atoms = tuple(seen) or ("p",)
    sig = PLSignature(atoms)
    _check_all(build_system("PL", sig, 0, None), numbered)
    return KBDocument("PL", sig, KnowledgeBase(tuple(sentences)))


def _parse_horn(header, body) -> KBDocument:
    from ..logics.horn import parse_horn
    from ..logics.pl import PLSignature
    numbered = [(block[0][0], parse_horn(block)) for block in _horn_blocks(body)]
    sentences = [s for _, s in numbered]
    atoms = _names(header.get("atoms"))
    if not atoms:
        seen: dict[str, None] = {}
        for s in sentences:
            for c in s.sorted_clauses():
                for a in sorted(c.body) + [c.head]:
                    seen.setdefault(a)
        atoms = tuple(seen) or ("p",)
    sig = PLSignature(atoms)
    _check_all(build_system("HCL", sig, 0, None), numbered)
    return KBDocument("HCL", sig, KnowledgeBase(tuple(sentences)))


def _parse_fol(header, body) -> KBDocument:
    from ..logics.fol import check_sentence, parse_sentence, parse_signature
    try:
        sig = parse_signature(header)
    except SignatureError as exc:
        raise ParseError(str(exc), header.get("sorts", (1, ""))[0], 1) from None
    out = []
    for n, t in _body_lines(body):
        s = parse_sentence(t, sig, n)
        try:
            check_sentence(sig, s)
        except SignatureError as exc:
            raise ParseError(str(exc), n, 1) from None
        out.append(s)
    return KBDocument("FOL", sig, KnowledgeBase(tuple(out)))


def _parse_dl(header, body) -> KBDocument:
    from ..logics.dl.syntax import (
        FRAGMENTS, DLSignature, parse_axiom, parse_concept, signature_of,
    )
    axioms = [(n, parse_axiom(t, n)) for n, t in _body_lines(body)]
    exceptions = []
    if "exceptions" in header:
        n, value = header["exceptions"]
        for part in value.split(","):
            if part.strip():
                exceptions.append(parse_concept(part.strip(), n, 1))
    fragment = None
    if "fragment" in header:
        n, value = header["fragment"]
        fragment = value.upper()
        if fragment not in FRAGMENTS:
            raise ParseError(f"fragment must be EL, ELU or ALC, got {value!r}", n, 1)
    inferred = signature_of([ax for _, ax in axioms], exceptions)
    concepts = _names(header.get("concepts")) or inferred.concepts
    roles = _names(header.get("roles")) if "roles" in header else inferred.roles
    individuals = _names(header.get("individuals")) if "individuals" in header else inferred.individuals
    try:
        sig = DLSignature(concepts, roles, individuals, _names(header.get("nonempty")),
                          _flag(header.get("empty-domain")))
        for e in exceptions:
            sig.check_concept(e)
    except SignatureError as exc:
        raise ParseError(str(exc), 1, 1) from None
    for n, ax in axioms:
        try:
            sig.check_axiom(ax)
        except SignatureError as exc:
            raise ParseError(str(exc), n, 1) from None
        if fragment is not None:
            from ..logics.dl.syntax import axiom_fragment, fragment_leq
            if not fragment_leq(axiom_fragment(ax), fragment):
                raise ParseError(f"axiom outside the declared fragment {fragment}", n, 1)
    return KBDocument("DL", sig, KnowledgeBase(tuple(ax for _, ax in axioms)),
                      fragment=fragment, exceptions=tuple(exceptions))


def _check_all(system: SatisfactionSystem, numbered) -> None:
    for n, s in numbered:
        try:
            system.check_sentence(s)
        except SignatureError as exc:
            raise ParseError(str(exc), n, 1) from None


def load_document(path: str | Path) -> KBDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def parse_sentence(doc: KBDocument, text: str) -> Any:
    """One sentence in the document's logic (a Horn sentence may use ``;`` between clauses)."""
    if doc.logic == "PL":
        from ..logics.pl import parse_formula
        return parse_formula(text)
    if doc.logic == "HCL":
        from ..logics.horn import parse_horn
        return parse_horn([(1, part) for part in text.split(";")])
    if doc.logic == "FOL":
        from ..logics.fol import parse_sentence as parse_fol
        return parse_fol(text, doc.signature)
    from ..logics.dl.syntax import parse_axiom
    return parse_axiom(text)


# ---------------------------------------------------------------------------
# serialize


def format_sentence(logic: str, sentence: Any) -> str:
    if logic == "PL":
        from ..logics.pl import format_formula
        return format_formula(sentence)
    if logic == "HCL":
        from ..logics.horn import format_horn
        return format_horn(sentence)
    if logic == "FOL":
        from ..logics.fol import format_sentence as fmt
        return fmt(sentence)
    from ..logics.dl.syntax import format_axiom
    return format_axiom(sentence)


def serialize_document(doc: KBDocument) -> str:
    lines = [f"logic: {doc.logic}"]
    if doc.name:
        lines.append(f"name: {doc.name}")
    if doc.bound is not None:
        lines.append(f"bound: {doc.bound}")
    sig = doc.signature
    if doc.logic in ("PL", "HCL"):
        lines.append(f"atoms: {', '.join(sig.atoms)}")
    elif doc.logic == "FOL":
        from ..logics.fol import format_signature
        for key, value in format_signature(sig).items():
            if value or key == "sorts":
                lines.append(f"{key}: {value}")
    else:
        from ..logics.dl.syntax import format_concept
        if doc.fragment:
            lines.append(f"fragment: {doc.fragment}")
        lines.append(f"concepts: {', '.join(sig.concepts)}")
        for key, values in (("roles", sig.roles), ("individuals", sig.individuals),
                            ("nonempty", sig.nonempty)):
            if values:
                lines.append(f"{key}: {', '.join(values)}")
        if doc.exceptions:
            lines.append(f"exceptions: {', '.join(format_concept(e) for e in doc.exceptions)}")
        if sig.empty_domain:
            lines.append("empty-domain: true")
    lines.append("---")
    sep = "\n\n" if doc.logic == "HCL" else "\n"
    body = sep.join(format_sentence(doc.logic, s) for s in doc.sentences)
    return "\n".join(lines) + "\n" + (body + "\n" if body else "")


# ---------------------------------------------------------------------------
# systems


def build_system(logic: str, signature: Any, bound: int, fragment: str | None) -> SatisfactionSystem:
    if logic == "PL":
        from ..logics.pl import PLSystem
        return PLSystem(signature)
    if logic == "HCL":
        from ..logics.horn import HornSystem
        return HornSystem(signature)
    if logic == "FOL":
        from ..logics.fol import FOLSystem
        return FOLSystem(signature, bound)
    from ..logics.dl.semantics import DLSystem
    return DLSystem(signature, bound, fragment or "ALC")


def merge_documents(old: KBDocument, new: KBDocument) -> tuple[Any, str | None, tuple]:
    """Joint signature, fragment and exception list for revising ``old`` by ``new``."""
    if old.logic != new.logic:
        raise SignatureError(f"cannot revise a {old.logic} base by a {new.logic} base")
    if old.logic in ("PL", "HCL"):
        from ..logics.pl import PLSignature
        atoms = tuple(dict.fromkeys(old.signature.atoms + new.signature.atoms))
        return PLSignature(atoms), None, ()
    if old.logic == "FOL":
        from ..logics.fol import FOLSignature
        a, b = old.signature, new.signature
        return FOLSignature(tuple(dict.fromkeys(a.sorts + b.sorts)),
                            tuple(dict.fromkeys(a.funcs + b.funcs)),
                            tuple(dict.fromkeys(a.preds + b.preds))), None, ()
    from ..logics.dl.syntax import FRAGMENTS
    frags = [f for f in (old.fragment, new.fragment) if f]
    fragment = max(frags, key=FRAGMENTS.index) if frags else None
    exceptions = tuple(dict.fromkeys(old.exceptions + new.exceptions))
    return old.signature.merge(new.signature), fragment, exceptions


def revision_system(old: KBDocument, new: KBDocument, bound: int | None = None) -> SatisfactionSystem:
    sig, fragment, _ = merge_documents(old, new)
    b = bound if bound is not None else old.bound if old.bound is not None else new.bound
    return build_system(old.logic, sig, b if b is not None else default_bound(), fragment)


__all__ = [
    "KBDocument", "parse_document", "serialize_document", "load_document", "parse_sentence",
    "format_sentence", "build_system", "merge_documents", "revision_system",
]
