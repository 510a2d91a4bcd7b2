"""Many-sorted first-order logic over bounded finite structures.

Sentences are stored as a disjunction of prenex blocks (``PrenexSentence``).
General formulas are accepted by the parser and put into this form right
away, with bound variables renamed ``x0, x1, ...`` in prefix order.

Structures have carriers ``{0, ..., n-1}`` per sort, ``1 <= n <= bound``, and
raw function/predicate tables; no isomorphism reduction is done.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Sequence

from .._lexer import Cursor, Lexer
from ..core import SatisfactionSystem, default_bound
from ..errors import EnumerationLimitError, ParseError, ShapeError, SignatureError

FORALL, EXISTS = "forall", "exists"


# ---------------------------------------------------------------------------
# syntax


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple = ()


Term = Var | App


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Verum:
    pass


@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    q: str
    var: str
    sort: str
    body: "Formula"


Formula = Pred | Verum | Falsum | Not | And | Or | Quant


@dataclass(frozen=True)
class Block:
    """``Q1 x1:s1 ... Qn xn:sn . matrix`` with a quantifier-free matrix."""

    prefix: tuple = ()
    matrix: Formula = Verum()

    @property
    def quantifiers(self) -> tuple[str, ...]:
        return tuple(q for q, _, _ in self.prefix)


@dataclass(frozen=True)
class PrenexSentence:
    blocks: tuple

    def __str__(self) -> str:
        return format_sentence(self)


TAU = PrenexSentence((Block((), Verum()),))


def is_tautology_syntax(s: PrenexSentence) -> bool:
    return any(b.matrix == Verum() and not b.prefix for b in s.blocks)


# ---------------------------------------------------------------------------
# signature


@dataclass(frozen=True)
class FOLSignature:
    sorts: tuple[str, ...]
    funcs: tuple = ()  # (name, arg sorts, result sort)
    preds: tuple = ()  # (name, arg sorts)

    def __post_init__(self):
        if not self.sorts:
            raise SignatureError("at least one sort is required")
        names = [f[0] for f in self.funcs] + [p[0] for p in self.preds]
        if len(set(names)) != len(names):
            raise SignatureError("function and predicate names must be distinct")
        known = set(self.sorts)
        for name, args, res in self.funcs:
            if not set(args) | {res} <= known:
                raise SignatureError(f"function {name} uses an undeclared sort")
        for name, args in self.preds:
            if not set(args) <= known:
                raise SignatureError(f"predicate {name} uses an undeclared sort")

    @property
    def func_map(self) -> dict:
        return {n: (tuple(a), r) for n, a, r in self.funcs}

    @property
    def pred_map(self) -> dict:
        return {n: tuple(a) for n, a in self.preds}


_DECL = re.compile(r"\s*([^\s(),]+)\s*\(([^)]*)\)\s*(?:->\s*([A-Za-z_][A-Za-z0-9_]*))?\s*(?:,|$)")


def _parse_decls(text: str, with_result: bool, line: int) -> list:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _DECL.match(text, pos)
        if m is None or (with_result and m.group(3) is None) or (not with_result and m.group(3)):
            raise ParseError("malformed declaration", line, pos + 1)
        args = tuple(a.strip() for a in m.group(2).split(",") if a.strip())
        out.append((m.group(1), args, m.group(3)) if with_result else (m.group(1), args))
        pos = m.end()
    return out


def parse_signature(header: dict[str, tuple[int, str]]) -> FOLSignature:
    """Build a signature from header entries ``sorts``, ``funcs``, ``preds``."""
    if "sorts" not in header:
        raise ParseError("FOL documents need a 'sorts:' header", 1, 1)
    line, text = header["sorts"]
    sorts = tuple(s.strip() for s in text.split(",") if s.strip())
    funcs = _parse_decls(header["funcs"][1], True, header["funcs"][0]) if "funcs" in header else []
    preds = _parse_decls(header["preds"][1], False, header["preds"][0]) if "preds" in header else []
    return FOLSignature(sorts, tuple(funcs), tuple(preds))


def format_signature(sig: FOLSignature) -> dict[str, str]:
    return {
        "sorts": ", ".join(sig.sorts),
        "funcs": ", ".join(f"{n}({', '.join(a)}) -> {r}" for n, a, r in sig.funcs),
        "preds": ", ".join(f"{n}({', '.join(a)})" for n, a in sig.preds),
    }


# ---------------------------------------------------------------------------
# parser

_LEXER = Lexer([
    ("ARROW", r"->"),
    ("OP", r"[~&|().,:=]"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
])


class _Parser:
    def __init__(self, sig: FOLSignature, cur: Cursor):
        self.sig = sig
        self.funcs = sig.func_map
        self.preds = sig.pred_map
        self.cur = cur
        self.scope: list[tuple[str, str]] = []

    def formula(self) -> Formula:
        left = self.disj()
        if self.cur.accept("ARROW"):
            return Or(Not(left), self.formula())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.cur.accept("OP", "|"):
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.cur.accept("OP", "&"):
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        cur = self.cur
        if cur.accept("OP", "~"):
            return Not(self.unary())
        if cur.at("IDENT", FORALL) or cur.at("IDENT", EXISTS):
            q = cur.tok.text
            cur.i += 1
            var = cur.expect("IDENT", what="a variable").text
            if cur.accept("OP", ":"):
                sort = cur.expect("IDENT", what="a sort").text
                if sort not in self.sig.sorts:
                    raise ParseError(f"unknown sort {sort!r}", cur.tokens[cur.i - 1].line,
                                     cur.tokens[cur.i - 1].column)
            elif len(self.sig.sorts) == 1:
                sort = self.sig.sorts[0]
            else:
                cur.fail("expected ':' and a sort")
            cur.expect("OP", ".")
            self.scope.append((var, sort))
            body = self.formula()
            self.scope.pop()
            return Quant(q, var, sort, body)
        if cur.accept("IDENT", "true"):
            return Verum()
        if cur.accept("IDENT", "false"):
            return Falsum()
        if cur.at("OP", "("):
            # parenthesized formula, unless it is a parenthesized term before '='
            save = cur.i
            cur.i += 1
            try:
                inner = self.formula()
                cur.expect("OP", ")")
                if not cur.at("OP", "="):
                    return inner
            except ParseError:
                pass
            cur.i = save
        tok = cur.tok
        if tok.kind == "IDENT" and tok.text in self.preds and not self._bound(tok.text):
            cur.i += 1
            args = self.args(tok.text, self.preds[tok.text])
            return Pred(tok.text, args)
        left, lsort = self.term()
        eq = cur.tok
        cur.expect("OP", "=", what="'=' or a predicate")
        right, rsort = self.term()
        if "=" not in self.preds:
            raise ParseError("'=' is used but not declared as a predicate", eq.line, eq.column)
        if (lsort, rsort) != self.preds["="]:
            raise ParseError("'=' applied to terms of the wrong sorts", eq.line, eq.column)
        return Pred("=", (left, right))

    def _bound(self, name: str) -> str | None:
        for v, s in reversed(self.scope):
            if v == name:
                return s
        return None

    def args(self, name: str, sorts: tuple) -> tuple:
        cur = self.cur
        if not sorts:
            if cur.accept("OP", "("):
                cur.expect("OP", ")")
            return ()
        open_tok = cur.expect("OP", "(")
        terms = []
        while True:
            t, s = self.term()
            terms.append((t, s))
            if not cur.accept("OP", ","):
                break
        cur.expect("OP", ")")
        if len(terms) != len(sorts):
            raise ParseError(f"{name} expects {len(sorts)} arguments", open_tok.line, open_tok.column)
        for (t, s), want in zip(terms, sorts):
            if s != want:
                raise ParseError(f"argument of sort {s} where {name} expects {want}",
                                 open_tok.line, open_tok.column)
        return tuple(t for t, _ in terms)

    def term(self) -> tuple[Term, str]:
        cur = self.cur
        if cur.accept("OP", "("):
            t = self.term()
            cur.expect("OP", ")")
            return t
        tok = cur.expect("IDENT", what="a term")
        sort = self._bound(tok.text)
        if sort is not None:
            return Var(tok.text), sort
        if tok.text in self.funcs:
            arg_sorts, res = self.funcs[tok.text]
            return App(tok.text, self.args(tok.text, arg_sorts)), res
        raise ParseError(f"unknown symbol {tok.text!r}", tok.line, tok.column)


def parse_formula(text: str, sig: FOLSignature, line: int = 1) -> Formula:
    cur = Cursor(_LEXER.tokenize(text, line, 1))
    f = _Parser(sig, cur).formula()
    cur.done()
    return f


def parse_sentence(text: str, sig: FOLSignature, line: int = 1) -> PrenexSentence:
    return prenex(parse_formula(text, sig, line))


# ---------------------------------------------------------------------------
# prenex form


def _rename_apart(f: Formula, env: dict, counter: list) -> Formula:
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_rename_term(t, env) for t in f.args))
    if isinstance(f, (Verum, Falsum)):
        return f
    if isinstance(f, Not):
        return Not(_rename_apart(f.arg, env, counter))
    if isinstance(f, (And, Or)):
        return type(f)(_rename_apart(f.left, env, counter), _rename_apart(f.right, env, counter))
    fresh = f"_v{counter[0]}"
    counter[0] += 1
    return Quant(f.q, fresh, f.sort, _rename_apart(f.body, {**env, f.var: fresh}, counter))


def _rename_term(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    return App(t.func, tuple(_rename_term(a, env) for a in t.args))


def _pull(f: Formula) -> tuple[list, Formula]:
    if isinstance(f, (Pred, Verum, Falsum)):
        return [], f
    if isinstance(f, Not):
        p, m = _pull(f.arg)
        flipped = [(EXISTS if q == FORALL else FORALL, v, s) for q, v, s in p]
        return flipped, Not(m)
    if isinstance(f, (And, Or)):
        pa, ma = _pull(f.left)
        pb, mb = _pull(f.right)
        return pa + pb, type(f)(ma, mb)
    p, m = _pull(f.body)
    return [(f.q, f.var, f.sort)] + p, m


def _disjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


def _free_vars(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        out: set[str] = set()
        for t in f.args:
            out |= _term_vars(t)
        return out
    if isinstance(f, (Verum, Falsum)):
        return set()
    if isinstance(f, Not):
        return _free_vars(f.arg)
    if isinstance(f, (And, Or)):
        return _free_vars(f.left) | _free_vars(f.right)
    return _free_vars(f.body) - {f.var}


def _term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= _term_vars(a)
    return out


def canonical_block(prefix: Sequence, matrix: Formula) -> Block:
    env = {v: f"x{i}" for i, (_, v, _) in enumerate(prefix)}
    new_prefix = tuple((q, env[v], s) for q, v, s in prefix)
    return Block(new_prefix, _subst(matrix, env))


def _subst(f: Formula, env: dict) -> Formula:
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_rename_term(t, env) for t in f.args))
    if isinstance(f, (Verum, Falsum)):
        return f
    if isinstance(f, Not):
        return Not(_subst(f.arg, env))
    if isinstance(f, (And, Or)):
        return type(f)(_subst(f.left, env), _subst(f.right, env))
    raise ShapeError("quantifier inside a matrix")


def prenex(f: Formula) -> PrenexSentence:
    """Disjunction of prenex blocks equivalent to the closed formula ``f``."""
    if _free_vars(f):
        raise ShapeError(f"free variables: {', '.join(sorted(_free_vars(f)))}")
    f = _rename_apart(f, {}, [0])
    blocks = []
    for d in _disjuncts(f):
        p, m = _pull(d)
        blocks.append(canonical_block(p, m))
    return PrenexSentence(tuple(blocks))


def block_formula(b: Block) -> Formula:
    out = b.matrix
    for q, v, s in reversed(b.prefix):
        out = Quant(q, v, s, out)
    return out


def sentence_formula(s: PrenexSentence) -> Formula:
    out = block_formula(s.blocks[0])
    for b in s.blocks[1:]:
        out = Or(out, block_formula(b))
    return out


# ---------------------------------------------------------------------------
# printing

_OR, _AND, _NOT, _ATOM = 2, 3, 4, 5


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.func
    return f"{t.func}({', '.join(format_term(a) for a in t.args)})"


def _fmt(f: Formula) -> tuple[str, int]:
    if isinstance(f, Verum):
        return "true", _ATOM
    if isinstance(f, Falsum):
        return "false", _ATOM
    if isinstance(f, Pred):
        if f.name == "=" and len(f.args) == 2:
            return f"{format_term(f.args[0])} = {format_term(f.args[1])}", _ATOM
        if not f.args:
            return f.name, _ATOM
        return f"{f.name}({', '.join(format_term(a) for a in f.args)})", _ATOM
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, _NOT), _NOT
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _AND + 1)}", _AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}", _OR
    return f"{f.q} {f.var}:{f.sort}. {_fmt(f.body)[0]}", 0


def _wrap(f: Formula, at_least: int) -> str:
    text, prec = _fmt(f)
    return text if prec >= at_least else f"({text})"


def format_formula(f: Formula) -> str:
    return _fmt(f)[0]


def format_block(b: Block) -> str:
    head = "".join(f"{q} {v}:{s}. " for q, v, s in b.prefix)
    return head + format_formula(b.matrix)


def format_sentence(s: PrenexSentence) -> str:
    if len(s.blocks) == 1:
        return format_block(s.blocks[0])
    return " | ".join(f"({format_block(b)})" for b in s.blocks)


# ---------------------------------------------------------------------------
# structures and evaluation


@dataclass
class FOLStructure:
    sizes: dict  # sort -> carrier size
    funcs: dict = field(default_factory=dict)  # name -> {args tuple: value}
    preds: dict = field(default_factory=dict)  # name -> frozenset of tuples

    def carrier(self, sort: str) -> range:
        return range(self.sizes[sort])


def eval_term(m: FOLStructure, t: Term, env: dict) -> int:
    if isinstance(t, Var):
        return env[t.name]
    return m.funcs[t.func][tuple(eval_term(m, a, env) for a in t.args)]


def eval_matrix(m: FOLStructure, f: Formula, env: dict) -> bool:
    if isinstance(f, Pred):
        return tuple(eval_term(m, a, env) for a in f.args) in m.preds[f.name]
    if isinstance(f, Not):
        return not eval_matrix(m, f.arg, env)
    if isinstance(f, And):
        return eval_matrix(m, f.left, env) and eval_matrix(m, f.right, env)
    if isinstance(f, Or):
        return eval_matrix(m, f.left, env) or eval_matrix(m, f.right, env)
    if isinstance(f, Verum):
        return True
    if isinstance(f, Falsum):
        return False
    raise ShapeError("quantifier inside a matrix")


def _eval_block(m: FOLStructure, b: Block) -> bool:
    """Expand the prefix by iterating over carrier tuples, innermost first."""

    def go(i: int, env: dict) -> bool:
        if i == len(b.prefix):
            return eval_matrix(m, b.matrix, env)
        q, v, s = b.prefix[i]
        results = (go(i + 1, {**env, v: d}) for d in m.carrier(s))
        return all(results) if q == FORALL else any(results)

    return go(0, {})


def eval_fol(m: FOLStructure, s: PrenexSentence) -> bool:
    return any(_eval_block(m, b) for b in s.blocks)


def eval_formula(m: FOLStructure, f: Formula, env: dict | None = None) -> bool:
    """Naive recursive evaluator on general (non-prenex) formulas."""
    env = env or {}
    if isinstance(f, Quant):
        vals = (eval_formula(m, f.body, {**env, f.var: d}) for d in m.carrier(f.sort))
        return all(vals) if f.q == FORALL else any(vals)
    if isinstance(f, Not):
        return not eval_formula(m, f.arg, env)
    if isinstance(f, And):
        return eval_formula(m, f.left, env) and eval_formula(m, f.right, env)
    if isinstance(f, Or):
        return eval_formula(m, f.left, env) or eval_formula(m, f.right, env)
    return eval_matrix(m, f, env)


class _SizeBlock:
    """All structures sharing one tuple of carrier sizes, as a mixed-radix range."""

    def __init__(self, sig: FOLSignature, sizes: tuple[int, ...]):
        self.sizes = dict(zip(sig.sorts, sizes))
        self.tables = []  # (kind, name, arg tuples, radix)
        for name, args, res in sig.funcs:
            tuples = list(itertools.product(*(range(self.sizes[a]) for a in args)))
            self.tables.append(("f", name, tuples, self.sizes[res]))
        for name, args in sig.preds:
            tuples = list(itertools.product(*(range(self.sizes[a]) for a in args)))
            self.tables.append(("p", name, tuples, 2))
        self.count = prod(radix ** len(tuples) for _, _, tuples, radix in self.tables)

    def decode(self, local: int) -> FOLStructure:
        m = FOLStructure(dict(self.sizes))
        for kind, name, tuples, radix in self.tables:
            span = radix ** len(tuples)
            code, local = local % span, local // span
            digits = []
            for _ in tuples:
                digits.append(code % radix)
                code //= radix
            if kind == "f":
                m.funcs[name] = dict(zip(tuples, digits))
            else:
                m.preds[name] = frozenset(t for t, d in zip(tuples, digits) if d)
        return m

    def encode(self, m: FOLStructure) -> int:
        out = 0
        scale = 1
        for kind, name, tuples, radix in self.tables:
            code = 0
            for j, t in enumerate(tuples):
                d = m.funcs[name][t] if kind == "f" else int(t in m.preds[name])
                code += d * radix ** j
            out += code * scale
            scale *= radix ** len(tuples)
        return out


DEFAULT_CEILING = 200_000


def _size_blocks(sig: FOLSignature, bound: int) -> list[_SizeBlock]:
    if bound < 1:
        raise EnumerationLimitError("FOL structures need bound >= 1 (carriers are nonempty)")
    return [_SizeBlock(sig, sizes)
            for sizes in itertools.product(range(1, bound + 1), repeat=len(sig.sorts))]


def count_structures(sig: FOLSignature, bound: int) -> int:
    return sum(b.count for b in _size_blocks(sig, bound))


def enumerate_structures(sig: FOLSignature, bound: int,
                         ceiling: int = DEFAULT_CEILING) -> Iterator[FOLStructure]:
    blocks = _size_blocks(sig, bound)
    total = sum(b.count for b in blocks)
    if total > ceiling:
        raise EnumerationLimitError(f"{total} structures exceed the ceiling {ceiling}")
    for b in blocks:
        for i in range(b.count):
            yield b.decode(i)


class FOLSystem(SatisfactionSystem):
    logic = "FOL"

    def __init__(self, signature: FOLSignature, bound: int | None = None,
                 ceiling: int = DEFAULT_CEILING):
        super().__init__()
        self.signature = signature
        self.bound = default_bound() if bound is None else bound
        self._blocks = _size_blocks(signature, self.bound)
        self._offsets = list(itertools.accumulate([0] + [b.count for b in self._blocks]))
        self._size = self._offsets[-1]
        if self._size > ceiling:
            raise EnumerationLimitError(f"{self._size} structures exceed the ceiling {ceiling}")
        self._universe = (1 << self._size) - 1
        self._structures: list[FOLStructure] | None = None

    @property
    def size(self) -> int:
        return self._size

    @property
    def universe(self) -> int:
        return self._universe

    @property
    def trivial(self) -> int:
        return 0

    def structures(self) -> list[FOLStructure]:
        if self._structures is None:
            self._structures = [b.decode(i) for b in self._blocks for i in range(b.count)]
        return self._structures

    def model_at(self, index: int) -> FOLStructure:
        if self._structures is not None:
            return self._structures[index]
        for k, b in enumerate(self._blocks):
            if index < self._offsets[k + 1]:
                return b.decode(index - self._offsets[k])
        raise IndexError(index)

    def index_of(self, model: FOLStructure) -> int:
        sizes = tuple(model.sizes[s] for s in self.signature.sorts)
        for k, b in enumerate(self._blocks):
            if tuple(b.sizes[s] for s in self.signature.sorts) == sizes:
                return self._offsets[k] + b.encode(model)
        raise SignatureError("structure carriers exceed the bound")

    def check_sentence(self, sentence: PrenexSentence) -> None:
        check_sentence(self.signature, sentence)

    def holds(self, model: FOLStructure, sentence: PrenexSentence) -> bool:
        return eval_fol(model, sentence)

    def _compute_mask(self, sentence: PrenexSentence) -> int:
        bits = 0
        for i, m in enumerate(self.structures()):
            if eval_fol(m, sentence):
                bits |= 1 << i
        return bits

    def tautology(self) -> PrenexSentence:
        return TAU

    def format_sentence(self, sentence: PrenexSentence) -> str:
        return format_sentence(sentence)

    def format_model(self, m: FOLStructure) -> dict:
        return {
            "carriers": dict(m.sizes),
            "funcs": {n: {",".join(map(str, k)): v for k, v in sorted(t.items())}
                      for n, t in m.funcs.items()},
            "preds": {n: sorted(list(t) for t in ext) for n, ext in m.preds.items()},
        }


def check_sentence(sig: FOLSignature, s: PrenexSentence) -> None:
    funcs, preds = sig.func_map, sig.pred_map

    def term_sort(t: Term, env: dict) -> str:
        if isinstance(t, Var):
            if t.name not in env:
                raise SignatureError(f"free variable {t.name}")
            return env[t.name]
        if t.func not in funcs:
            raise SignatureError(f"unknown function {t.func}")
        args, res = funcs[t.func]
        if tuple(term_sort(a, env) for a in t.args) != args:
            raise SignatureError(f"ill-sorted application of {t.func}")
        return res

    def walk(f: Formula, env: dict) -> None:
        if isinstance(f, Pred):
            if f.name not in preds:
                raise SignatureError(f"unknown predicate {f.name}")
            if tuple(term_sort(a, env) for a in f.args) != preds[f.name]:
                raise SignatureError(f"ill-sorted atom {f.name}")
        elif isinstance(f, Not):
            walk(f.arg, env)
        elif isinstance(f, (And, Or)):
            walk(f.left, env)
            walk(f.right, env)
        elif isinstance(f, Quant):
            raise SignatureError("quantifier inside a prenex matrix")

    for b in s.blocks:
        env = {}
        for _, v, srt in b.prefix:
            if srt not in sig.sorts:
                raise SignatureError(f"unknown sort {srt}")
            env[v] = srt
        walk(b.matrix, env)


# ---------------------------------------------------------------------------
# relaxation


def fol_relax(s: PrenexSentence) -> PrenexSentence:
    """Flip one universal quantifier to existential, in every possible way.

    An all-existential block (or a tautology) becomes the tautology, which
    absorbs the whole disjunction.
    """
    if not isinstance(s, PrenexSentence):
        raise ShapeError("expected a prenex sentence")
    if is_tautology_syntax(s):
        return TAU
    out: list[Block] = []
    for b in s.blocks:
        flips = [i for i, (q, _, _) in enumerate(b.prefix) if q == FORALL]
        if not flips:
            return TAU
        for i in flips:
            prefix = list(b.prefix)
            _, v, srt = prefix[i]
            prefix[i] = (EXISTS, v, srt)
            nb = Block(tuple(prefix), b.matrix)
            if nb not in out:
                out.append(nb)
    return PrenexSentence(tuple(out))


def random_sentence(rng, sig: FOLSignature, max_vars: int = 2, max_depth: int = 2) -> PrenexSentence:
    """Random general formula (nested quantifiers allowed), prenexed."""
    return prenex(random_formula(rng, sig, max_vars, max_depth))


def random_formula(rng, sig: FOLSignature, max_vars: int = 2, max_depth: int = 2) -> Formula:
    sort = sig.sorts[0]
    counter = [0]

    def atom(scope: list[str]) -> Formula:
        name, args = rng.choice(list(sig.preds))
        if args and not scope:
            return rng.choice([Verum(), Falsum()])
        return Pred(name, tuple(Var(rng.choice(scope)) for _ in args))

    def go(d: int, scope: list[str], budget: int) -> Formula:
        roll = rng.random()
        if budget > 0 and (not scope or roll < 0.35):
            v = f"y{counter[0]}"
            counter[0] += 1
            return Quant(rng.choice([FORALL, EXISTS]), v, sort, go(d, scope + [v], budget - 1))
        if d == 0 or roll < 0.5:
            return atom(scope)
        op = rng.choice(["~", "&", "|"])
        if op == "~":
            return Not(go(d - 1, scope, budget))
        return (And if op == "&" else Or)(go(d - 1, scope, budget), go(d - 1, scope, budget))

    return go(max_depth, [], max_vars)


__all__ = [
    "Var", "App", "Pred", "Verum", "Falsum", "Not", "And", "Or", "Quant", "Block",
    "PrenexSentence", "TAU", "FOLSignature", "FOLStructure", "FOLSystem",
    "parse_signature", "format_signature", "parse_formula", "parse_sentence",
    "prenex", "format_sentence", "format_formula", "eval_fol", "eval_formula",
    "enumerate_structures", "count_structures", "fol_relax", "random_sentence",
    "random_formula", "sentence_formula", "FORALL", "EXISTS",
]
