import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from relaxrev.errors import EnumerationLimitError, FragmentError, ParseError, SignatureError
from relaxrev.logics.dl import kernel
from relaxrev.logics.dl.normal import normalize_grouping, rho_e
from relaxrev.logics.dl.semantics import (
    DLSystem, Interpretation, concept_equivalent, count_interpretations,
    enumerate_interpretations, eval_concept, satisfies_dl,
)
from relaxrev.logics.dl.syntax import (
    BOT, TOP, And, ConceptAssertion, DLSignature, Exists, Forall, Name, Not, Or, RoleAssertion,
    Subsumption, format_axiom, format_concept, fragment_of, parse_axiom, parse_concept,
)
from relaxrev.logics.dl.trees import DescriptionTree, from_tree, rho_depth, rho_leaves, to_tree

from oracles import dl_eval, dl_subsumed
from strategies import concepts

A, B, C, E = Name("A"), Name("B"), Name("C"), Name("E")
pc = parse_concept


def interp(n, concepts=None, roles=None, inds=None):
    return Interpretation(n, concepts or {}, roles or {}, inds or {})


# -- evaluation ---------------------------------------------------------


def test_eval_examples():
    i = interp(2, {"A": frozenset({1})}, {"r": frozenset({(0, 1)})})
    assert eval_concept(i, TOP) == {0, 1}
    assert eval_concept(i, BOT) == frozenset()
    assert eval_concept(i, Exists("r", A)) == {0}
    assert eval_concept(interp(2, {"A": frozenset()}, {"r": frozenset()}), Forall("r", A)) == {0, 1}
    assert eval_concept(i, Exists("r_top", A)) == {0, 1}
    with pytest.raises(SignatureError):
        eval_concept(i, Name("Z"))


def test_satisfaction_clauses():
    yes = interp(1, {"A": frozenset({0}), "B": frozenset({0})}, {"r": frozenset({(0, 0)})}, {"a": 0})
    no = interp(1, {"A": frozenset({0}), "B": frozenset()}, {"r": frozenset()}, {"a": 0})
    for ax in (Subsumption(A, B), ConceptAssertion("a", B), RoleAssertion("a", "a", "r")):
        assert satisfies_dl(yes, ax)
        assert not satisfies_dl(no, ax)
    assert satisfies_dl(no, RoleAssertion("a", "a", "r_top"))


def test_enumeration_counts():
    assert len(list(enumerate_interpretations(DLSignature(("A",)), 1))) == 2
    sig = DLSignature(("A",), ("r",))
    assert count_interpretations(sig, 2) == 2 ** 1 * 2 ** 1 + 2 ** 2 * 2 ** 4
    assert DLSystem(sig, 2).size == 68
    assert len(list(enumerate_interpretations(sig, 2))) == 68
    with pytest.raises(EnumerationLimitError):
        DLSystem(DLSignature(("A",), (), ("a",)), 0)
    with pytest.raises(EnumerationLimitError):
        DLSystem(sig, 4, ceiling=1000)


def test_empty_domain_flag():
    sig = DLSignature(("A",), empty_domain=True)
    system = DLSystem(sig, 1, fragment="EL")
    assert system.size == 3
    assert system.model_at(0).size == 0
    assert system.trivial == 1
    assert DLSystem(DLSignature(("A",), (), ("a",), empty_domain=True), 1).trivial == 0


def test_nonempty_names_restrict_universe():
    system = DLSystem(DLSignature(("A", "B"), nonempty=("A",)), 2)
    for i in range(system.size):
        admissible = bool(system.universe >> i & 1)
        assert admissible == bool(system.model_at(i).concepts["A"])


def test_index_round_trip():
    system = DLSystem(DLSignature(("A",), ("r",), ("a", "b")), 2)
    for i in range(system.size):
        assert system.index_of(system.model_at(i)) == i


SIG = DLSignature(("A", "B"), ("r",))
SYS2 = DLSystem(SIG, 2)


@given(concepts())
@settings(max_examples=80)
def test_mask_route_matches_oracle(c):
    ax = Subsumption(c, A)
    expected = 0
    for i in range(SYS2.size):
        m = SYS2.model_at(i)
        ext = dl_eval(c, m.domain, m.concepts, m.roles)
        assert eval_concept(m, c) == ext
        if ext <= m.concepts["A"]:
            expected |= 1 << i
    assert SYS2.mask(ax) == expected


# -- kernel backends ----------------------------------------------------


@pytest.mark.parametrize("text", [
    "A", "Top", "Bot", "~A", "A & ~B", "A | B | ~A", "some r. A", "all r. (A | B)",
    "some r_top. A", "all r_top. B", "some r. all r. ~(A & some r. B)",
])
def test_kernel_backends_agree_with_reference(text):
    c = pc(text)
    system = DLSystem(SIG, 2)
    prog = kernel.compile_concept(c, system._cidx, system._ridx)
    backends = ["numpy"] + (["cython"] if kernel.BACKEND == "cython" else [])
    for k, blk in enumerate(system._blocks):
        outs = [kernel.eval_program(prog, blk.n, blk.nc, blk.nr, b) for b in backends]
        for other in outs[1:]:
            assert np.array_equal(outs[0], other)
        for local in range(blk.count):
            m = system.model_at(system._offsets[k] + local)
            ext = sum(1 << x for x in eval_concept(m, c))
            assert outs[0][local] == ext


def test_kernel_backends_agree_bound3():
    if kernel.BACKEND != "cython":
        pytest.skip("compiled kernel not built")
    system = DLSystem(SIG, 3)
    for text in ("some r. (A & all r. B) | ~A", "all r. some r. (A & ~B)"):
        prog = kernel.compile_concept(pc(text), system._cidx, system._ridx)
        for blk in system._blocks:
            assert np.array_equal(kernel.eval_program(prog, blk.n, blk.nc, blk.nr, "numpy"),
                                  kernel.eval_program(prog, blk.n, blk.nc, blk.nr, "cython"))


# -- syntax -------------------------------------------------------------


def test_fragment_tags():
    assert fragment_of(pc("A & some r. B")) == "EL"
    assert fragment_of(pc("A | some r. B")) == "ELU"
    assert fragment_of(pc("~A")) == "ALC"
    assert fragment_of(pc("all r. A")) == "ALC"


@pytest.mark.parametrize("text", [
    "A [= B", "A & some r. (B | C) [= Bot", "a : ~(A | B)", "(a, b) : r", "Top [= all r. A",
])
def test_axiom_round_trip(text):
    ax = parse_axiom(text)
    assert parse_axiom(format_axiom(ax)) == ax


@given(concepts(names=("A", "B", "C"), roles=("r", "s")))
def test_concept_round_trip(c):
    assert parse_concept(format_concept(c)) == parse_concept(format_concept(parse_concept(format_concept(c))))
    assert concept_equivalent(parse_concept(format_concept(c)), c, bound=2)


@pytest.mark.parametrize("text,column", [("A [= ", 6), ("A & & B [= C", 5), ("some . A [= B", 6)])
def test_parse_error_columns(text, column):
    with pytest.raises(ParseError) as info:
        parse_axiom(text)
    assert info.value.column == column


def test_signature_disjointness():
    with pytest.raises(SignatureError):
        DLSignature(("A",), ("A",))
    with pytest.raises(SignatureError):
        DLSignature(("A",), nonempty=("B",))
    assert DLSignature(("A",), ("r", "r_top")).all_roles == ("r", "r_top")


# -- trees --------------------------------------------------------------


def test_tree_examples():
    t = to_tree(pc("A & some r. B"))
    assert t.labels == {"A"}
    assert [(r, s.labels) for r, s in t.children] == [("r", {"B"})]
    assert to_tree(TOP) == DescriptionTree()
    with pytest.raises(FragmentError):
        to_tree(pc("A | B"))


@given(concepts(names=("A", "B"), roles=("r", "s"), fragment="EL"))
def test_tree_round_trip(c):
    assert dl_subsumed(from_tree(to_tree(c)), c) and dl_subsumed(c, from_tree(to_tree(c)))


def test_rho_depth_examples():
    assert rho_depth(pc("A & some r. (B & some s. E)")) == pc("A & some r. B")
    assert rho_depth(A) == TOP
    assert rho_depth(TOP) == TOP


def test_rho_leaves_examples():
    assert rho_leaves(pc("A & some r. B")) == A
    assert rho_leaves(A) == TOP
    assert rho_leaves(pc("some r. (A & some s. B) & some r. C")) == pc("some r. A")


# -- grouped normal form and rho_e ---------------------------------------


def test_normalize_grouping_examples():
    assert normalize_grouping(pc("some r. A & some r. B & P"), bound=2) == pc("P & some r. A & some r. B")
    assert normalize_grouping(pc("some r. A & some r. Top"), bound=2) == pc("some r. A")
    already = pc("A & some r. B")
    assert normalize_grouping(already, bound=2) == already


@given(concepts(names=("A", "B"), roles=("r",), fragment="ELU", max_leaves=5))
@settings(max_examples=30)
def test_normalize_grouping_equivalent(c):
    assert concept_equivalent(normalize_grouping(c, bound=2), c, bound=2)


def test_rho_e_examples():
    assert rho_e(TOP, bound=2) == TOP
    assert rho_e(pc("some r. Top"), bound=2) == TOP
    assert rho_e(A, bound=2) == TOP


def test_rho_e_bob():
    male, female, judge = Name("male"), Name("female"), Name("judge")
    d = Exists("m", And((female, judge)))
    got = rho_e(And((male, d)), bound=3)
    expected = Or((d, And((male, Or((Exists("m", female), Exists("m", judge)))))))
    assert concept_equivalent(got, expected, bound=3)
