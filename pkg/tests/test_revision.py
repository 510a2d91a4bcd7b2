import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relaxrev.core import KnowledgeBase, cn_equal, is_consistent, models_of
from relaxrev.errors import RelaxrevError, RevisionFailed
from relaxrev.io import load_document, revision_system
from relaxrev.logics import pl
from relaxrev.logics.dl.syntax import parse_axiom
from relaxrev.operators import available, make_relaxation
from relaxrev.revision import (
    COHERENT, MINIMAL, Relaxation, RelaxationVector, RevisionConfig, RevisionOperator,
    apply_vector, check_extensivity, check_relevance, check_sum_minimality, exhaustivity_index,
    f_rho_relation, revise, revision_order_leq, revision_order_leq_witness, trivial_relaxation,
    vectors_with_total,
)

from oracles import brute_coherent, brute_minimal
from strategies import pl_formulas, pl_kbs

SAMPLES = Path(__file__).resolve().parents[1] / "samples"
P = pl.parse_formula
S1 = pl.PLSystem(("p",))
S2 = pl.PLSystem(("p", "q"))
S3 = pl.PLSystem(("p", "q", "r"))
HAM2 = make_relaxation("hamming", S2)
HAM3 = make_relaxation("hamming", S3)


def kb(*texts):
    return KnowledgeBase(tuple(P(t) for t in texts))


def tweety():
    old = load_document(SAMPLES / "tweety_old.kb")
    new = load_document(SAMPLES / "tweety_new.kb")
    system = revision_system(old, new, 3)
    return system, old.sentences, new.sentences


# -- vectors ------------------------------------------------------------


def test_vector_orders():
    a, b = RelaxationVector([1, 0]), RelaxationVector([1, 2])
    assert a.leq(b) and a.lt(b) and not b.leq(a) and not a.lt(a)
    assert a.join([0, 3]) == (1, 3) and b.meet([2, 1]) == (1, 1)
    assert RelaxationVector.zeros(3).total == 0 and b.total == 3
    assert list(vectors_with_total(2, (1, 2))) == [(0, 2), (1, 1)]


# -- apply_vector -------------------------------------------------------


def test_apply_vector_examples():
    base = kb("p", "q")
    assert apply_vector(HAM2, base, [0, 0]) == base
    out = apply_vector(HAM2, base, [0, 1])
    assert out[0] == P("p") and S2.mask(out[1]) == S2.universe
    with pytest.raises(RelaxrevError):
        apply_vector(HAM2, base, [1])


def test_apply_vector_tweety_bottom():
    system, old, new = tweety()
    rel = make_relaxation("kappa_bot", system, old=old, new=new)
    out = apply_vector(rel, old, [1, 1])
    assert list(out) == [parse_axiom("Bot [= bird"), parse_axiom("Bot [= flies")]


# -- extensivity and exhaustivity ----------------------------------------


def test_exhaustivity_index_examples():
    triv = trivial_relaxation(S2)
    assert exhaustivity_index(S2, triv, P("p & q")) == 1
    assert exhaustivity_index(S2, triv, P("p | !p")) == 0
    assert exhaustivity_index(S2, HAM2, P("p")) == 1
    assert exhaustivity_index(S2, HAM2, P("p & q")) == 2
    assert triv(triv(P("p"))) == triv(P("p"))


def test_exception_relaxation_is_not_exhaustive():
    system, old, new = tweety()
    rel = make_relaxation("rho_exceptions", system, {"exceptions": [parse_axiom("a : Tweety").concept]},
                          old=old, new=new)
    assert not rel.exhaustive
    assert exhaustivity_index(system, rel, old[1]) is None


@given(pl_formulas(("p", "q", "r")))
def test_registered_pl_relaxation_extensive(f):
    for name in available(S3):
        assert check_extensivity(S3, make_relaxation(name, S3), f)


# -- revision order -----------------------------------------------------


def test_revision_order_examples():
    assert revision_order_leq(S2, kb("p"), kb("p", "q"))
    assert not revision_order_leq(S2, kb("p"), kb("q"))
    assert revision_order_leq(S2, kb(), kb("q"))


@given(pl_kbs(("p", "q")), pl_kbs(("p", "q")))
def test_revision_order_matches_witness_form(a, b):
    a, b = KnowledgeBase(tuple(a)), KnowledgeBase(tuple(b))
    assert revision_order_leq(S2, a, b) == revision_order_leq_witness(S2, a, b)


# -- revise: worked examples --------------------------------------------


def test_pl_minimal_example():
    res = revise(S2, kb("p", "q"), kb("!q"), RevisionConfig(HAM2))
    assert res.vector == (0, 1)
    assert set(models_of(S2, res.revised)) == {(1, 0)}
    assert res.candidates == ((0, 1),)


def test_inconsistent_new_returns_new():
    new = kb("q", "!q")
    res = revise(S2, kb("p"), new, RevisionConfig(HAM2))
    assert res.revised == new and res.vector is None and "inconsistent_new" in res.flags


def test_inconsistent_old_is_flagged():
    res = revise(S2, kb("p", "!p"), kb("q"), RevisionConfig(HAM2))
    assert res.vector == (1, 0)
    assert "inconsistent_old" in res.flags
    assert is_consistent(S2, res.revised)


def test_tweety_modes():
    system, old, new = tweety()
    rel = make_relaxation("kappa_bot", system, old=old, new=new)
    m = revise(system, old, new, RevisionConfig(rel, MINIMAL))
    assert m.vector == (1, 0)
    assert set(m.candidates) == {(1, 0), (0, 1)}
    assert list(m.revised) == [parse_axiom(t) for t in ("Bot [= bird", "bird [= flies", "Tweety & flies [= Bot")]
    c = revise(system, old, new, RevisionConfig(rel, COHERENT))
    assert c.vector == (1, 1)
    assert list(c.revised) == [parse_axiom(t) for t in ("Bot [= bird", "Bot [= flies", "Tweety & flies [= Bot")]


def test_tweety_trivial_drops_one_axiom():
    system, old, new = tweety()
    res = revise(system, old, new, RevisionConfig(trivial_relaxation(system)))
    assert sum(res.vector) == 1
    assert is_consistent(system, res.revised)
    assert check_relevance(system, old, new, res, trivial_relaxation(system))


def test_non_exhaustive_needs_override_and_can_fail():
    stuck = Relaxation("stuck", "PL", lambda f: f, exhaustive=False)
    with pytest.raises(RelaxrevError):
        revise(S2, kb("p"), kb("!p"), RevisionConfig(stuck))
    with pytest.raises(RevisionFailed) as info:
        revise(S2, kb("p"), kb("!p"), RevisionConfig(stuck, allow_non_exhaustive=True))
    assert info.value.frontier == (0,)


def test_unsatisfiable_sentence_is_capped_and_reported():
    with pytest.raises(RevisionFailed) as info:
        revise(S2, kb("p & !p", "q"), kb("!q"), RevisionConfig(HAM2))
    assert info.value.frontier == (0, 1)
    assert "sentences 0" in str(info.value)


def test_logic_mismatch_rejected():
    with pytest.raises(RelaxrevError):
        revise(S2, kb("p"), kb("!p"), RevisionConfig(Relaxation("x", "FOL", lambda f: f)))


def test_config_validation():
    with pytest.raises(RelaxrevError):
        RevisionConfig(HAM2, mode="greedy")
    with pytest.raises(RelaxrevError):
        RevisionConfig(HAM2, max_cap=0)


def test_relevance_diagnostics():
    base, new = kb("p", "q"), kb("!q")
    res = revise(S2, base, new, RevisionConfig(HAM2))
    assert check_relevance(S2, base, new, res, HAM2)
    zero = revise(S2, kb("p"), kb("q"), RevisionConfig(HAM2))
    assert zero.vector == (0,) and check_relevance(S2, kb("p"), kb("q"), zero, HAM2)
    padded = type(res)(res.revised, RelaxationVector([0, 2]), MINIMAL)
    assert check_relevance(S2, base, new, padded, HAM2)
    assert not check_sum_minimality(S2, base, new, padded.vector, HAM2)


# -- revise against the brute-force oracles ------------------------------


@given(pl_kbs(("p", "q", "r"), 3), pl_kbs(("p", "q", "r"), 2))
@settings(max_examples=80)
def test_minimal_mode_matches_oracle(old, new):
    old, new = KnowledgeBase(tuple(old)), KnowledgeBase(tuple(new))
    if not S3.kb_mask(new):
        assert revise(S3, old, new, RevisionConfig(HAM3, MINIMAL)).vector is None
        return
    best, vectors = brute_minimal(S3, HAM3, old, new)
    if best is None:
        with pytest.raises(RevisionFailed):
            revise(S3, old, new, RevisionConfig(HAM3, MINIMAL))
        return
    res = revise(S3, old, new, RevisionConfig(HAM3, MINIMAL))
    assert res.minimal_total == best
    assert sorted(res.candidates) == vectors
    assert res.vector == max(vectors)
    assert check_relevance(S3, old, new, res, HAM3)
    assert check_sum_minimality(S3, old, new, res.vector, HAM3)
    assert is_consistent(S3, res.revised)
    assert S3.kb_mask(res.revised) & ~S3.kb_mask(new) == 0


@given(pl_kbs(("p", "q", "r"), 3), pl_kbs(("p", "q", "r"), 2))
@settings(max_examples=80)
def test_coherent_mode_matches_oracle(old, new):
    old, new = KnowledgeBase(tuple(old)), KnowledgeBase(tuple(new))
    if not S3.kb_mask(new) or brute_minimal(S3, HAM3, old, new)[0] is None:
        return
    res = revise(S3, old, new, RevisionConfig(HAM3, COHERENT))
    assert res.vector == brute_coherent(S3, HAM3, old, new)
    assert is_consistent(S3, res.revised)
    if is_consistent(S3, list(old) + list(new)):
        assert cn_equal(S3, res.revised, list(old) + list(new))


@given(pl_kbs(("p", "q"), 3), pl_kbs(("p", "q"), 2), pl_kbs(("p", "q"), 2))
@settings(max_examples=60)
def test_coherent_mode_monotone_in_revision_order(old, a, b):
    old = KnowledgeBase(tuple(old))
    weaker, stronger = KnowledgeBase(tuple(a)), KnowledgeBase(tuple(a) + tuple(b))
    if not S2.kb_mask(stronger) or not all(S2.mask(f) for f in old):
        return
    op = RevisionOperator(S2, RevisionConfig(HAM2, COHERENT))
    assert op.result(old, weaker).vector.leq(op.result(old, stronger).vector)


def test_revise_is_deterministic():
    rng = random.Random(1)
    for _ in range(50):
        old = KnowledgeBase(tuple(pl.random_formula(rng, S3.atoms, 3) for _ in range(3)))
        new = KnowledgeBase((pl.random_formula(rng, S3.atoms, 3),))
        if not all(S3.mask(f) for f in old):
            continue
        for mode in (MINIMAL, COHERENT):
            a = revise(S3, old, new, RevisionConfig(HAM3, mode))
            b = revise(pl.PLSystem(S3.atoms), old, new, RevisionConfig(make_relaxation("hamming", pl.PLSystem(S3.atoms)), mode))
            assert a == b and a.to_json(S3) == b.to_json(S3)


# -- f_rho ---------------------------------------------------------------


def test_f_rho_single_atom():
    op = RevisionOperator(S1, RevisionConfig(make_relaxation("hamming", S1), COHERENT))
    rel = f_rho_relation(S1, op.config.relaxation, op, kb("p"))
    one, zero = S1.index_of((1,)), S1.index_of((0,))
    assert rel.leq(one, zero) and not rel.leq(zero, one)
    assert rel.strict(one, zero)
