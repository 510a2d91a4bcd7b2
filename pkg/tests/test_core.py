import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaxrev.core import (
    KnowledgeBase, cn_equal, default_bound, entails, is_consistent, iter_bits, models_of,
    popcount, satisfies, star, trivial_models,
)
from relaxrev.errors import SignatureError
from relaxrev.logics import pl
from relaxrev.logics.dl.semantics import DLSystem, Interpretation
from relaxrev.logics.dl.syntax import DLSignature, parse_axiom, parse_concept
from relaxrev.logics.fol import FOLStructure, FOLSystem, parse_sentence, parse_signature
from relaxrev.logics.horn import HornSystem, parse_horn_text

from oracles import pl_models
from strategies import pl_formulas, pl_kbs

P, Q = pl.Atom("p"), pl.Atom("q")
PQ = pl.PLSystem(("p", "q"))


def f(text):
    return pl.parse_formula(text)


# -- satisfies ---------------------------------------------------------------

def test_satisfies_pl_disjunct():
    assert satisfies(PQ, (1, 0), f("p | q"))


def test_satisfies_dl_empty_rich():
    sig = DLSignature(("Mary", "rich"))
    system = DLSystem(sig, 1)
    m = Interpretation(1, {"Mary": frozenset({0}), "rich": frozenset()}, {}, {})
    assert not satisfies(system, m, parse_axiom("Mary [= rich"))


def test_satisfies_fol_reflexive_diagonal():
    sig = parse_signature({"sorts": (1, "s"), "preds": (1, "=(s, s)")})
    system = FOLSystem(sig, 2)
    m = FOLStructure({"s": 2}, {}, {"=": frozenset({(0, 0), (1, 1)})})
    assert satisfies(system, m, parse_sentence("forall x. x = x", sig))


def test_satisfies_unknown_symbol():
    with pytest.raises(SignatureError):
        satisfies(PQ, (1, 0), f("r"))


# -- models_of ---------------------------------------------------------------

def test_models_of_conjunction():
    ms = models_of(PQ, KnowledgeBase.of(P, Q))
    assert list(ms) == [(1, 1)]


def test_models_of_empty_kb_is_everything():
    assert len(models_of(PQ, KnowledgeBase())) == 4


def test_models_of_contradiction():
    assert len(models_of(PQ, KnowledgeBase.of(P, pl.Not(P)))) == 0


@given(pl_kbs(("p", "q", "r")))
def test_models_of_matches_truth_table(kb):
    system = pl.PLSystem(("p", "q", "r"))
    assert set(models_of(system, KnowledgeBase(tuple(kb)))) == pl_models(("p", "q", "r"), kb)


# -- trivial models ----------------------------------------------------------

def test_trivial_pl_empty():
    assert len(trivial_models(PQ)) == 0


def test_trivial_horn_all_true():
    assert list(trivial_models(HornSystem(("p", "q")))) == [(1, 1)]


def test_trivial_dl_with_individual():
    sig = DLSignature(("A",), (), ("a",), (), True)
    assert len(trivial_models(DLSystem(sig, 2, "EL"))) == 0


def test_trivial_dl_empty_domain_flag():
    on = DLSystem(DLSignature(("A",), (), (), (), True), 1, "EL")
    off = DLSystem(DLSignature(("A",)), 1, "EL")
    assert len(trivial_models(on)) == 1 and len(trivial_models(off)) == 0


# -- consistency / entailment / cn ------------------------------------------

def test_consistency_examples():
    assert is_consistent(PQ, [P])
    assert not is_consistent(PQ, [P, pl.Not(P)])


def test_horn_facts_only_trivial():
    system = HornSystem(("p", "q"))
    kb = [parse_horn_text("-> p"), parse_horn_text("-> q")]
    assert not is_consistent(system, kb)


def test_entails_modus_ponens():
    assert entails(PQ, [P, pl.implies(P, Q)], Q)
    assert not entails(pl.PLSystem(("p",)), [], P)


def test_entails_tweety_flies():
    sig = DLSignature(("Tweety", "bird", "flies"), (), (), ("Tweety",))
    system = DLSystem(sig, 3, "EL")
    kb = [parse_axiom("Tweety [= bird"), parse_axiom("bird [= flies")]
    assert entails(system, kb, parse_axiom("Tweety [= flies"))


def test_cn_equal_examples():
    assert cn_equal(PQ, [P, Q], [pl.implies(Q, P), Q])
    assert not cn_equal(PQ, [P], [Q])
    assert cn_equal(PQ, [pl.Or(P, Q)], [pl.Or(Q, P)])


# -- knowledge bases ---------------------------------------------------------

def test_kb_dedupes_and_keeps_order():
    kb = KnowledgeBase.of(Q, P, Q)
    assert kb.sentences == (Q, P)


def test_semantic_duplicates_are_kept():
    kb = KnowledgeBase.of(pl.Or(P, Q), pl.Or(Q, P))
    assert len(kb) == 2


def test_default_bound_env(monkeypatch):
    monkeypatch.setenv("RV_BOUND", "2")
    assert default_bound() == 2
    monkeypatch.delenv("RV_BOUND")
    assert default_bound() == 3


def test_bit_helpers():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
    assert popcount(0b10110) == 3


# -- Galois connection and Tarskian properties (random kbs) ------------------

def _systems():
    yield pl.PLSystem(("p", "q", "r")), lambda rng: pl.random_formula(rng, ("p", "q", "r"), 3)
    from relaxrev.logics.horn import random_horn
    yield HornSystem(("p", "q", "r")), lambda rng: random_horn(rng, ("p", "q", "r"))
    sig = parse_signature({"sorts": (1, "s"), "preds": (1, "P(s), R(s, s)")})
    from relaxrev.logics.fol import random_sentence
    yield FOLSystem(sig, 2), lambda rng: random_sentence(rng, sig)
    dsig = DLSignature(("A", "B"), ("r",), ("a",))
    concepts = ["A", "B", "A & B", "some r. A", "all r. B", "~A", "A | B", "Top", "Bot"]

    def dl_axiom(rng):
        if rng.random() < 0.2:
            return parse_axiom(f"a : {rng.choice(concepts)}")
        return parse_axiom(f"{rng.choice(concepts)} [= {rng.choice(concepts)}")
    yield DLSystem(dsig, 2), dl_axiom


@pytest.mark.parametrize("system,gen", list(_systems()), ids=["PL", "HCL", "FOL", "DL"])
def test_galois_tarski_triv(system, gen):
    rng = random.Random(7)
    for _ in range(500):
        kb = [gen(rng) for _ in range(rng.randint(0, 3))]
        extra = [gen(rng) for _ in range(rng.randint(0, 2))]
        phi = gen(rng)
        m_kb = system.kb_mask(kb)
        m_big = system.kb_mask(kb + extra)
        # T ⊆ T' ⇒ Mod(T') ⊆ Mod(T)
        assert m_big & ~m_kb == 0
        # 𝕄 ⊆ 𝕄' ⇒ 𝕄'* ⊆ 𝕄*, over a finite pool
        pool = kb + extra + [phi]
        small, large = m_big, m_kb
        assert set(star(system, large, pool)) <= set(star(system, small, pool))
        # T ⊆ Mod(T)*
        assert set(kb) <= set(star(system, m_kb, pool))
        # 𝕄 ⊆ Mod(𝕄*)
        assert m_kb & ~system.kb_mask(star(system, m_kb, pool)) == 0
        # Tarski: inclusion, monotonicity, iteration
        assert all(entails(system, kb, s) for s in kb)
        if entails(system, kb, phi):
            assert entails(system, kb + extra, phi)
            for s in extra:
                if entails(system, kb + [phi], s):
                    assert entails(system, kb, s)
        # Triv ⊆ Mod(T); consistency ⇔ Mod(T) ≠ Triv
        assert system.trivial & ~m_kb == 0
        assert is_consistent(system, kb) == (m_kb != system.trivial)


@given(st.lists(pl_formulas(), max_size=3), pl_formulas())
def test_entails_is_model_inclusion(kb, phi):
    mods = pl_models(("p", "q"), kb)
    assert entails(PQ, kb, phi) == (mods <= pl_models(("p", "q"), [phi]))
