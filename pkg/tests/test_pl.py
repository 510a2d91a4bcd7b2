import itertools

import pytest
from hypothesis import given

from relaxrev.core import cn_equal, models_of
from relaxrev.errors import ParseError, SignatureError
from relaxrev.logics import pl

from oracles import hamming_ball, pl_models, pl_truth, pl_valuations
from strategies import pl_formulas

ATOMS = ("p", "q")
S2 = pl.PLSystem(ATOMS)
S3 = pl.PLSystem(("p", "q", "r"))


def bits_of(system, models):
    return sum(1 << system.index_of(m) for m in models)


def test_hamming_examples():
    assert pl.hamming((1, 1), (1, 1)) == 0
    assert pl.hamming((1, 0), (0, 1)) == 2
    assert pl.hamming((1, 1, 0), (1, 0, 0)) == 1
    with pytest.raises(SignatureError):
        pl.hamming((1,), (1, 0))


def test_dilate_conjunction_is_disjunction():
    d = pl.dilate(S2, pl.parse_formula("p & q"))
    assert set(models_of(S2, [d])) == {(1, 1), (1, 0), (0, 1)}
    assert cn_equal(S2, [d], [pl.parse_formula("p | q")])


def test_dilate_fixpoint_and_cover():
    taut = S2.tautology()
    assert S2.mask(pl.dilate(S2, taut)) == S2.universe
    assert S2.mask(pl.dilate(S2, pl.Atom("q"))) == S2.universe


def test_dilate_contradiction_stays_empty():
    assert S2.mask(pl.dilate(S2, S2.contradiction())) == 0


@given(pl_formulas(("p", "q", "r")))
def test_dilate_matches_ball_oracle(f):
    mods = pl_models(S3.atoms, [f])
    expected = hamming_ball(mods, S3.atoms)
    assert set(models_of(S3, [pl.dilate(S3, f)])) == expected


@given(pl_formulas(("p", "q", "r")), pl_formulas(("p", "q", "r")))
def test_dilate_monotone_and_extensive(f, g):
    mf, mg = S3.mask(f), S3.mask(g)
    df, dg = S3.mask(pl.dilate(S3, f)), S3.mask(pl.dilate(S3, g))
    assert mf & ~df == 0
    if mf & ~mg == 0:
        assert df & ~dg == 0


@given(pl_formulas(("p", "q", "r")))
def test_dilate_exhaustive_within_atom_count(f):
    if not S3.mask(f):
        return
    g = f
    for _ in range(3):
        g = pl.dilate(S3, g)
    assert S3.mask(g) == S3.universe


def test_theory_from_models_examples():
    (one,) = S2.theory_from_models(bits_of(S2, [(1, 1)]))
    assert pl.format_formula(one) == "p & q"
    (full,) = S2.theory_from_models(S2.universe)
    assert S2.mask(full) == S2.universe
    (xor,) = S2.theory_from_models(bits_of(S2, [(1, 0), (0, 1)]))
    assert pl.format_formula(xor) == "!p & q | p & !q"
    (empty,) = S2.theory_from_models(0)
    assert S2.mask(empty) == 0


def test_theory_from_models_every_subset():
    for bits in range(1 << S2.size):
        assert S2.kb_mask(S2.theory_from_models(bits)) == bits


@given(pl_formulas(("p", "q", "r")))
def test_theory_roundtrip_semantic_identity(f):
    assert cn_equal(S3, S3.theory_from_models(S3.mask(f)), [f])


def test_betweenness():
    assert pl.check_betweenness(S2)
    assert pl.check_betweenness(pl.PLSystem(("p",)))
    assert not pl.check_betweenness(S2, lambda a, b: 2 * pl.hamming(a, b))


def test_valuation_order_is_binary():
    assert [S2.model_at(i) for i in range(4)] == pl_valuations(ATOMS)
    assert S2.format_model((1, 0)) == "10"
    assert pl.parse_valuation("10", S2) == (1, 0)


@given(pl_formulas(("p", "q", "r")))
def test_fast_and_reference_routes_agree(f):
    for i in range(S3.size):
        m = S3.model_at(i)
        truth = pl_truth(f, dict(zip(S3.atoms, m)))
        assert S3.holds(m, f) == truth == bool(S3.mask(f) >> i & 1)


# -- syntax ------------------------------------------------------------------

SUGAR = [
    ("p & q", "!(!p | !q)"),
    ("p -> q", "!p | q"),
    ("!p", "!p"),
    ("p | q & r", "p | !(!q | !r)"),
    ("(p | q) & r", "!(!(p | q) | !r)"),
    ("p -> q -> r", "!p | (!q | r)"),
]


@pytest.mark.parametrize("sugared,core", SUGAR)
def test_sugar_desugars_and_round_trips(sugared, core):
    a, b = pl.parse_formula(sugared), pl.parse_formula(core)
    assert a == b
    assert pl.parse_formula(pl.format_formula(a)) == a


def test_sugar_serializes_back():
    assert pl.format_formula(pl.parse_formula("p & q")) == "p & q"
    assert pl.format_formula(pl.parse_formula("p -> q")) == "p -> q"


@given(pl_formulas(("p", "q", "r"), depth=4))
def test_format_parse_round_trip(f):
    assert pl.parse_formula(pl.format_formula(f)) == f


@pytest.mark.parametrize("bad,col", [("p &", 4), ("p q", 3), ("(p", 3), ("p $ q", 3)])
def test_parse_errors_have_positions(bad, col):
    with pytest.raises(ParseError) as exc:
        pl.parse_formula(bad)
    assert exc.value.column == col


def test_sentence_pool_size():
    assert len(pl.sentence_pool(("p",), 2)) == 13
    pool = pl.sentence_pool(("p", "q"), 1)
    assert len(pool) == len(set(pool)) == 2 + 2 + 4


def test_depth_and_atoms():
    f = pl.parse_formula("!(p | q)")
    assert pl.depth(f) == 2 and pl.atoms_of(f) == {"p", "q"}


def test_signature_rules():
    with pytest.raises(SignatureError):
        pl.PLSignature(())
    with pytest.raises(SignatureError):
        pl.PLSignature(("p", "p"))


def test_all_three_atom_valuations_enumerated():
    assert [S3.model_at(i) for i in range(8)] == list(itertools.product((0, 1), repeat=3))
