from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanlab import generators as gen
from cartanlab.bundle import BundleValuedForm, Connection
from cartanlab.forms import Form, contract, exterior_d, lie_bracket, lie_derivative, wedge
from cartanlab.gencomplex import (
    GeneralizedSection,
    GeneralizedWord,
    IsotropicFrame,
    PreconditionError,
    claim43_operator_residuals,
    claim43_residual,
    cor44_residual,
    cor45_crosscheck,
    courant_bracket,
    dot_action,
    gen_schouten,
    gualtieri_residual,
    initial2_residual,
    inner_product,
    prop42_residual,
    twisted_courant,
    twisted_de_rham,
    vvf_word,
)
from cartanlab.polyvector import vvf_contract
from cartanlab.rng import SplitMix64
from cartanlab.scalar import Chart, Scalar
from conftest import C, R

R3, R4 = Chart.real(3), Chart.real(4)
seeds = st.integers(0, 2**64 - 1)


def sec(vec: str = "0", form: str = "0", m: int = 3) -> GeneralizedSection:
    return R(f"(gsec {vec} {form})", m)


def word(*letters) -> GeneralizedWord:
    return GeneralizedWord.of(*letters)


def zero_section(chart):
    return GeneralizedSection.zero(chart)


# pairing -----------------------------------------------------------------------------


def test_inner_product_examples():
    assert inner_product(sec("@x1"), sec("@x2")).is_zero()
    assert inner_product(sec("@x1"), sec("0", "dx1")) == Scalar.const(R3, Fraction(1, 2))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_frame_sections_are_isotropic(seed):
    rng = SplitMix64(seed)
    fr = gen.half_split(R4)
    A, B = gen.section(rng, R4, 2, fr), gen.section(rng, R4, 2, fr)
    assert inner_product(A, B).is_zero()
    C1, C2 = gen.section(rng, R4, 2), gen.section(rng, R4, 2)
    assert inner_product(C1, C2) == inner_product(C2, C1)


# Courant brackets ------------------------------------------------------------------------


def test_courant_reduces_to_lie_bracket():
    X, Y = R("(* x2 @x1)"), R("(+ (* x1 x3 @x2) @x3)")
    got = courant_bracket(GeneralizedSection.vector(X), GeneralizedSection.vector(Y))
    assert got == GeneralizedSection.vector(lie_bracket(X, Y))


def test_courant_slot_order():
    got = courant_bracket(sec("0", "(* x1 dx2)"), sec("@x1"))
    assert got == sec("0", "(* -1 dx2)")


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_courant_antisymmetric_and_projects(seed):
    rng = SplitMix64(seed)
    A, B = gen.section(rng, R4, 2), gen.section(rng, R4, 2, rational=True)
    assert (courant_bracket(A, B) + courant_bracket(B, A)).is_zero()
    assert courant_bracket(A, A).is_zero()
    assert courant_bracket(A, B).X == lie_bracket(A.X, B.X)


def test_twisted_examples():
    A, B = sec("(* x2 @x1)", "(* x3 dx1)"), sec("@x3", "(* x1 dx2)")
    assert twisted_courant(A, B, Form.zero(R3)) == courant_bracket(A, B)
    H = R("(wedge dx1 dx2 dx3)")
    assert twisted_courant(sec("@x1"), sec("@x2"), H) == sec("0", "dx3")
    assert twisted_courant(A, A, H).is_zero()


def test_twisted_rejects_even_form():
    with pytest.raises(ValueError):
        twisted_courant(sec("@x1"), sec("@x2"), R("(wedge dx1 dx2)"))


# dot action ----------------------------------------------------------------------------


def test_dot_action_examples():
    assert dot_action(sec("@x1", "dx1"), R("dx2")) == R("(wedge dx1 dx2)")
    W = word(sec("@x1", "dx2"), sec("(* x3 @x2)"))
    assert dot_action(W, Form.zero(R3)).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dot_action_composes(seed):
    rng = SplitMix64(seed)
    A, B, Cw = (gen.word(rng, R4, 2, 1) for _ in range(3))
    a = gen.form(rng, R4, 2)
    assert dot_action(A.wedge(B).wedge(Cw), a) == dot_action(A, dot_action(B, dot_action(Cw, a)))


def test_section_action_single_letter():
    A = sec("(* x2 @x1)", "(+ (* x3 dx2) (wedge dx1 dx3))")
    a = R("(+ (* x1 dx1) (wedge dx2 dx3))")
    assert dot_action(A, a) == contract(A.X, a) + wedge(A.xi, a)


# generalized Schouten bracket ----------------------------------------------------------------


def _bracket_by_hand(a: GeneralizedSection, b: GeneralizedSection, Rf: Form) -> GeneralizedSection:
    X, Y, xi, eta = a.X, b.X, a.xi.component(1), b.xi.component(1)
    half = exterior_d(contract(X, eta) - contract(Y, xi)) * Fraction(1, 2)
    form = lie_derivative(X, eta) - lie_derivative(Y, xi) - half + contract(Y, contract(X, Rf))
    return GeneralizedSection(lie_bracket(X, Y), form)


def _schouten_action_by_hand(A_letters, B_letters, Rf, rho):
    # double sum, 1-based signs (-1)^{i+j}, letters acting right to left
    out = Form.zero(rho.chart)
    for i, Ai in enumerate(A_letters, 1):
        for j, Bj in enumerate(B_letters, 1):
            rest = [x for k, x in enumerate(A_letters, 1) if k != i] + [x for k, x in enumerate(B_letters, 1) if k != j]
            v = rho
            for s in reversed(rest):
                v = dot_action(s, v)
            v = dot_action(_bracket_by_hand(Ai, Bj, Rf), v)
            out = out + (v if (i + j) % 2 == 0 else -v)
    return out


def test_schouten_length_one_is_twisted_courant():
    A, B = sec("(* x2 @x1)", "(* x3 dx1)"), sec("@x3", "(* x1 x1 dx2)")
    H = R("(* x2 (wedge dx1 dx2 dx3))")
    assert gen_schouten(word(A), word(B), H).terms == ((twisted_courant(A, B, H),),)


def test_schouten_constant_letters_vanish():
    A = word(sec("@x1", "dx2"), sec("@x3"))
    B = word(sec("(* 2 @x2)", "dx1"))
    rho = R("(+ (* x1 x2 dx3) (wedge dx1 dx2))")
    assert dot_action(gen_schouten(A, B), rho).is_zero()


def test_schouten_two_one_against_double_sum():
    A1, A2 = sec("(* x2 @x1)", "(* x3 dx2)"), sec("(* x1 @x3)", "(* x1 x2 dx1)")
    B1 = sec("(+ @x2 (* x3 @x1))", "(* x2 dx3)")
    H = R("(wedge dx1 dx2 dx3)")
    rho = R("(+ (* x1 x3) (* x2 dx1) (* x3 x3 (wedge dx1 dx2)))")
    got = dot_action(gen_schouten(word(A1, A2), word(B1), H), rho)
    assert got == _schouten_action_by_hand([A1, A2], [B1], H, rho)
    assert not got.is_zero()


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3), st.sampled_from([0, 1, 3]))
def test_schouten_matches_double_sum(seed, p, q, k):
    rng = SplitMix64(seed)
    A, B = gen.word(rng, R4, 2, p), gen.word(rng, R4, 2, q)
    Rf = gen.odd_form(rng, R4, k, 1) if k else Form.zero(R4)
    rho = gen.form(rng, R4, 2)
    got = dot_action(gen_schouten(A, B, Rf), rho)
    assert got == _schouten_action_by_hand(A.terms[0], B.terms[0], Rf, rho)


# twisted differential ------------------------------------------------------------------------


def test_twisted_de_rham_examples():
    a = R("(* x1 x3 dx2)")
    assert twisted_de_rham(a, Form.zero(R3)) == exterior_d(a)
    assert twisted_de_rham(Form.scalar(R("x2")), R("dx1")) == R("(+ dx2 (* -1 x2 dx1))")
    H = R("(wedge dx1 dx2 dx3)")
    assert twisted_de_rham(Form.const(R3, 1), H) == -H


def test_twisted_de_rham_needs_pure_degree():
    with pytest.raises(ValueError):
        twisted_de_rham(R("dx1"), R("(+ dx1 (wedge dx1 dx2 dx3))"))


# Gualtieri and the expansion identity -------------------------------------------------------------


def test_gualtieri_examples():
    rho = R("(+ (* x1 x2 dx3) (* x3 (wedge dx1 dx2)) x2)")
    assert gualtieri_residual(sec("(* x2 @x1)"), sec("(* x3 @x2)"), rho).is_zero()
    A, B = sec("@x1", "(* x2 dx1)"), sec("@x2", "dx2")
    assert gualtieri_residual(A, B, rho).is_zero()
    assert gualtieri_residual(A, A, rho).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_gualtieri_general_sections(seed):
    rng = SplitMix64(seed)
    A, B = gen.section(rng, R4, 2), gen.section(rng, R4, 2)
    assert gualtieri_residual(A, B, gen.form(rng, R4, 2)).is_zero()


def test_gualtieri_without_pairing_fails_on_non_isotropic_pair():
    A, B = sec("@x1", "(* x2 dx1)"), sec("(* x1 @x2)", "(* x1 dx1)")
    assert not inner_product(A, B).is_zero()
    rho = R("(* x3 dx3)")
    assert gualtieri_residual(A, B, rho).is_zero()
    assert not gualtieri_residual(A, B, rho, pairing=False).is_zero()


def test_initial2_examples():
    A, B = sec("(* x2 @x1)", "(* x3 dx2)"), sec("@x3", "(* x1 dx1)")
    rho = R("(+ x1 (* x2 dx3))")
    assert initial2_residual(A, B, R("(* x1 dx2)"), rho).is_zero()
    assert initial2_residual(sec("0", "dx1"), sec("0", "(* x2 dx3)"), R("dx2"), rho).is_zero()


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([1, 3]))
def test_initial2_random(seed, k):
    rng = SplitMix64(seed)
    A, B = gen.section(rng, R4, 2), gen.section(rng, R4, 2)
    assert initial2_residual(A, B, gen.odd_form(rng, R4, k, 2), gen.form(rng, R4, 2)).is_zero()


def test_initial2_rejects_even_form():
    with pytest.raises(ValueError):
        initial2_residual(sec("@x1"), sec("@x2"), R("(wedge dx1 dx2)"), R("dx3"))


# Proposition-type identity for words -------------------------------------------------------------


def test_prop42_examples():
    fr = gen.half_split(R3)
    A, B = word(sec("(* x3 @x1)", "(* x1 dx3)")), word(sec("(* x1 @x2)"))
    rho = R("(+ (* x1 x2) (* x3 (wedge dx1 dx2)))")
    assert prop42_residual(A, B, Form.zero(R3), rho, fr).is_zero()
    A2 = word(sec("(* x3 @x1)", "(* x1 dx3)"), sec("@x2", "(* x2 dx3)"))
    assert prop42_residual(A2, B, R("(wedge dx1 dx2 dx3)"), rho, fr).is_zero()
    R6 = Chart.real(6)
    fr6 = gen.half_split(R6)
    rng = SplitMix64(6)
    A6, B6 = gen.word(rng, R6, 1, 1, fr6), gen.word(rng, R6, 1, 1, fr6)
    R5 = gen.odd_form(rng, R6, 5, 1)
    assert prop42_residual(A6, B6, R5, gen.form(rng, R6, 1, degree=1), fr6).is_zero()


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3), st.sampled_from([1, 3]), st.sampled_from([3, 4]))
def test_prop42_random(seed, p, q, k, m):
    ch = Chart.real(m)
    rng = SplitMix64(seed)
    fr = gen.half_split(ch)
    A, B = gen.word(rng, ch, 2, p, fr), gen.word(rng, ch, 2, q, fr)
    Rf = gen.odd_form(rng, ch, k, 2)
    assert prop42_residual(A, B, Rf, gen.form(rng, ch, 2), fr).is_zero()


def test_prop42_rejects_non_isotropic_letters():
    fr = gen.half_split(R3)
    A, B = word(sec("@x3")), word(sec("@x1"))
    with pytest.raises(PreconditionError):
        prop42_residual(A, B, Form.zero(R3), R("dx1"), fr)


def test_prop42_genuinely_needs_isotropy():
    # without the frame check the identity fails on a non-isotropic pair
    from cartanlab.gencomplex import prop42_terms

    A, B = word(sec("@x1", "(* x2 dx1)")), word(sec("(* x1 @x2)", "(* x1 dx1)"))
    t = prop42_terms(A, B, Form.zero(R3), R("(* x3 dx3)"))
    res = t["lhs"] - (t["A_dR_B"] + t["B_dR_A"] + t["bracket"] + t["AB_dR"])
    assert not res.is_zero()


# operator commutator --------------------------------------------------------------------------


def test_claim43_examples():
    alpha = R("(+ (* x1 dx2) (* x3 (wedge dx1 dx3)))")
    assert claim43_residual(sec("@x1"), sec("@x2"), Form.zero(R3), alpha).is_zero()
    H = R("(wedge dx1 dx2 dx3)")
    assert claim43_residual(sec("@x1"), sec("0", "dx2"), H, alpha).is_zero()


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([1, 3]))
def test_claim43_random_isotropic(seed, k):
    rng = SplitMix64(seed)
    fr = gen.half_split(R4)
    A0, Cs = gen.section(rng, R4, 2, fr), gen.section(rng, R4, 2, fr)
    assert all(r.is_zero() for r in claim43_operator_residuals(A0, Cs, gen.odd_form(rng, R4, k, 2)))


def test_claim43_pairing_precondition():
    with pytest.raises(PreconditionError):
        claim43_residual(sec("@x1"), sec("0", "dx1"), Form.zero(R3), R("dx2"))


# 2-words and a 1-form ------------------------------------------------------------------------------


def test_cor44_examples():
    fr = gen.half_split(R4)
    rng = SplitMix64(44)
    A, B = gen.word(rng, R4, 2, 2, fr), gen.word(rng, R4, 2, 2, fr)
    rho = gen.form(rng, R4, 2)
    assert cor44_residual(A, B, Form.zero(R4), rho, fr).is_zero()
    assert cor44_residual(A, B, R("dx1", 4), rho, fr).is_zero()
    assert cor44_residual(A, B, R("dx1", 4), Form.zero(R4), fr).is_zero()


def test_cor44_twist_drops_out_for_one_forms():
    fr = gen.half_split(R4)
    rng = SplitMix64(3)
    A, B = gen.word(rng, R4, 2, 2, fr), gen.word(rng, R4, 2, 2, fr)
    Rf = gen.odd_form(rng, R4, 1, 2)
    rho = gen.form(rng, R4, 2)
    assert dot_action(gen_schouten(A, B, Rf), rho) == dot_action(gen_schouten(A, B), rho)


def test_cor44_shape_checks():
    fr = gen.half_split(R4)
    A = word(sec("@x1", m=4))
    with pytest.raises(ValueError):
        cor44_residual(A, A, R("dx1", 4), R("dx2", 4), fr)


# word route versus contraction route ------------------------------------------------------------------


def test_vvf_word_acts_as_contraction():
    phi = C("(vvf (1 1) (coef (@z1) (dzb2) (* z1 zb1)) (coef (@z2) (dzb1) z2))")
    beta = C("(+ (* z2 (wedge dz1 dz2)) (* zb1 (wedge dz1 dzb2)))")
    assert dot_action(vvf_word(phi), beta) == vvf_contract(phi, beta)


def _crosscheck_zero(out):
    return all(v.is_zero() for v in out.values())


def test_cor45_flat_and_rank_one():
    rng = SplitMix64(45)
    ch = Chart.complex(2)
    f1, f2 = gen.vvf(rng, ch, 2, 1, 1), gen.vvf(rng, ch, 2, 1, 1)
    om = BundleValuedForm([gen.form(rng, ch, 2)], Connection.trivial(ch, 1))
    assert _crosscheck_zero(cor45_crosscheck(f1, f2, om, [[Scalar.const(ch, 1)]]))
    h = [[C("(+ 1 (* z1 zb1))")]]
    assert _crosscheck_zero(cor45_crosscheck(f1, f2, om, h))


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(1, 2))
def test_cor45_random(seed, rank):
    rng = SplitMix64(seed)
    ch = Chart.complex(2)
    f1, f2 = gen.vvf(rng, ch, 2, 1, 1), gen.vvf(rng, ch, 2, 1, 1)
    h = gen.hermitian_metric(rng, ch, rank)
    om = BundleValuedForm([gen.form(rng, ch, 2) for _ in range(rank)], Connection.trivial(ch, rank))
    assert _crosscheck_zero(cor45_crosscheck(f1, f2, om, h))
