import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanlab import generators as gen
from cartanlab.bundle import (
    BundleValuedForm,
    Connection,
    bundle_contract,
    cartan_bundle_residual,
    cd1_residual,
    chern_connection,
    classical_lie_check,
    covariant_derivative,
    lemma21_residual,
    scalar_matrix,
    trivial_bundle_form,
)
from cartanlab.forms import Form, exterior_d
from cartanlab.rng import SplitMix64
from cartanlab.scalar import Chart, identity
from conftest import C

C2 = Chart.complex(2)
seeds = st.integers(0, 2**64 - 1)


def rank1(component: str, theta: str, n: int = 2) -> BundleValuedForm:
    return C(f"(bvf 1 (component 1 {component}) (theta 1 1 {theta}))", n)


# Chern connection -----------------------------------------------------------------


def test_chern_identity_metric():
    assert chern_connection(identity(C2, 2)).is_flat_zero()


def test_chern_rank_one():
    h = [[C("(+ 1 (* z1 zb1))")]]
    theta = chern_connection(h).theta[0][0]
    assert theta == C("(/ (* zb1 dz1) (+ 1 (* z1 zb1)))")


def test_chern_diagonal():
    a = C("(+ 1 (* z1 zb1))")
    th = chern_connection(scalar_matrix(C2, [[1, 0], [0, a]])).theta
    assert th[0][0].is_zero() and th[0][1].is_zero() and th[1][0].is_zero()
    assert th[1][1] == C("(/ (* zb1 dz1) (+ 1 (* z1 zb1)))")


def test_chern_rejects_non_hermitian():
    with pytest.raises(ValueError):
        chern_connection([[C("(+ 1 z1)")]])


def test_chern_rejects_singular():
    a = C("(+ 1 (* z1 zb1))")
    with pytest.raises(ZeroDivisionError):
        chern_connection([[a, a], [a, a]])


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 2))
def test_chern_entries_have_type_10(seed, r):
    h = gen.hermitian_metric(SplitMix64(seed), C2, r)
    assert chern_connection(h).is_type_10()


# covariant derivative and contraction ------------------------------------------------


def test_nabla_trivial_connection():
    f = Form.scalar(C("(* z1 zb2)"))
    e = trivial_bundle_form([f], C2)
    assert covariant_derivative(e).components[0] == exterior_d(f)


def test_nabla_one_form_sign():
    e = rank1("dzb1", "(* z1 dz1)")
    assert covariant_derivative(e).components[0] == C("(* z1 (wedge dz1 dzb1))")


def test_nabla_zero():
    e = rank1("0", "(* z1 dz1)")
    assert covariant_derivative(e).is_zero()


def test_rank_mismatch():
    with pytest.raises(ValueError):
        BundleValuedForm([C("dz1"), C("dz2")], Connection.trivial(C2, 1))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 2))
def test_nabla_flat_is_componentwise_d(seed, r):
    rng = SplitMix64(seed)
    comps = [gen.form(rng, C2, 2) for _ in range(r)]
    e = trivial_bundle_form(comps, C2)
    assert all(a == exterior_d(b) for a, b in zip(covariant_derivative(e).components, comps))


def test_bundle_contract_examples():
    got = bundle_contract(C("@z1"), rank1("dz1", "0")).components[0]
    assert got == Form.const(C2, 1)
    assert bundle_contract(C("(* z2 @z1)"), rank1("(* z1 zb1)", "dz2")).is_zero()
    got = bundle_contract(C("@z1"), rank1("(wedge dz1 dzb1)", "0")).components[0]
    assert got == C("dzb1")


# Lemma on the contracted commutator ------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(["zero", "random", "chern"]), st.integers(1, 2), st.integers(1, 2))
def test_lemma21_random(seed, kind, r, n):
    rng = SplitMix64(seed)
    ch = Chart.complex(n)
    X, Y = gen.vector(rng, ch, 2), gen.vector(rng, ch, 2, rational=True)
    if kind == "zero":
        con = Connection.trivial(ch, r)
    elif kind == "random":
        con = gen.connection(rng, ch, r, 2)
    else:
        con = chern_connection(gen.hermitian_metric(rng, ch, r))
    e = BundleValuedForm([gen.form(rng, ch, 2) for _ in range(r)], con)
    assert lemma21_residual(X, Y, e).is_zero()


def test_lemma21_equal_fields():
    X = C("(+ (* z1 @z2) @zb1)")
    e = rank1("(+ (* z2 dz1) (wedge dz2 dzb2))", "(* z1 dzb1)")
    assert lemma21_residual(X, X, e).is_zero()


def test_lemma21_degree_two_component():
    X, Y = C("(+ (* z1 zb2 @z2) @zb1)"), C("(* z2 z2 @z1)")
    e = rank1("(+ (* z1 (wedge dz1 dzb1)) (* zb2 (wedge dz2 dzb2)))", "(* z1 dzb1)")
    assert lemma21_residual(X, Y, e).is_zero()


# double contraction and Cartan formula ----------------------------------------------


def test_cd1_examples():
    assert cd1_residual(C("@z1"), C("@zb1"), Form.zero(C2), C("dzb1")).is_zero()
    assert cd1_residual(C("@z1"), C("@zb1"), C("dz1"), C("dzb1")).is_zero()


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2))
def test_cd1_random(seed, k):
    rng = SplitMix64(seed)
    X, Y = gen.vector(rng, C2, 2), gen.vector(rng, C2, 2)
    tau, theta = gen.form(rng, C2, 2, degree=k), gen.form(rng, C2, 2, degree=1)
    assert cd1_residual(X, Y, tau, theta).is_zero()


def test_cd1_rejects_non_one_form():
    with pytest.raises(ValueError):
        cd1_residual(C("@z1"), C("@z2"), C("dz1"), C("(wedge dz1 dz2)"))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_cartan_flat_matches_classical(seed):
    rng = SplitMix64(seed)
    X = gen.vector(rng, C2, 2)
    e = trivial_bundle_form([gen.form(rng, C2, 2)], C2)
    assert cartan_bundle_residual(X, e).is_zero()
    assert classical_lie_check(X, e).is_zero()


def test_cartan_zero_form():
    e = rank1("0", "(* z1 dz2)")
    assert cartan_bundle_residual(C("(* z2 @z1)"), e).is_zero()
