import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanlab import generators as gen
from cartanlab.bundle import BundleValuedForm
from cartanlab.rng import SplitMix64
from cartanlab.scalar import Chart, Scalar
from cartanlab.sexpr import ParseError, dumps, loads, loads_one
from conftest import C

C2, R4 = Chart.complex(2), Chart.real(4)
seeds = st.integers(0, 2**64 - 1)


def roundtrip(v):
    return loads_one(dumps(v))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_roundtrip_kernel_values(seed):
    rng = SplitMix64(seed)
    values = [
        gen.scalar(rng, C2, 2, rational=True),
        gen.form(rng, C2, 2),
        gen.vector(rng, R4, 2),
        gen.vvf(rng, C2, 2, 1, 1),
        gen.hermitian_metric(rng, C2, 2),
    ]
    for v in values:
        assert roundtrip(v) == v


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_roundtrip_bundle_and_generalized(seed):
    rng = SplitMix64(seed)
    conn = gen.connection(rng, C2, 2, 1)
    e = BundleValuedForm([gen.form(rng, C2, 1), gen.form(rng, C2, 1)], conn)
    e2 = roundtrip(e)
    assert e2.components == e.components and e2.connection.theta == conn.theta
    A = gen.section(rng, R4, 2)
    assert roundtrip(A) == A
    W = gen.word(rng, R4, 1, 2)
    assert roundtrip(W).terms == W.terms


def test_scalar_expression_parses_to_scalar():
    s = C("(/ (+ z1 zb1) (+ 1 (* z1 zb1)))")
    assert isinstance(s, Scalar)
    assert dumps(s, with_chart=False) == dumps(roundtrip(s), with_chart=False)


def test_chart_directive_and_inference():
    vals = loads("(chart real 3) (* x1 dx3) (wedge dx1 dx2)")
    assert all(v.chart == Chart.real(3) for v in vals)
    assert loads_one("(* z2 dzb1)").chart == Chart.complex(2)


def test_operators_evaluate():
    assert C("(d (* z1 zb1))") == C("(+ (* zb1 dz1) (* z1 dzb1))")
    assert C("(del (* z1 zb1))") == C("(* zb1 dz1)")
    assert C("(delbar (* z1 zb1))") == C("(* z1 dzb1)")
    assert C("(conj (* 2 z1 zb2))") == C("(* 2 zb1 z2)")
    assert C("(partial z1 (* z1 z1 zb2))") == C("(* 2 z1 zb2)")


@pytest.mark.parametrize("text", ["(wedge dx1", "(frobnicate x1)", "(gsec (* x1 dx1) dx2)", "(chart real)"])
def test_malformed_input(text):
    with pytest.raises((ParseError, KeyError, ValueError)):
        loads(text)
