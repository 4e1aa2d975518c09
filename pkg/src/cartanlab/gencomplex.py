"""Sections of ``T + wedge T*``, Courant-type brackets and the Clifford-style action on forms.

A :class:`GeneralizedSection` is ``X + xi`` with ``xi`` of any (mixed) degree;
it acts on forms by ``(X + xi) . a = iota_X a + xi ^ a``.  A
:class:`GeneralizedWord` is a formal sum of wedge words ``A_1 ^ ... ^ A_k``
acting by ``A_1 . (A_2 . ( ... (A_k . a)))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .bundle import BundleValuedForm, chern_connection, covariant_derivative
from .forms import Form, VectorField, contract, exterior_d, lie_bracket, lie_derivative, wedge
from .scalar import Chart, ChartError, Scalar


class PreconditionError(ValueError):
    """Inputs outside the class on which an identity is asserted."""


HALF = Fraction(1, 2)


def _check(*objs):
    chart = objs[0].chart
    for o in objs[1:]:
        if o.chart != chart:
            raise ChartError(f"chart mismatch: {chart} vs {o.chart}")
    return chart


def _drop_scalar_part(a: Form) -> Form:
    return Form(a.chart, {w: c for w, c in a.terms.items() if w})


class GeneralizedSection:
    """``X + xi`` with ``X`` a vector field and ``xi`` a form of any degree."""

    __slots__ = ("X", "xi")
    __hash__ = None

    def __init__(self, X: VectorField, xi: Form):
        if X.chart != xi.chart:
            raise ChartError("vector and form parts live on different charts")
        self.X = X
        self.xi = xi

    @property
    def chart(self) -> Chart:
        return self.X.chart

    @classmethod
    def vector(cls, X: VectorField) -> "GeneralizedSection":
        return cls(X, Form.zero(X.chart))

    @classmethod
    def form(cls, xi: Form) -> "GeneralizedSection":
        return cls(VectorField(xi.chart), xi)

    @classmethod
    def zero(cls, chart: Chart) -> "GeneralizedSection":
        return cls(VectorField(chart), Form.zero(chart))

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.xi.is_zero()

    def __add__(self, other):
        _check(self, other)
        return GeneralizedSection(self.X + other.X, self.xi + other.xi)

    def __neg__(self):
        return GeneralizedSection(-self.X, -self.xi)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return GeneralizedSection(self.X * f, self.xi * f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GeneralizedSection):
            return NotImplemented
        return self.X == other.X and self.xi == other.xi

    def act(self, a: Form) -> Form:
        return contract(self.X, a) + wedge(self.xi, a)

    def to_sexpr(self) -> str:
        from .sexpr import print_gsec

        return print_gsec(self)

    def __repr__(self):
        return f"GeneralizedSection({self.to_sexpr()})"


class GeneralizedWord:
    """Formal sum of wedge words of generalized sections."""

    __slots__ = ("chart", "terms")
    __hash__ = None

    def __init__(self, chart: Chart, terms=()):
        terms = tuple(tuple(t) for t in terms)
        for t in terms:
            if not t:
                raise ValueError("words have length at least 1")
            for s in t:
                if s.chart != chart:
                    raise ChartError("letter on a different chart")
        self.chart = chart
        self.terms = terms

    @classmethod
    def of(cls, *letters: GeneralizedSection) -> "GeneralizedWord":
        return cls(letters[0].chart, (letters,))

    def lengths(self) -> set:
        return {len(t) for t in self.terms}

    def length(self) -> int:
        ls = self.lengths()
        if len(ls) != 1:
            raise ValueError(f"word lengths are not uniform: {sorted(ls)}")
        return ls.pop()

    def letters(self):
        for t in self.terms:
            yield from t

    def __add__(self, other):
        _check(self, other)
        return GeneralizedWord(self.chart, self.terms + other.terms)

    def __mul__(self, f):
        return GeneralizedWord(self.chart, tuple((t[0] * f,) + t[1:] for t in self.terms))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def wedge(self, other: "GeneralizedWord") -> "GeneralizedWord":
        _check(self, other)
        return GeneralizedWord(self.chart, tuple(a + b for a in self.terms for b in other.terms))

    def act(self, a: Form) -> Form:
        return dot_action(self, a)

    def to_sexpr(self) -> str:
        from .sexpr import print_gword

        return print_gword(self)

    def __repr__(self):
        return f"GeneralizedWord({self.to_sexpr()})"


@dataclass(frozen=True)
class IsotropicFrame:
    """Sections ``f d_a`` (``a`` in ``split``) plus ``g dx^b`` (``b`` not in ``split``)."""

    chart: Chart
    split: frozenset

    def __post_init__(self):
        object.__setattr__(self, "split", frozenset(self.chart.index(g) for g in self.split))

    @classmethod
    def holomorphic(cls, chart: Chart) -> "IsotropicFrame":
        """Holomorphic frame vectors with antiholomorphic coframe forms."""
        chart.require_complex()
        return cls(chart, frozenset(chart.holomorphic))

    @property
    def vector_indices(self) -> tuple:
        return tuple(sorted(self.split))

    @property
    def form_indices(self) -> tuple:
        return tuple(g for g in range(self.chart.ngens) if g not in self.split)

    def contains(self, A: GeneralizedSection) -> bool:
        if A.chart != self.chart:
            return False
        if any(g not in self.split for g in A.X.comps):
            return False
        return all(len(w) == 1 and w[0] not in self.split for w in A.xi.terms)

    def check_word(self, W: GeneralizedWord):
        for s in W.letters():
            if not self.contains(s):
                raise PreconditionError(f"letter {s.to_sexpr()} is not in the isotropic frame")


# ---------------------------------------------------------------------------
# pairing, brackets, action


def inner_product(A: GeneralizedSection, B: GeneralizedSection) -> Scalar:
    """``(iota_X eta + iota_Y xi) / 2`` using only the 1-form parts of ``xi, eta``."""
    chart = _check(A, B)
    s = contract(A.X, B.xi.component(1)) + contract(B.X, A.xi.component(1))
    return s.coefficient(()) * HALF if s else Scalar.const(chart, 0)


def courant_bracket(A: GeneralizedSection, B: GeneralizedSection) -> GeneralizedSection:
    """``[X,Y] + L_X eta - L_Y xi - d(iota_X eta - iota_Y xi) / 2``."""
    _check(A, B)
    X, Y = A.X, B.X
    xi, eta = _drop_scalar_part(A.xi), _drop_scalar_part(B.xi)
    half = exterior_d(contract(X, eta) - contract(Y, xi)) * HALF
    form = lie_derivative(X, eta) - lie_derivative(Y, xi) - half
    return GeneralizedSection(lie_bracket(X, Y), form)


def _require_odd(R: Form):
    if any(k % 2 == 0 for k in R.degrees()):
        raise ValueError("twisting form must have odd degree")


def twisted_courant(A: GeneralizedSection, B: GeneralizedSection, R: Form) -> GeneralizedSection:
    """``[A,B] + iota_Y iota_X R``; the twist may have any degree."""
    _check(A, B, R)
    _require_odd(R)
    c = courant_bracket(A, B)
    if R.is_zero():
        return c
    return GeneralizedSection(c.X, c.xi + contract(B.X, contract(A.X, R)))


def dot_action(W, a: Form) -> Form:
    """``(A_1 ^ ... ^ A_k) . a = A_1 . (A_2 . ... (A_k . a))``, summed over the terms of ``W``."""
    if isinstance(W, GeneralizedSection):
        _check(W, a)
        return W.act(a)
    _check(W, a)
    out = Form.zero(a.chart)
    for t in W.terms:
        v = a
        for s in reversed(t):
            v = s.act(v)
            if v.is_zero():
                break
        out = out + v
    return out


def dot_action_bundle(W, e: BundleValuedForm) -> BundleValuedForm:
    return e.map(lambda c: dot_action(W, c))


def gen_schouten(A: GeneralizedWord, B: GeneralizedWord, R: Form | None = None) -> GeneralizedWord:
    """``sum_{i,j} (-1)^{i+j} [A_i,B_j]_R ^ A_1..^A_i..A_p ^ B_1..^B_j..B_q``, bilinear over terms."""
    chart = _check(A, B)
    R = Form.zero(chart) if R is None else R
    out = []
    for ta in A.terms:
        for tb in B.terms:
            for i, Ai in enumerate(ta, 1):
                for j, Bj in enumerate(tb, 1):
                    br = twisted_courant(Ai, Bj, R)
                    if br.is_zero():
                        continue
                    if (i + j) & 1:
                        br = -br
                    rest = ta[: i - 1] + ta[i:] + tb[: j - 1] + tb[j:]
                    out.append((br,) + rest)
    return GeneralizedWord(chart, out)


def twisted_de_rham(a: Form, R: Form) -> Form:
    """``d a + (-1)^k R ^ a`` for ``R`` of pure degree ``k``."""
    _check(a, R)
    if R.is_zero():
        return exterior_d(a)
    ks = R.degrees()
    if len(ks) != 1:
        raise ValueError("twisted_de_rham needs a homogeneous twisting form")
    k = ks.pop()
    tw = wedge(R, a)
    return exterior_d(a) + (-tw if k & 1 else tw)


def twisted_de_rham_odd(a: Form, R: Form) -> Form:
    """``d_R`` for an odd form ``R`` of possibly mixed degree, signed per component (``d - R ^``)."""
    _require_odd(R)
    return exterior_d(a) - wedge(R, a)


def twisted_de_rham_matrix(comps, R) -> list:
    """Component ``j``: ``d eta_j + (-1)^k sum_i R_ij ^ eta_i`` for a matrix ``R`` of ``k``-forms."""
    comps = list(comps)
    out = []
    for j in range(len(comps)):
        acc = exterior_d(comps[j])
        for i, eta in enumerate(comps):
            r = R[i][j]
            if r.is_zero() or eta.is_zero():
                continue
            (k,) = r.degrees()
            tw = wedge(r, eta)
            acc = acc + (-tw if k & 1 else tw)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# residuals


def gualtieri_residual(A: GeneralizedSection, B: GeneralizedSection, rho: Form, pairing: bool = True) -> Form:
    """``A.B.d rho - [d(B.A.rho) + B.d(A.rho) - A.d(B.rho) + [A,B].rho - d<A,B> ^ rho]``.

    ``pairing=False`` omits the last term, which only vanishes for isotropic pairs.
    """
    _check(A, B, rho)
    d = exterior_d
    act = dot_action
    lhs = act(A, act(B, d(rho)))
    rhs = d(act(B, act(A, rho))) + act(B, d(act(A, rho))) - act(A, d(act(B, rho))) + act(courant_bracket(A, B), rho)
    if pairing:
        rhs = rhs - wedge(d(Form.scalar(inner_product(A, B))), rho)
    return lhs - rhs


def initial2_residual(A: GeneralizedSection, B: GeneralizedSection, R: Form, rho: Form) -> Form:
    """``(A.B).(R ^ rho) - [R ^ (B.A.rho) + B.(R ^ A.rho) - A.(R ^ B.rho) - iota_Y iota_X R ^ rho]``."""
    _check(A, B, R, rho)
    if len(R.degrees()) > 1:
        raise ValueError("R must be homogeneous")
    _require_odd(R)
    act = dot_action
    lhs = act(A, act(B, wedge(R, rho)))
    rhs = (
        wedge(R, act(B, act(A, rho)))
        + act(B, wedge(R, act(A, rho)))
        - act(A, wedge(R, act(B, rho)))
        - wedge(contract(B.X, contract(A.X, R)), rho)
    )
    return lhs - rhs


def prop42_terms(A: GeneralizedWord, B: GeneralizedWord, R: Form, rho: Form) -> dict:
    p, q = A.length(), B.length()
    dR = lambda a: twisted_de_rham_odd(a, R)  # noqa: E731
    act = dot_action
    sg = lambda e: -1 if e & 1 else 1  # noqa: E731
    return {
        "lhs": dR(act(A, act(B, rho))),
        "A_dR_B": act(A, dR(act(B, rho))) * sg(p),
        "B_dR_A": act(B, dR(act(A, rho))) * sg((p - 1) * q),
        "bracket": act(gen_schouten(A, B, R), rho) * sg(p - 1),
        "AB_dR": act(A, act(B, dR(rho))) * sg(p + q + 1),
    }


def prop42_residual(A: GeneralizedWord, B: GeneralizedWord, R: Form, rho: Form, frame: IsotropicFrame) -> Form:
    """Graded twisted commutator identity for words of isotropic letters."""
    _check(A, B, R, rho)
    _require_odd(R)
    frame.check_word(A)
    frame.check_word(B)
    t = prop42_terms(A, B, R, rho)
    return t["lhs"] - (t["A_dR_B"] + t["B_dR_A"] + t["bracket"] + t["AB_dR"])


def _claim43_operator(A0: GeneralizedSection, R: Form, a: Form) -> Form:
    """``L_X a + d xi ^ a - iota_X R ^ a``."""
    return lie_derivative(A0.X, a) + wedge(exterior_d(A0.xi), a) - wedge(contract(A0.X, R), a)


def claim43_residual(A0: GeneralizedSection, C: GeneralizedSection, R: Form, alpha: Form) -> Form:
    """``[L_X + d xi ^ - iota_X R ^, C.] alpha - [A0,C]_R . alpha`` for a pair with zero pairing."""
    _check(A0, C, R, alpha)
    _require_odd(R)
    if inner_product(A0, C):
        raise PreconditionError("the pair must have zero inner product")
    op = _claim43_operator
    lhs = op(A0, R, dot_action(C, alpha)) - dot_action(C, op(A0, R, alpha))
    return lhs - dot_action(twisted_courant(A0, C, R), alpha)


def probe_forms(chart: Chart) -> list:
    """Every coordinate monomial form ``dx^w`` (all increasing words, degree 0 included)."""
    return [Form.basis(chart, w) for k in range(chart.ngens + 1) for w in combinations(range(chart.ngens), k)]


def claim43_operator_residuals(A0: GeneralizedSection, C: GeneralizedSection, R: Form) -> list:
    """The claim as an operator identity, tested on :func:`probe_forms` (the operators are C-linear)."""
    return [claim43_residual(A0, C, R, a) for a in probe_forms(A0.chart)]


def cor44_residual(A: GeneralizedWord, B: GeneralizedWord, R: Form, rho: Form, frame: IsotropicFrame) -> Form:
    """``d_R(A.B.rho) - [A.d_R(B.rho) + B.d_R(A.rho) - [A,B]_R.rho - A.B.d_R rho]`` for 2-words, 1-form ``R``."""
    _check(A, B, R, rho)
    if A.length() != 2 or B.length() != 2:
        raise ValueError("cor44 takes words of length 2")
    if R.degrees() - {1}:
        raise ValueError("cor44 takes a 1-form R")
    frame.check_word(A)
    frame.check_word(B)
    dR = lambda a: twisted_de_rham(a, R)  # noqa: E731
    act = dot_action
    lhs = dR(act(A, act(B, rho)))
    rhs = act(A, dR(act(B, rho))) + act(B, dR(act(A, rho))) - act(gen_schouten(A, B, R), rho) - act(A, act(B, dR(rho)))
    return lhs - rhs


# ---------------------------------------------------------------------------
# polyvector-valued forms as words


def vvf_word(phi) -> GeneralizedWord:
    """``sum_i (0 + phi^i) ^ (d_i + 0)`` for ``phi = sum_i phi^i (x) d_i`` of polyvector degree 1."""
    chart = phi.chart
    terms = []
    for (P, Q), c in sorted(phi.terms.items()):
        if len(P) != 1:
            raise ValueError("vvf_word takes polyvector degree 1")
        form = Form(chart, {Q: c})
        terms.append((GeneralizedSection.form(form), GeneralizedSection.vector(VectorField.basis(chart, P[0]))))
    return GeneralizedWord(chart, terms)


def _bundle_d_R(e: BundleValuedForm, R) -> BundleValuedForm:
    return e.with_components(twisted_de_rham_matrix(e.components, R))


def cor45_terms(phi1, phi2, omega: BundleValuedForm, h) -> dict:
    """The five matched pairs ``(word side, contraction side)`` for 1-words built from ``phi1, phi2``.

    ``R = -theta`` with ``theta`` the Chern connection of ``h``; ``omega`` is
    re-attached to that connection.
    """
    from .polyvector import bundle_vvf_contract as C
    from .polyvector import vvf_bracket

    chart = _check(phi1, phi2, omega)
    con = chern_connection(h)
    if con.rank != omega.rank:
        raise ValueError(f"metric rank {con.rank} does not match form rank {omega.rank}")
    if con.chart != chart:
        raise ChartError("metric lives on a different chart")
    omega = BundleValuedForm(omega.components, con)
    R = [[-t for t in row] for row in con.theta]
    A, B = vvf_word(phi1), vvf_word(phi2)
    frame = IsotropicFrame.holomorphic(chart)
    frame.check_word(A)
    frame.check_word(B)
    act = lambda W, e: dot_action_bundle(W, e)  # noqa: E731
    dR = lambda e: _bundle_d_R(e, R)  # noqa: E731
    nab = covariant_derivative
    # degree-1 twisting forms have iota_Y iota_X R = 0, so the twist drops out of [A,B]_R
    AB = gen_schouten(A, B)
    return {
        "bracket": (act(AB, omega), C(vvf_bracket(phi1, phi2), omega)),
        "A_dR_B": (act(A, dR(act(B, omega))), C(phi1, nab(C(phi2, omega)))),
        "B_dR_A": (act(B, dR(act(A, omega))), C(phi2, nab(C(phi1, omega)))),
        "dR_AB": (dR(act(A, act(B, omega))), nab(C(phi2, C(phi1, omega)))),
        "AB_dR": (act(A, act(B, dR(omega))), C(phi2, C(phi1, nab(omega)))),
    }


def cor45_crosscheck(phi1, phi2, omega: BundleValuedForm, h) -> dict:
    """Word-side residual, contraction-side residual and the five term differences."""
    from .polyvector import thm34_residual

    t = cor45_terms(phi1, phi2, omega, h)
    w = {k: v[0] for k, v in t.items()}
    word_res = w["bracket"] - (w["A_dR_B"] + w["B_dR_A"] - w["dR_AB"] - w["AB_dR"])
    con = chern_connection(h)
    vec_res = thm34_residual(phi1, phi2, BundleValuedForm(omega.components, con), scope="any")
    out = {"word_residual": word_res, "vector_residual": vec_res, "routes": word_res - vec_res}
    for k, (a, b) in t.items():
        out["term_" + k] = a - b
    return out
