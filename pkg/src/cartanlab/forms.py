"""Differential forms and vector fields on a single chart.

Forms are stored as ``{word: Scalar}`` where a word is a strictly increasing
tuple of coframe indices; coframe index ``g`` is ``d`` of generator ``g``.  On a
complex chart holomorphic indices precede antiholomorphic ones, so the first
``p`` letters of a word of bidegree ``(p, q)`` are the ``dz`` factors.
"""
from __future__ import annotations

from fractions import Fraction

from .scalar import Chart, ChartError, PoleError, Scalar


def _sign_merge(a: tuple, b: tuple):
    """Sign and sorted word of ``dx^a ^ dx^b``, or ``None`` if they overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sb = set(b)
    if any(i in sb for i in a):
        return None
    inv = 0
    for i in a:
        for j in b:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


def _insert_front(g: int, word: tuple):
    """``dx^g ^ dx^word`` as (sign, word) or None."""
    pos = 0
    for i in word:
        if i == g:
            return None
        if i < g:
            pos += 1
        else:
            break
    return (-1 if pos & 1 else 1), word[:pos] + (g,) + word[pos:]


def _remove(g: int, word: tuple):
    """``iota_{d/dx^g} dx^word`` as (sign, word) or None."""
    try:
        pos = word.index(g)
    except ValueError:
        return None
    return (-1 if pos & 1 else 1), word[:pos] + word[pos + 1:]


class Form:
    """A (possibly mixed-degree) differential form.  Immutable."""

    __slots__ = ("chart", "terms")
    __hash__ = None

    def __init__(self, chart: Chart, terms: dict | None = None):
        self.chart = chart
        self.terms = terms or {}

    @classmethod
    def zero(cls, chart: Chart) -> "Form":
        return cls(chart, {})

    @classmethod
    def scalar(cls, f: Scalar) -> "Form":
        return cls(f.chart, {(): f} if f else {})

    @classmethod
    def const(cls, chart: Chart, value) -> "Form":
        return cls.scalar(Scalar.const(chart, value))

    @classmethod
    def basis(cls, chart: Chart, word, coef=1) -> "Form":
        """``coef * dx^{w1} ^ dx^{w2} ^ ...``; the word need not be sorted."""
        word = tuple(chart.index(w) for w in word)
        f = Scalar.const(chart, coef) if not isinstance(coef, Scalar) else coef
        out = Form.scalar(f)
        for g in reversed(word):
            out = Form(chart, {(g,): Scalar.const(chart, 1)}).wedge(out)
        return out

    @classmethod
    def from_terms(cls, chart: Chart, items) -> "Form":
        out: dict = {}
        for word, c in items:
            _acc(out, tuple(word), c)
        return cls(chart, out)

    # structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degree(self) -> int:
        """Degree of a homogeneous form (0 for the zero form)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("form is not homogeneous")
        return ds.pop() if ds else 0

    def bidegree(self, word: tuple) -> tuple[int, int]:
        n = self.chart.dim
        p = sum(1 for i in word if i < n)
        return p, len(word) - p

    def bidegrees(self) -> set[tuple[int, int]]:
        self.chart.require_complex()
        return {self.bidegree(w) for w in self.terms}

    def component(self, degree: int) -> "Form":
        return Form(self.chart, {w: c for w, c in self.terms.items() if len(w) == degree})

    def bicomponent(self, p: int, q: int) -> "Form":
        return Form(self.chart, {w: c for w, c in self.terms.items() if self.bidegree(w) == (p, q)})

    def homogeneous_parts(self):
        for k in sorted(self.degrees()):
            yield k, self.component(k)

    def coefficient(self, word) -> Scalar:
        return self.terms.get(tuple(word), Scalar.const(self.chart, 0))

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Form"):
        if other.chart != self.chart:
            raise ChartError(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return Form(self.chart, out)

    def __neg__(self) -> "Form":
        return Form(self.chart, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, -c)
        return Form(self.chart, out)

    def __mul__(self, f) -> "Form":
        """Multiply by a Scalar or number."""
        if isinstance(f, Form):
            raise TypeError("use wedge() to multiply forms")
        out = {}
        for w, c in self.terms.items():
            v = c * f
            if v:
                out[w] = v
        return Form(self.chart, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self - other).is_zero()

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    def parity(self) -> "Form":
        """``(-1)^deg`` applied degreewise."""
        return Form(self.chart, {w: (-c if len(w) & 1 else c) for w, c in self.terms.items()})

    def eval_at(self, point) -> dict:
        return {w: c.eval_at(point) for w, c in self.terms.items()}

    def __repr__(self):
        from .sexpr import print_form

        return f"Form({print_form(self)})"


def _acc(out: dict, word: tuple, c: Scalar):
    cur = out.get(word)
    v = c if cur is None else cur + c
    if v:
        out[word] = v
    elif cur is not None:
        del out[word]


class VectorField:
    """``sum_g X^g d/dx^g``; frame indices are generator indices."""

    __slots__ = ("chart", "comps")
    __hash__ = None

    def __init__(self, chart: Chart, comps: dict | None = None):
        self.chart = chart
        self.comps = {g: c for g, c in (comps or {}).items() if c}

    @classmethod
    def basis(cls, chart: Chart, gen, coef=1) -> "VectorField":
        f = coef if isinstance(coef, Scalar) else Scalar.const(chart, coef)
        return cls(chart, {chart.index(gen): f})

    def component(self, gen) -> Scalar:
        return self.comps.get(self.chart.index(gen), Scalar.const(self.chart, 0))

    def is_zero(self) -> bool:
        return not self.comps

    def is_type_10(self) -> bool:
        return all(g < self.chart.dim for g in self.comps)

    def __add__(self, other: "VectorField") -> "VectorField":
        _same(self.chart, other.chart)
        out = dict(self.comps)
        for g, c in other.comps.items():
            _acc(out, g, c)
        return VectorField(self.chart, out)

    def __neg__(self):
        return VectorField(self.chart, {g: -c for g, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return VectorField(self.chart, {g: c * f for g, c in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self - other).is_zero()

    def apply(self, f: Scalar) -> Scalar:
        """Directional derivative ``X(f)``."""
        out = Scalar.const(self.chart, 0)
        for g, c in self.comps.items():
            d = f.partial(g)
            if d:
                out = out + c * d
        return out

    def __repr__(self):
        from .sexpr import print_vector

        return f"VectorField({print_vector(self)})"


def _same(a: Chart, b: Chart):
    if a != b:
        raise ChartError(f"chart mismatch: {a} vs {b}")


# ---------------------------------------------------------------------------
# core operators


def wedge(a: Form, b: Form) -> Form:
    _same(a.chart, b.chart)
    out: dict = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            m = _sign_merge(wa, wb)
            if m is None:
                continue
            s, w = m
            c = ca * cb
            _acc(out, w, c if s > 0 else -c)
    return Form(a.chart, out)


def wedge_all(*forms: Form) -> Form:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def _differential(a: Form, gens) -> Form:
    out: dict = {}
    for w, c in a.terms.items():
        for g in gens:
            ins = _insert_front(g, w)
            if ins is None:
                continue
            dc = c.partial(g)
            if not dc:
                continue
            s, nw = ins
            _acc(out, nw, dc if s > 0 else -dc)
    return Form(a.chart, out)


def exterior_d(a: Form) -> Form:
    return _differential(a, range(a.chart.ngens))


def dif(f: Scalar) -> Form:
    return exterior_d(Form.scalar(f))


def delop(a: Form) -> Form:
    """Holomorphic part ``del`` of ``d``."""
    return _differential(a, a.chart.holomorphic)


def delbar(a: Form) -> Form:
    return _differential(a, a.chart.antiholomorphic)


def contract(X: VectorField, a: Form) -> Form:
    """Interior product ``iota_X a``."""
    _same(X.chart, a.chart)
    out: dict = {}
    comps = X.comps
    for w, c in a.terms.items():
        for pos, i in enumerate(w):
            x = comps.get(i)
            if x is None:
                continue
            v = c * x
            _acc(out, w[:pos] + w[pos + 1:], -v if pos & 1 else v)
    return Form(a.chart, out)


def contract_index(g: int, a: Form) -> Form:
    """``iota_{d/dx^g} a`` for a frame index."""
    out: dict = {}
    for w, c in a.terms.items():
        r = _remove(g, w)
        if r is None:
            continue
        s, nw = r
        _acc(out, nw, c if s > 0 else -c)
    return Form(a.chart, out)


def lie_derivative(X: VectorField, a: Form) -> Form:
    """``L_X a = iota_X da + d iota_X a``."""
    _same(X.chart, a.chart)
    return contract(X, exterior_d(a)) + exterior_d(contract(X, a))


def lie_derivative_flow(X: VectorField, a: Form) -> Form:
    """Lie derivative from the derivation rule, without Cartan's formula.

    ``L_X f = X(f)`` and ``L_X dx^i = d(X^i)``, extended over wedge products.
    Kept independent of :func:`lie_derivative` so each can check the other.
    """
    _same(X.chart, a.chart)
    chart = a.chart
    out = Form.zero(chart)
    dX = {i: dif(c) for i, c in X.comps.items()}
    for w, c in a.terms.items():
        xc = X.apply(c)
        if xc:
            out = out + Form(chart, {w: xc})
        for pos, i in enumerate(w):
            if i not in dX:
                continue
            left = Form.basis(chart, w[:pos], c)
            right = Form.basis(chart, w[pos + 1:])
            out = out + wedge_all(left, dX[i], right)
    return out


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X,Y]^j = X^i d_i Y^j - Y^i d_i X^j``."""
    _same(X.chart, Y.chart)
    out: dict = {}
    for j in X.comps.keys() | Y.comps.keys():
        yj = Y.comps.get(j)
        xj = X.comps.get(j)
        s = Scalar.const(X.chart, 0)
        if yj is not None:
            s = s + X.apply(yj)
        if xj is not None:
            s = s - Y.apply(xj)
        if s:
            out[j] = s
    return VectorField(X.chart, out)


# ---------------------------------------------------------------------------
# residuals of the scalar-valued commutator identities


def lie5_residual(X: VectorField, Y: VectorField, tau: Form) -> Form:
    """``iota_[X,Y] tau - L_X(iota_Y tau) + iota_Y(L_X tau)``; identically zero."""
    lhs = contract(lie_bracket(X, Y), tau)
    return lhs - lie_derivative(X, contract(Y, tau)) + contract(Y, lie_derivative(X, tau))


def st_residual(X: VectorField, Y: VectorField, tau: Form) -> Form:
    """Contracted-commutator identity with ``d``, in its expanded five-term form."""
    lhs = contract(Y, contract(X, exterior_d(tau)))
    rhs = (
        contract(X, exterior_d(contract(Y, tau)))
        + exterior_d(contract(X, contract(Y, tau)))
        - contract(Y, exterior_d(contract(X, tau)))
        - contract(lie_bracket(X, Y), tau)
    )
    return lhs - rhs


def one_form_pairing_residual(X: VectorField, Y: VectorField, tau: Form) -> Scalar:
    """``dtau(X,Y) - X(tau(Y)) + Y(tau(X)) + tau([X,Y])`` with ``dtau(X,Y) = iota_Y iota_X dtau``."""
    if tau.degrees() - {1}:
        raise ValueError("tau must be a 1-form")
    chart = tau.chart
    dtxy = contract(Y, contract(X, exterior_d(tau))).coefficient(())
    ty = contract(Y, tau).coefficient(())
    tx = contract(X, tau).coefficient(())
    txy = contract(lie_bracket(X, Y), tau).coefficient(())
    out = dtxy - X.apply(ty) + Y.apply(tx) + txy
    return out if out else Scalar.const(chart, 0)


# ---------------------------------------------------------------------------
# numeric oracle


def finite_difference_check(a: Form, point, step) -> Fraction:
    """Max relative deviation between ``d a`` and central differences of ``a``.

    Everything is evaluated in exact rationals, so the only error is the
    truncation error of the stencil.  Entries whose exact value is zero are
    compared in absolute terms.
    """
    if isinstance(a, Scalar):
        a = Form.scalar(a)
    chart = a.chart
    h = Fraction(step)
    if h <= 0:
        raise ValueError("step must be positive")
    from .scalar import _point_values

    base = [Fraction(int(v.numerator), int(v.denominator)) for v in _point_values(chart, point)]
    da = exterior_d(a)
    exact = {w: c.eval_at(base) for w, c in da.terms.items()}
    approx: dict = {}
    for w, c in a.terms.items():
        for g in range(chart.ngens):
            ins = _insert_front(g, w)
            if ins is None:
                continue
            s, nw = ins
            hi = list(base)
            lo = list(base)
            hi[g] += h
            lo[g] -= h
            try:
                diff = (c.eval_at(hi) - c.eval_at(lo)) / (2 * h)
            except PoleError as exc:
                raise PoleError("pole inside the finite-difference stencil") from exc
            approx[nw] = approx.get(nw, Fraction(0)) + s * diff
    worst = Fraction(0)
    for w in exact.keys() | approx.keys():
        e = exact.get(w, Fraction(0))
        f = approx.get(w, Fraction(0))
        dev = abs(f - e) / abs(e) if e else abs(f)
        worst = max(worst, dev)
    return worst
