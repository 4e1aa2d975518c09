"""Polyvector-valued (0,q)-forms, their brackets and contractions.

Contraction convention: for ``phi = alpha (x) d_{P1} ^ ... ^ d_{Pp}``,

    phi _| a = alpha ^ (iota_{P1} o ... o iota_{Pp} a)

so a polyvector-valued form acts on forms the way its odd-variable
representative ``alpha theta_P`` acts as an operator, and
``(phi1 ^ phi2) _| a = phi1 _| (phi2 _| a)``.  The sign table that pins this
choice is in ``docs/signs.md``.
"""
from __future__ import annotations

from .bundle import BundleValuedForm, covariant_derivative
from .forms import Form, _acc, delbar, delop, exterior_d, wedge
from .scalar import Chart, ChartError, Scalar


def _merge(a: tuple, b: tuple):
    sb = set(b)
    if any(i in sb for i in a):
        return None
    inv = sum(1 for i in a for j in b if i > j)
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


class VectorValuedForm:
    """Element of ``A^{0,q}(wedge^p T^{1,0})`` as ``{(P, Q): Scalar}``.

    ``P`` is an increasing tuple of holomorphic frame indices, ``Q`` an
    increasing tuple of antiholomorphic coframe indices.  The term
    ``(P, Q) -> c`` is ``c dzb^Q (x) d_{P1} ^ ... ^ d_{Pp}``.
    """

    __slots__ = ("chart", "terms")
    __hash__ = None

    def __init__(self, chart: Chart, terms: dict | None = None):
        chart.require_complex()
        self.chart = chart
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def zero(cls, chart):
        return cls(chart, {})

    @classmethod
    def basis(cls, chart: Chart, P, Q, coef=1) -> "VectorValuedForm":
        P = tuple(chart.index(i) for i in P)
        Q = tuple(chart.index(i) for i in Q)
        c = coef if isinstance(coef, Scalar) else Scalar.const(chart, coef)
        s1 = _sort_sign(P)
        s2 = _sort_sign(Q)
        if s1 == 0 or s2 == 0:
            return cls(chart)
        return cls(chart, {(tuple(sorted(P)), tuple(sorted(Q))): c * (s1 * s2)})

    def is_zero(self):
        return not self.terms

    def degrees(self) -> set:
        return {(len(P), len(Q)) for P, Q in self.terms}

    def __add__(self, other):
        _same(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return VectorValuedForm(self.chart, out)

    def __neg__(self):
        return VectorValuedForm(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return VectorValuedForm(self.chart, {k: c * f for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorValuedForm):
            return NotImplemented
        return (self - other).is_zero()

    def form_part(self, P) -> Form:
        """The (0,q)-form coefficient of ``d_P``."""
        P = tuple(P)
        return Form(self.chart, {Q: c for (PP, Q), c in self.terms.items() if PP == P})

    def to_sexpr(self):
        from .sexpr import print_vvf

        return print_vvf(self)

    def __repr__(self):
        return f"VectorValuedForm({self.to_sexpr()})"


def _sort_sign(t):
    if len(set(t)) != len(t):
        return 0
    inv = sum(1 for i in range(len(t)) for j in range(i + 1, len(t)) if t[i] > t[j])
    return -1 if inv & 1 else 1


def _same(a, b):
    if a.chart != b.chart:
        raise ChartError(f"chart mismatch: {a.chart} vs {b.chart}")


def _iota_word(P: tuple, w: tuple):
    """``iota_{P1} o ... o iota_{Pp}`` applied to ``dx^w``: (sign, word) or None."""
    sign = 1
    for i in reversed(P):
        try:
            pos = w.index(i)
        except ValueError:
            return None
        if pos & 1:
            sign = -sign
        w = w[:pos] + w[pos + 1:]
    return sign, w


def vvf_contract(phi: VectorValuedForm, a: Form) -> Form:
    _same(phi, a)
    out: dict = {}
    for (P, Q), c in phi.terms.items():
        for w, f in a.terms.items():
            r = _iota_word(P, w)
            if r is None:
                continue
            s, rest = r
            m = _merge(Q, rest)
            if m is None:
                continue
            s2, nw = m
            v = c * f
            _acc(out, nw, v if s * s2 > 0 else -v)
    return Form(a.chart, out)


def form_contract_vvf(a: Form, psi: VectorValuedForm) -> Form:
    """``a _| psi = (-1)^{q(k+l-p)} psi _| a``, termwise."""
    out = Form.zero(a.chart)
    for (P, Q), c in psi.terms.items():
        single = VectorValuedForm(psi.chart, {(P, Q): c})
        for k in a.degrees():
            part = vvf_contract(single, a.component(k))
            if len(Q) * (k - len(P)) & 1:
                part = -part
            out = out + part
    return out


def vvf_wedge(phi: VectorValuedForm, psi: VectorValuedForm) -> VectorValuedForm:
    """``(a (x) P) ^ (b (x) R) = (-1)^{|P||b|} (a ^ b) (x) (P ^ R)``."""
    _same(phi, psi)
    out: dict = {}
    for (P1, Q1), c1 in phi.terms.items():
        for (P2, Q2), c2 in psi.terms.items():
            mq = _merge(Q1, Q2)
            mp = _merge(P1, P2)
            if mq is None or mp is None:
                continue
            s = mq[0] * mp[0]
            if len(P1) * len(Q2) & 1:
                s = -s
            v = c1 * c2
            _acc(out, (mp[1], mq[1]), v if s > 0 else -v)
    return VectorValuedForm(phi.chart, out)


def _half_bracket(F: VectorValuedForm, G: VectorValuedForm) -> dict:
    """``sum_i (F d<_{theta_i}) (d_{z^i} G)`` in the odd-variable picture."""
    out: dict = {}
    for (P1, Q1), c1 in F.terms.items():
        p1 = len(P1)
        for k, i in enumerate(P1):
            s0 = -1 if (p1 - 1 - k) & 1 else 1
            rest = P1[:k] + P1[k + 1:]
            for (P2, Q2), c2 in G.terms.items():
                dc = c2.partial(i)
                if not dc:
                    continue
                mq = _merge(Q1, Q2)
                mp = _merge(rest, P2)
                if mq is None or mp is None:
                    continue
                s = s0 * mq[0] * mp[0]
                if (p1 - 1) * len(Q2) & 1:
                    s = -s
                v = c1 * dc
                _acc(out, (mp[1], mq[1]), v if s > 0 else -v)
    return out


def sn_bracket(phi: VectorValuedForm, psi: VectorValuedForm) -> VectorValuedForm:
    """Schouten-Nijenhuis bracket extended over (0,q)-form coefficients.

    With ``a (x) d_P`` identified with ``a theta_P`` (odd ``theta_i`` standing
    for ``d_i``), ``[F,G] = sum_i (F d<_{theta_i})(d_i G) - (-1)^{(|F|-1)(|G|-1)}
    (G d<_{theta_i})(d_i F)``, ``|F| = p + q``.  Applied termwise.
    """
    _same(phi, psi)
    out: dict = {}
    for k1, c1 in phi.terms.items():
        F = VectorValuedForm(phi.chart, {k1: c1})
        dF = len(k1[0]) + len(k1[1])
        for k2, c2 in psi.terms.items():
            G = VectorValuedForm(psi.chart, {k2: c2})
            dG = len(k2[0]) + len(k2[1])
            for k, v in _half_bracket(F, G).items():
                _acc(out, k, v)
            sign = -1 if ((dF - 1) * (dG - 1)) & 1 else 1
            for k, v in _half_bracket(G, F).items():
                _acc(out, k, -v if sign > 0 else v)
    return VectorValuedForm(phi.chart, out)


def vvf_bracket(phi: VectorValuedForm, psi: VectorValuedForm) -> VectorValuedForm:
    """Bracket of two vector-valued forms of polyvector degree 1, coordinate formula.

    ``sum_{i,j} (phi^i ^ d_i psi^j - (-1)^{pq} psi^i ^ d_i phi^j) (x) d_j`` with
    ``p, q`` the form degrees of the (homogeneous pieces of) ``phi, psi``.
    """
    _same(phi, psi)
    if any(p != 1 for p, _ in phi.degrees() | psi.degrees()):
        raise ValueError("vvf_bracket needs polyvector degree 1")
    chart = phi.chart
    out: dict = {}
    for a, b, first in ((phi, psi, True), (psi, phi, False)):
        for (Pa, Qa), ca in a.terms.items():
            i = Pa[0]
            for (Pb, Qb), cb in b.terms.items():
                dcb = cb.partial(i)
                if not dcb:
                    continue
                m = _merge(Qa, Qb)
                if m is None:
                    continue
                s = m[0]
                if not first:
                    s = -s if not (len(Qa) * len(Qb) & 1) else s
                v = ca * dcb
                _acc(out, (Pb, m[1]), v if s > 0 else -v)
    return VectorValuedForm(chart, out)


# ---------------------------------------------------------------------------
# contraction against bundle-valued forms, Delta and diamond


def bundle_vvf_contract(phi: VectorValuedForm, eta: BundleValuedForm) -> BundleValuedForm:
    return eta.map(lambda c: vvf_contract(phi, c))


def holomorphic_volume(chart: Chart) -> Form:
    """``dz^1 ^ ... ^ dz^n``."""
    chart.require_complex()
    return Form(chart, {tuple(chart.holomorphic): Scalar.const(chart, 1)})


def delta_map(omega: Form, phi: VectorValuedForm) -> Form:
    """``Delta_omega phi = del(phi _| omega)``."""
    return delop(vvf_contract(phi, omega))


def diamond_map(eta: BundleValuedForm, phi: VectorValuedForm) -> BundleValuedForm:
    """``diamond_eta phi = nabla(phi _| eta)``."""
    if eta.chart != phi.chart:
        raise ChartError("chart mismatch")
    return covariant_derivative(bundle_vvf_contract(phi, eta))


# ---------------------------------------------------------------------------
# residuals


def _require_11(*phis):
    for phi in phis:
        if phi.degrees() - {(1, 1)}:
            raise ValueError("expected vector-valued (0,1)-forms, type (1,1)")


def _commutator_rhs(phi1, phi2, omega, op, full: bool):
    C = vvf_contract
    out = C(phi1, op(C(phi2, omega))) - op(C(phi2, C(phi1, omega))) + C(phi2, op(C(phi1, omega)))
    if full:
        out = out - C(phi2, C(phi1, op(omega)))
    return out


def prop32_residual(phi1: VectorValuedForm, phi2: VectorValuedForm, omega: Form) -> Form:
    """``[phi1,phi2] _| omega`` minus the three-term ``del`` expansion, for ``omega`` of type (n,*)."""
    _require_11(phi1, phi2)
    n = omega.chart.dim
    if any(p != n for p, _ in omega.bidegrees()):
        raise ValueError("omega must have holomorphic degree n")
    lhs = vvf_contract(vvf_bracket(phi1, phi2), omega)
    return lhs - _commutator_rhs(phi1, phi2, omega, delop, False)


def remark33_residual(phi1: VectorValuedForm, phi2: VectorValuedForm, omega: Form, flavor: str) -> Form:
    """Residual of the ``delbar`` (``bar``), ``del`` (``del``) or ``d`` (``d``) four-term identity."""
    _require_11(phi1, phi2)
    if flavor == "bar":
        return _commutator_rhs(phi1, phi2, omega, delbar, True)
    op = {"del": delop, "d": exterior_d}.get(flavor)
    if op is None:
        raise ValueError(f"unknown flavor {flavor!r}")
    lhs = vvf_contract(vvf_bracket(phi1, phi2), omega)
    return lhs - _commutator_rhs(phi1, phi2, omega, op, True)


def thm34_residual(phi1: VectorValuedForm, phi2: VectorValuedForm, eta: BundleValuedForm, scope: str = "n-star") -> BundleValuedForm:
    """Four-term identity with the Chern connection; ``scope`` is ``n-star`` or ``any``."""
    _require_11(phi1, phi2)
    if not eta.connection.is_type_10():
        raise ValueError("connection entries must have bidegree (1,0)")
    if scope not in ("n-star", "any"):
        raise ValueError(f"unknown scope {scope!r}")
    if scope == "n-star":
        n = eta.chart.dim
        for c in eta.components:
            if any(p != n for p, _ in c.bidegrees()):
                raise ValueError("scope n-star needs components of holomorphic degree n")
    C = bundle_vvf_contract
    nab = covariant_derivative
    lhs = C(vvf_bracket(phi1, phi2), eta)
    rhs = C(phi1, nab(C(phi2, eta))) - nab(C(phi2, C(phi1, eta))) + C(phi2, nab(C(phi1, eta))) - C(phi2, C(phi1, nab(eta)))
    return lhs - rhs


def prop36_signs(d1: int, d2: int) -> tuple[int, int, int]:
    """Signs ``(s1, s2, s3)`` in ``[f1,f2] _| w = s1 Delta(f1^f2) + s2 f2 _| Delta f1 + s3 f1 _| Delta f2``.

    ``d_i = p_i + q_i`` is the total degree.  Reduces to ``(-1, +1, +1)`` when
    both factors have type (1,1).
    """
    s1 = 1 if d1 & 1 else -1
    s2 = -1 if (d1 + (d1 + 1) * d2) & 1 else 1
    return s1, s2, 1


def prop36_residual(part: int, phi1: VectorValuedForm, phi2: VectorValuedForm, target, printed: bool = False):
    """Residual of the Delta/diamond reformulation.

    part 1: ``target`` a form of type (n,*), any ``p_i, q_i <= 2`` (graded
    signs from :func:`prop36_signs`; ``printed=True`` uses ``(-1, +1, +1)``
    regardless of degree).  part 2: any form, type (1,1) inputs.  part 3: a
    bundle-valued form with its connection.
    """
    if part == 1:
        omega = target
        n = omega.chart.dim
        if any(p != n for p, _ in omega.bidegrees()):
            raise ValueError("part 1 needs omega of holomorphic degree n")
        degs = phi1.degrees() | phi2.degrees()
        if any(p > 2 or q > 2 for p, q in degs):
            raise ValueError("supported range is p, q <= 2")
        if len(phi1.degrees()) > 1 or len(phi2.degrees()) > 1:
            raise ValueError("inputs must be homogeneous")
        (p1, q1), = phi1.degrees() or {(1, 0)}
        (p2, q2), = phi2.degrees() or {(1, 0)}
        s1, s2, s3 = (-1, 1, 1) if printed else prop36_signs(p1 + q1, p2 + q2)
        lhs = vvf_contract(sn_bracket(phi1, phi2), omega)
        rhs = (
            delta_map(omega, vvf_wedge(phi1, phi2)) * s1
            + vvf_contract(phi2, delta_map(omega, phi1)) * s2
            + vvf_contract(phi1, delta_map(omega, phi2)) * s3
        )
        return lhs - rhs
    _require_11(phi1, phi2)
    w = vvf_wedge(phi1, phi2)
    if part == 2:
        omega = target
        lhs = vvf_contract(vvf_bracket(phi1, phi2), omega)
        inner = (
            delta_map(omega, w)
            - vvf_contract(phi2, delta_map(omega, phi1))
            - vvf_contract(phi1, delta_map(omega, phi2))
            + vvf_contract(w, delop(omega))
        )
        return lhs + inner
    if part == 3:
        eta = target
        C = bundle_vvf_contract
        lhs = C(vvf_bracket(phi1, phi2), eta)
        inner = (
            diamond_map(eta, w)
            - C(phi2, diamond_map(eta, phi1))
            - C(phi1, diamond_map(eta, phi2))
            + C(w, covariant_derivative(eta))
        )
        return lhs + inner
    raise ValueError(f"unknown part {part}")


def right_contract(psi: VectorValuedForm, a: Form) -> Form:
    """``(iota_P a) ^ alpha``: contraction with the form part wedged on the right."""
    out: dict = {}
    for (P, Q), c in psi.terms.items():
        for w, f in a.terms.items():
            r = _iota_word(P, w)
            if r is None:
                continue
            s, rest = r
            m = _merge(rest, Q)
            if m is None:
                continue
            v = c * f
            _acc(out, m[1], v if s * m[0] > 0 else -v)
    return Form(a.chart, out)


def cr_residual(a: Form, psi: VectorValuedForm) -> Form:
    """Sign-rule coherence: ``a _| psi`` (signed from ``psi _| a``) against the right contraction."""
    return form_contract_vvf(a, psi) - right_contract(psi, a)


# ---------------------------------------------------------------------------
# holomorphic volume form: iota, sharp, Tian and Todorov


def iota_iso(phi: VectorValuedForm) -> Form:
    """``phi -> omega_0 _| phi`` on polyvector degree 1.

    Equals ``(-1)^{q(n-1)} phi _| omega_0`` on a (1,q) piece.
    """
    if any(p != 1 for p, _ in phi.degrees()):
        raise ValueError("iota_iso takes polyvector degree 1")
    return form_contract_vvf(holomorphic_volume(phi.chart), phi)


def iota_inverse(w: Form) -> VectorValuedForm:
    """Inverse of :func:`iota_iso` on forms of type (n-1, q)."""
    chart = w.chart
    n = chart.dim
    full = set(chart.holomorphic)
    out = {}
    for word, c in w.terms.items():
        p, q = w.bidegree(word)
        if p != n - 1:
            raise ValueError("iota_inverse needs holomorphic degree n-1")
        hol, Q = word[:p], word[p:]
        i = (full - set(hol)).pop()
        # omega_0 _| (dzb^Q (x) d_i) = (-1)^i dz^{hol} ^ dzb^Q
        out[((i,), Q)] = c * (-1 if i & 1 else 1)
    return VectorValuedForm(chart, out)


def sharp_map(a: Form) -> Form:
    """``eta ^ omega_0 -> eta`` on forms of type (n, q)."""
    chart = a.chart
    n = chart.dim
    out = {}
    for word, c in a.terms.items():
        p, q = a.bidegree(word)
        if p != n:
            raise ValueError("sharp_map needs holomorphic degree n")
        # dzb^Q ^ dz^{1..n} = (-1)^{qn} dz^{1..n} ^ dzb^Q
        out[word[n:]] = c * (-1 if (q * n) & 1 else 1)
    return Form(chart, out)


def tian_bracket(w1: Form, w2: Form) -> Form:
    """``[w1, w2] := iota [iota^-1 w1, iota^-1 w2]``."""
    return iota_iso(vvf_bracket(iota_inverse(w1), iota_inverse(w2)))


def tian_terms(w1: Form, w2: Form, printed: bool = False) -> dict:
    """The three right-hand terms of Tian's identity for (n-1,1)-forms.

    The two sharp terms carry ``(-1)^n``: ``w ^ eta`` with ``eta`` a 1-form
    moves ``eta`` past the ``n-1`` holomorphic slots of ``w`` plus one.
    ``printed=True`` drops that factor (correct for even ``n`` only).
    """
    n = w1.chart.dim
    for w in (w1, w2):
        if w.bidegrees() - {(n - 1, 1)}:
            raise ValueError("Tian's identity takes forms of type (n-1, 1)")
    s = 1 if printed or n % 2 == 0 else -1
    return {
        "exact": -delop(form_contract_vvf(w2, iota_inverse(w1))),
        "w1_sharp": wedge(w1, sharp_map(delop(w2))) * s,
        "w2_sharp": wedge(w2, sharp_map(delop(w1))) * s,
    }


def tian_residual(w1: Form, w2: Form, printed: bool = False) -> Form:
    t = tian_terms(w1, w2, printed)
    return tian_bracket(w1, w2) - (t["exact"] + t["w1_sharp"] + t["w2_sharp"])


def ti1_terms(phi1: VectorValuedForm, phi2: VectorValuedForm) -> dict:
    w0 = holomorphic_volume(phi1.chart)
    C = vvf_contract
    return {
        "bracket": C(vvf_bracket(phi1, phi2), w0),
        "exact": -delop(C(phi2, C(phi1, w0))),
        "phi1_delta": C(phi1, delop(C(phi2, w0))),
        "phi2_delta": C(phi2, delop(C(phi1, w0))),
    }


def ti1_residual(phi1: VectorValuedForm, phi2: VectorValuedForm) -> Form:
    _require_11(phi1, phi2)
    t = ti1_terms(phi1, phi2)
    return t["bracket"] - (t["exact"] + t["phi1_delta"] + t["phi2_delta"])


def ti1_correspondence(phi1: VectorValuedForm, phi2: VectorValuedForm) -> dict:
    """Differences between matching Tian-side and vector-side terms (all zero)."""
    w1, w2 = iota_iso(phi1), iota_iso(phi2)
    t = tian_terms(w1, w2)
    v = ti1_terms(phi1, phi2)
    return {
        "bracket": tian_bracket(w1, w2) - v["bracket"],
        "exact": t["exact"] - v["exact"],
        "w1_sharp": t["w1_sharp"] - v["phi1_delta"],
        "w2_sharp": t["w2_sharp"] - v["phi2_delta"],
    }


class PreconditionError(ValueError):
    """Inputs outside the class on which an identity is asserted."""


def todorov_residual(phi1: VectorValuedForm, phi2: VectorValuedForm) -> Form:
    _require_11(phi1, phi2)
    w0 = holomorphic_volume(phi1.chart)
    for phi in (phi1, phi2):
        if not delop(vvf_contract(phi, w0)).is_zero():
            raise PreconditionError("del(phi _| omega_0) must vanish")
    C = vvf_contract
    return C(vvf_bracket(phi1, phi2), w0) + delop(C(phi2, C(phi1, w0)))


def cor46_signs(d1: int, d2: int) -> tuple[int, int, int, int]:
    """Signs of the four terms in the graded commutator expansion.

    ``[f1,f2] _| eta = s1 f1 _| nabla(f2 _| eta) + s2 nabla(f2 _| (f1 _| eta))
    + s3 f2 _| nabla(f1 _| eta) + s4 f2 _| (f1 _| nabla eta)``, obtained from
    ``[f1,f2] _| = -(-1)^{d1} [[nabla, f1 _|], f2 _|]`` with ``d_i = p_i + q_i``.
    For ``d1 = d2 = 2`` this is ``(+1, -1, +1, -1)``.
    """
    s = 1 if d1 & 1 else -1

    def sg(e):
        return -1 if e & 1 else 1

    return (
        -s * sg(d1),
        s * sg(d1 * d2),
        -s * sg(d2 * (d1 + 1)),
        s * sg(d2 * (d1 + 1) + d1),
    )


def cor46_residual(phi1: VectorValuedForm, phi2: VectorValuedForm, eta: BundleValuedForm) -> BundleValuedForm:
    """Four-term identity for homogeneous polyvector-valued forms with ``p_i <= 2``, Chern connection."""
    if not eta.connection.is_type_10():
        raise ValueError("connection entries must have bidegree (1,0)")
    degs = []
    for phi in (phi1, phi2):
        if len(phi.degrees()) > 1:
            raise ValueError("inputs must be homogeneous")
        p, q = next(iter(phi.degrees()), (1, 0))
        if p > 2:
            raise ValueError("supported range is p <= 2")
        degs.append(p + q)
    s1, s2, s3, s4 = cor46_signs(*degs)
    C = bundle_vvf_contract
    nab = covariant_derivative
    terms = (
        (s1, C(phi1, nab(C(phi2, eta)))),
        (s2, nab(C(phi2, C(phi1, eta)))),
        (s3, C(phi2, nab(C(phi1, eta)))),
        (s4, C(phi2, C(phi1, nab(eta)))),
    )
    out = C(sn_bracket(phi1, phi2), eta)
    for s, t in terms:
        out = out - t if s > 0 else out + t
    return out
