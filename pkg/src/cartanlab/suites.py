"""Registry of verification suites: one random-instance builder and one residual per identity.

A builder receives a seeded stream, the chart and the config, and returns an
:class:`Instance` holding the inputs (for replay) and a thunk computing the
residual.  A trial passes iff every part of the residual is exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import generators as gen
from .bundle import (
    BundleValuedForm,
    Connection,
    cartan_bundle_residual,
    cd1_residual,
    chern_connection,
    lemma21_residual,
)
from .forms import (
    delbar,
    delop,
    exterior_d,
    finite_difference_check,
    lie_bracket,
    lie_derivative,
    lie_derivative_flow,
    lie5_residual,
    one_form_pairing_residual,
    st_residual,
    wedge,
)
from .gencomplex import (
    claim43_operator_residuals,
    courant_bracket,
    cor44_residual,
    cor45_crosscheck,
    gualtieri_residual,
    initial2_residual,
    inner_product,
    prop42_residual,
)
from .polyvector import (
    cor46_residual,
    cr_residual,
    iota_iso,
    prop32_residual,
    prop36_residual,
    remark33_residual,
    sn_bracket,
    thm34_residual,
    ti1_correspondence,
    ti1_residual,
    tian_residual,
    todorov_residual,
    vvf_bracket,
)
from .scalar import Chart, PoleError


@dataclass
class Instance:
    inputs: list
    check: Callable
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Suite:
    id: str
    kind: str  # chart kind the suite runs on
    build: Callable
    summary: str
    advisory: bool = False
    min_dim: int = 1


REGISTRY: dict[str, Suite] = {}


def suite(id: str, kind: str, summary: str, advisory: bool = False, min_dim: int = 1):
    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate suite {id}")
        REGISTRY[id] = Suite(id, kind, fn, summary, advisory, min_dim)
        return fn

    return deco


def _rational(trial: int) -> bool:
    return trial % 3 == 2


def _bundle(rng, chart, D, rank, theta: str, bidegree=None, rational=False):
    if theta == "zero":
        con = Connection.trivial(chart, rank)
        extra = []
    elif theta == "random":
        con = gen.connection(rng, chart, rank, D)
        extra = []
    elif theta == "chern":
        h = gen.hermitian_metric(rng, chart, rank)
        con = chern_connection(h)
        extra = [h]
    else:
        raise ValueError(f"unknown connection kind {theta!r}")
    if bidegree is None:
        comps = [gen.form(rng, chart, D, rational=rational) for _ in range(rank)]
    else:
        comps = [gen.form(rng, chart, D, bidegree=bidegree, rational=rational) for _ in range(rank)]
    return BundleValuedForm(comps, con), extra


def _bidegrees(chart: Chart, kmin: int = 0):
    n = chart.dim
    return [(k, l) for k in range(kmin, n + 1) for l in range(n + 1)]


# ---------------------------------------------------------------------------
# kernel


@suite("ddzero", "complex", "d^2, del^2, delbar^2 and del delbar + delbar del vanish")
def _ddzero(rng, chart, cfg, trial):
    a = gen.form(rng, chart, cfg.max_degree, rational=_rational(trial))
    return Instance(
        [a],
        lambda: {
            "dd": exterior_d(exterior_d(a)),
            "deldel": delop(delop(a)),
            "barbar": delbar(delbar(a)),
            "anti": delop(delbar(a)) + delbar(delop(a)),
        },
    )


@suite("dolbeault", "complex", "d = del + delbar, and del, delbar are graded derivations")
def _dolbeault(rng, chart, cfg, trial):
    D = cfg.max_degree
    a = gen.form(rng, chart, D, rational=_rational(trial))
    b = gen.form(rng, chart, D)
    ap = a.parity()
    return Instance(
        [a, b],
        lambda: {
            "split": exterior_d(a) - delop(a) - delbar(a),
            "del_leibniz": delop(wedge(a, b)) - wedge(delop(a), b) - wedge(ap, delop(b)),
            "bar_leibniz": delbar(wedge(a, b)) - wedge(delbar(a), b) - wedge(ap, delbar(b)),
        },
    )


@suite("finite_difference", "real", "d against central differences at rational points", advisory=True)
def _finite_difference(rng, chart, cfg, trial):
    exact = trial % 2 == 0
    D = min(cfg.max_degree, 2) if exact else cfg.max_degree
    a = gen.form(rng, chart, D, rational=not exact)
    points = []
    while len(points) < 10:
        pt = [Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(chart.ngens)]
        try:
            for c in a.terms.values():
                c.eval_at(pt)
        except PoleError:
            continue
        points.append(pt)
    step = Fraction(1, 10**5)

    def check():
        worst = Fraction(0)
        for pt in points:
            worst = max(worst, finite_difference_check(a, pt, step))
        return Deviation(worst, Fraction(0) if exact else FD_TOLERANCE)

    return Instance([a], check, {"exact": str(exact).lower(), "step": "1/100000"})


FD_TOLERANCE = Fraction(1, 10**6)


@dataclass(frozen=True)
class Deviation:
    """Numeric residual: passes when ``value <= bound`` (``bound = 0`` means exact)."""

    value: Fraction
    bound: Fraction

    def is_zero(self) -> bool:
        return self.value == 0 if self.bound == 0 else self.value < self.bound

    def to_sexpr(self) -> str:
        return f"; max relative deviation {float(self.value):.3e} (bound {float(self.bound):.0e})"


# ---------------------------------------------------------------------------
# contracted commutator identities


@suite("cartan", "complex", "L_X by Cartan's formula against the flow derivation rule, bundle-valued")
def _cartan(rng, chart, cfg, trial):
    D = cfg.max_degree
    X = gen.vector(rng, chart, D, rational=_rational(trial))
    theta = "zero" if trial % 2 == 0 else "random"
    e, _ = _bundle(rng, chart, D, cfg.rank, theta)
    a = e.components[0]
    return Instance(
        [X, e],
        lambda: {"bundle": cartan_bundle_residual(X, e), "flow": lie_derivative(X, a) - lie_derivative_flow(X, a)},
        {"theta": theta},
    )


@suite("lemma21", "complex", "contracted commutator identity for a connection on bundle-valued forms")
def _lemma21(rng, chart, cfg, trial):
    D = cfg.max_degree
    theta = cfg.option("theta") or ("zero", "random", "chern")[trial % 3]
    X = gen.vector(rng, chart, D)
    Y = gen.vector(rng, chart, D, rational=_rational(trial))
    e, extra = _bundle(rng, chart, D, cfg.rank, theta)
    return Instance([X, Y, e] + extra, lambda: lemma21_residual(X, Y, e), {"theta": theta})


@suite("lie5", "complex", "iota_[X,Y] = [L_X, iota_Y] and the expanded d-form")
def _lie5(rng, chart, cfg, trial):
    D = cfg.max_degree
    X = gen.vector(rng, chart, D, rational=_rational(trial))
    Y = gen.vector(rng, chart, D)
    tau = gen.form(rng, chart, D)
    return Instance([X, Y, tau], lambda: {"lie5": lie5_residual(X, Y, tau), "expanded": st_residual(X, Y, tau)})


@suite("one_form_pairing", "complex", "d tau(X,Y) = X tau(Y) - Y tau(X) - tau([X,Y])")
def _one_form_pairing(rng, chart, cfg, trial):
    D = cfg.max_degree
    X = gen.vector(rng, chart, D)
    Y = gen.vector(rng, chart, D, rational=_rational(trial))
    tau = gen.form(rng, chart, D, degree=1)
    return Instance([X, Y, tau], lambda: one_form_pairing_residual(X, Y, tau))


@suite("cd1", "complex", "double contraction of tau ^ theta for a 1-form theta")
def _cd1(rng, chart, cfg, trial):
    D = cfg.max_degree
    k = trial % 3
    X = gen.vector(rng, chart, D)
    Y = gen.vector(rng, chart, D)
    tau = gen.form(rng, chart, D, degree=min(k, chart.ngens), rational=_rational(trial))
    theta = gen.form(rng, chart, D, degree=1)
    return Instance([X, Y, tau, theta], lambda: cd1_residual(X, Y, tau, theta), {"k": k})


# ---------------------------------------------------------------------------
# polyvector-valued forms


def _pair11(rng, chart, D):
    return gen.vvf(rng, chart, D, 1, 1), gen.vvf(rng, chart, D, 1, 1)


@suite("def31_bracket", "complex", "coordinate bracket of vector-valued forms equals the graded Schouten bracket")
def _def31(rng, chart, cfg, trial):
    D = cfg.max_degree
    q1, q2 = trial % 3, (trial // 3) % 3
    q1, q2 = min(q1, chart.dim), min(q2, chart.dim)
    f1, f2 = gen.vvf(rng, chart, D, 1, q1), gen.vvf(rng, chart, D, 1, q2)
    sign = -1 if (q1 * q2) & 1 else 1
    return Instance(
        [f1, f2],
        lambda: {
            "schouten": vvf_bracket(f1, f2) - sn_bracket(f1, f2),
            "antisymmetry": vvf_bracket(f1, f2) + vvf_bracket(f2, f1) * sign,
        },
        {"q1": q1, "q2": q2},
    )


@suite("prop32", "complex", "[f1,f2] _| w as three del terms, w of type (n,l)")
def _prop32(rng, chart, cfg, trial):
    D = cfg.max_degree
    n = chart.dim
    l = trial % n
    f1, f2 = _pair11(rng, chart, D)
    w = gen.form(rng, chart, D, bidegree=(n, l))
    return Instance([f1, f2, w], lambda: prop32_residual(f1, f2, w), {"l": l})


def _remark33(flavor):
    def build(rng, chart, cfg, trial):
        D = cfg.max_degree
        bds = _bidegrees(chart, 1)
        k, l = bds[trial % len(bds)]
        f1, f2 = _pair11(rng, chart, D)
        w = gen.form(rng, chart, D, bidegree=(k, l))
        return Instance([f1, f2, w], lambda: remark33_residual(f1, f2, w, flavor), {"k": k, "l": l})

    return build


suite("remark33_bar", "complex", "four-term delbar identity, every bidegree")(_remark33("bar"))
suite("remark33_del", "complex", "four-term del identity, every bidegree")(_remark33("del"))
suite("remark33_d", "complex", "four-term d identity, every bidegree")(_remark33("d"))


@suite("thm34", "complex", "four-term identity with the Chern connection, scopes n-star and any")
def _thm34(rng, chart, cfg, trial):
    D = cfg.max_degree
    n = chart.dim
    scope = ("n-star", "any")[trial % 2]
    if scope == "n-star":
        bd = (n, (trial // 2) % n)
    else:
        bds = _bidegrees(chart, 1)
        bd = bds[(trial // 2) % len(bds)]
    f1, f2 = _pair11(rng, chart, D)
    eta, extra = _bundle(rng, chart, D, cfg.rank, "chern", bidegree=bd)
    return Instance(
        [f1, f2, eta] + extra, lambda: thm34_residual(f1, f2, eta, scope), {"scope": scope, "k": bd[0], "l": bd[1]}
    )


@suite("cor35", "complex", "four-term identity with the Chern connection on mixed-degree bundle forms")
def _cor35(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)
    eta, extra = _bundle(rng, chart, D, cfg.rank, "chern")
    return Instance([f1, f2, eta] + extra, lambda: thm34_residual(f1, f2, eta, "any"))


def _pq_cycle(chart, trial):
    """``(p1, q1, p2, q2)`` with ``1 <= p <= min(2, n)``, ``0 <= q <= min(2, n)``."""
    ps = list(range(1, min(2, chart.dim) + 1))
    qs = list(range(0, min(2, chart.dim) + 1))
    combos = [(p1, q1, p2, q2) for p1 in ps for q1 in qs for p2 in ps for q2 in qs]
    return combos[trial % len(combos)]


@suite("prop36_1", "complex", "[f1,f2] _| w through Delta_w for polyvector-valued forms, p,q <= 2")
def _prop36_1(rng, chart, cfg, trial):
    D = cfg.max_degree
    n = chart.dim
    p1, q1, p2, q2 = _pq_cycle(chart, trial)
    f1, f2 = gen.vvf(rng, chart, D, p1, q1), gen.vvf(rng, chart, D, p2, q2)
    l = trial % (n + 1)
    w = gen.form(rng, chart, D, bidegree=(n, l))
    return Instance([f1, f2, w], lambda: prop36_residual(1, f1, f2, w), {"p1": p1, "q1": q1, "p2": p2, "q2": q2})


@suite("prop36_2", "complex", "[f1,f2] _| w through Delta_w, any w")
def _prop36_2(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)
    w = gen.form(rng, chart, D)
    return Instance([f1, f2, w], lambda: prop36_residual(2, f1, f2, w))


@suite("prop36_3", "complex", "[f1,f2] _| eta through diamond_eta, Chern connection")
def _prop36_3(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)
    eta, extra = _bundle(rng, chart, D, cfg.rank, "chern")
    return Instance([f1, f2, eta] + extra, lambda: prop36_residual(3, f1, f2, eta))


@suite("cr_sign", "complex", "form-into-polyvector contraction sign rule against the right contraction")
def _cr_sign(rng, chart, cfg, trial):
    D = cfg.max_degree
    ps = list(range(1, min(2, chart.dim) + 1))
    qs = list(range(0, min(2, chart.dim) + 1))
    p, q = ps[trial % len(ps)], qs[(trial // len(ps)) % len(qs)]
    a = gen.form(rng, chart, D)
    psi = gen.vvf(rng, chart, D, p, q)
    return Instance([a, psi], lambda: cr_residual(a, psi), {"p": p, "q": q})


@suite("tian", "complex", "Tian's identity for (n-1,1)-forms")
def _tian(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)
    w1, w2 = iota_iso(f1), iota_iso(f2)
    return Instance([w1, w2], lambda: tian_residual(w1, w2))


@suite("todorov", "complex", "Todorov's identity for del-closed contractions (divergence-free coefficients)")
def _todorov(rng, chart, cfg, trial):
    D = cfg.max_degree
    if cfg.option("generator") == "zbar":
        zb = chart.antiholomorphic
        f1, f2 = gen.vvf(rng, chart, D, 1, 1, coef_gens=zb), gen.vvf(rng, chart, D, 1, 1, coef_gens=zb)
    else:
        f1 = gen.divergence_free_vvf(rng, chart, D)
        f2 = gen.divergence_free_vvf(rng, chart, D)
    return Instance([f1, f2], lambda: todorov_residual(f1, f2))


@suite("ti1_equiv", "complex", "Tian's identity and its vector-valued form agree term by term")
def _ti1(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)

    def check():
        out = {"ti1": ti1_residual(f1, f2)}
        out.update(ti1_correspondence(f1, f2))
        return out

    return Instance([f1, f2], check)


@suite("cor46", "complex", "graded four-term identity for polyvector-valued forms, p <= 2, Chern connection")
def _cor46(rng, chart, cfg, trial):
    D = cfg.max_degree
    n = chart.dim
    p1, q1, p2, q2 = _pq_cycle(chart, trial)
    f1, f2 = gen.vvf(rng, chart, D, p1, q1), gen.vvf(rng, chart, D, p2, q2)
    bds = [bd for bd in _bidegrees(chart) if bd[0] >= max(p1, p2)]
    bd = bds[(trial // 3) % len(bds)]
    eta, extra = _bundle(rng, chart, D, cfg.rank, "chern", bidegree=bd)
    return Instance(
        [f1, f2, eta] + extra,
        lambda: cor46_residual(f1, f2, eta),
        {"p1": p1, "q1": q1, "p2": p2, "q2": q2, "k": bd[0], "l": bd[1]},
    )


# ---------------------------------------------------------------------------
# generalized geometry


@suite("inner_product_isotropy", "real", "pairing vanishes on an isotropic frame and is symmetric")
def _isotropy(rng, chart, cfg, trial):
    D = cfg.max_degree
    fr = gen.half_split(chart)
    A, B = gen.section(rng, chart, D, fr), gen.section(rng, chart, D, fr)
    C, E = gen.section(rng, chart, D), gen.section(rng, chart, D)
    return Instance(
        [A, B, C, E], lambda: {"isotropic": inner_product(A, B), "symmetric": inner_product(C, E) - inner_product(E, C)}
    )


@suite("courant_antisym", "real", "the Courant bracket is antisymmetric")
def _courant_antisym(rng, chart, cfg, trial):
    D = cfg.max_degree
    A, B = gen.section(rng, chart, D), gen.section(rng, chart, D, rational=_rational(trial))
    return Instance([A, B], lambda: courant_bracket(A, B) + courant_bracket(B, A))


@suite("courant_projection", "real", "the vector part of the Courant bracket is the Lie bracket")
def _courant_projection(rng, chart, cfg, trial):
    D = cfg.max_degree
    A, B = gen.section(rng, chart, D), gen.section(rng, chart, D, rational=_rational(trial))
    return Instance([A, B], lambda: courant_bracket(A, B).X - lie_bracket(A.X, B.X))


@suite("gualtieri", "real", "A.B.d rho expansion with the pairing term, general sections")
def _gualtieri(rng, chart, cfg, trial):
    D = cfg.max_degree
    A, B = gen.section(rng, chart, D), gen.section(rng, chart, D)
    rho = gen.form(rng, chart, D)
    return Instance([A, B, rho], lambda: gualtieri_residual(A, B, rho))


def _odd_degree(chart, trial):
    ks = [k for k in (1, 3) if k <= chart.ngens]
    return ks[trial % len(ks)]


@suite("initial2", "real", "(A.B).(R ^ rho) expansion for odd R")
def _initial2(rng, chart, cfg, trial):
    D = cfg.max_degree
    k = _odd_degree(chart, trial)
    A, B = gen.section(rng, chart, D), gen.section(rng, chart, D)
    R = gen.odd_form(rng, chart, k, D)
    rho = gen.form(rng, chart, D)
    return Instance([A, B, R, rho], lambda: initial2_residual(A, B, R, rho), {"k": k})


@suite("prop42", "real", "twisted graded commutator identity for words of isotropic letters")
def _prop42(rng, chart, cfg, trial):
    D = cfg.max_degree
    ks = [k for k in (1, 3) if k <= chart.ngens]
    combos = [(p, q, k) for p in (1, 2, 3) for q in (1, 2, 3) for k in ks]
    p, q, k = combos[trial % len(combos)]
    fr = gen.half_split(chart)
    A = gen.word(rng, chart, D, p, fr)
    B = gen.word(rng, chart, D, q, fr)
    R = gen.odd_form(rng, chart, k, D)
    rho = gen.form(rng, chart, D)
    return Instance(
        [A, B, R, rho], lambda: prop42_residual(A, B, R, rho, fr), {"p": p, "q": q, "k": k, "split": _split(fr)}
    )


def _split(fr) -> str:
    return " ".join(fr.chart.names[g] for g in fr.vector_indices)


@suite("claim43", "real", "operator commutator with C. equals the twisted bracket action, on all monomial probes")
def _claim43(rng, chart, cfg, trial):
    D = cfg.max_degree
    k = _odd_degree(chart, trial)
    fr = gen.half_split(chart)
    A0, C = gen.section(rng, chart, D, fr), gen.section(rng, chart, D, fr)
    R = gen.odd_form(rng, chart, k, D)
    return Instance([A0, C, R], lambda: claim43_operator_residuals(A0, C, R), {"k": k, "split": _split(fr)})


@suite("cor44", "real", "twisted identity for 2-words and a 1-form R")
def _cor44(rng, chart, cfg, trial):
    D = cfg.max_degree
    fr = gen.half_split(chart)
    A = gen.word(rng, chart, D, 2, fr)
    B = gen.word(rng, chart, D, 2, fr)
    R = gen.odd_form(rng, chart, 1, D)
    rho = gen.form(rng, chart, D)
    return Instance([A, B, R, rho], lambda: cor44_residual(A, B, R, rho, fr), {"split": _split(fr)})


@suite("cor45_crosscheck", "complex", "word-action route and contraction route agree term by term")
def _cor45(rng, chart, cfg, trial):
    D = cfg.max_degree
    f1, f2 = _pair11(rng, chart, D)
    h = gen.hermitian_metric(rng, chart, cfg.rank)
    con = chern_connection(h)
    omega = BundleValuedForm([gen.form(rng, chart, D) for _ in range(cfg.rank)], con)
    return Instance([f1, f2, omega, h], lambda: cor45_crosscheck(f1, f2, omega, h))


SUITE_IDS = tuple(REGISTRY)
