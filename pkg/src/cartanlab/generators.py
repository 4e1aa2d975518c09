"""Random kernel values drawn from a :class:`~cartanlab.rng.SplitMix64` stream.

Scalars are sums of up to three monomials of degree at most ``D`` with integer
coefficients in ``[-3, 3]``; a rational scalar is such a polynomial divided by
``1 + g*conj(g)`` (complex chart) or ``1 + x_g^2`` (real chart) for a random
generator ``g``.  ``D = 0`` always yields constants.
"""
from __future__ import annotations

from itertools import combinations

from .bundle import Connection
from .forms import Form, VectorField
from .gencomplex import GeneralizedSection, GeneralizedWord, IsotropicFrame
from .polyvector import VectorValuedForm
from .rng import SplitMix64
from .scalar import Chart, Scalar, mono


def scalar(
    rng: SplitMix64, chart: Chart, D: int, rational: bool = False, gens=None, terms: int = 3, lead: int = 0, lead_gens=None
) -> Scalar:
    """``lead`` is the minimum degree of the first monomial (capped by ``D``), drawn from ``lead_gens``."""
    gens = list(range(chart.ngens)) if gens is None else list(gens)
    num: dict = {}
    for t in range(rng.randint(1, terms)):
        key = 0
        lo = min(lead, D) if t == 0 else 0
        pool = list(lead_gens) if t == 0 and lead_gens else gens
        for _ in range(rng.randint(lo, D) if pool else 0):
            key += mono(rng.choice(pool))
        c = rng.randint(-3, 3)
        num[key] = num.get(key, 0) + c
    s = Scalar.poly_from_keys(chart, num)
    if rational and D > 0 and s:
        g = rng.below(chart.ngens)
        x = Scalar.gen(chart, g)
        pert = x * x.conjugate() if chart.is_complex else x * x
        s = s / (pert + 1)
    return s


def nonzero_scalar(rng, chart, D, **kw) -> Scalar:
    while True:
        s = scalar(rng, chart, D, **kw)
        if s:
            return s


def words(chart: Chart, k: int, l: int | None = None) -> list:
    """Increasing words of degree ``k``, or of bidegree ``(k, l)`` on a complex chart."""
    if l is None:
        return list(combinations(range(chart.ngens), k))
    return [P + Q for P in combinations(chart.holomorphic, k) for Q in combinations(chart.antiholomorphic, l)]


def form_on(rng, chart: Chart, ws, D: int, rational: bool = False, density=(2, 3)) -> Form:
    """Random coefficients on a random non-empty subset of the words ``ws``."""
    ws = list(ws)
    if not ws:
        return Form.zero(chart)
    picked = [w for w in ws if rng.chance(*density)] or [rng.choice(ws)]
    return Form(chart, {w: nonzero_scalar(rng, chart, D, rational=rational) for w in picked})


def form(rng, chart: Chart, D: int, degree: int | None = None, bidegree=None, rational=False) -> Form:
    if bidegree is not None:
        return form_on(rng, chart, words(chart, *bidegree), D, rational)
    if degree is not None:
        return form_on(rng, chart, words(chart, degree), D, rational)
    ws = [w for k in range(chart.ngens + 1) for w in words(chart, k)]
    return form_on(rng, chart, ws, D, rational, density=(1, 3))


def vector(rng, chart: Chart, D: int, gens=None, rational=False) -> VectorField:
    gens = list(range(chart.ngens)) if gens is None else list(gens)
    return VectorField(chart, {g: scalar(rng, chart, D, rational) for g in gens if rng.chance(3, 4)})


def vvf(rng, chart: Chart, D: int, p: int, q: int, coef_gens=None) -> VectorValuedForm:
    """Random element of bidegree ``(p, q)``; ``coef_gens`` restricts the coefficient variables.

    Unless restricted, the leading monomial of each coefficient involves a
    holomorphic variable, so brackets are rarely zero by accident.
    """
    keys = [(P, Q) for P in combinations(chart.holomorphic, p) for Q in combinations(chart.antiholomorphic, q)]
    picked = [k for k in keys if rng.chance(2, 3)] or [rng.choice(keys)]
    lead_gens = None if coef_gens is not None else chart.holomorphic
    return VectorValuedForm(
        chart, {k: nonzero_scalar(rng, chart, D, gens=coef_gens, lead=1, lead_gens=lead_gens) for k in picked}
    )


def divergence_free_vvf(rng, chart: Chart, D: int) -> VectorValuedForm:
    """Type (1,1) with ``sum_i d_{z^i} phi^i_b = 0`` for every ``b``, so ``del(phi _| omega_0) = 0``.

    A zbar-only part plus stream-function terms ``phi^i += d_j g``, ``phi^j -= d_i g``.
    """
    zb = list(chart.antiholomorphic)
    phi = vvf(rng, chart, D, 1, 1, coef_gens=zb)
    out = dict(phi.terms)
    hol = list(chart.holomorphic)
    for i, j in combinations(hol, 2):
        for b in zb:
            if not rng.chance(1, 2):
                continue
            g = scalar(rng, chart, D + 1, lead=2, lead_gens=(i, j))
            for key, c in ((((i,), (b,)), g.partial(j)), (((j,), (b,)), -g.partial(i))):
                v = out.get(key)
                v = c if v is None else v + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return VectorValuedForm(chart, out)


def connection(rng, chart: Chart, rank: int, D: int, bidegree=None) -> Connection:
    def entry():
        if bidegree is None:
            return form(rng, chart, D, degree=1)
        return form(rng, chart, D, bidegree=bidegree)

    return Connection(tuple(tuple(entry() for _ in range(rank)) for _ in range(rank)))


def hermitian_metric(rng, chart: Chart, rank: int) -> list:
    """``h = I + P conj(P)^T`` with ``P`` entries ``a + b x_g``, ``b`` nonzero."""

    def entry():
        b = rng.choice((-3, -2, -1, 1, 2, 3))
        return Scalar.gen(chart, rng.below(chart.ngens)) * b + rng.randint(-3, 3)

    P = [[entry() for _ in range(rank)] for _ in range(rank)]
    Pc = [[x.conjugate() for x in row] for row in P]
    h = []
    for i in range(rank):
        row = []
        for j in range(rank):
            s = Scalar.const(chart, 1 if i == j else 0)
            for k in range(rank):
                s = s + P[i][k] * Pc[j][k]
            row.append(s)
        h.append(row)
    return h


def odd_form(rng, chart: Chart, k: int, D: int) -> Form:
    return form(rng, chart, D, degree=k)


def section(rng, chart: Chart, D: int, frame: IsotropicFrame | None = None, rational=False) -> GeneralizedSection:
    """Random ``X + xi`` with ``xi`` a 1-form; restricted to ``frame`` when given."""
    if frame is None:
        vg, fg = range(chart.ngens), range(chart.ngens)
    else:
        vg, fg = frame.vector_indices, frame.form_indices
    X = VectorField(chart, {g: scalar(rng, chart, D, rational) for g in vg if rng.chance(2, 3)})
    xi = Form(chart, {(g,): scalar(rng, chart, D, rational) for g in fg if rng.chance(2, 3)})
    return GeneralizedSection(X, xi)


def word(rng, chart: Chart, D: int, length: int, frame: IsotropicFrame | None = None) -> GeneralizedWord:
    return GeneralizedWord(chart, (tuple(section(rng, chart, D, frame) for _ in range(length)),))


def half_split(chart: Chart) -> IsotropicFrame:
    """Vectors along the first ``ceil(m/2)`` generators, forms along the rest."""
    return IsotropicFrame(chart, frozenset(range((chart.ngens + 1) // 2)))
