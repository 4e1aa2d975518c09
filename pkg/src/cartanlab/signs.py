"""Brute-force sign oracles.

Each oracle enumerates the candidate signs (or conventions) for one identity,
evaluates every candidate on seeded random instances, and reports how many
instances each candidate gets exactly right.  ``python -m cartanlab.signs``
prints the full transcript reproduced in ``docs/signs.md``.
"""
from __future__ import annotations

from itertools import product

from . import generators as gen
from .bundle import BundleValuedForm, chern_connection, covariant_derivative
from .forms import delop, delbar
from .polyvector import (
    VectorValuedForm,
    bundle_vvf_contract,
    delta_map,
    diamond_map,
    form_contract_vvf,
    holomorphic_volume,
    iota_inverse,
    iota_iso,
    right_contract,
    sharp_map,
    sn_bracket,
    vvf_bracket,
    vvf_contract,
    vvf_wedge,
)
from .forms import wedge
from .rng import SplitMix64
from .scalar import Chart, Scalar

SEED = 20240917


def _rng(tag: str, i: int) -> SplitMix64:
    return SplitMix64.for_trial(SEED, "signs/" + tag, i)


# ---------------------------------------------------------------------------
# independent Schouten bracket: atoms + graded Leibniz


def _atoms(chart: Chart, key, c: Scalar) -> list:
    """``c dzb^Q theta_P`` as the ordered atom product ``[c, dzb^Q1, ..., theta_P1, ...]``."""
    P, Q = key
    out = [("f", c)]
    out += [("o", ((), (b,))) for b in Q]
    out += [("o", ((a,), ())) for a in P]
    return out


def _atom_value(chart, atom) -> VectorValuedForm:
    kind, x = atom
    if kind == "f":
        return VectorValuedForm(chart, {((), ()): x})
    return VectorValuedForm(chart, {x: Scalar.const(chart, 1)})


def _atom_deg(atom) -> int:
    return 0 if atom[0] == "f" else 1


def _atom_bracket(chart, a, b) -> VectorValuedForm:
    """Brackets of generators: ``[theta_i, f] = d_i f``, ``[f, theta_i] = -d_i f``, all others 0."""
    zero = VectorValuedForm(chart)
    if a[0] == "o" and b[0] == "f" and a[1][0]:
        return VectorValuedForm(chart, {((), ()): b[1].partial(a[1][0][0])})
    if a[0] == "f" and b[0] == "o" and b[1][0]:
        return VectorValuedForm(chart, {((), ()): -a[1].partial(b[1][0][0])})
    return zero


def _prod(chart, vals) -> VectorValuedForm:
    out = VectorValuedForm(chart, {((), ()): Scalar.const(chart, 1)})
    for v in vals:
        out = vvf_wedge(out, v)
    return out


def _bracket_atom_word(chart, a, word) -> VectorValuedForm:
    """``[a, g1 g2 ... gm]`` by the left Leibniz rule of a degree -1 bracket."""
    out = VectorValuedForm(chart)
    vals = [_atom_value(chart, g) for g in word]
    da = _atom_deg(a)
    before = 0
    for k, g in enumerate(word):
        br = _atom_bracket(chart, a, g)
        if not br.is_zero():
            term = _prod(chart, vals[:k] + [br] + vals[k + 1:])
            out = out + (term * -1 if ((da - 1) * before) & 1 else term)
        before += _atom_deg(g)
    return out


def schouten_oracle(F: VectorValuedForm, G: VectorValuedForm) -> VectorValuedForm:
    """Graded Schouten bracket from the generator brackets and the Leibniz rules alone.

    ``[f1 f2, G] = f1 [f2, G] + (-1)^{|f2|(|G|-1)} [f1, G] f2`` on the left
    factor, with ``|G|`` the total degree of a homogeneous term.
    """
    chart = F.chart
    out = VectorValuedForm(chart)
    for kf, cf in F.terms.items():
        fw = _atoms(chart, kf, cf)
        for kg, cg in G.terms.items():
            gw = _atoms(chart, kg, cg)
            dG = sum(_atom_deg(g) for g in gw)
            # peel atoms off the right of F: [w a, G] = w [a, G] + (-1)^{|a|(|G|-1)} [w, G] a
            for k in range(len(fw)):
                a = fw[k]
                left = [_atom_value(chart, x) for x in fw[:k]]
                right = [_atom_value(chart, x) for x in fw[k + 1:]]
                inner = _bracket_atom_word(chart, a, gw)
                if inner.is_zero():
                    continue
                # moving right factors back past [a,G]: they were peeled with sign (-1)^{|r|(|G|-1)} each
                s = sum(_atom_deg(x) for x in fw[k + 1:]) * (dG - 1)
                term = _prod(chart, left + [inner] + right)
                out = out + (term * -1 if s & 1 else term)
    return out


def _degree_cases(n: int):
    for p1, q1, p2, q2 in product((0, 1, 2), (0, 1, 2), (0, 1, 2), (0, 1, 2)):
        if max(p1, p2) <= n and max(q1, q2) <= n and (p1 or p2):
            yield p1, q1, p2, q2


def sn_bracket_table(n: int = 2, trials: int = 2) -> list[str]:
    chart = Chart.complex(n)
    lines = [f"sn_bracket vs atom/Leibniz oracle, n={n}, {trials} instances per cell", "(p1,q1,p2,q2)  agree  antisym  jacobi"]
    for cell in _degree_cases(n):
        p1, q1, p2, q2 = cell
        ok = anti = jac = 0
        for i in range(trials):
            rng = _rng(f"sn{cell}", i)
            F = gen.vvf(rng, chart, 2, p1, q1)
            G = gen.vvf(rng, chart, 2, p2, q2)
            H = gen.vvf(rng, chart, 1, 1, rng.randint(0, 1))
            ok += sn_bracket(F, G) == schouten_oracle(F, G)
            dF, dG = p1 + q1, p2 + q2
            s = -1 if ((dF - 1) * (dG - 1)) & 1 else 1
            anti += (sn_bracket(F, G) + sn_bracket(G, F) * s).is_zero()
            # [F,[G,H]] = [[F,G],H] + (-1)^{(dF-1)(dG-1)} [G,[F,H]]
            j = sn_bracket(F, sn_bracket(G, H)) - sn_bracket(sn_bracket(F, G), H) - sn_bracket(G, sn_bracket(F, H)) * s
            jac += j.is_zero()
        lines.append(f"{cell}  {ok}/{trials}  {anti}/{trials}  {jac}/{trials}")
    return lines


# ---------------------------------------------------------------------------
# wedge sign and contraction convention


def vvf_wedge_table(n: int = 3, trials: int = 2) -> list[str]:
    """Which Koszul sign makes ``(f1 ^ f2) _| a = f1 _| (f2 _| a)``."""
    chart = Chart.complex(n)
    cands = {
        "(-1)^{p1 q2}": lambda p1, q1, p2, q2: p1 * q2,
        "(-1)^{q1 p2}": lambda p1, q1, p2, q2: q1 * p2,
        "+1": lambda p1, q1, p2, q2: 0,
        "(-1)^{p1 p2 + q1 q2}": lambda p1, q1, p2, q2: p1 * p2 + q1 * q2,
    }
    lines = [f"vvf_wedge sign: (f1 ^ f2) _| a = f1 _| (f2 _| a), n={n}, {trials} instances per cell", "candidate  cells fully passing / cells"]
    cells = [(p1, q1, p2, q2) for p1, q1, p2, q2 in _degree_cases(n) if p1 and p2 and p1 + p2 <= n]
    for name, fn in cands.items():
        good = 0
        for cell in cells:
            allok = True
            for i in range(trials):
                rng = _rng(f"wedge{cell}", i)
                f1 = gen.vvf(rng, chart, 1, cell[0], cell[1])
                f2 = gen.vvf(rng, chart, 1, cell[2], cell[3])
                a = gen.form(rng, chart, 1, bidegree=(n, 0))
                w = vvf_wedge(f1, f2)
                base_sign = -1 if (cell[0] * cell[3]) & 1 else 1
                cand_sign = -1 if fn(*cell) & 1 else 1
                lhs = vvf_contract(w * (base_sign * cand_sign), a)
                allok &= (lhs - vvf_contract(f1, vvf_contract(f2, a))).is_zero()
            good += allok
        lines.append(f"{name}  {good}/{len(cells)}")
    return lines


def convention_table(n: int = 2, trials: int = 5) -> list[str]:
    """Left versus right placement of the form part in the contraction, on the del identities."""
    chart = Chart.complex(n)
    lines = [f"contraction convention, n={n}, {trials} instances, omega of type (n,l) and of every bidegree", "convention  three-term(n,*)  four-term-del  four-term-delbar"]
    for name, C in (("left: alpha ^ iota_P a", vvf_contract), ("right: iota_P a ^ alpha", lambda f, a: right_contract(f, a))):
        tt = cg = bar = tot = 0
        for i in range(trials):
            rng = _rng("conv", i)
            f1, f2 = gen.vvf(rng, chart, 2, 1, 1), gen.vvf(rng, chart, 2, 1, 1)
            br = vvf_bracket(f1, f2)
            om = gen.form(rng, chart, 2, bidegree=(n, rng.randint(0, n - 1)))
            r = C(br, om) - (C(f1, delop(C(f2, om))) - delop(C(f2, C(f1, om))) + C(f2, delop(C(f1, om))))
            tt += r.is_zero()
            for k in range(1, n + 1):
                for l in range(n):
                    om = gen.form(rng, chart, 2, bidegree=(k, l))
                    tot += 1
                    r = C(br, om) - (
                        C(f1, delop(C(f2, om))) - delop(C(f2, C(f1, om))) + C(f2, delop(C(f1, om))) - C(f2, C(f1, delop(om)))
                    )
                    cg += r.is_zero()
                    r = C(f1, delbar(C(f2, om))) - delbar(C(f2, C(f1, om))) + C(f2, delbar(C(f1, om))) - C(f2, C(f1, delbar(om)))
                    bar += r.is_zero()
        lines.append(f"{name}  {tt}/{trials}  {cg}/{tot}  {bar}/{tot}")
    return lines


# ---------------------------------------------------------------------------
# Delta reformulation


def prop36_part1_table(trials: int = 2) -> list[str]:
    """Signs ``(s1,s2,s3)`` with ``[f1,f2]_|w = s1 Delta(f1^f2) + s2 f2_|Delta f1 + s3 f1_|Delta f2``."""
    lines = [f"Delta reformulation, polyvector degrees p,q <= 2, {trials} instances per cell (n=3)", "(p1,q1,p2,q2)  d1 d2  surviving (s1,s2,s3)"]
    chart = Chart.complex(3)
    n = 3
    for p1, q1, p2, q2 in product((1, 2), (0, 1, 2), (1, 2), (0, 1, 2)):
        survivors = set(product((1, -1), repeat=3))
        for i in range(trials):
            rng = _rng(f"p36_{p1}{q1}{p2}{q2}", i)
            f1, f2 = gen.vvf(rng, chart, 2, p1, q1), gen.vvf(rng, chart, 2, p2, q2)
            for w in (holomorphic_volume(chart), gen.form(rng, chart, 2, bidegree=(n, rng.randint(0, 1)))):
                lhs = vvf_contract(sn_bracket(f1, f2), w)
                t = (delta_map(w, vvf_wedge(f1, f2)), vvf_contract(f2, delta_map(w, f1)), vvf_contract(f1, delta_map(w, f2)))
                survivors = {s for s in survivors if (lhs - (t[0] * s[0] + t[1] * s[1] + t[2] * s[2])).is_zero()}
        shown = " ".join(str(s) for s in sorted(survivors)) or "none"
        lines.append(f"({p1},{q1},{p2},{q2})  {p1 + q1} {p2 + q2}  {shown}")
    return lines


def prop36_grouping_table(trials: int = 4) -> list[str]:
    """Candidate groupings for the (1,1) reformulations with an arbitrary form and with a bundle form."""
    groupings = {
        "-(D(f1^f2) - f2_|Df1 - f1_|Df2 + (f1^f2)_|D)": (-1, 1, 1, -1),
        "-(D(f1^f2) - f2_|Df1 - f1_|Df2 - (f1^f2)_|D)": (-1, 1, 1, 1),
        "D(f1^f2) - f2_|Df1 - f1_|Df2 + (f1^f2)_|D": (1, -1, -1, 1),
        "-D(f1^f2) + f2_|Df1 + f1_|Df2 (three terms)": (-1, 1, 1, 0),
    }
    lines = [f"grouping of the (1,1) reformulations, n in (2,3), {trials} instances each, every bidegree", "grouping  with del (any form)  with Chern nabla (rank 1 and 2)"]
    results = {g: [0, 0, 0, 0] for g in groupings}
    for n in (2, 3):
        chart = Chart.complex(n)
        for i in range(trials):
            rng = _rng(f"group{n}", i)
            f1, f2 = gen.vvf(rng, chart, 2, 1, 1), gen.vvf(rng, chart, 2, 1, 1)
            w12 = vvf_wedge(f1, f2)
            br = vvf_bracket(f1, f2)
            om = gen.form(rng, chart, 2)
            t = (delta_map(om, w12), vvf_contract(f2, delta_map(om, f1)), vvf_contract(f1, delta_map(om, f2)), vvf_contract(w12, delop(om)))
            lhs = vvf_contract(br, om)
            rank = 1 + i % 2
            h = gen.hermitian_metric(rng, chart, rank)
            eta = BundleValuedForm([gen.form(rng, chart, 2) for _ in range(rank)], chern_connection(h))
            C = bundle_vvf_contract
            tb = (diamond_map(eta, w12), C(f2, diamond_map(eta, f1)), C(f1, diamond_map(eta, f2)), C(w12, covariant_derivative(eta)))
            lhs_b = C(br, eta)
            for g, s in groupings.items():
                rhs = t[0] * s[0] + t[1] * s[1] + t[2] * s[2] + t[3] * s[3]
                results[g][0] += (lhs - rhs).is_zero()
                results[g][1] += 1
                rb = tb[0].map(lambda x: x * s[0]) + tb[1].map(lambda x: x * s[1]) + tb[2].map(lambda x: x * s[2]) + tb[3].map(lambda x: x * s[3])
                results[g][2] += (lhs_b - rb).is_zero()
                results[g][3] += 1
    for g, (a, b, c, d) in results.items():
        lines.append(f"{g}  {a}/{b}  {c}/{d}")
    return lines


# ---------------------------------------------------------------------------
# Tian's identity and the graded four-term identity


def tian_table(trials: int = 2) -> list[str]:
    lines = [f"Tian identity, iota(phi) = omega_0 _| phi, {trials} instances per n", "n  exact-term sign  sharp-term sign (surviving)"]
    for n in (1, 2, 3, 4):
        chart = Chart.complex(n)
        survivors = set(product((1, -1), repeat=2))
        for i in range(trials):
            rng = _rng(f"tian{n}", i)
            f1, f2 = gen.vvf(rng, chart, 2, 1, 1), gen.vvf(rng, chart, 2, 1, 1)
            w1, w2 = iota_iso(f1), iota_iso(f2)
            lhs = iota_iso(vvf_bracket(iota_inverse(w1), iota_inverse(w2)))
            ex = -delop(form_contract_vvf(w2, iota_inverse(w1)))
            sh = wedge(w1, sharp_map(delop(w2))) + wedge(w2, sharp_map(delop(w1)))
            survivors = {s for s in survivors if (lhs - ex * s[0] - sh * s[1]).is_zero()}
        lines.append(f"{n}  " + " ".join(str(s) for s in sorted(survivors)))
    return lines


def cor46_table(trials: int = 1) -> list[str]:
    """Factor relating ``[f1,f2] _| eta`` to the graded commutator ``[[nabla, f1_|], f2_|] eta``.

    The commutator is built operator by operator: ``[A, B] = AB - (-1)^{|A||B|} BA``
    with ``|nabla| = 1`` and ``|f_| = p + q`` mod 2.
    """
    n = 4
    chart = Chart.complex(n)
    lines = [
        f"[f1,f2]_| eta against K = [[nabla, f1_|], f2_|] eta, n={n}, Chern rank 1, {trials} instance(s) x 3 bidegrees",
        "(p1,q1,p2,q2)  d1 d2  observed factor  -(-1)^d1",
    ]
    C, nab = bundle_vvf_contract, covariant_derivative

    def sg(e):
        return -1 if e & 1 else 1

    for p1, q1, p2, q2 in product((1, 2), (0, 1, 2), (1, 2), (0, 1, 2)):
        d1, d2 = p1 + q1, p2 + q2
        seen = set()
        for i in range(trials):
            rng = _rng(f"c46{p1}{q1}{p2}{q2}", i)
            con = chern_connection(gen.hermitian_metric(rng, chart, 1))
            for bd in ((4, 0), (3, 1), (2, 1)):
                f1, f2 = gen.vvf(rng, chart, 2, p1, q1), gen.vvf(rng, chart, 2, p2, q2)
                eta = BundleValuedForm([gen.form(rng, chart, 2, bidegree=bd)], con)

                def A(e):
                    return nab(C(f1, e)) - C(f1, nab(e)).map(lambda x: x * sg(d1))

                K = A(C(f2, eta)) - C(f2, A(eta)).map(lambda x: x * sg((d1 + 1) * d2))
                lhs = C(sn_bracket(f1, f2), eta)
                if lhs.is_zero() and K.is_zero():
                    continue
                seen.add("+1" if (lhs - K).is_zero() else "-1" if (lhs + K).is_zero() else "neither")
        obs = " ".join(sorted(seen)) or "all zero"
        lines.append(f"({p1},{q1},{p2},{q2})  {d1} {d2}  {obs}  {-sg(d1):+d}")
    return lines


def transcript() -> str:
    sections = [
        ("contraction convention", convention_table()),
        ("sn_bracket", sn_bracket_table()),
        ("vvf_wedge", vvf_wedge_table()),
        ("Delta reformulation, general degrees", prop36_part1_table()),
        ("Delta / diamond reformulation grouping", prop36_grouping_table()),
        ("Tian identity", tian_table()),
        ("graded four-term identity", cor46_table()),
    ]
    out = []
    for title, lines in sections:
        out.append(f"== {title}")
        out.extend(lines)
        out.append("")
    return "\n".join(out)


if __name__ == "__main__":
    print(transcript(), end="")
