"""Prefix text grammar for every kernel value.

Scalars::

    (+ a b ...)  (* a b ...)  (/ a b)  (- a)  (- a b)  17  -3  z1  zb2  x3

Forms, vector fields and the higher objects::

    (form (coef (dz1 dzb2) SCALAR) ...)      dz1  dzb1  dx1   (wedge a b)
    (vec (coef @z1 SCALAR) ...)              @z1  @x2
    (vvf (p q) (coef (@z1) (dzb2) SCALAR) ...)
    (bvf RANK (component I FORM) ... (theta I J FORM) ...)
    (gsec VEC FORM)   (gword GSEC ...)   (matrix (row SCALAR ...) ...)

Sums of higher objects are written ``(+ A B ...)``.

A ``(chart complex 2)`` expression fixes the chart for what follows; without it
the chart is inferred from the generator tokens.  Printing is canonical, and
``parse(print(v))`` rebuilds ``v`` with an identical internal representation.
"""
from __future__ import annotations

import re

from .scalar import BITS, MASK, Chart, Scalar

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


class ParseError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    text = re.sub(r";[^\n]*", "", text)
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected text near {text[pos:pos + 20]!r}")
    return out


def read(text: str) -> list:
    """Parse text into nested lists of atoms (one entry per top-level form)."""
    tokens = tokenize(text)
    pos = 0

    def walk():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                if pos >= len(tokens):
                    raise ParseError("missing ')'")
                if tokens[pos] == ")":
                    pos += 1
                    return items
                items.append(walk())
        if tok == ")":
            raise ParseError("unexpected ')'")
        return tok

    out = []
    while pos < len(tokens):
        out.append(walk())
    return out


# ---------------------------------------------------------------------------
# printing


def _rational(q) -> str:
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"(/ {int(q.numerator)} {int(q.denominator)})"


def _poly(chart: Chart, poly: dict) -> str:
    if not poly:
        return "0"
    terms = []
    for key in sorted(poly):
        c = poly[key]
        factors = []
        for g in range(chart.ngens):
            e = (key >> (g * BITS)) & MASK
            factors.extend([chart.names[g]] * e)
        if not factors:
            terms.append(_rational(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")")
        else:
            terms.append("(* " + _rational(c) + " " + " ".join(factors) + ")")
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def print_scalar(s: Scalar) -> str:
    from .scalar import _factor_poly

    out = _poly(s.chart, s.num)
    for key, e in s.den:
        f = _poly(s.chart, _factor_poly(key))
        for _ in range(e):
            out = f"(/ {out} {f})"
    return out


def coframe_name(chart: Chart, g: int) -> str:
    return "d" + chart.names[g]


def frame_name(chart: Chart, g: int) -> str:
    return "@" + chart.names[g]


def print_word(chart: Chart, word) -> str:
    return "(" + " ".join(coframe_name(chart, g) for g in word) + ")"


def print_form(a) -> str:
    items = [f"(coef {print_word(a.chart, w)} {print_scalar(c)})" for w, c in sorted(a.terms.items(), key=_word_order)]
    return "(form" + "".join(" " + i for i in items) + ")"


def print_vector(X) -> str:
    items = [f"(coef {frame_name(X.chart, g)} {print_scalar(c)})" for g, c in sorted(X.comps.items())]
    return "(vec" + "".join(" " + i for i in items) + ")"


def print_vvf(phi) -> str:
    """``(vvf (p q) ...)``; a form of mixed degree prints as a ``(+ ...)`` of pieces."""
    chart = phi.chart
    groups: dict = {}
    for (P, Q), c in phi.terms.items():
        groups.setdefault((len(P), len(Q)), []).append((P, Q, c))
    if not groups:
        return "(vvf (1 0))"
    parts = []
    for (p, q) in sorted(groups):
        items = sorted(groups[(p, q)], key=lambda t: (t[0], t[1]))
        body = "".join(
            f" (coef ({' '.join(frame_name(chart, g) for g in P)}) {print_word(chart, Q)} {print_scalar(c)})"
            for P, Q, c in items
        )
        parts.append(f"(vvf ({p} {q}){body})")
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def print_bvf(e) -> str:
    """``(bvf RANK (component I FORM) ... (theta I J FORM) ...)``, 1-based indices, zero entries omitted."""
    out = [f"(bvf {e.rank}"]
    for i, c in enumerate(e.components):
        out.append(f" (component {i + 1} {print_form(c)})")
    for i, row in enumerate(e.connection.theta):
        for j, t in enumerate(row):
            if not t.is_zero():
                out.append(f" (theta {i + 1} {j + 1} {print_form(t)})")
    return "".join(out) + ")"


def print_gsec(A) -> str:
    return f"(gsec {print_vector(A.X)} {print_form(A.xi)})"


def print_gword(W) -> str:
    """One ``(gword ...)`` per decomposable term; sums print as ``(+ ...)``."""
    if not W.terms:
        return "(gword (gsec (vec) (form)))"
    parts = ["(gword" + "".join(" " + print_gsec(s) for s in t) + ")" for t in W.terms]
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def print_matrix(h) -> str:
    return "(matrix" + "".join(" (row " + " ".join(print_scalar(x) for x in row) + ")" for row in h) + ")"


def _word_order(item):
    w = item[0]
    return (len(w), w)


def print_chart(chart: Chart) -> str:
    return f"(chart {chart.kind} {chart.dim})"


def dumps(value, with_chart: bool = True) -> str:
    """Canonical text for any kernel value (optionally prefixed by its chart)."""
    from .forms import Form, VectorField

    if isinstance(value, Scalar):
        body = print_scalar(value)
    elif isinstance(value, Form):
        body = print_form(value)
    elif isinstance(value, VectorField):
        body = print_vector(value)
    elif isinstance(value, list) and value and isinstance(value[0], list):
        body = print_matrix(value)
        value = value[0][0]
    elif isinstance(value, (list, tuple)):
        return " ".join(dumps(v, with_chart) for v in value)
    else:
        body = value.to_sexpr()
    return f"{print_chart(value.chart)} {body}" if with_chart else body


# ---------------------------------------------------------------------------
# evaluation


_GEN = re.compile(r"^(zb|z|x)(\d+)$")


def infer_chart(tree) -> Chart:
    kinds, top = set(), 0

    def visit(t):
        nonlocal top
        if isinstance(t, list):
            for x in t:
                visit(x)
            return
        name = t.lstrip("@")
        if name.startswith("d") and _GEN.match(name[1:]):
            name = name[1:]
        m = _GEN.match(name)
        if m:
            kinds.add("real" if m.group(1) == "x" else "complex")
            top = max(top, int(m.group(2)))

    visit(tree)
    if len(kinds) > 1:
        raise ParseError("mixed real and complex generators")
    return Chart(kinds.pop() if kinds else "real", max(top, 1))


class Evaluator:
    """Evaluates parsed expressions into kernel values on a fixed chart."""

    def __init__(self, chart: Chart):
        self.chart = chart

    def scalar(self, t) -> Scalar:
        v = self.eval(t)
        if not isinstance(v, Scalar):
            raise ParseError(f"expected a scalar, got {type(v).__name__}")
        return v

    def form(self, t):
        from .forms import Form

        v = self.eval(t)
        if isinstance(v, Scalar):
            return Form.scalar(v)
        if not isinstance(v, Form):
            raise ParseError(f"expected a form, got {type(v).__name__}")
        return v

    def word(self, t) -> tuple:
        if not isinstance(t, list):
            raise ParseError("coframe word must be parenthesized")
        out = []
        for tok in t:
            if not tok.startswith("d"):
                raise ParseError(f"bad coframe token {tok!r}")
            out.append(self.chart.index(tok[1:]))
        return tuple(out)

    def frame(self, tok: str) -> int:
        if not isinstance(tok, str) or not tok.startswith("@"):
            raise ParseError(f"bad frame token {tok!r}")
        return self.chart.index(tok[1:])

    def eval(self, t):
        from .forms import Form, VectorField

        c = self.chart
        if isinstance(t, str):
            if re.fullmatch(r"-?\d+", t):
                return Scalar.const(c, int(t))
            if t.startswith("@"):
                return VectorField.basis(c, self.frame(t))
            if t.startswith("d") and t[1:] in c.names:
                return Form.basis(c, (t[1:],))
            if t in c.names:
                return Scalar.gen(c, t)
            raise ParseError(f"unknown token {t!r} on {c}")
        if not t:
            raise ParseError("empty expression")
        head, args = t[0], t[1:]
        handler = _HANDLERS.get(head)
        if handler is None:
            raise ParseError(f"unknown head {head!r}")
        return handler(self, args)


def _arith_add(ev: Evaluator, args):
    vals = [ev.eval(a) for a in args]
    if not vals:
        raise ParseError("(+) needs arguments")
    out = vals[0]
    for v in vals[1:]:
        out = _promote_add(ev, out, v)
    return out


def _promote_add(ev, a, b):
    from .forms import Form

    if isinstance(a, Form) and isinstance(b, Scalar):
        b = Form.scalar(b)
    if isinstance(b, Form) and isinstance(a, Scalar):
        a = Form.scalar(a)
    if type(a) is not type(b):
        raise ParseError(f"cannot add {type(a).__name__} and {type(b).__name__}")
    return a + b


def _arith_mul(ev: Evaluator, args):
    vals = [ev.eval(a) for a in args]
    if not vals:
        raise ParseError("(*) needs arguments")
    out = vals[0]
    for v in vals[1:]:
        if isinstance(out, Scalar):
            out = out * v if isinstance(v, Scalar) else v * out
        elif isinstance(v, Scalar):
            out = out * v
        else:
            raise ParseError("(*) takes at most one non-scalar factor; use wedge")
    return out


def _arith_div(ev: Evaluator, args):
    if len(args) != 2:
        raise ParseError("(/) takes two arguments")
    a, b = ev.eval(args[0]), ev.scalar(args[1])
    if isinstance(a, Scalar):
        return a / b
    return a * b.inverse()


def _arith_neg(ev: Evaluator, args):
    if len(args) == 1:
        return -ev.eval(args[0])
    if len(args) == 2:
        return _promote_add(ev, ev.eval(args[0]), -ev.eval(args[1]))
    raise ParseError("(-) takes one or two arguments")


def _wedge(ev: Evaluator, args):
    from .forms import wedge

    out = ev.form(args[0])
    for a in args[1:]:
        out = wedge(out, ev.form(a))
    return out


def _form(ev: Evaluator, args):
    from .forms import Form

    out: dict = {}
    for item in args:
        if not (isinstance(item, list) and len(item) == 3 and item[0] == "coef"):
            raise ParseError("form entries are (coef WORD SCALAR)")
        w = ev.word(item[1])
        if list(w) != sorted(set(w)):
            raise ParseError("coframe words must be strictly increasing")
        s = ev.scalar(item[2])
        if s:
            if w in out:
                raise ParseError("repeated word in form")
            out[w] = s
    return Form(ev.chart, out)


def _vec(ev: Evaluator, args):
    from .forms import VectorField

    comps: dict = {}
    for item in args:
        if not (isinstance(item, list) and len(item) == 3 and item[0] == "coef"):
            raise ParseError("vec entries are (coef @GEN SCALAR)")
        g = ev.frame(item[1])
        if g in comps:
            raise ParseError("repeated frame index")
        comps[g] = ev.scalar(item[2])
    return VectorField(ev.chart, comps)


def _unary_form_op(fn):
    def handler(ev, args):
        if len(args) != 1:
            raise ParseError("expected one argument")
        return fn(ev.form(args[0]))

    return handler


def _contract(ev, args):
    from .forms import contract

    return contract(ev.eval(args[0]), ev.form(args[1]))


def _lie(ev, args):
    from .forms import lie_derivative

    return lie_derivative(ev.eval(args[0]), ev.form(args[1]))


def _bracket(ev, args):
    from .forms import VectorField, lie_bracket

    a, b = ev.eval(args[0]), ev.eval(args[1])
    if isinstance(a, VectorField):
        return lie_bracket(a, b)
    from .polyvector import sn_bracket

    return sn_bracket(a, b)


def _partial(ev, args):
    return ev.scalar(args[1]).partial(args[0])


def _conj(ev, args):
    return ev.scalar(args[0]).conjugate()


def _d(ev, args):
    from .forms import exterior_d

    return exterior_d(ev.form(args[0]))


def _del(ev, args):
    from .forms import delop

    return delop(ev.form(args[0]))


def _delbar(ev, args):
    from .forms import delbar

    return delbar(ev.form(args[0]))


def _vvf(ev, args):
    from .polyvector import VectorValuedForm

    if not args or not (isinstance(args[0], list) and len(args[0]) == 2):
        raise ParseError("(vvf (p q) (coef VWORD FWORD SCALAR) ...)")
    p, q = (int(x) for x in args[0])
    out: dict = {}
    for item in args[1:]:
        if not (isinstance(item, list) and len(item) == 4 and item[0] == "coef"):
            raise ParseError("vvf entries are (coef VWORD FWORD SCALAR)")
        if not isinstance(item[1], list):
            raise ParseError("frame word must be parenthesized")
        P = tuple(ev.frame(t) for t in item[1])
        Q = ev.word(item[2])
        if len(P) != p or len(Q) != q:
            raise ParseError(f"entry does not have degree ({p} {q})")
        hol = set(ev.chart.holomorphic)
        if not set(P) <= hol or set(Q) & hol:
            raise ParseError("vvf needs holomorphic frames and antiholomorphic coframes")
        if list(P) != sorted(set(P)) or list(Q) != sorted(set(Q)):
            raise ParseError("words must be strictly increasing")
        if (P, Q) in out:
            raise ParseError("repeated entry in vvf")
        s = ev.scalar(item[3])
        if s:
            out[(P, Q)] = s
    return VectorValuedForm(ev.chart, out)


def _bvf(ev, args):
    from .bundle import BundleValuedForm, Connection
    from .forms import Form

    if not args:
        raise ParseError("(bvf RANK ...)")
    r = int(args[0])
    if r < 1:
        raise ParseError("rank must be positive")
    comps = [Form.zero(ev.chart) for _ in range(r)]
    theta = [[Form.zero(ev.chart) for _ in range(r)] for _ in range(r)]

    def idx(tok):
        i = int(tok) - 1
        if not 0 <= i < r:
            raise ParseError(f"index {tok} out of range for rank {r}")
        return i

    for item in args[1:]:
        if isinstance(item, list) and len(item) == 3 and item[0] == "component":
            comps[idx(item[1])] = comps[idx(item[1])] + ev.form(item[2])
        elif isinstance(item, list) and len(item) == 4 and item[0] == "theta":
            i, j = idx(item[1]), idx(item[2])
            theta[i][j] = theta[i][j] + ev.form(item[3])
        else:
            raise ParseError("bvf entries are (component I FORM) or (theta I J FORM)")
    return BundleValuedForm(comps, Connection(tuple(tuple(row) for row in theta)))


def _gsec(ev, args):
    from .forms import VectorField
    from .gencomplex import GeneralizedSection

    if len(args) != 2:
        raise ParseError("(gsec VEC FORM)")
    X = ev.eval(args[0])
    if isinstance(X, Scalar) and not X:
        X = VectorField(ev.chart, {})
    if not isinstance(X, VectorField):
        raise ParseError("first gsec slot must be a vector field")
    return GeneralizedSection(X, ev.form(args[1]))


def _gword(ev, args):
    from .gencomplex import GeneralizedSection, GeneralizedWord

    letters = [ev.eval(a) for a in args]
    if not letters or not all(isinstance(x, GeneralizedSection) for x in letters):
        raise ParseError("(gword GSEC ...) needs at least one section")
    return GeneralizedWord(ev.chart, (tuple(letters),))


def _matrix(ev, args):
    rows = []
    for r in args:
        if not (isinstance(r, list) and r and r[0] == "row"):
            raise ParseError("matrix entries are (row SCALAR ...)")
        rows.append([ev.scalar(x) for x in r[1:]])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square and non-empty")
    return rows


_HANDLERS = {
    "matrix": _matrix,
    "gsec": _gsec,
    "gword": _gword,
    "vvf": _vvf,
    "bvf": _bvf,
    "+": _arith_add,
    "*": _arith_mul,
    "/": _arith_div,
    "-": _arith_neg,
    "wedge": _wedge,
    "form": _form,
    "vec": _vec,
    "d": _d,
    "del": _del,
    "delbar": _delbar,
    "contract": _contract,
    "lie": _lie,
    "bracket": _bracket,
    "partial": _partial,
    "conj": _conj,
}


def register(head: str):
    """Decorator used by the higher modules to add grammar heads."""

    def deco(fn):
        _HANDLERS[head] = fn
        return fn

    return deco


def loads(text: str, chart: Chart | None = None) -> list:
    """Evaluate every top-level expression; ``(chart K N)`` switches the chart."""
    import cartanlab  # noqa: F401  (registers the higher grammar heads)

    trees = read(text)
    out = []
    for t in trees:
        if isinstance(t, list) and t and t[0] == "chart":
            if len(t) != 3:
                raise ParseError("(chart KIND N)")
            chart = Chart(t[1], int(t[2]))
            continue
        ch = chart or infer_chart(t)
        out.append(Evaluator(ch).eval(t))
    return out


def loads_one(text: str, chart: Chart | None = None):
    vals = loads(text, chart)
    if len(vals) != 1:
        raise ParseError(f"expected one expression, found {len(vals)}")
    return vals[0]
