"""Exact rational functions on a coordinate chart.

A :class:`Scalar` is ``numerator / prod(factor ** exp)`` where the numerator is
a sparse polynomial with rational coefficients and the denominator is kept as
a multiset of monic polynomial factors.  Nothing is ever reduced by a GCD;
because denominators never vanish, a Scalar is zero exactly when its numerator
polynomial is empty, so zero-testing is a dictionary emptiness check.

Polynomials are ``dict[int, mpq]`` keyed by packed exponent vectors: generator
``g`` occupies bits ``[g*BITS, (g+1)*BITS)`` of the key, so monomial
multiplication is integer addition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from gmpy2 import mpq

BITS = 20
MASK = (1 << BITS) - 1

ZERO = mpq(0)
ONE = mpq(1)


class ChartError(ValueError):
    """Objects from different charts, or a chart of the wrong kind."""


class PoleError(ZeroDivisionError):
    """Division by zero or evaluation at a pole."""


@dataclass(frozen=True)
class Chart:
    """A single coordinate chart.

    A complex chart of dimension ``n`` has ``2n`` algebraically independent
    generators ``z1..zn, zb1..zbn`` (Wirtinger convention); a real chart of
    dimension ``m`` has ``x1..xm``.  Generator ``g`` doubles as coframe index
    ``g`` (``dz1``, ``dzb1``, ``dx1``) and frame index ``g`` (``@z1`` ...).
    """

    kind: str
    dim: int
    names: tuple[str, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("real", "complex"):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("chart dimension must be positive")
        if self.kind == "complex":
            names = tuple(f"z{i}" for i in range(1, self.dim + 1)) + tuple(
                f"zb{i}" for i in range(1, self.dim + 1)
            )
        else:
            names = tuple(f"x{i}" for i in range(1, self.dim + 1))
        object.__setattr__(self, "names", names)

    @classmethod
    def complex(cls, n: int) -> "Chart":
        return cls("complex", n)

    @classmethod
    def real(cls, m: int) -> "Chart":
        return cls("real", m)

    @property
    def is_complex(self) -> bool:
        return self.kind == "complex"

    @property
    def ngens(self) -> int:
        return 2 * self.dim if self.is_complex else self.dim

    @property
    def holomorphic(self) -> range:
        self.require_complex()
        return range(self.dim)

    @property
    def antiholomorphic(self) -> range:
        self.require_complex()
        return range(self.dim, 2 * self.dim)

    def require_complex(self):
        if not self.is_complex:
            raise ChartError("operation needs a complex chart")

    def index(self, gen) -> int:
        """Generator index from a name (``'zb2'``) or an int."""
        if isinstance(gen, int):
            if 0 <= gen < self.ngens:
                return gen
            raise KeyError(f"generator index {gen} out of range for {self}")
        try:
            return self.names.index(gen)
        except ValueError:
            raise KeyError(f"unknown generator {gen!r} on {self}") from None

    def conj_index(self, g: int) -> int:
        n = self.dim
        return g + n if g < n else g - n

    @cached_property
    def _conj_shift(self) -> int:
        return self.dim * BITS

    def __str__(self):
        return f"{self.kind}({self.dim})"


# ---------------------------------------------------------------------------
# packed-exponent polynomials


def mono(g: int, power: int = 1) -> int:
    return power << (g * BITS)


def exponent(key: int, g: int) -> int:
    return (key >> (g * BITS)) & MASK


def poly_add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def poly_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = -c
        else:
            s = s - c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def poly_scale(a: dict, c) -> dict:
    if not c:
        return {}
    if c == 1:
        return a
    return {k: v * c for k, v in a.items()}


def poly_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            s = get(k)
            if s is None:
                out[k] = ca * cb
            else:
                out[k] = s + ca * cb
    return {k: v for k, v in out.items() if v}


def poly_pow(a: dict, e: int) -> dict:
    out = {0: ONE}
    base = a
    while e:
        if e & 1:
            out = poly_mul(out, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return out


def poly_deriv(a: dict, g: int) -> dict:
    shift = g * BITS
    step = 1 << shift
    out = {}
    for k, c in a.items():
        e = (k >> shift) & MASK
        if e:
            out[k - step] = c * e
    return out


def poly_conj(a: dict, chart: Chart) -> dict:
    sh = chart._conj_shift
    lo = (1 << sh) - 1
    return {((k & lo) << sh) | (k >> sh): c for k, c in a.items()}


def poly_eval(a: dict, values: list) -> mpq:
    total = ZERO
    n = len(values)
    for k, c in a.items():
        term = c
        for g in range(n):
            e = (k >> (g * BITS)) & MASK
            if e:
                term = term * values[g] ** e
        total += term
    return total


def poly_key(a: dict) -> tuple:
    return tuple(sorted(a.items()))


def _monic(a: dict) -> tuple[mpq, dict]:
    lead = a[max(a)]
    if lead == 1:
        return ONE, a
    inv = ONE / lead
    return lead, {k: v * inv for k, v in a.items()}


def _to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


# ---------------------------------------------------------------------------


class Scalar:
    """Exact rational function on a chart.  Immutable."""

    __slots__ = ("chart", "num", "den")
    __hash__ = None

    def __init__(self, chart: Chart, num: dict, den: tuple = ()):
        self.chart = chart
        self.num = num
        self.den = den if num else ()

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, chart: Chart, value) -> "Scalar":
        q = _to_mpq(value)
        return cls(chart, {0: q} if q else {})

    @classmethod
    def gen(cls, chart: Chart, g) -> "Scalar":
        return cls(chart, {mono(chart.index(g)): ONE})

    @classmethod
    def poly(cls, chart: Chart, terms: dict) -> "Scalar":
        """From ``{exponent tuple: coefficient}``."""
        num = {}
        for exps, c in terms.items():
            if len(exps) != chart.ngens:
                raise ValueError("exponent tuple length must equal generator count")
            k = 0
            for g, e in enumerate(exps):
                k |= e << (g * BITS)
            q = _to_mpq(c)
            if q:
                num[k] = num.get(k, ZERO) + q
        return cls(chart, {k: v for k, v in num.items() if v})

    @classmethod
    def poly_from_keys(cls, chart: Chart, terms: dict) -> "Scalar":
        """From ``{packed exponent key: coefficient}`` (see :func:`mono`)."""
        num = {k: _to_mpq(c) for k, c in terms.items()}
        return cls(chart, {k: v for k, v in num.items() if v})

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.num or (not self.den and list(self.num) == [0])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, type(ONE))):
            other = Scalar.const(self.chart, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self - other).is_zero()

    def same_representation(self, other: "Scalar") -> bool:
        return self.chart == other.chart and self.num == other.num and self.den == other.den

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.chart != self.chart:
                raise ChartError(f"chart mismatch: {self.chart} vs {other.chart}")
            return other
        return Scalar.const(self.chart, other)

    def _den_poly(self, exps: dict) -> dict:
        out = {0: ONE}
        for key, e in exps.items():
            if e:
                out = poly_mul(out, _factor_pow(key, e))
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return Scalar(self.chart, poly_add(self.num, other.num), self.den)
        da, db = dict(self.den), dict(other.den)
        merged = {k: max(da.get(k, 0), db.get(k, 0)) for k in da.keys() | db.keys()}
        na = poly_mul(self.num, self._den_poly({k: e - da.get(k, 0) for k, e in merged.items()}))
        nb = poly_mul(other.num, self._den_poly({k: e - db.get(k, 0) for k, e in merged.items()}))
        return Scalar(self.chart, poly_add(na, nb), tuple(sorted(merged.items())))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.chart, {k: -v for k, v in self.num.items()}, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            q = _to_mpq(other)
            return Scalar(self.chart, poly_scale(self.num, q), self.den)
        other = self._coerce(other)
        if not self.num or not other.num:
            return Scalar(self.chart, {})
        if not other.den:
            den = self.den
        elif not self.den:
            den = other.den
        else:
            d = dict(self.den)
            for k, e in other.den:
                d[k] = d.get(k, 0) + e
            den = tuple(sorted(d.items()))
        return Scalar(self.chart, poly_mul(self.num, other.num), den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise PoleError("division by the zero Scalar")
        num = self._den_poly(dict(self.den))
        lead, f = _monic(self.num)
        num = poly_scale(num, ONE / lead)
        if list(f) == [0]:
            return Scalar(self.chart, num)
        return Scalar(self.chart, num, ((poly_key(f), 1),))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Scalar.const(self.chart, 1)
        for _ in range(e):
            out = out * self
        return out

    # calculus -------------------------------------------------------------

    def partial(self, gen) -> "Scalar":
        """Exact partial derivative with respect to a generator."""
        g = self.chart.index(gen)
        dn = poly_deriv(self.num, g)
        if not self.den:
            return Scalar(self.chart, dn)
        moving = []
        for key, e in self.den:
            fd = poly_deriv(_factor_poly(key), g)
            if fd:
                moving.append((key, e, fd))
        if not moving:
            return Scalar(self.chart, dn, self.den)
        # d(N/prod f^e) = (N' prod f - N sum e f' prod_{h!=f} h) / (D prod f)
        polys = [_factor_poly(k) for k, _, _ in moving]
        prod_all = {0: ONE}
        for p in polys:
            prod_all = poly_mul(prod_all, p)
        num = poly_mul(dn, prod_all)
        for i, (key, e, fd) in enumerate(moving):
            rest = {0: ONE}
            for j, p in enumerate(polys):
                if j != i:
                    rest = poly_mul(rest, p)
            num = poly_sub(num, poly_scale(poly_mul(self.num, poly_mul(fd, rest)), e))
        d = dict(self.den)
        for key, _, _ in moving:
            d[key] += 1
        return Scalar(self.chart, num, tuple(sorted(d.items())))

    def conjugate(self) -> "Scalar":
        """Swap ``z^i`` and ``zb^i``; rational coefficients are self-conjugate."""
        self.chart.require_complex()
        num = poly_conj(self.num, self.chart)
        if not self.den:
            return Scalar(self.chart, num)
        out = Scalar(self.chart, num)
        for key, e in self.den:
            f = Scalar(self.chart, poly_conj(_factor_poly(key), self.chart))
            out = out / f ** e
        return out

    def eval_at(self, point) -> Fraction:
        """Exact value at a rational point given as ``{name: value}`` or a sequence."""
        values = _point_values(self.chart, point)
        den = ONE
        for key, e in self.den:
            den *= poly_eval(_factor_poly(key), values) ** e
        if den == 0:
            raise PoleError("Scalar has a pole at the evaluation point")
        v = poly_eval(self.num, values) / den
        return Fraction(int(v.numerator), int(v.denominator))

    def degree(self) -> int:
        """Total degree of the numerator (denominator ignored)."""
        best = 0
        for k in self.num:
            best = max(best, sum(exponent(k, g) for g in range(self.chart.ngens)))
        return best

    def __repr__(self):
        from .sexpr import print_scalar

        return f"Scalar({print_scalar(self)})"


_FACTOR_CACHE: dict = {}


def _factor_poly(key: tuple) -> dict:
    p = _FACTOR_CACHE.get(key)
    if p is None:
        p = _FACTOR_CACHE[key] = dict(key)
    return p


_POW_CACHE: dict = {}


def _factor_pow(key: tuple, e: int) -> dict:
    if e == 1:
        return _factor_poly(key)
    ck = (key, e)
    p = _POW_CACHE.get(ck)
    if p is None:
        if len(_POW_CACHE) > 4096:
            _POW_CACHE.clear()
        p = _POW_CACHE[ck] = poly_pow(_factor_poly(key), e)
    return p


def _point_values(chart: Chart, point) -> list:
    if isinstance(point, dict):
        vals = [None] * chart.ngens
        for name, v in point.items():
            vals[chart.index(name)] = _to_mpq(v)
        if any(v is None for v in vals):
            # unassigned generators are only allowed when absent from the expression
            vals = [ZERO if v is None else v for v in vals]
        return vals
    vals = [_to_mpq(v) for v in point]
    if len(vals) != chart.ngens:
        raise ValueError("point must assign every generator")
    return vals


# ---------------------------------------------------------------------------
# small exact matrices of Scalars (lists of lists)


def identity(chart: Chart, r: int) -> list:
    one, zero = Scalar.const(chart, 1), Scalar.const(chart, 0)
    return [[one if i == j else zero for j in range(r)] for i in range(r)]


def matmul(a: list, b: list) -> list:
    n, m, k = len(a), len(b), len(b[0])
    chart = a[0][0].chart
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            s = Scalar.const(chart, 0)
            for t in range(m):
                s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def determinant(h: list) -> Scalar:
    r = len(h)
    if any(len(row) != r for row in h):
        raise ValueError("matrix must be square")
    if r == 1:
        return h[0][0]
    if r == 2:
        return h[0][0] * h[1][1] - h[0][1] * h[1][0]
    total = Scalar.const(h[0][0].chart, 0)
    for j in range(r):
        minor = [row[:j] + row[j + 1:] for row in h[1:]]
        term = h[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def matrix_inverse(h: list) -> list:
    """Adjugate over determinant; exact."""
    r = len(h)
    det = determinant(h)
    if det.is_zero():
        raise PoleError("matrix is symbolically singular")
    inv_det = det.inverse()
    if r == 1:
        return [[inv_det]]
    out = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(h) if k != i]
            cof = determinant(minor)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * inv_det
    return out


def conjugate_transpose(h: list) -> list:
    r = len(h)
    return [[h[j][i].conjugate() for j in range(r)] for i in range(r)]


def is_hermitian(h: list) -> bool:
    r = len(h)
    return all(h[i][j] == h[j][i].conjugate() for i in range(r) for j in range(r))
