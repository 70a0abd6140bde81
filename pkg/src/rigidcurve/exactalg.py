"""Exact arithmetic: rationals, univariate polynomials, ternary forms and
simple algebraic extensions of the rationals.

Rationals are ``fractions.Fraction``.  Heavy kernels (products, division,
gcd, factorization, multivariate resultants) are delegated to python-flint;
the univariate resultant is a subresultant pseudo-remainder sequence written
here so it can be checked against flint.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import flint

from .errors import ParseError, ZeroInput

Rat = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat(x) -> Fraction:
    """Coerce ints, Fractions, flint rationals and "p/q" strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise ParseError(f"not a rational: {x!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator: {x!r}")
        return Fraction(int(m.group(1)), den)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rat_str(r) -> str:
    r = rat(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _to_fmpq(r: Fraction) -> flint.fmpq:
    return flint.fmpq(r.numerator, r.denominator)


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs", "_fl")

    def __init__(self, coeffs=()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._fl = None

    # construction helpers
    @classmethod
    def from_flint(cls, p) -> "UniPoly":
        out = cls.__new__(cls)
        cs = [Fraction(int(c.p), int(c.q)) for c in p.coeffs()]
        while cs and cs[-1] == 0:
            cs.pop()
        out.coeffs = tuple(cs)
        out._fl = p
        return out

    @classmethod
    def coerce(cls, x) -> "UniPoly":
        """UniPoly from a UniPoly, a rational scalar or a coefficient list."""
        if isinstance(x, UniPoly):
            return x
        if isinstance(x, (list, tuple)):
            return cls(x)
        return cls([rat(x)])

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def flint(self) -> flint.fmpq_poly:
        if self._fl is None:
            self._fl = flint.fmpq_poly([_to_fmpq(c) for c in self.coeffs])
        return self._fl

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.pretty()})"

    def pretty(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and abs(c) == 1:
                s = ("-" if c < 0 else "+") + mono
            else:
                s = ("-" if c < 0 else "+") + rat_str(abs(c)) + ("*" + mono if mono else "")
            parts.append(s)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    # arithmetic, delegated to flint
    @staticmethod
    def _lift(x):
        if isinstance(x, UniPoly):
            return x.flint
        if isinstance(x, (int, Fraction)):
            return flint.fmpq_poly([_to_fmpq(rat(x))])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return UniPoly.from_flint(self.flint + o)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly.from_flint(-self.flint)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return UniPoly.from_flint(self.flint - o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return UniPoly.from_flint(o - self.flint)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return UniPoly.from_flint(self.flint * o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return UniPoly.from_flint(self.flint ** k)

    def __divmod__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self.flint, other.flint)
        return UniPoly.from_flint(q), UniPoly.from_flint(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other) -> bool:
        """True when self divides other."""
        return (other % self).is_zero()

    def __call__(self, x):
        """Horner evaluation; x may be any ring element supporting + and *."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0)
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def antiderivative(self) -> "UniPoly":
        return UniPoly([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def scale(self, c) -> "UniPoly":
        c = rat(c)
        return UniPoly([c * a for a in self.coeffs])

    def compose(self, inner: "UniPoly") -> "UniPoly":
        return UniPoly.from_flint(self.flint(inner.flint))

    def reversed(self, formal_degree: int | None = None) -> "UniPoly":
        """Coefficient reversal t^d p(1/t); the chart change at t = infinity."""
        d = self.degree if formal_degree is None else formal_degree
        if d < self.degree:
            raise ValueError("formal degree below actual degree")
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return UniPoly(cs[::-1])

    def shift(self, a) -> "UniPoly":
        """p(t + a)."""
        return self.compose(UniPoly([a, 1]))

    def order_at_zero(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        raise ZeroInput("order of the zero polynomial")

    def primitive_integer(self) -> tuple:
        """Integer coefficient tuple with content 1 and positive leading term."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g == 0:
            return ()
        if ints[-1] < 0:
            g = -g
        return tuple(v // g for v in ints)

    def real_roots_approx(self):
        """Floating-point real roots, for display only."""
        if self.degree <= 0:
            return []
        roots = flint.fmpz_poly(list(self.primitive_integer())).complex_roots()
        return sorted(float(r.real.mid()) for r, _ in roots if abs(float(r.imag.mid())) < 1e-12)

    def to_wire(self) -> list:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_wire(cls, data) -> "UniPoly":
        if not isinstance(data, list):
            raise ParseError("polynomial must be a coefficient array")
        return cls([rat(c) for c in data])


# ---------------------------------------------------------------------------
# gcd, resultants, multiplicities


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) = 0."""
    if p.is_zero() and q.is_zero():
        return UniPoly()
    return UniPoly.from_flint(p.flint.gcd(q.flint)).monic()


def poly_lcm(p: UniPoly, q: UniPoly) -> UniPoly:
    if p.is_zero() or q.is_zero():
        return UniPoly()
    return (p * q).exact_div(poly_gcd(p, q)).monic()


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of dense lists (lowest first) with exact integer-free steps."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        r = [c * lb ** e for c in r]
    return r


def subresultant_resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant by the subresultant pseudo-remainder sequence (Collins)."""
    if p.is_zero() or q.is_zero():
        raise ZeroInput("resultant with a zero polynomial")
    a, b = list(p.coeffs), list(q.coeffs)
    da, db = len(a) - 1, len(b) - 1
    s = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if (da * db) % 2:
            s = -1
    if db == 0:
        return s * b[0] ** da
    g = Fraction(1)
    h = Fraction(1)
    while True:
        delta = da - db
        if (da % 2) and (db % 2):
            s = -s
        r = _prem(a, b)
        if not r:
            return Fraction(0)
        a = b
        scale = g * h ** delta
        b = [c / scale for c in r]
        g = a[-1]
        h = h ** (1 - delta) * g ** delta
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            h = h ** (1 - da) * b[-1] ** da
            return s * h


def _resultant_euclid(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant through the field Euclidean algorithm (exact over Q)."""
    a, b = list(p.coeffs), list(q.coeffs)
    res = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * b[0] ** da
        # remainder of a by b over the field
        r = list(a)
        lb = b[-1]
        while r and len(r) - 1 >= db:
            f = r[-1] / lb
            s = len(r) - 1 - db
            for i, c in enumerate(b):
                r[i + s] -= f * c
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        # Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
        if (da * db) % 2:
            res = -res
        res *= lb ** (da - dr)
        a, b = b, r


def root_multiplicity(p: UniPoly, r) -> int:
    """Largest k with (t - r)^k dividing p, by repeated exact division."""
    if p.is_zero():
        raise ZeroInput("root multiplicity of the zero polynomial")
    lin = UniPoly([-rat(r), 1])
    k = 0
    while True:
        q, rem = divmod(p, lin)
        if not rem.is_zero():
            return k
        p = q
        k += 1


def squarefree_part(p: UniPoly):
    """Return (p / gcd(p, p') made monic, [(factor degree, multiplicity), ...]).

    The profile lists the repeated squarefree factors only, i.e. entries with
    multiplicity >= 2, from Yun's decomposition.
    """
    if p.is_zero():
        raise ZeroInput("square-free part of the zero polynomial")
    if p.degree <= 0:
        return UniPoly([1]), []
    g = poly_gcd(p, p.derivative())
    sqf = p.exact_div(g).monic()
    profile = [(f.degree, k) for f, k in squarefree_decomposition(p) if k >= 2]
    return sqf, profile


def squarefree_decomposition(p: UniPoly):
    """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
    if p.is_zero():
        raise ZeroInput("square-free decomposition of the zero polynomial")
    out = []
    a = p.monic()
    b = a.derivative()
    c = poly_gcd(a, b)
    if c.degree <= 0:
        return [(a, 1)] if a.degree > 0 else []
    w = a.exact_div(c)
    y = b.exact_div(c)
    k = 1
    while w.degree > 0:
        z = y - w.derivative()
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, k))
        w = w.exact_div(g)
        y = z.exact_div(g)
        k += 1
    return out


def is_squarefree(p: UniPoly) -> bool:
    return p.degree <= 0 or poly_gcd(p, p.derivative()).degree == 0


def integrate_unit_interval(p: UniPoly) -> Fraction:
    """Exact integral of p over [0, 1]."""
    return sum((c / (k + 1) for k, c in enumerate(p.coeffs)), Fraction(0))


def factor_rational(p: UniPoly):
    """Irreducible factorization over Q: (content, [(monic factor, multiplicity)])."""
    if p.is_zero():
        raise ZeroInput("factorization of the zero polynomial")
    _, facs = p.flint.factor()
    out = [(UniPoly.from_flint(f).monic(), int(e)) for f, e in facs]
    out.sort(key=lambda fe: (fe[0].degree, fe[0].coeffs))
    return p.lc, out


def rational_roots(p: UniPoly):
    """Rational roots with multiplicities, sorted."""
    _, facs = factor_rational(p)
    return sorted((-f.coeffs[0], e) for f, e in facs if f.degree == 1)


# ---------------------------------------------------------------------------
# algebraic extensions Q[a]/(m)


class RationalField:
    """The base field Q, with the same small interface as NumberField."""

    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        return rat(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def to_wire(self):
        return None


QQ = RationalField()


class NumberField:
    """Q[a]/(m) for a monic modulus m, irreducible over Q.

    Irreducibility is verified by factorization when deg m <= 8 and trusted
    (``irreducibility_checked`` False) above that.
    """

    CHECK_LIMIT = 8

    def __init__(self, modulus: UniPoly, check: bool = True):
        if modulus.degree < 1:
            raise ValueError("modulus must have positive degree")
        self.modulus = modulus.monic()
        self._m = self.modulus.flint
        self.irreducibility_checked = False
        if check and self.modulus.degree <= self.CHECK_LIMIT:
            _, facs = factor_rational(self.modulus)
            if len(facs) != 1 or facs[0][1] != 1:
                raise ValueError(f"modulus {self.modulus.pretty('a')} is reducible")
            self.irreducibility_checked = True
        self.zero = ExtScalar(self, flint.fmpq_poly([]))
        self.one = ExtScalar(self, flint.fmpq_poly([1]))

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def gen(self) -> "ExtScalar":
        return self(UniPoly([0, 1]))

    def __call__(self, x) -> "ExtScalar":
        if isinstance(x, ExtScalar):
            if x.field != self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, UniPoly):
            return ExtScalar(self, x.flint % self._m)
        if isinstance(x, flint.fmpq_poly):
            return ExtScalar(self, x % self._m)
        return ExtScalar(self, flint.fmpq_poly([_to_fmpq(rat(x))]))

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({self.modulus.pretty('a')})"

    def to_wire(self):
        return self.modulus.to_wire()


class ExtScalar:
    """Element of a NumberField, stored as its reduced representative."""

    __slots__ = ("field", "rep")

    def __init__(self, field: NumberField, rep):
        self.field = field
        self.rep = rep

    @property
    def modulus(self) -> UniPoly:
        return self.field.modulus

    @property
    def representative(self) -> UniPoly:
        return UniPoly.from_flint(self.rep)

    def _coerce(self, other):
        if isinstance(other, ExtScalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing elements of different fields")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return flint.fmpq_poly([_to_fmpq(rat(other))])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtScalar(self.field, self.rep + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtScalar(self.field, self.rep - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtScalar(self.field, o - self.rep)

    def __neg__(self):
        return ExtScalar(self.field, -self.rep)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtScalar(self.field, (self.rep * o) % self.field._m)

    __rmul__ = __mul__

    def inverse(self) -> "ExtScalar":
        if self.rep.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = self.rep.xgcd(self.field._m)
        # g is a nonzero constant because the modulus is irreducible
        return ExtScalar(self.field, (s / g[0]) % self.field._m)

    def __truediv__(self, other):
        if isinstance(other, ExtScalar):
            return self * other.inverse()
        o = rat(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return ExtScalar(self.field, self.rep / _to_fmpq(o))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def is_rational(self) -> bool:
        return self.rep.degree() <= 0

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return rat(self.rep[0]) if not self.rep.is_zero() else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, ExtScalar):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == flint.fmpq_poly([_to_fmpq(rat(other))])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, tuple(str(c) for c in self.rep.coeffs())))

    def __bool__(self):
        return not self.rep.is_zero()

    def __repr__(self):
        return f"[{self.representative.pretty('a')}]"

    def to_wire(self) -> list:
        return self.representative.to_wire()


def field_of(values):
    """The common field of a collection of Fractions/ExtScalars."""
    for v in values:
        if isinstance(v, ExtScalar):
            return v.field
    return QQ


def is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, ExtScalar) else x == 0


def scalar_wire(x):
    return x.to_wire() if isinstance(x, ExtScalar) else rat_str(x)


def minimal_polynomial(x) -> UniPoly:
    """Minimal polynomial over Q of a Fraction or ExtScalar."""
    if not isinstance(x, ExtScalar):
        return UniPoly([-rat(x), 1])
    ctx = flint.fmpq_mpoly_ctx.get(("a", "X"), "lex")
    a, X = ctx.gens()
    m = _uni_to_mpoly(x.field.modulus, a, ctx)
    rep = _uni_to_mpoly(x.representative, a, ctx)
    r = m.resultant(X - rep, "a")
    poly = UniPoly(_mpoly_to_uni_coeffs(r, 1))
    sqf, _ = squarefree_part(poly)
    return sqf


def _uni_to_mpoly(p: UniPoly, var, ctx):
    out = ctx.from_dict({})
    for k, c in enumerate(p.coeffs):
        if c:
            out += _to_fmpq(c) * var ** k
    return out


def _mpoly_to_uni_coeffs(m, index: int) -> list:
    d = m.to_dict()
    if not d:
        return []
    deg = max(k[index] for k in d)
    cs = [Fraction(0)] * (deg + 1)
    for k, v in d.items():
        if any(e for j, e in enumerate(k) if j != index):
            raise ValueError("polynomial is not univariate in the requested variable")
        cs[k[index]] += rat(v)
    return cs


# ---------------------------------------------------------------------------
# dense polynomials over a field (lists, lowest degree first)


def kp_strip(a: list) -> list:
    while a and is_zero(a[-1]):
        a.pop()
    return a


def kp_divmod(a: list, b: list):
    b = kp_strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = kp_strip(list(a))
    inv = 1 / b[-1] if not isinstance(b[-1], ExtScalar) else b[-1].inverse()
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        f = r[-1] * inv
        s = len(r) - len(b)
        q[s] = f
        for i, c in enumerate(b):
            r[i + s] = r[i + s] - f * c
        r.pop()
        kp_strip(r)
    return q, r


def kp_monic(a: list) -> list:
    a = kp_strip(list(a))
    if not a:
        return a
    inv = a[-1].inverse() if isinstance(a[-1], ExtScalar) else 1 / a[-1]
    return [c * inv for c in a]


def kp_gcd(a: list, b: list) -> list:
    a, b = kp_strip(list(a)), kp_strip(list(b))
    while b:
        _, r = kp_divmod(a, b)
        a, b = b, r
    return kp_monic(a)


def kp_derivative(a: list) -> list:
    return kp_strip([k * c for k, c in enumerate(a)][1:])


def kp_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return kp_strip(out)


def kp_eval(a: list, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def kp_root_split(a: list):
    """Split a polynomial over a field into (simple-root part, repeated-root part).

    Both parts are monic and squarefree; the first has the roots of
    multiplicity exactly one, the second the roots of multiplicity >= 2.
    """
    a = kp_strip(list(a))
    g = kp_gcd(a, kp_derivative(a))
    sqf, _ = kp_divmod(a, g)
    sqf = kp_monic(sqf)
    rep = kp_gcd(sqf, g)
    simple, _ = kp_divmod(sqf, rep)
    return kp_monic(simple), rep


def kp_multiplicity(a: list, root) -> int:
    lin = [-root, 1]
    k = 0
    a = kp_strip(list(a))
    while a:
        q, r = kp_divmod(a, lin)
        if r:
            break
        a = q
        k += 1
    return k


# ---------------------------------------------------------------------------
# homogeneous ternary forms

TERN_CTX = flint.fmpq_mpoly_ctx.get(("z1", "z2", "z3"), "lex")


class TernForm:
    """Homogeneous form in z1, z2, z3 stored as {(i1, i2, i3): Fraction}."""

    __slots__ = ("terms", "degree", "_fl")

    def __init__(self, terms=None, degree: int | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = rat(v)
            if v:
                k = tuple(int(e) for e in k)
                if len(k) != 3 or min(k) < 0:
                    raise ValueError(f"bad exponent triple {k}")
                clean[k] = clean.get(k, Fraction(0)) + v
        clean = {k: v for k, v in clean.items() if v}
        degs = {sum(k) for k in clean}
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        if degs:
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError("declared degree does not match terms")
            degree = d
        self.terms = clean
        self.degree = 0 if degree is None else degree
        self._fl = None

    @classmethod
    def var(cls, k: int) -> "TernForm":
        e = [0, 0, 0]
        e[k] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c) -> "TernForm":
        return cls({(0, 0, 0): c}, 0)

    @classmethod
    def linear(cls, a, b, c) -> "TernForm":
        return cls({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, 1)

    @classmethod
    def from_flint(cls, p, degree: int | None = None) -> "TernForm":
        return cls({k: rat(v) for k, v in p.to_dict().items()}, degree)

    @property
    def flint(self):
        if self._fl is None:
            self._fl = TERN_CTX.from_dict({k: _to_fmpq(v) for k, v in self.terms.items()})
        return self._fl

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, k) -> Fraction:
        return self.terms.get(tuple(k), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, TernForm) and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TernForm({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = "*".join(f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e)
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{rat_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def _wrap(self, p, degree):
        return TernForm.from_flint(p, degree)

    def __add__(self, other):
        if not isinstance(other, TernForm):
            other = TernForm.const(other)
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        d = self.degree if self.terms else other.degree
        return self._wrap(self.flint + other.flint, d)

    __radd__ = __add__

    def __neg__(self):
        return TernForm({k: -v for k, v in self.terms.items()}, self.degree)

    def __sub__(self, other):
        if not isinstance(other, TernForm):
            other = TernForm.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TernForm):
            return self._wrap(self.flint * other.flint, self.degree + other.degree)
        c = rat(other)
        return TernForm({k: v * c for k, v in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._wrap(self.flint ** k, self.degree * k)

    def divides(self, other: "TernForm") -> bool:
        if self.is_zero():
            return other.is_zero()
        q, r = divmod(other.flint, self.flint)
        return r.is_zero()

    def exact_div(self, other: "TernForm") -> "TernForm":
        q, r = divmod(self.flint, other.flint)
        if not r.is_zero():
            raise ValueError("inexact division of forms")
        return self._wrap(q, self.degree - other.degree)

    def partial(self, k: int) -> "TernForm":
        return self._wrap(self.flint.derivative(k), max(self.degree - 1, 0))

    def gradient(self) -> tuple:
        return tuple(self.partial(k) for k in range(3))

    def __call__(self, a, b, c):
        """Evaluate at scalars (Fraction, ExtScalar) or polynomials (UniPoly)."""
        if any(isinstance(x, UniPoly) for x in (a, b, c)):
            return self.pullback(a, b, c)
        pw = [{0: 1}, {0: 1}, {0: 1}]
        vals = (a, b, c)
        acc = 0
        for k, v in self.terms.items():
            term = v
            for i, e in enumerate(k):
                if e:
                    cache = pw[i]
                    if e not in cache:
                        cache[e] = vals[i] ** e
                    term = cache[e] * term
            acc = acc + term
        return acc

    def pullback(self, p1, p2, p3) -> UniPoly:
        """F(p1(t), p2(t), p3(t)) as a univariate polynomial."""
        fs = [UniPoly.coerce(p).flint for p in (p1, p2, p3)]
        pw = [[flint.fmpq_poly([1])] for _ in range(3)]
        for i in range(3):
            for _ in range(self.degree):
                pw[i].append(pw[i][-1] * fs[i])
        acc = flint.fmpq_poly([])
        for k, v in self.terms.items():
            acc += _to_fmpq(v) * pw[0][k[0]] * pw[1][k[1]] * pw[2][k[2]]
        return UniPoly.from_flint(acc)

    def substitute(self, rows) -> "TernForm":
        """F(M z): z_i is replaced by the linear form sum_j rows[i][j] z_j."""
        z = TERN_CTX.gens()
        lins = [sum((_to_fmpq(rat(rows[i][j])) * z[j] for j in range(3)), TERN_CTX.from_dict({}))
                for i in range(3)]
        return self._wrap(self.flint.compose(*lins), self.degree)

    def compose_forms(self, g1: "TernForm", g2: "TernForm", g3: "TernForm") -> "TernForm":
        """F(g1, g2, g3) for forms of a common degree."""
        e = g1.degree
        return self._wrap(self.flint.compose(g1.flint, g2.flint, g3.flint), self.degree * e)

    def primitive_integer(self) -> "TernForm":
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, int(c * den))
        return TernForm({k: v * den / g for k, v in self.terms.items()}, self.degree)

    def normalize(self) -> "TernForm":
        """Primitive integer coefficients, first coefficient in graded-lex order positive."""
        if not self.terms:
            return self
        p = self.primitive_integer()
        lead = max(p.terms)
        return -p if p.terms[lead] < 0 else p

    def factor(self):
        """(constant, [(normalized irreducible factor, multiplicity)])."""
        c, facs = self.flint.factor()
        out = []
        for f, e in facs:
            tf = TernForm.from_flint(f)
            n = tf.normalize()
            out.append((n, int(e)))
        out.sort(key=lambda fe: (fe[0].degree, sorted(fe[0].terms.items())))
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factor())

    def squarefree_part(self) -> "TernForm":
        out = TernForm.const(1)
        for f, _ in self.factor():
            out = out * f
        return out

    def dehomogenize(self):
        """Affine polynomial f(x, y) = F(x, y, 1) as a flint polynomial in x, y."""
        d = {}
        for (i, j, _), v in self.terms.items():
            d[(i, j)] = d.get((i, j), 0) + _to_fmpq(v)
        return AFF_CTX.from_dict(d)

    @classmethod
    def homogenize(cls, p, degree: int) -> "TernForm":
        terms = {}
        for (i, j), v in p.to_dict().items():
            if i + j > degree:
                raise ValueError("affine polynomial exceeds the requested degree")
            terms[(i, j, degree - i - j)] = rat(v)
        return cls(terms, degree)

    def to_wire(self) -> list:
        return [[k[0], k[1], k[2], rat_str(v)] for k, v in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_wire(cls, data, degree: int | None = None) -> "TernForm":
        if not isinstance(data, list):
            raise ParseError("form must be a list of [i1, i2, i3, coefficient]")
        terms = {}
        for item in data:
            if not isinstance(item, list) or len(item) != 4:
                raise ParseError(f"bad form term {item!r}")
            try:
                k = (int(item[0]), int(item[1]), int(item[2]))
            except (TypeError, ValueError):
                raise ParseError(f"bad exponent in {item!r}") from None
            terms[k] = terms.get(k, Fraction(0)) + rat(str(item[3]))
        try:
            return cls(terms, degree)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


AFF_CTX = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")


# ---------------------------------------------------------------------------
# elimination


def mpoly_ring(*names):
    """Generators of Q[names] (flint multivariate polynomials)."""
    return flint.fmpq_mpoly_ctx.get(tuple(names), "lex").gens()


def resultant_eliminate(p, q, var=None):
    """Res_var(p, q).

    ``p`` and ``q`` are either UniPoly (result is a Fraction) or flint
    multivariate polynomials over a common context, with ``var`` the name of
    the variable to eliminate.
    """
    if isinstance(p, UniPoly) or isinstance(q, UniPoly):
        p, q = UniPoly.coerce(p), UniPoly.coerce(q)
        if p.is_zero() or q.is_zero():
            raise ZeroInput("resultant with the zero polynomial")
        return subresultant_resultant(p, q)
    if p.is_zero() or q.is_zero():
        raise ZeroInput("resultant with the zero polynomial")
    return p.resultant(q, var)
