"""Rational plane curves, their branches and the singularity types built
from x^m + y^n = 0 and its decorations by one or two lines.

Two engines live here.  Parametrized curves get local expansions straight
from t (``branch_at``, ``flex_parameters``).  Singular points of any union of
components, parametrized or implicit, are found and classified by
``singularity_audit``, which works on implicit equations with an iterated
Newton polygon over the residue field of each point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import flint

from .errors import (DegenerateInput, GenusMismatch, InfiniteIntersection,
                     ParseError, UnsupportedGerm, ZeroInput)
from .exactalg import (QQ, ExtScalar, NumberField, TernForm, UniPoly,
                       _to_fmpq, factor_rational, is_zero, kp_divmod,
                       kp_gcd, kp_monic, kp_root_split, kp_strip, poly_gcd,
                       rat, root_multiplicity, scalar_wire)

INF = "inf"


# ---------------------------------------------------------------------------
# singularity types


class SingTypeTag:
    """T_{m,n}, optionally decorated by lines.

    ``deco`` is None, "m" (a line meeting the core germ with multiplicity m),
    "n" (the tangent line, multiplicity n) or "mn" (both lines).  Undecorated
    tags are stored with m <= n; T_{m,m} is the ordinary m-fold point.
    """

    __slots__ = ("m", "n", "deco")

    def __init__(self, m: int, n: int, deco: str | None = None):
        if deco is None:
            m, n = min(m, n), max(m, n)
            if m < 2:
                raise ValueError("undecorated type needs 2 <= m <= n")
        elif deco in ("m", "n", "mn"):
            if not 1 <= m < n:
                raise ValueError("decorated type needs 1 <= m < n")
        else:
            raise ValueError(f"unknown decoration {deco!r}")
        self.m, self.n, self.deco = m, n, deco

    @property
    def gcd(self) -> int:
        return math.gcd(self.m, self.n)

    @property
    def kind(self) -> str:
        if self.deco:
            return "DecoratedT"
        return "OrdinaryMultiple" if self.m == self.n else "Tmn"

    @property
    def is_simple(self) -> bool:
        return self.deco is None and self.m == self.n

    @property
    def branch_count(self) -> int:
        return self.gcd + {None: 0, "m": 1, "n": 1, "mn": 2}[self.deco]

    @property
    def multiplicity(self) -> int:
        return self.m + {None: 0, "m": 1, "n": 1, "mn": 2}[self.deco]

    @property
    def delta(self) -> int:
        return delta_of_type(self)

    def key(self):
        return (self.m, self.n, self.deco or "")

    def __eq__(self, other):
        return isinstance(other, SingTypeTag) and self.key() == other.key()

    def __lt__(self, other):
        return (self.delta, self.key()) < (other.delta, other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SingTypeTag({self})"

    def __str__(self):
        if self.deco is None:
            if self.m == 2:
                return f"A{self.n - 1}"
            return f"T({self.m},{self.n})"
        sup = {"m": str(self.m), "n": str(self.n), "mn": f"{{{self.m},{self.n}}}"}[self.deco]
        return f"T({self.m},{self.n})^{sup}"

    @classmethod
    def parse(cls, text: str) -> "SingTypeTag":
        s = text.strip().replace(" ", "")
        try:
            if s.startswith("A"):
                k = int(s[1:].lstrip("_"))
                return cls(2, k + 1)
            if not s.startswith("T("):
                raise ValueError
            inner, _, rest = s[2:].partition(")")
            m, n = (int(v) for v in inner.split(","))
            if not rest:
                return cls(m, n)
            sup = rest.lstrip("^").strip("{}")
            if "," in sup:
                return cls(m, n, "mn")
            v = int(sup)
            if v == m:
                return cls(m, n, "m")
            if v == n:
                return cls(m, n, "n")
        except ValueError:
            pass
        raise ParseError(f"not a singularity type: {text!r}")


def delta_of_type(tag: SingTypeTag) -> int:
    m, n = tag.m, tag.n
    core = (m * n - m - n + math.gcd(m, n)) // 2
    return core + {None: 0, "m": m, "n": n, "mn": m + n + 1}[tag.deco]


def canonical_germ(tag: SingTypeTag):
    """Branch types and intersection matrix of the normal form of ``tag``.

    A branch type is (e, q): multiplicity e and characteristic exponent q,
    with q None for smooth branches.
    """
    g = tag.gcd
    mp, np_ = tag.m // g, tag.n // g
    core = (mp, np_) if mp >= 2 else (1, None)
    types = [core] * g
    k = len(types)
    lines = {"m": [mp], "n": [np_], "mn": [mp, np_]}.get(tag.deco, [])
    types = types + [(1, None)] * len(lines)
    size = len(types)
    mat = [[0] * size for _ in range(size)]
    for i in range(k):
        for j in range(k):
            if i != j:
                mat[i][j] = mp * np_
    for a, contact in enumerate(lines):
        li = k + a
        for i in range(k):
            mat[i][li] = mat[li][i] = contact
    if len(lines) == 2:
        mat[k][k + 1] = mat[k + 1][k] = 1
    return types, mat


def germ_delta(types, mat) -> int:
    total = 0
    for e, q in types:
        if q is not None:
            total += (e - 1) * (q - 1) // 2
    for i, j in combinations(range(len(types)), 2):
        total += mat[i][j]
    return total


def _candidates(mult: int, nbranch: int, delta: int):
    out = []
    # undecorated, then T^m, T^n, T^{m,n}: the preference order for ambiguous germs
    m, g = mult, nbranch
    if m >= 2 and m % g == 0 and (2 * delta + m - g) % (m - 1) == 0:
        n = (2 * delta + m - g) // (m - 1)
        if n >= m and math.gcd(m, n) == g:
            out.append(SingTypeTag(m, n))
    for deco, extra_lines in (("m", 1), ("n", 1), ("mn", 2)):
        m, g = mult - extra_lines, nbranch - extra_lines
        if m < 1 or g < 1 or m % g:
            continue
        if m == 1:
            rest = {"m": None, "n": delta, "mn": delta - 2}[deco]
            if rest is not None and rest >= 2:
                out.append(SingTypeTag(1, rest, deco))
            continue
        for n in range(m + 1, 4 * (delta + 2) + 2):
            if math.gcd(m, n) != g:
                continue
            try:
                if delta_of_type(SingTypeTag(m, n, deco)) == delta:
                    out.append(SingTypeTag(m, n, deco))
            except ValueError:
                continue
    return out


def _match(types_a, mat_a, types_b, mat_b) -> bool:
    n = len(types_a)
    if n != len(types_b) or sorted(types_a, key=str) != sorted(types_b, key=str):
        return False
    used = [False] * n
    perm = [0] * n

    def go(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or types_b[j] != types_a[i]:
                continue
            if any(mat_a[i][k] != mat_b[j][perm[k]] for k in range(i)):
                continue
            used[j] = True
            perm[i] = j
            if go(i + 1):
                return True
            used[j] = False
        return False

    return go(0)


def _branch_type(b):
    if isinstance(b, tuple):
        e, q = b
    else:
        e, q = b.e, getattr(b, "char", None)
        if q is None and e >= 2:
            q = b.c
    return (1, None) if e == 1 else (e, q)


def classify_germ(branches, intersections) -> SingTypeTag:
    """Type of the germ with the given branches and pairwise intersections.

    ``branches`` holds (e, q) pairs or Branch objects; ``intersections`` is
    the symmetric matrix of pairwise intersection multiplicities (diagonal
    ignored).  Only the closed list of T-types and decorations is recognised.
    """
    types = [_branch_type(b) for b in branches]
    mat = [list(row) for row in intersections]
    data = {"branches": types, "intersections": mat}
    if not types:
        raise UnsupportedGerm("empty germ", data)
    for e, q in types:
        if q is not None and math.gcd(e, q) != 1:
            raise UnsupportedGerm(f"branch with several characteristic pairs (e={e}, q={q})", data)
    if len(types) == 1 and types[0] == (1, None):
        raise UnsupportedGerm("smooth point is not a singularity", data)
    mult = sum(e for e, _ in types)
    delta = germ_delta(types, mat)
    for tag in _candidates(mult, len(types), delta):
        ctypes, cmat = canonical_germ(tag)
        if _match(types, mat, ctypes, cmat):
            return tag
    raise UnsupportedGerm(f"germ of multiplicity {mult}, {len(types)} branches, delta {delta} "
                          "is not in the supported type list", data)


# ---------------------------------------------------------------------------
# truncated power series over a field (lists, lowest order first)


def _inv(x):
    return x.inverse() if isinstance(x, ExtScalar) else 1 / Fraction(x)


def _pad(a, n):
    a = list(a[:n])
    return a + [0] * (n - len(a))


def ser_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if is_zero(x):
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


def ser_inv(a, n):
    a = _pad(a, n)
    c0 = _inv(a[0])
    out = [c0] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for j in range(1, k + 1):
            if not is_zero(a[j]):
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * c0
    return out


def ser_pow(a, alpha: Fraction, n):
    """a^alpha for a series with constant term 1."""
    a = _pad(a, n)
    out = [Fraction(1)] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for j in range(1, k + 1):
            if not is_zero(a[j]):
                acc = acc + a[j] * out[k - j] * ((alpha + 1) * j - k)
        out[k] = acc / k
    return out


def ser_compose(a, b, n):
    """a(b(s)) with b(0) = 0."""
    out = [0] * n
    for c in reversed(_pad(a, n)):
        out = ser_mul(out, b, n)
        out[0] = out[0] + c
    return out


def ser_reversion(a, n):
    """Compositional inverse of a = s + O(s^2)."""
    # fixed-point iteration r <- s - (a(r) - r), one correct order per pass
    r = [0, 1] + [0] * (n - 2)
    for _ in range(n):
        ar = ser_compose(a, r, n)
        r = [r[k] - ar[k] + (1 if k == 1 else 0) for k in range(n)]
    return r


def _order(a):
    for k, c in enumerate(a):
        if not is_zero(c):
            return k
    return None


# ---------------------------------------------------------------------------
# parametrized curves


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def normalize_point(p):
    """Scale a projective point so its last nonzero coordinate is 1."""
    for c in reversed(p):
        if not is_zero(c):
            inv = _inv(c)
            return tuple(x * inv for x in p)
    raise DegenerateInput("the zero vector is not a projective point")


def point_wire(p):
    return [scalar_wire(x) for x in normalize_point(p)]


class ParamCurve:
    """Rational curve t -> (z1(t) : z2(t) : z3(t)); common factors are removed."""

    def __init__(self, z1, z2, z3, label: str | None = None):
        cs = [UniPoly.coerce(z) for z in (z1, z2, z3)]
        if all(c.is_zero() for c in cs):
            raise DegenerateInput("all coordinates vanish")
        g = poly_gcd(poly_gcd(cs[0], cs[1]), cs[2])
        if g.degree > 0:
            cs = [c.exact_div(g) for c in cs]
        if all(m.is_zero() for m in cross(cs, [c.derivative() for c in cs])):
            raise DegenerateInput("parametrization is constant")
        self.coords = tuple(cs)
        self.degree = max(c.degree for c in cs)
        self.label = label
        self._implicit = None

    def __repr__(self):
        body = ", ".join(c.pretty() for c in self.coords)
        return f"ParamCurve(({body}){', ' + self.label if self.label else ''})"

    def __eq__(self, other):
        return isinstance(other, ParamCurve) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def at_infinity(self):
        """Chart at t = infinity: s^d f(1/s)."""
        return tuple(c.reversed(self.degree) for c in self.coords)

    def point(self, t0):
        if t0 == INF:
            return tuple(c.coeff(self.degree) for c in self.coords)
        return tuple(c(t0) for c in self.coords)

    def local_coords(self, t0):
        """Coefficient lists of f(t0 + s), or of the chart at infinity."""
        if t0 == INF:
            return [list(c.coeffs) for c in self.at_infinity()]
        if isinstance(t0, ExtScalar):
            return [_taylor_shift(list(c.coeffs), t0) for c in self.coords]
        return [list(c.shift(rat(t0)).coeffs) for c in self.coords]

    def derivative_cross(self):
        """f x f' (2x2 minors of [f; f']); its zeros are the singular parameters."""
        f = self.coords
        return cross(f, [c.derivative() for c in f])

    def implicit_form(self) -> TernForm:
        if self._implicit is None:
            self._implicit = implicit_form(self)
        return self._implicit

    def to_wire(self) -> dict:
        out = {"param": [c.to_wire() for c in self.coords]}
        if self.label:
            out["label"] = self.label
        return out


def _taylor_shift(cs, t0):
    cs = list(cs)
    n = len(cs)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + t0 * cs[j + 1]
    return cs


def implicit_form(curve: ParamCurve) -> TernForm:
    """Normalized degree-d form vanishing on the image, by a resultant in t."""
    ctx = flint.fmpq_mpoly_ctx.get(("t", "z1", "z2", "z3"), "lex")
    t, *z = ctx.gens()

    def lift(p):
        out = ctx.from_dict({})
        for k, c in enumerate(p.coeffs):
            if c:
                out += _to_fmpq(c) * t ** k
        return out

    f = [lift(c) for c in curve.coords]
    d = curve.degree
    a = max(range(3), key=lambda i: (curve.coords[i].degree, -i))
    b, c = [i for i in range(3) if i != a]
    r = (z[a] * f[b] - z[b] * f[a]).resultant(z[a] * f[c] - z[c] * f[a], "t")
    form = TernForm({k[1:]: rat(v) for k, v in r.to_dict().items()})
    za = TernForm.var(a)
    while not form.is_zero() and za.divides(form):
        form = form.exact_div(za)
    if form.degree != d:
        # the map is not birational, or degrees dropped; keep the factors through the image
        keep = TernForm.const(1)
        for fac, _ in form.factor():
            if fac.degree and fac.pullback(*curve.coords).is_zero():
                keep = keep * fac
        form = keep
        if form.degree != d:
            raise DegenerateInput(f"image has degree {form.degree}, parametrization degree {d}: "
                                  "the map is not birational")
    form = form.normalize()
    if not form.pullback(*curve.coords).is_zero():
        raise DegenerateInput("implicitization failed verification")
    return form


class Branch:
    """Local branch of a parametrized curve at a parameter value."""

    def __init__(self, curve, param_root, center, e, c, tangent, char=None):
        self.curve = curve
        self.param_root = param_root
        self.center = center
        self.e = e
        self.c = c
        self.tangent = tangent
        self.char = char

    @property
    def valuations(self):
        return (self.e, self.c)

    @property
    def is_smooth(self) -> bool:
        return self.e == 1

    def __repr__(self):
        return (f"Branch(t={self.param_root}, center={point_wire(self.center)}, e={self.e}, "
                f"c={self.c}, char={self.char})")


def branch_at(curve: ParamCurve, t0) -> Branch:
    """Multiplicity, tangent line, tangent contact and characteristic exponent
    of the branch of ``curve`` at parameter ``t0`` (a rational, a number-field
    element or INF)."""
    g = curve.local_coords(t0)
    center = tuple(gi[0] if gi else 0 for gi in g)
    if all(is_zero(x) for x in center):
        raise DegenerateInput(f"all coordinates vanish at t = {t0}")
    d = curve.degree
    e = None
    for k in range(1, d + 1):
        gk = tuple(gi[k] if k < len(gi) else 0 for gi in g)
        if not all(is_zero(x) for x in cross(center, gk)):
            e = k
            break
    if e is None:
        raise DegenerateInput("no tangent direction: parametrization is not a curve")
    ge = tuple(gi[e] if e < len(gi) else 0 for gi in g)
    tangent = cross(center, ge)
    lg = _lin_series(tangent, g, d + 1)
    c = _order(lg)
    char = None
    if e >= 2:
        char = _char_exponent(g, center, tangent, e, c, d)
    return Branch(curve, t0, center, e, c, tangent, char)


def _lin_series(line, g, n):
    out = [0] * n
    for li, gi in zip(line, g):
        if is_zero(li):
            continue
        for k, x in enumerate(gi[:n]):
            out[k] = out[k] + li * x
    return out


def _char_exponent(g, center, tangent, e, c, d):
    k = next(i for i in range(3) if not is_zero(center[i]))
    unit = [0, 0, 0]
    unit[k] = 1
    w = next(wv for wv in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
             if not is_zero(sum(tangent[i] * wv[i] for i in range(3))))
    m1 = cross(center, w)
    bound = (d - 1) * (d - 2) // (e - 1) + 2
    n = max(c or 0, e) + e + 2
    while True:
        den = ser_inv(_lin_series(unit, g, n), n)
        u = ser_mul(_lin_series(m1, g, n), den, n)
        v = ser_mul(_lin_series(tangent, g, n), den, n)
        ue = u[e]
        h = [x * _inv(ue) for x in u[e:]] + [0] * e
        # u = ue * sigma^e with sigma = s * h^(1/e)
        sig = [0] + ser_pow(h, Fraction(1, e), n - 1)
        s_of_sig = ser_reversion(sig, n)
        vs = ser_compose(v, s_of_sig, n)
        for j, x in enumerate(vs):
            if j % e and not is_zero(x):
                return j
        if n > bound + e + 2:
            return None
        n *= 2


def _as_form(b) -> TernForm:
    if isinstance(b, TernForm):
        return b
    if isinstance(b, ParamCurve):
        return b.implicit_form()
    if hasattr(b, "form"):
        return b.form
    if isinstance(b, (tuple, list)) and len(b) == 3:
        return TernForm.linear(*b)
    raise TypeError(f"cannot use {type(b).__name__} as a curve equation")


def _order_at(phi: UniPoly, t0, formal_degree: int) -> int:
    if t0 == INF:
        return formal_degree - phi.degree
    if isinstance(t0, ExtScalar):
        m = _min_poly_of(t0)
        k = 0
        while m.divides(phi):
            phi = phi.exact_div(m)
            k += 1
        return k
    return root_multiplicity(phi, rat(t0))


def _min_poly_of(x) -> UniPoly:
    from .exactalg import minimal_polynomial
    return minimal_polynomial(x)


def parameters_over(curve: ParamCurve, p):
    """Parameters mapping to the projective point ``p``: (irreducible factors of
    the fibre polynomial, whether t = infinity maps to p)."""
    p = tuple(rat(x) for x in p)
    comps = cross(p, curve.coords)
    g = UniPoly()
    for c in comps:
        g = poly_gcd(g, UniPoly.coerce(c))
    factors = factor_rational(g)[1] if g.degree > 0 else []
    at_inf = all(is_zero(x) for x in cross(p, curve.point(INF)))
    return [f for f, _ in factors], at_inf


def pair_intersection_multiplicity(a, b, at=None) -> int:
    """Local intersection multiplicity of a branch (or a parametrized curve at a
    parameter value or point) with the curve or line ``b``.

    ``at`` is a parameter value (rational, ExtScalar or INF) or a projective
    point given as a 3-tuple; with a Branch it is ignored.
    """
    if isinstance(a, Branch):
        curve, at = a.curve, a.param_root
    else:
        curve = a
    form = _as_form(b)
    phi = form.pullback(*curve.coords)
    if phi.is_zero():
        raise InfiniteIntersection("the curves share a component")
    formal = curve.degree * form.degree
    if at is None:
        raise ValueError("a parameter value or point is required")
    if isinstance(at, (tuple, list)) and len(at) == 3:
        factors, at_inf = parameters_over(curve, at)
        total = 0
        for h in factors:
            k = 0
            rest = phi
            while h.divides(rest):
                rest = rest.exact_div(h)
                k += 1
            total += k * h.degree
        if at_inf:
            total += _order_at(phi, INF, formal)
        return total
    return _order_at(phi, at, formal)


def singular_parameter_poly(curve: ParamCurve):
    """(D, order at infinity): D = gcd of the minors of [f; f'].  The branch at a
    root t0 has multiplicity ord_{t0} D + 1."""
    d = UniPoly()
    for m in curve.derivative_cross():
        d = poly_gcd(d, m)
    if d.is_zero():
        raise DegenerateInput("parametrization is constant")
    ginf = [UniPoly(c) for c in curve.local_coords(INF)]
    dinf = UniPoly()
    for m in cross(ginf, [c.derivative() for c in ginf]):
        dinf = poly_gcd(dinf, m)
    return d, dinf.order_at_zero()


def wronskian(coords) -> UniPoly:
    f = list(coords)
    f1 = [c.derivative() for c in f]
    f2 = [c.derivative() for c in f1]
    m = cross(f1, f2)
    return f[0] * m[0] + f[1] * m[1] + f[2] * m[2]


def _strip_common(w: UniPoly, d: UniPoly) -> UniPoly:
    g = poly_gcd(w, d)
    while g.degree > 0:
        w = w.exact_div(g)
        g = poly_gcd(w, g)
    return w


def flex_parameters(curve: ParamCurve):
    """Flexes as (t, contact order) with t rational, INF, or an irreducible
    UniPoly whose roots are the flex parameters.

    A root of multiplicity k of the Wronskian det[f, f', f''] at a smooth
    branch is a point where the tangent meets the curve with multiplicity
    k + 2; singular branch parameters are excluded.
    """
    w = wronskian(curve.coords)
    if w.is_zero():
        return []
    dpoly, _ = singular_parameter_poly(curve)
    w = _strip_common(w, dpoly)
    out = []
    _, facs = factor_rational(w)
    for h, mult in facs:
        if h.degree == 1:
            out.append((-h.coeff(0), mult + 2))
        else:
            out.append((h, mult + 2))
    ginf = [UniPoly(c) for c in curve.local_coords(INF)]
    if branch_at(curve, INF).e == 1:
        winf = wronskian(ginf)
        k = winf.order_at_zero()
        if k:
            out.append((INF, k + 2))
    return out


# ---------------------------------------------------------------------------
# local analysis at a point over a residue field


class _NeedPrecision(Exception):
    pass


_binom_cache = {}


def _binom(n, k):
    key = (n, k)
    v = _binom_cache.get(key)
    if v is None:
        v = _binom_cache[key] = math.comb(n, k)
    return v


def _powers(x, n):
    out = [1]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _substitute_shift(poly: dict, c, r: int, nmax: int) -> dict:
    """P(X, Y + c X^r) truncated at total degree nmax."""
    out = {}
    cp = _powers(c, max((j for _, j in poly), default=0))
    for (i, j), a in poly.items():
        for k in range(j + 1):
            ni, nj = i + r * k, j - k
            if ni + nj > nmax:
                break
            v = a * cp[k] * _binom(j, k)
            key = (ni, nj)
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if not is_zero(v)}


def _substitute_rotate(poly: dict, lam) -> dict:
    """P(X + lam Y, Y)."""
    out = {}
    lp = _powers(lam, max((i for i, _ in poly), default=0))
    for (i, j), a in poly.items():
        for k in range(i + 1):
            v = a * lp[k] * _binom(i, k)
            key = (i - k, j + k)
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if not is_zero(v)}


def _lower_hull(poly: dict, top: int, nmax: int):
    """Edges (slope, j_low, j_high, value) of the Newton polygon below height
    ``top``, plus the lowest height reached by a visible point."""
    lowest = {}
    for (i, j), _ in poly.items():
        if j <= top and (j not in lowest or i < lowest[j]):
            lowest[j] = i
    if top not in lowest:
        raise _NeedPrecision()
    jmin = min(lowest)
    edges = []
    i0, j0 = lowest[top], top
    while j0 > jmin:
        best = None
        for j, i in lowest.items():
            if j >= j0:
                continue
            s = Fraction(i - i0, j0 - j)
            if best is None or s < best[0] or (s == best[0] and j < best[1]):
                best = (s, j)
        s, j1 = best
        edges.append((s, j1, j0, i0 + s * j0))
        i0, j0 = lowest[j1], j1
    return edges, jmin


def _edge_poly(poly: dict, slope: Fraction, jlo: int, jhi: int, value: Fraction, field):
    p = slope.denominator
    out = []
    for j in range(jlo, jhi + 1, p):
        i = value - slope * j
        out.append(poly.get((int(i), j), field.zero) if i.denominator == 1 else field.zero)
    return kp_strip(out)


def _linear_roots(rep: list, field):
    """Roots in ``field`` of a monic squarefree polynomial, if it splits."""
    if len(rep) == 2:
        return [-rep[0]]
    if field is QQ:
        _, facs = factor_rational(UniPoly(rep))
        if all(f.degree == 1 for f, _ in facs):
            return [-f.coeff(0) for f, _ in facs]
    return None


class GermBranch:
    """Branch of an audited germ: owning component, multiplicity e,
    characteristic exponent (None when smooth) and its Newton path."""

    __slots__ = ("component", "e", "char", "path")

    def __init__(self, component, e, char, path):
        self.component = component
        self.e = e
        self.char = char
        self.path = path

    @property
    def c(self):
        return self.char

    def to_wire(self):
        return {"component": self.component, "e": self.e, "char": self.char}

    def __repr__(self):
        return f"GermBranch(comp={self.component}, e={self.e}, char={self.char})"


def _contact(pa, pb) -> Fraction:
    for (ra, ida), (rb, idb) in zip(pa, pb):
        if ra == rb and ida == idb:
            continue
        if ra == INF:
            return rb
        if rb == INF:
            return ra
        return min(ra, rb)
    raise UnsupportedGerm("two branches with identical expansions")


def _analyse(polys: dict, heights: dict, r0, prefix, nmax, field, counter):
    """Branches of the cluster whose Newton polygons lie below ``heights``."""
    per_comp = {}
    residual = 0
    for comp, poly in polys.items():
        h = heights.get(comp, 0)
        if h == 0:
            continue
        edges, jmin = _lower_hull(poly, h, nmax)
        for s, jlo, jhi, val in edges:
            if s <= r0:
                raise UnsupportedGerm("Newton polygon edge below the cluster threshold")
            if val > nmax:
                raise _NeedPrecision()
        per_comp[comp] = (edges, jmin)
        residual += jmin
    if residual > 1:
        raise _NeedPrecision()
    out = []
    slopes = sorted({s for edges, _ in per_comp.values() for s, *_ in edges})
    for s in slopes:
        epolys = {}
        for comp, (edges, _) in per_comp.items():
            for es, jlo, jhi, val in edges:
                if es == s:
                    epolys[comp] = _edge_poly(polys[comp], s, jlo, jhi, val, field)
        combined = [field.one]
        for ep in epolys.values():
            from .exactalg import kp_mul
            combined = kp_mul(combined, ep)
        simple, rep = kp_root_split(combined)
        p, q = s.denominator, s.numerator
        for comp, ep in epolys.items():
            g = kp_gcd(ep, simple) if len(simple) > 1 else [field.one]
            for _ in range(len(g) - 1):
                counter[0] += 1
                out.append(GermBranch(comp, p, q if p >= 2 else None, prefix + [(s, counter[0])]))
        if len(rep) <= 1:
            continue
        if p != 1:
            raise UnsupportedGerm(f"repeated Newton edge root at fractional slope {s}")
        roots = _linear_roots(kp_monic(rep), field)
        if roots is None:
            raise UnsupportedGerm("repeated tangent data not defined over the residue field")
        for c0 in roots:
            sub_h = {}
            sub_p = {}
            for comp, ep in epolys.items():
                mult = 0
                rest = ep
                while len(rest) > 1:
                    qq, rr = kp_divmod(rest, [-c0, field.one])
                    if kp_strip(rr):
                        break
                    rest, mult = qq, mult + 1
                if mult:
                    sub_h[comp] = mult
                    sub_p[comp] = _substitute_shift(polys[comp], c0, int(s), nmax)
            out.extend(_analyse(sub_p, sub_h, s, prefix + [(s, ("shear", repr(c0)))],
                                nmax, field, counter))
    for comp, (_, jmin) in per_comp.items():
        if jmin == 1:
            out.append(GermBranch(comp, 1, None, prefix + [(INF, "open")]))
    return out


def local_germ(taylor, field, nmax):
    """Branches and intersection matrix from truncated local equations.

    ``taylor`` maps component index to {(i, j): coefficient} in local
    coordinates centred at the point, exact up to total degree ``nmax``.
    """
    polys = dict(taylor)
    mults = {c: min(i + j for i, j in p) for c, p in polys.items()}
    lam = 0
    while any(p.get((0, mults[c])) is None or is_zero(p.get((0, mults[c]))) for c, p in polys.items()):
        lam += 1
        polys = {c: _substitute_rotate(p, field(lam) if field is not QQ else Fraction(lam))
                 for c, p in taylor.items()}
    if max(mults.values()) * 2 > nmax:
        raise _NeedPrecision()
    branches = _analyse(polys, mults, Fraction(0), [], nmax, field, [0])
    n = len(branches)
    mat = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            v = branches[a].e * branches[b].e * _contact(branches[a].path, branches[b].path)
            if v.denominator != 1:
                raise UnsupportedGerm("non-integral intersection multiplicity")
            mat[a][b] = mat[b][a] = int(v)
    for c, mu in mults.items():
        if sum(b.e for b in branches if b.component == c) != mu:
            raise _NeedPrecision()
    return branches, mat


def _taylor(fdict: dict, theta, eta, field, nmax: int) -> dict:
    """Coefficients of f(theta + X, eta + Y) up to total degree nmax."""
    da = max(a for a, _ in fdict)
    db = max(b for _, b in fdict)
    if field is QQ:
        tp, ep = _powers(theta, da), _powers(eta, db)
        cache = {}

        def pw(a, b):
            v = cache.get((a, b))
            if v is None:
                v = cache[(a, b)] = tp[a] * ep[b]
            return v

        out = {}
        for (a, b), q in fdict.items():
            for k in range(min(a, nmax) + 1):
                ca = q * _binom(a, k)
                for l in range(min(b, nmax - k) + 1):
                    v = ca * _binom(b, l) * pw(a - k, b - l)
                    out[(k, l)] = out.get((k, l), 0) + v
        return {k: Fraction(v) for k, v in out.items() if v}
    m = field._m
    tp, ep = _powers(theta.rep, da), _powers(eta.rep, db)
    tp = [x % m for x in tp]
    ep = [x % m for x in ep]
    cache = {}

    def pwk(a, b):
        v = cache.get((a, b))
        if v is None:
            v = cache[(a, b)] = (tp[a] * ep[b]) % m
        return v

    out = {}
    for (a, b), q in fdict.items():
        fq = _to_fmpq(q)
        for k in range(min(a, nmax) + 1):
            ca = fq * _binom(a, k)
            for l in range(min(b, nmax - k) + 1):
                v = pwk(a - k, b - l) * (ca * _binom(b, l))
                key = (k, l)
                out[key] = out[key] + v if key in out else v
    return {k: ExtScalar(field, v) for k, v in out.items() if not v.is_zero()}


class SingRecord:
    """A singular point (or a Galois orbit of ``orbit_size`` conjugate points
    sharing the same data) of a union of components."""

    def __init__(self, center, field, orbit_size, tag, branches, intersections, component_set):
        self.center = center
        self.field = field
        self.orbit_size = orbit_size
        self.tag = tag
        self.branches = branches
        self.intersections = intersections
        self.component_set = component_set

    @property
    def delta(self) -> int:
        return delta_of_type(self.tag)

    def delta_on(self, comp: int) -> int:
        idx = [k for k, b in enumerate(self.branches) if b.component == comp]
        total = sum((b.e - 1) * (b.char - 1) // 2 for b in (self.branches[k] for k in idx)
                    if b.char is not None)
        for a, b in combinations(idx, 2):
            total += self.intersections[a][b]
        return total

    def branch_count(self, comp: int) -> int:
        return sum(1 for b in self.branches if b.component == comp)

    def to_wire(self) -> dict:
        return {
            "center": [scalar_wire(x) for x in self.center],
            "field": self.field.to_wire(),
            "orbit_size": self.orbit_size,
            "type": str(self.tag),
            "delta": self.delta,
            "components": list(self.component_set),
            "branches": [b.to_wire() for b in self.branches],
            "intersections": self.intersections,
        }

    def __repr__(self):
        n = f"{self.orbit_size} x " if self.orbit_size > 1 else ""
        return f"SingRecord({n}{self.tag} on {list(self.component_set)})"


class Audit:
    """Result of singularity_audit; unpacks as (records, genera, descriptor)."""

    def __init__(self, records, genera, degrees, labels):
        self.records = records
        self.genera = genera
        self.degrees = degrees
        self.labels = labels
        desc = {}
        for r in records:
            key = (str(r.tag), r.component_set)
            desc[key] = desc.get(key, 0) + r.orbit_size
        self.descriptor = desc

    def __iter__(self):
        return iter((self.records, self.genera, self.descriptor))

    def type_counts(self) -> dict:
        out = {}
        for r in self.records:
            out[r.tag] = out.get(r.tag, 0) + r.orbit_size
        return out

    def count(self, tag, components=None) -> int:
        if isinstance(tag, str):
            tag = SingTypeTag.parse(tag)
        return sum(r.orbit_size for r in self.records
                   if r.tag == tag and (components is None or r.component_set == tuple(components)))

    def descriptor_string(self) -> str:
        return format_type_counts(self.type_counts())

    def to_wire(self) -> dict:
        return {
            "degrees": self.degrees,
            "genera": self.genera,
            "labels": self.labels,
            "descriptor": self.descriptor_string(),
            "entries": [{"type": t, "components": list(j), "count": c}
                        for (t, j), c in sorted(self.descriptor.items())],
            "total_delta": sum(r.delta * r.orbit_size for r in self.records),
            "points": [r.to_wire() for r in self.records],
        }


def format_type_counts(counts: dict) -> str:
    if not counts:
        return "smooth"
    parts = []
    for tag in sorted(counts, key=lambda t: t.key()):
        c = counts[tag]
        parts.append(f"{c} {tag}" if c > 1 else str(tag))
    return " + ".join(parts)


def parse_type_counts(text: str) -> dict:
    out = {}
    if text.strip() in ("", "smooth"):
        return out
    for part in text.split("+"):
        part = part.strip()
        head, _, tail = part.partition(" ")
        if tail and head.isdigit():
            tag, k = SingTypeTag.parse(tail), int(head)
        else:
            tag, k = SingTypeTag.parse(part), 1
        out[tag] = out.get(tag, 0) + k
    return out


# ---------------------------------------------------------------------------
# global audit

_AFF = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")
MAX_PRECISION = 400
MAX_ATTEMPTS = 40


def component_form(comp) -> TernForm:
    if isinstance(comp, TernForm):
        return comp
    if isinstance(comp, ParamCurve):
        return comp.implicit_form()
    if hasattr(comp, "form"):
        return comp.form
    raise TypeError(f"not a curve component: {type(comp).__name__}")


def _change_matrices():
    import random
    yield ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for k in range(MAX_ATTEMPTS):
        rng = random.Random(7919 * (k + 1))
        span = 2 + k // 8
        while True:
            m = tuple(tuple(rng.randint(-span, span) for _ in range(3)) for _ in range(3))
            det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                   - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                   + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
            if det:
                break
        yield m


def _x_univariate(p) -> UniPoly:
    cs = {}
    for (i, j), v in p.to_dict().items():
        cs[int(i)] = rat(v)
    if not cs:
        return UniPoly()
    return UniPoly([cs.get(k, 0) for k in range(max(cs) + 1)])


def _y_coeffs(fdict: dict, theta, field):
    """f(theta, y) as a coefficient list in y over the field."""
    db = max(b for _, b in fdict)
    da = max(a for a, _ in fdict)
    tp = _powers(theta, da)
    out = [field.zero] * (db + 1)
    for (a, b), q in fdict.items():
        out[b] = out[b] + tp[a] * q
    return kp_strip(out)


class _Retry(Exception):
    pass


def _check_chart(gs):
    for g in gs:
        d = g.degree
        if is_zero(g.coeff((0, d, 0))) or is_zero(g.coeff((d, 0, 0))):
            return False
    h = UniPoly([1])
    for g in gs:
        h = h * UniPoly([g.coeff((i, g.degree - i, 0)) for i in range(g.degree + 1)])
    return poly_gcd(h, h.derivative()).degree == 0


def singularity_audit(components, labels=None) -> Audit:
    """Singular points of the union of ``components`` with their types, the
    geometric genus of each component and the singularity descriptor.

    Components are ParamCurve, TernForm or objects with a ``form``.  Every
    parametrized component must come out with genus 0.
    """
    comps = list(components)
    if not comps:
        raise ZeroInput("no components")
    forms = [component_form(c) for c in comps]
    for k, f in enumerate(forms):
        if f.degree < 1:
            raise DegenerateInput(f"component {k} is not a curve")
        if not isinstance(comps[k], ParamCurve) and not f.is_squarefree():
            raise InfiniteIntersection(f"component {k} is not reduced")
    for a, b in combinations(range(len(forms)), 2):
        if forms[a].flint.gcd(forms[b].flint).total_degree() > 0:
            raise InfiniteIntersection(f"components {a} and {b} share a component")
    if labels is None:
        labels = [getattr(c, "label", None) or f"C{k + 1}" for k, c in enumerate(comps)]
    for mat in _change_matrices():
        gs = [f.substitute(mat) for f in forms]
        if not _check_chart(gs):
            continue
        try:
            records = _audit_chart(gs, mat)
        except _Retry:
            continue
        break
    else:
        raise UnsupportedGerm("no admissible coordinate chart found")
    degrees = [f.degree for f in forms]
    genera = []
    for k, d in enumerate(degrees):
        g = (d - 1) * (d - 2) // 2 - sum(r.delta_on(k) * r.orbit_size for r in records)
        if isinstance(comps[k], ParamCurve) and g != 0:
            raise GenusMismatch(f"component {labels[k]}: delta total gives genus {g}, expected 0")
        if g < 0:
            raise GenusMismatch(f"component {labels[k]}: negative genus {g}")
        genera.append(g)
    records.sort(key=lambda r: (r.component_set, r.tag.key(), str([scalar_wire(x) for x in r.center])))
    return Audit(records, genera, degrees, labels)


def _audit_chart(gs, mat):
    fl = [g.dehomogenize() for g in gs]
    fd = [{(int(k[0]), int(k[1])): rat(v) for k, v in f.to_dict().items()} for f in fl]
    sources = {}

    def add(poly, src):
        if poly.degree <= 0:
            return
        for h, _ in factor_rational(poly)[1]:
            sources.setdefault(h, []).append(src)

    for i, f in enumerate(fl):
        if gs[i].degree < 2:
            continue
        fx, fy = f.derivative("x"), f.derivative("y")
        r1 = _x_univariate(f.resultant(fy, "y"))
        r2 = _x_univariate(fx.resultant(fy, "y"))
        add(poly_gcd(r1, r2) if not r2.is_zero() else r1, ("sing", i))
    for i, j in combinations(range(len(fl)), 2):
        add(_x_univariate(fl[i].resultant(fl[j], "y")), ("int", i, j))
    records = []
    for m, srcs in sources.items():
        rec = _point_record(m, srcs, fl, fd, gs, mat)
        if rec is not None:
            records.append(rec)
    return records


def _point_record(m, srcs, fl, fd, gs, mat):
    if m.degree == 1:
        field, theta = QQ, -m.coeff(0)
    else:
        field = NumberField(m, check=False)
        theta = field.gen()
    py = [_y_coeffs(d, theta, field) for d in fd]
    etas = set()
    for src in srcs:
        if src[0] == "sing":
            i = src[1]
            fx = {(a - 1, b): q * a for (a, b), q in fd[i].items() if a}
            g = kp_gcd(py[i], [k * c for k, c in enumerate(py[i])][1:])
            if len(g) > 1:
                g = kp_gcd(g, _y_coeffs(fx, theta, field) if fx else [])
        else:
            g = kp_gcd(py[src[1]], py[src[2]])
        g = _radical(g)
        if len(g) > 2:
            raise _Retry()
        if len(g) == 2:
            etas.add(-g[0])
    if not etas:
        return None
    if len(etas) > 1:
        raise _Retry()
    eta = etas.pop()
    through = [i for i in range(len(fd)) if is_zero(_eval_list(py[i], eta))]
    nmax = 12
    while True:
        taylor = {i: _taylor(fd[i], theta, eta, field, nmax) for i in through}
        try:
            branches, inter = local_germ(taylor, field, nmax)
            break
        except _NeedPrecision:
            nmax *= 2
            if nmax > MAX_PRECISION:
                raise UnsupportedGerm("local expansion needs more precision than allowed",
                                      {"x_minimal_polynomial": m.to_wire()})
    if len(branches) == 1 and branches[0].e == 1:
        return None
    tag = classify_germ([(b.e, b.char) for b in branches], inter)
    local = (theta, eta, field.one)
    center = normalize_point(tuple(sum((mat[r][c] * local[c] for c in range(3)), field.zero)
                                   for r in range(3)))
    center = tuple(x.to_rational() if isinstance(x, ExtScalar) and x.is_rational() else x
                   for x in center)
    return SingRecord(center, field, m.degree, tag, branches, inter, tuple(through))


def _radical(g):
    if len(g) <= 2:
        return g
    q, _ = kp_divmod(g, kp_gcd(g, [k * c for k, c in enumerate(g)][1:]))
    return kp_monic(q)


def _eval_list(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc
