"""Projective transformations, implicitization, dual curves, the quadratic
Cremona map of a triangle, pencils of conics and the class of a curve."""

from __future__ import annotations

import os
from fractions import Fraction

import flint

from .curvelocal import (INF, ParamCurve, cross, implicit_form,
                         singular_parameter_poly)
from .errors import (CurveContainsTriangleLine, DegenerateInput,
                     EliminationOverflow, IdenticallyDegenerate, ParseError,
                     SingularMatrix)
from .exactalg import (ExtScalar, TernForm, UniPoly, _to_fmpq, factor_rational,
                       is_zero, rat, scalar_wire)

DEFAULT_BUDGET = 40


def elimination_budget() -> int:
    """Largest curve degree the elimination kernels accept (RIGIDCURVE_BUDGET)."""
    raw = os.environ.get("RIGIDCURVE_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"RIGIDCURVE_BUDGET must be an integer, got {raw!r}") from None


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _scalar(x):
    return x if isinstance(x, ExtScalar) else rat(x)


class ProjMap:
    """Invertible 3x3 matrix acting on column vectors: z -> M z."""

    def __init__(self, matrix):
        rows = tuple(tuple(_scalar(x) for x in row) for row in matrix)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("projective map needs a 3x3 matrix")
        if is_zero(_det3(rows)):
            raise SingularMatrix("matrix is not invertible")
        self.matrix = rows

    @classmethod
    def identity(cls) -> "ProjMap":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def diagonal(cls, a, b, c) -> "ProjMap":
        return cls(((a, 0, 0), (0, b, 0), (0, 0, c)))

    @property
    def is_rational(self) -> bool:
        return not any(isinstance(x, ExtScalar) for row in self.matrix for x in row)

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        a, b = self.matrix, other.matrix
        return ProjMap([[sum((a[i][k] * b[k][j] for k in range(3)), 0) for j in range(3)]
                        for i in range(3)])

    def inverse(self) -> "ProjMap":
        m = self.matrix
        det = _det3(m)
        adj = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [x for x in range(3) if x != j]
                c = [y for y in range(3) if y != i]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                adj[i][j] = minor if (i + j) % 2 == 0 else -minor
        return ProjMap([[x / det for x in row] for row in adj])

    def __call__(self, p):
        return tuple(sum((self.matrix[i][k] * p[k] for k in range(3)), 0) for i in range(3))

    def __eq__(self, other):
        """Equality as projective maps (matrices up to a scalar)."""
        if not isinstance(other, ProjMap):
            return NotImplemented
        a = [x for row in self.matrix for x in row]
        b = [x for row in other.matrix for x in row]
        k = next(i for i, x in enumerate(a) if not is_zero(x))
        if is_zero(b[k]):
            return False
        s = b[k] / a[k]
        return all(is_zero(y - s * x) for x, y in zip(a, b))

    def __hash__(self):
        return hash(tuple(str(x) for row in self.matrix for x in row))

    def __repr__(self):
        return f"ProjMap({[[scalar_wire(x) for x in row] for row in self.matrix]})"

    def to_wire(self):
        return [[scalar_wire(x) for x in row] for row in self.matrix]

    @classmethod
    def from_wire(cls, data) -> "ProjMap":
        try:
            return cls([[rat(str(x)) for x in row] for row in data])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix: {exc}") from None


class ImplicitCurve:
    """Reduced plane curve given by a form; ``singularities`` caches an audit."""

    def __init__(self, form: TernForm, label: str | None = None, check: bool = False):
        if form.degree < 1 or form.is_zero():
            raise DegenerateInput("implicit curve needs a nonzero form of positive degree")
        if check and not form.is_squarefree():
            raise DegenerateInput("form has repeated factors")
        self.form = form.normalize()
        self.label = label
        self.singularities = None

    @property
    def degree(self) -> int:
        return self.form.degree

    def __eq__(self, other):
        return isinstance(other, ImplicitCurve) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return f"ImplicitCurve({self.form.pretty()}{', ' + self.label if self.label else ''})"

    def implicit_form(self) -> TernForm:
        return self.form

    def to_wire(self) -> dict:
        out = {"implicit": self.form.to_wire()}
        if self.label:
            out["label"] = self.label
        return out


def curve_form(curve) -> TernForm:
    if isinstance(curve, TernForm):
        return curve.normalize()
    return curve.implicit_form()


class Pencil:
    """The conics base + lam * direction."""

    def __init__(self, base: TernForm, direction: TernForm, name: str = "lambda"):
        if base.degree != 2 or direction.degree != 2:
            raise ValueError("a pencil of conics needs two quadratic forms")
        if base.normalize() == direction.normalize():
            raise DegenerateInput("pencil generators are proportional")
        self.base = base
        self.direction = direction
        self.name = name

    def member(self, lam) -> TernForm:
        if lam == INF:
            return self.direction
        return self.base + self.direction * rat(lam)

    def to_wire(self) -> dict:
        return {"base": self.base.to_wire(), "direction": self.direction.to_wire(),
                "parameter": self.name}


# ---------------------------------------------------------------------------
# maps


def apply_map(h: ProjMap, curve):
    """Image of a curve (or a list of components) under h."""
    if isinstance(curve, (list, tuple)):
        return [apply_map(h, c) for c in curve]
    if not h.is_rational:
        raise ValueError("curve images need a rational map")
    m = h.matrix
    if isinstance(curve, ParamCurve):
        f = curve.coords
        coords = [f[0] * m[i][0] + f[1] * m[i][1] + f[2] * m[i][2] for i in range(3)]
        return ParamCurve(*coords, label=curve.label)
    inv = h.inverse().matrix
    if isinstance(curve, TernForm):
        return curve.substitute(inv).normalize()
    if isinstance(curve, ImplicitCurve):
        return ImplicitCurve(curve.form.substitute(inv), curve.label)
    raise TypeError(f"cannot map {type(curve).__name__}")


def implicitize(curve: ParamCurve) -> ImplicitCurve:
    return ImplicitCurve(implicit_form(curve), curve.label)


def map_sending_to_origin(p) -> ProjMap:
    """A rational map taking (0:0:1) to the rational point p."""
    p = tuple(rat(x) for x in p)
    cols = [p]
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        cand = cols + [e]
        if len(cand) == 2 and not all(x == 0 for x in cross(cand[0], cand[1])):
            cols = cand
        elif len(cand) == 3 and _det3([[c[i] for c in cand] for i in range(3)]) != 0:
            cols = cand
            break
    a, b = cols[1], cols[2]
    return ProjMap([[a[i], b[i], p[i]] for i in range(3)])


def parametrize_by_point(form: TernForm, point, label=None) -> ParamCurve:
    """Rational parametrization of an irreducible degree-d curve through the
    rational point ``point`` of multiplicity d - 1, by the pencil of lines
    through that point."""
    h = map_sending_to_origin(point)
    g = form.substitute(h.matrix)
    d = g.degree
    lower = {k: v for k, v in g.terms.items() if k[2] == 1}
    top = {k: v for k, v in g.terms.items() if k[2] == 0}
    if any(k[2] > 1 for k in g.terms) or not lower:
        raise DegenerateInput(f"point is not of multiplicity {d - 1}")
    # on the line y = t x: z x^{d-1} G_{d-1}(1, t) + x^d G_d(1, t) = 0
    def along(terms):
        cs = [Fraction(0)] * (d + 1)
        for (i, j, _), v in terms.items():
            cs[j] += v
        return UniPoly(cs)

    gl, gt = along(lower), along(top)
    local = ParamCurve(gl, gl * UniPoly([0, 1]), -gt, label=label)
    return apply_map(h, local)


# ---------------------------------------------------------------------------
# duality


def dual_curve(curve):
    """Dual curve.  Parametrized input gives the parametrization by the
    minors of [f; f'] with their common factor removed; implicit input is
    handled by elimination and gives an ImplicitCurve."""
    if isinstance(curve, ParamCurve):
        if curve.degree == 1 or implicit_form(curve).degree == 1:
            raise DegenerateInput("the dual of a line is a point")
        m = curve.derivative_cross()
        return ParamCurve(*m, label=(curve.label + "^") if curve.label else None)
    form = curve_form(curve)
    label = getattr(curve, "label", None)
    return ImplicitCurve(_dual_form(form), (label + "^") if label else None)


def _dual_form(form: TernForm) -> TernForm:
    n = form.degree
    if n < 2:
        raise DegenerateInput("the dual of a line is a point")
    if n * (n - 1) > elimination_budget():
        raise EliminationOverflow(f"dual of a degree-{n} curve exceeds the elimination budget")
    ctx = flint.fmpq_mpoly_ctx.get(("x", "u", "v"), "lex")
    x, u, v = ctx.gens()
    aff = form.dehomogenize()
    fx, fy = aff.derivative("x"), aff.derivative("y")

    ypow = [ctx.from_dict({(0, 0, 0): 1})]
    for _ in range(n):
        ypow.append(ypow[-1] * (-(1 + u * x)))

    def lift(p):
        out = ctx.from_dict({})
        for (i, j), c in p.to_dict().items():
            out += _to_fmpq(rat(c)) * x ** int(i) * ypow[int(j)] * v ** (n - int(j))
        return out

    # line u x + v y + 1 = 0, i.e. y = -(1 + u x)/v; scale by v^n
    a = lift(aff)
    b = u * lift(fy) - v * lift(fx)
    res = a.resultant(b, "x")
    grad = form.gradient()
    for fac, _ in res.factor()[1]:
        if fac.total_degree() < 2:
            continue
        terms = {}
        for (i, j, k), c in fac.to_dict().items():
            terms[(int(j), int(k))] = rat(c)
        deg = max(j + k for j, k in terms)
        h = TernForm({(j, k, deg - j - k): c for (j, k), c in terms.items()}, deg)
        if form.divides(h.compose_forms(*grad)):
            return h.normalize()
    raise DegenerateInput("elimination did not produce a dual curve")


def class_of_curve(curve: ParamCurve) -> int:
    """Degree of the dual curve from branch data: 2d - 2 - sum(e_b - 1)."""
    d = curve.degree
    dpoly, at_inf = singular_parameter_poly(curve)
    return 2 * d - 2 - dpoly.degree - at_inf


# ---------------------------------------------------------------------------
# quadratic Cremona map


def _line_form(line) -> TernForm:
    if isinstance(line, TernForm):
        if line.degree != 1:
            raise ValueError("triangle sides must be lines")
        return line
    return TernForm.linear(*line)


def cremona_sigma(curve, triangle):
    """Image under the quadratic map with base points the vertices of the
    triangle: in coordinates w_i = l_i(z) it is w -> (w2 w3 : w1 w3 : w1 w2)."""
    lines = [_line_form(l) for l in triangle]
    if len(lines) != 3:
        raise ValueError("a triangle has three sides")
    rows = [[ln.coeff(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for ln in lines]
    if _det3(rows) == 0:
        raise DegenerateInput("triangle sides are concurrent or repeated")
    a = ProjMap(rows)
    ainv = a.inverse().matrix
    if isinstance(curve, (list, tuple)):
        return [cremona_sigma(c, triangle) for c in curve]
    if isinstance(curve, ParamCurve):
        w = [sum((c * rows[i][k] for k, c in enumerate(curve.coords)), UniPoly()) for i in range(3)]
        for i, wi in enumerate(w):
            if wi.is_zero():
                raise CurveContainsTriangleLine(f"curve is the triangle side {lines[i].pretty()}")
        q = (w[1] * w[2], w[0] * w[2], w[0] * w[1])
        coords = [sum((q[k] * ainv[i][k] for k in range(3)), UniPoly()) for i in range(3)]
        return ParamCurve(*coords, label=curve.label)
    form = curve_form(curve)
    for ln in lines:
        if ln.divides(form):
            raise CurveContainsTriangleLine(f"curve contains the triangle side {ln.pretty()}")
    quad = [lines[1] * lines[2], lines[0] * lines[2], lines[0] * lines[1]]
    images = [sum((quad[k] * ainv[i][k] for k in range(3)), TernForm({}, 2)) for i in range(3)]
    g = form.compose_forms(*images)
    for ln in lines:
        while ln.divides(g):
            g = g.exact_div(ln)
    label = getattr(curve, "label", None)
    return ImplicitCurve(g, label) if not isinstance(curve, TernForm) else g.normalize()


# ---------------------------------------------------------------------------
# pencils of conics


def conic_matrix(q: TernForm):
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for k, c in q.terms.items():
        idx = [i for i in range(3) for _ in range(k[i])]
        if idx[0] == idx[1]:
            m[idx[0]][idx[0]] += c
        else:
            m[idx[0]][idx[1]] += c / 2
            m[idx[1]][idx[0]] += c / 2
    return m


def _factor_member(q: TernForm):
    out = []
    for f, e in q.factor():
        if f.degree == 0:
            continue
        out.append((f, e))
    return out


def pencil_analysis(p: Pencil):
    """Degenerate members: list of (lambda, factorization).  lambda is a
    rational, INF, or an irreducible UniPoly whose roots are the values; the
    factorization lists (form, multiplicity) over the rationals, so an
    irreducible quadratic factor stands for two conjugate lines."""
    a, b = conic_matrix(p.base), conic_matrix(p.direction)
    mat = [[UniPoly([a[i][j], b[i][j]]) for j in range(3)] for i in range(3)]
    det = _det3(mat)
    if det.is_zero():
        raise IdenticallyDegenerate("every member of the pencil is singular")
    out = []
    _, facs = factor_rational(det)
    for h, mult in facs:
        if h.degree == 1:
            root = -h.coeff(0)
            out.append((root, _factor_member(p.member(root))))
        else:
            out.append((h, []))
    if det.degree < 3:
        out.append((INF, _factor_member(p.direction)))
    return out
