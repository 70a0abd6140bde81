"""Constructors, exact solvers and certificates for rigid families of plane
curves, plus dimension bookkeeping for equisingular strata of quartics.

Every constructor returns exact objects; the ``certify`` helpers run the
singularity audit and compare against the expected descriptor, raising
CertificationFailure on any disagreement.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

from .curvelocal import (
    INF,
    Audit,
    ParamCurve,
    SingTypeTag,
    branch_at,
    flex_parameters,
    format_type_counts,
    pair_intersection_multiplicity,
    parse_type_counts,
    singularity_audit,
)
from .errors import (
    BadParams,
    BadResidues,
    CertificationFailure,
    EliminationOverflow,
    FlexCountUnexpected,
    ResourceBudget,
    TypeBoundViolated,
)
from .exactalg import (
    TernForm,
    UniPoly,
    integrate_unit_interval,
    is_squarefree,
    rat,
    root_multiplicity,
)
from .projgeom import (
    ImplicitCurve,
    Pencil,
    ProjMap,
    cremona_sigma,
    curve_form,
    dual_curve,
    parametrize_by_point,
)
from .rigidity import Witness

T = UniPoly([0, 1])
Z1, Z2, Z3 = (TernForm.var(k) for k in range(3))


def _check_int(name, value, low):
    if not isinstance(value, int) or isinstance(value, bool) or value < low:
        raise BadParams(f"{name} must be an integer >= {low}, got {value!r}")


def _tag(text: str) -> SingTypeTag:
    return SingTypeTag.parse(text)


# ---------------------------------------------------------------------------
# descriptors


class FamilyDescriptor:
    """Degrees, genera and singularity type of an equisingular family.

    ``stype`` maps (type string, component indices) to counts; component
    indices start at 0 and refer to the order of ``degrees``.
    """

    def __init__(self, name, degrees, genera, stype, rigidity_class=1, essential=None,
                 representatives=(), witnesses=(), notes=""):
        if not degrees:
            raise BadParams("a family needs at least one component")
        self.name = name
        self.degrees = list(degrees)
        self.genera = list(genera)
        self.stype = {(str(_tag(t)), tuple(sorted(j))): c for (t, j), c in stype.items()}
        self.rigidity_class = rigidity_class
        self.essential = set(essential) if essential is not None else set(self.stype)
        self.representatives = [list(r) for r in representatives]
        self.witnesses = list(witnesses)
        self.notes = notes
        self._check_genus()

    def _check_genus(self):
        for k, (d, g) in enumerate(zip(self.degrees, self.genera)):
            total = 0
            for (t, j), c in self.stype.items():
                if j == (k,):
                    total += _tag(t).delta * c
            if total > (d - 1) * (d - 2) // 2 - g:
                raise BadParams(f"{self.name}: delta on component {k} exceeds the genus bound")

    def type_string(self) -> str:
        counts = {}
        for (t, _), c in self.stype.items():
            tag = _tag(t)
            counts[tag] = counts.get(tag, 0) + c
        return format_type_counts(counts)

    def matches(self, audit: Audit) -> bool:
        return (audit.degrees == self.degrees and audit.genera == self.genera
                and audit.descriptor == self.stype)

    def certify(self, instance=None) -> Audit:
        inst = instance if instance is not None else self.representatives[0]
        audit = singularity_audit(inst)
        if not self.matches(audit):
            raise CertificationFailure(
                f"{self.name}: audit gives {sorted(audit.descriptor.items())}, "
                f"genera {audit.genera}; expected {sorted(self.stype.items())}")
        return audit

    def to_wire(self) -> dict:
        return {
            "name": self.name,
            "degrees": self.degrees,
            "genera": self.genera,
            "type": self.type_string(),
            "stype": [{"type": t, "components": list(j), "count": c,
                       "essential": (t, j) in self.essential}
                      for (t, j), c in sorted(self.stype.items())],
            "rigidity_class": self.rigidity_class,
        }

    def __repr__(self):
        return f"FamilyDescriptor({self.name}: {self.type_string()})"


# ---------------------------------------------------------------------------
# the A_k recurrence


def ak_poly(k: int) -> UniPoly:
    """A_1 = t + 1 and (t - 1) A_{j+1} = t^2 A_j(t) - A_j(1)."""
    _check_int("k", k, 1)
    return ak_sequence(k).polys[-1]


class AkSequence:
    def __init__(self, polys):
        self.polys = list(polys)

    def check(self) -> bool:
        if not self.polys or self.polys[0] != UniPoly([1, 1]):
            return False
        for a, b in zip(self.polys, self.polys[1:]):
            if b * UniPoly([-1, 1]) != T * T * a - UniPoly([a(1)]):
                return False
        return True


def ak_sequence(k: int) -> AkSequence:
    _check_int("k", k, 1)
    polys = [UniPoly([1, 1])]
    step = UniPoly([-1, 1])
    while len(polys) < k:
        a = polys[-1]
        num = T * T * a - UniPoly([a(1)])
        if not step.divides(num):
            raise CertificationFailure("recurrence division by t - 1 is not exact")
        polys.append(num.exact_div(step))
    return AkSequence(polys)


# ---------------------------------------------------------------------------
# one cuspidal curve with a line: (t^4 P(t), t^2, t - 1)


def build_add1(n: int, p: UniPoly | None = None):
    """The curve (t^4 P(t), t^2, t - 1) with P = A_{2n-3}, and the line z3 = 0."""
    _check_int("n", n, 2)
    if p is None:
        p = ak_poly(2 * n - 3)
    curve = ParamCurve(T ** 4 * p, T * T, UniPoly([-1, 1]), label=f"add1_{n}")
    return curve, ImplicitCurve(Z3, "z3")


def a_type_at(curve: ParamCurve, t0=0) -> int:
    """k such that the branch at t0 is an A_k cusp (e = 2, characteristic
    exponent k + 1); 0 for a smooth branch."""
    b = branch_at(curve, t0)
    if b.e == 1:
        return 0
    if b.e != 2:
        raise CertificationFailure(f"branch at t={t0} has multiplicity {b.e}, not a cusp")
    return b.char - 1


def add1_expected(n: int) -> dict:
    return {(f"T({2 * n - 1},{2 * n})^{2 * n}", (0, 1)): 1, ("A1", (0, 1)): 1,
            (f"A{4 * n - 2}", (0,)): 1}


def certify_add1(n: int) -> Audit:
    curve, line = build_add1(n)
    audit = singularity_audit([curve, line])
    expected = {(str(_tag(t)), j): c for (t, j), c in add1_expected(n).items()}
    if audit.descriptor != expected:
        raise CertificationFailure(f"add1({n}): audit {audit.descriptor} != {expected}")
    return audit


# ---------------------------------------------------------------------------
# 1 + x + y + sum a_i x^i y^i = 0


class ToE1Solution:
    def __init__(self, n, tau, a, i1, i2):
        self.n = n
        self.tau = tau
        self.a = a
        self.i1 = i1
        self.i2 = i2
        self.audit = None
        self.curve = ImplicitCurve(self._form(), f"toe1_{n}")

    def _form(self) -> TernForm:
        n = self.n
        f = Z1 ** (2 * n) + Z2 * Z1 ** (2 * n - 1) + Z3 * Z1 ** (2 * n - 1)
        for i, ai in enumerate(self.a, start=1):
            f = f + (Z2 ** i) * (Z3 ** i) * (Z1 ** (2 * n - 2 * i)) * ai
        return f

    def delta_poly(self) -> UniPoly:
        """(1 + sum a_i x^i)^2 - 4x: the discriminant of the curve in y over x = x y."""
        q = UniPoly([1] + list(self.a))
        return q * q - UniPoly([0, 4])

    @property
    def root(self) -> Fraction:
        return 1 / (self.tau * self.tau)

    def expected_counts(self) -> dict:
        n = self.n
        return parse_type_counts(f"A{n} + 2 T({n},{2 * n - 1})")

    def certify(self, audit: bool = True):
        n = self.n
        if self.a[-1] == 0:
            raise CertificationFailure(f"a_{n} vanishes")
        delta = self.delta_poly()
        k = root_multiplicity(delta, self.root)
        if k != n + 1:
            raise CertificationFailure(f"root 1/tau^2 has multiplicity {k}, expected {n + 1}")
        cof = delta
        lin = UniPoly([-self.root, 1])
        for _ in range(k):
            cof = cof.exact_div(lin)
        if not is_squarefree(cof):
            raise CertificationFailure("cofactor of the multiple root is not square-free")
        if audit:
            au = singularity_audit([self.curve])
            if au.type_counts() != self.expected_counts():
                raise CertificationFailure(
                    f"audit gives {au.descriptor_string()}, expected "
                    f"{format_type_counts(self.expected_counts())}")
            if au.genera != [n // 2 - 1]:
                raise CertificationFailure(f"genus {au.genera[0]}, expected {n // 2 - 1}")
            self.audit = au
        return self

    def to_wire(self) -> dict:
        return {"n": self.n, "tau": str(self.tau), "a": [str(x) for x in self.a],
                "I1": str(self.i1), "I2": str(self.i2), "curve": self.curve.to_wire()}


def solve_toe1(n: int, certify: bool = True, audit: bool = True) -> ToE1Solution:
    """Coefficients a_1..a_n for which the curve 1 + x + y + sum a_i x^i y^i = 0
    has an A_n point and two T(n, 2n-1) points.

    With w(xi) = (1 - xi^2)^(n-1), I1 = int_0^1 w and I2 = int_0^1 W where W is
    the antiderivative of w vanishing at 0.  The pair (a_1/tau, 1/tau) solves
    a linear system giving a_1/tau = -1/I1 and tau = 2 I2/I1 - 2; the other
    coefficients are a_i = (-1)^(i-1) C(n-1, i-1) a_1 tau^(2i-2) / (i (2i-1)).
    """
    _check_int("n", n, 2)
    w = (UniPoly([1, 0, -1])) ** (n - 1)
    i1 = integrate_unit_interval(w)
    i2 = integrate_unit_interval(w.antiderivative())
    tau = 2 * i2 / i1 - 2
    a1 = -tau / i1
    a = []
    for i in range(1, n + 1):
        c = Fraction((-1) ** (i - 1) * math.comb(n - 1, i - 1), i * (2 * i - 1))
        a.append(c * a1 * tau ** (2 * i - 2))
    sol = ToE1Solution(n, tau, a, i1, i2)
    if certify:
        sol.certify(audit=audit)
    return sol


# ---------------------------------------------------------------------------
# two-parameter-free unicuspidal pairs


def build_add2(n: int, a) -> ParamCurve:
    """(t^{2n+1}, t^{n+1}, a t + 1)."""
    _check_int("n", n, 2)
    a = rat(a)
    return ParamCurve(T ** (2 * n + 1), T ** (n + 1), UniPoly([1, a]), label=f"add2_{n}({a})")


def add2_tangent_intersection(n: int, a) -> int:
    """Intersection at the image of t = infinity of the curve with z3 = 0."""
    c = build_add2(n, a)
    return pair_intersection_multiplicity(c, Z3, at=c.point(INF))


def add2_witness(n: int, a) -> Witness:
    """diag(a^{2n+1}, a^{n+1}, 1) takes the member with parameter a to the one with 1."""
    a = rat(a)
    if a == 0:
        raise BadParams("the member a = 0 is not equivalent to a = 1")
    h = ProjMap.diagonal(a ** (2 * n + 1), a ** (n + 1), 1)
    return Witness(h, build_add2(n, a), build_add2(n, 1), reparam=(1, 0, 0, a))


def build_add3(n: int, a) -> ParamCurve:
    """((t^2 - a^2) t^{4n-2}, t^{2n-1}, 1)."""
    _check_int("n", n, 3)
    a = rat(a)
    return ParamCurve(UniPoly([-a * a, 0, 1]) * T ** (4 * n - 2), T ** (2 * n - 1), UniPoly([1]),
                      label=f"add3_{n}({a})")


def add3_tangent_intersection(n: int, a) -> int:
    """Intersection at the image of t = 0 of the curve with z1 = 0."""
    c = build_add3(n, a)
    return pair_intersection_multiplicity(c, Z1, at=c.point(0))


def add3_witness(n: int, a) -> Witness:
    """diag(a^{-4n}, a^{1-2n}, 1) takes the member with parameter a to the one with 1."""
    a = rat(a)
    if a == 0:
        raise BadParams("the member a = 0 is not equivalent to a = 1")
    h = ProjMap.diagonal(a ** (-4 * n), a ** (1 - 2 * n), 1)
    return Witness(h, build_add3(n, a), build_add3(n, 1), reparam=(a, 0, 0, 1))


# ---------------------------------------------------------------------------
# small rational curves used by the degree <= 4 catalog


def build_parx(a) -> ParamCurve:
    """Cuspidal cubic (t^3, t^2, 1 + a t)."""
    a = rat(a)
    return ParamCurve(T ** 3, T * T, UniPoly([1, a]), label=f"parx({a})")


def build_nu1() -> ParamCurve:
    return ParamCurve(T ** 4, T * T, UniPoly([1, 1]), label="nu1")


def build_nu2() -> ParamCurve:
    return ParamCurve(T ** 4, T * T * UniPoly([-1, 1]), UniPoly([1, -2]), label="nu2")


def build_nu3(a) -> ParamCurve:
    """Quartic (t^4, t^3, a t + 1) with one T(3,4) point."""
    a = rat(a)
    return ParamCurve(T ** 4, T ** 3, UniPoly([1, a]), label=f"nu3({a})")


def nu3_witness(a) -> Witness:
    """diag(a^4, a^3, 1) takes the member with parameter a to the one with 1."""
    a = rat(a)
    if a == 0:
        raise BadParams("the member a = 0 is not equivalent to a = 1")
    return Witness(ProjMap.diagonal(a ** 4, a ** 3, 1), build_nu3(a), build_nu3(1),
                   reparam=(1, 0, 0, a))


# ---------------------------------------------------------------------------
# duality and Cremona recursion


class VnStep:
    """One step of the recursion: dual curve, its flex tangents, and the
    image of the dual under the quadratic map based at the flex triangle."""

    def __init__(self, m, dual, dual_audit, parametrization, flexes, lines, union_audit,
                 next_curve, next_audit):
        self.m = m
        self.dual = dual
        self.dual_audit = dual_audit
        self.parametrization = parametrization
        self.flexes = flexes
        self.lines = lines
        self.union_audit = union_audit
        self.next_curve = next_curve
        self.next_audit = next_audit

    @property
    def vhat_member(self) -> list:
        return [self.dual] + self.lines

    @property
    def next_degree(self) -> int:
        return self.next_curve.degree

    def to_wire(self) -> dict:
        return {
            "m": self.m,
            "dual": self.dual.to_wire(),
            "dual_type": self.dual_audit.descriptor_string(),
            "flex_parameters": [str(t) for t in self.flexes],
            "flex_tangents": [ln.to_wire() for ln in self.lines],
            "union_type": self.union_audit.descriptor_string(),
            "next": self.next_curve.to_wire(),
            "next_degree": self.next_degree,
            "next_type": self.next_audit.descriptor_string(),
        }


def _multiple_point(audit: Audit, mult: int):
    for r in audit.records:
        if r.orbit_size == 1 and r.tag.multiplicity == mult:
            return tuple(rat(x.to_rational() if hasattr(x, "to_rational") else x) for x in r.center)
    return None


def vn_step(curve, m: int | None = None, max_m: int = 3) -> VnStep:
    """From a curve of degree 2m with three T(m, m+1) points (and otherwise
    ordinary multiple points T(k, k)): dual curve, its three flex tangent lines, and the
    image of the dual under the quadratic map with that triangle as base."""
    form = curve_form(curve)
    if m is None:
        if form.degree % 2:
            raise BadParams("input degree must be even")
        m = form.degree // 2
    _check_int("m", m, 2)
    if m > max_m:
        raise ResourceBudget(f"m = {m} exceeds the supported range m <= {max_m}")
    audit = singularity_audit([curve])
    if audit.count(SingTypeTag(m, m + 1)) != 3:
        raise CertificationFailure(f"input does not have three T({m},{m + 1}) points: "
                                   f"{audit.descriptor_string()}")
    try:
        dual = dual_curve(curve if not isinstance(curve, TernForm) else ImplicitCurve(curve))
    except EliminationOverflow as exc:
        raise ResourceBudget(str(exc)) from exc
    d = dual.degree
    if d != m + 1:
        raise CertificationFailure(f"dual has degree {d}, expected {m + 1}")
    dual_audit = singularity_audit([dual])
    bad = [t for t in dual_audit.type_counts() if not t.is_simple]
    if bad:
        raise CertificationFailure(f"dual has non-simple singularities {bad}")
    point = _multiple_point(dual_audit, d - 1)
    if point is None:
        raise ResourceBudget(f"dual has no rational point of multiplicity {d - 1} to parametrize from")
    param = parametrize_by_point(dual.form, point, label="dual")
    flexes = flex_parameters(param)
    count = sum(t.degree if isinstance(t, UniPoly) else 1 for t, _ in flexes)
    if count != 3:
        raise FlexCountUnexpected(f"dual has {count} flexes, expected 3")
    if any(isinstance(t, UniPoly) for t, _ in flexes):
        raise ResourceBudget("flex tangents are not defined over the rationals")
    params = [t for t, _ in flexes]
    lines = [ImplicitCurve(TernForm.linear(*branch_at(param, t).tangent), f"L{k + 1}")
             for k, t in enumerate(params)]
    union_audit = singularity_audit([dual] + lines)
    contact = SingTypeTag(2, 2 * (m + 1))
    if union_audit.count(contact) != 3:
        raise CertificationFailure(f"flex tangents do not give three {contact} points: "
                                   f"{union_audit.descriptor_string()}")
    nxt = cremona_sigma(dual, [ln.form for ln in lines])
    nxt = ImplicitCurve(nxt.form, f"V{m + 1}")
    next_audit = singularity_audit([nxt])
    core = SingTypeTag(m + 1, m + 2)
    if next_audit.count(core) != 3:
        raise CertificationFailure(f"image does not have three {core} points: "
                                   f"{next_audit.descriptor_string()}")
    rest = [t for t in next_audit.type_counts() if t != core and not t.is_simple]
    if rest:
        raise CertificationFailure(f"image has non-simple singularities {rest}")
    return VnStep(m, dual, dual_audit, param, params, lines, union_audit, nxt, next_audit)


class FermatDual:
    def __init__(self, n, components, audit):
        self.n = n
        self.components = components
        self.audit = audit

    def extra_type(self) -> dict:
        """Singularities of the dual other than its 3n T(n-1, n) points."""
        core = SingTypeTag(self.n - 1, self.n)
        out = {}
        for r in self.audit.records:
            if r.component_set == (0,) and r.tag != core:
                out[r.tag] = out.get(r.tag, 0) + r.orbit_size
        return out

    def to_wire(self) -> dict:
        return {"n": self.n, "components": [c.to_wire() for c in self.components],
                "type": self.audit.descriptor_string(),
                "extra": format_type_counts(self.extra_type())}


def fermat_dual_family(n: int, num_extra_lines: int = 0) -> FermatDual:
    """Dual of z1^n + z2^n + z3^n, optionally with the coordinate lines."""
    _check_int("n", n, 3)
    if n > 4:
        raise ResourceBudget(f"n = {n} exceeds the supported range n <= 4")
    if num_extra_lines not in (0, 3):
        raise BadParams("num_extra_lines must be 0 or 3")
    fermat = ImplicitCurve(Z1 ** n + Z2 ** n + Z3 ** n, f"F{n}")
    try:
        dual = dual_curve(fermat)
    except EliminationOverflow as exc:
        raise ResourceBudget(str(exc)) from exc
    dual = ImplicitCurve(dual.form, f"F{n}^")
    comps = [dual]
    if num_extra_lines:
        comps += [ImplicitCurve(z, f"z{k + 1}") for k, z in enumerate((Z1, Z2, Z3))]
    audit = singularity_audit(comps)
    core = SingTypeTag(n - 1, n)
    deco = SingTypeTag(n - 1, n, "m")
    on_lines = sum(audit.count(deco, (0, k)) for k in range(1, len(comps)))
    if audit.count(core, (0,)) + on_lines != 3 * n:
        raise CertificationFailure(f"dual of F{n} does not have {3 * n} {core} points: "
                                   f"{audit.descriptor_string()}")
    if num_extra_lines:
        for k in (1, 2, 3):
            if audit.count(deco, (0, k)) != n:
                raise CertificationFailure(f"line {k} does not meet the dual at {n} {deco} points")
        for j, k in combinations((1, 2, 3), 2):
            if audit.count("A1", (j, k)) != 1:
                raise CertificationFailure(f"lines {j}, {k} do not meet transversally")
    return FermatDual(n, comps, audit)


# ---------------------------------------------------------------------------
# pairs of lines through a vertex of the Fermat dual configuration


def _check_residues(n, pair):
    m1, m2 = pair
    if not isinstance(m1, int) or not isinstance(m2, int):
        raise BadResidues("residues must be integers")
    if (m1 - m2) % n == 0:
        raise BadResidues(f"residues {m1}, {m2} coincide mod {n}")


def rigit_equivalent(n: int, pair1, pair2) -> bool:
    """Two choices of lines z2 + e^{m} z3 = 0 are equivalent when the
    differences of their exponents agree up to sign mod n."""
    if not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise BadResidues(f"n must be an odd integer >= 3, got {n!r}")
    _check_residues(n, pair1)
    _check_residues(n, pair2)
    d1 = (pair1[0] - pair1[1]) % n
    d2 = (pair2[0] - pair2[1]) % n
    return d1 == d2 or d1 == (-d2) % n


def rigit_classes(n: int) -> list:
    """Classes of unordered pairs of distinct residues mod n."""
    pairs = list(combinations(range(n), 2))
    classes = []
    for p in pairs:
        for c in classes:
            if rigit_equivalent(n, p, c[0]):
                c.append(p)
                break
        else:
            classes.append([p])
    return classes


def rigit_orbit_analysis(n: int, pair1, pair2):
    """(equivalent, number of classes)."""
    return rigit_equivalent(n, pair1, pair2), len(rigit_classes(n))


# ---------------------------------------------------------------------------
# quartic strata

# order of the multiplicities m1..m9
QUARTIC_TYPES = ("A1", "A2", "A3", "A4", "A5", "A6", "T(3,3)", "T(2,3)^2", "T(3,4)")
_DIM_WEIGHTS = (1, 2, 3, 4, 5, 6, 4, 5, 6)
_TYPE_WEIGHTS = (1, 1, 2, 2, 3, 3, 3, 3, 3)


def quartic_stratum_tools(m):
    """(dimension of the stratum of quartics with m_i points of the i-th
    type, whether it can contain a rigid family)."""
    m = tuple(m)
    if len(m) != 9 or any(not isinstance(x, int) or x < 0 for x in m):
        raise BadParams("need nine non-negative integers")
    if sum(w * x for w, x in zip(_TYPE_WEIGHTS, m)) > 3:
        raise TypeBoundViolated(f"{m} violates the weighted bound <= 3")
    dim = 14 - sum(w * x for w, x in zip(_DIM_WEIGHTS, m))
    return dim, dim <= 8


def quartic_type_string(m) -> str:
    counts = {}
    for name, k in zip(QUARTIC_TYPES, m):
        if k:
            tag = _tag(name)
            counts[tag] = counts.get(tag, 0) + k
    return format_type_counts(counts)


def enumerate_rigid_candidates() -> list:
    out = []
    for m in product(*(range(3 // w + 1) for w in _TYPE_WEIGHTS)):
        try:
            _, cand = quartic_stratum_tools(m)
        except TypeBoundViolated:
            continue
        if cand:
            out.append((m, quartic_type_string(m)))
    return out


# ---------------------------------------------------------------------------
# rigid curves of degree <= 4


def _line(a, b, c, label=None) -> ImplicitCurve:
    return ImplicitCurve(TernForm.linear(a, b, c), label)


def pencil_conics() -> dict:
    """Pencils Q0 + lam * Q with Q0: z1^2 = z2 z3, named by how the members meet Q0."""
    q0 = Z1 * Z1 - Z2 * Z3
    return {
        "pen1": Pencil(q0, Z1 * Z3),
        "pen2": Pencil(q0, Z1 * Z1),
        "pen3": Pencil(q0, Z3 * Z3),
    }


def pen1_member(lam) -> ParamCurve:
    """(t, t^2 + lam t, 1): tangent to Q0 at (0:0:1) and meeting it again at (0:1:0)."""
    return ParamCurve(T, T * T + T * rat(lam), UniPoly([1]), label=f"Q({lam})")


def pen3_member(lam) -> ParamCurve:
    """(t, t^2 + lam, 1): four-fold contact with Q0 at (0:1:0)."""
    return ParamCurve(T, T * T + UniPoly([rat(lam)]), UniPoly([1]), label=f"Q({lam})")


def _pencil_witness(kind: str, lam) -> Witness:
    lam = rat(lam)
    h = ProjMap.diagonal(lam, lam * lam, 1)
    q0 = pen1_member(0)
    if kind == "pen1":
        return Witness(h, [q0, pen1_member(1)], [q0, pen1_member(lam)], reparam=(1, 0, 0, lam))
    return Witness(h, [q0, pen3_member(1)], [q0, pen3_member(lam * lam)], reparam=(1, 0, 0, lam))


def _parx_witness(a, line) -> Witness:
    a = rat(a)
    h = ProjMap.diagonal(1, 1 / a, 1 / a ** 3)
    return Witness(h, [build_parx(a), line], [build_parx(1), line], reparam=(1, 0, 0, a))


def catalog_small_degree() -> list:
    """Rigid reduced curves of degree at most 4, with representatives and,
    where the argument needs one, explicit witness maps."""
    conic = ParamCurve(T * T, T, UniPoly([1]), label="conic")
    nodal = ParamCurve(UniPoly([-1, 0, 1]), UniPoly([0, -1, 0, 1]), UniPoly([1]), label="nodal")
    cusp = ParamCurve(T ** 3, T * T, UniPoly([1]), label="cuspidal")
    z1, z2, z3 = _line(1, 0, 0, "z1"), _line(0, 1, 0, "z2"), _line(0, 0, 1, "z3")
    z12 = _line(1, 1, 0, "z1+z2")
    q0 = pen1_member(0)

    def fam(name, degrees, stype, reps, k=1, witnesses=(), essential=None):
        return FamilyDescriptor(name, degrees, [0] * len(degrees), stype, k,
                                essential=essential, representatives=reps, witnesses=witnesses)

    out = [
        fam("I1", [1], {}, [[z3]]),
        fam("I2", [1, 1], {("A1", (0, 1)): 1}, [[z1, z2]]),
        fam("I3", [2], {}, [[conic]]),
        fam("I4", [1, 1, 1], {("A1", (0, 1)): 1, ("A1", (0, 2)): 1, ("A1", (1, 2)): 1},
            [[z1, z2, z3]]),
        fam("I5", [1, 1, 1], {("T(3,3)", (0, 1, 2)): 1}, [[z1, z2, z12]]),
        fam("I6", [2, 1], {("A1", (0, 1)): 2}, [[conic, z2]]),
        fam("I7", [2, 1], {("A3", (0, 1)): 1}, [[conic, z1]]),
        fam("I8", [3], {("A1", (0,)): 1}, [[nodal]]),
        fam("I9", [3], {("A2", (0,)): 1}, [[cusp]]),
        fam("I10", [1, 1, 1, 1], {("A1", p): 1 for p in combinations(range(4), 2)},
            [[z1, z2, z3, _line(1, 1, 1, "z1+z2+z3")]]),
        fam("I11", [1, 1, 1, 1], {("T(3,3)", (0, 1, 2)): 1, ("A1", (0, 3)): 1,
                                  ("A1", (1, 3)): 1, ("A1", (2, 3)): 1},
            [[z1, z2, z12, z3]]),
        fam("I12", [2, 1, 1], {("A3", (0, 1)): 1, ("A3", (0, 2)): 1, ("A1", (1, 2)): 1},
            [[conic, z1, z3]]),
        fam("I13", [2, 1, 1], {("A3", (0, 1)): 1, ("A1", (0, 2)): 2, ("A1", (1, 2)): 1},
            [[conic, z1, _line(1, -3, 2, "z1-3z2+2z3")]]),
        fam("I14", [2, 1, 1], {("T(2,4)^2", (0, 1, 2)): 1, ("A1", (0, 2)): 1},
            [[conic, z1, z2]]),
        fam("I15", [2, 2], {("A5", (0, 1)): 1, ("A1", (0, 1)): 1},
            [[q0, pen1_member(1)]], witnesses=[_pencil_witness("pen1", x) for x in (2, -1, Fraction(1, 3))]),
        fam("I16", [2, 2], {("A7", (0, 1)): 1},
            [[q0, pen3_member(1)]], witnesses=[_pencil_witness("pen3", x) for x in (2, -1, Fraction(1, 3))]),
        fam("I17", [3, 1], {("A1", (0,)): 1, ("A5", (0, 1)): 1}, [[nodal, z3]]),
        fam("I18", [3, 1], {("T(2,4)^2", (0, 1)): 1}, [[nodal, _line(1, -1, 0, "z1-z2")]]),
        fam("I19", [3, 1], {("T(2,3)^3", (0, 1)): 1}, [[cusp, z1]]),
        fam("I20", [3, 1], {("A2", (0,)): 1, ("A5", (0, 1)): 1}, [[cusp, z3]]),
        fam("I21", [3, 1], {("A2", (0,)): 1, ("A3", (0, 1)): 1, ("A1", (0, 1)): 1},
            [[build_parx(1), z3]], witnesses=[_parx_witness(x, z3) for x in (2, -1, Fraction(1, 3))]),
        fam("I22", [4], {("A2", (0,)): 3}, [[solve_toe1(2, certify=False).curve]]),
        fam("I23", [4], {("A4", (0,)): 1, ("A2", (0,)): 1}, [[build_nu1()]]),
        fam("I24", [4], {("A6", (0,)): 1}, [[build_nu2()]]),
        fam("II1", [3, 1], {("T(2,3)^2", (0, 1)): 1, ("A1", (0, 1)): 1},
            [[build_parx(0), z2], [build_parx(1), z2]], k=2,
            witnesses=[_parx_witness(x, z2) for x in (2, -1, Fraction(1, 3))]),
        fam("II2", [4], {("T(3,4)", (0,)): 1}, [[build_nu3(0)], [build_nu3(1)]], k=2,
            witnesses=[nu3_witness(x) for x in (2, -1, Fraction(1, 3))]),
    ]
    return out
