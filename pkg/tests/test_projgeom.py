from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, T, Z1, Z2, Z3, rational_corpus
from rigidcurve.curvelocal import INF, ParamCurve, singularity_audit
from rigidcurve.errors import (CurveContainsTriangleLine, EliminationOverflow,
                               IdenticallyDegenerate, SingularMatrix)
from rigidcurve.exactalg import TernForm
from rigidcurve.projgeom import (
    ImplicitCurve,
    Pencil,
    ProjMap,
    apply_map,
    class_of_curve,
    cremona_sigma,
    dual_curve,
    implicitize,
    parametrize_by_point,
    pencil_analysis,
)
from rigidcurve.rigidity import curves_equal

CUSP = ParamCurve(T ** 3, T ** 2, P(1))
NODAL = ParamCurve(P(-1, 0, 1), P(0, -1, 0, 1), P(1))
CONIC = ParamCurve(T ** 2, T, P(1))

entries = st.integers(-3, 3)
matrices = st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3)


def invertible(m):
    try:
        return ProjMap(m)
    except SingularMatrix:
        return None


def sympy_implicit(curve):
    """Independent implicitization: resultant of z_i z3(t) - z3 z_i(t) in sympy."""
    t, z1, z2, z3 = sp.symbols("t z1 z2 z3")
    f = [sum(sp.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(p.coeffs))
         for p in curve.coords]
    r = sp.resultant(z1 * f[2] - z3 * f[0], z2 * f[2] - z3 * f[1], t)
    r = sp.factor_list(sp.expand(r))[1]
    for g, _ in r:
        if sp.simplify(g.subs({z1: f[0], z2: f[1], z3: f[2]})) == 0:
            poly = sp.Poly(g, z1, z2, z3)
            return TernForm({tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()},
                            poly.total_degree()).normalize()
    raise AssertionError("no factor vanishes on the curve")


class TestMaps:
    def test_singular(self):
        with pytest.raises(SingularMatrix):
            ProjMap([[1, 0, 0], [0, 1, 0], [1, 1, 0]])

    def test_identity(self):
        assert curves_equal(apply_map(ProjMap.identity(), CUSP), CUSP)

    @pytest.mark.parametrize("a", [2, -1, Fraction(1, 3)])
    def test_scaling_in_add2_family(self, a):
        n = 2
        ca = ParamCurve(T ** 5, T ** 3, P(1, a))
        c1 = ParamCurve(T ** 5, T ** 3, P(1, 1))
        h = ProjMap.diagonal(Fraction(a) ** (2 * n + 1), Fraction(a) ** (n + 1), 1)
        assert curves_equal(apply_map(h, ca), c1)
        assert curves_equal(apply_map(h.inverse(), c1), ca)

    @pytest.mark.parametrize("a", [2, -1, Fraction(1, 3)])
    def test_scaling_in_cuspidal_family(self, a):
        a = Fraction(a)
        ca = ParamCurve(T ** 3, T ** 2, P(1, a))
        c1 = ParamCurve(T ** 3, T ** 2, P(1, 1))
        h = ProjMap.diagonal(1, 1 / a, 1 / a ** 3)
        assert curves_equal(apply_map(h, ca), c1)

    @given(matrices, matrices)
    @settings(max_examples=25, deadline=None)
    def test_group_action(self, m1, m2):
        h1, h2 = invertible(m1), invertible(m2)
        if h1 is None or h2 is None:
            return
        lhs = apply_map(h2, apply_map(h1, NODAL))
        assert lhs == apply_map(h2 @ h1, NODAL)
        form = apply_map(h2, apply_map(h1, NODAL.implicit_form()))
        assert form == apply_map(h2 @ h1, NODAL.implicit_form())

    @given(matrices)
    @settings(max_examples=25, deadline=None)
    def test_equivariance(self, m):
        h = invertible(m)
        if h is None:
            return
        lhs = implicitize(apply_map(h, CUSP)).form
        rhs = CUSP.implicit_form().substitute(h.inverse().matrix).normalize()
        assert lhs == rhs


class TestImplicitize:
    def test_line(self):
        assert implicitize(ParamCurve(T, P(1), P(1))).form == (Z2 - Z3).normalize()

    def test_cusp(self):
        assert implicitize(CUSP).form == (Z1 ** 2 * Z3 - Z2 ** 3).normalize()

    def test_conic(self):
        assert implicitize(CONIC).form == (Z1 * Z3 - Z2 ** 2).normalize()

    @pytest.mark.parametrize("k", range(14))
    def test_against_sympy(self, k):
        curve = rational_corpus()[k]
        form = curve.implicit_form()
        assert form == sympy_implicit(curve)
        assert form.pullback(*curve.coords).is_zero()

    def test_parametrize_by_node(self):
        form = NODAL.implicit_form()
        param = parametrize_by_point(form, (0, 0, 1))
        assert param.implicit_form() == form


class TestDuality:
    def test_conic_self_dual_class(self):
        d = dual_curve(ImplicitCurve(Z1 * Z3 - Z2 ** 2))
        assert d.degree == 2
        assert singularity_audit([d]).records == []

    def test_cusp_dual(self):
        d = dual_curve(ImplicitCurve(CUSP.implicit_form()))
        assert d.form == (Z1 ** 2 * Z3 * 27 + Z2 ** 3 * 4).normalize()

    def test_fermat_cubic(self):
        d = dual_curve(ImplicitCurve(Z1 ** 3 + Z2 ** 3 + Z3 ** 3))
        assert d.degree == 6
        assert singularity_audit([d]).descriptor_string() == "9 A2"

    def test_budget(self, monkeypatch):
        monkeypatch.setenv("RIGIDCURVE_BUDGET", "10")
        with pytest.raises(EliminationOverflow):
            dual_curve(ImplicitCurve(Z1 ** 4 + Z2 ** 4 + Z3 ** 4))

    def test_class_examples(self):
        assert class_of_curve(CONIC) == 2
        assert class_of_curve(NODAL) == 4
        assert class_of_curve(CUSP) == 3

    @pytest.mark.parametrize("k", range(14))
    def test_plucker_and_biduality(self, k):
        curve = rational_corpus()[k]
        dual = dual_curve(curve)
        assert dual.implicit_form().degree == class_of_curve(curve)
        assert curves_equal(dual_curve(dual), curve)

    def test_both_dual_routes_agree(self):
        param_route = dual_curve(NODAL).implicit_form()
        implicit_route = dual_curve(ImplicitCurve(NODAL.implicit_form())).form
        assert param_route == implicit_route


class TestCremona:
    TRIANGLE = [Z1, Z2, Z3]

    def test_line_to_conic(self):
        img = cremona_sigma(ImplicitCurve(Z1 + Z2 * 2 + Z3 * 3), self.TRIANGLE)
        assert img.degree == 2
        for p in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            assert img.form(*p) == 0

    @pytest.mark.parametrize("curve", [CONIC, NODAL, CUSP])
    def test_involution(self, curve):
        tri = [Z1 + Z2 + Z3 * 5, Z1 * 2 - Z2 + Z3 * 3, Z1 - Z2 * 4 + Z3 * 7]
        twice = cremona_sigma(cremona_sigma(ImplicitCurve(curve.implicit_form()), tri), tri)
        assert twice.form == curve.implicit_form()
        p_twice = cremona_sigma(cremona_sigma(curve, tri), tri)
        assert curves_equal(p_twice, curve)

    def test_contains_side(self):
        with pytest.raises(CurveContainsTriangleLine):
            cremona_sigma(ImplicitCurve(Z1), self.TRIANGLE)


class TestPencils:
    Q0 = Z1 * Z1 - Z2 * Z3

    def test_pen1(self):
        out = pencil_analysis(Pencil(self.Q0, Z1 * Z3))
        assert [lam for lam, _ in out] == [INF]
        assert sorted(f.pretty() for f, _ in out[0][1]) == ["z1", "z3"]

    def test_pen2(self):
        out = dict((str(lam), fs) for lam, fs in pencil_analysis(Pencil(self.Q0, Z1 * Z1)))
        assert set(out) == {"-1", "inf"}
        assert sorted(f.pretty() for f, _ in out["-1"]) == ["z2", "z3"]
        assert [(f.pretty(), e) for f, e in out["inf"]] == [("z1", 2)]

    def test_pen3(self):
        out = pencil_analysis(Pencil(self.Q0, Z3 * Z3))
        assert len(out) == 1 and out[0][0] == INF
        assert [(f.pretty(), e) for f, e in out[0][1]] == [("z3", 2)]

    def test_identically_degenerate(self):
        with pytest.raises(IdenticallyDegenerate):
            pencil_analysis(Pencil(Z1 * Z1, Z1 * Z2))
