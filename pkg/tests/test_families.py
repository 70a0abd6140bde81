from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from conftest import P, T, Z3
from rigidcurve import families
from rigidcurve.curvelocal import SingTypeTag, singularity_audit
from rigidcurve.errors import (BadParams, BadResidues, CertificationFailure,
                               ResourceBudget, TypeBoundViolated)
from rigidcurve.projgeom import dual_curve

# Integrals, tau and a_i computed independently with sympy and frozen here.
TOE1_ORACLE = {
    2: (Fraction(2, 3), Fraction(5, 12), Fraction(-3, 4), [Fraction(9, 8), Fraction(-27, 256)]),
    3: (Fraction(8, 15), Fraction(11, 30), Fraction(-5, 8),
        [Fraction(75, 64), Fraction(-625, 4096), Fraction(3125, 262144)]),
    4: (Fraction(16, 35), Fraction(93, 280), Fraction(-35, 64),
        [Fraction(1225, 1024), Fraction(-1500625, 8388608), Fraction(367653125, 17179869184),
         Fraction(-321696484375, 281474976710656)]),
}


class TestAk:
    def test_values(self):
        assert families.ak_poly(1) == P(1, 1)
        assert families.ak_poly(2) == P(2, 2, 1)
        assert families.ak_poly(3) == P(5, 5, 3, 1)

    def test_sequence_check(self):
        assert families.ak_sequence(12).check()

    def test_bad_k(self):
        with pytest.raises(BadParams):
            families.ak_poly(0)


class TestAdd1:
    def test_n2(self):
        curve, line = families.build_add1(2)
        assert curve.degree == 5
        assert curve.coords[0] == T ** 4 * P(1, 1)
        assert families.a_type_at(curve) == 6

    def test_n3_uses_a3(self):
        curve, _ = families.build_add1(3)
        assert curve.coords[0] == T ** 4 * P(5, 5, 3, 1)
        assert families.a_type_at(curve) == 10

    def test_perturbation_drops(self):
        curve, _ = families.build_add1(2, P(2, 1))
        assert families.a_type_at(curve) < 6

    def test_audit(self):
        audit = families.certify_add1(2)
        assert audit.descriptor == {("T(3,4)^4", (0, 1)): 1, ("A1", (0, 1)): 1, ("A6", (0,)): 1}


class TestToe1:
    @pytest.mark.parametrize("n", sorted(TOE1_ORACLE))
    def test_against_oracle(self, n):
        i1, i2, tau, a = TOE1_ORACLE[n]
        sol = families.solve_toe1(n, certify=False)
        assert (sol.i1, sol.i2, sol.tau, sol.a) == (i1, i2, tau, a)

    def test_n2_tricuspidal(self):
        sol = families.solve_toe1(2)
        assert sol.root == Fraction(16, 9)
        assert sol.audit.descriptor_string() == "3 A2"

    def test_n3(self):
        sol = families.solve_toe1(3)
        assert sol.audit.descriptor_string() == "A3 + 2 T(3,5)"
        assert sol.audit.degrees == [6] and sol.audit.genera == [0]

    def test_n4_genus(self):
        sol = families.solve_toe1(4)
        assert sol.audit.genera == [1]
        assert sol.audit.type_counts() == {SingTypeTag(2, 5): 1, SingTypeTag(4, 7): 2}

    def test_wrong_binomial_is_caught(self):
        sol = families.solve_toe1(3, certify=False)
        sol.a[1] = sol.a[1] * 2
        with pytest.raises(CertificationFailure):
            sol.certify(audit=False)


class TestAdd2Add3:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_add2_dichotomy(self, n):
        assert families.add2_tangent_intersection(n, 0) == 2 * n + 1
        assert families.add2_tangent_intersection(n, 1) == 2 * n
        assert families.add2_tangent_intersection(n, Fraction(-2, 7)) == 2 * n

    def test_add2_audit(self):
        audit = singularity_audit([families.build_add2(3, 0)])
        assert audit.descriptor_string() == "T(3,7) + T(4,7)"

    @pytest.mark.parametrize("n", [3, 4])
    def test_add3_dichotomy(self, n):
        assert families.add3_tangent_intersection(n, 0) == 4 * n
        assert families.add3_tangent_intersection(n, 1) == 4 * n - 2

    def test_add3_needs_n3(self):
        with pytest.raises(BadParams):
            families.build_add3(2, 1)

    @pytest.mark.parametrize("a", [2, -1, Fraction(1, 3), 5])
    def test_witnesses(self, a):
        for w in (families.add2_witness(2, a), families.add3_witness(3, a), families.nu3_witness(a)):
            assert w.verify()
            assert w.parametrization_matches()

    def test_zero_parameter_has_no_witness(self):
        with pytest.raises(BadParams):
            families.add2_witness(2, 0)


class TestRecursion:
    def test_vn_step_from_tricuspidal(self):
        step = families.vn_step(families.solve_toe1(2).curve)
        assert step.dual.degree == 3
        assert step.dual_audit.descriptor_string() == "A1"
        assert len(step.lines) == 3
        assert step.union_audit.count("A5") == 3
        assert step.next_degree == 6
        assert step.next_audit.count("T(3,4)") == 3
        assert all(t.is_simple for t in step.next_audit.type_counts() if t != SingTypeTag(3, 4))

    def test_second_step_is_out_of_range(self):
        step = families.vn_step(families.solve_toe1(2).curve)
        with pytest.raises(ResourceBudget):
            families.vn_step(step.next_curve)

    def test_input_check(self):
        with pytest.raises(CertificationFailure):
            families.vn_step(families.solve_toe1(3).curve)


class TestFermat:
    def test_n3(self):
        fd = families.fermat_dual_family(3, 0)
        assert fd.audit.descriptor_string() == "9 A2"
        assert fd.extra_type() == {}

    def test_n3_lines(self):
        fd = families.fermat_dual_family(3, 3)
        for k in (1, 2, 3):
            assert fd.audit.count("T(2,3)^2", (0, k)) == 3
        for j, k in combinations((1, 2, 3), 2):
            assert fd.audit.count("A1", (j, k)) == 1

    def test_too_large(self):
        with pytest.raises(ResourceBudget):
            families.fermat_dual_family(5, 0)

    def test_budget_env(self, monkeypatch):
        monkeypatch.setenv("RIGIDCURVE_BUDGET", "6")
        with pytest.raises(ResourceBudget):
            families.fermat_dual_family(4, 0)


class TestRigit:
    def test_examples(self):
        assert families.rigit_orbit_analysis(5, (0, 1), (2, 3)) == (True, 2)
        assert families.rigit_orbit_analysis(7, (0, 1), (0, 2))[1] == 3
        assert families.rigit_orbit_analysis(3, (0, 1), (1, 2))[1] == 1

    @pytest.mark.parametrize("n", [3, 5, 7, 9])
    def test_equivalence_relation(self, n):
        pairs = list(combinations(range(n), 2))
        rel = {(p, q): families.rigit_equivalent(n, p, q) for p in pairs for q in pairs}
        assert all(rel[(p, p)] for p in pairs)
        assert all(rel[(p, q)] == rel[(q, p)] for p in pairs for q in pairs)
        assert all(rel[(p, r)] for p in pairs for q in pairs for r in pairs
                   if rel[(p, q)] and rel[(q, r)])
        assert len(families.rigit_classes(n)) == (n - 1) // 2

    def test_order_within_pair_is_irrelevant(self):
        assert families.rigit_equivalent(7, (1, 4), (4, 1))

    @pytest.mark.parametrize("args", [(4, (0, 1), (1, 2)), (5, (1, 1), (0, 2)), (5, (0, 5), (1, 2))])
    def test_bad_residues(self, args):
        with pytest.raises(BadResidues):
            families.rigit_orbit_analysis(*args)


class TestQuartics:
    def test_three_cusps(self):
        assert families.quartic_stratum_tools((0, 3, 0, 0, 0, 0, 0, 0, 0)) == (8, True)

    def test_smooth(self):
        assert families.quartic_stratum_tools((0,) * 9) == (14, False)

    def test_bound(self):
        with pytest.raises(TypeBoundViolated):
            families.quartic_stratum_tools((4, 0, 0, 0, 0, 0, 0, 0, 0))

    def test_enumeration(self):
        found = {s for _, s in families.enumerate_rigid_candidates()}
        assert found == {"3 A2", "A2 + A4", "A6", "T(3,4)"}


class TestCatalog:
    def test_size_and_classes(self):
        cat = families.catalog_small_degree()
        assert len(cat) == 26
        assert [e.name for e in cat if e.rigidity_class == 2] == ["II1", "II2"]

    def test_entry_i22(self):
        entry = {e.name: e for e in families.catalog_small_degree()}["I22"]
        assert entry.degrees == [4] and entry.type_string() == "3 A2"

    def test_entry_i16_pencil(self):
        entry = {e.name: e for e in families.catalog_small_degree()}["I16"]
        assert entry.type_string() == "A7"
        q0, q1 = entry.representatives[0]
        assert q1.implicit_form() == (q0.implicit_form() + Z3 * Z3).normalize() or \
            q1.implicit_form() == (q0.implicit_form() - Z3 * Z3).normalize()

    def test_wire(self):
        entry = {e.name: e for e in families.catalog_small_degree()}["II2"]
        wire = entry.to_wire()
        assert wire["rigidity_class"] == 2
        assert wire["stype"] == [{"type": "T(3,4)", "components": [0], "count": 1, "essential": True}]

    def test_genus_bookkeeping_rejects_overfull(self):
        with pytest.raises(BadParams):
            families.FamilyDescriptor("bad", [3], [0], {("A2", (0,)): 2})
