from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, T, Z2, Z3
from rigidcurve import families
from rigidcurve.curvelocal import ParamCurve
from rigidcurve.errors import SingularMatrix
from rigidcurve.projgeom import ImplicitCurve, ProjMap, apply_map
from rigidcurve.rigidity import (
    NotSeparated,
    Witness,
    curves_equal,
    rigidity_report,
    separating_invariant,
    verify_witness,
)


class TestEquality:
    def test_examples(self):
        c = families.build_parx(1)
        assert curves_equal(c, c)
        assert not curves_equal(families.build_parx(1), families.build_parx(2))

    def test_unordered(self):
        a = [families.build_parx(1), ImplicitCurve(Z3)]
        assert curves_equal(a, list(reversed(a)))


class TestWitness:
    @pytest.mark.parametrize("lam", [2, -3, Fraction(1, 2)])
    def test_pencil_witness(self, lam):
        q0, q1 = families.pen1_member(0), families.pen1_member(1)
        h = ProjMap.diagonal(lam, Fraction(lam) ** 2, 1)
        assert verify_witness(Witness(h, [q0, q1], [q0, families.pen1_member(lam)]))

    def test_add2_a5(self):
        assert verify_witness(families.add2_witness(2, 5))

    def test_identity_between_distinct(self):
        w = Witness(ProjMap.identity(), families.build_nu3(0), families.build_nu3(1))
        assert not verify_witness(w)

    def test_singular_map(self):
        with pytest.raises(SingularMatrix):
            Witness([[1, 0, 0], [0, 0, 0], [0, 0, 1]], families.build_nu3(0), families.build_nu3(1))


class TestSeparation:
    def test_nu3_flex_count(self):
        cert = separating_invariant(families.build_nu3(0), families.build_nu3(1))
        assert cert.invariant == "flex-count"
        assert (cert.value_a, cert.value_b) == ([(4, 1)], [(4, 2)])

    def test_add2_intersection_profile(self):
        cert = separating_invariant(families.build_add2(2, 0), families.build_add2(2, 1))
        assert cert.invariant == "intersection-multiplicity"
        tails = sorted(v[-1] for v in cert.value_a), sorted(v[-1] for v in cert.value_b)
        assert 5 in tails[0] and 4 in tails[1]

    def test_parx_flex_membership(self):
        a = [families.build_parx(0), ImplicitCurve(Z2)]
        b = [families.build_parx(1), ImplicitCurve(Z2)]
        assert separating_invariant(a, b).invariant == "flex-membership"

    def test_image_is_not_separated(self):
        c = families.build_nu3(1)
        with pytest.raises(NotSeparated):
            separating_invariant(c, apply_map(ProjMap([[1, 2, 0], [0, 1, 3], [1, 0, 1]]), c))

    @given(st.integers(-4, 4).filter(lambda x: x != 0))
    @settings(max_examples=10, deadline=None)
    def test_witness_consistency(self, a):
        w = families.nu3_witness(a)
        assert w.verify()
        with pytest.raises(NotSeparated):
            separating_invariant(w.source, w.target)


class TestReport:
    def test_ii2(self):
        members = [[families.build_nu3(a)] for a in (0, 1, 5)]
        rep = rigidity_report(members, [(2, 1, families.nu3_witness(5))])
        assert rep.classes == [[0], [1, 2]]
        assert rep.rigidity_class == 2
        assert all(p["status"] != "undecided" for p in rep.pairs)

    def test_ii1(self):
        line = ImplicitCurve(Z2)
        members = [[families.build_parx(a), line] for a in (0, 1, 2)]
        w = families._parx_witness(2, line)
        rep = rigidity_report(members, [(1, 2, w)])
        assert rep.upper_bound == 2 and rep.lower_bound == 2

    def test_singleton(self):
        rep = rigidity_report([[families.build_nu2()]])
        assert rep.rigidity_class == 1

    def test_monotone(self):
        members = [[families.build_nu3(a)] for a in (1, 2, 3)]
        bare = rigidity_report(members)
        one = rigidity_report(members, [(1, 0, families.nu3_witness(2))])
        both = rigidity_report(members, [(1, 0, families.nu3_witness(2)),
                                         (2, 0, families.nu3_witness(3))])
        assert bare.upper_bound >= one.upper_bound >= both.upper_bound == 1
        assert bare.lower_bound == 1
        assert "undecided" in {p["status"] for p in bare.pairs}

    def test_failed_witness_ignored(self):
        members = [[families.build_nu3(0)], [families.build_nu3(1)]]
        bogus = Witness(ProjMap.identity(), members[0], members[1])
        rep = rigidity_report(members, [(0, 1, bogus)])
        assert rep.classes == [[0], [1]]

    def test_wire(self):
        rep = rigidity_report([[families.build_nu3(0)], [families.build_nu3(1)]], names=["C0", "C1"])
        wire = rep.to_wire()
        assert wire["classes"] == [["C0"], ["C1"]]
        assert wire["pairs"][0]["evidence"]["invariant"] == "flex-count"


def test_reparametrization():
    w = families.nu3_witness(3)
    mapped = w.mapped_parametrization()[0]
    assert isinstance(mapped, ParamCurve)
    assert w.parametrization_matches()
