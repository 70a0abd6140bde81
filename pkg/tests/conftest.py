from __future__ import annotations

from fractions import Fraction

import pytest

from rigidcurve.exactalg import TernForm, UniPoly


def P(*coeffs) -> UniPoly:
    """Polynomial from coefficients, lowest degree first."""
    return UniPoly([Fraction(c) for c in coeffs])


T = P(0, 1)
Z1, Z2, Z3 = (TernForm.var(k) for k in range(3))


@pytest.fixture
def t():
    return T


def rational_corpus():
    """Rational plane curves built by the package's families, of degree >= 2."""
    from rigidcurve import families
    from rigidcurve.curvelocal import ParamCurve

    out = [
        ParamCurve(T ** 2, T, P(1)),
        ParamCurve(P(-1, 0, 1), P(0, -1, 0, 1), P(1)),
        ParamCurve(T ** 3, T ** 2, P(1)),
        families.build_parx(1),
        families.build_nu1(),
        families.build_nu2(),
        families.build_nu3(0),
        families.build_nu3(1),
        families.build_add2(2, 0),
        families.build_add2(2, 1),
        families.build_add2(3, 2),
        families.build_add3(3, 1),
        families.build_add1(2)[0],
        families.build_add1(3)[0],
    ]
    return out


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
