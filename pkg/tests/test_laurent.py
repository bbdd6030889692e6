from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcpline.laurent import ONE, ZERO, LaurentPoly, P, S, T, lp_sum, unit_circle

exps = st.integers(-4, 4)
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(st.tuples(exps, exps, exps), coefs, max_size=4).map(LaurentPoly)
points = st.tuples(
    st.floats(1.1, 4.0),
    st.floats(0.2, 4.0),
    st.floats(0.0, 6.283185307179586).map(unit_circle),
)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@given(polys, polys)
def test_conj_is_involutive_ring_map(a, b):
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


def _magnitude(a: LaurentPoly, q: float, c: float) -> float:
    """Sum of |term| values; the natural scale for cancellation error."""
    return sum(abs(float(k)) * q ** -eP * c ** (eS / 2) for (eP, eS, _), k in a.terms.items())


@settings(max_examples=60)
@given(polys, polys, points)
def test_evaluation_is_homomorphism(a, b, pt):
    q, c, t = pt
    scale = 1 + _magnitude(a, q, c) * _magnitude(b, q, c) + _magnitude(a, q, c) + _magnitude(b, q, c)
    ea, eb = a.evaluate(q, c, t), b.evaluate(q, c, t)
    assert abs((a * b).evaluate(q, c, t) - ea * eb) <= 1e-12 * scale
    assert abs((a + b).evaluate(q, c, t) - ea - eb) <= 1e-12 * scale


@settings(max_examples=60)
@given(polys, points)
def test_conj_evaluates_to_t_inverse(a, pt):
    q, c, t = pt
    # real coefficients: T -> T^-1 is complex conjugation on the circle
    assert cmath.isclose(a.conj().evaluate(q, c, t), a.evaluate(q, c, t).conjugate(), abs_tol=1e-9)


def test_worked_examples():
    assert (P**-1 + S**2).evaluate(2, 3) == pytest.approx(5.0)
    assert (1 - P**2).evaluate(2, 1) == pytest.approx(0.75)
    assert (S * T).conj() == S * T**-1
    assert str(S * T**-2) == "S*T^-2"
    assert str(1 - S**2) == "1 - S^2"


def test_zero_terms_dropped_and_hashable():
    x = LaurentPoly({(1, 0, 0): Fraction(2), (0, 0, 0): 0})
    assert len(x) == 1
    assert len({x, LaurentPoly({(1, 0, 0): 2})}) == 1
    assert lp_sum([P, -P]).is_zero()


def test_domain_errors():
    with pytest.raises(ValueError):
        P.evaluate(1.0, 1.0)
    with pytest.raises(ValueError):
        S.evaluate(2.0, 0.0)
    with pytest.raises(ValueError):
        T.evaluate(2.0, 1.0, 2.0)
    with pytest.raises((ValueError, ZeroDivisionError)):
        (P + ONE) ** -1
    with pytest.raises(OverflowError):
        LaurentPoly.monomial(eP=2**62)
