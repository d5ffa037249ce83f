from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hskein.ring import (
    LaurentPoly, PolyParseError, RPoly, UPoly, cyclotomic_q2, equal_up_to_unit, geometric_sum, specialize,
)
from strategies import Q, Z, laurent, rpoly, same, to_sympy

P = RPoly.parse


@pytest.mark.parametrize("a, b, want", [
    ("q - q^-1", "q^-1 - q", "0"),
    ("q^2", "0", "q^2"),
    ("1 + z*q", "q^2 - 1", "q^2 + z*q"),
])
def test_add_examples(a, b, want):
    assert P(a) + P(b) == P(want)


@pytest.mark.parametrize("a, b, want", [
    ("q - q^-1", "q + q^-1", "q^2 - q^-2"),
    ("z*(q^-1 - q)", "0", "0"),
    ("1 + q", "1 - q", "1 - q^2"),
])
def test_mul_examples(a, b, want):
    assert P(a) * P(b) == P(want)


def test_specialize_examples():
    assert specialize(P("q^2 - 1"), 1, None) == RPoly()
    assert specialize(P("q^2 - 1 + z*q"), None, 0) == LaurentPoly.parse("q^2 - 1")
    assert specialize(P("z*q*(1 + q)"), 1, 1) == 2


def test_specialize_rejects_q_zero():
    with pytest.raises(ValueError):
        specialize(P("q"), 0, 0)


@pytest.mark.parametrize("lam, want", [(0, "0"), (1, "q^2 - 1"), (2, "q^4 - 1")])
def test_cyclotomic(lam, want):
    assert cyclotomic_q2(lam) == LaurentPoly.parse(want)


@pytest.mark.parametrize("eps, want", [(0, "0"), (1, "1 + q"), (-1, "-q^-1 - q^-2")])
def test_geometric_sum_examples(eps, want):
    assert geometric_sum(eps) == P(want)


@pytest.mark.parametrize("eps", range(-10, 11))
def test_geometric_sum_identity(eps):
    assert geometric_sum(eps) * P("1 - q") + RPoly.q(2 * eps) == RPoly(1)
    assert geometric_sum(eps, 2) * P("1 - q^2") + RPoly.q(2 * eps) == RPoly(1)


@settings(max_examples=10_000)
@given(rpoly(), rpoly(), rpoly())
def test_ring_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == RPoly() and a * RPoly(1) == a


@given(rpoly(), rpoly())
def test_products_agree_with_sympy(a, b):
    assert same(to_sympy(a * b), to_sympy(a) * to_sympy(b))
    assert same(to_sympy(a + b), to_sympy(a) + to_sympy(b))


@given(rpoly(), rpoly(), st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3)]),
       st.sampled_from([Fraction(0), Fraction(1), Fraction(-2, 5)]))
def test_specialize_is_a_homomorphism(a, b, qv, zv):
    assert specialize(a * b, qv, zv) == specialize(a, qv, zv) * specialize(b, qv, zv)
    assert specialize(a, qv, zv) == to_sympy(a).subs({Q: qv, Z: zv})


@given(laurent())
def test_unit_recognition(p):
    singleton = len(p.terms) == 1 and abs(next(iter(p.terms.values()))) == 1
    assert p.is_unit() == singleton


@given(rpoly(), st.integers(-5, 5), st.sampled_from([1, -1]))
def test_equal_up_to_unit(a, k, sign):
    assert equal_up_to_unit(RPoly.q(k) * a * RPoly(sign), a)


@given(rpoly())
def test_render_parse_round_trip(a):
    assert RPoly.parse(str(a)) == a


def test_upoly_round_trip():
    p = UPoly.parse("(z*q + u*q^2 - u)")
    assert UPoly.parse(str(p)) == p
    assert p.coeff(1) == P("q^2 - 1")


@pytest.mark.parametrize("bad", ["q^", "2 +* q", "q^x", "(q + 1", "w"])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        RPoly.parse(bad)
