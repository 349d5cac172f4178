from fractions import Fraction
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from polyauto.errors import DivisionByZero, FieldMismatch, ZeroInput
from polyauto.poly import parse_scalar
from polyauto.scalar import (QQ, cyclotomic, field_from_json, is_root_of_unity,
                             rational_functions)

from conftest import nonzero_fractions, small_fractions


def cyclo_elements(m):
    K = cyclotomic(m)
    return st.lists(small_fractions, min_size=0, max_size=K.degree + 2).map(
        lambda cs: sum((c * K.zeta ** i for i, c in enumerate(cs)), K.zero))


def ratfun_elements():
    K = rational_functions("x")
    poly = st.lists(small_fractions, max_size=3).map(
        lambda cs: sum((c * K.generator ** i for i, c in enumerate(cs)), K.zero))
    return st.tuples(poly, poly.filter(bool)).map(lambda nd: nd[0] / nd[1])


class TestRationals:
    def test_sum_of_halves_and_thirds(self):
        assert QQ(Fraction(1, 2)) + QQ(Fraction(1, 3)) == Fraction(5, 6)

    def test_orders(self):
        assert is_root_of_unity(QQ(-1), QQ) == 2
        assert is_root_of_unity(QQ(1), QQ) == 1
        assert is_root_of_unity(QQ(2), QQ) is None

    def test_zero_is_not_a_unit(self):
        with pytest.raises(ZeroInput):
            QQ.is_root_of_unity(QQ(0))

    def test_nth_root(self):
        assert QQ.nth_root(Fraction(8, 27), 3) == Fraction(2, 3)
        assert QQ.nth_root(Fraction(-8), 3) == -2
        assert QQ.nth_root(Fraction(2), 2) is None
        assert QQ.nth_root(Fraction(-4), 2) is None

    def test_huge_root_is_exact(self):
        big = Fraction(3 ** 200, 7 ** 100)
        assert QQ.nth_root(big ** 5, 5) == big


class TestCyclotomic:
    def test_zeta_times_zeta_cubed(self):
        # zeta^4 = 1 in Q(zeta_4); sympy reduces t^4 modulo t^2 + 1 independently
        K = cyclotomic(4)
        t = sympy.symbols("t")
        assert sympy.rem(t ** 4, t ** 2 + 1, t) == 1
        assert K.zeta * K.zeta ** 3 == K.one

    def test_zeta_squared_is_minus_one(self):
        K = cyclotomic(4)
        assert K.zeta ** 2 == K(-1)

    def test_zeta_order(self):
        assert cyclotomic(4).is_root_of_unity(cyclotomic(4).zeta) == 4

    @pytest.mark.parametrize("m", [1, 2, 3, 5, 6, 8, 9, 12])
    def test_order_of_powers_matches_brute_force(self, m):
        K = cyclotomic(m)
        L = math.lcm(2, m)
        base = K.zeta if m % 2 == 0 else -K.zeta
        for k in range(L):
            a = base ** k
            brute = next(e for e in range(1, L + 1) if a ** e == K.one)
            assert K.is_root_of_unity(a) == brute

    def test_non_torsion(self):
        K = cyclotomic(6)
        assert K.is_root_of_unity(K.zeta + 1 + K.zeta ** 2) is None
        assert K.is_root_of_unity(K(2)) is None

    @pytest.mark.parametrize("m", [3, 4, 5, 7, 12])
    def test_exponent_reduction(self, m):
        K = cyclotomic(m)
        for k in range(3 * m):
            assert K.zeta ** k == K.zeta ** (k % m)

    def test_representative_degree(self):
        K = cyclotomic(12)
        assert len((K.zeta ** 11).coeffs) <= K.degree

    def test_mixing_fields_is_rejected(self):
        with pytest.raises(FieldMismatch):
            cyclotomic(4).zeta + cyclotomic(3).zeta

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            cyclotomic(5).one / cyclotomic(5).zero

    def test_nth_root_uses_torsion(self):
        K = cyclotomic(4)
        r = K.nth_root(K(-4), 2)
        assert r is not None and r ** 2 == K(-4)

    @given(cyclo_elements(5), cyclo_elements(5))
    def test_field_axioms(self, s, t):
        assert (s + t) - t == s
        if s:
            assert s * (1 / s) == cyclotomic(5).one
            assert s.inverse() * s == 1

    @given(cyclo_elements(8))
    def test_order_property(self, a):
        K = cyclotomic(8)
        if not a:
            return
        d = K.is_root_of_unity(a)
        if d is not None:
            assert a ** d == K.one
            assert all(a ** e != K.one for e in range(1, d))


class TestRationalFunctions:
    def test_inverse(self):
        K = rational_functions("x")
        a = 1 / (K.generator ** 2 + 1)
        assert a == parse_scalar(K, "1/(x^2+1)")
        assert K.format(a) == "1/(x^2 + 1)"

    def test_canonical_form(self):
        K = rational_functions("x")
        x = K.generator
        assert (x ** 2 - 1) / (x - 1) == x + 1
        half = 1 / (2 * x)
        assert half.den == (Fraction(0), Fraction(1))
        assert half.num == (Fraction(1, 2),)

    def test_only_constants_are_roots_of_unity(self):
        K = rational_functions("x")
        assert K.is_root_of_unity(K(-1)) == 2
        assert K.is_root_of_unity(K.generator) is None

    def test_division_by_zero(self):
        K = rational_functions("x")
        with pytest.raises(DivisionByZero):
            K.generator / K.zero

    @given(ratfun_elements(), ratfun_elements())
    def test_field_axioms(self, s, t):
        K = rational_functions("x")
        assert (s + t) - t == s
        if s:
            assert s * (1 / s) == K.one

    def test_json_roundtrip(self):
        for doc in ({"kind": "rationals"}, {"kind": "cyclotomic", "m": 7},
                     {"kind": "rational_functions", "param": "t"}):
            assert field_from_json(doc).to_json() == doc


@given(nonzero_fractions, st.integers(1, 5))
def test_rational_root_roundtrip(c, k):
    assert QQ.nth_root(c ** k, k) ** k == c ** k
