from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtb.fock import BosonFock
from qtb.laurent import LaurentPoly
from qtb.params import FLOAT
from qtb.partitions import Partition
from qtb.relations import all_passed, shuffle_relations
from qtb.shuffle import (
    ShuffleElement0,
    commutator,
    element_is_member,
    elementary_row,
    epsilon_element,
    generator,
    heisenberg_norm,
    serre_witness,
    sigma_e_perp_minus,
    sigma_h_perp_minus,
    wheel_violations,
)


def test_row_element_two_variables(exact):
    t = exact.q3
    el = elementary_row(exact, 2, t)
    x0, x1 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    assert el.numerator == (x0 - x1.scale(t)) * (x0 - x1.scale(1 / t))
    assert el.numerator.is_symmetric()


def test_row_element_of_size_one_is_unit(exact):
    el = epsilon_element(exact, [1])
    assert el.n == 1
    assert el.numerator == LaurentPoly.const(1, Fraction(1))


def test_unit_is_neutral(exact):
    one = ShuffleElement0.unit(exact)
    g = generator(exact, 2)
    assert one * g == g
    assert g * one == g


def test_generators_satisfy_the_wheel_condition(exact):
    prod = generator(exact, 0) * generator(exact, 1) * generator(exact, -1)
    assert prod.n == 3
    assert prod.numerator.is_symmetric()
    assert element_is_member(prod)[0]
    assert wheel_violations(exact, prod.numerator) == []


def test_a_generic_numerator_violates_the_wheel_condition(exact):
    f = LaurentPoly.const(3, Fraction(1))
    assert wheel_violations(exact, f)


def test_serre_witness_vanishes(exact):
    assert serre_witness(exact).numerator.is_zero()


def test_relation_suite(exact):
    assert all_passed(shuffle_relations(exact, max_size=4))


def test_quadratic_relation_between_generators(exact):
    # e(z) e(w) g(z, w) = -e(w) e(z) g(w, z) in modes: x^1 * x^0 and x^0 * x^1 differ
    a = generator(exact, 1) * generator(exact, 0)
    b = generator(exact, 0) * generator(exact, 1)
    assert a != b


def test_e_perp_images(exact):
    assert sigma_e_perp_minus(exact, 1) == generator(exact, 1)
    assert sigma_e_perp_minus(exact, 2) == commutator(generator(exact, 0), generator(exact, 1))
    with pytest.raises(ValueError):
        sigma_e_perp_minus(exact, 0)


def test_h_perp_images_commute(exact):
    a, b = sigma_h_perp_minus(exact, [1]), sigma_h_perp_minus(exact, [2])
    assert (a * b - b * a).is_zero()
    assert sigma_h_perp_minus(exact, [1]) == generator(exact, 0)


def test_h_perp_image_is_multiplicative(exact):
    a = sigma_h_perp_minus(exact, [1])
    assert sigma_h_perp_minus(exact, [1, 1]) == a * a
    assert sigma_h_perp_minus(exact, [2, 1]) == sigma_h_perp_minus(exact, [2]) * a


def test_heisenberg_norm_matches_boson_space(exact):
    bos = BosonFock(exact, 1)
    for lam in (Partition((1,)), Partition((2, 1)), Partition((1, 1, 1))):
        assert heisenberg_norm(exact, lam.parts) == bos.norm(lam)


def test_float_mode_agrees_with_exact(exact):
    f = exact.with_mode(FLOAT, 30)
    pt = [Fraction(5, 3), Fraction(-2, 7), Fraction(9, 4)]
    ex = (epsilon_element(exact, [2]) * generator(exact, 1)).evaluate(pt)
    fl = (epsilon_element(f, [2]) * generator(f, 1)).evaluate([mpmath.mpf(v.numerator) / v.denominator for v in pt])
    assert abs(fl - mpmath.mpf(ex.numerator) / ex.denominator) < 1e-20


@settings(max_examples=15, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_associativity_on_generators(i, j, k):
    from qtb.params import default_exact

    P = default_exact()
    a, b, c = generator(P, i), generator(P, j), generator(P, k)
    assert (a * b) * c == a * (b * c)


@settings(max_examples=15, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2))
def test_products_stay_in_the_algebra(i, j):
    from qtb.params import default_exact

    P = default_exact()
    prod = generator(P, i) * epsilon_element(P, [2]) * generator(P, j)
    assert element_is_member(prod)[0]
