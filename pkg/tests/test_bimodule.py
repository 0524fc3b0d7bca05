from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtb.bimodule import (
    ShuffleElement1,
    act_e,
    act_f,
    act_h,
    in_N,
    is_member,
    jp_spanning,
    kappa_map,
    left_mult,
    pw_from_sh0,
    pw_from_sh1,
    pw_left,
    pw_right,
    regular_at_infinity,
    regular_at_zero,
    right_mult,
    vanishes_at_zero,
)
from qtb.partitions import Partition, partitions
from qtb.relations import all_passed, bimodule_relations
from qtb.shuffle import epsilon_element, generator, sigma_h_perp_minus


def test_unit_and_first_element(exact):
    one = ShuffleElement1.unit(exact, (1,))
    g = act_e(0, one)
    assert g.n == 1
    # e_0 . 1 = c1 phi(u, x): numerator c1 (x/q - q u), denominator (x - u)
    pt = [Fraction(5)]
    assert g.evaluate(pt) == exact.c1 * exact.phi(1, Fraction(5))


def test_right_action_is_an_action(exact):
    one = ShuffleElement1.unit(exact, (1,))
    G = act_e(1, one)
    a, b = generator(exact, 0), generator(exact, -1)
    assert right_mult(right_mult(G, a), b) == right_mult(G, a * b)


def test_left_action_is_an_action(exact):
    one = ShuffleElement1.unit(exact, (1,))
    a, b = generator(exact, 1), generator(exact, 0)
    assert left_mult(a, left_mult(b, one)) == left_mult(a * b, one)


def test_left_and_right_actions_commute(exact):
    one = ShuffleElement1.unit(exact, (1,))
    G = act_e(0, one)
    a, b = generator(exact, 1), epsilon_element(exact, [2])
    assert left_mult(a, right_mult(G, b)) == right_mult(left_mult(a, G), b)


def test_actions_preserve_membership(exact):
    one = ShuffleElement1.unit(exact, (1,))
    G = right_mult(act_e(1, act_e(0, one)), generator(exact, -1))
    assert G.n == 3
    assert is_member(G)[0]


def test_h_acts_diagonally(exact):
    one = ShuffleElement1.unit(exact, (1,))
    G = act_e(0, one)
    pt = [Fraction(7, 2)]
    expected = (exact.gamma(1, (1,)) - pt[0]) * G.evaluate(pt)
    assert act_h(1, G).evaluate(pt) == expected
    with pytest.raises(ValueError):
        act_h(0, G)


def test_f_lowers_size(exact):
    one = ShuffleElement1.unit(exact, (1,))
    assert act_f(0, one).n == 0 and act_f(0, one).is_zero()
    assert act_f(0, act_e(0, one)).n == 0


def test_relation_suite(exact):
    assert all_passed(bimodule_relations(exact, max_mode=1, max_size=1))


@pytest.mark.parametrize("n", range(0, 4))
def test_kappa_basis_lies_in_N(exact, n):
    for lam in partitions(n):
        K = kappa_map(exact, lam)
        assert K.n == n
        assert all(in_N(K).values()), lam


def test_non_N_element_detected(exact):
    one = ShuffleElement1.unit(exact, (1,))
    G = act_e(3, one)  # grows too fast at infinity
    assert not regular_at_infinity(G)
    G = act_e(-2, one)  # blows up at zero
    assert not regular_at_zero(G)
    assert not vanishes_at_zero(act_e(0, one))  # tends to c1 q at t -> 0


def test_kappa_first_element(exact):
    # kappa(h_{-1}|0>) = sigma(h_{-1}) * 1 - q 1 * sigma(h_{-1})
    one = ShuffleElement1.unit(exact, (1,))
    s = sigma_h_perp_minus(exact, [1])
    assert kappa_map(exact, Partition((1,))) == left_mult(s, one) - right_mult(one, s).scale(exact.q)


def test_pointwise_products_match_symbolic(flt):
    one = ShuffleElement1.unit(flt, (1,))
    G = act_e(1, one)
    F = generator(flt, -1)
    a = [mpmath.mpc("0.3", "0.7"), mpmath.mpc("-1.1", "0.2")]
    right = pw_right(flt, pw_from_sh1(G), pw_from_sh0(F))[1](a)
    left = pw_left(flt, (flt.scalar(1),), pw_from_sh0(F), pw_from_sh1(G))[1](a)
    assert abs(right - right_mult(G, F).evaluate(a)) < 1e-30
    assert abs(left - left_mult(F, G).evaluate(a)) < 1e-30


def test_jp_generators_vanish_at_closed_form_root(flt, p_twist):
    from qtb.bethe import closed_form_root

    a = closed_form_root(flt, p_twist)
    span = jp_spanning(flt, (1,), p_twist, 1)
    assert span.max_abs([a]) < 1e-30
    assert span.max_abs([a + mpmath.mpf("0.01")]) > 1e-3


@settings(max_examples=10, deadline=None)
@given(st.integers(-1, 2), st.integers(-1, 1))
def test_right_action_preserves_membership(i, j):
    from qtb.params import default_exact

    P = default_exact()
    G = act_e(i, ShuffleElement1.unit(P, (1,)))
    assert is_member(right_mult(G, generator(P, j)))[0]
