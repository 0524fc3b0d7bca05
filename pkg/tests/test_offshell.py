from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from qtb.bethe import closed_form_root, perturbation, solve_all
from qtb.fock import integral_operator
from qtb.laurent import LaurentPoly
from qtb.offshell import (
    alpha_factor,
    boson_vacuum_covector,
    build_offshell,
    check_eigenvector,
    degree_one_covector,
    epsilon_q1,
    epsilon_q3,
    evaluate_epsilon,
    kappa_covector,
    kn_lhs,
    kn_rhs,
    left_eigen_residual,
    proportionality_defect,
    verify_Kn,
)
from qtb.partitions import Partition, partitions


def test_epsilon_rows(exact):
    assert epsilon_q3(exact, Partition((1,))).numerator == LaurentPoly.const(1, Fraction(1))
    x0, x1 = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    t = exact.q3
    assert epsilon_q3(exact, Partition((2,))).numerator == (x0 - x1.scale(t)) * (x0 - x1.scale(1 / t))
    t = exact.q1
    assert epsilon_q1(exact, Partition((2,))).numerator == (x0 - x1.scale(t)) * (x0 - x1.scale(1 / t))


def test_size_mismatch_evaluates_to_zero(flt):
    assert evaluate_epsilon(flt, Partition((2,)), [mpmath.mpc(2)]) == 0


def test_alpha_factor(exact):
    p = Fraction(1, 5)
    assert alpha_factor(exact, p, [2, 1]) == (1 - (p * exact.q) ** 2) * (1 - p * exact.q)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_kn_identity(exact, degree):
    rep = verify_Kn(exact, degree)
    assert rep["pass"], [r for r in rep["records"] if not r["pass"]]
    names = {r["name"] for r in rep["records"]}
    assert {"kn-coefficient", "sigma-h1", "regular"} <= names


def test_kn_reports_independent_checks(exact):
    rep = verify_Kn(exact, 2)
    flags = {(r["name"], r["where"]): r["independent"] for r in rep["records"]}
    assert flags[("kn-coefficient", "(1,1)")] is True
    assert flags[("kn-coefficient", "(2)")] is False
    assert flags[("sigma-h1", "1")] is True


def test_kn_degree_one_by_hand(exact):
    # (1/N_1) sigma(h_{-1}) = c1 / N_1 and the right side is h~-weight / (q1 - 1)
    mu = Partition((1,))
    assert kn_lhs(exact, mu) == kn_rhs(exact, mu)
    w = (1 - exact.q1) * exact.q * exact.q3
    assert kn_rhs(exact, mu).numerator.constant_term() == w / (exact.q1 - 1)


def test_vacuum_covector(exact):
    v = boson_vacuum_covector(exact)
    assert v.as_list() == [1]
    assert build_offshell(exact, [], Fraction(1, 7)).as_list() == [1]


def test_degree_one_covector(flt, p_twist):
    a = closed_form_root(flt, p_twist)
    w = build_offshell(flt, [a], p_twist).as_list()
    ref = degree_one_covector(flt, p_twist)
    # single term lambda = (1), eps = 1: proportional with factor phi(u, a)/(q1 - 1)
    assert abs(w[0] - ref * flt.phi(1, a) / (flt.q1 - 1)) < 1e-30


@pytest.mark.parametrize("n", [1, 2])
def test_left_eigenvector_at_bethe_states(flt, p_twist, n):
    M = integral_operator(flt, 1, p_twist, n)
    for s in solve_all(flt, (1,), p_twist, n):
        w = build_offshell(flt, s.roots, p_twist).as_list()
        assert left_eigen_residual(flt, w, M, s.eigenvalue) < 1e-25
        moved = [a + d for a, d in zip(s.roots, perturbation(n))]
        assert check_eigenvector(flt, moved, p_twist)["residual"] > 1e-3


def test_left_and_right_images_agree_up_to_scale(flt, p_twist):
    for s in solve_all(flt, (1,), p_twist, 2):
        left = build_offshell(flt, s.roots, p_twist, side="left").as_list()
        right = build_offshell(flt, s.roots, p_twist, side="right").as_list()
        assert proportionality_defect(left, right) < 1e-30


def test_proportional_to_kappa_evaluation(flt, p_twist):
    for s in solve_all(flt, (1,), p_twist, 2):
        w = build_offshell(flt, s.roots, p_twist).as_list()
        k = kappa_covector(flt, s.roots).as_list()
        assert proportionality_defect(w, k) < 1e-25


def test_json_keyed_by_partition(flt, p_twist):
    s = solve_all(flt, (1,), p_twist, 2)[0]
    js = build_offshell(flt, s.roots, p_twist).to_json()
    assert set(js) == {str(lam) for lam in partitions(2)}
