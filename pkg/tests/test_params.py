from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from qtb.params import (
    EXACT,
    FLOAT,
    ParameterError,
    Params,
    PoleError,
    default_precision,
    format_scalar,
    parse_scalar,
)


def test_parse_rational_and_complex():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-2") == Fraction(-2)
    z = parse_scalar("1.5,-2", FLOAT)
    assert z == mpmath.mpc(1.5, -2)
    assert parse_scalar("1/4", FLOAT) == mpmath.mpc(0.25)


def test_parse_rejects_complex_in_exact_mode():
    with pytest.raises(ParameterError):
        parse_scalar("1,2", EXACT)
    with pytest.raises(ParameterError):
        parse_scalar("abc", EXACT)


def test_format_round_trip():
    assert parse_scalar(format_scalar(Fraction(-7, 3))) == Fraction(-7, 3)


def test_derived_parameters(exact):
    assert exact.q2 == 4
    assert exact.q3 == Fraction(1, 12)
    assert exact.q1 * exact.q2 * exact.q3 == 1
    assert exact.c1 == exact.q3 / ((1 - exact.q1) * (1 - exact.q3))
    assert exact.kappa(1) == (1 - 3) * (1 - 4) * (1 - Fraction(1, 12))


def test_gamma_one_point(exact):
    # gamma_1 = u / ((1 - q1)(1 - q3)) for a single evaluation point
    g = exact.gamma(1, (Fraction(1),))
    assert g == 1 / ((1 - exact.q1) * (1 - exact.q3))
    assert exact.gamma(1, (1, 2)) == 3 * g


@pytest.mark.parametrize("q1", ["1", "1/4", "-1", "1/2"])
def test_resonant_parameters_rejected(q1):
    # q1 = 1/4 gives q3 = 1, q1 = 1/2 gives q1^2 q2 = 1
    with pytest.raises(ParameterError):
        Params(Fraction(2), Fraction(q1))


def test_phi_pole_and_limits(exact):
    with pytest.raises(PoleError):
        exact.phi(1, Fraction(1))
    assert exact.phi_limit("0") == exact.q
    assert exact.phi_limit("inf") == 1 / exact.q
    assert exact.phi([1, 2], Fraction(5)) == exact.phi(1, Fraction(5)) * exact.phi(2, Fraction(5))


def test_json_round_trip(exact, flt):
    assert Params.from_json(exact.to_json()) == exact
    back = Params.from_json(flt.to_json())
    assert abs(back.q1 - flt.q1) < 1e-30


def test_precision_from_environment(monkeypatch):
    monkeypatch.setenv("QTB_PRECISION", "55")
    assert default_precision() == 55
    monkeypatch.delenv("QTB_PRECISION")
    assert default_precision() == 40


def test_float_mode_switch(exact):
    f = exact.with_mode(FLOAT, 30)
    assert abs(f.q3 - mpmath.mpf(1) / 12) < 1e-25
    with pytest.raises(ParameterError):
        f.with_mode(EXACT)
