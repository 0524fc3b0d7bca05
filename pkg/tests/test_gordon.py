from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from qtb.bimodule import ShuffleElement1, kappa_map
from qtb.gordon import (
    PRIMES,
    GordonCounter,
    Window,
    _contents_denominator,
    _ModContext,
    _multisets,
    _rho_functional,
    _to_mod,
    cell_contents,
    expected_dimension,
    filtration_vanishing,
    gordon_dimensions,
    graded_quotient_dimension,
    is_upper_triangular,
    lex_order,
    rho,
    rho_matrix,
    rho_value,
    witness_element,
)
from qtb.laurent import LaurentPoly
from qtb.params import ParameterError
from qtb.partitions import Partition, partitions


def _element(params, poly):
    return ShuffleElement1(params, (params.one,), poly)


def test_rho_of_simple_pole(exact):
    # 1/(x - u) -> residue 1 at the single cell
    assert rho_value(Partition((1,)), _element(exact, LaurentPoly.const(1, Fraction(1)))) == 1


def test_rho_of_first_kappa(exact):
    K = kappa_map(exact, Partition((1,)))
    assert rho_value(Partition((1,)), K) == exact.c1 * (1 / exact.q - exact.q)


def test_partial_specialization_leaves_free_variables(exact):
    G = witness_element(exact, Partition((2, 1)))
    r = rho(Partition((1,)), G)
    assert r.nvars == 2


def test_cell_contents(exact):
    cs = cell_contents(exact, (Partition((2, 1)),), (Fraction(1),))
    assert sorted(cs) == sorted([Fraction(1), exact.q1, exact.q3])


def test_lex_order_increasing():
    assert lex_order(partitions(3)) == [Partition((1, 1, 1)), Partition((2, 1)), Partition((3,))]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_witness_basis_is_triangular(exact, n):
    basis = [witness_element(exact, lam) for lam in lex_order(partitions(n))]
    assert is_upper_triangular(rho_matrix(exact, n, basis))


@pytest.mark.parametrize("lam,m", [((2,), 1), ((1, 1), 1), ((2, 1), 2), ((1, 1, 1), 1)])
def test_rho_kills_lower_filtration(exact, lam, m):
    assert filtration_vanishing(exact, Partition(lam), m)


def test_filtration_needs_larger_partition(exact):
    with pytest.raises(ValueError):
        filtration_vanishing(exact, Partition((1,)), 1)


def test_modular_functional_matches_exact_rho(exact):
    P = PRIMES[0]
    ctx = _ModContext(exact, (Fraction(1),), P, 0)
    mons = _multisets(0, 2, 2)
    for lam in partitions(2):
        func = _rho_functional(ctx, (lam,), mons, _contents_denominator(ctx, (lam,)))
        for mu, val in zip(mons, func):
            poly = LaurentPoly(2, {e: Fraction(1) for e in set(itertools.permutations(mu))})
            assert _to_mod(rho_value(lam, _element(exact, poly)), P) == int(val)


def test_modular_count_requires_exact_parameters(flt):
    with pytest.raises(ParameterError):
        GordonCounter(flt)


def test_window_ranges():
    w = Window()
    assert w.exponent_range(3, 1) == (1, 5)
    assert w.widened(2).exponent_range(3, 1) == (-1, 7)


@pytest.mark.parametrize("n", range(0, 5))
def test_dimension_is_partition_count(exact, n):
    rep = graded_quotient_dimension(exact, n)
    assert rep.saturated
    assert rep.dim == expected_dimension(n) == len(partitions(n))
    assert rep.to_json()["pass"]


def test_two_point_dimensions(exact):
    reps = gordon_dimensions(exact, 2, us=(1, Fraction(5, 7)))
    assert [r.dim for r in reps] == [1, 2, 5]
    assert all(r.passed for r in reps)
