from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from qtb import linalg
from qtb.bethe import closed_form_root
from qtb.fock import (
    BosonFock,
    L_vacuum_diagonal,
    L_vacuum_series,
    L_vacuum_value,
    PartitionFock,
    change_of_basis,
    integral_operator,
    to_partition_basis,
)
from qtb.partitions import Partition, partitions
from qtb.relations import all_passed, boson_relations, fock_relations, l_operator_relations


def test_partition_fock_relations(exact):
    records = fock_relations(exact, max_mode=1, max_degree=2)
    assert all_passed(records), [r for r in records if not r["pass"]]


def test_boson_relations_and_boundary_identities(exact):
    records = boson_relations(exact, max_degree=3)
    names = {r["name"] for r in records}
    assert {"heisenberg", "e-perp-lower", "e-perp-upper"} <= names
    assert all_passed(records)


def test_l_operator_relations(exact):
    assert all_passed(l_operator_relations(exact, max_degree=2))


def test_e_adds_a_box(exact):
    f = PartitionFock(exact, 1)
    v = f.e_mode(0, {Partition(()): Fraction(1)})
    assert set(v) == {Partition((1,))}


def test_vacuum_h_eigenvalue(exact):
    f = PartitionFock(exact, 1)
    assert f.h_eigenvalue(Partition(()), 1) == exact.gamma(1, (1,))
    assert f.h_eigenvalue_from_psi(Partition((2, 1)), 2) == f.h_eigenvalue(Partition((2, 1)), 2)


def test_degree_zero_block_is_gamma(flt, p_twist):
    M = integral_operator(flt, 1, p_twist, 0)
    assert abs(M[0][0] - flt.gamma(1, (1,))) < 1e-35


@pytest.mark.parametrize("n", [1, 2, 3])
def test_untwisted_spectrum_is_given_by_contents(flt, n):
    M = integral_operator(flt, 1, 0, n)
    evs = linalg.eigenvalues(M)
    g = flt.gamma(1, (1,))
    expected = [g - mpmath.fsum(lam.contents(flt.q1, flt.q3, flt.scalar(1))) for lam in partitions(n)]
    assert linalg.match_multisets(evs, expected) < 1e-30


def test_untwisted_block_is_diagonal_in_partition_basis(flt):
    M = to_partition_basis(flt, 1, 3, integral_operator(flt, 1, 0, 3))
    off = max(abs(M[i][j]) for i in range(3) for j in range(3) if i != j)
    assert off < 1e-30


def test_one_box_block_matches_closed_form(flt, p_twist):
    M = integral_operator(flt, 1, p_twist, 1)
    a = closed_form_root(flt, p_twist)
    assert abs(M[0][0] - (-a + flt.gamma(1, (1,)))) < 1e-30


def test_divergent_twist_rejected(flt):
    with pytest.raises(ValueError):
        integral_operator(flt, 1, flt.q * 1.01, 2)


def test_change_of_basis_is_invertible(exact):
    for n in range(4):
        assert linalg.rank(exact, change_of_basis(exact, 1, n)) == len(partitions(n))


def test_boson_norm(exact):
    bos = BosonFock(exact, 1)
    c1 = bos.commutator_constant(1)
    assert bos.norm(Partition((1, 1))) == 2 * c1 ** 2


def test_l_series_matches_closed_form(exact):
    f = exact.with_mode("float", 40)
    diag = L_vacuum_diagonal(exact, 7, 1, 2)
    vac = L_vacuum_value(f, 7, 1, 90)
    for lam, val in diag.items():
        series = L_vacuum_series(f, 7, 1, lam, 90) / vac
        assert abs(series - mpmath.mpf(val.numerator) / val.denominator) < 1e-20


def test_l_vanishes_on_resonant_partition(exact):
    # u_L = q1 u' kills every partition containing the cell of content q1 u'
    diag = L_vacuum_diagonal(exact, exact.q1, 1, 2)
    assert diag[Partition((2,))] == 0
    assert diag[Partition((1, 1))] != 0
