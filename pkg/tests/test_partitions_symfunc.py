from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtb.partitions import Partition, multipartitions, partition_count, partitions
from qtb.symfunc import check_inverse, evaluate_m, m_coefficient_in_p, m_in_p, p_to_m


def test_partition_counts():
    assert [partition_count(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert [len(partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    # k-tuples of partitions: coefficients of prod (1-x^i)^{-2}
    assert [len(multipartitions(n, 2)) for n in range(5)] == [1, 2, 5, 10, 20]


def test_partition_normalises_and_conjugates():
    lam = Partition((3, 2, 1, 0))
    assert lam.parts == (3, 2, 1)
    with pytest.raises(ValueError):
        Partition((1, 3))
    assert lam.conjugate() == Partition((3, 2, 1))
    assert Partition((4, 1)).conjugate() == Partition((2, 1, 1, 1))


def test_contents():
    q1, q3, u = Fraction(3), Fraction(1, 12), Fraction(1)
    assert sorted(Partition((2, 1)).contents(q1, q3, u)) == sorted([u, q1 * u, q3 * u])


def test_boxes():
    lam = Partition((2, 1))
    # rows are 1-based
    assert lam.add_box(1) == Partition((3, 1))
    assert lam.add_box(2) == Partition((2, 2))
    assert lam.add_box(3) == Partition((2, 1, 1))
    assert lam.remove_box(2) == Partition((2,))
    assert lam.remove_box(1) == Partition((1, 1))


@pytest.mark.parametrize("n", range(0, 7))
def test_transition_matrices_are_inverse(n):
    assert check_inverse(n)


def test_m_in_p_low_degree():
    # m_{11} = (p_1^2 - p_2)/2 and m_2 = p_2
    assert m_in_p(Partition((1, 1))) == {Partition((1, 1)): Fraction(1, 2), Partition((2,)): Fraction(-1, 2)}
    assert m_coefficient_in_p(Partition((2,)), Partition((2,))) == 1


def test_evaluate_m():
    xs = [Fraction(2), Fraction(3), Fraction(5)]
    assert evaluate_m(Partition((1, 1)), xs) == 6 + 10 + 15
    assert evaluate_m(Partition((2,)), xs) == 4 + 9 + 25


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 5), max_size=5))
def test_conjugation_is_an_involution(parts):
    lam = Partition(tuple(sorted(parts, reverse=True)))
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.lists(st.fractions(-3, 3, max_denominator=4), min_size=4, max_size=4))
def test_p_to_m_matches_evaluation(n, xs):
    # p_mu = sum_lambda M[mu][lambda] m_lambda, checked at a point
    basis = partitions(n)
    table = p_to_m(n)
    for i, mu in enumerate(basis):
        lhs = Fraction(1)
        for r in mu.parts:
            lhs *= sum(v ** r for v in xs)
        rhs = sum(table[i][j] * evaluate_m(lam, xs) for j, lam in enumerate(basis))
        assert lhs == rhs
