"""Monomial and power-sum symmetric functions: exact transition matrices."""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .partitions import Partition, partitions


def _expand_power_sums(mu: Partition, nvars: int) -> Counter:
    """``p_mu`` in ``nvars`` variables as ``{exponent tuple: coefficient}``."""
    poly = Counter({(0,) * nvars: 1})
    for r in mu.parts:
        new = Counter()
        for e, c in poly.items():
            for i in range(nvars):
                f = list(e)
                f[i] += r
                new[tuple(f)] += c
        poly = new
    return poly


@lru_cache(maxsize=None)
def p_to_m(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer matrix ``A`` with ``p_mu = sum_lambda A[mu][lambda] m_lambda``.

    Rows and columns follow :func:`partitions` order.  Computed by expanding
    ``p_mu`` in ``n`` variables and reading the coefficient of the sorted
    monomial ``x^lambda``.
    """
    lams = partitions(n)
    rows = []
    for mu in lams:
        poly = _expand_power_sums(mu, n)
        rows.append(tuple(poly.get(tuple(lam.parts) + (0,) * (n - lam.length), 0) for lam in lams))
    return tuple(rows)


@lru_cache(maxsize=None)
def m_to_p(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Inverse of :func:`p_to_m`: ``m_lambda = sum_mu B[lambda][mu] p_mu``."""
    from .linalg import fmpq_matrix, fmpq_to_rows

    a = p_to_m(n)
    if n == 0:
        return ((Fraction(1),),)
    # p = A m  =>  m = A^{-1} p
    inv = fmpq_to_rows(fmpq_matrix([[Fraction(x) for x in row] for row in a]).inv())
    return tuple(tuple(row) for row in inv)


def m_coefficient_in_p(lam: Partition, mu: Partition) -> Fraction:
    """Coefficient of ``p_mu`` in ``m_lambda``."""
    if lam.size != mu.size:
        return Fraction(0)
    lams = partitions(lam.size)
    return m_to_p(lam.size)[lams.index(lam)][lams.index(mu)]


def m_in_p(lam: Partition) -> Dict[Partition, Fraction]:
    n = lam.size
    lams = partitions(n)
    row = m_to_p(n)[lams.index(lam)]
    return {mu: c for mu, c in zip(lams, row) if c != 0}


def check_inverse(n: int) -> bool:
    a = p_to_m(n)
    b = m_to_p(n)
    size = len(a)
    # sum_mu B[lam][mu] A[mu][nu] = delta
    for i, j in itertools.product(range(size), repeat=2):
        s = sum(b[i][k] * a[k][j] for k in range(size))
        if s != (1 if i == j else 0):
            return False
    return True


def evaluate_m(lam: Partition, xs: List) -> object:
    """``m_lambda(x_1..x_k)`` by summing distinct permutations (small k only)."""
    k = len(xs)
    if lam.length > k:
        return 0
    parts = tuple(lam.parts) + (0,) * (k - lam.length)
    total = 0
    for perm in set(itertools.permutations(parts)):
        term = 1
        for x, e in zip(xs, perm):
            term *= x ** e
        total += term
    return total
