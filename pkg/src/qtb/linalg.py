"""Small dense linear algebra over the two scalar backends.

Exact work is delegated to python-flint (``fmpq_mat``/``nmod_mat``); float
work to mpmath.  Matrices are plain lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

import flint
import mpmath

from .params import Params


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(int(x))


def from_fmpq(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def fmpq_matrix(rows: Sequence[Sequence]) -> flint.fmpq_mat:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    return flint.fmpq_mat(nr, nc, [to_fmpq(v) for row in rows for v in row])


def fmpq_to_rows(m: flint.fmpq_mat) -> List[List[Fraction]]:
    return [[from_fmpq(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


def mp_matrix(rows: Sequence[Sequence]) -> mpmath.matrix:
    m = mpmath.matrix(len(rows), len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            m[i, j] = Params.scalar_to_mpc(v)
    return m


def mp_to_rows(m: mpmath.matrix) -> List[list]:
    return [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]


def identity(n: int, one=Fraction(1)) -> List[list]:
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[list]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in cols] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), 0) for row in a]


def transpose(a: Sequence[Sequence]) -> List[list]:
    return [list(r) for r in zip(*a)]


def rank(params: Params, rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    if params.exact:
        return fmpq_matrix(rows).rank()
    s = mpmath.svd_c(mp_matrix(rows), compute_uv=False)
    scale = max((abs(x) for x in s), default=0)
    return sum(1 for x in s if abs(x) > params.tolerance * 1e3 * max(1, scale))


def nullspace(params: Params, rows: Sequence[Sequence], ncols: int | None = None) -> List[list]:
    """Basis of ``{v : A v = 0}`` as a list of vectors."""
    if not rows:
        n = ncols or 0
        return [[Fraction(1) if i == j else Fraction(0) for i in range(n)] for j in range(n)]
    if params.exact:
        return _rref_nullspace(fmpq_to_rows(fmpq_matrix(rows).rref()[0]))
    a = mp_matrix(rows)
    n = a.cols
    if a.rows < n:
        pad = mpmath.matrix(n, n)
        for i in range(a.rows):
            for j in range(n):
                pad[i, j] = a[i, j]
        a = pad
    u, s, v = mpmath.svd_c(a)
    scale = max((abs(x) for x in s), default=0)
    out = []
    for k in range(n):
        sk = s[k] if k < len(s) else 0
        if abs(sk) <= params.tolerance * 1e3 * max(1, scale):
            out.append([mpmath.conj(v[k, j]) for j in range(n)])
    return out


def _rref_nullspace(r: List[List[Fraction]]) -> List[List[Fraction]]:
    ncols = len(r[0])
    pivots = []
    for row in r:
        lead = next((j for j, v in enumerate(row) if v != 0), None)
        if lead is not None:
            pivots.append((lead, row))
    pivot_cols = {j for j, _ in pivots}
    out = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for j, row in pivots:
            vec[j] = -row[free] / row[j]
        out.append(vec)
    return out


def solve(params: Params, a: Sequence[Sequence], b: Sequence) -> list:
    """Solve the square system ``a x = b``."""
    if params.exact:
        x = fmpq_matrix(a).solve(fmpq_matrix([[v] for v in b]))
        return [from_fmpq(x[i, 0]) for i in range(x.nrows())]
    x = mpmath.lu_solve(mp_matrix(a), mp_matrix([[v] for v in b]))
    return [x[i] for i in range(len(b))]


def inverse(params: Params, a: Sequence[Sequence]) -> List[list]:
    if params.exact:
        return fmpq_to_rows(fmpq_matrix(a).inv())
    return mp_to_rows(mp_matrix(a) ** -1)


def eigenvalues(rows: Sequence[Sequence]) -> list:
    """Eigenvalues (mpmath) of a square matrix with exact or float entries."""
    if not rows:
        return []
    if len(rows) == 1:
        return [Params.scalar_to_mpc(rows[0][0])]
    return list(mpmath.eig(mp_matrix(rows), left=False, right=False))


def sort_complex(values) -> list:
    """Canonical order: by real part, then imaginary part (rounded)."""
    return sorted(values, key=lambda z: (round(float(mpmath.re(z)), 9), round(float(mpmath.im(z)), 9)))


def match_multisets(a: Sequence, b: Sequence) -> float:
    """Maximal relative mismatch under the best greedy pairing of two multisets."""
    if len(a) != len(b):
        return float("inf")
    left = [Params.scalar_to_mpc(x) for x in b]
    worst = mpmath.mpf(0)
    for x in a:
        x = Params.scalar_to_mpc(x)
        k = min(range(len(left)), key=lambda i: abs(left[i] - x))
        err = abs(left[k] - x) / max(1, abs(x))
        worst = max(worst, err)
        left.pop(k)
    return worst
