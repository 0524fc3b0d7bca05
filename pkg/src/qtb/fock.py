"""The Fock module F(u) in the partition basis and in the boson basis.

Partition basis: explicit matrix elements of ``e(z)``, ``f(z)`` and the
diagonal currents ``psi^{+-}(z)``.  Boson basis: vectors are polynomials in
``y_r = h^perp_{-r}|0>``; ``h^perp_r`` acts as ``c_r d/dy_r`` and
``e^perp(z)``, ``f^perp(z)`` act by normal ordered vertex operators.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import mpmath

from . import linalg
from .params import Params, PoleError
from .partitions import Partition, partitions

Vec = Dict[Partition, object]

PARTITION = "partition"
BOSON = "boson"


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


@dataclass
class FockVector:
    """Finite linear combination of basis vectors labelled by partitions."""

    basis: str
    coeffs: Vec = field(default_factory=dict)

    def __add__(self, other: "FockVector") -> "FockVector":
        _same(self, other)
        return FockVector(self.basis, vadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "FockVector") -> "FockVector":
        _same(self, other)
        return FockVector(self.basis, vadd(self.coeffs, other.coeffs, -1))

    def scale(self, c) -> "FockVector":
        return FockVector(self.basis, vscale(self.coeffs, c))

    def degree_part(self, n: int) -> "FockVector":
        return FockVector(self.basis, {k: v for k, v in self.coeffs.items() if k.size == n})

    def is_zero(self, tol=0) -> bool:
        return all(abs(v) <= tol for v in self.coeffs.values())

    def dense(self, n: int) -> list:
        return [self.coeffs.get(lam, 0) for lam in partitions(n)]


def _same(a: FockVector, b: FockVector):
    if a.basis != b.basis:
        raise ValueError("mixing partition and boson coordinates")


def vadd(a: Vec, b: Vec, sign=1) -> Vec:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + (v if sign == 1 else -v)
        if s != 0:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vscale(a: Vec, c) -> Vec:
    return {k: v * c for k, v in a.items() if v * c != 0}


def vmax(a: Vec):
    return max((abs(v) for v in a.values()), default=0)


def basis_vector(lam: Partition, one) -> Vec:
    return {lam: one}


def operator_matrix(op: Callable[[Vec], Vec], n_from: int, n_to: int, zero) -> List[list]:
    """Dense matrix (rows: degree ``n_to`` basis, columns: degree ``n_from`` basis)."""
    src = partitions(n_from)
    dst = partitions(n_to)
    cols = []
    for lam in src:
        img = op({lam: zero + 1})
        cols.append([img.get(mu, zero) for mu in dst])
    return [[cols[j][i] for j in range(len(src))] for i in range(len(dst))]


# ---------------------------------------------------------------------------
# power series helpers (single variable, list of coefficients)
# ---------------------------------------------------------------------------


def series_mul(a: list, b: list, order: int) -> list:
    out = [a[0] * 0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def series_psi(params: Params, c, order: int, inverse: bool, at_infinity: bool) -> list:
    """Expansion of ``psi(c/z)`` (or its inverse) in ``1/z`` (at infinity) or ``z``.

    ``psi(w) = (q - q^{-1} w) / (1 - w)``.  Coefficient ``k`` multiplies
    ``z^{-k}`` at infinity and ``z^{k}`` at zero.
    """
    q = params.q
    one = params.one
    if at_infinity:
        # w = c/z, psi(w) = q + sum_{j>=1} (q - 1/q) w^j
        w = [c ** k for k in range(order + 1)]
        if not inverse:
            return [q] + [(q - 1 / q) * w[k] for k in range(1, order + 1)]
        # 1/psi(w) = q^{-1} (1 - w) sum (w/q2)^j
        geo = [w[k] / params.q2 ** k for k in range(order + 1)]
        return [(geo[k] - (geo[k - 1] * c if k else 0)) / q if k else one / q for k in range(order + 1)]
    # v = z/c, psi = q^{-1} + sum_{j>=1} (q^{-1} - q) v^j
    v = [(1 / c) ** k for k in range(order + 1)]
    if not inverse:
        return [one / q] + [(1 / q - q) * v[k] for k in range(1, order + 1)]
    # 1/psi = q (1 - v) sum (q2 v)^j
    geo = [params.q2 ** k * v[k] for k in range(order + 1)]
    return [q * (geo[k] - (geo[k - 1] / c if k else 0)) if k else q * one for k in range(order + 1)]


# ---------------------------------------------------------------------------
# partition basis
# ---------------------------------------------------------------------------


class PartitionFock:
    """``F(u)`` with the explicit partition-basis action."""

    def __init__(self, params: Params, u):
        self.params = params
        self.u = params.scalar(u)

    # -- combinatorial data -------------------------------------------------
    def psi_fn(self, w):
        q = self.params.q
        if w == 1:
            raise PoleError("psi(1) is singular")
        return (q - w / q) / (1 - w)

    def content(self, i: int, j: int):
        p = self.params
        return p.q3 ** (i - 1) * p.q1 ** (j - 1) * self.u

    def row_content(self, lam: Partition, j: int):
        """Content of the cell added in row ``j``: ``q1^{lambda_j} q3^{j-1} u``."""
        p = self.params
        return p.q1 ** lam.part(j) * p.q3 ** (j - 1) * self.u

    def e_coefficient(self, lam: Partition, j: int):
        """``<lambda + 1_j| e(z) |lambda>`` without the delta function."""
        p = self.params
        out = p.one
        lj = lam.part(j)
        for s in range(1, j):
            ls = lam.part(s)
            out *= self.psi_fn(p.q1 ** (ls - lj - 1) * p.q3 ** (s - j))
            out *= self.psi_fn(p.q1 ** (lj - ls) * p.q3 ** (j - s))
        return out

    def f_coefficient(self, lam: Partition, j: int):
        """``<lambda| f(z) |lambda + 1_j>`` without the delta function."""
        p = self.params
        out = (p.q - 1 / p.q) / p.kappa(1)
        lj = lam.part(j)
        ell = lam.length
        for s in range(j, ell + 1):
            out *= self.psi_fn(p.q1 ** (lam.part(s) - lj - 1) * p.q3 ** (s - j))
        for s in range(j + 1, ell + 2):
            out *= self.psi_fn(p.q1 ** (lj - lam.part(s)) * p.q3 ** (j - s))
        return out

    # -- actions ------------------------------------------------------------
    def e_mode(self, k: int, v: Vec) -> Vec:
        out: Vec = {}
        for lam, c in v.items():
            for j in lam.addable_rows():
                mu = lam.add_box(j)
                coef = c * self.e_coefficient(lam, j) * self.row_content(lam, j) ** k
                out = vadd(out, {mu: coef})
        return out

    def f_mode(self, k: int, v: Vec) -> Vec:
        out: Vec = {}
        for mu, c in v.items():
            for j in mu.removable_rows():
                lam = mu.remove_box(j)
                coef = c * self.f_coefficient(lam, j) * self.row_content(lam, j) ** k
                out = vadd(out, {lam: coef})
        return out

    def psi_factors(self, lam: Partition):
        """``(numerator contents, inverse contents)`` for the diagonal currents."""
        p = self.params
        plain = [p.q3 ** i * p.q1 ** j * p.q2 * self.u for i, j in lam.convex_corners()]
        inv = [p.q3 ** i * p.q1 ** j * p.q2 ** 2 * self.u for i, j in lam.concave_corners()]
        return plain, inv

    def psi_eigenvalue(self, lam: Partition, z):
        plain, inv = self.psi_factors(lam)
        out = self.params.one
        for c in plain:
            out *= self.psi_fn(c / z)
        for c in inv:
            out /= self.psi_fn(c / z)
        return out

    def psi_modes(self, lam: Partition, order: int, plus: bool) -> list:
        """Coefficients ``psi^+_s`` (``s = 0..order``) or ``psi^-_{-s}``."""
        plain, inv = self.psi_factors(lam)
        acc = [self.params.one] + [self.params.zero] * order
        for c in plain:
            acc = series_mul(acc, series_psi(self.params, c, order, False, plus), order)
        for c in inv:
            acc = series_mul(acc, series_psi(self.params, c, order, True, plus), order)
        return acc

    def h_eigenvalue_from_psi(self, lam: Partition, r: int):
        """``h_r`` eigenvalue from the logarithm of the corner product."""
        p = self.params
        plain, inv = self.psi_factors(lam)
        rr = abs(r)
        if r > 0:
            tot = sum(((1 - p.q2 ** -rr) * c ** rr for c in plain), p.zero)
            tot -= sum(((1 - p.q2 ** -rr) * c ** rr for c in inv), p.zero)
        else:
            tot = sum(((1 - p.q2 ** rr) * c ** -rr for c in plain), p.zero)
            tot -= sum(((1 - p.q2 ** rr) * c ** -rr for c in inv), p.zero)
        return tot / (rr * p.kappa(rr))

    def h_eigenvalue(self, lam: Partition, r: int):
        """``gamma_r - (1/r) sum_cells content^r``."""
        p = self.params
        cs = lam.contents(p.q1, p.q3, self.u)
        return p.gamma(r, [self.u]) - sum((c ** r for c in cs), p.zero) / r

    def h_mode(self, r: int, v: Vec) -> Vec:
        return {lam: c * self.h_eigenvalue(lam, r) for lam, c in v.items() if c * self.h_eigenvalue(lam, r) != 0}

    def psi_mode(self, s: int, v: Vec, plus: bool) -> Vec:
        out = {}
        for lam, c in v.items():
            modes = self.psi_modes(lam, abs(s), plus)
            val = modes[abs(s)]
            if val != 0:
                out[lam] = c * val
        return out

    def matrix(self, op: Callable[[Vec], Vec], n_from: int, n_to: int) -> List[list]:
        return operator_matrix(op, n_from, n_to, self.params.zero)


# ---------------------------------------------------------------------------
# boson basis
# ---------------------------------------------------------------------------


def _merge(a: Partition, b: Partition) -> Partition:
    return Partition(tuple(sorted(a.parts + b.parts, reverse=True)))


class BosonFock:
    """``F(u)`` as the Heisenberg Fock space generated by ``h^perp_{-r}``."""

    def __init__(self, params: Params, u):
        self.params = params
        self.u = params.scalar(u)

    # -- Heisenberg algebra -----------------------------------------------------
    def commutator_constant(self, r: int):
        """``[h^perp_r, h^perp_{-r}] = (q^r - q^{-r}) / (r kappa_r)``."""
        p = self.params
        return (p.q ** r - p.q ** -r) / (r * p.kappa(r))

    def norm(self, lam: Partition):
        """``<0| h^perp_lambda h^perp_{-lambda} |0>``."""
        out = self.params.one
        for r, m in lam.multiplicities().items():
            out *= math.factorial(m) * self.commutator_constant(r) ** m
        return out

    def create(self, r: int, v: Vec) -> Vec:
        """``h^perp_{-r}`` (multiplication by ``y_r``)."""
        return {_merge(lam, Partition((r,))): c for lam, c in v.items()}

    def annihilate(self, r: int, v: Vec) -> Vec:
        """``h^perp_r = c_r d/dy_r``."""
        cr = self.commutator_constant(r)
        out: Vec = {}
        for lam, c in v.items():
            m = lam.parts.count(r)
            if m:
                parts = list(lam.parts)
                parts.remove(r)
                out = vadd(out, {Partition(tuple(parts)): c * m * cr})
        return out

    def heisenberg_act(self, r: int, v: Vec) -> Vec:
        if r == 0:
            raise ValueError("r must be nonzero")
        return self.create(-r, v) if r < 0 else self.annihilate(r, v)

    # -- vertex operators -----------------------------------------------------
    def _shift(self, lam: Partition, shifts: Dict[int, object]) -> Dict[int, Vec]:
        """Expand ``prod_r (y_r + s_r z^{-r})^{m_r}`` as ``{k: poly}`` for ``z^{-k}``."""
        terms: Dict[int, Vec] = {0: {Partition(()): self.params.one}}
        for r, m in lam.multiplicities().items():
            s = shifts[r]
            factor: Dict[int, Vec] = {}
            for k in range(m + 1):
                coef = math.comb(m, k) * s ** k
                factor[r * k] = {Partition((r,) * (m - k)): coef}
            new: Dict[int, Vec] = defaultdict(dict)
            for k1, p1 in terms.items():
                for k2, p2 in factor.items():
                    prod = {}
                    for a, ca in p1.items():
                        for b, cb in p2.items():
                            prod = vadd(prod, {_merge(a, b): ca * cb})
                    new[k1 + k2] = vadd(new[k1 + k2], prod)
            terms = dict(new)
        return terms

    def _creation_mode(self, t: int, coeffs: Callable[[int], object]) -> Vec:
        """Coefficient of ``z^t`` in ``exp(sum_r a_r y_r z^r)``."""
        if t < 0:
            return {}
        out: Vec = {}
        for nu in partitions(t):
            c = self.params.one
            for r, m in nu.multiplicities().items():
                c *= coeffs(r) ** m / math.factorial(m)
            out[nu] = c
        return out

    def vertex_mode(self, n: int, v: Vec, prefactor, create: Callable[[int], object],
                    annihilate: Callable[[int], object]) -> Vec:
        """Mode ``z^{-n}`` of ``A exp(sum a_r y_r z^r) exp(sum b_r h^perp_r z^{-r})``."""
        out: Vec = {}
        for lam, c in v.items():
            shifts = {r: annihilate(r) * self.commutator_constant(r) for r in set(lam.parts)}
            for k, poly in self._shift(lam, shifts).items():
                t = k - n
                if t < 0:
                    continue
                cre = self._creation_mode(t, create)
                for a, ca in poly.items():
                    for b, cb in cre.items():
                        out = vadd(out, {_merge(a, b): c * ca * cb * prefactor})
        return out

    def e_perp_mode(self, n: int, v: Vec, p=None) -> Vec:
        """``e^perp_n`` (``p`` given: the twisted current of the first integral)."""
        P = self.params
        pref = (1 - P.q2) * self.u / P.kappa(1)
        create = lambda r: P.kappa(r) / (1 - P.q2 ** r)  # noqa: E731
        if p is None:
            annih = lambda r: P.q ** r * P.kappa(r) / (1 - P.q2 ** r)  # noqa: E731
        else:
            pt = P.scalar(p) / P.q

            def annih(r):
                return P.q ** r * P.kappa(r) * (1 / (1 - P.q2 ** r) + pt ** r / (1 - pt ** r))
        return self.vertex_mode(n, v, pref, create, annih)

    def f_perp_mode(self, n: int, v: Vec) -> Vec:
        P = self.params
        pref = (1 - 1 / P.q2) / (P.kappa(1) * self.u)
        create = lambda r: -P.q ** r * P.kappa(r) / (1 - P.q2 ** r)  # noqa: E731
        annih = lambda r: -P.q ** (2 * r) * P.kappa(r) / (1 - P.q2 ** r)  # noqa: E731
        return self.vertex_mode(n, v, pref, create, annih)

    def h1(self, v: Vec) -> Vec:
        """``h_1 = e^perp_0``."""
        return self.e_perp_mode(0, v)

    def h_minus1(self, v: Vec) -> Vec:
        """``h_{-1} = f^perp_0``."""
        return self.f_perp_mode(0, v)

    def e_mode(self, k: int, v: Vec) -> Vec:
        """``e_k`` from ``e_0 = h^perp_{-1}`` and the ``h_{+-1}`` ladder."""
        if k == 0:
            return self.create(1, v)
        if k > 0:
            # e_{k} = [e_{k-1}, h_1]
            a = self.e_mode(k - 1, self.h1(v))
            b = self.h1(self.e_mode(k - 1, v))
            return vadd(a, b, -1)
        # e_{k} = [h_{-1}, e_{k+1}]
        a = self.h_minus1(self.e_mode(k + 1, v))
        b = self.e_mode(k + 1, self.h_minus1(v))
        return vadd(a, b, -1)

    def twisted_mode0(self, p, v: Vec) -> Vec:
        return self.e_perp_mode(0, v, p=p)

    def matrix(self, op: Callable[[Vec], Vec], n_from: int, n_to: int) -> List[list]:
        return operator_matrix(op, n_from, n_to, self.params.zero)

    def covector_pairing(self, lam: Partition):
        """``<0| h^perp_lambda`` evaluated on ``h^perp_{-lambda}|0>``."""
        return self.norm(lam)


# ---------------------------------------------------------------------------
# first integral of motion
# ---------------------------------------------------------------------------


def p_tilde(params: Params, p, k: int = 1):
    """``p q^{-k}`` (the level of ``F(u_1) x ... x F(u_k)`` is ``q^k``)."""
    return params.scalar(p) / params.q ** k


def integral_operator(params: Params, u, p, n: int) -> List[list]:
    """Matrix of the twisted zero mode on the degree-``n`` boson block."""
    pt = p_tilde(params, p)
    if abs(Params.scalar_to_mpc(pt)) >= 1:
        raise ValueError("divergent twist: |p q^{-1}| >= 1")
    bos = BosonFock(params, u)
    return bos.matrix(lambda v: bos.twisted_mode0(p, v), n, n)


def k_constant(params: Params, p, tol=mpmath.mpf("1e-20")) -> Tuple[object, dict]:
    """``(q1 q3, pt; pt)_oo / (pt q1, pt q3; pt)_oo`` truncated where ``|pt|^j < tol``."""
    pt = Params.scalar_to_mpc(p_tilde(params, p))
    q1 = Params.scalar_to_mpc(params.q1)
    q3 = Params.scalar_to_mpc(params.q3)
    if abs(pt) >= 1:
        raise ValueError("divergent twist: |p q^{-1}| >= 1")
    if pt == 0:
        return (1 - q1 * q3) / 1, {"terms": 1, "bound": 0}
    jmax = int(mpmath.ceil(mpmath.log(tol) / mpmath.log(abs(pt)))) + 1
    num = mpmath.mpc(1)
    den = mpmath.mpc(1)
    for j in range(jmax):
        num *= (1 - q1 * q3 * pt ** j) * (1 - pt ** (j + 1))
        den *= (1 - pt * q1 * pt ** j) * (1 - pt * q3 * pt ** j)
    bound = abs(pt) ** jmax * 4 * max(1, abs(q1), abs(q3)) / (1 - abs(pt))
    return num / den, {"terms": jmax, "bound": bound}


# ---------------------------------------------------------------------------
# change of basis
# ---------------------------------------------------------------------------


def change_of_basis(params: Params, u, n: int) -> List[list]:
    """Columns: partition vectors ``|lambda>`` in boson coordinates (degree ``n``).

    Eigenvectors of ``h_1`` fix the lines; the ``e_0 = h^perp_{-1}`` action
    fixes the scale recursively from ``|0> = 1``.
    """
    return _change_of_basis(params, params.scalar(u), n)


_COB_CACHE: Dict[tuple, List[list]] = {}


def _change_of_basis(params: Params, u, n: int) -> List[list]:
    key = (params, u, n)
    if key in _COB_CACHE:
        return _COB_CACHE[key]
    if n == 0:
        res = [[params.one]]
        _COB_CACHE[key] = res
        return res
    part = PartitionFock(params, u)
    bos = BosonFock(params, u)
    lams = partitions(n)
    h1 = bos.matrix(bos.h1, n, n)
    dirs = {}
    for lam in lams:
        ev = part.h_eigenvalue(lam, 1)
        shifted = [[h1[i][j] - (ev if i == j else 0) for j in range(len(lams))] for i in range(len(lams))]
        ns = linalg.nullspace(params, shifted)
        if len(ns) != 1:
            raise ArithmeticError(f"h_1 eigenspace for {lam} has dimension {len(ns)}")
        dirs[lam] = ns[0]
    prev = _change_of_basis(params, u, n - 1)
    prev_lams = partitions(n - 1)
    eig = [[dirs[lam][i] for lam in lams] for i in range(len(lams))]
    cols: Dict[Partition, list] = {}
    for j, lam in enumerate(prev_lams):
        vec = {mu: prev[i][j] for i, mu in enumerate(prev_lams) if prev[i][j] != 0}
        img = bos.create(1, vec)
        alpha = linalg.solve(params, eig, [img.get(mu, params.zero) for mu in lams])
        for row in lam.addable_rows():
            mu = lam.add_box(row)
            if mu in cols:
                continue
            coef = part.e_coefficient(lam, row)
            idx = lams.index(mu)
            cols[mu] = [alpha[idx] * x / coef for x in dirs[mu]]
    res = [[cols[lam][i] for lam in lams] for i in range(len(lams))]
    _COB_CACHE[key] = res
    return res


def to_partition_basis(params: Params, u, n: int, matrix: List[list]) -> List[list]:
    """Conjugate a boson-basis block to the partition basis."""
    P = change_of_basis(params, u, n)
    Pinv = linalg.inverse(params, P)
    return linalg.matmul(Pinv, linalg.matmul(matrix, P))


# ---------------------------------------------------------------------------
# vacuum L operator
# ---------------------------------------------------------------------------


def L_vacuum_diagonal(params: Params, u_L, u_prime, n: int, vacuum=None) -> Dict[Partition, object]:
    """Diagonal of ``q^{-d} exp(sum (1 - q2^{-r}) h_r u^{-r})`` on ``F(u')`` degree ``n``.

    ``vacuum`` is the value on ``|0>`` (default 1, the exact normalization).
    """
    p = params
    uL = p.scalar(u_L)
    fock = PartitionFock(p, u_prime)
    out = {}
    for lam in partitions(n):
        val = p.one if vacuum is None else vacuum
        val = val / p.q ** lam.size
        for c in lam.contents(p.q1, p.q3, fock.u):
            val *= (1 - c / uL) / (1 - c / (p.q2 * uL))
        out[lam] = val
    return out


def L_vacuum_series(params: Params, u_L, u_prime, lam: Partition, cutoff: int):
    """Truncated ``exp(sum_{r<=cutoff} (1 - q2^{-r}) h_r u^{-r})`` times ``q^{-|lambda|}``."""
    p = params
    fock = PartitionFock(p, u_prime)
    uL = p.scalar(u_L)
    s = sum(((1 - p.q2 ** -r) * fock.h_eigenvalue(lam, r) / uL ** r for r in range(1, cutoff + 1)), p.zero)
    return mpmath.exp(Params.scalar_to_mpc(s)) / Params.scalar_to_mpc(p.q) ** lam.size


def L_vacuum_value(params: Params, u_L, u_prime, cutoff: int):
    return L_vacuum_series(params, u_L, u_prime, Partition(()), cutoff)
