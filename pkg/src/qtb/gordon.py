"""Specialization maps ``rho_lambda`` and the dimension of ``Sh1 / J0``.

``rho_lambda`` places a ``q1``-string ``y_i, q1 y_i, ...`` on the cells of
row ``i`` and then sends ``y_i`` to the row's base content ``q3^{i-1} u``.
Row 1 is taken through the simple pole at ``y_1 = u``; every later row
must vanish to order ``lambda_i - 1`` there.  For a multipoint bimodule
``Sh1(u_1..u_k)`` the argument is a k-tuple of partitions and component
``l`` uses base contents ``q3^{i-1} u_l``.

The dimension count works in a finite target window ``T`` of ``Sh_{1,n}``:
symmetric numerators whose exponents lie in a box.  ``J0`` in degree ``n``
is ``Sh_{1,n-1} * Sh_{0,1}`` (Sh0 is generated in degree one).  Products
``G * x^j`` with ``G`` and ``j`` from a wider box span a subspace ``S`` of
``J0``; ``dim T - dim(T cap S)`` is an upper bound for ``dim T/(T cap J0)``
that decreases as the box widens.  The ``p(n)`` functionals ``rho_lambda``
(``|lambda| = n``) kill ``J0``, so their rank on ``T`` is a lower bound.  The
count is certified when the two bounds meet.  Ranks are computed modulo
primes close to ``2^31`` from values at random points.
"""

from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import flint
import numpy as np

from .bimodule import ShuffleElement1, right_mult
from .laurent import LaurentPoly, LinearForm, RationalFn
from .params import ParameterError, Params, PoleError
from .partitions import Partition, multipartitions, partition_count, partitions
from .shuffle import ShuffleElement0, epsilon_element, product_all, monomial_element

PRIMES = (2147483629, 2147483587)


class NonFiniteLimitError(ArithmeticError):
    """A specialization limit diverged; the input violates a wheel condition."""


class WindowTooSmallWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# rows and contents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Row:
    size: int
    base: object     # q3^{i-1} u_l
    order: int       # vanishing order removed at y = base
    pole: bool       # first row of its component: pass through (y - u_l)^{-1}


def _as_multi(lam, k: int) -> Tuple[Partition, ...]:
    if isinstance(lam, Partition):
        lams = (lam,)
    else:
        lams = tuple(x if isinstance(x, Partition) else Partition(tuple(x)) for x in lam)
    if len(lams) != k:
        raise ValueError(f"expected {k} partitions, got {len(lams)}")
    return lams


def specialization_rows(params: Params, lams: Sequence[Partition], us: Sequence) -> List[Row]:
    rows = []
    for lam, u in zip(lams, us):
        for i, size in enumerate(lam.parts):
            base = params.q3 ** i * u
            rows.append(Row(size, base, 0 if i == 0 else size - 1, i == 0))
    return rows


def cell_contents(params: Params, lams: Sequence[Partition], us: Sequence) -> list:
    out = []
    for row in specialization_rows(params, lams, us):
        out += [row.base * params.q1 ** j for j in range(row.size)]
    return out


def lex_order(lams: Sequence[Partition]) -> List[Partition]:
    """Increasing order; ``mu > lambda`` iff ``mu`` is lexicographically larger."""
    return sorted(lams, key=lambda lam: tuple(lam.parts))


# ---------------------------------------------------------------------------
# exact specialization
# ---------------------------------------------------------------------------


@dataclass
class SpecializationPlan:
    """Stages ``rho^(0), rho^(1), ...`` of one specialization."""

    lam: Tuple[Partition, ...]
    n: int
    stages: List[RationalFn] = field(default_factory=list)

    @property
    def result(self) -> RationalFn:
        return self.stages[-1]


def _taylor_coefficient(poly: LaurentPoly, var: int, c, r: int) -> LaurentPoly:
    """Coefficient of ``t^r`` in ``poly`` at ``x_var = c + t`` (other variables kept)."""
    out: Dict[tuple, object] = {}
    for e, coef in poly.terms.items():
        E = e[var]
        b = Fraction(1)
        for i in range(r):
            b = b * (E - i) / (i + 1)
        if b == 0:
            continue
        key = e[:var] + e[var + 1:]
        out[key] = out.get(key, 0) + coef * b * c ** (E - r)
    return LaurentPoly(poly.nvars - 1, out)


def _is_zero(params: Params, poly: LaurentPoly, ref: LaurentPoly) -> bool:
    if params.exact:
        return poly.is_zero()
    scale = max(1, ref.max_abs_coeff())
    return all(abs(c) <= params.tolerance * 1e3 * scale for c in poly.terms.values())


def specialize(lam, F: ShuffleElement1) -> SpecializationPlan:
    """All stages of ``rho_lambda(F)``.

    Raises :class:`NonFiniteLimitError` when a limit does not exist.
    """
    p = F.params
    lams = _as_multi(lam, F.k)
    size = sum(x.size for x in lams)
    if size > F.n:
        raise ValueError(f"|lambda| = {size} exceeds the number of variables {F.n}")
    rows = specialization_rows(p, lams, F.us)
    plan = SpecializationPlan(lams, F.n)

    assignments = {}
    pos = 0
    for row in rows:
        for j in range(1, row.size):
            assignments[pos + j] = (p.q1 ** j, pos)
        pos += row.size
    try:
        R = F.as_rational().substitute(assignments)
    except PoleError as exc:
        raise NonFiniteLimitError(str(exc)) from exc
    plan.stages.append(R)

    for row in rows:
        nv = R.nvars
        if row.pole:
            scale, form = LinearForm.difference(nv, 0, row.base)
            if R.denominator.get(form, 0) < 1:
                raise NonFiniteLimitError("expected a simple pole at the first row")
            R = R.multiply_by_form(scale, form)
            try:
                R = R.substitute({0: row.base})
            except PoleError as exc:
                raise NonFiniteLimitError(str(exc)) from exc
        else:
            for r in range(row.order):
                low = _taylor_coefficient(R.numerator, 0, row.base, r)
                if not _is_zero(p, low, R.numerator):
                    raise NonFiniteLimitError(
                        f"order-{r} term at y = {row.base} does not vanish (need order {row.order})")
            top = _taylor_coefficient(R.numerator, 0, row.base, row.order)
            try:
                den = RationalFn(LaurentPoly.const(nv, p.one), R.denominator).substitute({0: row.base})
            except PoleError as exc:
                raise NonFiniteLimitError(str(exc)) from exc
            R = RationalFn(top * den.numerator, den.denominator)
        plan.stages.append(R)
    return plan


def rho(lam, F: ShuffleElement1) -> RationalFn:
    """``rho_lambda(F)``, a rational function of the ``n - |lambda|`` unused variables."""
    return specialize(lam, F).result.simplify()


def rho_value(lam, F: ShuffleElement1):
    """``rho_lambda(F)`` as a scalar when ``|lambda| = n``."""
    r = rho(lam, F)
    if r.nvars != 0:
        raise ValueError("rho_value needs |lambda| = n")
    return r.numerator.constant_term()


def witness_element(params: Params, lam: Partition, u=1) -> ShuffleElement1:
    """``eps^{(q1)}_{lambda'}(x) prod (x_i - q2 u)/(x_i - u)``, nonzero under ``rho_lambda``."""
    u = params.scalar(u)
    eps = epsilon_element(params, lam.conjugate().parts, params.q1)
    n = lam.size
    num = eps.numerator
    for i in range(n):
        num = num * LaurentPoly(n, {tuple(1 if k == i else 0 for k in range(n)): params.one,
                                    (0,) * n: -params.q2 * u})
    return ShuffleElement1(params, (u,), num)


def rho_matrix(params: Params, n: int, basis: Sequence[ShuffleElement1]) -> List[list]:
    """``[rho_mu(b)]`` with rows ``mu |- n`` in increasing lexicographic order.

    For a basis listed in the same order, upper triangularity means
    ``rho_mu(b_lambda) = 0`` whenever ``mu > lambda``.
    """
    return [[rho_value(mu, b) for b in basis] for mu in lex_order(partitions(n))]


def is_upper_triangular(matrix: Sequence[Sequence]) -> bool:
    """Zero below the diagonal and nonzero on it."""
    for i, row in enumerate(matrix):
        for j in range(i):
            if row[j] != 0:
                return False
        if row[i] == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# filtration checks on samples
# ---------------------------------------------------------------------------


def sample_sh1(params: Params, us: Sequence, m: int) -> List[ShuffleElement1]:
    """A few elements of ``Sh_{1,m}``: e-words on the unit and (k = 1) kappa images."""
    from .bimodule import act_e, kappa_map

    us = tuple(params.scalar(u) for u in us)
    out = []
    for ks in itertools.product((-1, 0, 1), repeat=m):
        G = ShuffleElement1.unit(params, us)
        for k in reversed(ks):
            G = act_e(k, G)
        out.append(G)
        if len(out) >= 3:
            break
    if len(us) == 1:
        out += [kappa_map(params, lam, us[0]) for lam in partitions(m)]
    if m > 0:
        out.append(witness_element(params, partitions(m)[0], us[0]))
    return out


def sample_sh0(params: Params, size: int) -> List[ShuffleElement0]:
    if size == 0:
        return [ShuffleElement0.unit(params)]
    out = []
    for ks in itertools.islice(itertools.combinations_with_replacement((-1, 0, 1, 2), size), 3):
        out.append(product_all(params, [monomial_element(params, k) for k in ks]))
    return out


def filtration_vanishing(params: Params, lam, m: int, n: int | None = None, us=(1,)) -> bool:
    """``rho_lambda`` annihilates sampled ``Sh_{1,m} * Sh_{0,n-m}`` when ``|lambda| > m``."""
    lams = _as_multi(lam, len(us))
    size = sum(x.size for x in lams)
    n = size if n is None else n
    if size <= m:
        raise ValueError("filtration_vanishing needs |lambda| > m")
    for G in sample_sh1(params, us, m):
        for H in sample_sh0(params, n - m):
            if not rho(lam, right_mult(G, H)).is_zero():
                return False
    return True


def factorization_defect(params: Params, lam: Partition, G: ShuffleElement1, H: ShuffleElement0,
                         points: Sequence[Sequence]) -> object:
    """Spread of ``rho(G*H) / [rho(G) H prod omega(x_k, content)]`` over ``points``.

    The ratio is a nonzero constant; the spread (max minus min) vanishes.
    Returns ``None`` when ``rho(G)`` is zero (nothing to compare).
    """
    from .bimodule import omega_value

    u = G.us[0]
    contents = cell_contents(params, (lam,), (u,))
    left = rho(lam, right_mult(G, H))
    base = rho(lam, G)
    if base.is_zero():
        return None
    c0 = base.numerator.constant_term()
    ratios = []
    for pt in points:
        denom = c0 * H.evaluate(pt)
        for x in pt:
            for c in contents:
                denom *= omega_value(params, x, c)
        ratios.append(left.evaluate(pt) / denom)
    if any(r == 0 for r in ratios):
        return float("inf")
    return max(abs(r - ratios[0]) for r in ratios)


# ---------------------------------------------------------------------------
# modular window count
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Exponent box ``[-below, above + 2(n-1) + k]`` for numerators of ``Sh_{1,n}``.

    With this box ``W_{n-1} * x^j`` (``-below <= j <= above``) stays in ``W_n``.
    The default ``below = -1`` starts at exponent 1, where the kappa images live.
    """

    below: int = -1
    above: int = 0

    def exponent_range(self, n: int, k: int) -> Tuple[int, int]:
        return -self.below, self.above + 2 * max(n - 1, 0) + k

    def widened(self, margin: int) -> "Window":
        return Window(self.below + margin, self.above + margin)

    def to_json(self) -> dict:
        return {"below": self.below, "above": self.above}


def _to_mod(x, P: int) -> int:
    x = Fraction(x)
    return x.numerator % P * pow(x.denominator % P, P - 2, P) % P


class _ModContext:
    def __init__(self, params: Params, us: Sequence, P: int, seed: int):
        if not params.exact:
            raise ParameterError("the dimension count needs exact (rational) parameters")
        self.P = P
        self.q1 = _to_mod(params.q1, P)
        self.q2 = _to_mod(params.q2, P)
        self.q3 = _to_mod(params.q3, P)
        self.us = [_to_mod(u, P) for u in us]
        self.rng = np.random.default_rng(seed)

    def random(self, shape) -> np.ndarray:
        return self.rng.integers(2, self.P - 1, size=shape, dtype=np.int64)


def _powmod(base: np.ndarray, e: int, P: int) -> np.ndarray:
    if e < 0:
        base = _powmod(base, P - 2, P)
        e = -e
    out = np.ones_like(base)
    b = base % P
    while e:
        if e & 1:
            out = out * b % P
        b = b * b % P
        e >>= 1
    return out


def _matmul_mod(a: np.ndarray, b: np.ndarray, P: int) -> np.ndarray:
    """Exact ``a @ b mod P`` for ``P < 2^31`` via 16-bit limbs in float64."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    mask = (1 << 16) - 1
    a0, a1 = (a & mask).astype(np.float64), (a >> 16).astype(np.float64)
    b0, b1 = (b & mask).astype(np.float64), (b >> 16).astype(np.float64)
    step = 1 << 20  # limb products are below 2^32, so chunked sums stay below 2^53
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], step):
        sl = slice(s, s + step)
        lo = (a0[:, sl] @ b0[sl]).astype(np.int64) % P
        mid = ((a0[:, sl] @ b1[sl]).astype(np.int64) + (a1[:, sl] @ b0[sl]).astype(np.int64)) % P
        hi = (a1[:, sl] @ b1[sl]).astype(np.int64) % P
        part = (hi << 16) % P
        part = ((part + mid) << 16) % P
        out = (out + part + lo) % P
    return out


def _rank_mod(m: np.ndarray, P: int) -> int:
    if m.size == 0:
        return 0
    return flint.nmod_mat(m.shape[0], m.shape[1], m.ravel().tolist(), P).rank()


def _nullspace_mod(m: np.ndarray, ncols: int, P: int) -> np.ndarray:
    """Rows spanning ``{v : m v = 0}``."""
    if m.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    basis, nullity = flint.nmod_mat(m.shape[0], m.shape[1], m.ravel().tolist(), P).nullspace()
    cols = basis.tolist()
    return np.array([[int(cols[i][j]) for i in range(ncols)] for j in range(nullity)],
                    dtype=np.int64).reshape(nullity, ncols)


def _multisets(lo: int, hi: int, n: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(lo, hi + 1), n))


def _monomial_values(mons: List[Tuple[int, ...]], pts: np.ndarray, lo: int, hi: int, P: int) -> np.ndarray:
    """``m_mu(x)`` for every multiset ``mu`` (rows) at every point (columns of ``pts``)."""
    n, npts = pts.shape
    if n == 0:
        return np.ones((1, npts), dtype=np.int64)
    powers = [{e: _powmod(pts[i], e, P) for e in range(lo, hi + 1)} for i in range(n)]
    level: Dict[tuple, np.ndarray] = {(): np.ones(npts, dtype=np.int64)}
    for i in range(n):
        new: Dict[tuple, np.ndarray] = {}
        for S, v in level.items():
            for e in range(lo, hi + 1):
                key = tuple(sorted(S + (e,)))
                term = v * powers[i][e] % P
                if key in new:
                    new[key] = (new[key] + term) % P
                else:
                    new[key] = term
        level = new
    return np.array([level[m] for m in mons], dtype=np.int64)


def _wheel_points(ctx: _ModContext, n: int, count: int) -> List[np.ndarray]:
    """Random points on every wheel locus, as ``n x count`` arrays."""
    P = ctx.P
    loci = []
    if n >= 3:
        for a, b in ((ctx.q1, ctx.q1 * ctx.q2 % P), (ctx.q2, ctx.q1 * ctx.q2 % P)):
            pts = ctx.random((n, count))
            pts[1] = pts[0] * a % P
            pts[2] = pts[0] * b % P
            loci.append(pts)
    if n >= 2:
        for u in ctx.us:
            pts = ctx.random((n, count))
            pts[0] = u
            pts[1] = u * ctx.q2 % P
            loci.append(pts)
    return loci


def _rho_functional(ctx: _ModContext, lams: Sequence[Partition], mons: List[Tuple[int, ...]],
                    contents_den: int) -> np.ndarray:
    """``rho_lambda(m_mu)`` for every monomial symmetric function in the window."""
    P = ctx.P
    rows = []
    for lam, u in zip(lams, ctx.us):
        for i, size in enumerate(lam.parts):
            rows.append((size, pow(ctx.q3, i, P) * u % P, 0 if i == 0 else size - 1))

    @lru_cache(maxsize=None)
    def row_weight(t: int, nu: Tuple[int, ...]) -> int:
        # sum over orderings of nu along the q1-string, times the Taylor coefficient
        size, c, m = rows[t]
        string = 0
        for perm in set(itertools.permutations(nu)):
            w = 1
            for j, e in enumerate(perm):
                w = w * pow(ctx.q1, (j * e) % (P - 1), P) % P
            string = (string + w) % P
        E = sum(nu)
        b = Fraction(1)
        for i in range(m):
            b = b * (E - i) / (i + 1)
        return string * _to_mod(b, P) % P * pow(c, (E - m) % (P - 1), P) % P

    @lru_cache(maxsize=None)
    def distribute_unique(t: int, rest: Tuple[int, ...]) -> int:
        if t == len(rows):
            return 1
        size = rows[t][0]
        total = 0
        seen = set()
        for idx in itertools.combinations(range(len(rest)), size):
            nu = tuple(rest[i] for i in idx)
            if nu in seen:
                continue
            seen.add(nu)
            others = tuple(rest[i] for i in range(len(rest)) if i not in idx)
            total += row_weight(t, nu) * distribute_unique(t + 1, others)
        return total % P

    inv = pow(contents_den, P - 2, P)
    return np.array([distribute_unique(0, mu) * inv % P for mu in mons], dtype=np.int64)


def _contents_denominator(ctx: _ModContext, lams: Sequence[Partition]) -> int:
    """The constant left from ``prod (x_a-x_b)^2 prod (x_a-u)`` at the contents,
    without the factors removed at the first rows."""
    P = ctx.P
    cells = []
    for lam, u in zip(lams, ctx.us):
        for i, size in enumerate(lam.parts):
            for j in range(size):
                cells.append((pow(ctx.q3, i, P) * pow(ctx.q1, j, P) * u % P, i == 0 and j == 0, u))
    d = 1
    for a, b in itertools.combinations(cells, 2):
        d = d * (a[0] - b[0]) ** 2 % P
    for c, first, own in cells:
        for u in ctx.us:
            if first and u == own:
                continue
            d = d * (c - u) % P
    return d % P


@dataclass
class _WindowBasis:
    n: int
    lo: int
    hi: int
    mons: List[Tuple[int, ...]]
    basis: np.ndarray    # rows: coefficient vectors on mons


@dataclass
class DimensionReport:
    n: int
    k: int
    dim: int | None
    expected: int
    window: dict
    margin: int
    upper: int
    lower: int
    window_dim: int
    saturated: bool
    primes: List[int]
    seconds: float

    @property
    def passed(self) -> bool:
        return self.saturated and self.dim == self.expected

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["pass"] = self.passed
        return out


class GordonCounter:
    """Window dimension counts for ``Sh1(u_1..u_k)`` modulo one prime."""

    def __init__(self, params: Params, us: Sequence = (1,), P: int = PRIMES[0], seed: int = 0):
        self.params = params
        self.us = tuple(params.scalar(u) for u in us)
        self.k = len(self.us)
        self.ctx = _ModContext(params, self.us, P, seed)
        self._bases: Dict[Tuple[int, Window], _WindowBasis] = {}

    def window_basis(self, n: int, window: Window) -> _WindowBasis:
        """Symmetric numerators in the box satisfying every wheel condition."""
        key = (n, window)
        if key in self._bases:
            return self._bases[key]
        P = self.ctx.P
        lo, hi = window.exponent_range(n, self.k)
        mons = _multisets(lo, hi, n)
        if n <= 1:
            basis = np.eye(len(mons), dtype=np.int64)
        else:
            blocks = [
                _monomial_values(mons, pts, lo, hi, P).T
                for pts in _wheel_points(self.ctx, n, len(mons) + 8)
            ]
            basis = _nullspace_mod(np.vstack(blocks), len(mons), P)
        wb = _WindowBasis(n, lo, hi, mons, basis)
        self._bases[key] = wb
        return wb

    def _values(self, wb: _WindowBasis, pts: np.ndarray) -> np.ndarray:
        vals = _monomial_values(wb.mons, pts, wb.lo, wb.hi, self.ctx.P)
        return _matmul_mod(wb.basis, vals, self.ctx.P)

    def _product_values(self, n: int, window: Window, pts: np.ndarray) -> np.ndarray:
        """Numerator values of ``G * x^j`` for ``G`` in ``W_{n-1}(window)``.

        ``num(G * x^j)(X) = sum_i x_i^j D_u(x_i) prod_{l != i} g(x_i, x_l)/(x_i - x_l) num(G)(X minus x_i)``
        up to an overall constant.
        """
        P = self.ctx.P
        prev = self.window_basis(n - 1, window)
        dprev = prev.basis.shape[0]
        ks = range(-window.below, window.above + 1)
        npts = pts.shape[1]
        rows = np.zeros((dprev * len(ks), npts), dtype=np.int64)
        for i in range(n):
            xi = pts[i]
            factor = np.ones(npts, dtype=np.int64)
            for u in self.ctx.us:
                factor = factor * ((xi - u) % P) % P
            for l in range(n):
                if l == i:
                    continue
                xl = pts[l]
                for qs in (self.ctx.q1, self.ctx.q2, self.ctx.q3):
                    factor = factor * ((xi - qs * xl) % P) % P
                factor = factor * _powmod((xi - xl) % P, -1, P) % P
            Gv = self._values(prev, np.delete(pts, i, axis=0))
            for t, j in enumerate(ks):
                block = Gv * (factor * _powmod(xi, j, P) % P) % P
                sl = slice(t * dprev, (t + 1) * dprev)
                rows[sl] = (rows[sl] + block) % P
        return rows

    def count(self, n: int, target: Window, margin: int) -> Dict[str, int]:
        """Upper and lower bounds for ``dim T/(T cap J0)`` in degree ``n``."""
        P = self.ctx.P
        T = self.window_basis(n, target)
        d = T.basis.shape[0]
        if n == 0:
            return {"window_dim": 1, "rank_products": 0, "upper": 1, "lower": 1}
        wide = target.widened(margin)
        nrows = self.window_basis(n - 1, wide).basis.shape[0] * (wide.above + wide.below + 1)
        pts = self.ctx.random((n, nrows + d + 16))
        S = self._product_values(n, wide, pts)
        Tv = self._values(T, pts)
        rank_s = _rank_mod(S, P)
        rank_all = _rank_mod(np.vstack([S, Tv]), P)
        return {
            "window_dim": d,
            "rank_products": rank_s,
            "upper": rank_all - rank_s,
            "lower": self.rho_rank(n, T),
        }

    def rho_rank(self, n: int, W: _WindowBasis) -> int:
        P = self.ctx.P
        rows = []
        for lams in self._labels(n):
            func = _rho_functional(self.ctx, lams, W.mons, _contents_denominator(self.ctx, lams))
            rows.append(_matmul_mod(W.basis, func.reshape(-1, 1), P).ravel())
        return _rank_mod(np.array(rows, dtype=np.int64), P)

    def _labels(self, n: int) -> List[Tuple[Partition, ...]]:
        if self.k == 1:
            return [(lam,) for lam in partitions(n)]
        return [tuple(t) for t in multipartitions(n, self.k)]


def expected_dimension(n: int, k: int = 1) -> int:
    return partition_count(n) if k == 1 else len(multipartitions(n, k))


def graded_quotient_dimension(params: Params, n: int, window: Window | None = None, us: Sequence = (1,),
                              primes: Sequence[int] = PRIMES, seed: int = 0, margin: int = 2,
                              max_margin: int = 3, counters: List[GordonCounter] | None = None) -> DimensionReport:
    """Dimension of the degree-``n`` part of ``Sh1(u)/J0`` inside an exponent window.

    The product margin grows until the rank bound meets the rho lower bound
    or ``max_margin`` is passed; then a :class:`WindowTooSmallWarning` is
    issued and ``dim`` is ``None``.
    """
    start = time.perf_counter()
    window = window or Window()
    counters = counters or [GordonCounter(params, us, P, seed) for P in primes]
    while True:
        results = [c.count(n, window, margin) for c in counters]
        upper = max(r["upper"] for r in results)
        lower = min(r["lower"] for r in results)
        saturated = upper == lower
        if saturated or margin >= max_margin:
            break
        margin += 1
    if not saturated:
        warnings.warn(f"window {window.to_json()} with margin {margin} not saturated in degree {n}: "
                      f"bounds {lower}..{upper}", WindowTooSmallWarning)
    return DimensionReport(
        n=n, k=counters[0].k, dim=upper if saturated else None,
        expected=expected_dimension(n, counters[0].k), window=window.to_json(), margin=margin,
        upper=upper, lower=lower, window_dim=results[0]["window_dim"], saturated=saturated,
        primes=[c.ctx.P for c in counters], seconds=time.perf_counter() - start,
    )


def gordon_dimensions(params: Params, n_max: int, us: Sequence = (1,), window: Window | None = None,
                      primes: Sequence[int] = PRIMES, seed: int = 0, margin: int = 2,
                      max_margin: int = 3) -> List[DimensionReport]:
    counters = [GordonCounter(params, us, P, seed) for P in primes]
    return [graded_quotient_dimension(params, n, window, us, primes, seed, margin, max_margin, counters)
            for n in range(n_max + 1)]
