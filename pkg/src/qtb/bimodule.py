"""The bimodule Sh1(u) (and its k-point version Sh1(u_1..u_k)).

An element of ``Sh_{1,n}`` is a symmetric Laurent numerator ``f`` over the
implicit denominator ``prod_{i<j}(x_i-x_j)^2 prod_i prod_l (x_i-u_l)``.
Sh0 acts on the left (with ``phi(u, x)`` factors) and on the right, and the
algebra E' acts on the left by ``e_k``, ``h_r`` and ``f_k``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import mpmath

from .laurent import LaurentPoly, LinearForm, RationalFn, SizeError, residues_at_zero_and_infinity
from .params import Params, PoleError
from .partitions import Partition
from .shuffle import (
    ShuffleElement0,
    generator,
    shuffle_sum,
    sigma_h_perp_minus,
    wheel_violations,
)


def u_factor(params: Params, us: Sequence) -> LaurentPoly:
    """``D_u(x) = prod_l (x - u_l)`` as a one-variable polynomial."""
    out = LaurentPoly.const(1, params.one)
    for u in us:
        out = out * LaurentPoly(1, {(1,): params.one, (0,): -u})
    return out


def phi_numerator(params: Params, us: Sequence) -> LaurentPoly:
    """``prod_l (x/q - q u_l)``, the numerator of ``phi(u, x)``."""
    out = LaurentPoly.const(1, params.one)
    for u in us:
        out = out * LaurentPoly(1, {(1,): params.one / params.q, (0,): -params.q * u})
    return out


@dataclass(frozen=True)
class ShuffleElement1:
    """Element ``f / (prod (x_i-x_j)^2 prod (x_i - u_l))`` of ``Sh_{1,n}(u)``."""

    params: Params
    us: Tuple
    numerator: LaurentPoly

    @property
    def n(self) -> int:
        return self.numerator.nvars

    @property
    def k(self) -> int:
        return len(self.us)

    @classmethod
    def unit(cls, params: Params, us: Sequence) -> "ShuffleElement1":
        return cls(params, tuple(params.scalar(u) for u in us), LaurentPoly.const(0, params.one))

    @classmethod
    def zero(cls, params: Params, us: Sequence, n: int) -> "ShuffleElement1":
        return cls(params, tuple(params.scalar(u) for u in us), LaurentPoly(n))

    def _like(self, num: LaurentPoly) -> "ShuffleElement1":
        return ShuffleElement1(self.params, self.us, num)

    def is_zero(self) -> bool:
        if self.params.exact:
            return self.numerator.is_zero()
        return all(abs(c) <= self.params.tolerance * 1e3 for c in self.numerator.terms.values())

    def __add__(self, other: "ShuffleElement1") -> "ShuffleElement1":
        _compatible(self, other)
        if self.n != other.n:
            raise ValueError("adding elements of different sizes")
        return self._like(self.numerator + other.numerator)

    def __sub__(self, other: "ShuffleElement1") -> "ShuffleElement1":
        _compatible(self, other)
        if self.n != other.n:
            raise ValueError("subtracting elements of different sizes")
        return self._like(self.numerator - other.numerator)

    def __neg__(self):
        return self._like(-self.numerator)

    def scale(self, c) -> "ShuffleElement1":
        return self._like(self.numerator.scale(self.params.scalar(c)))

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement1):
            return NotImplemented
        if self.n != other.n:
            return self.is_zero() and other.is_zero()
        if self.params.exact:
            return self.numerator == other.numerator
        return self.numerator.almost_equal(other.numerator, self.params.tolerance * 1e3)

    def __hash__(self):
        return hash((self.us, self.numerator))

    def denominator_forms(self) -> Dict[LinearForm, int]:
        den: Dict[LinearForm, int] = {}
        for i, j in itertools.combinations(range(self.n), 2):
            _, form = LinearForm.difference(self.n, i, self.params.one, j)
            den[form] = 2
        for i in range(self.n):
            for u in self.us:
                _, form = LinearForm.difference(self.n, i, u)
                den[form] = den.get(form, 0) + 1
        return den

    def as_rational(self) -> RationalFn:
        return RationalFn(self.numerator, self.denominator_forms())

    def evaluate(self, point: Sequence):
        """``ev_a``: the value at ``a``; zero when ``len(a) != n``."""
        if len(point) != self.n:
            return self.params.zero if self.params.exact else mpmath.mpc(0)
        _check_point(point, self.us)
        return self.as_rational().evaluate(list(point))

    def to_text(self) -> str:
        return self.numerator.to_text()


def _compatible(a: ShuffleElement1, b: ShuffleElement1):
    if a.us != b.us:
        raise ValueError("elements of different bimodules")


def _check_point(point: Sequence, us: Sequence):
    for i, j in itertools.combinations(range(len(point)), 2):
        if point[i] == point[j]:
            raise PoleError(f"evaluation point has a_{i} = a_{j}")
    for i, a in enumerate(point):
        for u in us:
            if a == u:
                raise PoleError(f"evaluation point has a_{i} = u")


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def second_wheel_violations(params: Params, us: Sequence, f: LaurentPoly) -> List[dict]:
    """``f(u_l, q2 u_l, x_3, ...) = 0`` for every ``l``."""
    if f.nvars < 2:
        return []
    out = []
    for u in us:
        val = f.substitute({0: u, 1: params.q2 * u})
        zero = val.is_zero() if params.exact else all(
            abs(c) <= params.tolerance * 1e3 * max(1, f.max_abs_coeff()) for c in val.terms.values())
        if not zero:
            out.append({"condition": "wheel2", "u": str(u)})
    return out


def is_member(G: ShuffleElement1) -> Tuple[bool, List[dict]]:
    p = G.params
    report = []
    tol = None if p.exact else p.tolerance * 1e3
    if not G.numerator.is_symmetric(tol):
        report.append({"condition": "symmetry"})
    report += [{"condition": "wheel", **v} for v in wheel_violations(p, G.numerator)]
    report += second_wheel_violations(p, G.us, G.numerator)
    return (not report, report)


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------


def left_mult(F: ShuffleElement0, G: ShuffleElement1) -> ShuffleElement1:
    """``Sym[F(x_1..x_m) G(x_{m+1}..) prod omega(x_{m+j}, x_i) prod phi(u, x_i)]``."""
    p = G.params
    num = shuffle_sum(p, F.numerator, G.numerator, False, a_factor=phi_numerator(p, G.us))
    return G._like(num)


def right_mult(G: ShuffleElement1, F: ShuffleElement0) -> ShuffleElement1:
    """``Sym[G(x_{m+1}..) F(x_1..x_m) prod omega(x_i, x_{m+j})]``."""
    p = G.params
    num = shuffle_sum(p, F.numerator, G.numerator, True, a_factor=u_factor(p, G.us))
    return G._like(num)


def act_e(k: int, G: ShuffleElement1) -> ShuffleElement1:
    return left_mult(generator(G.params, k), G)


def act_h(r: int, G: ShuffleElement1) -> ShuffleElement1:
    """``(-(1/r) sum x_i^r + gamma_r) G``."""
    if r == 0:
        raise ValueError("r must be nonzero")
    p = G.params
    n = G.n
    mult = LaurentPoly.const(n, p.gamma(r, G.us))
    for i in range(n):
        e = [0] * n
        e[i] = r
        mult = mult - LaurentPoly.monomial(e, p.one / r)
    return G._like(G.numerator * mult)


def act_f(k: int, G: ShuffleElement1) -> ShuffleElement1:
    """``c2 n (Res_0 + Res_oo) G(x_1..x_{n-1}, z) z^k / prod omega(z, x_i) dz/z``."""
    p = G.params
    n = G.n
    if n == 0:
        return ShuffleElement1.zero(p, G.us, 0)
    z = n - 1
    num = G.numerator
    for i in range(n - 1):
        num = num * LaurentPoly(n, {
            tuple(1 if t == z else 0 for t in range(n)): p.one,
            tuple(1 if t == i else 0 for t in range(n)): -p.one,
        })
    integrand = RationalFn(num)
    for i in range(n - 1):
        for qs in p.qs():
            scale, form = LinearForm.make(n, {z: p.one, i: -qs}, 0)
            integrand = integrand.divide_by_form(scale, form)
    for u in G.us:
        scale, form = LinearForm.make(n, {z: p.one}, -u)
        integrand = integrand.divide_by_form(scale, form)
    res = residues_at_zero_and_infinity(integrand, z, k, method="series")
    if res.denominator:
        raise ArithmeticError(f"f-action left a denominator: {res!r}")
    return ShuffleElement1(p, G.us, res.numerator.scale(p.c2 * n))


# ---------------------------------------------------------------------------
# the section kappa and the subspace N
# ---------------------------------------------------------------------------


def kappa_map(params: Params, lam: Partition, u=1) -> ShuffleElement1:
    """``kappa(h^perp_{-lambda}|0>)`` for the one-point bimodule ``Sh1(u)``.

    ``kappa(h_{-r} v) = sigma(h_{-r}) * kappa(v) - q^r kappa(v) * sigma(h_{-r})``.
    """
    return _kappa_cached(params, tuple(lam.parts), params.scalar(u))


@lru_cache(maxsize=None)
def _kappa_cached(params: Params, parts: Tuple[int, ...], u) -> ShuffleElement1:
    if not parts:
        return ShuffleElement1.unit(params, (u,))
    r, rest = parts[0], parts[1:]
    inner = _kappa_cached(params, rest, u)
    s = sigma_h_perp_minus(params, [r])
    return left_mult(s, inner) - right_mult(inner, s).scale(params.q ** r)


def _scaled_degrees(G: ShuffleElement1, k: int) -> Tuple[int, int]:
    return G.numerator.total_degree_range(list(range(k)))


def regular_at_zero(G: ShuffleElement1) -> bool:
    """``lim_{t->0} G(t y_1..t y_k, x_{k+1}..)`` exists for every ``k``."""
    if G.is_zero():
        return True
    return all(_scaled_degrees(G, k)[0] >= k * (k - 1) for k in range(1, G.n + 1))


def regular_at_infinity(G: ShuffleElement1) -> bool:
    """``lim_{t->oo} G(t y_1..t y_k, x_{k+1}..)`` exists for every ``k``."""
    if G.is_zero():
        return True
    n, K = G.n, G.k
    return all(_scaled_degrees(G, k)[1] <= k * (k - 1) + 2 * k * (n - k) + k * K for k in range(1, n + 1))


def vanishes_at_zero(G: ShuffleElement1) -> bool:
    """``lim_{t->0} G(t y_1..t y_n) = 0``; vacuous in degree 0, where N is the constants."""
    if G.n == 0:
        return True
    if G.is_zero():
        return True
    return G.numerator.total_degree_range()[0] > G.n * (G.n - 1)


def in_N(G: ShuffleElement1) -> Dict[str, bool]:
    return {
        "regular_at_zero": regular_at_zero(G),
        "regular_at_infinity": regular_at_infinity(G),
        "vanishes_at_zero": vanishes_at_zero(G),
    }


# ---------------------------------------------------------------------------
# pointwise evaluation of products (used by the J_p kernel checks)
# ---------------------------------------------------------------------------

Pointwise = Tuple[int, Callable[[Sequence], object]]


def omega_value(params: Params, x, y):
    return params.g(x, y) / (x - y) ** 3


def phi_value(params: Params, us: Sequence, x):
    out = 1
    for u in us:
        out *= (x / params.q - params.q * u) / (x - u)
    return out


def pw_from_sh0(F: ShuffleElement0) -> Pointwise:
    return F.n, lambda a: F.evaluate(a)


def pw_from_sh1(G: ShuffleElement1) -> Pointwise:
    return G.n, lambda a: G.evaluate(a)


def pw_unit() -> Pointwise:
    return 0, lambda a: 1


def pw_left(params: Params, us: Sequence, F: Pointwise, G: Pointwise) -> Pointwise:
    """Pointwise ``F * G`` (Sh0 acting on the left)."""
    m, f = F
    n, g = G
    total = m + n

    def value(a):
        acc = 0
        for S in itertools.combinations(range(total), m):
            rest = [j for j in range(total) if j not in S]
            term = f([a[i] for i in S]) * g([a[j] for j in rest])
            for i in S:
                term *= phi_value(params, us, a[i])
                for j in rest:
                    term *= omega_value(params, a[j], a[i])
            acc += term
        return acc / math.comb(total, m)
    return total, value


def pw_right(params: Params, G: Pointwise, F: Pointwise) -> Pointwise:
    """Pointwise ``G * F`` (Sh0 acting on the right)."""
    n, g = G
    m, f = F
    total = m + n

    def value(a):
        acc = 0
        for S in itertools.combinations(range(total), m):
            rest = [j for j in range(total) if j not in S]
            term = f([a[i] for i in S]) * g([a[j] for j in rest])
            for i in S:
                for j in rest:
                    term *= omega_value(params, a[i], a[j])
            acc += term
        return acc / math.comb(total, m)
    return total, value


def pw_sh0_product(params: Params, A: Pointwise, B: Pointwise) -> Pointwise:
    """Pointwise ``A * B`` in Sh0."""
    m, f = A
    n, g = B
    total = m + n

    def value(a):
        acc = 0
        for S in itertools.combinations(range(total), m):
            rest = [j for j in range(total) if j not in S]
            term = f([a[i] for i in S]) * g([a[j] for j in rest])
            for i in S:
                for j in rest:
                    term *= omega_value(params, a[j], a[i])
            acc += term
        return acc / math.comb(total, m)
    return total, value


def pw_monomial(params: Params, k: int) -> Pointwise:
    return 1, lambda a: a[0] ** k


# ---------------------------------------------------------------------------
# J_p spanning sets
# ---------------------------------------------------------------------------


@dataclass
class JpGenerator:
    label: str
    size: int
    value: Callable[[Sequence], object]


@dataclass
class JpSpanningSet:
    p: object
    n_total: int
    window: int
    generators: List[JpGenerator]

    def max_abs(self, a: Sequence):
        return max((abs(g.value(a)) for g in self.generators), default=0)


def sh0_spanning(params: Params, m: int, window: int) -> List[Tuple[str, Pointwise]]:
    """Products ``x^{k_1} * ... * x^{k_m}`` with ``|k_i| <= window`` (nondecreasing)."""
    out = []
    for ks in itertools.combinations_with_replacement(range(-window, window + 1), m):
        el = pw_monomial(params, ks[0])
        for k in ks[1:]:
            el = pw_sh0_product(params, el, pw_monomial(params, k))
        out.append((f"x^{list(ks)}", el))
    return out


def sh1_spanning(params: Params, us: Sequence, m: int, window: int,
                 kappa_basis: bool = True) -> List[Tuple[str, Pointwise]]:
    """Elements of ``Sh_{1,m}``: e-words on the unit, plus the kappa basis (k = 1)."""
    out: List[Tuple[str, Pointwise]] = []
    if m == 0:
        return [("1", pw_unit())]
    for ks in itertools.product(range(-window, window + 1), repeat=m):
        el = pw_unit()
        for k in reversed(ks):
            el = pw_left(params, us, (1, lambda a, k=k: params.c1 * a[0] ** k), el)
        out.append((f"e{list(ks)}.1", el))
    if kappa_basis and len(us) == 1:
        from .partitions import partitions
        for lam in partitions(m):
            out.append((f"kappa{lam}", pw_from_sh1(kappa_map(params, lam, us[0]))))
    return out


def jp_spanning(params: Params, us: Sequence, p, n_total: int, window: int = 1,
                kappa_basis: bool = True) -> JpSpanningSet:
    """Generators ``G * F - p^{deg F} F * G`` with ``deg G + deg F = n_total``.

    ``p = 0`` gives the right-ideal generators of ``J_0``.
    """
    us = tuple(params.scalar(u) for u in us)
    gens = []
    for m in range(1, n_total + 1):
        Fs = sh0_spanning(params, m, window)
        Gs = sh1_spanning(params, us, n_total - m, window, kappa_basis)
        for (gl, G), (fl, F) in itertools.product(Gs, Fs):
            right = pw_right(params, G, F)[1]
            left = pw_left(params, us, F, G)[1]
            pm = p ** m

            def value(a, right=right, left=left, pm=pm):
                return right(a) - pm * left(a)
            gens.append(JpGenerator(f"{gl}*{fl} - p^{m} {fl}*{gl}", n_total, value))
    return JpSpanningSet(p, n_total, window, gens)
