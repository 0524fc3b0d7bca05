"""The shuffle algebra Sh0 of symmetric rational functions.

An element of ``Sh_{0,n}`` is stored as its symmetric Laurent numerator
``f`` over the implicit denominator ``prod_{i<j} (x_i - x_j)**2``.
Elements of the bimodule ``Sh_1(u)`` live in :mod:`qtb.bimodule` and share
the product kernel defined here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from collections import Counter
from typing import Dict, List, Sequence, Tuple

from .laurent import LaurentPoly, LinearForm, RationalFn, SizeError
from .params import Params

MAX_VARS = 8


# ---------------------------------------------------------------------------
# polynomial building blocks
# ---------------------------------------------------------------------------


def g_poly(params: Params, nvars: int, i: int, j: int) -> LaurentPoly:
    """``g(x_i, x_j) = (x_i - q1 x_j)(x_i - q2 x_j)(x_i - q3 x_j)``."""
    q1, q2, q3 = params.qs()
    e1 = q1 + q2 + q3
    e2 = q1 * q2 + q1 * q3 + q2 * q3
    e3 = q1 * q2 * q3
    terms = {}
    for a, c in ((3, params.one), (2, -e1), (1, e2), (0, -e3)):
        e = [0] * nvars
        e[i] += a
        e[j] += 3 - a
        terms[tuple(e)] = c
    return LaurentPoly(nvars, terms)


def binomial_poly(params: Params, nvars: int, i: int, c, j: int | None = None) -> LaurentPoly:
    """``x_i - c x_j`` (or ``x_i - c`` when ``j`` is None)."""
    e = [0] * nvars
    e[i] = 1
    terms = {tuple(e): params.one}
    f = [0] * nvars
    if j is not None:
        f[j] = 1
    key = tuple(f)
    terms[key] = terms.get(key, 0) - c
    return LaurentPoly(nvars, terms)


def vandermonde(params: Params, nvars: int, idx: Sequence[int]) -> LaurentPoly:
    """``prod_{a<b} (x_{idx[a]} - x_{idx[b]})``."""
    out = LaurentPoly.const(nvars, params.one)
    for a, b in itertools.combinations(idx, 2):
        out = out * binomial_poly(params, nvars, a, params.one, b)
    return out


def divide_by_vandermonde(params: Params, poly: LaurentPoly) -> LaurentPoly:
    """Exact quotient of an antisymmetric polynomial by the Vandermonde."""
    n = poly.nvars
    for a, b in itertools.combinations(range(n), 2):
        if params.exact:
            poly = poly.divide_linear(a, params.one, b)
        else:
            poly = poly.divide_linear_approx(a, params.one, b, params.tolerance)
    return poly


def _shuffle_sign(subset: Sequence[int], n: int) -> int:
    """``(-1)^{#{i in S, j not in S, i < j}}``."""
    s = set(subset)
    count = 0
    for i in subset:
        count += sum(1 for j in range(i + 1, n) if j not in s)
    return -1 if count % 2 else 1


def _subset_permutation(subset: Sequence[int], n: int) -> List[int]:
    rest = [j for j in range(n) if j not in set(subset)]
    return list(subset) + rest


def shuffle_sum(
    params: Params,
    a_num: LaurentPoly,
    b_num: LaurentPoly,
    a_first_kernel: bool,
    a_factor=None,
    b_factor=None,
) -> LaurentPoly:
    """Numerator over ``prod_{i<j}(x_i-x_j)^2`` of the symmetrized product.

    ``A`` (``a`` variables) and ``B`` (``b`` variables) are symmetric
    numerators over their own squared Vandermondes.  The kernel is
    ``omega(x_B, x_A)`` when ``a_first_kernel`` is False and
    ``omega(x_A, x_B)`` otherwise.  ``a_factor``/``b_factor`` are optional
    one-variable polynomials multiplied in for every A (resp. B) variable.
    """
    a, b = a_num.nvars, b_num.nvars
    n = a + b
    if n > MAX_VARS:
        raise SizeError(f"shuffle products support at most {MAX_VARS} variables")
    if a == 0 or b == 0:
        base = a_num.embed(n, list(range(a))) * b_num.embed(n, list(range(a, n)))
        if a_factor is not None:
            for i in range(a):
                base = base * a_factor.embed(n, [i])
        if b_factor is not None:
            for j in range(a, n):
                base = base * b_factor.embed(n, [j])
        return base
    term = a_num.embed(n, list(range(a))) * b_num.embed(n, list(range(a, n)))
    for i in range(a):
        for j in range(a, n):
            if a_first_kernel:
                term = term * g_poly(params, n, i, j)
            else:
                term = term * g_poly(params, n, j, i)
    if a_factor is not None:
        for i in range(a):
            term = term * a_factor.embed(n, [i])
    if b_factor is not None:
        for j in range(a, n):
            term = term * b_factor.embed(n, [j])
    term = term * vandermonde(params, n, range(a)) * vandermonde(params, n, range(a, n))
    flip = -1 if (a_first_kernel and (a * b) % 2) else 1
    total = LaurentPoly(n)
    for subset in itertools.combinations(range(n), a):
        perm = _subset_permutation(subset, n)
        sign = _shuffle_sign(subset, n) * flip
        moved = term.permute(perm)
        total = total + (moved if sign > 0 else -moved)
    quotient = divide_by_vandermonde(params, total)
    return quotient.scale(params.scalar(Fraction(1, math.comb(n, a))))


def substitute_wheel(params: Params, f: LaurentPoly, points) -> LaurentPoly:
    """Substitute ``x_k -> c_k * x`` (``x`` is ``x_0``) for the leading variables."""
    assignments = {}
    for k, c in enumerate(points):
        if k == 0:
            if c != 1:
                raise ValueError("first wheel coordinate must be x itself")
            continue
        assignments[k] = (c, 0)
    return f.substitute(assignments)


def wheel_points(params: Params):
    q1, q2, _ = params.qs()
    return [(params.one, q1, q1 * q2), (params.one, q2, q1 * q2)]


def wheel_violations(params: Params, f: LaurentPoly) -> List[dict]:
    """Report wheel specializations at which ``f`` does not vanish."""
    if f.nvars < 3:
        return []
    out = []
    for pts in wheel_points(params):
        val = substitute_wheel(params, f, pts)
        if not _is_zero_poly(params, val, f):
            out.append({"point": [str(p) for p in pts], "value": val.to_text() if params.exact else repr(val)})
    return out


def _is_zero_poly(params: Params, val: LaurentPoly, ref: LaurentPoly) -> bool:
    if params.exact:
        return val.is_zero()
    scale = max(1, ref.max_abs_coeff())
    return all(abs(c) <= params.tolerance * scale * 1e3 for c in val.terms.values())


# ---------------------------------------------------------------------------
# Sh0 elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShuffleElement0:
    """Element ``f / prod_{i<j}(x_i - x_j)^2`` of ``Sh_{0,n}``."""

    params: Params
    numerator: LaurentPoly

    @property
    def n(self) -> int:
        return self.numerator.nvars

    @classmethod
    def unit(cls, params: Params) -> "ShuffleElement0":
        return cls(params, LaurentPoly.const(0, params.one))

    @classmethod
    def zero(cls, params: Params, n: int) -> "ShuffleElement0":
        return cls(params, LaurentPoly(n))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other: "ShuffleElement0") -> "ShuffleElement0":
        return ShuffleElement0(self.params, self.numerator + other.numerator)

    def __sub__(self, other: "ShuffleElement0") -> "ShuffleElement0":
        return ShuffleElement0(self.params, self.numerator - other.numerator)

    def __neg__(self):
        return ShuffleElement0(self.params, -self.numerator)

    def scale(self, c) -> "ShuffleElement0":
        return ShuffleElement0(self.params, self.numerator.scale(self.params.scalar(c)))

    def __mul__(self, other):
        if isinstance(other, ShuffleElement0):
            return shuffle_product(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement0):
            return NotImplemented
        if self.n != other.n:
            return self.is_zero() and other.is_zero()
        if self.params.exact:
            return self.numerator == other.numerator
        return self.numerator.almost_equal(other.numerator, self.params.tolerance * 1e3)

    def __hash__(self):
        return hash(self.numerator)

    def denominator_forms(self):
        den = {}
        for i, j in itertools.combinations(range(self.n), 2):
            _, form = LinearForm.difference(self.n, i, self.params.one, j)
            den[form] = 2
        return den

    def as_rational(self) -> RationalFn:
        return RationalFn(self.numerator, self.denominator_forms())

    def evaluate(self, point: Sequence):
        return self.as_rational().evaluate(list(point))

    def degree(self) -> int | None:
        """Homogeneous degree of ``F`` (numerator degree minus ``n(n-1)``)."""
        lo, hi = self.numerator.total_degree_range()
        if self.is_zero() or lo != hi:
            return None
        return lo - self.n * (self.n - 1)

    def homogeneous_parts(self) -> Dict[int, "ShuffleElement0"]:
        parts: Dict[int, dict] = {}
        for e, c in self.numerator.terms.items():
            parts.setdefault(sum(e) - self.n * (self.n - 1), {})[e] = c
        return {d: ShuffleElement0(self.params, LaurentPoly(self.n, t)) for d, t in parts.items()}

    def to_text(self) -> str:
        return self.numerator.to_text()


def is_member(params: Params, numerator: LaurentPoly) -> Tuple[bool, List[dict]]:
    """Membership of ``numerator / prod (x_i-x_j)^2`` in ``Sh_{0,n}`` with a report."""
    report = []
    tol = None if params.exact else params.tolerance * 1e3
    if not numerator.is_symmetric(tol):
        report.append({"condition": "symmetry", "detail": "numerator is not symmetric"})
    for v in wheel_violations(params, numerator):
        report.append({"condition": "wheel", **v})
    return (not report, report)


def element_is_member(F: ShuffleElement0) -> Tuple[bool, List[dict]]:
    return is_member(F.params, F.numerator)


def from_rational(params: Params, f: RationalFn) -> ShuffleElement0:
    """Convert a rational function with denominator dividing the canonical one."""
    n = f.nvars
    canon = ShuffleElement0(params, LaurentPoly.const(n, params.one)).denominator_forms()
    num = f.numerator
    for form, m in f.denominator.items():
        need = canon.get(form, 0)
        if m > need:
            raise ValueError(f"denominator factor {form!r} is not canonical")
    for form, m in canon.items():
        extra = m - f.denominator.get(form, 0)
        if extra:
            num = num * form.as_poly() ** extra
    return ShuffleElement0(params, num)


def shuffle_product(F: ShuffleElement0, G: ShuffleElement0) -> ShuffleElement0:
    """``Sym[F(x_1..x_m) G(x_{m+1}..) prod omega(x_{m+j}, x_i)]``."""
    return ShuffleElement0(F.params, shuffle_sum(F.params, F.numerator, G.numerator, False))


def generator(params: Params, i: int) -> ShuffleElement0:
    """Image ``c1 x^i`` of ``e_i``."""
    return ShuffleElement0(params, LaurentPoly.monomial([i], params.c1))


def monomial_element(params: Params, i: int) -> ShuffleElement0:
    return ShuffleElement0(params, LaurentPoly.monomial([i], params.one))


def omega_rational(params: Params, nvars: int, i: int, j: int) -> RationalFn:
    """``omega(x_i, x_j) = g(x_i, x_j) / (x_i - x_j)^3``."""
    s, form = LinearForm.difference(nvars, i, params.one, j)
    return RationalFn(g_poly(params, nvars, i, j), {form: 3})


def serre_summands(params: Params) -> List[LaurentPoly]:
    """The four signed ``omega`` triples of the cubic Serre identity, as
    numerators over ``x_3 * V^3`` with ``V = (x1-x2)(x1-x3)(x2-x3)``
    (0-based indices in code)."""
    g = lambda i, j: g_poly(params, 3, i, j)  # noqa: E731
    weight = LaurentPoly.monomial([0, 1, -1], params.one)
    # w31 w32 w21 and w13 w12 w32 carry -V^3, the other two +V^3
    return [
        -(weight * g(2, 0) * g(2, 1) * g(1, 0)),
        -(weight * g(2, 0) * g(1, 2) * g(1, 0)),
        weight * g(0, 2) * g(0, 1) * g(2, 1),
        weight * g(0, 1) * g(0, 2) * g(1, 2),
    ]


def serre_witness(params: Params) -> RationalFn:
    """``Sym (x2/x3)(w31 w32 w21 - w31 w23 w21 - w13 w12 w32 + w12 w13 w23)``.

    Returned over ``V^3``; the identity asserts the result is zero.
    """
    total = LaurentPoly(3)
    for s in serre_summands(params):
        total = total + s
    anti = total.antisymmetrize().scale(params.scalar(Fraction(1, 6)))
    den = {}
    for i, j in itertools.combinations(range(3), 2):
        _, form = LinearForm.difference(3, i, params.one, j)
        den[form] = 3
    return RationalFn(anti, den)


def commutator(F: ShuffleElement0, G: ShuffleElement0) -> ShuffleElement0:
    return F * G - G * F


def sigma_e_perp_minus(params: Params, m: int) -> ShuffleElement0:
    """Shuffle image of ``e^perp_{-m}``: ``c1 x`` then ``[sigma(e_0), .]``."""
    if m < 1:
        raise ValueError("m must be positive")
    return _sigma_e_perp_cached(params, m)


@lru_cache(maxsize=None)
def _sigma_e_perp_cached(params: Params, m: int) -> ShuffleElement0:
    if m == 1:
        return generator(params, 1)
    prev = _sigma_e_perp_cached(params, m - 1)
    return commutator(generator(params, 0), prev)


def elementary_row(params: Params, n: int, t) -> ShuffleElement0:
    """``prod_{i<j} (x_i - t x_j)(x_i - t^{-1} x_j) / (x_i - x_j)^2``."""
    num = LaurentPoly.const(n, params.one)
    for i, j in itertools.combinations(range(n), 2):
        num = num * binomial_poly(params, n, i, t, j) * binomial_poly(params, n, i, 1 / t, j)
    return ShuffleElement0(params, num)


def product_all(params: Params, elems: Sequence[ShuffleElement0]) -> ShuffleElement0:
    out = ShuffleElement0.unit(params)
    for e in elems:
        out = out * e
    return out


def epsilon_element(params: Params, parts: Sequence[int], t=None) -> ShuffleElement0:
    """``eps_{l1} * eps_{l2} * ...`` with row parameter ``t`` (default ``q3``)."""
    t = params.q3 if t is None else t
    return _epsilon_cached(params, tuple(parts), t)


@lru_cache(maxsize=None)
def _epsilon_cached(params: Params, parts: Tuple[int, ...], t) -> ShuffleElement0:
    if not parts:
        return ShuffleElement0.unit(params)
    if len(parts) == 1:
        return elementary_row(params, parts[0], t)
    return _epsilon_cached(params, parts[:-1], t) * elementary_row(params, parts[-1], t)


def tilde_weight(params: Params, mu: Sequence[int]):
    """``prod_i r (1 - q1^r) q^r q3^r`` over the parts ``r`` of ``mu``
    (the rescaling ``h~_r = r (1 - q1^r) q2^{r/2} q3^r h_r`` with ``q2^{r/2} = q^r``)."""
    out = params.one
    for r in mu:
        out *= r * (1 - params.q1 ** r) * params.q ** r * params.q3 ** r
    return out


def heisenberg_norm(params: Params, mu: Sequence[int]):
    """``<0| h_mu h_{-mu} |0> = prod_r m_r! ((q^r - q^-r) / (r kappa_r))^{m_r}``."""
    out = params.one
    for r, m in Counter(mu).items():
        out *= math.factorial(m) * ((params.q ** r - params.q ** -r) / (r * params.kappa(r))) ** m
    return out


def sigma_h_perp_minus(params: Params, parts: Sequence[int]) -> ShuffleElement0:
    """Shuffle image of ``h^perp_{-mu}`` read off the canonical element.

    Matching the coefficient of ``h^perp_mu`` on both sides of
    ``sum_mu h_mu (x) sigma(h_{-mu}) / <h_mu h_{-mu}> =
    sum_lambda (q1-1)^{-|lambda|} / prod(lambda_i!) nu*(m_lambda) (x) eps_lambda``
    gives ``sigma(h_{-mu}) = N_mu w_mu sum_lambda c_lambda <p_mu, m_lambda> eps_lambda``.
    """
    return _sigma_h_cached(params, tuple(sorted(parts, reverse=True)))


@lru_cache(maxsize=None)
def _sigma_h_cached(params: Params, mu: Tuple[int, ...]) -> ShuffleElement0:
    from .partitions import Partition, partitions
    from .symfunc import m_coefficient_in_p

    n = sum(mu)
    pmu = Partition(mu)
    pref = heisenberg_norm(params, mu) * tilde_weight(params, mu) / (params.q1 - 1) ** n
    out = ShuffleElement0.zero(params, n)
    for lam in partitions(n):
        c = m_coefficient_in_p(lam, pmu)
        if c == 0:
            continue
        coef = pref * params.scalar(c) / lam.factorial_of_parts()
        out = out + epsilon_element(params, lam.parts).scale(coef)
    return out
