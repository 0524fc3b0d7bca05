"""The off-shell Bethe covector on the boson basis of ``F(u)*``.

With ``nu*(p_mu) = h~_mu`` (``h~_r = r (1-q1^r) q^r q3^r h_r``) and the twist
``alpha(h_r) = (1 - p^r q^r) h_r`` the covector is

    sum_lambda (q1-1)^{-|lambda|} / prod(lambda_i!) ev_a(eps_lambda * 1) <0| alpha(nu*(m_lambda))

where ``eps_lambda`` is the shuffle product of the rows
``eps_n = prod_{i<j} (x_i - q3 x_j)(x_i - q3^{-1} x_j)/(x_i - x_j)^2``.
Only ``|lambda| = n`` survives the evaluation at ``n`` roots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence

import mpmath

from .bimodule import kappa_map, phi_value
from .fock import BosonFock, integral_operator
from .params import Params
from .partitions import Partition, partitions
from .shuffle import (
    ShuffleElement0,
    element_is_member,
    epsilon_element,
    generator,
    heisenberg_norm,
    shuffle_product,
    sigma_h_perp_minus,
    tilde_weight,
)
from .symfunc import m_coefficient_in_p


def epsilon_q3(params: Params, lam: Partition) -> ShuffleElement0:
    """``eps^{(q3)}_lambda``; membership in Sh0 is checked."""
    el = epsilon_element(params, lam.parts, params.q3)
    ok, report = element_is_member(el)
    if not ok:
        raise ArithmeticError(f"eps_{lam} violates a wheel condition: {report}")
    return el


def epsilon_q1(params: Params, lam: Partition) -> ShuffleElement0:
    """The same product with ``q3`` replaced by ``q1``."""
    return epsilon_element(params, lam.parts, params.q1)


def evaluate_epsilon(params: Params, lam: Partition, a: Sequence, u=1, side: str = "left"):
    """``ev_a`` of the bimodule image of ``eps_lambda``.

    ``side="left"`` is ``eps_lambda * 1`` (carries ``prod phi(u, a_i)``);
    ``side="right"`` is ``1 * eps_lambda``.  Zero unless ``|lambda| = len(a)``.
    """
    if lam.size != len(a):
        return params.zero
    value = epsilon_q3(params, lam).evaluate(list(a))
    if side == "left":
        for x in a:
            value *= phi_value(params, (params.scalar(u),), x)
    elif side != "right":
        raise ValueError(f"unknown side {side!r}")
    return value


def alpha_factor(params: Params, p, nu: Sequence[int]):
    """``prod_i (1 - p^{nu_i} q^{nu_i})``."""
    p = params.scalar(p)
    out = params.one
    for r in nu:
        out *= 1 - (p * params.q) ** r
    return out


@dataclass
class OffShellVector:
    """Coefficients of the covector on ``h^perp_{-nu}|0>``, ``nu |- n``."""

    n: int
    coefficients: Dict[Partition, object]

    def as_list(self) -> list:
        return [self.coefficients[nu] for nu in partitions(self.n)]

    def to_json(self) -> dict:
        out = {}
        for nu, c in self.coefficients.items():
            c = Params.scalar_to_mpc(c)
            out[str(nu)] = [float(mpmath.re(c)), float(mpmath.im(c))]
        return out


def build_offshell(params: Params, a: Sequence, p, u=1, side: str = "left") -> OffShellVector:
    n = len(a)
    evs = {lam: evaluate_epsilon(params, lam, a, u, side) for lam in partitions(n)}
    pref = 1 / (params.q1 - 1) ** n if n else params.one
    coeffs = {}
    for nu in partitions(n):
        weight = tilde_weight(params, nu.parts) * alpha_factor(params, p, nu.parts) * heisenberg_norm(params, nu.parts)
        total = params.zero
        for lam, ev in evs.items():
            c = m_coefficient_in_p(lam, nu)
            if c:
                total += pref / lam.factorial_of_parts() * ev * params.scalar(c)
        coeffs[nu] = total * weight
    return OffShellVector(n, coeffs)


def kappa_covector(params: Params, a: Sequence, u=1) -> OffShellVector:
    """``nu -> ev_a(kappa(h^perp_{-nu}|0>))``: the evaluation functional restricted to N."""
    n = len(a)
    return OffShellVector(n, {nu: kappa_map(params, nu, u).evaluate(list(a)) for nu in partitions(n)})


def left_eigen_residual(params: Params, w: Sequence, matrix: Sequence[Sequence], eigenvalue):
    """``|w M - E w| / |w|`` (max norms)."""
    size = len(w)
    scale = max((abs(Params.scalar_to_mpc(x)) for x in w), default=0)
    if scale == 0:
        return mpmath.inf
    worst = mpmath.mpf(0)
    for j in range(size):
        s = sum((w[i] * matrix[i][j] for i in range(size)), params.zero)
        worst = max(worst, abs(Params.scalar_to_mpc(s - eigenvalue * w[j])))
    return worst / scale


def proportionality_defect(v: Sequence, w: Sequence):
    """``min_c |v - c w| / |v|`` via the best least-squares ``c``."""
    v = [Params.scalar_to_mpc(x) for x in v]
    w = [Params.scalar_to_mpc(x) for x in w]
    ww = mpmath.fsum(abs(x) ** 2 for x in w)
    if ww == 0:
        return mpmath.inf
    c = mpmath.fsum(mpmath.conj(y) * x for x, y in zip(v, w)) / ww
    scale = max(abs(x) for x in v)
    return max(abs(x - c * y) for x, y in zip(v, w)) / scale


def check_eigenvector(params: Params, a: Sequence, p, u=1, side: str = "left") -> dict:
    """Off-shell covector at ``a`` against the degree-n block of the first integral."""
    n = len(a)
    w = build_offshell(params, a, p, u, side).as_list()
    M = integral_operator(params, u, p, n)
    E = -mpmath.fsum(a) + params.gamma(1, (params.scalar(u),))
    return {"residual": left_eigen_residual(params, w, M, E), "eigenvalue": E, "covector": w}


# ---------------------------------------------------------------------------
# the canonical element identity
# ---------------------------------------------------------------------------


def kn_lhs(params: Params, mu: Partition) -> ShuffleElement0:
    """Coefficient of ``h^perp_mu`` on the left: ``sigma(h_{-mu}) / <h_mu h_{-mu}>`` with
    ``sigma(h_{-mu})`` assembled as the product of the one-part images."""
    parts = [sigma_h_perp_minus(params, [r]) for r in mu.parts]
    el = ShuffleElement0.unit(params)
    for x in parts:
        el = shuffle_product(el, x)
    return el.scale(1 / heisenberg_norm(params, mu.parts))


def kn_rhs(params: Params, mu: Partition) -> ShuffleElement0:
    """Coefficient of ``h^perp_mu`` on the right:
    ``sum_lambda (q1-1)^{-n} / prod(lambda_i!) <p_mu, m_lambda> h~-weight eps_lambda``."""
    n = mu.size
    out = ShuffleElement0.zero(params, n)
    pref = tilde_weight(params, mu.parts) / (params.q1 - 1) ** n
    for lam in partitions(n):
        c = m_coefficient_in_p(lam, mu)
        if c:
            out = out + epsilon_q3(params, lam).scale(pref * params.scalar(c) / lam.factorial_of_parts())
    return out


def _regular(F: ShuffleElement0) -> bool:
    """Finite limits of ``F(t x_1..t x_k, x_{k+1}..)`` at ``t -> 0`` and ``t -> oo``."""
    n = F.n
    if F.is_zero():
        return True
    for k in range(1, n + 1):
        lo, hi = F.numerator.total_degree_range(list(range(k)))
        if lo < k * (k - 1) or hi > k * (k - 1) + 2 * k * (n - k):
            return False
    return True


def verify_Kn(params: Params, degree: int) -> Dict[str, object]:
    """Checks of the canonical-element identity in degrees ``1..degree``.

    ``kn-coefficient``: left and right sides agree coefficient-wise, where the
    left side multiplies one-part images (independent for multi-part ``mu``).
    ``sigma-h1``: ``sigma(h_{-1}) = c1`` (independent: ``h^perp_{-1} = e_0``).
    ``commuting``: the one-part images commute in Sh0 (independent).
    ``regular``: the one-part images have finite limits at 0 and infinity.
    """
    records = []
    for d in range(1, degree + 1):
        for mu in partitions(d):
            diff = kn_lhs(params, mu) - kn_rhs(params, mu)
            ok = diff.is_zero() if params.exact else diff.numerator.max_abs_coeff() < params.tolerance * 1e3
            independent = mu.length > 1
            records.append({"name": "kn-coefficient", "where": str(mu), "pass": ok, "independent": independent})
        records.append({"name": "regular", "where": str(d), "pass": _regular(sigma_h_perp_minus(params, [d])),
                        "independent": True})
    if degree >= 1:
        ok = sigma_h_perp_minus(params, [1]) == generator(params, 0)
        records.append({"name": "sigma-h1", "where": "1", "pass": ok, "independent": True})
    for r, s in itertools.combinations(range(1, degree + 1), 2):
        if r + s > max(degree, 3):
            continue
        A, B = sigma_h_perp_minus(params, [r]), sigma_h_perp_minus(params, [s])
        diff = shuffle_product(A, B) - shuffle_product(B, A)
        ok = diff.is_zero() if params.exact else diff.numerator.max_abs_coeff() < params.tolerance * 1e3
        records.append({"name": "commuting", "where": f"{r},{s}", "pass": ok, "independent": True})
    return {"degree": degree, "records": records, "pass": all(r["pass"] for r in records)}


def boson_vacuum_covector(params: Params, u=1) -> OffShellVector:
    """The degree-0 covector ``<0|``."""
    return OffShellVector(0, {Partition(()): params.one})


def degree_one_covector(params: Params, p, u=1):
    """``<0| (1 - p q) h~_1`` on ``h_{-1}|0>``: the single coefficient."""
    bos = BosonFock(params, u)
    return tilde_weight(params, [1]) * alpha_factor(params, p, [1]) * bos.norm(Partition((1,)))
