"""Bethe equations, continuation from partition contents, and kernel checks.

The equations for roots ``a_1..a_n`` of the k-point module are

    1 = q^{-k} p prod_l (a_i - q2 u_l)/(a_i - u_l)
          prod_{j != i} prod_s (a_j - q_s a_i)/(a_j - q_s^{-1} a_i).

At ``p -> 0`` the solutions tend to the contents ``q3^{i-1} q1^{j-1} u_l``
of k-tuples of partitions, so each tuple seeds one solution path in ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import mpmath

from .bimodule import jp_spanning
from .params import Params, PoleError
from .partitions import Partition, multipartitions, partitions


class ContinuationError(RuntimeError):
    """A continuation path could not be followed to the target ``p``."""

    def __init__(self, message: str, trace: list):
        super().__init__(message)
        self.trace = trace


@dataclass
class BetheSystem:
    params: Params
    us: Tuple
    p: object
    n: int

    def __post_init__(self):
        if self.params.exact:
            raise ValueError("the Bethe solver works in float mode")
        self.us = tuple(self.params.scalar(u) for u in self.us)
        self.p = self.params.scalar(self.p)

    @property
    def k(self) -> int:
        return len(self.us)

    def _check(self, a: Sequence):
        P = self.params
        scale = max([1] + [abs(x) for x in a])
        tiny = P.tolerance * scale
        for i, ai in enumerate(a):
            for u in self.us:
                if abs(ai - u) <= tiny:
                    raise PoleError(f"a_{i} sits on u = {u}")
            for j, aj in enumerate(a):
                if i == j:
                    continue
                for qs in P.qs():
                    if abs(aj - ai / qs) <= tiny:
                        raise PoleError(f"a_{j} = q^-1 a_{i} (pair {i}, {j})")

    def factors(self, a: Sequence, i: int, p=None):
        """Linear factors of equation ``i`` as ``(value, {root index: derivative})``.

        Returns the numerator and denominator lists; the numerator carries
        the constant ``q^{-k} p``.
        """
        P = self.params
        p = self.p if p is None else p
        num = [(p / P.q ** self.k, {})]
        den = []
        for u in self.us:
            num.append((a[i] - P.q2 * u, {i: 1}))
            den.append((a[i] - u, {i: 1}))
        for j, aj in enumerate(a):
            if j == i:
                continue
            for qs in P.qs():
                num.append((aj - qs * a[i], {j: 1, i: -qs}))
                den.append((aj - a[i] / qs, {j: 1, i: -1 / qs}))
        return num, den

    def products(self, a: Sequence, i: int, p=None):
        """Numerator and denominator of the right-hand side for root ``i``."""
        num, den = self.factors(a, i, p)
        return _prod(v for v, _ in num), _prod(v for v, _ in den)

    def residual(self, a: Sequence, p=None) -> list:
        """``R_i = rhs_i - 1`` in rational form."""
        self._check(a)
        out = []
        for i in range(len(a)):
            num, den = self.products(a, i, p)
            out.append(num / den - 1)
        return out

    def cleared(self, a: Sequence, p=None) -> list:
        """``num_i - den_i``: the equations with denominators cleared."""
        return [num - den for num, den in (self.products(a, i, p) for i in range(len(a)))]

    def jacobian(self, a: Sequence, p=None) -> mpmath.matrix:
        """Analytic Jacobian of :meth:`cleared` by the product rule (no division)."""
        n = len(a)
        J = mpmath.matrix(n, n)
        for i in range(n):
            num, den = self.factors(a, i, p)
            for sign, fs in ((1, num), (-1, den)):
                vals = [v for v, _ in fs]
                for t, (_, grad) in enumerate(fs):
                    if not grad:
                        continue
                    rest = _prod(vals[:t] + vals[t + 1:])
                    for l, d in grad.items():
                        J[i, l] += sign * d * rest
        return J

    def residual_norm(self, a: Sequence, p=None):
        return max((abs(r) for r in self.residual(a, p)), default=mpmath.mpf(0))


def _prod(values) -> mpmath.mpc:
    out = mpmath.mpc(1)
    for v in values:
        out *= v
    return out


@dataclass
class BetheState:
    params: Params
    us: Tuple
    p: object
    roots: List
    seed: Tuple[Partition, ...]
    residual_norm: object
    converged: bool = True
    trace: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def eigenvalue(self):
        """``-sum a_i + gamma_1(u)``."""
        return -mpmath.fsum(self.roots) + self.params.gamma(1, self.us)

    def canonical_roots(self) -> list:
        return sorted(self.roots, key=lambda z: (float(abs(z)), float(mpmath.arg(z))))

    def to_json(self) -> dict:
        ev = self.eigenvalue
        return {
            "seed": [list(lam.parts) for lam in self.seed],
            "roots": [[float(mpmath.re(z)), float(mpmath.im(z))] for z in self.canonical_roots()],
            "eigenvalue": [float(mpmath.re(ev)), float(mpmath.im(ev))],
            "residual": float(self.residual_norm),
            "converged": self.converged,
        }


def seed_roots(params: Params, us: Sequence, seed: Sequence[Partition]) -> list:
    """Contents ``q3^{i-1} q1^{j-1} u_l`` of the seed partitions."""
    out = []
    for lam, u in zip(seed, us):
        out += lam.contents(params.q1, params.q3, params.scalar(u))
    return out


def newton(system: BetheSystem, a: list, p, tol, maxiter: int = 60) -> Tuple[list, bool]:
    """Damped Newton on the cleared equations; success means the rational residual is below ``tol``."""
    a = list(a)
    for _ in range(maxiter):
        try:
            if system.residual_norm(a, p) < tol:
                return a, True
        except PoleError:
            pass  # seeds sit on poles of the rational form; the cleared form is fine
        try:
            F = system.cleared(a, p)
            J = system.jacobian(a, p)
            step = mpmath.lu_solve(J, mpmath.matrix(F))
        except (ZeroDivisionError, PoleError):
            return a, False
        size = max(abs(step[i]) for i in range(len(a)))
        scale = max(1, max(abs(x) for x in a))
        if size > 0.5 * scale:
            step = step * (0.5 * scale / size)
        a = [a[i] - step[i] for i in range(len(a))]
    try:
        return a, system.residual_norm(a, p) < tol
    except PoleError:
        return a, False


def default_tolerance(params: Params):
    return max(mpmath.mpf(10) ** (-(params.precision - 10)), mpmath.mpf(10) ** -60)


def solve_from_seed(system: BetheSystem, seed: Sequence[Partition], steps: int = 40,
                    p_start_abs=mpmath.mpf("1e-3"), tol=None, max_halvings: int = 24) -> BetheState:
    """Follow the seed's solution from ``|p| = p_start_abs`` to ``system.p``.

    The path is geometric in ``p`` along the ray of the target; a failed
    Newton correction halves the step.  Raises :class:`ContinuationError`.
    """
    P = system.params
    seed = tuple(seed)
    if sum(lam.size for lam in seed) != system.n or len(seed) != system.k:
        raise ValueError("seed sizes do not match the system")
    tol = default_tolerance(P) if tol is None else tol
    if system.n == 0:
        return BetheState(P, system.us, system.p, [], seed, mpmath.mpf(0))
    target = system.p
    if abs(target) == 0:
        raise ValueError("p = 0 has no finite Bethe roots; use p != 0")
    start = target / abs(target) * p_start_abs if abs(target) > p_start_abs else target
    ratio = target / start
    a = seed_roots(P, system.us, seed)
    trace = []
    t, dt = mpmath.mpf(0), mpmath.mpf(1) / steps
    a, ok = newton(system, a, start, tol)
    trace.append({"p": complex(start), "ok": ok})
    if not ok:
        raise ContinuationError(f"Newton failed at the start of the path for seed {seed}", trace)
    halvings = 0
    while t < 1:
        t_next = min(mpmath.mpf(1), t + dt)
        p_next = start * ratio ** t_next
        b, ok = newton(system, a, p_next, tol)
        if ok and _distinct(b, P):
            a, t = b, t_next
            trace.append({"p": complex(p_next), "ok": True})
            halvings = max(0, halvings - 1)
            dt = min(dt * 2, mpmath.mpf(1) / steps)
        else:
            trace.append({"p": complex(p_next), "ok": False})
            dt /= 2
            halvings += 1
            if halvings > max_halvings:
                raise ContinuationError(f"step size collapsed for seed {seed}", trace)
    return BetheState(P, system.us, target, a, seed, system.residual_norm(a), True, trace)


def _distinct(a: Sequence, params: Params) -> bool:
    for x, y in itertools.combinations(a, 2):
        if abs(x - y) < mpmath.mpf(10) ** -8 * max(1, abs(x)):
            return False
    return True


def seeds(n: int, k: int = 1) -> List[Tuple[Partition, ...]]:
    if k == 1:
        return [(lam,) for lam in partitions(n)]
    return [tuple(t) for t in multipartitions(n, k)]


def same_state(a: BetheState, b: BetheState, tol=1e-6) -> bool:
    ra, rb = a.canonical_roots(), b.canonical_roots()
    return len(ra) == len(rb) and all(abs(x - y) < tol * max(1, abs(x)) for x, y in zip(ra, rb))


def solve_all(params: Params, us: Sequence, p, n: int, steps: int = 40) -> List[BetheState]:
    """One state per seed; failed paths are returned with ``converged = False``.

    States whose roots coincide (to 1e-6) with an earlier state are dropped.
    """
    system = BetheSystem(params, tuple(us), p, n)
    out: List[BetheState] = []
    for seed in seeds(n, len(system.us)):
        try:
            state = solve_from_seed(system, seed, steps)
        except ContinuationError as exc:
            roots = seed_roots(params, system.us, seed)
            out.append(BetheState(params, system.us, system.p, roots, seed, mpmath.inf, False, exc.trace))
            continue
        if not any(s.converged and same_state(s, state) for s in out):
            out.append(state)
    return out


def closed_form_root(params: Params, p, u=1):
    """The single root for ``n = 1``, ``k = 1``: ``u (1 - p q)/(1 - p/q)``."""
    p = params.scalar(p)
    u = params.scalar(u)
    return u * (1 - p * params.q) / (1 - p / params.q)


@dataclass
class KernelReport:
    max_abs: object
    control: object
    generators: int

    def to_json(self) -> dict:
        return {"kernel_max": float(self.max_abs), "control": float(self.control), "generators": self.generators}


def perturbation(n: int, size=mpmath.mpf("1e-2")) -> list:
    """A fixed, non-symmetric complex perturbation of norm about ``size``."""
    return [size * mpmath.expj(0.7 + 1.3 * i) for i in range(n)]


def verify_kernel(state: BetheState, window: int = 1, kappa_basis: bool = True) -> KernelReport:
    """``max |ev_a(g)|`` over the ``J_p`` generators, plus the same at perturbed roots."""
    span = jp_spanning(state.params, state.us, state.p, state.n, window, kappa_basis)
    value = span.max_abs(state.roots)
    moved = [a + d for a, d in zip(state.roots, perturbation(state.n))]
    control = span.max_abs(moved)
    return KernelReport(value, control, len(span.generators))
