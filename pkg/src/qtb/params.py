"""Algebra parameters, derived constants and the scalar contract.

Two scalar backends share one interface: exact rationals
(:class:`fractions.Fraction`) for identity testing and ``mpmath.mpc`` for
spectra and root finding.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

EXACT = "exact"
FLOAT = "float"

DEFAULT_PRECISION = 40
DEFAULT_GENERICITY_BOUND = 12


class ParameterError(ValueError):
    """Raised for non-generic or malformed parameters."""


class PoleError(ZeroDivisionError):
    """Evaluation hit a pole of a rational function."""


def parse_scalar(text, mode: str = EXACT):
    """Parse ``"a/b"``, ``"re,im"``, a number or an ``[re, im]`` pair."""
    if isinstance(text, (list, tuple)):
        re_, im_ = text
        if mode == EXACT:
            if Fraction(str(im_)) != 0:
                raise ParameterError("complex values need float mode")
            return Fraction(str(re_))
        return mpmath.mpc(mpmath.mpf(str(re_)), mpmath.mpf(str(im_)))
    if isinstance(text, (int, Fraction)):
        return Fraction(text) if mode == EXACT else mpmath.mpc(text)
    if isinstance(text, float):
        if mode == EXACT:
            return Fraction(str(text))
        return mpmath.mpc(str(text))
    if isinstance(text, (mpmath.mpf, mpmath.mpc)):
        if mode == EXACT:
            raise ParameterError("mpmath values need float mode")
        return mpmath.mpc(text)
    s = str(text).strip()
    if "," in s:
        re_, im_ = s.split(",", 1)
        return parse_scalar([re_.strip(), im_.strip()], mode)
    if mode == EXACT:
        try:
            return Fraction(s)
        except ValueError as exc:
            raise ParameterError(f"cannot parse {text!r} as a rational") from exc
    if "/" in s:
        num, den = s.split("/", 1)
        return mpmath.mpc(mpmath.mpf(num)) / mpmath.mpf(den)
    return mpmath.mpc(mpmath.mpf(s))


def format_scalar(x):
    """JSON-friendly rendering: ``"a/b"`` for rationals, ``[re, im]`` otherwise."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    x = mpmath.mpc(x)
    return [mpmath.nstr(x.real, mpmath.mp.dps), mpmath.nstr(x.imag, mpmath.mp.dps)]


def to_complex(x) -> complex:
    if isinstance(x, Fraction):
        return complex(float(x))
    return complex(x)


@dataclass(frozen=True)
class Params:
    """Parameters ``q, q1`` with ``q2 = q**2`` and ``q3 = 1/(q1 q2)``.

    ``mode`` selects the scalar backend.  In float mode ``precision`` is
    the number of decimal digits mpmath works with.
    """

    q: object
    q1: object
    mode: str = EXACT
    precision: int = DEFAULT_PRECISION
    genericity_bound: int = DEFAULT_GENERICITY_BOUND
    q2: object = field(init=False, repr=False)
    q3: object = field(init=False, repr=False)

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.mode == FLOAT and mpmath.mp.dps < self.precision:
            mpmath.mp.dps = self.precision
        q = self.scalar(self.q)
        q1 = self.scalar(self.q1)
        if q == 0 or q1 == 0:
            raise ParameterError("q and q1 must be nonzero")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q2", q * q)
        object.__setattr__(self, "q3", 1 / (q1 * q * q))
        self._check_generic()

    # -- scalar contract -------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def scalar(self, x):
        if self.mode == EXACT:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            return parse_scalar(x, EXACT)
        if isinstance(x, mpmath.mpc):
            return x
        if isinstance(x, (int, Fraction)):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator) if isinstance(x, Fraction) else mpmath.mpc(x)
        return parse_scalar(x, FLOAT)

    @property
    def zero(self):
        return Fraction(0) if self.exact else mpmath.mpc(0)

    @property
    def one(self):
        return Fraction(1) if self.exact else mpmath.mpc(1)

    @property
    def tolerance(self):
        """Zero threshold: exact zero in exact mode, ``10**(-precision+5)`` otherwise."""
        if self.exact:
            return 0
        return mpmath.mpf(10) ** (-(self.precision - 5))

    def is_zero(self, x, scale=1) -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self.tolerance * max(1, abs(scale))

    def _check_generic(self):
        # q1^l q2^m q3^n = 1 iff q1^(l-n) q2^(m-n) = 1, so two exponents suffice.
        b = self.genericity_bound
        for a in range(-b, b + 1):
            pa = self.q1 ** a
            for c in range(-b, b + 1):
                if a == 0 and c == 0:
                    continue
                val = pa * self.q2 ** c
                if self.exact:
                    bad = val == 1
                else:
                    bad = abs(val - 1) < mpmath.mpf(10) ** (-(self.precision // 2))
                if bad:
                    raise ParameterError(
                        f"non-generic parameters: q1^{a} q2^{c} = 1"
                    )

    # -- derived constants -------------------------------------------------
    def qs(self):
        return (self.q1, self.q2, self.q3)

    def kappa(self, r: int):
        return (1 - self.q1 ** r) * (1 - self.q2 ** r) * (1 - self.q3 ** r)

    @property
    def c1(self):
        return self.q3 / ((1 - self.q1) * (1 - self.q3))

    @property
    def c2(self):
        return (1 / self.q3) / (1 - self.q2)

    def gamma(self, r: int, us: Sequence):
        """Vacuum eigenvalue of ``h_r`` on the tensor product of Fock modules."""
        if r == 0:
            raise ValueError("gamma is defined for r != 0")
        return (1 - self.q2 ** r) / (r * self.kappa(r)) * sum(
            (self.scalar(u) ** r for u in us), self.zero
        )

    def g(self, z, w):
        return (z - self.q1 * w) * (z - self.q2 * w) * (z - self.q3 * w)

    def phi(self, u, z):
        """Lowest weight ``(q^-1 - q u/z) / (1 - u/z)``; ``u`` may be a list."""
        if isinstance(u, (list, tuple)):
            out = self.one
            for ui in u:
                out *= self.phi(ui, z)
            return out
        u = self.scalar(u)
        if self.exact and z == u or (not self.exact and abs(z - u) == 0):
            raise PoleError(f"phi(u, z) has a pole at z = u = {u}")
        return (z / self.q - self.q * u) / (z - u)

    def phi_limit(self, where: str):
        """``phi(u, 0) = q`` and ``phi(u, oo) = 1/q``."""
        if where == "0":
            return self.q
        if where == "inf":
            return 1 / self.q
        raise ValueError(where)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "q": format_scalar(self.q),
            "q1": format_scalar(self.q1),
            "mode": self.mode,
            "precision": self.precision,
        }

    @classmethod
    def from_json(cls, data) -> "Params":
        if isinstance(data, str):
            data = json.loads(data)
        mode = data.get("mode", EXACT)
        precision = int(data.get("precision", default_precision()))
        if mode == FLOAT and mpmath.mp.dps < precision:
            mpmath.mp.dps = precision
        return cls(
            parse_scalar(data["q"], mode),
            parse_scalar(data["q1"], mode),
            mode=mode,
            precision=precision,
        )

    def with_mode(self, mode: str, precision: int | None = None) -> "Params":
        if mode == self.mode:
            return self
        prec = precision or self.precision
        if mode == FLOAT:
            if mpmath.mp.dps < prec:
                mpmath.mp.dps = prec
            return Params(self.scalar_to_mpc(self.q), self.scalar_to_mpc(self.q1), FLOAT, prec)
        raise ParameterError("cannot convert float parameters to exact mode")

    @staticmethod
    def scalar_to_mpc(x):
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
        return mpmath.mpc(x)


def default_precision() -> int:
    env = os.environ.get("QTB_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


def default_exact() -> Params:
    """Small generic rational point used throughout the test-suite."""
    return Params(Fraction(2), Fraction(3))


def default_float(precision: int | None = None) -> Params:
    """Generic complex point: q = 1.21, q1 = 2.3 exp(0.3 i)."""
    prec = precision or default_precision()
    if mpmath.mp.dps < prec:
        mpmath.mp.dps = prec
    q1 = mpmath.mpf("2.3") * mpmath.exp(mpmath.mpc(0, mpmath.mpf("0.3")))
    return Params(mpmath.mpc("1.21"), q1, FLOAT, prec)


def as_tuple(us: Iterable, params: Params) -> tuple:
    return tuple(params.scalar(u) for u in us)
