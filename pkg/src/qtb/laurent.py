"""Sparse multivariate Laurent polynomials and factored rational functions.

Coefficients are whatever scalars the caller supplies (``Fraction`` in
exact mode, ``mpmath.mpc`` in float mode); only ``+ - * /`` and equality
with zero are used.  Denominators of :class:`RationalFn` are kept as a
multiset of :class:`LinearForm` factors and are never expanded.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple

from .params import PoleError

MAX_SYMMETRIZE = 8

Exps = Tuple[int, ...]


class SizeError(ValueError):
    """Requested size exceeds a supported budget."""


class DivisionError(ArithmeticError):
    """Exact division left a nonzero remainder."""


def _nonzero(c) -> bool:
    return c != 0


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return f"{c}/1"
    return repr(c)


def _frac(c):
    return Fraction(c) if isinstance(c, int) else c


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """Element of ``K[x_0^{+-1}, ..., x_{nvars-1}^{+-1}]``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} vars")
                if _nonzero(c):
                    clean[tuple(e)] = c
        self.terms: Dict[Exps, object] = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def var(cls, nvars: int, i: int, one=Fraction(1)) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): one})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=Fraction(1)) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exps, object]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree_range(self, i: int) -> Tuple[int, int]:
        if not self.terms:
            return (0, 0)
        ds = [e[i] for e in self.terms]
        return (min(ds), max(ds))

    def total_degree_range(self, vars_: Sequence[int] | None = None) -> Tuple[int, int]:
        if not self.terms:
            return (0, 0)
        idx = range(self.nvars) if vars_ is None else vars_
        ds = [sum(e[i] for i in idx) for e in self.terms]
        return (min(ds), max(ds))

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "LaurentPoly"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s != 0:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly(self.nvars)
        return LaurentPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items() if v * c != 0})

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: Dict[Exps, object] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return LaurentPoly._raw(self.nvars, {e: c for e, c in out.items() if c != 0})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        if isinstance(c, LaurentPoly):
            if len(c.terms) != 1:
                raise DivisionError("only division by monomials is supported here")
            (e, v), = c.terms.items()
            inv = tuple(-x for x in e)
            return self.shift(inv).scale(1 / v)
        return self.scale(1 / c)

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise DivisionError("negative powers only for monomials")
            (e, v), = self.terms.items()
            return LaurentPoly._raw(self.nvars, {tuple(k * x for x in e): v ** k})
        out = LaurentPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x^exps``."""
        return LaurentPoly._raw(self.nvars, {_add_exps(e, exps): c for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and (self - other).is_zero()
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def almost_equal(self, other: "LaurentPoly", tol) -> bool:
        diff = self - other
        scale = max(1, self.max_abs_coeff(), other.max_abs_coeff())
        return all(abs(c) <= tol * scale for c in diff.terms.values())

    def chop(self, tol) -> "LaurentPoly":
        """Drop coefficients with modulus below ``tol`` times the largest one."""
        if not self.terms:
            return self
        cut = tol * max(1, self.max_abs_coeff())
        return LaurentPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > cut})

    def map_coeffs(self, f: Callable) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    # -- variable manipulation ---------------------------------------------
    def embed(self, nvars: int, positions: Sequence[int]) -> "LaurentPoly":
        """Rename variable ``i`` to ``positions[i]`` inside ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, p in enumerate(positions):
                ne[p] += e[i]
            out[tuple(ne)] = c
        return LaurentPoly._raw(nvars, out)

    def permute(self, perm: Sequence[int]) -> "LaurentPoly":
        """Apply ``x_i -> x_{perm[i]}``."""
        return self.embed(self.nvars, perm)

    def drop_vars(self, keep: Sequence[int]) -> "LaurentPoly":
        """Project onto the kept variables; the others must not occur."""
        keep = list(keep)
        gone = [i for i in range(self.nvars) if i not in keep]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in gone):
                raise ValueError("dropping a variable that occurs")
            out[tuple(e[i] for i in keep)] = c
        return LaurentPoly._raw(len(keep), out)

    def is_symmetric(self, tol=None) -> bool:
        if self.nvars < 2:
            return True
        gens = [tuple([1, 0] + list(range(2, self.nvars)))]
        if self.nvars > 2:
            gens.append(tuple(list(range(1, self.nvars)) + [0]))
        for g in gens:
            other = self.permute(g)
            if tol is None:
                if not (other == self):
                    return False
            elif not other.almost_equal(self, tol):
                return False
        return True

    def symmetrize(self) -> "LaurentPoly":
        """Orbit average ``(1/n!) sum_sigma f(x_sigma)``."""
        n = self.nvars
        if n > MAX_SYMMETRIZE:
            raise SizeError(f"symmetrization supports at most {MAX_SYMMETRIZE} variables")
        acc: Dict[Exps, object] = defaultdict(int)
        for perm in itertools.permutations(range(n)):
            for e, c in self.terms.items():
                ne = [0] * n
                for i, p in enumerate(perm):
                    ne[p] = e[i]
                acc[tuple(ne)] += c
        fact = math.factorial(n)
        return LaurentPoly(n, {e: c / fact for e, c in acc.items()})

    def antisymmetrize(self) -> "LaurentPoly":
        """``sum_sigma sign(sigma) f(x_sigma)`` (no normalisation)."""
        n = self.nvars
        if n > MAX_SYMMETRIZE:
            raise SizeError(f"antisymmetrization supports at most {MAX_SYMMETRIZE} variables")
        acc: Dict[Exps, object] = defaultdict(int)
        for perm in itertools.permutations(range(n)):
            sgn = _perm_sign(perm)
            for e, c in self.terms.items():
                ne = [0] * n
                for i, p in enumerate(perm):
                    ne[p] = e[i]
                acc[tuple(ne)] += sgn * c
        return LaurentPoly(n, dict(acc))

    # -- substitution and evaluation -----------------------------------------
    def substitute(self, assignments: Mapping[int, object], one=None) -> "LaurentPoly":
        """Substitute variables and return a polynomial in the remaining ones.

        Each assignment maps a variable index to a scalar or to a pair
        ``(c, j)`` meaning ``c * x_j`` (``j`` must survive).  Surviving
        variables are renumbered in increasing order.
        """
        survivors = [i for i in range(self.nvars) if i not in assignments]
        newpos = {v: k for k, v in enumerate(survivors)}
        m = len(survivors)
        out: Dict[Exps, object] = defaultdict(int)
        powcache: Dict[Tuple[int, int], object] = {}

        def power(i, k):
            key = (i, k)
            v = powcache.get(key)
            if v is None:
                a = assignments[i]
                base = a[0] if isinstance(a, tuple) else a
                if k < 0 and base == 0:
                    raise PoleError(f"x{i} -> 0 hits a negative power")
                v = base ** k
                powcache[key] = v
            return v

        for e, c in self.terms.items():
            coef = c
            ne = [0] * m
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if i in newpos:
                    ne[newpos[i]] += k
                else:
                    a = assignments[i]
                    coef = coef * power(i, k)
                    if isinstance(a, tuple):
                        ne[newpos[a[1]]] += k
            out[tuple(ne)] += coef
        return LaurentPoly(m, dict(out))

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = 0
        cache: Dict[Tuple[int, int], object] = {}
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    v = cache.get(key)
                    if v is None:
                        if k < 0 and point[i] == 0:
                            raise PoleError(f"x{i} = 0 with negative exponent")
                        v = point[i] ** k
                        cache[key] = v
                    t = t * v
            total = total + t
        return total

    # -- exact division by linear binomials ----------------------------------
    def divide_linear(self, var: int, c, other: int | None = None) -> "LaurentPoly":
        """Exact quotient by ``x_var - c * x_other`` (or ``x_var - c``)."""
        if other == var:
            raise ValueError("other variable must differ")
        groups: Dict[int, Dict[Exps, object]] = defaultdict(dict)
        for e, v in self.terms.items():
            rest = e[:var] + (0,) + e[var + 1:]
            groups[e[var]][rest] = v
        if not groups:
            return LaurentPoly(self.nvars)
        lo, hi = min(groups), max(groups)
        bump = [0] * self.nvars
        if other is not None:
            bump[other] = 1
        bump = tuple(bump)
        quotient: Dict[int, Dict[Exps, object]] = {}
        carry: Dict[Exps, object] = {}
        # P_d = Q_{d-1} - c x_other Q_d, solved from the top degree downwards.
        for d in range(hi, lo - 1, -1):
            cur = dict(groups.get(d, {}))
            for e, v in carry.items():
                s = cur.get(e, 0) + v
                if s != 0:
                    cur[e] = s
                else:
                    cur.pop(e, None)
            if d == lo:
                if cur:
                    raise DivisionError(f"x{var} - c*x{other} does not divide")
                break
            quotient[d - 1] = cur
            carry = {_add_exps(e, bump): v * c for e, v in cur.items()}
        out = {}
        for d, part in quotient.items():
            for e, v in part.items():
                ne = list(e)
                ne[var] = d
                out[tuple(ne)] = v
        return LaurentPoly(self.nvars, out)

    def divide_linear_approx(self, var: int, c, other: int | None, tol) -> "LaurentPoly":
        """Float-mode division: the remainder is checked against ``tol``."""
        groups: Dict[int, Dict[Exps, object]] = defaultdict(dict)
        for e, v in self.terms.items():
            rest = e[:var] + (0,) + e[var + 1:]
            groups[e[var]][rest] = v
        if not groups:
            return LaurentPoly(self.nvars)
        lo, hi = min(groups), max(groups)
        bump = [0] * self.nvars
        if other is not None:
            bump[other] = 1
        bump = tuple(bump)
        scale = max(1, self.max_abs_coeff())
        quotient: Dict[int, Dict[Exps, object]] = {}
        carry: Dict[Exps, object] = {}
        for d in range(hi, lo - 1, -1):
            cur = dict(groups.get(d, {}))
            for e, v in carry.items():
                cur[e] = cur.get(e, 0) + v
            if d == lo:
                worst = max((abs(v) for v in cur.values()), default=0)
                if worst > tol * scale * 10 ** 3:
                    raise DivisionError(f"remainder {worst} too large in approximate division")
                break
            quotient[d - 1] = cur
            carry = {_add_exps(e, bump): v * c for e, v in cur.items()}
        out = {}
        for d, part in quotient.items():
            for e, v in part.items():
                ne = list(e)
                ne[var] = d
                out[tuple(ne)] = v
        return LaurentPoly(self.nvars, out).chop(tol)

    # -- serialization -------------------------------------------------------
    def sorted_terms(self):
        """Terms in graded lexicographic order (total degree, then exponents)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (f"x{i}" if k == 1 else f"x{i}^{k}") for i, k in enumerate(e) if k
            )
            parts.append(f"({_fmt_coeff(c)})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, nvars: int, text: str) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return cls(nvars)
        terms: Dict[Exps, object] = {}
        for chunk in text.split(" + "):
            head, _, mono = chunk.partition(")")
            c = Fraction(head.lstrip("("))
            e = [0] * nvars
            for factor in filter(None, mono.lstrip("*").split("*")):
                name, _, k = factor.partition("^")
                e[int(name[1:])] += int(k) if k else 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return cls(nvars, terms)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.to_text()})"


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetrize(f):
    """Orbit average over the symmetric group (LaurentPoly or RationalFn)."""
    return f.symmetrize()


# ---------------------------------------------------------------------------
# Linear forms and factored rational functions
# ---------------------------------------------------------------------------


class LinearForm:
    """``sum_i a_i x_i + b`` normalised so the first nonzero ``a_i`` is 1.

    Construction returns the normalising scalar through :meth:`make`.
    """

    __slots__ = ("nvars", "coeffs", "const")

    def __init__(self, nvars: int, coeffs: Mapping[int, object], const):
        self.nvars = nvars
        self.coeffs = tuple(sorted((i, c) for i, c in coeffs.items() if c != 0))
        self.const = const

    @classmethod
    def make(cls, nvars: int, coeffs: Mapping[int, object], const):
        """Return ``(scale, form)`` with ``scale * form == input``.

        A constant input yields ``(value, None)``.
        """
        nz = sorted((i, _frac(c)) for i, c in coeffs.items() if c != 0)
        const = _frac(const)
        if not nz:
            return const, None
        lead = nz[0][1]
        return lead, cls(nvars, {i: c / lead for i, c in nz}, const / lead)

    @classmethod
    def difference(cls, nvars: int, i: int, c, j: int | None = None):
        """``x_i - c x_j`` (or ``x_i - c``), normalised."""
        if j is None:
            return cls.make(nvars, {i: 1}, -c)
        return cls.make(nvars, {i: 1, j: -c}, 0)

    def key(self):
        return (self.nvars, self.coeffs, self.const)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def variables(self):
        return [i for i, _ in self.coeffs]

    def coeff(self, i):
        for j, c in self.coeffs:
            if j == i:
                return c
        return 0

    def evaluate(self, point):
        return sum((c * point[i] for i, c in self.coeffs), self.const)

    def as_poly(self) -> LaurentPoly:
        p = LaurentPoly.const(self.nvars, self.const) if self.const != 0 else LaurentPoly(self.nvars)
        for i, c in self.coeffs:
            p = p + LaurentPoly.var(self.nvars, i).scale(c)
        return p

    def is_binomial(self) -> bool:
        """True for ``x_i - c x_j`` or ``x_i - c`` shapes (exact division supported)."""
        if len(self.coeffs) == 1:
            return True
        return len(self.coeffs) == 2 and self.const == 0

    def divide(self, poly: LaurentPoly) -> LaurentPoly:
        if not self.is_binomial():
            raise DivisionError("division by general linear forms is unsupported")
        (i, _), *rest = self.coeffs
        if rest:
            j, cj = rest[0]
            return poly.divide_linear(i, -cj, j)
        return poly.divide_linear(i, -self.const)

    def divides(self, poly: LaurentPoly) -> bool:
        try:
            self.divide(poly)
        except DivisionError:
            return False
        return True

    def substitute(self, assignments: Mapping[int, object], survivors_nvars: int, newpos):
        """Substitute ``x_i -> scalar`` or ``x_i -> (c, j)``; returns ``(scale, form)``."""
        coeffs: Dict[int, object] = defaultdict(int)
        const = self.const
        for i, c in self.coeffs:
            if i in assignments:
                a = assignments[i]
                if isinstance(a, tuple):
                    coeffs[newpos[a[1]]] += c * a[0]
                else:
                    const = const + c * a
            else:
                coeffs[newpos[i]] += c
        return LinearForm.make(survivors_nvars, dict(coeffs), const)

    def __repr__(self):
        terms = [f"{_fmt_coeff(c)}*x{i}" for i, c in self.coeffs]
        return "(" + " + ".join(terms + [_fmt_coeff(self.const)]) + ")"


class RationalFn:
    """``numerator / prod(factor ** mult)`` with a factored denominator."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPoly, denominator: Mapping[LinearForm, int] | None = None):
        self.numerator = numerator
        self.denominator = Counter({f: m for f, m in (denominator or {}).items() if m})

    @property
    def nvars(self):
        return self.numerator.nvars

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFn":
        return cls(p, {})

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def copy(self) -> "RationalFn":
        return RationalFn(self.numerator, Counter(self.denominator))

    def divide_by_form(self, scale, form: LinearForm | None, power: int = 1) -> "RationalFn":
        """Divide by ``(scale * form) ** power``."""
        num = self.numerator.scale(1 / scale ** power)
        den = Counter(self.denominator)
        if form is not None:
            den[form] += power
        return RationalFn(num, den)

    def multiply_by_form(self, scale, form: LinearForm | None, power: int = 1) -> "RationalFn":
        den = Counter(self.denominator)
        num = self.numerator.scale(scale ** power)
        if form is None:
            return RationalFn(num, den)
        k = min(power, den.get(form, 0))
        if k:
            den[form] -= k
        rest = power - k
        if rest:
            num = num * form.as_poly() ** rest
        return RationalFn(num, den)

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return RationalFn(self.numerator * other.numerator, self.denominator + other.denominator)
        if isinstance(other, LaurentPoly):
            return RationalFn(self.numerator * other, self.denominator)
        return RationalFn(self.numerator.scale(other), self.denominator)

    __rmul__ = __mul__

    def __neg__(self):
        return RationalFn(-self.numerator, self.denominator)

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn.from_poly(other if isinstance(other, LaurentPoly) else LaurentPoly.const(self.nvars, other))
        lcm = Counter(self.denominator)
        for f, m in other.denominator.items():
            lcm[f] = max(lcm[f], m)
        return RationalFn(self._lift(lcm) + other._lift(lcm), lcm).simplify()

    def __sub__(self, other):
        return self + (-other)

    def _lift(self, target: Counter) -> LaurentPoly:
        num = self.numerator
        for f, m in target.items():
            extra = m - self.denominator.get(f, 0)
            if extra:
                num = num * f.as_poly() ** extra
        return num

    def simplify(self) -> "RationalFn":
        """Cancel denominator factors that divide the numerator exactly."""
        num = self.numerator
        den = Counter(self.denominator)
        if num.is_zero():
            return RationalFn(num, {})
        for f in list(den):
            if len(f.coeffs) == 1 and f.const == 0:
                # a bare variable is a unit in the Laurent ring
                (i, _), = f.coeffs
                e = [0] * num.nvars
                e[i] = -den[f]
                num = num.shift(e)
                den[f] = 0
                continue
            if not f.is_binomial():
                continue
            while den[f] > 0:
                try:
                    num = f.divide(num)
                except DivisionError:
                    break
                den[f] -= 1
        return RationalFn(num, +den)

    def symmetrize(self) -> "RationalFn":
        n = self.nvars
        if n > MAX_SYMMETRIZE:
            raise SizeError(f"symmetrization supports at most {MAX_SYMMETRIZE} variables")
        total = None
        for perm in itertools.permutations(range(n)):
            term = self.permute(perm)
            total = term if total is None else total + term
        return total * Fraction(1, math.factorial(n))

    def permute(self, perm) -> "RationalFn":
        num = self.numerator.permute(perm)
        den = Counter()
        scale = 1
        newpos = {i: perm[i] for i in range(self.nvars)}
        for f, m in self.denominator.items():
            s, g = LinearForm.make(self.nvars, {newpos[i]: c for i, c in f.coeffs}, f.const)
            scale = scale * s ** m
            den[g] += m
        return RationalFn((num if scale == 1 else num.scale(1 / scale)), den)

    def substitute(self, assignments: Mapping[int, object]) -> "RationalFn":
        """Substitute scalars or ``(c, j)`` monomials; denominators stay factored.

        Raises :class:`PoleError` naming the factor that vanishes identically.
        """
        survivors = [i for i in range(self.nvars) if i not in assignments]
        newpos = {v: k for k, v in enumerate(survivors)}
        m = len(survivors)
        num = self.numerator.substitute(assignments)
        den = Counter()
        scale = 1
        for f, mult in self.denominator.items():
            s, g = f.substitute(assignments, m, newpos)
            if g is None:
                if s == 0:
                    raise PoleError(f"denominator factor {f!r} vanishes under substitution")
                scale = scale * s ** mult
            else:
                scale = scale * s ** mult
                den[g] += mult
        return RationalFn((num if scale == 1 else num.scale(1 / scale)), den)

    def evaluate(self, point):
        if not self.denominator:
            return self.numerator.evaluate(point)
        d = 1
        for f, m in self.denominator.items():
            v = f.evaluate(point)
            if v == 0:
                raise PoleError(f"pole: factor {f!r} vanishes at the point")
            d = d * v ** m
        return self.numerator.evaluate(point) / d

    def multiplicity_in(self, var: int) -> int:
        return sum(m for f, m in self.denominator.items() if f.coeff(var) != 0)

    def __repr__(self):
        den = " * ".join(f"{f!r}^{m}" for f, m in self.denominator.items()) or "1"
        return f"RationalFn([{self.numerator.to_text()}] / [{den}])"


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------

MAX_POLE_ORDER = 3


def residues_at_zero_and_infinity(f: RationalFn, var: int, k: int = 0, method: str = "poles") -> RationalFn:
    """``(Res_{z=0} + Res_{z=oo}) f(z) z^k dz/z`` with ``z = x_var``.

    ``method="poles"`` uses the residue theorem: minus the sum of residues at
    the finite nonzero poles read off the factored denominator.
    ``method="series"`` expands at ``z = 0`` and ``z = oo`` directly; it
    requires every ``z``-dependent factor to have a monomial ``z``-free part.
    The result lives in the remaining variables (renumbered).
    """
    if method == "poles":
        return _residues_via_poles(f, var, k)
    if method == "series":
        return _residues_via_series(f, var, k)
    raise ValueError(f"unknown method {method!r}")


def _split_z(f: RationalFn, var: int):
    zf, rest = Counter(), Counter()
    for form, m in f.denominator.items():
        (zf if form.coeff(var) != 0 else rest)[form] += m
    return zf, rest


def _taylor_at(f_num: LaurentPoly, var: int, root_scale, root_form, order: int):
    """Expand ``num(z)`` with ``z = root + t`` to order ``t^order``.

    ``root`` is ``root_scale * root_form`` (or the constant ``root_scale`` when
    ``root_form`` is None).  Returns RationalFn coefficients in the original
    variable set with ``x_var`` absent.
    """
    nv = f_num.nvars
    if root_form is None:
        root_poly = LaurentPoly.const(nv, root_scale)
        root_den = None
    else:
        root_poly = root_form.as_poly().scale(root_scale)
        root_den = root_form
    # group numerator by z-power
    groups: Dict[int, LaurentPoly] = defaultdict(lambda: LaurentPoly(nv))
    for e, c in f_num.terms.items():
        rest = e[:var] + (0,) + e[var + 1:]
        groups[e[var]] = groups[e[var]] + LaurentPoly._raw(nv, {rest: c})
    coeffs = [RationalFn(LaurentPoly(nv)) for _ in range(order + 1)]
    for d, part in groups.items():
        # (root + t)^d = sum_j binom(d, j) root^{d-j} t^j, valid for negative d as a series
        for j in range(order + 1):
            b = _gen_binom(d, j)
            if b == 0:
                continue
            pw = d - j
            if pw >= 0:
                term = RationalFn(part * root_poly ** pw * b)
            else:
                if root_form is None:
                    if root_scale == 0:
                        raise PoleError("root at zero in Taylor expansion")
                    term = RationalFn(part * (b / root_scale ** (-pw)))
                else:
                    term = RationalFn(part * (b / root_scale ** (-pw)), {root_den: -pw})
            coeffs[j] = coeffs[j] + term
    return coeffs


def _gen_binom(d: int, j: int):
    num = 1
    for i in range(j):
        num *= d - i
    return Fraction(num, math.factorial(j))


def _residues_via_poles(f: RationalFn, var: int, k: int) -> RationalFn:
    nv = f.nvars
    zf, rest = _split_z(f, var)
    shift = [0] * nv
    shift[var] = k - 1
    num = f.numerator.shift(shift)
    total = RationalFn(LaurentPoly(nv))
    for form, mult in zf.items():
        if mult > MAX_POLE_ORDER:
            raise SizeError(f"pole of order {mult} exceeds supported order {MAX_POLE_ORDER}")
        a = form.coeff(var)
        # root: z = -(form - a z)/a
        others = {i: -c / a for i, c in form.coeffs if i != var}
        rscale, rform = LinearForm.make(nv, others, -form.const / a)
        if rform is None and rscale == 0:
            continue  # pole at z = 0 is not a finite nonzero pole
        order = mult - 1
        series = _taylor_at(num, var, rscale, rform, order)
        # other z-factors: 1/(b z + B) at z = root + t  ->  1/(B0 + b t)
        for other, m2 in zf.items():
            if other is form:
                continue
            b = other.coeff(var)
            at_root = {i: c for i, c in other.coeffs if i != var}
            const = other.const
            # B0 = b*root + rest
            if rform is not None:
                for i, c in rform.coeffs:
                    at_root[i] = at_root.get(i, 0) + b * rscale * c
                const = const + b * rscale * rform.const
            else:
                const = const + b * rscale
            s0, g0 = LinearForm.make(nv, at_root, const)
            if g0 is None and s0 == 0:
                raise PoleError(f"colliding poles {form!r} and {other!r}")
            inv = _inverse_linear_series(nv, s0, g0, b, m2, order)
            series = _series_mul(series, inv, order)
        coef = series[order] * (1 / a ** mult)
        total = total + coef
    result = RationalFn(total.numerator, total.denominator + rest)
    result = result.simplify()
    keep = [i for i in range(nv) if i != var]
    return _drop_var(-result, keep)


def _drop_var(r: RationalFn, keep) -> RationalFn:
    newpos = {v: i for i, v in enumerate(keep)}
    num = r.numerator.drop_vars(keep)
    den = Counter()
    for f, m in r.denominator.items():
        g = LinearForm(len(keep), {newpos[i]: c for i, c in f.coeffs}, f.const)
        den[g] += m
    return RationalFn(num, den)


def _inverse_linear_series(nv, s0, g0, b, power, order):
    """Series of ``(s0*g0 + b t)^(-power)`` up to ``t^order``."""
    out = []
    for j in range(order + 1):
        coeff = _gen_binom(-power, j) * b ** j
        den = Counter()
        scale = s0 ** (power + j)
        if g0 is not None:
            den[g0] = power + j
        out.append(RationalFn(LaurentPoly.const(nv, coeff / scale), den))
    return out


def _series_mul(a, b, order):
    out = []
    for j in range(order + 1):
        acc = RationalFn(LaurentPoly(a[0].nvars))
        for i in range(j + 1):
            if a[i].is_zero() or b[j - i].is_zero():
                continue
            acc = acc + a[i] * b[j - i]
        out.append(acc)
    return out


def _residues_via_series(f: RationalFn, var: int, k: int) -> RationalFn:
    nv = f.nvars
    zf, rest = _split_z(f, var)
    shift = [0] * nv
    shift[var] = k - 1
    num = f.numerator.shift(shift)
    keep = [i for i in range(nv) if i != var]
    res0 = _series_coeff(num, zf, var, nv, at_infinity=False)
    resinf = _series_coeff(num, zf, var, nv, at_infinity=True)
    total = res0 - resinf
    return _drop_var(RationalFn(total, rest).simplify(), keep)


def _series_coeff(num: LaurentPoly, zf: Counter, var: int, nv: int, at_infinity: bool) -> LaurentPoly:
    """Coefficient of ``z^-1`` of ``num(z) / prod zf`` expanded at 0 or at infinity.

    Each factor ``a z + B`` must have ``B`` a monomial (or constant).
    """
    lo, hi = num.degree_range(var)
    total_mult = sum(zf.values())
    # each factor contributes a geometric series; collect the prefactor
    # and the expansion ratio as LaurentPoly monomials in the other variables
    factors = []
    for form, m in zf.items():
        a = form.coeff(var)
        others = [(i, c) for i, c in form.coeffs if i != var]
        if len(others) > 1 or (others and form.const != 0):
            raise ValueError("series residues need monomial z-free parts")
        if others:
            (i, c), = others
            e = [0] * nv
            e[i] = 1
            B = LaurentPoly.monomial(e, c)
        else:
            if form.const == 0:
                raise ValueError("factor vanishing at z=0 is not supported by the series method")
            B = LaurentPoly.const(nv, form.const)
        factors.append((a, B, m))
    # at 0: 1/(B + a z) = (1/B) sum_j (-a z / B)^j ; at oo: 1/(a z) sum_j (-B/(a z))^j
    if at_infinity:
        # z-degree of num/prod <= hi - total_mult; need coefficient of z^-1
        need = hi - total_mult + 1  # number of expansion orders needed (>=0)
        if need < 0:
            return LaurentPoly(nv)
        order = need
    else:
        need = -1 - lo
        if need < 0:
            return LaurentPoly(nv)
        order = need
    # build series in z as dict power -> LaurentPoly (without z)
    series = {0: LaurentPoly.const(nv, 1)}
    for a, B, m in factors:
        if at_infinity:
            base_pow = -1
            inv_lead = LaurentPoly.const(nv, 1 / a)
            ratio = B.scale(-1 / a)  # times z^-1
            step = -1
        else:
            base_pow = 0
            inv_lead = B ** -1
            ratio = (B ** -1).scale(-a)  # times z^+1
            step = 1
        one_factor = {}
        rp = LaurentPoly.const(nv, 1)
        for j in range(order + 1):
            one_factor[base_pow + step * j] = inv_lead * rp
            rp = rp * ratio
        for _ in range(m):
            new = defaultdict(lambda: LaurentPoly(nv))
            for p1, c1 in series.items():
                for p2, c2 in one_factor.items():
                    p = p1 + p2
                    if at_infinity and p < -total_mult - order - 1:
                        continue
                    if not at_infinity and p > order:
                        continue
                    new[p] = new[p] + c1 * c2
            series = dict(new)
    out = LaurentPoly(nv)
    groups: Dict[int, LaurentPoly] = defaultdict(lambda: LaurentPoly(nv))
    for e, c in num.terms.items():
        rest = e[:var] + (0,) + e[var + 1:]
        groups[e[var]] = groups[e[var]] + LaurentPoly._raw(nv, {rest: c})
    for d, part in groups.items():
        s = series.get(-1 - d)
        if s is not None:
            out = out + part * s
    # Res_oo = - coefficient of z^-1 at infinity; caller subtracts.
    return out
