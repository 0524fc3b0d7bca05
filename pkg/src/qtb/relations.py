"""Mode-truncated relation checks for the E' action on Fock modules.

Every check returns a list of records ``{"name", "where", "pass", "max"}``
so the CLI and the tests share one report format.  ``where`` names the
identity being tested; ``max`` is the largest defect seen.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, List

from .fock import BosonFock, PartitionFock, Vec, vadd, vmax, vscale
from .params import Params
from .partitions import Partition, partitions_up_to


def record(name: str, where: str, defect, tol=0) -> dict:
    return {"name": name, "where": where, "pass": bool(abs(defect) <= tol), "max": float(abs(defect))}


def _g_coeffs(params: Params) -> Dict[int, object]:
    """``g(z, w) = sum_a g_a z^a w^{3-a}``."""
    q1, q2, q3 = params.qs()
    e1 = q1 + q2 + q3
    e2 = q1 * q2 + q1 * q3 + q2 * q3
    e3 = q1 * q2 * q3
    return {3: params.one, 2: -e1, 1: e2, 0: -e3}


def _defect(op: Callable[[Vec], Vec], max_degree: int, one) -> object:
    worst = 0
    for lam in partitions_up_to(max_degree):
        worst = max(worst, vmax(op({lam: one})))
    return worst


def _comm(a: Callable[[Vec], Vec], b: Callable[[Vec], Vec]) -> Callable[[Vec], Vec]:
    return lambda v: vadd(a(b(v)), b(a(v)), -1)


def _lin(*pairs) -> Callable[[Vec], Vec]:
    """``sum c_i op_i``."""
    def apply(v):
        out: Vec = {}
        for c, op in pairs:
            out = vadd(out, vscale(op(v), c))
        return out
    return apply


def fock_relations(params: Params, u=1, max_mode: int = 2, max_degree: int = 3) -> List[dict]:
    """E' relations on the partition basis of ``F(u)``, modes ``|k| <= max_mode``."""
    fk = PartitionFock(params, u)
    one = params.one
    tol = 0 if params.exact else params.tolerance * 1e6
    e = lambda k: (lambda v: fk.e_mode(k, v))  # noqa: E731
    f = lambda k: (lambda v: fk.f_mode(k, v))  # noqa: E731
    h = lambda r: (lambda v: fk.h_mode(r, v))  # noqa: E731
    modes = range(-max_mode, max_mode + 1)
    hs = [r for r in modes if r]
    out = []

    worst = 0
    for r in hs:
        for n in modes:
            lhs = _comm(h(r), e(n))
            op = _lin((one, lhs), (one / r, e(n + r)))
            worst = max(worst, _defect(op, max_degree, one))
    out.append(record("he", "[h_r, e_n] = -(1/r) e_{n+r}", worst, tol))

    worst = 0
    for r in hs:
        for n in modes:
            op = _lin((one, _comm(h(r), f(n))), (-one / r, f(n + r)))
            worst = max(worst, _defect(op, max_degree, one))
    out.append(record("hf", "[h_r, f_n] = (1/r) f_{n+r}", worst, tol))

    worst = 0
    for r, s in itertools.product(hs, hs):
        worst = max(worst, _defect(_comm(h(r), h(s)), max_degree, one))
    out.append(record("hh", "[h_r, h_s] = 0 at level C = 1", worst, tol))

    worst = 0
    for k, l in itertools.product(modes, modes):
        m = k + l

        def rhs(v, m=m):
            res: Vec = {}
            for lam, c in v.items():
                val = 0
                if m >= 0:
                    val += fk.psi_modes(lam, m, True)[m]
                if m <= 0:
                    val -= fk.psi_modes(lam, -m, False)[-m]
                if val != 0:
                    res[lam] = c * val / params.kappa(1)
            return res
        op = _lin((one, _comm(e(k), f(l))), (-one, rhs))
        worst = max(worst, _defect(op, max_degree, one))
    out.append(record("ef", "[e_k, f_l] = (psi+_{k+l} - psi-_{k+l}) / kappa_1", worst, tol))

    g = _g_coeffs(params)
    worst_e = worst_f = 0
    for i, j in itertools.product(modes, modes):
        terms_e, terms_f = [], []
        for a, c in g.items():
            b = 3 - a
            terms_e.append((c, _compose(e(i + a), e(j + b))))
            terms_e.append((c, _compose(e(j + a), e(i + b))))
            terms_f.append((c, _compose(f(i + b), f(j + a))))
            terms_f.append((c, _compose(f(j + b), f(i + a))))
        worst_e = max(worst_e, _defect(_lin(*terms_e), max_degree, one))
        worst_f = max(worst_f, _defect(_lin(*terms_f), max_degree, one))
    out.append(record("ee", "g(z,w) e(z) e(w) + g(w,z) e(w) e(z) = 0", worst_e, tol))
    out.append(record("ff", "g(w,z) f(z) f(w) + g(z,w) f(w) f(z) = 0", worst_f, tol))

    worst_e = worst_f = 0
    window = range(-1, 2)
    for a in itertools.product(window, repeat=3):
        terms_e, terms_f = [], []
        for perm in itertools.permutations(range(3)):
            i, j, k = (a[p] for p in perm)
            terms_e.append((one, _comm(e(i), _comm(e(j + 1), e(k - 1)))))
            terms_f.append((one, _comm(f(i), _comm(f(j + 1), f(k - 1)))))
        worst_e = max(worst_e, _defect(_lin(*terms_e), max_degree, one))
        worst_f = max(worst_f, _defect(_lin(*terms_f), max_degree, one))
    out.append(record("serre-e", "Sym z2/z3 [e(z1), [e(z2), e(z3)]] = 0", worst_e, tol))
    out.append(record("serre-f", "Sym z2/z3 [f(z1), [f(z2), f(z3)]] = 0", worst_f, tol))

    vac = fk.h_eigenvalue(Partition(()), 1) - params.gamma(1, [fk.u])
    out.append(record("h-vacuum", "h_1 |0> = gamma_1 |0>", vac, tol))
    worst = max(abs(fk.h_eigenvalue(lam, r) - fk.h_eigenvalue_from_psi(lam, r))
                for lam in partitions_up_to(max_degree) for r in hs)
    out.append(record("h-from-psi", "h_r eigenvalue equals the log-expansion of psi", worst, tol))
    return out


def _compose(a: Callable[[Vec], Vec], b: Callable[[Vec], Vec]) -> Callable[[Vec], Vec]:
    return lambda v: a(b(v))


def boson_relations(params: Params, u=1, max_degree: int = 3) -> List[dict]:
    """Heisenberg relation and the vertex-operator boundary identities."""
    bos = BosonFock(params, u)
    one = params.one
    tol = 0 if params.exact else params.tolerance * 1e6
    out = []
    worst = 0
    for r, s in itertools.product([-3, -2, -1, 1, 2, 3], repeat=2):
        op = _comm(lambda v, r=r: bos.heisenberg_act(r, v), lambda v, s=s: bos.heisenberg_act(s, v))
        const = bos.commutator_constant(r) if r + s == 0 else 0
        worst = max(worst, _defect(_lin((one, op), (-const, lambda v: v)), max_degree, one))
    out.append(record("heisenberg", "[h_r, h_s] = delta_{r+s,0} (q^r - q^-r) / (r kappa_r)", worst, tol))

    empty = Partition(())
    lhs = bos.e_perp_mode(-1, {empty: one})
    rhs = vscale(bos.create(1, {empty: one}), bos.u)
    out.append(record("e-perp-lower", "e_perp_{-1} |0> = u h_perp_{-1} |0>", vmax(vadd(lhs, rhs, -1)), tol))

    # <0| e_perp_1 and q u <0| h_perp_1 agree on every degree-1 vector.
    worst = 0
    for lam in partitions_up_to(1):
        if lam.size != 1:
            continue
        a = bos.e_perp_mode(1, {lam: one}).get(empty, 0)
        b = params.q * bos.u * bos.annihilate(1, {lam: one}).get(empty, 0)
        worst = max(worst, abs(a - b))
    out.append(record("e-perp-upper", "<0| e_perp_1 = q u <0| h_perp_1", worst, tol))

    g = _g_coeffs(params)
    ep = lambda k: (lambda v: bos.e_perp_mode(k, v))  # noqa: E731
    worst = 0
    # modes with total pdeg shift bringing degree <= 2 back into degree <= 2
    for i, j in itertools.product(range(-2, 3), repeat=2):
        terms = []
        for a, c in g.items():
            b = 3 - a
            terms.append((c, _compose(ep(i + a), ep(j + b))))
            terms.append((c, _compose(ep(j + a), ep(i + b))))
        worst = max(worst, _defect(_lin(*terms), min(max_degree, 2), one))
    out.append(record("e-perp-quadratic", "g(z,w) e_perp(z) e_perp(w) + g(w,z) e_perp(w) e_perp(z) = 0",
                      worst, tol))
    return out


def all_passed(records: Iterable[dict]) -> bool:
    return all(r["pass"] for r in records)


def l_operator_relations(params: Params, u_L=1, u_prime=None, max_degree: int = 2,
                         max_mode: int = 2, cutoff: int | None = None) -> List[dict]:
    """Intertwining of the vacuum L operator with ``e(z)`` and ``h_r`` on ``F(u')``.

    Exact mode uses the closed-form diagonal.  Float mode uses the
    exponential series truncated at ``cutoff`` and reports the tail bound.
    """
    import mpmath

    from .fock import L_vacuum_diagonal, L_vacuum_series

    p = params
    uL = p.scalar(u_L)
    up = p.scalar(u_prime if u_prime is not None else (u_L if p.exact else p.scalar(1) / 1000))
    fk = PartitionFock(p, up)
    one = p.one
    out = []
    if p.exact:
        diag = {}
        for n in range(max_degree + 2):
            diag.update(L_vacuum_diagonal(p, uL, up, n))
        tol, bound = 0, 0
    else:
        if cutoff is None:
            cutoff = 40
        diag = {lam: L_vacuum_series(p, uL, up, lam, cutoff) for lam in partitions_up_to(max_degree + 1)}
        # size of the omitted terms r = cutoff+1 .. 2*cutoff of the exponent
        bound = 0
        for lam in partitions_up_to(max_degree + 1):
            tail = sum(abs(mpmath.mpc((1 - p.q2 ** -r) * fk.h_eigenvalue(lam, r) / uL ** r))
                       for r in range(cutoff + 1, 2 * cutoff + 1))
            bound = max(bound, tail)
        tol = mpmath.mpf("1e-20")

    L = lambda v: {lam: c * diag[lam] for lam, c in v.items()}  # noqa: E731
    e = lambda k: (lambda v: fk.e_mode(k, v))  # noqa: E731
    worst = 0
    for k in range(-max_mode, max_mode + 1):
        op = _lin((one, _compose(e(k + 1), L)), (-uL, _compose(e(k), L)),
                  (-one / p.q, _compose(L, e(k + 1))), (p.q * uL, _compose(L, e(k))))
        worst = max(worst, _defect(op, max_degree, one))
    out.append(record("e-L", "(z - u) e(z) L = (z/q - q u) L e(z)", worst, tol))
    worst = 0
    for r in [r for r in range(-max_mode, max_mode + 1) if r]:
        worst = max(worst, _defect(_comm(lambda v, r=r: fk.h_mode(r, v), L), max_degree, one))
    out.append(record("h-L", "[h_r, L] = 0", worst, tol))
    if not p.exact:
        out.append({"name": "L-truncation", "where": f"exponential series cut at r = {cutoff}",
                    "pass": bool(bound < tol), "max": float(bound)})
    return out


# ---------------------------------------------------------------------------
# shuffle algebra and bimodule
# ---------------------------------------------------------------------------


def _sh_defect(a, b):
    """Largest coefficient of ``a - b`` (elements of equal size)."""
    d = (a - b).numerator
    return max((abs(c) for c in d.terms.values()), default=0)


def shuffle_relations(params: Params, max_size: int = 5) -> List[dict]:
    """Associativity, wheel closure and the Serre witness in Sh0."""
    from .shuffle import element_is_member, epsilon_element, generator, serre_witness

    tol = 0 if params.exact else params.tolerance * 1e6
    x = lambda k: generator(params, k)  # noqa: E731
    e2 = epsilon_element(params, [2])
    e3 = epsilon_element(params, [3])
    triples = [(x(0), x(1), x(-1)), (x(2), x(0), x(1)), (e2, x(1), x(0)), (x(-1), e2, x(1)),
               (x(1), x(0), e2), (e2, x(0), e2), (x(1), e3, x(0)), (e3, x(-1), x(1))]
    worst = 0
    closure = True
    for a, b, c in triples:
        if a.n + b.n + c.n > max_size:
            continue
        ab = a * b
        bc = b * c
        worst = max(worst, _sh_defect(ab * c, a * bc))
        closure = closure and element_is_member(ab)[0] and element_is_member(ab * c)[0]
    out = [record("associativity", "(A*B)*C = A*(B*C), total size <= %d" % max_size, worst, tol)]
    out.append({"name": "wheel-closure", "where": "products of wheel-condition elements satisfy it",
                "pass": closure, "max": 0.0})
    w = serre_witness(params)
    wmax = max((abs(c) for c in w.numerator.terms.values()), default=0)
    out.append(record("serre-witness", "Sym x2/x3 (w31 w32 w21 - w31 w23 w21 - w13 w12 w32 + w12 w13 w23) = 0",
                      wmax, tol))
    return out


def psi_difference_action(params: Params, G, m: int):
    """``-(1/kappa_1)(Res_0 + Res_oo) prod omega(x_i,z)/omega(z,x_i) phi(u,z) z^m dz/z`` times ``G``."""
    from .laurent import LaurentPoly, LinearForm, RationalFn, residues_at_zero_and_infinity
    from .shuffle import g_poly

    n = G.n
    N = n + 1
    z = n
    r = RationalFn(LaurentPoly.const(N, params.one))
    zvec = tuple(1 if t == z else 0 for t in range(N))
    for i in range(n):
        r = r * (-g_poly(params, N, i, z))
        for qs in params.qs():
            s, f = LinearForm.make(N, {z: params.one, i: -qs}, 0)
            r = r.divide_by_form(s, f)
    for u in G.us:
        r = r * LaurentPoly(N, {zvec: params.one / params.q, (0,) * N: -params.q * u})
        s, f = LinearForm.make(N, {z: params.one}, -u)
        r = r.divide_by_form(s, f)
    res = residues_at_zero_and_infinity(r, z, m, method="series")
    if res.denominator:
        raise ArithmeticError("psi action left a denominator")
    return G._like(G.numerator * res.numerator.scale(-params.one / params.kappa(1)))


def bimodule_test_elements(params: Params, us=(1,), max_size: int = 2):
    from .bimodule import ShuffleElement1, act_e, right_mult
    from .shuffle import generator

    one = ShuffleElement1.unit(params, us)
    out = [one]
    if max_size >= 1:
        g1 = act_e(0, one)
        out += [g1, act_e(-1, one), right_mult(one, generator(params, 1))]
    if max_size >= 2:
        out += [act_e(1, g1), right_mult(g1, generator(params, -1))]
    return out


def bimodule_relations(params: Params, us=(1,), max_mode: int = 2, max_size: int = 2) -> List[dict]:
    """E' relations (he), (hf), [e,f] on Sh1(u), and left/right commutation."""
    from .bimodule import act_e, act_f, act_h, is_member, right_mult
    from .shuffle import generator

    tol = 0 if params.exact else params.tolerance * 1e6
    elems = bimodule_test_elements(params, us, max_size)
    modes = range(-max_mode, max_mode + 1)
    hs = [r for r in modes if r]

    def diff(a, b):
        if a.n != b.n:
            return max(_sh_defect(a, a.scale(0)) if not a.is_zero() else 0,
                       _sh_defect(b, b.scale(0)) if not b.is_zero() else 0)
        return _sh_defect(a, b)

    he = hf = ef = lr = 0
    member = fj0 = True
    for G in elems:
        for r in hs:
            for n in modes:
                lhs = act_h(r, act_e(n, G)) - act_e(n, act_h(r, G))
                he = max(he, diff(lhs, act_e(n + r, G).scale(-params.one / r)))
                if G.n >= 1:
                    lhs = act_h(r, act_f(n, G)) - act_f(n, act_h(r, G))
                    hf = max(hf, diff(lhs, act_f(n + r, G).scale(params.one / r)))
        for k, l in itertools.product(modes, modes):
            ef_lhs = act_e(k, act_f(l, G))
            fe = act_f(l, act_e(k, G))
            comm = (ef_lhs - fe) if G.n >= 1 else -fe
            ef = max(ef, diff(comm, psi_difference_action(params, G, k + l)))
        for k in (-1, 0, 1):
            F = generator(params, k)
            lr = max(lr, diff(act_e(1, right_mult(G, F)), right_mult(act_e(1, G), F)))
            # h is a derivation-like shift: h_1(G*F) = (h_1 G)*F - G*(x F)
            xF = type(F)(F.params, F.numerator.shift([1]))
            lr = max(lr, diff(act_h(1, right_mult(G, F)), right_mult(act_h(1, G), F) - right_mult(G, xF)))
            if G.n == 1:
                # f commutes with the right action only modulo J0; in Sh_{1,1}
                # J0 is exactly the numerators divisible by prod (x - u_l)
                d = act_f(0, right_mult(G, F)) - right_mult(act_f(0, G), F)
                try:
                    rest = d.numerator
                    for u in G.us:
                        rest = rest.divide_linear(0, u)
                except ArithmeticError:
                    fj0 = False
            member = member and is_member(act_e(k, G))[0] and is_member(right_mult(G, F))[0]
    return [
        record("sh1-he", "[h_r, e_n] = -(1/r) e_{n+r} on Sh1(u)", he, tol),
        record("sh1-hf", "[h_r, f_n] = (1/r) f_{n+r} on Sh1(u)", hf, tol),
        record("sh1-ef", "[e_k, f_l] = contour formula for (psi+ - psi-)/kappa_1 on Sh1(u)", ef, tol),
        record("sh1-left-right", "e commutes with the right Sh0 action; h_1(G*F) = (h_1 G)*F - G*(p_1 F)", lr, tol),
        {"name": "sh1-closure", "where": "actions preserve both wheel conditions", "pass": member, "max": 0.0},
        {"name": "sh1-f-right", "where": "f(G*F) - (f G)*F lies in J0 (size-1 results)", "pass": fj0, "max": 0.0},
    ]
