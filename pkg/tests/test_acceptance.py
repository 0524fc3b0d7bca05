"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict; the lines are printed in the
terminal summary (see ``conftest.py``) and by running this file directly.
"""

from __future__ import annotations

import time

import mpmath
import pytest

from qtb import linalg
from qtb.bethe import closed_form_root, perturbation, solve_all, verify_kernel
from qtb.bimodule import in_N, kappa_map
from qtb.fock import integral_operator
from qtb.gordon import gordon_dimensions
from qtb.offshell import build_offshell, check_eigenvector, left_eigen_residual, verify_Kn
from qtb.params import default_exact, default_float
from qtb.partitions import partition_count, partitions, partitions_up_to
from qtb.relations import (
    bimodule_relations,
    boson_relations,
    fock_relations,
    l_operator_relations,
    shuffle_relations,
)

RESULTS: dict = {}

TWISTS = (mpmath.mpc("0.18", "0.05"), mpmath.mpf("0.2") * mpmath.expj(2.1))
SECOND_POINT = mpmath.mpc("0.6", "0.45")


def record(key: str, ok: bool, detail: str):
    RESULTS[key] = f"{key} {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[key]


@pytest.fixture(scope="module")
def flt():
    return default_float(40)


def test_ac1_gordon_dimensions():
    start = time.perf_counter()
    reports = gordon_dimensions(default_exact(), 5)
    seconds = time.perf_counter() - start
    dims = [r.dim for r in reports]
    ok = dims == [1, 1, 2, 3, 5, 7] and all(r.saturated for r in reports) and seconds < 120
    record("AC1", ok, f"dims n=0..5 {dims}, bounds met: {all(r.saturated for r in reports)}, {seconds:.0f}s")


def test_ac2_spectrum_equals_bethe(flt):
    worst, details = mpmath.mpf(0), []
    ok = True
    for p in TWISTS:
        for n in (1, 2, 3):
            states = solve_all(flt, (1,), p, n)
            conv = [s for s in states if s.converged]
            evs = linalg.eigenvalues(integral_operator(flt, 1, p, n))
            err = linalg.match_multisets([s.eigenvalue for s in conv], evs)
            ok = ok and len(conv) == partition_count(n) and err < 1e-8
            worst = max(worst, err)
        details.append(f"|p|={float(abs(p)):.2f}")
    record("AC2", ok, f"n=1..3 at {', '.join(details)}: worst relative mismatch {float(worst):.1e}")


def test_ac3_closed_form(flt):
    worst_root = worst_block = mpmath.mpf(0)
    for p in TWISTS:
        [state] = solve_all(flt, (1,), p, 1)
        a = closed_form_root(flt, p)
        worst_root = max(worst_root, abs(state.roots[0] - a))
        M = integral_operator(flt, 1, p, 1)
        worst_block = max(worst_block, abs(M[0][0] - (-a + flt.gamma(1, (1,)))))
    ok = worst_root < 1e-10 and worst_block < 1e-8
    record("AC3", ok, f"root error {float(worst_root):.1e}, 1x1 block error {float(worst_block):.1e}")


def test_ac4_kernel(flt):
    p = TWISTS[0]
    kmax, cmin, count = mpmath.mpf(0), mpmath.inf, 0
    ok = True
    for us in ((1,), (1, SECOND_POINT)):
        for n in (1, 2, 3):
            for s in solve_all(flt, us, p, n):
                ok = ok and s.converged
                if not s.converged:
                    continue
                rep = verify_kernel(s)
                kmax, cmin, count = max(kmax, rep.max_abs), min(cmin, rep.control), count + 1
    ok = ok and kmax < 1e-8 and cmin > 1e-3
    record("AC4", ok, f"{count} states (k=1,2; n<=3): max |ev_a| {float(kmax):.1e}, perturbed min {float(cmin):.1e}")


def test_ac5_relation_suites():
    P = default_exact()
    records = (shuffle_relations(P, max_size=5) + fock_relations(P, 1, max_mode=2, max_degree=3)
               + boson_relations(P, 1, max_degree=3) + bimodule_relations(P, (1,), max_mode=2))
    failed = [r["name"] for r in records if not r["pass"]]
    record("AC5", not failed, f"{len(records)} exact relation checks, failed: {failed or 'none'}")


def test_ac6_l_operator(flt):
    exact = l_operator_relations(default_exact(), max_degree=2)
    floats = l_operator_relations(flt, u_L=mpmath.mpc(7, 1), max_degree=2)
    recs = exact + floats
    failed = [r["name"] for r in recs if not r["pass"]]
    worst = max(r["max"] for r in floats)
    record("AC6", not failed, f"exact e-L and h-L to degree 2 plus series check {worst:.1e}, failed: {failed or 'none'}")


def test_ac7_offshell(flt):
    kn = verify_Kn(default_exact(), 2)
    p = TWISTS[0]
    on, off = mpmath.mpf(0), mpmath.inf
    for n in (1, 2):
        M = integral_operator(flt, 1, p, n)
        for s in solve_all(flt, (1,), p, n):
            w = build_offshell(flt, s.roots, p).as_list()
            on = max(on, left_eigen_residual(flt, w, M, s.eigenvalue))
            moved = [a + d for a, d in zip(s.roots, perturbation(n))]
            off = min(off, check_eigenvector(flt, moved, p)["residual"])
    ok = kn["pass"] and on < 1e-8 and off > 1e-3
    record("AC7", ok, f"Kn degree<=2 exact: {kn['pass']}; eigen residual {float(on):.1e}, perturbed {float(off):.1e}")


def test_ac8_kappa_basis_in_N():
    P = default_exact()
    bad = []
    count = 0
    for lam in partitions_up_to(4):
        count += 1
        checks = in_N(kappa_map(P, lam))
        if not all(checks.values()):
            bad.append((str(lam), checks))
    record("AC8", not bad, f"{count} kappa elements (|lambda|<=4) regular at 0 and oo, vanishing: "
                           f"{'all' if not bad else bad}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
