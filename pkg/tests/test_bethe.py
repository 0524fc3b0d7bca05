from __future__ import annotations

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtb import linalg
from qtb.bethe import (
    BetheSystem,
    ContinuationError,
    closed_form_root,
    perturbation,
    same_state,
    seed_roots,
    seeds,
    solve_all,
    solve_from_seed,
    verify_kernel,
)
from qtb.fock import integral_operator
from qtb.params import PoleError
from qtb.partitions import Partition


@pytest.fixture(scope="module")
def states_n2(flt, p_twist):
    return solve_all(flt, (1,), p_twist, 2)


def test_exact_mode_rejected(exact):
    with pytest.raises(ValueError):
        BetheSystem(exact, (1,), 0, 1)


def test_seeds():
    assert len(seeds(3)) == 3
    assert len(seeds(2, 2)) == 5
    assert all(len(s) == 2 for s in seeds(2, 2))


def test_seed_roots_are_contents(flt):
    roots = seed_roots(flt, (flt.scalar(1),), (Partition((2,)),))
    assert abs(roots[1] - flt.q1) < 1e-35 or abs(roots[0] - flt.q1) < 1e-35


def test_residual_detects_poles(flt, p_twist):
    system = BetheSystem(flt, (1,), p_twist, 1)
    with pytest.raises(PoleError):
        system.residual([flt.scalar(1)])


def test_jacobian_matches_finite_differences(flt, p_twist):
    system = BetheSystem(flt, (1,), p_twist, 2)
    a = [mpmath.mpc("0.9", "0.3"), mpmath.mpc("2.1", "-0.4")]
    J = system.jacobian(a)
    h = mpmath.mpf("1e-15")
    for j in range(2):
        b = list(a)
        b[j] += h
        fa, fb = system.cleared(a), system.cleared(b)
        for i in range(2):
            assert abs((fb[i] - fa[i]) / h - J[i, j]) < 1e-10 * max(1, abs(J[i, j]))


def test_closed_form_one_root(flt, p_twist):
    [state] = solve_all(flt, (1,), p_twist, 1)
    a = closed_form_root(flt, p_twist)
    assert abs(state.roots[0] - a) < 1e-30
    M = integral_operator(flt, 1, p_twist, 1)
    assert abs(M[0][0] - state.eigenvalue) < 1e-30


def test_two_root_states_match_spectrum(flt, p_twist, states_n2):
    assert len(states_n2) == 2 and all(s.converged for s in states_n2)
    evs = linalg.eigenvalues(integral_operator(flt, 1, p_twist, 2))
    assert linalg.match_multisets([s.eigenvalue for s in states_n2], evs) < 1e-30


def test_eigenvalue_is_symmetric_in_roots(states_n2):
    s = states_n2[0]
    flipped = type(s)(s.params, s.us, s.p, list(reversed(s.roots)), s.seed, s.residual_norm)
    assert abs(flipped.eigenvalue - s.eigenvalue) < 1e-35
    assert same_state(s, flipped)
    assert not same_state(s, states_n2[1])


def test_paths_end_at_contents(flt):
    # the distance to the seed contents shrinks linearly as p -> 0
    for seed in seeds(2):
        dist = []
        for r in ("3e-3", "3e-4"):
            system = BetheSystem(flt, (1,), mpmath.mpf(r) * mpmath.expj(0.3), 2)
            state = solve_from_seed(system, seed)
            dist.append(linalg.match_multisets(state.roots, seed_roots(flt, system.us, seed)))
        assert dist[1] < 1e-3
        assert 5 < dist[0] / dist[1] < 20


def test_state_json(states_n2):
    js = states_n2[0].to_json()
    assert set(js) == {"seed", "roots", "eigenvalue", "residual", "converged"}
    assert len(js["roots"]) == 2 and len(js["eigenvalue"]) == 2


def test_kernel_vanishes_on_states(states_n2):
    for s in states_n2:
        rep = verify_kernel(s)
        assert rep.max_abs < 1e-25
        assert rep.control > 1e-3


def test_two_point_states(flt, p_twist):
    us = (1, mpmath.mpc("0.6", "0.45"))
    states = solve_all(flt, us, p_twist, 1)
    assert len(states) == 2 and all(s.converged for s in states)
    for s in states:
        assert verify_kernel(s).max_abs < 1e-25


def test_failed_path_is_reported(flt, p_twist):
    system = BetheSystem(flt, (1,), p_twist, 2)
    with pytest.raises(ContinuationError) as info:
        solve_from_seed(system, (Partition((2,)),), steps=1, max_halvings=0, p_start_abs=mpmath.mpf("1e-30"))
    assert info.value.trace


def test_perturbation_size():
    d = perturbation(3)
    assert all(abs(abs(x) - 0.01) < 1e-15 for x in d)
    assert len({complex(x) for x in d}) == 3


@settings(max_examples=8, deadline=None)
@given(st.floats(0.01, 0.19), st.floats(-3.1, 3.1))
def test_closed_form_solves_the_equation(r, theta):
    from qtb.params import default_float

    P = default_float(30)
    p = mpmath.mpf(r) * mpmath.expj(theta)
    a = closed_form_root(P, p)
    system = BetheSystem(P, (1,), p, 1)
    assert system.residual_norm([a]) < 1e-20
