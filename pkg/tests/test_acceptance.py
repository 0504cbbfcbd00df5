"""Acceptance suite: every headline claim at its stated tolerance.

Each test prints one pass/fail line (run with ``pytest -s`` to see them all
on success).  Tolerances are pinned here, not configurable.
"""

import time

import numpy as np
import pytest
from scipy.stats import unitary_group

from quditsteer.cli import SweepConfig, run_sweep
from quditsteer.optics import (
    bsm_projector_network,
    phase_distance,
    qhq_matrix,
    solve_qhq,
)
from quditsteer.protocol import (
    CountsTable,
    correlations,
    critical_p,
    mdi_table,
    poisson_mc,
    qrs_witness,
    random_lhs_table,
    steering_parameter,
)
from quditsteer.qmath import eig_max_hermitian, projector
from quditsteer.scenario import (
    fourier_mub,
    isotropic,
    max_entangled,
    question_states_qutrit,
    steering_functional_two_mubs,
)
from quditsteer.sdp import (
    assemblage,
    guessing_probability,
    lhs_bound_bruteforce,
    lhs_membership,
)


def report(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def two_mubs(d):
    return [fourier_mub(d, 1), fourier_mub(d, 2)]


def test_steering_saturation():
    start = time.perf_counter()
    mubs = two_mubs(3)
    table = correlations(projector(max_entangled(3)), mubs, mubs)
    s = steering_parameter(table, steering_functional_two_mubs(3)).s
    elapsed = time.perf_counter() - start
    ok = abs(s - 2.0) < 1e-9 and elapsed < 1.0
    report("steering saturation", ok, f"S = {s:.12f} (|S-2| = {abs(s-2):.1e}, {elapsed:.2f}s)")


def test_lhs_bound_bruteforce_matches_closed_form():
    worst = 0.0
    for d in (2, 3, 4, 5):
        functional = steering_functional_two_mubs(d)
        mubs = two_mubs(d)
        bound = lhs_bound_bruteforce(mubs, functional)
        worst = max(worst, abs(bound - (1 + 1 / np.sqrt(d))))
        # independent route: lambda_max(P_u + P_v) = 1 + |<u|v>| per pair
        closed = max(
            1 + abs(np.vdot(u, v))
            for u in np.eye(d)
            for v in [np.array([np.exp(2j * np.pi * b * i / d) for i in range(d)]) / np.sqrt(d)
                      for b in range(d)]
        )
        worst = max(worst, abs(bound - closed))
    report("LHS bound", worst < 1e-9, f"max deviation from 1 + 1/sqrt(d): {worst:.1e}")


def test_linear_law_in_visibility():
    mubs = two_mubs(3)
    functional = steering_functional_two_mubs(3)
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 11):
        s = steering_parameter(correlations(isotropic(3, p), mubs, mubs), functional).s
        worst = max(worst, abs(s - (2 * p + 2 * (1 - p) / 3)))
    report("linear law", worst < 1e-12, f"max |S - (2p + 2(1-p)/3)| = {worst:.1e}")


def test_critical_visibility():
    p3 = critical_p(3)
    p2 = critical_p(2)
    ok = round(p3, 3) == 0.683 and abs(p2 - 0.7071) < 1e-4
    report("threshold", ok, f"critical_p(3) = {p3:.6f}, critical_p(2) = {p2:.6f}")


def test_mdi_equivalence():
    mubs = two_mubs(3)
    qset = question_states_qutrit()
    functional = steering_functional_two_mubs(3)
    rng = np.random.default_rng(60)
    worst = 0.0
    for _ in range(20):
        state = isotropic(3, rng.uniform(0, 1))
        table = correlations(state, mubs, mubs)
        mdi = mdi_table(state, mubs, qset)
        for a in range(3):
            for b in range(3):
                for j in range(2):
                    worst = max(
                        worst,
                        abs(mdi.reconstructed(a, b, j) - table.probs[a, b, j] / 3),
                    )
        direct = steering_parameter(table, functional)
        refereed = qrs_witness(mdi, qset, functional)
        worst = max(worst, abs(refereed.w_qrs - direct.w_s / 3))
    report("MDI equivalence", worst < 1e-12, f"max |P - p/d| and |W_QRS - W_S/d|: {worst:.1e}")


def test_question_state_algebra():
    qset = question_states_qutrit()
    worst = 0.0
    for j, povm in enumerate(qset.target_povms):
        for b in range(3):
            worst = max(worst, np.abs(qset.reconstruct(b, j) - povm.elements[b]).max())
    report("question-state algebra", worst < 1e-12, f"max reconstruction residual: {worst:.1e}")


def test_randomness_ceiling():
    start = time.perf_counter()
    mubs = two_mubs(3)
    table = correlations(projector(max_entangled(3)), mubs, mubs)
    result = guessing_probability(table, 0, bob=mubs, mode="full-table")
    elapsed = time.perf_counter() - start
    ok = abs(result.h_min - np.log2(3)) < 1e-4 and elapsed < 30.0
    report(
        "randomness ceiling",
        ok,
        f"H_min = {result.h_min:.6f} vs log2(3) = {np.log2(3):.6f} ({elapsed:.1f}s)",
    )


def test_experimental_cross_check():
    mubs = two_mubs(3)
    functional = steering_functional_two_mubs(3)
    table = correlations(isotropic(3, 0.987), mubs, mubs)
    s = steering_parameter(table, functional).s
    # the published randomness analysis constrains the violation only
    result = guessing_probability(
        table, 0, bob=mubs, functional=functional, mode="violation-only"
    )
    ok = abs(s - 1.983) < 0.002 and abs(result.h_min - 1.106) < 0.08 and result.h_min > 1.0
    report(
        "experimental cross-check",
        ok,
        f"S = {s:.4f} (1.983 +/- 0.002), H_min = {result.h_min:.4f} (1.106 +/- 0.08, > 1 bit)",
    )


def test_lhs_randomness_consistency():
    mubs = two_mubs(3)
    checked = 0
    worst = 0.0
    for p in (0.0, 0.25, 0.45, 0.55):
        asm = assemblage(isotropic(3, p), mubs)
        if lhs_membership(asm).is_lhs:
            res = guessing_probability(asm, 0)
            worst = max(worst, abs(res.p_guess - 1.0))
            checked += 1
    ok = checked >= 3 and worst < 1e-6
    report(
        "LHS-randomness consistency",
        ok,
        f"{checked} LHS assemblages, max |P_guess - 1| = {worst:.1e}",
    )


def test_lhs_sampler_soundness():
    mubs = two_mubs(3)
    functional = steering_functional_two_mubs(3)
    rng = np.random.default_rng(61)
    worst = -np.inf
    for _ in range(10_000):
        table = random_lhs_table(3, mubs, rng, n_lambda=int(rng.integers(2, 12)))
        worst = max(worst, functional.evaluate(table.probs))
    ok = worst <= functional.s_lhs + 1e-9
    report(
        "LHS sampler soundness",
        ok,
        f"max S over 10^4 LHS models: {worst:.9f} <= {functional.s_lhs:.9f}",
    )


def test_optics_acceptance():
    rng = np.random.default_rng(62)
    worst_qhq = 0.0
    for _ in range(50):
        u = unitary_group.rvs(2, random_state=rng)
        q1, h, q2 = solve_qhq(u)
        worst_qhq = max(worst_qhq, phase_distance(qhq_matrix(q1, h, q2), u))
    worst_bsm = 0.0
    for d in (3, 4):
        _, op = bsm_projector_network(d)
        op = op / np.trace(op).real
        worst_bsm = max(worst_bsm, np.linalg.norm(op - projector(max_entangled(d)), 2))
    ok = worst_qhq < 1e-6 and worst_bsm < 1e-6
    report(
        "optics",
        ok,
        f"QHQ worst distance {worst_qhq:.1e} (50 targets); Bell-projector worst {worst_bsm:.1e}",
    )


def test_monte_carlo_error_bars_and_reproducibility(tmp_path):
    mubs = two_mubs(3)
    functional = steering_functional_two_mubs(3)
    probs = correlations(isotropic(3, 0.987), mubs, mubs).probs
    counts = CountsTable(expected=probs * 3e4, trials=100, seed=11)
    _, s_std = poisson_mc(counts, lambda t: functional.evaluate(t.probs))
    config = SweepConfig(d=3, p_min=0.95, p_max=1.0, grid=2, visibility=0.987,
                         trials=20, seed=5)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(config, out_path=out1)
    run_sweep(config, out_path=out2)
    identical = out1.read_bytes() == out2.read_bytes()
    ok = 1e-4 < s_std < 1e-2 and identical
    report(
        "Monte Carlo",
        ok,
        f"S error bar = {s_std:.2e} (order 1e-3); identical CSV reruns: {identical}",
    )
