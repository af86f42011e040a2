"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line with the measured values so the whole
gate can be read off a `pytest -s` run.  Criteria marked A1..A9 cover the
headline physics numbers, the qualitative sweep claims, the shift bound, the
concordance table, and the independent-oracle equivalences.
"""

import math
import time

import numpy as np
import pytest

import helpers
import lindbloch as lb
from lindbloch import analysis, stats, sweep


def _criterion(cid, description, ok, detail=""):
    tail = f" -- {detail}" if detail else ""
    print(f"[{cid}] {description}: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"[{cid}] {description}{tail}"


def test_a1_bare_concurrence(bare):
    """A1: the bare operating point is highly entangled, and cheap to solve."""
    t0 = time.perf_counter()
    gen = lb.build_bloch(bare)
    ss = analysis.steady_state(gen)
    C = analysis.concurrence(ss.rho)
    elapsed = time.perf_counter() - t0
    _criterion(
        "A1",
        "bare steady-state concurrence = 0.995 +/- 0.002 in under 1 s",
        abs(C - 0.995) <= 0.002 and elapsed < 1.0,
        f"C = {C:.6f}, {elapsed * 1e3:.1f} ms",
    )


def test_a2_closed_form_cross_check():
    """A2: closed-form concurrence approximation.

    Parameter mapping used here: symmetric drive alpha := alpha1 = alpha2 and
    antisymmetric detunings Delta := delta1 = -delta2, with s1 = s2 = 1 and
    no single-qubit noise.  Under that mapping the steady-state concurrence
    follows 2 alpha^2 / (Delta^2 + 2 alpha^2); at alpha = 1, Delta = 0.1 the
    formula gives 0.99502..., which also matches the bare operating point.
    """
    alpha, Delta = 1.0, 0.1
    params = lb.ModelParams(alpha1=alpha, alpha2=alpha, delta1=Delta, delta2=-Delta)
    C = analysis.concurrence(analysis.steady_state(lb.build_bloch(params)).rho)
    predicted = 2 * alpha**2 / (Delta**2 + 2 * alpha**2)
    _criterion(
        "A2",
        "steady-state concurrence matches 2a^2/(D^2+2a^2) within 0.01",
        abs(C - predicted) <= 0.01,
        f"C = {C:.9f}, formula = {predicted:.9f}, |diff| = {abs(C - predicted):.2e}",
    )


def test_a3_symmetric_coupling_flatness(bare):
    """A3: concurrence is flat along the symmetric coupling sweep, and the
    zero-coupling endpoint is flagged with zero margin."""
    structure = lb.PERTURBATIONS["S5"]
    deltas = np.linspace(-1.0, 1.0, 42)[1:]  # open at -1, 41 points
    records = sweep.sweep_records(bare, structure, deltas, workers=1)
    cs = [1.0 - r.concurrence_error for r in records]
    variation = max(cs) - min(cs)
    endpoint = analysis.steady_state_shift_and_bound(bare, structure, -1.0)
    ok = (
        variation <= 1e-6
        and not any(r.flags for r in records)
        and endpoint.flags == analysis.FLAG_NON_UNIQUE
        and endpoint.stability_margin == 0.0
    )
    _criterion(
        "A3",
        "concurrence flat to 1e-6 on (-1, 1]; endpoint flagged with G = 0",
        ok,
        f"variation = {variation:.3e}, endpoint flags = {endpoint.flags!r}, "
        f"G(-1) = {endpoint.stability_margin}",
    )


def test_a4_decay_persistence_and_tradeoff(bare, default_sweeps):
    """A4: entanglement survives moderate decay, and margin/concurrence trade
    off monotonically along the decay sweep."""
    bare_C = 1.0 - next(
        r.concurrence_error for r in default_sweeps["S2"] if r.delta == 0.0
    )
    rec = analysis.steady_state_shift_and_bound(bare, lb.PERTURBATIONS["S7"], 0.01)
    C_at_001 = 1.0 - rec.concurrence_error
    persistence = C_at_001 >= 0.5 * bare_C

    s7 = [r for r in default_sweeps["S7"] if not r.flags]
    G = np.array([r.stability_margin for r in s7])
    C = 1.0 - np.array([r.concurrence_error for r in s7])
    g_steps = np.diff(G)
    g_monotone = bool(np.all(g_steps >= -1e-12))
    c_monotone = bool(np.all(np.diff(C) <= 1e-12))
    worst = float(g_steps.min())
    _criterion(
        "A4",
        "C(0.01) >= C(0)/2; G nondecreasing and C nonincreasing on [1e-3, 1]",
        persistence and g_monotone and c_monotone,
        f"C(0.01) = {C_at_001:.4f} vs C(0)/2 = {0.5 * bare_C:.4f}; "
        f"C nonincreasing = {c_monotone}; G nondecreasing = {g_monotone} "
        f"(worst step {worst:+.2e}: the margin peaks at delta ~ 0.89 and "
        f"recedes before delta = 1)",
    )


def test_a5_drive_beats_detuning_sensitivity(default_sweeps):
    """A5: at matched strength, drive-amplitude errors hurt entanglement more
    than detuning errors."""
    s2 = {round(r.delta, 12): r for r in default_sweeps["S2"]}
    s4 = {round(r.delta, 12): r for r in default_sweeps["S4"]}
    pairs = {d: (s2[d].concurrence_error, s4[d].concurrence_error) for d in (0.1, -0.1)}
    ok = all(a > b for a, b in pairs.values())
    _criterion(
        "A5",
        "concurrence error: drive perturbation exceeds detuning at |delta| = 0.1",
        ok,
        ", ".join(
            f"delta={d:+.1f}: {a:.4f} vs {b:.4f}" for d, (a, b) in pairs.items()
        ),
    )


def test_a6_shift_bound_soundness(default_sweeps):
    """A6: the transfer-norm bound dominates the steady-state shift, and the
    pure-state distance/fidelity identity holds."""
    worst_violation = -math.inf
    worst_identity = 0.0
    n_pure = 0
    for records in default_sweeps.values():
        for r in records:
            if r.flags:
                continue
            worst_violation = max(worst_violation, r.z1_distance - r.z1_bound)
            if abs(r.purity - 1.0) <= 1e-6:
                n_pure += 1
                worst_identity = max(
                    worst_identity,
                    abs(r.z1_distance**2 - 2.0 * r.fidelity_error),
                )
    ok = worst_violation <= 1e-9 and worst_identity <= 1e-8 and n_pure > 0
    _criterion(
        "A6",
        "z1 <= ||T(0)||*||d|| + 1e-9 everywhere; pure-state identity to 1e-8",
        ok,
        f"worst z1 - bound = {worst_violation:.2e}; "
        f"worst |z1^2 - 2(1-F)| = {worst_identity:.2e} over {n_pure} pure points",
    )


def test_a7_concordance_table(default_sweeps):
    """A7: rank concordance of the concurrence error with the margin and the
    shift bound across the catalog."""
    report = stats.concordance_suite(default_sweeps)
    checks = []
    detail = []
    for pid in ("S2", "S4", "S7", "S9"):
        for pair in ("G~E_C", "E_C~z1"):
            tau = report.taus[pid][pair]
            checks.append(tau > 0.6)
            detail.append(f"{pid} {pair} = {tau:.3f}")
    for pid in ("S5", "S10"):
        for pair in ("G~E_C", "E_C~z1"):
            tau = report.taus[pid][pair]
            checks.append(math.isnan(tau) or tau < 0.6)
            detail.append(f"{pid} {pair} = {'nan' if math.isnan(tau) else f'{tau:.3f}'}")
    _criterion(
        "A7",
        "tau > 0.6 for S2/S4/S7/S9 pairs; S5/S10 undefined or < 0.6",
        all(checks),
        "; ".join(detail),
    )


def test_a8a_generator_equivalence(bare, basis4):
    """A8a: the real-matrix route reproduces the operator-picture derivative."""
    gen = lb.build_bloch(bare)
    H = lb.hamiltonian(bare)
    jumps = lb.jump_operators(bare)
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        rho = helpers.random_density(rng, 4)
        r = lb.density_to_bloch(rho, basis4)
        drho = helpers.lindblad_rhs(H, jumps, rho)
        dr = np.einsum("nab,ba->n", basis4.elements, drho).real
        worst = max(worst, float(np.abs(gen.A @ r - dr).max()))
    _criterion(
        "A8a",
        "coordinate and operator derivatives agree to 1e-10 on 100 states",
        worst <= 1e-10,
        f"worst entry difference = {worst:.2e}",
    )


def test_a8b_concurrence_oracles():
    """A8b: eigenvalue route vs explicit-R construction, plus the closed-form
    family."""
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(100):
        rho = helpers.random_density(rng, 4)
        worst = max(
            worst,
            abs(analysis.concurrence(rho) - helpers.concurrence_explicit_r(rho)),
        )
    worst_werner = 0.0
    for p in np.linspace(0.0, 1.0, 41):
        expected = max(0.0, (3 * p - 1) / 2)
        worst_werner = max(
            worst_werner, abs(analysis.concurrence(helpers.werner(p)) - expected)
        )
    _criterion(
        "A8b",
        "concurrence matches the explicit-R oracle (1e-8) and the mixed-family"
        " closed form (1e-8)",
        worst <= 1e-8 and worst_werner <= 1e-8,
        f"worst oracle diff = {worst:.2e}, worst family diff = {worst_werner:.2e}",
    )


def test_a8c_propagation_reaches_steady_state(basis4):
    """A8c: long-time propagation agrees with the algebraic steady state.

    Model: bare parameters plus decay 0.3 on both qubits, whose slowest
    relaxation rate is ~0.115, so t = 1e3 sits ~50 decades into the
    asymptotic regime.  (The bare model's slowest rate is ~3.5e-3; it reaches
    the same fixed point but needs t ~ 1e4, covered in the unit tests.)
    """
    params = lb.ModelParams(gamma1_r=0.3, gamma2_r=0.3)
    gen = lb.build_bloch(params)
    ss = analysis.steady_state(gen)
    rng = np.random.default_rng(107)
    worst = 0.0
    for _ in range(20):
        r0 = lb.density_to_bloch(helpers.random_density(rng, 4), basis4)
        worst = max(worst, float(np.linalg.norm(analysis.propagate(gen, r0, 1e3) - ss.r)))
    _criterion(
        "A8c",
        "exp(A t) at t = 1e3 matches the steady state to 1e-6 from 20 states",
        worst <= 1e-6,
        f"worst distance = {worst:.2e}",
    )


def test_a8d_kendall_tau_bruteforce():
    """A8d: pair-counting tau matches an explicit double loop exactly."""
    rng = np.random.default_rng(109)
    mismatches = 0
    for _ in range(50):
        n = int(rng.integers(2, 30))
        x = rng.integers(0, 8, size=n).astype(float)
        y = rng.integers(0, 8, size=n).astype(float)
        got = stats.kendall_tau(x, y)
        want = helpers.kendall_tau_bruteforce(list(x), list(y))
        same = (math.isnan(got) and math.isnan(want)) or got == want
        mismatches += 0 if same else 1
    _criterion(
        "A8d",
        "tau equals brute-force pair counting on 50 integer sequences",
        mismatches == 0,
        f"{mismatches} mismatches",
    )


def test_a9_error_dynamics_never_touch_trace(bare, bare_nominal):
    """A9: the last transfer-matrix row is exactly zero at every evaluation."""
    bad = 0
    total = 0
    for pid, delta in (("S2", 0.15), ("S4", -0.08), ("S5", 0.6),
                       ("S7", 0.2), ("S9", 0.8), ("S10", -0.7)):
        dA = lb.structure_matrix(bare, lb.PERTURBATIONS[pid], delta)
        for s in (0.0, 0.5j, -0.5j, 1.0 + 1.0j):
            tm = analysis.transfer_matrix(bare_nominal.gen, dA, s)
            total += 1
            if not np.all(tm.T[-1, :] == 0):
                bad += 1
    _criterion(
        "A9",
        "transfer matrices have an exactly zero last row",
        bad == 0,
        f"{total - bad}/{total} evaluations exactly zero",
    )
