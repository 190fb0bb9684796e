"""Acceptance criteria, each at its stated tolerance; one PASS/FAIL line apiece."""
import math

import numpy as np
import pytest

from conftest import Q_DEGREES, record
from minmaxgap.conformal import (
    NORMAL_DERIVATIVE_CONSTANT,
    log_scsc_lower_rate,
    log_scsc_upper_rate,
    normal_derivative_estimate,
    phi_omega,
    scsc_lower_rate,
    scsc_upper_rate,
)
from minmaxgap.extremal import bernstein_margin, build_mesh, dual_measure, minimax_P, sampling_ratio
from minmaxgap.poly import NormalizationClass, Polynomial, from_roots
from minmaxgap.problems import SpectralSet, hard_instance, make_problem, random_instance
from minmaxgap.solvers import (
    BASELINES,
    apply_asymmetric_polynomial,
    apply_symmetric_polynomial,
    baseline_polynomial,
    default_baseline_step,
    run_gda,
    run_symmetric_baseline,
    slingshot_cc_schedule,
    slingshot_scsc_schedule,
)

CC_TARGET = 3 * math.sqrt(3) / 2


def test_criterion_1_cc_upper_bound():
    worst = -np.inf
    for T in (2, 4, 8, 16):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            p = random_instance(0.0, rng.uniform(0.5, 3), 1 + seed % 4, 1 + seed % 3, seed=seed)
            z0 = rng.normal(size=p.dim)
            tr = run_gda(p, slingshot_cc_schedule(T, p.L), z0)
            bound = p.L / (T + 1) * tr.dist_to_opt[0]
            worst = max(worst, tr.grad_norm[-1] - bound)
    xy = make_problem([[0]], [[1]], [[0]])
    tr = run_gda(xy, slingshot_cc_schedule(2, 1.0), [1.0, 0.0])
    eq_err = abs(tr.grad_norm[-1] - 1 / 3)
    ok = worst <= 1e-9 and eq_err <= 1e-12
    assert record(1, ok, f"max excess {worst:.2e} (<= 1e-9); xy equality error {eq_err:.1e} (<= 1e-12)")


def test_criterion_2_scsc_upper_bound():
    worst = -np.inf
    for T in (2, 4, 8, 16):
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            mu = rng.uniform(0.1, 1)
            p = random_instance(mu, mu * rng.uniform(1.5, 50), 1 + seed % 4, 1 + seed % 3, seed=seed)
            z0 = rng.normal(size=p.dim)
            tr = run_gda(p, slingshot_scsc_schedule(T, p.mu, p.L), z0)
            worst = max(worst, tr.dist_to_opt[-1] - scsc_upper_rate(p.kappa, T) * tr.dist_to_opt[0])
    p = make_problem([[1]], [[math.sqrt(3)]], [[1]], [0.2, -0.4])
    tr = run_gda(p, slingshot_scsc_schedule(2, 1, 2), p.z_star + [1.0, -2.0])
    eq_err = abs(tr.dist_to_opt[-1] / tr.dist_to_opt[0] - 0.6)
    ok = worst <= 1e-9 and eq_err <= 1e-12
    assert record(2, ok, f"max excess {worst:.2e} (<= 1e-9); H^2=4I factor error {eq_err:.1e} (<= 1e-12)")


def test_criterion_3_conformal_toolkit():
    theta = np.linspace(-np.pi / 2, np.pi / 2, 500)
    boundary = np.concatenate([np.exp(1j * theta), 1j * np.linspace(-1, 1, 500)])
    dev = float(np.max(np.abs(np.abs(phi_omega(boundary)) - 1)))
    err = abs(phi_omega(-1.0) + 2)
    nd = normal_derivative_estimate(1.0)
    ok = dev <= 1e-8 and err <= 1e-10 and abs(nd - 4 / (3 * math.sqrt(3))) <= 1e-4
    assert record(3, ok, f"|Phi|-1 max {dev:.1e}; Phi(-1)+2 = {err:.1e}; dg/dn(0) = {nd:.6f} vs 0.769800")


def test_criterion_4_chebyshev_oracle():
    mesh = build_mesh(SpectralSet.intervals(1, 2), 4, 0.05, delta=1e-3)
    v2 = minimax_P(mesh, 2).value
    v4 = minimax_P(mesh, 4).value
    e2, e4 = abs(v2 / 0.6 - 1), abs(v4 / (18 / 82) - 1)
    ok = e2 <= 1e-3 and e4 <= 1e-3
    assert record(4, ok, f"T=2 value {v2:.6f} (rel err {e2:.1e}); T=4 value {v4:.6f} (rel err {e4:.1e})")


def test_criterion_5_lower_bound_soundness():
    eps = 0.05
    rng = np.random.default_rng(5)
    slack, min_sampling = np.inf, np.inf
    for kappa in (2, 10):
        region = SpectralSet.halfdisc(1, kappa)
        for T in (1, 2, 4, 8, 12, 16):
            mesh = build_mesh(region, T, eps, delta=(kappa - 1) / 1000)
            if T == 16:
                ref = build_mesh(region, T, eps, delta=mesh.delta / 10).points
                for _ in range(20):
                    c = rng.normal(size=T + 1) + 1j * rng.normal(size=T + 1)
                    p = np.polynomial.polynomial.Polynomial(c)
                    min_sampling = min(min_sampling, sampling_ratio(p, mesh.points, ref))
            value = minimax_P(mesh, T).value
            slack = min(slack, value / ((1 - eps) * scsc_lower_rate(kappa, T)))
    ok = slack >= 1 and min_sampling >= 1 - eps
    assert record(5, ok, f"min value/((1-eps) floor) = {slack:.4f} (>= 1); "
                         f"mesh sampling ratio {min_sampling:.4f} (>= {1 - eps})")


@pytest.mark.slow
def test_criterion_6_cc_separation(q_certificates):
    scaled = {T: q_certificates[T].value * (T + 1) for T in Q_DEGREES}
    seq = [scaled[T] for T in Q_DEGREES]
    increasing = all(a < b for a, b in zip(seq, seq[1:]))
    ok = increasing and scaled[16] >= 1.5 and all(q_certificates[T].converged for T in Q_DEGREES)
    values = ", ".join(f"T={T}: {scaled[T]:.5f}" for T in Q_DEGREES)
    assert record(6, ok, f"value*(T+1) {values}; target 3*sqrt(3)/2 = {CC_TARGET:.5f}")


def test_criterion_7_scsc_separation_large_kappa():
    kappa, T = 100, 1000
    ratio = math.exp(log_scsc_upper_rate(kappa, T) - log_scsc_lower_rate(kappa, T))
    log_ratio = log_scsc_lower_rate(kappa, T) / log_scsc_upper_rate(kappa, T)
    band = NORMAL_DERIVATIVE_CONSTANT - 0.03 <= log_ratio <= 1
    ok = ratio <= 0.2 and band
    assert record(7, ok, f"upper/lower = {ratio:.5f} (needs <= 0.2); "
                         f"log-rate ratio {log_ratio:.4f} in [{NORMAL_DERIVATIVE_CONSTANT - 0.03:.4f}, 1]: {band}")


def test_criterion_8_hard_instance():
    region = SpectralSet.halfdisc(1, 10)
    T = 8
    mesh = build_mesh(region, T, 0.05, delta=9 / 1000)
    nu, gap = dual_measure(mesh, T)
    value = minimax_P(mesh, T).value
    problem, z0 = hard_instance(nu)
    start = np.linalg.norm(z0 - problem.z_star)
    floor = (1 - 2 * gap) * value * start
    achieved = {}
    for method in BASELINES:
        # equal gradient budget: extragradient calls the operator twice per step
        iters = T // 2 if method == "extragradient" else T
        achieved[method] = run_symmetric_baseline(method, problem, None, z0, iters).dist_to_opt[-1]
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        deg = int(rng.integers(0, T + 1))
        coef = rng.uniform(0, 1, deg + 1) * np.exp(2j * np.pi * rng.uniform(size=deg + 1))
        u = (z0 - problem.z_star).astype(complex)
        v = coef[-1] * u
        for c in coef[-2::-1]:
            v = problem.JH @ v + c * u
        lhs = np.sum(np.abs(v) ** 2)
        rhs = nu.mean_square(lambda lam: np.polyval(coef[::-1], lam))
        worst = max(worst, abs(lhs - rhs) / max(rhs, 1e-300))
    ok = gap <= 0.05 and all(a >= floor for a in achieved.values()) and worst <= 1e-10
    runs = ", ".join(f"{m} {a:.4f}" for m, a in achieved.items())
    assert record(8, ok, f"gap {gap:.1e}; floor {floor:.4f}; {runs}; moment identity rel err {worst:.1e}")


def test_criterion_9_polynomial_extraction():
    worst_sym, worst_asym = 0.0, 0.0
    for seed in range(50):
        rng = np.random.default_rng(900 + seed)
        mu = rng.uniform(0, 1)
        p = random_instance(mu, mu + rng.uniform(0.2, 3), 1 + seed % 4, 1 + seed % 3, seed=seed)
        z0 = rng.normal(size=p.dim)
        for method in BASELINES:
            step = default_baseline_step(method, p.mu, p.L)
            tr = run_symmetric_baseline(method, p, step, z0, 8)
            expect = apply_symmetric_polynomial(baseline_polynomial(method, step, 8), p, z0)
            worst_sym = max(worst_sym, np.max(np.abs(tr.final - expect)))
        if p.mu > 0:
            schedule = slingshot_scsc_schedule(8, p.mu, p.L)
            hs = schedule.alpha[0::2]
            roots = [r for h in hs for r in (1 / h, -1 / h)]
        else:
            schedule = slingshot_cc_schedule(8, p.L)
            roots = list(1 / schedule.alpha[0::2]) + list(-1 / schedule.alpha[0::2])
        poly = from_roots(roots, NormalizationClass.P(8))
        u = z0 - p.z_star
        direct = sum(c.real * np.linalg.matrix_power(p.H, k) @ u for k, c in enumerate(poly.coef))
        final = run_gda(p, schedule, z0).final
        worst_asym = max(worst_asym, np.linalg.norm(final - p.z_star - direct) / np.linalg.norm(u))
        realized = apply_asymmetric_polynomial(Polynomial(poly.coef.real, 8), p, z0)
        worst_asym = max(worst_asym, np.linalg.norm(realized - final) / np.linalg.norm(u))
    ok = worst_sym <= 1e-9 and worst_asym <= 1e-10
    assert record(9, ok, f"symmetric baselines max err {worst_sym:.1e} (<= 1e-9); "
                         f"slingshot vs p(H) rel err {worst_asym:.1e} (<= 1e-10)")


@pytest.mark.slow
def test_criterion_10_bernstein_trend(q_certificates):
    region = SpectralSet.halfdisc(0, 1)
    fine = build_mesh(region, 1, 0.5, delta=np.pi / 40000)
    margins = [bernstein_margin(q_certificates[T].polynomial, region, fine) for T in Q_DEGREES]
    ok = all(a > b for a, b in zip(margins, margins[1:]))
    values = ", ".join(f"T={T}: {m:.5f}" for T, m in zip(Q_DEGREES, margins))
    assert record(10, ok, f"Bernstein margins {values} (strictly decreasing)")
