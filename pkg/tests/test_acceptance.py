"""Acceptance suite: one test per criterion, each printing a PASS line.

Tolerances are pinned here, not tuned elsewhere.  Criteria with stated
wall-clock budgets time the algorithmic work after a one-off kernel warm-up
call (JIT compilation is cached between runs and is not part of the
algorithm under test).
"""

import time

import numpy as np
import pytest

from qtd.dilation import (extrema_phi_pi, gamma_q_inv, lambert_w0,
                          optimize_gamma_q)
from qtd.emission import (AtomSpec, angular_rate, line_shape, line_shape_grid,
                          rate_diff, rate_total, survival_probability, xi0,
                          xi1, xi2)
from qtd.numerics import OptimizerSpec, integrate_sphere
from qtd.scenarios import SCENARIO_NAMES, ScenarioConfig, run_scenario, \
    spectrum_panels, sweep_fig1
from qtd.selftest import _random_even_profile
from qtd.wavepackets import (Eigenstate, Mixture, PacketPairSpec,
                             Superposition, mixed_sampled_pair,
                             moment_diff_closed, moment_diff_quadrature,
                             superposed_sampled_pair)
from conftest import CORPUS_SEED, corpus_spec

ATOM = AtomSpec(0.0, 1.5e9)


def _ok(name: str, detail: str = "") -> None:
    print(f"[acceptance] {name}: PASS {detail}")


def _warm_kernels() -> None:
    spec = PacketPairSpec(0.3, 0.3, 0.0, 0.01, 0.01)
    moment_diff_quadrature(Superposition(spec), Mixture(spec), 2)
    line_shape(0.0, Mixture(spec), ATOM)
    line_shape(0.0, Mixture(spec), ATOM, "perpendicular")
    survival_probability(0.5, Mixture(spec), ATOM)


def test_oracle_equivalence_of_moments():
    """Closed-form k2/k1 vs quadrature over 1000 random pairs in < 30 s."""
    _warm_kernels()
    rng = np.random.default_rng(CORPUS_SEED)
    t0 = time.perf_counter()
    worst_rel = worst_abs = 0.0
    for _ in range(1000):
        spec = corpus_spec(rng)
        md = moment_diff_closed(spec)
        sup, cl = Superposition(spec), Mixture(spec)
        for j, closed in ((1, md.k1), (2, md.k2)):
            oracle = moment_diff_quadrature(sup, cl, j)
            err = abs(closed - oracle)
            assert err <= max(1e-10 * abs(closed), 1e-14), (spec, j)
            if abs(closed) > 1e-12:
                worst_rel = max(worst_rel, err / abs(closed))
            else:
                worst_abs = max(worst_abs, err)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _ok("oracle equivalence of moments",
        f"(worst rel {worst_rel:.2e}, worst small-value abs {worst_abs:.2e}, "
        f"{elapsed:.1f}s)")


def test_even_profile_first_moment_theorem():
    """k1 = 0 within 1e-9 for 100 random even profiles at equal weights."""
    rng = np.random.default_rng(CORPUS_SEED + 1)
    worst = 0.0
    for _ in range(100):
        us, prof = _random_even_profile(rng)
        u1, u2 = sorted(rng.uniform(-3.0, 3.0, size=2))
        phi = rng.uniform(0.0, np.pi)
        if abs(u2 - u1) < 1e-3:
            u2 = u1 + 0.7
        sup = superposed_sampled_pair(us, prof, u1, u2, np.pi / 4, phi)
        cl = mixed_sampled_pair(us, prof, u1, u2, np.pi / 4)
        worst = max(worst, abs(moment_diff_quadrature(sup, cl, 1)))
    assert worst <= 1e-9
    _ok("even-profile first-moment theorem", f"(worst |k1| {worst:.2e})")


def test_equal_weight_saturation():
    """Opposite-phase equal weights saturate at -delta^2/2 as packets merge."""
    d = 0.01
    spec = PacketPairSpec(np.pi / 4, np.pi, 0.02, 0.02 + 1e-6 * d, d)
    val = gamma_q_inv(spec)
    assert abs(val - (-d * d / 2)) <= 1e-6 * (d * d / 2)
    _ok("equal-weight saturation", f"(value {val:.9e})")


def test_phi_pi_extrema_against_optimizer():
    """Analytic opposite-phase extrema: location 1e-6, value 1e-9 relative;
    large-sum asymptote within 1%."""
    d, total = 0.01, 0.05
    sep = 1e-5 * d
    spec = PacketPairSpec(np.pi / 4, np.pi, (total - sep) / 2,
                          (total + sep) / 2, d)
    hi, lo = extrema_phi_pi(spec)
    assert hi.value == pytest.approx(d * d * (np.sqrt(51) - 1) / 4, rel=1e-12)
    opt = OptimizerSpec(seed_grid=64, simplex_tol=1e-13)
    for analytic, maximize in ((hi, True), (lo, False)):
        side = (np.pi / 4 - 5 * abs(analytic.theta_star - np.pi / 4),
                np.pi / 4) if maximize else \
               (np.pi / 4, np.pi / 4 + 5 * abs(analytic.theta_star - np.pi / 4))
        res = optimize_gamma_q(spec, free=("theta",), maximize=maximize,
                               bounds={"theta": side}, opt=opt)
        assert abs(res.theta_star - analytic.theta_star) <= 1e-6
        assert abs(res.value - analytic.value) <= 1e-9 * abs(analytic.value)

    # large-sum regime: sum of momenta at 100 spreads
    total = 100 * d
    spec_ls = PacketPairSpec(np.pi / 4, np.pi, (total - sep) / 2,
                             (total + sep) / 2, d)
    hi_ls, _ = extrema_phi_pi(spec_ls)
    span = 5 * abs(hi_ls.theta_star - np.pi / 4)
    res = optimize_gamma_q(spec_ls, free=("theta",), maximize=True,
                           bounds={"theta": (np.pi / 4 - span, np.pi / 4)},
                           opt=opt)
    asymptote = np.sqrt(2) * d * total / 4
    assert abs(res.value - asymptote) <= 0.01 * asymptote
    _ok("opposite-phase extrema", f"(large-sum value {res.value:.6e})")


def test_lambert_ridge_endpoint():
    """Equal-weight ridge of the zero-phase sweep ends at 2 sqrt(1+W0(1/e))."""
    res = sweep_fig1("b", ScenarioConfig(grid=128))
    endpoint = res.metadata["ridge_endpoint_sep_over_delta"]
    exact = 2.0 * np.sqrt(1.0 + lambert_w0(1.0 / np.e))
    assert abs(endpoint - exact) <= 1e-3
    assert abs(endpoint - 2.261) <= 1e-3 + abs(exact - 2.261)
    _ok("Lambert-W ridge endpoint", f"(endpoint {endpoint:.6f})")


def test_angular_identities():
    """Sphere integrals of the dipole pattern; angular density integrates
    to the total rate for 50 random states."""
    assert abs(integrate_sphere(xi0) - 1.0) <= 1e-12
    assert abs(integrate_sphere(xi1)) <= 1e-12
    assert abs(integrate_sphere(xi2) + 1.0) <= 1e-12
    rng = np.random.default_rng(CORPUS_SEED + 2)
    worst = 0.0
    for k in range(50):
        spec = corpus_spec(rng)
        state = (Superposition(spec), Mixture(spec),
                 Eigenstate(spec.u1))[k % 3]
        total = rate_total(state, ATOM)
        sphere = integrate_sphere(lambda t, p: angular_rate(t, p, state, ATOM))
        worst = max(worst, abs(sphere - total))
        assert abs(sphere - total) <= 1e-10
    _ok("angular identities", f"(worst sphere residual {worst:.2e})")


def test_kernel_convergence_order():
    """Unexpanded kernel vs xi expansion: deviation drops >= 7x per halving."""
    from qtd.emission import kernel_unexpanded, xi_expansion
    atom = AtomSpec(0.0, 1.5e9)
    ths = np.linspace(0.1, np.pi - 0.1, 16)
    phs = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
    devs = []
    for u in (0.1, 0.05, 0.025):
        num = max(abs(kernel_unexpanded(u, t, p, atom)
                      - xi_expansion(u, t, p, atom))
                  for t in ths for p in phs)
        den = max(abs(xi_expansion(u, t, p, atom)) for t in ths for p in phs)
        devs.append(num / den)
    r1, r2 = devs[0] / devs[1], devs[1] / devs[2]
    assert r1 >= 7.0 and r2 >= 7.0
    _ok("kernel convergence order", f"(ratios {r1:.2f}, {r2:.2f})")


def test_line_shape_peaks():
    """Sharp-momentum peaks sit at the Doppler and relativistic shifts to
    within one grid step (2048 points over +-100 natural widths)."""
    u = 1e-7
    atom_par = AtomSpec(0.0, 1.5e9)
    width = 1.0 / atom_par.line_ratio
    grid = u + np.linspace(-100 * width, 100 * width, 2048)
    vals = line_shape_grid(grid, Eigenstate(u), atom_par, "parallel")
    step = grid[1] - grid[0]
    assert abs(grid[int(np.argmax(vals))] - u) <= step

    atom_perp = AtomSpec(0.0, 1.5e17)
    width = 1.0 / atom_perp.line_ratio
    center = -0.5 * u * u
    grid = center + np.linspace(-100 * width, 100 * width, 2048)
    vals = line_shape_grid(grid, Eigenstate(u), atom_perp, "perpendicular")
    step = grid[1] - grid[0]
    assert abs(grid[int(np.argmax(vals))] - center) <= step
    _ok("line-shape peaks")


def test_fig2a_nearly_indistinguishable():
    """Broad-line panel with the smaller spread: coherent and classical
    curves agree pointwise within 2% of the classical curve.

    Note: at the panel's parameters the packet overlap exp(-y) is 6.2e-2,
    which bounds the achievable midpoint agreement from below; see the
    recorded metrics in the assertion message if this fails.
    """
    _warm_kernels()
    sg = spectrum_panels("fig2a", ScenarioConfig())
    rel = sg.metadata["max_rel_diff_vs_cl"]
    scale = sg.metadata["max_diff_vs_peak"]
    assert rel < 0.02, (f"max pointwise |sup-cl|/cl = {rel:.4f} "
                        f"(plot-scale metric {scale:.4f}); both exceed 2% "
                        f"because the packets overlap at exp(-y) = 6.2e-2")
    _ok("fig2a nearly indistinguishable", f"(max rel diff {rel:.3e})")


def test_fig2d_midpoint_upshift():
    """Ultranarrow-panel coherence upshift at the midpoint frequency reaches
    0.3 with weight and phase scanned over a coarse grid incl. the optimum."""
    _warm_kernels()
    u1, u2, delta = 2e-8, 4e-8, 8e-9
    atom = AtomSpec(0.0, 1.5e17)
    nu_mid = -0.5 * (0.5 * (u1 + u2)) ** 2
    best = -np.inf
    for theta in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
        for phi in (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi):
            spec = PacketPairSpec(theta, phi, u1, u2, delta)
            ps = line_shape(nu_mid, Superposition(spec), atom, "perpendicular")
            pc = line_shape(nu_mid, Mixture(spec), atom, "perpendicular")
            best = max(best, (ps - pc) / pc)
    assert best >= 0.3
    _ok("fig2d midpoint upshift", f"(best {best:.3f})")


def test_full_figure_suite_runtime(tmp_path):
    """Every scenario runs end-to-end at default resolution in < 60 s."""
    _warm_kernels()
    t0 = time.perf_counter()
    for name in SCENARIO_NAMES:
        run_scenario(name, ScenarioConfig(), str(tmp_path))
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _ok("full figure suite runtime", f"({elapsed:.1f}s)")


def test_rate_identity():
    """(rate_sup - rate_cl) equals the clock-rate shift: closed path to
    1e-12, quadrature path to 1e-10, over the random corpus."""
    _warm_kernels()
    rng = np.random.default_rng(CORPUS_SEED + 3)
    worst_c = worst_q = 0.0
    for _ in range(200):
        spec = corpus_spec(rng)
        gq = gamma_q_inv(spec)
        worst_c = max(worst_c, abs(rate_diff(spec, ATOM).diff - gq))
        worst_q = max(worst_q,
                      abs(rate_diff(spec, ATOM, "quadrature").diff - gq))
    assert worst_c <= 1e-12
    assert worst_q <= 1e-10
    _ok("rate identity", f"(closed {worst_c:.1e}, quad {worst_q:.1e})")


def test_survival_initial_conditions_and_slope():
    """S(0) = 1 exactly; the initial slope of S_sup - S_cl equals minus the
    clock-rate shift within 1e-8 by Richardson differencing."""
    spec = PacketPairSpec(np.pi / 4, 0.0, 0.015, 0.035, 0.01)
    sup, cl = Superposition(spec), Mixture(spec)
    assert survival_probability(0.0, sup, ATOM) == 1.0
    assert survival_probability(0.0, cl, ATOM) == 1.0

    def d(t):
        return (survival_probability(t, sup, ATOM)
                - survival_probability(t, cl, ATOM))

    h = 0.01
    r1 = (4 * d(h) - d(2 * h)) / (2 * h)
    r2 = (4 * d(h / 2) - d(h)) / h
    slope = (4 * r2 - r1) / 3
    gq = gamma_q_inv(spec)
    assert abs(slope + gq) <= 1e-8
    _ok("survival slope identity", f"(residual {abs(slope + gq):.2e})")
