"""Built-in oracle-equivalence and identity suites.

Runs the cross-checks that tie the closed forms to their independent
numerical oracles: moment shifts vs density quadrature, the dipole-pattern
sphere integrals, the convergence order of the unexpanded angular kernel,
the even-profile first-moment cancellation, the opposite-phase extremum
formulas vs the numerical optimizer, and the decay-rate identity.

``perturb`` multiplies the closed-form side of every closed-vs-oracle
comparison by (1 + perturb); a nonzero value is a deliberate-breakage
harness that should make exactly those suites fail and name themselves.
"""

from __future__ import annotations

import numpy as np

from .dilation import extrema_phi_pi, gamma_q_inv, optimize_gamma_q
from .emission import (AtomSpec, kernel_unexpanded, rate_diff, xi0, xi1, xi2,
                       xi_expansion)
from .numerics import OptimizerSpec, QuadratureSpec, integrate_sphere
from .wavepackets import (Mixture, PacketPairSpec, Superposition,
                          mixed_sampled_pair, moment_diff_closed,
                          moment_diff_quadrature, superposed_sampled_pair)

__all__ = ["run_all", "SUITES"]


def random_spec(rng: np.random.Generator) -> PacketPairSpec:
    """Random valid packet pair from the oracle-corpus distribution."""
    return PacketPairSpec(
        theta=rng.uniform(0.0, np.pi / 2 - 0.01),
        phi=rng.uniform(0.0, np.pi),
        u1=rng.uniform(-0.1, 0.1),
        u2=rng.uniform(-0.1, 0.1),
        delta=rng.uniform(1e-3, 0.05),
    )


def _agree(closed: float, oracle: float, rel: float, abs_floor: float) -> bool:
    return abs(closed - oracle) <= max(rel * abs(closed), abs_floor)


def suite_moments(perturb: float = 0.0, n: int = 150, seed: int = 20260810) -> dict:
    """Closed-form k1, k2 against density-difference quadrature."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    bad = 0
    for _ in range(n):
        spec = random_spec(rng)
        md = moment_diff_closed(spec)
        sup, cl = Superposition(spec), Mixture(spec)
        for j, closed in ((1, md.k1), (2, md.k2)):
            oracle = moment_diff_quadrature(sup, cl, j)
            closed = closed * (1.0 + perturb)
            err = abs(closed - oracle) / max(abs(closed), 1e-14)
            worst = max(worst, err)
            if not _agree(closed, oracle, 1e-10, 1e-14):
                bad += 1
    return {"name": "moments", "passed": bad == 0,
            "details": {"specs": n, "failures": bad, "worst_rel": worst}}


def suite_xi_integrals(perturb: float = 0.0) -> dict:
    """Sphere integrals of the dipole pattern and its corrections."""
    targets = ((xi0, 1.0), (xi1, 0.0), (xi2, -1.0))
    residuals = []
    for fn, expect in targets:
        val = integrate_sphere(fn, QuadratureSpec(abs_tol=1e-13, rel_tol=1e-13))
        residuals.append(abs(val - expect))
    ok = all(r <= 1e-12 for r in residuals)
    return {"name": "xi_integrals", "passed": ok,
            "details": {"residuals": residuals}}


def suite_kernel_convergence(perturb: float = 0.0) -> dict:
    """Unexpanded angular kernel approaches the xi expansion at cubic order."""
    atom = AtomSpec(0.0, 1.5e9)
    th = np.linspace(0.1, np.pi - 0.1, 16)
    ph = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    devs = []
    for u in (0.1, 0.05, 0.025):
        num = max(abs(kernel_unexpanded(u, t, p, atom) - xi_expansion(u, t, p, atom))
                  for t in th for p in ph)
        den = max(abs(xi_expansion(u, t, p, atom)) for t in th for p in ph)
        devs.append(num / den)
    ratios = [devs[i] / devs[i + 1] for i in range(len(devs) - 1)]
    ok = all(r >= 7.0 for r in ratios)
    return {"name": "kernel_convergence", "passed": ok,
            "details": {"deviations": devs, "ratios": ratios}}


def _random_even_profile(rng: np.random.Generator):
    us = np.linspace(-12.0, 12.0, 1025)
    prof = np.zeros_like(us)
    for _ in range(4):
        amp = rng.uniform(0.2, 1.0)
        sig = rng.uniform(0.5, 2.0)
        freq = rng.uniform(0.0, 2.0)
        prof += amp * np.exp(-us ** 2 / (2.0 * sig ** 2)) * np.cos(freq * us)
    norm = np.trapezoid(prof ** 2, us)
    return us, prof / np.sqrt(norm)


def suite_k1_theorem(perturb: float = 0.0, n: int = 20, seed: int = 7) -> dict:
    """Even profiles give zero first-moment shift at equal weights."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        us, prof = _random_even_profile(rng)
        u1, u2 = sorted(rng.uniform(-3.0, 3.0, size=2))
        phi = rng.uniform(0.0, np.pi)
        if abs(u2 - u1) < 1e-3 and phi > np.pi - 1e-2:
            u2 = u1 + 0.5
        sup = superposed_sampled_pair(us, prof, u1, u2, np.pi / 4, phi)
        cl = mixed_sampled_pair(us, prof, u1, u2, np.pi / 4)
        worst = max(worst, abs(moment_diff_quadrature(sup, cl, 1)))
    return {"name": "k1_theorem", "passed": worst <= 1e-9,
            "details": {"profiles": n, "worst_abs_k1": worst}}


def suite_extrema(perturb: float = 0.0) -> dict:
    """Numeric optimizer against the opposite-phase extremum formulas."""
    delta, total = 0.01, 0.05
    sep = 1e-5 * delta
    u1, u2 = 0.5 * (total - sep), 0.5 * (total + sep)
    spec = PacketPairSpec(np.pi / 4, np.pi, u1, u2, delta)
    hi, lo = extrema_phi_pi(spec)
    opt = OptimizerSpec(seed_grid=64, simplex_tol=1e-13)
    span = 5.0 * abs(hi.theta_star - np.pi / 4)
    res_hi = optimize_gamma_q(spec, free=("theta",), maximize=True,
                              bounds={"theta": (np.pi / 4 - span, np.pi / 4)},
                              opt=opt)
    res_lo = optimize_gamma_q(spec, free=("theta",), maximize=False,
                              bounds={"theta": (np.pi / 4, np.pi / 4 + span)},
                              opt=opt)
    dtheta = max(abs(res_hi.theta_star - hi.theta_star * (1.0 + perturb)),
                 abs(res_lo.theta_star - lo.theta_star * (1.0 + perturb)))
    dval = max(abs(res_hi.value - hi.value * (1.0 + perturb)) / abs(hi.value),
               abs(res_lo.value - lo.value * (1.0 + perturb)) / abs(lo.value))
    ok = dtheta <= 1e-6 and dval <= 1e-9
    return {"name": "extrema_agreement", "passed": ok,
            "details": {"theta_err": dtheta, "value_rel_err": dval}}


def suite_rate_identity(perturb: float = 0.0, n: int = 30, seed: int = 11) -> dict:
    """(rate_sup - rate_cl) equals the closed clock-rate shift."""
    rng = np.random.default_rng(seed)
    atom = AtomSpec(0.0, 1.5e9)
    worst_closed = 0.0
    worst_quad = 0.0
    for _ in range(n):
        spec = random_spec(rng)
        gq = gamma_q_inv(spec) * (1.0 + perturb)
        worst_closed = max(worst_closed, abs(rate_diff(spec, atom).diff - gq))
        worst_quad = max(worst_quad,
                         abs(rate_diff(spec, atom, "quadrature").diff - gq))
    ok = worst_closed <= 1e-12 and worst_quad <= 1e-10
    return {"name": "rate_identity", "passed": ok,
            "details": {"worst_closed": worst_closed, "worst_quad": worst_quad}}


SUITES = (suite_moments, suite_xi_integrals, suite_kernel_convergence,
          suite_k1_theorem, suite_extrema, suite_rate_identity)


def run_all(perturb: float = 0.0) -> dict:
    """Run every suite; report is JSON-serializable."""
    results = [suite(perturb) for suite in SUITES]
    return {
        "perturb": perturb,
        "suites": results,
        "failed": [r["name"] for r in results if not r["passed"]],
        "all_passed": all(r["passed"] for r in results),
    }
