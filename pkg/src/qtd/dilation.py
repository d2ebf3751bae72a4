"""Classical and quantum time-dilation factors and their extrema.

The mean clock rate of an internal clock carried through a two-packet
momentum state splits into a classical Lorentz part (gamma_c_inv) plus a
coherence correction (gamma_q_inv); the matching first-moment shift
(delta_q) displaces Doppler-sensitive observables.  gamma_q_inv and
delta_q are, by construction, the closed-form moment differences k2 and
k1 of the wavepackets module evaluated through the same kernel.

For the opposite-phase family (phi = pi) the two extrema over the weight
angle have closed forms valid at small separation; extrema_phi_pi returns
them, and optimize_gamma_q provides the derivative-free numerical
counterpart over any subset of (theta, phi, separation).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidityWarning
from .numerics import OptimizerSpec, golden_section, nelder_mead
from .wavepackets import PacketPairSpec, moment_diff_closed

__all__ = [
    "DilationReport", "ExtremumResult",
    "gamma_c_inv", "gamma_q_inv", "delta_q", "mean_clock_time",
    "dilation_report", "lambert_w0", "extrema_phi_pi", "optimize_gamma_q",
]

GAMMA_C_VARIANTS = ("printed", "second-moment")


@dataclass(frozen=True)
class DilationReport:
    """Clock-rate summary for one packet pair.

    ``mean_clock_rate`` is the coefficient of t in the mean clock reading,
    i.e. gamma_c_inv + gamma_q_inv for the selected classical variant.
    """
    gamma_c_inv: float
    gamma_q_inv: float
    delta_q: float
    mean_clock_rate: float
    gamma_c_variant: str = "printed"


@dataclass(frozen=True)
class ExtremumResult:
    theta_star: float
    phi_star: float
    value: float
    converged: bool
    iterations: int
    separation: float | None = None
    regime_warning: str | None = None


def gamma_c_inv(spec: PacketPairSpec, variant: str = "printed") -> float:
    """Classical time-dilation factor 1/gamma_C to leading order.

    variant="printed" uses the published closed form, which carries a
    -delta^2/2 spread term; variant="second-moment" uses
    1 - <u^2>_cl / 2 where the spread term enters with +delta^2/2.  The
    two disagree by delta^2/2 and both are exposed deliberately.
    """
    if variant not in GAMMA_C_VARIANTS:
        raise ValueError(f"variant must be one of {GAMMA_C_VARIANTS}")
    c2 = np.cos(spec.theta) ** 2
    s2 = np.sin(spec.theta) ** 2
    msq = c2 * spec.u1 ** 2 + s2 * spec.u2 ** 2
    half_spread = 0.5 * spec.delta ** 2
    if variant == "printed":
        return float(1.0 - 0.5 * (msq - half_spread))
    return float(1.0 - 0.5 * (msq + half_spread))


def gamma_q_inv(spec: PacketPairSpec) -> float:
    """Coherence correction to the clock rate; equals k2 bit-for-bit."""
    return moment_diff_closed(spec).k2


def delta_q(spec: PacketPairSpec) -> float:
    """Coherence correction to the mean momentum; equals k1 bit-for-bit."""
    return moment_diff_closed(spec).k1


def mean_clock_time(spec: PacketPairSpec, t: float,
                    variant: str = "printed") -> float:
    """Mean reading of the carried clock after coordinate time t >= 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return (gamma_c_inv(spec, variant) + gamma_q_inv(spec)) * t


def dilation_report(spec: PacketPairSpec, variant: str = "printed") -> DilationReport:
    gc = gamma_c_inv(spec, variant)
    md = moment_diff_closed(spec)
    return DilationReport(gc, md.k2, md.k1, gc + md.k2, variant)


# ---------------------------------------------------------------------------
# Lambert W, principal branch
# ---------------------------------------------------------------------------

_NEG_INV_E = -np.exp(-1.0)


def lambert_w0(x: float) -> float:
    """Principal branch of w e^w = x for x >= -1/e, by Halley iteration.

    Residual contract: |w e^w - x| <= 1e-14 * max(1, |x|).
    """
    x = float(x)
    if np.isnan(x) or x < _NEG_INV_E * (1.0 + 4e-16) :
        raise DomainError("lambert_w0 requires x >= -1/e")
    x = max(x, _NEG_INV_E)
    if x == 0.0:
        return 0.0
    # seed: branch-point series near -1/e, log asymptote for large x
    if x < -0.25:
        arg = 2.0 * (np.e * x + 1.0)
        if arg <= 0.0:
            return -1.0
        p = np.sqrt(arg)
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    elif x < np.e:
        w = x / np.e if x > 0 else x * np.exp(-x)
        w = 0.5 * w if w > 1.0 else w
    else:
        lx = np.log(x)
        w = lx - np.log(lx)
    for _ in range(60):
        ew = np.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    if abs(w * np.exp(w) - x) > 1e-14 * max(1.0, abs(x)):
        raise ArithmeticError("lambert_w0 failed its residual contract")
    return float(w)


# ---------------------------------------------------------------------------
# extrema of gamma_q_inv
# ---------------------------------------------------------------------------

def extrema_phi_pi(spec: PacketPairSpec) -> tuple[ExtremumResult, ExtremumResult]:
    """Closed-form extremum pair over theta for the phi = pi family.

    In the small-separation limit the extrema sit at
    theta = pi/4 - (x / 4 total)(1 +- R) with R = sqrt(1 + 2 total^2 /
    delta^2), with values +delta^2 (R - 1)/4 at the maximum and
    -delta^2 (R + 1)/4 at the minimum.  The asymmetric minimum is forced
    by the equal-weight saturation: as the momentum sum vanishes, R -> 1
    and the minimum goes to -delta^2/2 while the maximum closes to zero.
    Both values approach +-sqrt(2) delta total / 4 when the sum dwarfs the
    spread.  Valid at small separation-to-spread ratio; a regime warning
    is attached when (u2 - u1)/delta exceeds 1.  Ordered by value,
    descending.
    """
    x = spec.separation
    total = spec.u1 + spec.u2
    if total == 0.0:
        raise ValueError("extrema formulas require u1 + u2 != 0")
    root = np.sqrt(1.0 + 2.0 * total ** 2 / spec.delta ** 2)
    warning = None
    if abs(x) / spec.delta > 1.0:
        warning = ("separation exceeds the spread; the small-separation "
                   "extremum formulas degrade here")
        warnings.warn(warning, ValidityWarning, stacklevel=2)
    quarter = 0.25 * spec.delta ** 2
    theta_max = 0.25 * np.pi - 0.25 * (x / total) * (1.0 + root)
    theta_min = 0.25 * np.pi - 0.25 * (x / total) * (1.0 - root)
    hi = ExtremumResult(float(theta_max), float(np.pi),
                        float(quarter * (root - 1.0)),
                        True, 0, regime_warning=warning)
    lo = ExtremumResult(float(theta_min), float(np.pi),
                        float(-quarter * (root + 1.0)),
                        True, 0, regime_warning=warning)
    return hi, lo


_FREE_DIMS = ("theta", "phi", "sep")


def _spec_with(base: PacketPairSpec, theta=None, phi=None, sep=None) -> PacketPairSpec:
    total = base.u1 + base.u2
    if sep is None:
        u1, u2 = base.u1, base.u2
    else:
        u1 = 0.5 * (total - sep)
        u2 = 0.5 * (total + sep)
    return PacketPairSpec(
        theta=base.theta if theta is None else theta,
        phi=base.phi if phi is None else phi,
        u1=u1, u2=u2, delta=base.delta)


def optimize_gamma_q(base: PacketPairSpec, free=("theta",), maximize: bool = True,
                     bounds: dict[str, tuple[float, float]] | None = None,
                     opt: OptimizerSpec = OptimizerSpec()) -> ExtremumResult:
    """Locate an extremum of gamma_q_inv over the given free dimensions.

    free is a subset of {"theta", "phi", "sep"}; fixed dimensions are taken
    from ``base`` (separation means u2 - u1 at fixed u1 + u2).  A coarse
    grid seeds either golden-section (one free dim) or bounded Nelder-Mead.
    Never raises on budget exhaustion: returns best-so-far with
    converged=False.
    """
    free = tuple(free)
    if not free or any(d not in _FREE_DIMS for d in free):
        raise ValueError(f"free dims must be a nonempty subset of {_FREE_DIMS}")
    bounds = dict(bounds or {})
    default_bounds = {
        "theta": (0.0, 0.5 * np.pi * (1.0 - 1e-9)),
        "phi": (0.0, np.pi * (1.0 - 1e-9)),
        "sep": (0.0, 8.0 * base.delta),
    }
    box = [bounds.get(d, default_bounds[d]) for d in free]
    sign = -1.0 if maximize else 1.0

    def objective(x):
        kw = dict(zip(free, x))
        try:
            return sign * moment_diff_closed(_spec_with(base, **kw)).k2
        except Exception:
            return np.inf

    # coarse deterministic seed
    axes = [np.linspace(lo, hi, opt.seed_grid) for lo, hi in box]
    grids = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    vals = np.array([objective(x) for x in flat])
    best = flat[int(np.argmin(vals))]

    if len(free) == 1:
        lo, hi = box[0]
        step = (hi - lo) / (opt.seed_grid - 1)
        a = max(lo, best[0] - step)
        b = min(hi, best[0] + step)
        x, fx, ok, iters = golden_section(lambda t: objective((t,)), a, b,
                                          tol=opt.simplex_tol,
                                          max_iters=opt.max_iters)
        sol = {free[0]: x}
        value = sign * fx
        converged = ok
    else:
        res = nelder_mead(objective, best, box, opt)
        sol = dict(zip(free, res.x))
        value = sign * res.value
        converged = res.converged
        iters = res.iterations

    final = _spec_with(base, **sol)
    return ExtremumResult(
        theta_star=float(final.theta), phi_star=float(final.phi),
        value=float(value), converged=bool(converged), iterations=int(iters),
        separation=float(final.separation) if "sep" in free else None)
