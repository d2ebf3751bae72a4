"""Spontaneous-emission observables of a moving two-level atom.

Rates are expressed in units of the rest-frame dipole rate Gamma0,
momenta as u = p/(mc), and emission frequencies as detunings
nu = omega/Omega - 1.  Detunings are the primitive frequency variable
throughout because the perpendicular line structure sits at |nu| as small
as 1e-16, far below the double-precision resolution of omega/Omega near 1.

Angular conventions: the atom moves along z, the dipole points along x;
Theta is measured from the motion axis and Phi from the dipole axis.  The
dipole pattern xi0 and its first and second motional corrections xi1, xi2
integrate to 1, 0 and -1 over the sphere, which ties the angular
distribution to the total rate 1 - (3/2) eps - <u^2>/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import QuadratureNotConverged, ValidityWarning
from .numerics import QuadratureSpec
from .wavepackets import (Eigenstate, Mixture, MotionalState, PacketPairSpec,
                          SampledPacket, Superposition, moment_diff_closed,
                          state_moment_quadrature, support_window)

__all__ = [
    "AtomSpec", "AngularSample", "SpectrumGrid", "RateComparison",
    "xi0", "xi1", "xi2", "rate_momentum", "rate_total", "rate_diff",
    "angular_rate", "angular_difference",
    "line_parallel", "line_perpendicular", "line_shape", "line_shape_grid",
    "survival_probability", "pole_frequency", "kernel_unexpanded",
    "xi_expansion",
]

_INV_8PI = 3.0 / (8.0 * np.pi)


@dataclass(frozen=True)
class AtomSpec:
    """Atom and transition constants as dimensionless ratios.

    epsilon is the recoil parameter hbar*Omega/(m c^2); line_ratio is
    Omega/Gamma0.  The leading-order expansions assume epsilon << 1; a
    validity warning fires above 1e-3.
    """
    epsilon: float = 0.0
    line_ratio: float = 1.5e9

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not self.line_ratio > 0:
            raise ValueError("line_ratio must be positive")
        if self.epsilon > 1e-3:
            warnings.warn("epsilon above 1e-3: first-order recoil expansion "
                          "is questionable", ValidityWarning, stacklevel=2)


@dataclass(frozen=True)
class AngularSample:
    """One direction on the emission sphere with its rate density."""
    big_theta: float
    big_phi: float
    rate_density: float

    def __post_init__(self):
        if not 0.0 <= self.big_theta <= np.pi:
            raise ValueError("big_theta must lie in [0, pi]")
        if not 0.0 <= self.big_phi < 2.0 * np.pi:
            raise ValueError("big_phi must lie in [0, 2 pi)")
        if not np.isfinite(self.rate_density):
            raise ValueError("rate_density must be finite")


@dataclass(frozen=True)
class RateComparison:
    """Total-rate difference between coherent and classical preparations."""
    diff: float
    rate_sup: float
    rate_cl: float


@dataclass
class SpectrumGrid:
    """Tabulated line shape over a detuning axis, coherent vs classical.

    ``detuning`` holds nu = omega/Omega - 1 (the authoritative axis);
    ``omega_axis`` reconstructs omega/Omega, which is lossy in double
    precision for ultranarrow lines and provided for convenience only.
    ``normalization`` is the peak value of the same observable for one
    stationary packet of equal spread, used to scale plots.
    """
    detuning: np.ndarray
    p_sup: np.ndarray
    p_cl: np.ndarray
    normalization: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        d = np.asarray(self.detuning, dtype=np.float64)
        if d.ndim != 1 or d.size < 2 or not np.all(np.diff(d) > 0):
            raise ValueError("detuning axis must be strictly increasing")
        if len(self.p_sup) != d.size or len(self.p_cl) != d.size:
            raise ValueError("value lists must match the axis length")
        self.detuning = d
        self.p_sup = np.asarray(self.p_sup, dtype=np.float64)
        self.p_cl = np.asarray(self.p_cl, dtype=np.float64)

    @property
    def omega_axis(self) -> np.ndarray:
        return 1.0 + self.detuning


# ---------------------------------------------------------------------------
# dipole pattern and motional corrections
# ---------------------------------------------------------------------------

def xi0(big_theta, big_phi):
    """Dipole angular distribution; integrates to 1 over the sphere."""
    st = np.sin(big_theta)
    cp = np.cos(big_phi)
    return 3.0 / (8.0 * np.pi) * (1.0 - st * st * cp * cp)


def xi1(big_theta, big_phi):
    """First-order motional correction; integrates to 0."""
    st = np.sin(big_theta)
    cp = np.cos(big_phi)
    return 3.0 / (4.0 * np.pi) * np.cos(big_theta) * (1.0 - 2.0 * st * st * cp * cp)


def xi2(big_theta, big_phi):
    """Second-order motional correction; integrates to -1."""
    cp = np.cos(big_phi)
    return 3.0 / (16.0 * np.pi) * (
        6.0 * np.cos(2.0 * big_theta)
        + 5.0 * cp * cp * (np.cos(4.0 * big_theta) - np.cos(2.0 * big_theta)))


# ---------------------------------------------------------------------------
# rates
# ---------------------------------------------------------------------------

def rate_momentum(u: float, atom: AtomSpec) -> float:
    """Decay rate of a sharp-momentum atom over Gamma0: 1 - 3eps/2 - u^2/2."""
    if abs(u) > 0.3:
        warnings.warn("momentum above 0.3 mc: quadratic rate expansion is "
                      "questionable", ValidityWarning, stacklevel=2)
    return 1.0 - 1.5 * atom.epsilon - 0.5 * u * u

def _second_moment(state: MotionalState, method: str) -> float:
    if isinstance(state, Eigenstate):
        return state.u ** 2
    if isinstance(state, SampledPacket):
        return state.moments()[1]
    if method == "closed":
        return state.moments()[1]
    if method != "quadrature":
        raise ValueError("method must be 'closed' or 'quadrature'")
    return state_moment_quadrature(state, 2)


def _first_moment(state: MotionalState, method: str) -> float:
    if isinstance(state, Eigenstate):
        return state.u
    if isinstance(state, SampledPacket):
        return state.moments()[0]
    if method == "closed":
        return state.moments()[0]
    if method != "quadrature":
        raise ValueError("method must be 'closed' or 'quadrature'")
    return state_moment_quadrature(state, 1)


def rate_total(state: MotionalState, atom: AtomSpec,
               method: str = "closed") -> float:
    """Long-time total decay rate over Gamma0: 1 - 3eps/2 - <u^2>/2."""
    return 1.0 - 1.5 * atom.epsilon - 0.5 * _second_moment(state, method)


def rate_diff(spec: PacketPairSpec, atom: AtomSpec,
              method: str = "closed") -> RateComparison:
    """(Gamma_sup - Gamma_cl)/Gamma0 for one packet pair, with both rates.

    On the closed path the difference is the moment shift k2 itself; the
    quadrature path recomputes both rates from pointwise densities.
    """
    rate_cl = rate_total(Mixture(spec), atom, method)
    if method == "closed":
        diff = moment_diff_closed(spec).k2
        return RateComparison(diff, rate_cl + diff, rate_cl)
    rate_sup = rate_total(Superposition(spec), atom, method)
    return RateComparison(rate_sup - rate_cl, rate_sup, rate_cl)


def angular_rate(big_theta, big_phi, state: MotionalState, atom: AtomSpec,
                 method: str = "closed"):
    """Angular emission density Gamma(Theta, Phi)/Gamma0 per steradian."""
    m1 = _first_moment(state, method)
    m2 = _second_moment(state, method)
    return (xi0(big_theta, big_phi) * (1.0 - 1.5 * atom.epsilon)
            + xi1(big_theta, big_phi) * m1
            + xi2(big_theta, big_phi) * (0.5 * m2))


def angular_difference(big_theta, big_phi, spec: PacketPairSpec):
    """Coherent-minus-classical angular density, xi1*k1 - xi2*k2.

    The minus sign follows from the moment orientation: k2 is the rate
    shift (classical-minus-coherent second moment), so the second-moment
    term of the angular density shifts by -k2; integrated over the sphere
    (where xi2 contributes -1) the difference recovers +k2, the total-rate
    shift.
    """
    md = moment_diff_closed(spec)
    return (xi1(big_theta, big_phi) * md.k1
            - xi2(big_theta, big_phi) * md.k2)


# ---------------------------------------------------------------------------
# line shapes
# ---------------------------------------------------------------------------

def _lorentz_width_u(kind: str, nu: float, r: float) -> float:
    """Approximate half-width, in momentum, of the resonance at detuning nu."""
    a = 0.5 / r
    if kind == "parallel":
        return a
    ustar = math.sqrt(max(-2.0 * nu, 0.0))
    return a / ustar if ustar > math.sqrt(a) else math.sqrt(a)


def _poles_u(kind: str, nu: float) -> tuple[float, ...]:
    """Momenta resonant with detuning nu (forced quadrature nodes)."""
    if kind == "parallel":
        return (nu,)
    if nu < 0.0:
        ustar = math.sqrt(-2.0 * nu)
        return (-ustar, ustar)
    return (0.0,)


def _line_lorentzian(kind: str, nu: float, u: float, r: float) -> float:
    """Momentum-resolved line factor at detuning nu (per unit omega/Omega)."""
    if kind == "parallel":
        off = nu - u
        num = 1.0 + 3.0 * u
        w2 = (1.0 + 2.0 * u) / (4.0 * r * r)
    else:
        off = nu + 0.5 * u * u
        num = 1.0 - 1.5 * u * u
        w2 = (1.0 - u * u) / (4.0 * r * r)
    return num / (2.0 * np.pi * r) / (off * off + w2)


def line_shape(nu: float, state: MotionalState, atom: AtomSpec,
               kind: str = "parallel",
               quad: QuadratureSpec | None = None) -> float:
    """Emission line value at detuning nu = omega/Omega - 1.

    (3/8 pi) * integral of the state's momentum density against the
    momentum-shifted Lorentzian; the parallel line is Doppler-shifted
    linearly in u, the perpendicular one quadratically.  Quadrature forces
    nodes at the packet centers and at the resonant momenta.
    """
    if kind not in ("parallel", "perpendicular"):
        raise ValueError("kind must be 'parallel' or 'perpendicular'")
    r = atom.line_ratio
    nu = float(nu)
    if isinstance(state, Eigenstate):
        return _INV_8PI * _line_lorentzian(kind, nu, state.u, r)

    quad = quad or QuadratureSpec()
    poles = _poles_u(kind, nu)
    if isinstance(state, SampledPacket):
        centers = (float(state.us[0]), float(state.us[-1]))
        window = 0.0
    else:
        spec = state.spec
        centers = (min(spec.u1, spec.u2), max(spec.u1, spec.u2))
        window = 10.0 * spec.delta
    width = max(window, 50.0 * _lorentz_width_u(kind, nu, r))
    pts = sorted(set(centers) | set(poles))
    lo = pts[0] - width
    hi = pts[-1] + width
    edges = np.array([lo, *[p for p in pts if lo < p < hi], hi])

    if isinstance(state, SampledPacket):
        def f(u):
            if kind == "parallel":
                off = nu - u
                num = 1.0 + 3.0 * u
                w2 = (1.0 + 2.0 * u) / (4.0 * r * r)
            else:
                off = nu + 0.5 * u * u
                num = 1.0 - 1.5 * u * u
                w2 = (1.0 - u * u) / (4.0 * r * r)
            return state.density(u) * num / (2.0 * np.pi * r) / (off * off + w2)
        value, err, status = _kernels.adaptive_callable(
            f, edges, quad.abs_tol, quad.rel_tol, quad.max_depth)
    else:
        code = _kernels.LINE_PAR if kind == "parallel" else _kernels.LINE_PERP
        skind = _kernels.STATE_SUP if isinstance(state, Superposition) else _kernels.STATE_CL
        params = state.spec.kernel_params(nu, r)
        params[0] = skind
        value, err, status = _kernels.quad_dispatch(
            code, params, edges, quad.abs_tol, quad.rel_tol, quad.max_depth)
    if status != 0:
        raise QuadratureNotConverged(
            f"line shape at nu={nu:.3e}: estimate {err:.3e} above tolerance")
    return float(_INV_8PI * value)


def line_parallel(omega_over_Omega: float, state: MotionalState,
                  atom: AtomSpec, quad: QuadratureSpec | None = None) -> float:
    """Line shape along the motion; prefer line_shape with a detuning for
    ultranarrow transitions (omega/Omega - 1 underflows near 1)."""
    return line_shape(omega_over_Omega - 1.0, state, atom, "parallel", quad)


def line_perpendicular(omega_over_Omega: float, state: MotionalState,
                       atom: AtomSpec, quad: QuadratureSpec | None = None) -> float:
    """Line shape perpendicular to motion and dipole; see line_parallel."""
    return line_shape(omega_over_Omega - 1.0, state, atom, "perpendicular", quad)


def line_shape_grid(detunings, state: MotionalState, atom: AtomSpec,
                    kind: str = "parallel",
                    quad: QuadratureSpec | None = None,
                    threads: int = 1) -> np.ndarray:
    """Vectorized line_shape over a detuning axis.

    ``threads`` > 1 splits the axis across a thread pool (the jitted
    quadrature core releases the GIL); results are merged by index, so the
    output is identical for any thread count.
    """
    nus = np.asarray(detunings, dtype=np.float64)
    if threads <= 1 or nus.size < 8:
        return np.array([line_shape(nu, state, atom, kind, quad) for nu in nus])
    from concurrent.futures import ThreadPoolExecutor
    chunks = np.array_split(np.arange(nus.size), threads)
    out = np.empty(nus.size)

    def work(idx):
        for i in idx:
            out[i] = line_shape(nus[i], state, atom, kind, quad)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, chunks))
    return out


def stationary_peak(atom: AtomSpec, delta: float, kind: str = "parallel",
                    quad: QuadratureSpec | None = None) -> float:
    """Peak line value for one stationary packet of spread delta.

    Used as the plot normalization.  The peak is searched on a local grid
    around zero detuning spanning the larger of the Doppler and natural
    widths.
    """
    single = Mixture(PacketPairSpec(0.0, 0.0, 0.0, 0.0, delta))
    half = 3.0 * max(delta if kind == "parallel" else 0.5 * delta * delta,
                     1.0 / atom.line_ratio)
    grid = np.linspace(-half, half, 41)
    vals = line_shape_grid(grid, single, atom, kind, quad)
    return float(vals.max())


# ---------------------------------------------------------------------------
# survival probability
# ---------------------------------------------------------------------------

def survival_probability(t: float, state: MotionalState, atom: AtomSpec,
                         quad: QuadratureSpec | None = None) -> float:
    """Probability the atom is still excited at time t (units 1/Gamma0).

    integral of rho(u) exp(-rate(u) t); exactly 1 at t = 0 for any
    normalized state.  Valid while t << 2 (mc/Delta)^2, far beyond any
    regime of interest here.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 1.0
    if isinstance(state, Eigenstate):
        return float(np.exp(-rate_momentum(state.u, atom) * t))
    if isinstance(state, SampledPacket):
        rho = np.abs(state.amps) ** 2
        gam = 1.0 - 1.5 * atom.epsilon - 0.5 * state.us ** 2
        return float(np.trapezoid(rho * np.exp(-gam * t), state.us))
    spec = state.spec
    quad = quad or QuadratureSpec()
    lo, hi = support_window(spec)
    mid = 0.5 * (spec.u1 + spec.u2)
    edges = np.array([lo, *sorted({spec.u1, mid, spec.u2}), hi])
    code = _kernels.SURVIVAL
    params = spec.kernel_params(float(t), atom.epsilon)
    params[0] = (_kernels.STATE_SUP if isinstance(state, Superposition)
                 else _kernels.STATE_CL)
    value, err, status = _kernels.quad_dispatch(
        code, params, edges, quad.abs_tol, quad.rel_tol, quad.max_depth)
    if status != 0:
        raise QuadratureNotConverged(
            f"survival at t={t}: estimate {err:.3e} above tolerance")
    return float(value)


# ---------------------------------------------------------------------------
# unexpanded angular kernel (internal oracle for the xi expansion)
# ---------------------------------------------------------------------------

def pole_frequency(u: float, big_theta: float, atom: AtomSpec) -> float:
    """Resonant frequency omega0/Omega for emission at angle Theta."""
    ct = np.cos(big_theta)
    return float(1.0 + u * ct + 0.5 * u * u * np.cos(2.0 * big_theta)
                 - 0.5 * atom.epsilon)


def kernel_unexpanded(u: float, big_theta: float, big_phi: float,
                      atom: AtomSpec,
                      omega_over_Omega: float | None = None) -> float:
    """Angular emission kernel eta(omega0)/|lambda'(omega0)|, Omega^3-scaled.

    Evaluates the pre-expansion product of the frequency-weighted coupling
    kernel and the inverse slope of the energy-conservation root, at the
    pole frequency by default or at a caller-supplied omega/Omega.  Agrees
    with (8 pi / 3) sin(Theta) [xi0 (1 - 3 eps/2) + xi1 u + xi2 u^2 / 2]
    through second order in u.
    """
    eps = atom.epsilon
    w = pole_frequency(u, big_theta, atom) if omega_over_Omega is None \
        else float(omega_over_Omega)
    st = np.sin(big_theta)
    ct = np.cos(big_theta)
    sp = np.sin(big_phi)
    cp = np.cos(big_phi)
    eta = w ** 3 * st * ((1.0 - st * st * cp * cp) * (1.0 + w * eps)
                         - 2.0 * u * ct
                         + u * u * (ct * ct * sp * sp + cp * cp))
    w0 = pole_frequency(u, big_theta, atom)
    slope = abs(-1.0 + u * ct - w0 * eps)
    return float(eta / slope)


def xi_expansion(u: float, big_theta: float, big_phi: float,
                 atom: AtomSpec) -> float:
    """Second-order angular expansion matching kernel_unexpanded's scaling."""
    pref = 8.0 * np.pi / 3.0
    return float(pref * np.sin(big_theta) * (
        xi0(big_theta, big_phi) * (1.0 - 1.5 * atom.epsilon)
        + xi1(big_theta, big_phi) * u
        + xi2(big_theta, big_phi) * 0.5 * u * u))
