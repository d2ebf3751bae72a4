"""Gaussian momentum wave packets, their superpositions and mixtures.

All momenta are dimensionless, u = p/(mc), and spreads delta = Delta/(mc).
A packet pair is the five-parameter family (theta, phi, u1, u2, delta):
amplitude cos(theta) around u1 plus exp(i phi) sin(theta) around u2, both
bare Gaussians exp(-(u - ui)^2 / 2 delta^2).

The central quantities are the moment differences between the coherent
superposition and the classical mixture of the same pair.  Each order is
oriented as the coherent-minus-classical shift of the observable it
displaces:

    k1 = <u>_sup - <u>_cl              (mean-momentum / Doppler shift)
    k2 = (<u^2>_cl - <u^2>_sup) / 2    (clock and decay-rate shift,
                                        rate ~ 1 - <u^2>/2)

Both come in closed form (moment_diff_closed) and by adaptive quadrature
of the pointwise densities (moment_diff_quadrature), which serves as the
independent oracle for the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import QuadratureNotConverged, ZeroNormState
from .numerics import QuadratureSpec

__all__ = [
    "PacketPairSpec", "MomentDiff",
    "Superposition", "Mixture", "Eigenstate", "SampledPacket", "MotionalState",
    "normalization", "density_superposition", "density_mixture",
    "moment_diff_closed", "moment_diff_quadrature",
    "superposed_sampled_pair", "mixed_sampled_pair",
]

ZERO_NORM_THRESHOLD = 1e-14  # below this, densities lose all significance

_SQRT_PI = np.sqrt(np.pi)


@dataclass(frozen=True)
class PacketPairSpec:
    """Two Gaussian momentum packets with weights and a relative phase.

    theta in [0, pi/2), phi in [0, pi], delta > 0.  The equally weighted,
    opposite-phase, zero-separation combination has zero norm and is
    rejected at construction.
    """
    theta: float
    phi: float
    u1: float
    u2: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.theta < 0.5 * np.pi:
            raise ValueError("theta must lie in [0, pi/2)")
        if not 0.0 <= self.phi <= np.pi:
            raise ValueError("phi must lie in [0, pi]")
        if not self.delta > 0.0:
            raise ValueError("delta must be positive")
        for name in ("u1", "u2"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.norm_denominator() <= ZERO_NORM_THRESHOLD:
            raise ZeroNormState(
                "equally weighted opposite-phase packets with vanishing "
                "separation have zero norm")

    @property
    def separation(self) -> float:
        return self.u2 - self.u1

    @property
    def overlap_exponent(self) -> float:
        """y = (u2 - u1)^2 / (4 delta^2); exp(-y) is the packet overlap."""
        return _kernels._coh_y(self.u1, self.u2, self.delta)

    def norm_denominator(self) -> float:
        """1 + cos(phi) sin(2 theta) exp(-y), evaluated cancellation-free."""
        return float(_kernels._dhat(self.theta, self.phi,
                                    self.overlap_exponent))

    def kernel_params(self, *extras) -> np.ndarray:
        """Parameter vector consumed by the quadrature kernels."""
        p = np.zeros(8)
        p[1:6] = (self.theta, self.phi, self.u1, self.u2, self.delta)
        for i, v in enumerate(extras):
            p[6 + i] = v
        return p


@dataclass(frozen=True)
class MomentDiff:
    """Coherence-induced moment shifts of a packet pair.

    k1 shifts the mean momentum (coherent minus classical first moment);
    k2 shifts the clock and decay rate (half the classical-minus-coherent
    second moment, matching rate ~ 1 - <u^2>/2).
    """
    k1: float
    k2: float


# ---------------------------------------------------------------------------
# motional states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Superposition:
    spec: PacketPairSpec

    def density(self, u):
        return density_superposition(u, self.spec)

    def moments(self) -> tuple[float, float]:
        """(⟨u⟩, ⟨u²⟩) in closed form via the mixture moments plus the
        moment shifts (note k2 is oriented classical-minus-coherent)."""
        cl = Mixture(self.spec).moments()
        md = moment_diff_closed(self.spec)
        return cl[0] + md.k1, cl[1] - 2.0 * md.k2


@dataclass(frozen=True)
class Mixture:
    spec: PacketPairSpec

    def density(self, u):
        return density_mixture(u, self.spec)

    def moments(self) -> tuple[float, float]:
        s = self.spec
        c2 = np.cos(s.theta) ** 2
        s2 = np.sin(s.theta) ** 2
        m1 = c2 * s.u1 + s2 * s.u2
        m2 = c2 * s.u1 ** 2 + s2 * s.u2 ** 2 + 0.5 * s.delta ** 2
        return float(m1), float(m2)


@dataclass(frozen=True)
class Eigenstate:
    """Sharp momentum state; densities are formally a delta spike, so all
    consumers use the closed moments instead of quadrature."""
    u: float

    def moments(self) -> tuple[float, float]:
        return self.u, self.u ** 2


@dataclass(frozen=True)
class SampledPacket:
    """Generic packet given by complex amplitudes on an ascending grid.

    Amplitudes are interpreted piecewise-linearly between nodes; the square
    modulus must trapezoid-integrate to 1 on the grid (checked at
    construction within ``norm_tol``).
    """
    us: np.ndarray
    amps: np.ndarray
    norm_tol: float = 1e-8

    def __post_init__(self):
        us = np.asarray(self.us, dtype=np.float64)
        amps = np.asarray(self.amps, dtype=np.complex128)
        if us.ndim != 1 or us.size < 2 or amps.shape != us.shape:
            raise ValueError("need matching 1-d grids with at least 2 nodes")
        if not np.all(np.diff(us) > 0):
            raise ValueError("grid must be strictly increasing")
        norm = np.trapezoid(np.abs(amps) ** 2, us)
        if abs(norm - 1.0) > self.norm_tol:
            raise ValueError(f"amplitudes not square-normalized: norm={norm}")
        object.__setattr__(self, "us", us)
        object.__setattr__(self, "amps", amps)

    def density(self, u):
        re = np.interp(u, self.us, self.amps.real, left=0.0, right=0.0)
        im = np.interp(u, self.us, self.amps.imag, left=0.0, right=0.0)
        return re * re + im * im

    def moments(self) -> tuple[float, float]:
        rho = np.abs(self.amps) ** 2
        m1 = np.trapezoid(self.us * rho, self.us)
        m2 = np.trapezoid(self.us ** 2 * rho, self.us)
        return float(m1), float(m2)


MotionalState = Superposition | Mixture | Eigenstate | SampledPacket


# ---------------------------------------------------------------------------
# densities and normalization
# ---------------------------------------------------------------------------

def _guard(spec: PacketPairSpec) -> float:
    dh = spec.norm_denominator()
    if dh <= ZERO_NORM_THRESHOLD:
        raise ZeroNormState("state norm vanishes for these parameters")
    return dh


def normalization(spec: PacketPairSpec) -> float:
    """Amplitude normalization N = [sqrt(pi) delta (1 + cos phi sin 2theta
    e^{-y})]^{-1/2} for bare (unit-peak) Gaussian amplitudes."""
    dh = _guard(spec)
    return float((_SQRT_PI * spec.delta * dh) ** -0.5)


def density_superposition(u, spec: PacketPairSpec):
    """|psi_sup(u)|^2; integrates to 1 over the real line."""
    _guard(spec)
    return _kernels._dens_sup(np.asarray(u, dtype=np.float64), spec.theta,
                              spec.phi, spec.u1, spec.u2, spec.delta)


def density_mixture(u, spec: PacketPairSpec):
    """cos^2(theta) G(u-u1) + sin^2(theta) G(u-u2) with unit-mass Gaussians."""
    return _kernels._dens_cl(np.asarray(u, dtype=np.float64), spec.theta,
                             spec.u1, spec.u2, spec.delta)


# ---------------------------------------------------------------------------
# moment differences
# ---------------------------------------------------------------------------

def moment_diff_closed(spec: PacketPairSpec) -> MomentDiff:
    """Closed-form k1, k2 in the overflow-safe split evaluation."""
    _guard(spec)
    k1, k2 = _kernels._moment_pair(spec.theta, spec.phi, spec.u1, spec.u2,
                                   spec.delta)
    return MomentDiff(float(k1), float(k2))


def support_window(spec: PacketPairSpec, pad: float = 12.0) -> tuple[float, float]:
    """Interval carrying all but ~1e-60 of both densities."""
    lo = min(spec.u1, spec.u2) - pad * spec.delta
    hi = max(spec.u1, spec.u2) + pad * spec.delta
    return lo, hi


def _gauss_pair_breakpoints(spec: PacketPairSpec):
    mid = 0.5 * (spec.u1 + spec.u2)
    return tuple(sorted({spec.u1, mid, spec.u2}))


def moment_diff_quadrature(state_sup: MotionalState, state_cl: MotionalState,
                           j: int, quad: QuadratureSpec | None = None) -> float:
    """Numerical moment shift between two states, oracle for the closed form.

    Integrates the pointwise density difference with the same orientation
    convention as MomentDiff: order j=1 returns integral u (rho_sup -
    rho_cl), order j=2 returns (1/2) integral u^2 (rho_cl - rho_sup), i.e.
    the coherent-minus-classical shift of mean momentum and of the decay
    rate respectively.  Gaussian pairs go through adaptive quadrature;
    SampledPacket inputs are trapezoid-integrated on their grids.
    """
    if j not in (1, 2):
        raise ValueError("moment order j must be 1 or 2")
    factor = 1.0 / float(math.factorial(j)) * (1.0 if j == 1 else -1.0)
    if isinstance(state_sup, SampledPacket) or isinstance(state_cl, SampledPacket):
        grids = [st.us for st in (state_sup, state_cl)
                 if isinstance(st, SampledPacket)]
        us = np.unique(np.concatenate(grids))
        diff = state_sup.density(us) - state_cl.density(us)
        return float(np.trapezoid(us ** j * diff, us)) * factor

    if not (isinstance(state_sup, Superposition) and isinstance(state_cl, Mixture)):
        raise TypeError("quadrature path expects Superposition vs Mixture "
                        "or SampledPacket states")
    spec = state_sup.spec
    if spec != state_cl.spec:
        raise ValueError("superposition and mixture must share one packet pair")
    _guard(spec)
    quad = quad or QuadratureSpec()
    lo, hi = support_window(spec)
    edges = np.array([lo, *_gauss_pair_breakpoints(spec), hi])
    params = spec.kernel_params(float(j), factor)
    value, err, status = _kernels.quad_dispatch(
        _kernels.MOMENT_DIFF, params, edges,
        quad.abs_tol, quad.rel_tol, quad.max_depth)
    if status != 0:
        raise QuadratureNotConverged(
            f"moment difference j={j}: estimate {err:.3e} above tolerance")
    return float(value)


def state_moment_quadrature(state: Superposition | Mixture, j: int,
                            quad: QuadratureSpec | None = None) -> float:
    """⟨u^j⟩ for a Gaussian-pair state by adaptive quadrature."""
    if j not in (0, 1, 2):
        raise ValueError("moment order j must be 0, 1 or 2")
    spec = state.spec
    quad = quad or QuadratureSpec()
    lo, hi = support_window(spec)
    edges = np.array([lo, *_gauss_pair_breakpoints(spec), hi])
    code = _kernels.MOMENT_SUP if isinstance(state, Superposition) else _kernels.MOMENT_CL
    params = spec.kernel_params(float(j), 1.0)
    value, err, status = _kernels.quad_dispatch(
        code, params, edges, quad.abs_tol, quad.rel_tol, quad.max_depth)
    if status != 0:
        raise QuadratureNotConverged(
            f"state moment j={j}: estimate {err:.3e} above tolerance")
    return float(value)


# ---------------------------------------------------------------------------
# sampled-packet constructions for the even-profile identity
# ---------------------------------------------------------------------------

def _profile_interp(base_us, base_amps, u):
    re = np.interp(u, base_us, np.real(base_amps), left=0.0, right=0.0)
    im = np.interp(u, base_us, np.imag(base_amps), left=0.0, right=0.0)
    return re + 1j * im


def _pair_grid(base_us, u1, u2, n):
    """Uniform grid symmetric about the midpoint of the two centers.

    The symmetry makes the discrete first-moment identity for even profiles
    exact up to rounding, independent of the profile shape.
    """
    mid = 0.5 * (u1 + u2)
    half = 0.5 * abs(u2 - u1) + float(base_us[-1] - base_us[0])
    if n % 2 == 0:
        n += 1
    return mid + np.linspace(-half, half, n)


def superposed_sampled_pair(base_us, base_amps, u1: float, u2: float,
                            theta: float, phi: float, n: int = 4097) -> SampledPacket:
    """Coherent superposition of two shifted copies of a sampled profile."""
    base_us = np.asarray(base_us, dtype=np.float64)
    base_amps = np.asarray(base_amps, dtype=np.complex128)
    us = _pair_grid(base_us, u1, u2, n)
    amp = (np.cos(theta) * _profile_interp(base_us, base_amps, us - u1)
           + np.exp(1j * phi) * np.sin(theta)
           * _profile_interp(base_us, base_amps, us - u2))
    norm = np.trapezoid(np.abs(amp) ** 2, us)
    if norm <= ZERO_NORM_THRESHOLD:
        raise ZeroNormState("sampled superposition has vanishing norm")
    return SampledPacket(us, amp / np.sqrt(norm))


def mixed_sampled_pair(base_us, base_amps, u1: float, u2: float,
                       theta: float, n: int = 4097) -> SampledPacket:
    """Classical mixture of the same shifted copies, stored through its
    (real, nonnegative) root amplitude so only the density is meaningful."""
    base_us = np.asarray(base_us, dtype=np.float64)
    base_amps = np.asarray(base_amps, dtype=np.complex128)
    us = _pair_grid(base_us, u1, u2, n)
    dens = (np.cos(theta) ** 2
            * np.abs(_profile_interp(base_us, base_amps, us - u1)) ** 2
            + np.sin(theta) ** 2
            * np.abs(_profile_interp(base_us, base_amps, us - u2)) ** 2)
    norm = np.trapezoid(dens, us)
    return SampledPacket(us, np.sqrt(dens / norm).astype(np.complex128))
