"""Quantum time dilation in atomic emission spectra.

Library and CLI computing the spectroscopic signatures of an excited
two-level atom whose center of mass moves in a coherent superposition of
momentum wave packets versus the matching classical mixture: total and
angular decay rates, Doppler-sensitive line shapes, survival curves, and
the closed-form coherence corrections with independent quadrature oracles.
"""

__version__ = "0.1.0"

from .errors import (DomainError, QuadratureNotConverged, ValidityWarning,
                     ZeroNormState)
from .wavepackets import (Eigenstate, Mixture, MomentDiff, MotionalState,
                          PacketPairSpec, SampledPacket, Superposition,
                          density_mixture, density_superposition,
                          moment_diff_closed, moment_diff_quadrature,
                          normalization)
from .dilation import (DilationReport, ExtremumResult, delta_q,
                       dilation_report, extrema_phi_pi, gamma_c_inv,
                       gamma_q_inv, lambert_w0, mean_clock_time,
                       optimize_gamma_q)
from .emission import (AngularSample, AtomSpec, RateComparison, SpectrumGrid,
                       angular_difference, angular_rate, kernel_unexpanded,
                       line_parallel, line_perpendicular, line_shape,
                       line_shape_grid, pole_frequency, rate_diff,
                       rate_momentum, rate_total, survival_probability,
                       xi0, xi1, xi2, xi_expansion)
from .numerics import (OptimizerSpec, QuadratureSpec, integrate,
                       integrate_sphere, nelder_mead)
from .scenarios import (SCENARIO_NAMES, ScenarioConfig, SweepResult,
                        run_scenario)

__all__ = [
    "__version__",
    "DomainError", "QuadratureNotConverged", "ValidityWarning", "ZeroNormState",
    "PacketPairSpec", "MomentDiff", "MotionalState",
    "Superposition", "Mixture", "Eigenstate", "SampledPacket",
    "normalization", "density_superposition", "density_mixture",
    "moment_diff_closed", "moment_diff_quadrature",
    "DilationReport", "ExtremumResult", "gamma_c_inv", "gamma_q_inv",
    "delta_q", "mean_clock_time", "dilation_report", "lambert_w0",
    "extrema_phi_pi", "optimize_gamma_q",
    "AtomSpec", "AngularSample", "SpectrumGrid", "RateComparison",
    "xi0", "xi1", "xi2", "rate_momentum", "rate_total", "rate_diff",
    "angular_rate", "angular_difference", "line_parallel",
    "line_perpendicular", "line_shape", "line_shape_grid",
    "survival_probability", "pole_frequency", "kernel_unexpanded",
    "xi_expansion",
    "QuadratureSpec", "OptimizerSpec", "integrate", "integrate_sphere",
    "nelder_mead",
    "ScenarioConfig", "SweepResult", "SCENARIO_NAMES", "run_scenario",
]
