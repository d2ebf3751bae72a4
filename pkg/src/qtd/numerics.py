"""Shared numerical infrastructure.

Adaptive Gauss-Kronrod quadrature over forced breakpoints, product-rule
sphere quadrature, a bounded Nelder-Mead simplex, and golden-section line
search.  Everything here is deterministic: fixed node sets, fixed summation
order, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import QuadratureNotConverged

__all__ = [
    "QuadratureSpec", "OptimizerSpec", "SimplexResult",
    "integrate", "integrate_sphere", "nelder_mead", "golden_section",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance contract for one-dimensional adaptive integration.

    ``breakpoints`` are forced interior panel edges; put integrable
    near-singularities and narrow features there.  Tolerances below the
    roundoff floor of the running total (~1e-14 relative) are clamped to
    it, as demanding less than rounding noise is unmeetable.
    """
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_depth: int = 60
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be sorted ascending")


@dataclass(frozen=True)
class OptimizerSpec:
    """Budget and stopping rules for the derivative-free optimizers."""
    seed_grid: int = 64
    simplex_tol: float = 1e-10
    max_iters: int = 4000

    def __post_init__(self):
        if self.seed_grid < 2 or self.simplex_tol <= 0 or self.max_iters < 1:
            raise ValueError("optimizer spec fields must be positive")


@dataclass(frozen=True)
class SimplexResult:
    x: tuple[float, ...]
    value: float
    converged: bool
    iterations: int


def _edges(a: float, b: float, breakpoints) -> np.ndarray:
    pts = [a] + [p for p in breakpoints if a < p < b] + [b]
    return np.asarray(pts, dtype=np.float64)


def _as_vectorized(f):
    """Accept either an ndarray->ndarray callable or a scalar one."""
    probe = np.array([0.12345, 0.6789])
    try:
        out = f(probe)
        if np.shape(out) == probe.shape:
            return f
    except Exception:
        pass
    return np.vectorize(f, otypes=[np.float64])


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()):
    """Adaptively integrate ``f`` on [a, b]; returns (value, error_estimate).

    Raises QuadratureNotConverged when the subdivision budget is exhausted
    with the error estimate still above tolerance.
    """
    if not a < b:
        raise ValueError("integration interval requires a < b")
    fv = _as_vectorized(f)
    value, err, status = _kernels.adaptive_callable(
        fv, _edges(a, b, spec.breakpoints),
        spec.abs_tol, spec.rel_tol, spec.max_depth)
    if status != 0:
        raise QuadratureNotConverged(
            f"error estimate {err:.3e} above tolerance after budget "
            f"(value ~ {value:.6e})")
    return value, err


def integrate_sphere(f, spec: QuadratureSpec = QuadratureSpec(),
                     start: int = 16, max_level: int = 9) -> float:
    """Integrate f(Theta, Phi) over the full sphere (solid-angle measure).

    Product rule: Gauss-Legendre in cos(Theta) x periodic trapezoid in Phi,
    doubling the resolution until two successive levels agree within
    tolerance.
    """
    def level(n: int) -> float:
        x, w = np.polynomial.legendre.leggauss(n)
        theta = np.arccos(x)
        phi = np.arange(2 * n) * (np.pi / n)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        vals = f(tt, pp)
        return float((w @ vals.sum(axis=1)) * (np.pi / n))

    prev = level(start)
    n = start
    for _ in range(max_level):
        n *= 2
        cur = level(n)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise QuadratureNotConverged(
        f"sphere quadrature not settled at {n} polar nodes")


def golden_section(f, lo: float, hi: float, tol: float = 1e-12,
                   max_iters: int = 200):
    """Minimize a unimodal f on [lo, hi]; returns (x, f(x), converged, iters)."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iters:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x), (b - a) <= tol, it


def nelder_mead(f, start, bounds, spec: OptimizerSpec = OptimizerSpec()) -> SimplexResult:
    """Bounded Nelder-Mead minimization.

    ``bounds`` is a sequence of (lo, hi) pairs; every trial point is clamped
    into the box, so the result never leaves it.  Converged when the simplex
    diameter drops below ``spec.simplex_tol``.
    """
    x0 = np.asarray(start, dtype=np.float64)
    lo = np.array([b[0] for b in bounds], dtype=np.float64)
    hi = np.array([b[1] for b in bounds], dtype=np.float64)
    if np.any(x0 < lo) or np.any(x0 > hi):
        raise ValueError("start point outside bounds")
    ndim = x0.size

    def clamp(x):
        return np.minimum(np.maximum(x, lo), hi)

    # initial simplex: start plus per-dimension nudges scaled to the box
    simplex = [x0]
    for i in range(ndim):
        step = 0.05 * (hi[i] - lo[i])
        v = x0.copy()
        v[i] = v[i] + step if v[i] + step <= hi[i] else v[i] - step
        simplex.append(clamp(v))
    simplex = np.array(simplex)
    fvals = np.array([f(s) for s in simplex])

    it = 0
    while it < spec.max_iters:
        order = np.argsort(fvals, kind="mergesort")
        simplex = simplex[order]
        fvals = fvals[order]
        diam = np.max(np.linalg.norm(simplex[1:] - simplex[0], axis=1))
        if diam < spec.simplex_tol:
            return SimplexResult(tuple(simplex[0]), float(fvals[0]), True, it)
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = clamp(centroid + (centroid - worst))
        fr = f(xr)
        if fr < fvals[0]:
            xe = clamp(centroid + 2.0 * (centroid - worst))
            fe = f(xe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            xc = clamp(centroid + 0.5 * (worst - centroid))
            fc = f(xc)
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
            else:
                for i in range(1, ndim + 1):
                    simplex[i] = clamp(simplex[0] + 0.5 * (simplex[i] - simplex[0]))
                    fvals[i] = f(simplex[i])
        it += 1

    order = np.argsort(fvals, kind="mergesort")
    return SimplexResult(tuple(simplex[order][0]), float(fvals[order][0]),
                         False, it)
