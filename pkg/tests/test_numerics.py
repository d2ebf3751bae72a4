import numpy as np
import pytest

from qtd.errors import QuadratureNotConverged
from qtd.numerics import (OptimizerSpec, QuadratureSpec, golden_section,
                          integrate, integrate_sphere, nelder_mead)
from qtd.emission import xi0, xi1, xi2


class TestIntegrate:
    def test_constant(self):
        val, err = integrate(lambda u: np.ones_like(u), 0.0, 1.0)
        assert abs(val - 1.0) <= 1e-14

    def test_gaussian_density(self):
        d = 0.01
        val, _ = integrate(lambda u: np.exp(-u * u / (d * d)) / (np.sqrt(np.pi) * d),
                           -10 * d, 10 * d)
        assert abs(val - 1.0) <= 1e-12

    def test_gaussian_second_moment(self):
        val, _ = integrate(lambda u: u * u * np.exp(-u * u) / np.sqrt(np.pi),
                           -12.0, 12.0)
        assert abs(val - 0.5) <= 1e-12

    def test_polynomial_exactness_through_degree_28(self):
        rng = np.random.default_rng(42)
        spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15)
        for deg in range(29):
            coeffs = rng.uniform(-1.0, 1.0, size=deg + 1)
            exact = sum(c / (k + 1) for k, c in enumerate(coeffs))
            val, _ = integrate(lambda u: np.polynomial.polynomial.polyval(u, coeffs),
                               0.0, 1.0, spec)
            assert abs(val - exact) <= 1e-14 * max(1.0, abs(exact)), deg

    def test_redundant_breakpoints_do_not_change_result(self):
        f = lambda u: np.exp(-u * u) * np.cos(5 * u)
        base, _ = integrate(f, -3.0, 3.0)
        spec = QuadratureSpec(breakpoints=(-1.7, -0.3, 0.1, 0.9, 2.2))
        with_bp, _ = integrate(f, -3.0, 3.0, spec)
        assert abs(base - with_bp) <= 1e-11 * abs(base)

    def test_not_converged_raises(self):
        f = lambda u: np.where(u < 0.3, 0.0, 1.0)
        spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_depth=3)
        with pytest.raises(QuadratureNotConverged):
            integrate(f, 0.0, 1.0, spec)

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            integrate(lambda u: u, 1.0, 0.0)


class TestIntegrateSphere:
    def test_xi0_unit(self):
        assert abs(integrate_sphere(xi0) - 1.0) <= 1e-12

    def test_xi1_zero(self):
        assert abs(integrate_sphere(xi1)) <= 1e-12

    def test_xi2_minus_one(self):
        assert abs(integrate_sphere(xi2) + 1.0) <= 1e-12

    def test_uniform(self):
        val = integrate_sphere(lambda t, p: np.ones_like(t) / (4 * np.pi))
        assert abs(val - 1.0) <= 1e-14

    def test_phi_only_function_is_its_mean_times_4pi(self):
        f = lambda t, p: 1.3 + 0.7 * np.cos(3 * p)
        val = integrate_sphere(f)
        assert abs(val - 4 * np.pi * 1.3) <= 1e-10


class TestOptimizers:
    def test_quadratic_bowl(self):
        res = nelder_mead(lambda x: (x[0] - 0.3) ** 2, (0.8,), [(0.0, 1.0)],
                          OptimizerSpec(simplex_tol=1e-12))
        assert res.converged
        assert abs(res.x[0] - 0.3) <= 1e-8

    def test_rosenbrock(self):
        f = lambda x: (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
        res = nelder_mead(f, (-0.5, 0.5), [(-2.0, 2.0), (-1.0, 3.0)],
                          OptimizerSpec(simplex_tol=1e-12, max_iters=10000))
        assert abs(res.x[0] - 1.0) <= 1e-6 and abs(res.x[1] - 1.0) <= 1e-6

    def test_never_leaves_bounds(self):
        seen = []
        def f(x):
            seen.append(tuple(x))
            return -((x[0] - 2.0) ** 2)   # pushes toward the boundary
        res = nelder_mead(f, (0.5,), [(0.0, 1.0)], OptimizerSpec(max_iters=200))
        assert all(0.0 <= s[0] <= 1.0 for s in seen)
        assert 0.0 <= res.x[0] <= 1.0

    def test_start_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            nelder_mead(lambda x: x[0] ** 2, (2.0,), [(0.0, 1.0)])

    def test_golden_section(self):
        x, fx, ok, _ = golden_section(lambda t: (t - 0.37) ** 2, 0.0, 1.0)
        assert ok and abs(x - 0.37) <= 1e-9
