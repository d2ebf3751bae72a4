"""Agreement between the numba kernels and the pure-numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qtd import _kernels
from qtd.wavepackets import PacketPairSpec
from conftest import corpus_spec


def _both_engines(code, params, edges):
    p = np.asarray(params, dtype=np.float64)
    e = np.asarray(edges, dtype=np.float64)
    fast = _kernels.quad_dispatch(code, p, e, 1e-13, 1e-11, 60)
    slow = _kernels.adaptive_callable(_kernels.vector_integrand(code, p), e,
                                      1e-13, 1e-11, 60)
    return fast, slow


class TestEngineAgreement:
    def test_moment_integrands(self, rng):
        for _ in range(20):
            spec = corpus_spec(rng)
            lo = min(spec.u1, spec.u2) - 12 * spec.delta
            hi = max(spec.u1, spec.u2) + 12 * spec.delta
            edges = [lo, 0.5 * (lo + hi), hi]
            for code in (_kernels.MOMENT_SUP, _kernels.MOMENT_CL,
                         _kernels.MOMENT_DIFF):
                params = spec.kernel_params(2.0, 0.5)
                (vf, _, sf), (vs, _, ss) = _both_engines(code, params, edges)
                assert sf == 0 and ss == 0
                assert abs(vf - vs) <= max(1e-9 * abs(vf), 1e-15)

    def test_line_integrand(self):
        spec = PacketPairSpec(np.pi / 4, 0.0, 2e-8, 4e-8, 6e-9)
        params = spec.kernel_params(3e-8, 1.5e9)
        params[0] = _kernels.STATE_SUP
        edges = [-4e-8, 2e-8, 3e-8, 4e-8, 1e-7]
        (vf, _, sf), (vs, _, ss) = _both_engines(_kernels.LINE_PAR, params, edges)
        assert sf == 0 and ss == 0
        assert abs(vf - vs) <= 1e-9 * abs(vf)

    def test_survival_integrand(self):
        spec = PacketPairSpec(np.pi / 4, 0.7, 0.015, 0.035, 0.01)
        params = spec.kernel_params(1.5, 0.0)
        params[0] = _kernels.STATE_CL
        edges = [-0.1, 0.025, 0.16]
        (vf, _, sf), (vs, _, ss) = _both_engines(_kernels.SURVIVAL, params, edges)
        assert sf == 0 and ss == 0
        assert abs(vf - vs) <= 1e-10 * abs(vf)


NUMPY_BACKEND_PROBE = """
import numpy as np
from qtd import _kernels
from qtd.wavepackets import (PacketPairSpec, Superposition, Mixture,
                             moment_diff_closed, moment_diff_quadrature)
assert _kernels.active_backend() == "numpy"
spec = PacketPairSpec(np.pi / 4, 0.0, 0.015, 0.035, 0.01)
closed = moment_diff_closed(spec).k2
oracle = moment_diff_quadrature(Superposition(spec), Mixture(spec), 2)
assert abs(closed - oracle) <= 1e-10 * abs(closed), (closed, oracle)
print("numpy backend ok")
"""


class TestBackendSelection:
    def test_default_is_numba_here(self):
        assert _kernels.active_backend() == "numba"

    def test_numpy_fallback_via_environment(self):
        env = dict(os.environ, QTD_BACKEND="numpy")
        out = subprocess.run([sys.executable, "-c", NUMPY_BACKEND_PROBE],
                             env=env, capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        assert "numpy backend ok" in out.stdout

    def test_invalid_backend_rejected(self):
        env = dict(os.environ, QTD_BACKEND="fortran")
        out = subprocess.run([sys.executable, "-c", "import qtd"],
                             env=env, capture_output=True, text=True)
        assert out.returncode != 0
        assert "QTD_BACKEND" in out.stderr
