"""Hot numeric kernels shared by the physics modules.

Stable Gaussian-pair densities, the G7/K15 panel rule, an adaptive
quadrature driver, and the momentum-space integrands used for moments,
emission line shapes and survival probabilities.

The scalar math is written once with ``np.*`` calls so the identical source
runs on Python floats, vectorized over numpy arrays, and compiled by numba.
Backend selection: numba when importable (the default), or the pure-numpy
batched driver when ``QTD_BACKEND=numpy`` is set in the environment.

Stability notes, load-bearing for the saturation and near-degenerate tests:

* the coherence denominator ``1 + cos(phi) sin(2 theta) exp(-y)`` is
  evaluated as a sum of three nonnegative terms built from ``expm1`` and
  shifted trigonometric arguments ``t = pi/4 - theta``, ``s = pi - phi``;
  this keeps full relative precision all the way to the zero-norm point
  and makes k1 vanish exactly at theta = pi/4;
* large separations use the ``exp(-y)``-factored form instead, so nothing
  overflows for arbitrarily separated packets;
* emission frequencies are handled as detunings ``nu = omega/Omega - 1``
  because the perpendicular line structure lives at ``|nu| ~ 1e-16``.
"""

from __future__ import annotations

import os

import numpy as np

# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

_ENV_BACKEND = "QTD_BACKEND"


def _detect_backend() -> str:
    choice = os.environ.get(_ENV_BACKEND, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice not in ("", "numba"):
        raise ValueError(
            f"{_ENV_BACKEND} must be 'numba' or 'numpy', got {choice!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


BACKEND = _detect_backend()


def active_backend() -> str:
    """Name of the quadrature backend selected at import time."""
    return BACKEND


# ---------------------------------------------------------------------------
# integrand codes (see _integrand_value below for the parameter layout)
# ---------------------------------------------------------------------------

MOMENT_SUP = 0     # u^m * rho_sup(u)
MOMENT_CL = 1      # u^m * rho_cl(u)
MOMENT_DIFF = 2    # factor * u^m * (rho_sup - rho_cl)
LINE_PAR = 3       # rho(u) * parallel Lorentzian at detuning nu
LINE_PERP = 4      # rho(u) * perpendicular Lorentzian at detuning nu
SURVIVAL = 5       # rho(u) * exp(-(1 - 1.5 eps - u^2/2) t)

STATE_SUP = 0.0
STATE_CL = 1.0

_SQRT_PI = np.sqrt(np.pi)
_QUARTER_PI = 0.25 * np.pi


# ---------------------------------------------------------------------------
# stable scalar building blocks (also valid on numpy arrays)
# ---------------------------------------------------------------------------

def _coh_y(u1, u2, delta):
    """Overlap exponent y = (u2 - u1)^2 / (4 delta^2)."""
    x = u2 - u1
    return x * x / (4.0 * delta * delta)


def _dhat(theta, phi, y):
    """1 + cos(phi) sin(2 theta) exp(-y) as a sum of nonnegative terms."""
    t = _QUARTER_PI - theta
    half = 0.5 * (np.pi - phi)
    emy = np.exp(-y)
    st = np.sin(t)
    sh = np.sin(half)
    return -np.expm1(-y) + 2.0 * emy * (st * st + np.cos(2.0 * t) * sh * sh)


def _dens_sup(u, theta, phi, u1, u2, delta):
    """Momentum density of the normalized two-packet superposition."""
    # self-contained (no helper calls) so numba can jit it directly
    x = u2 - u1
    y = x * x / (4.0 * delta * delta)
    t = _QUARTER_PI - theta
    half = 0.5 * (np.pi - phi)
    emy = np.exp(-y)
    st_ = np.sin(t)
    sh = np.sin(half)
    dhat = -np.expm1(-y) + 2.0 * emy * (st_ * st_ + np.cos(2.0 * t) * sh * sh)
    inv2d2 = 1.0 / (2.0 * delta * delta)
    a1 = np.exp(-(u - u1) * (u - u1) * inv2d2)
    a2 = np.exp(-(u - u2) * (u - u2) * inv2d2)
    ct = np.cos(theta)
    st = np.sin(theta)
    s2 = np.sin(2.0 * theta)
    cphi = -np.cos(np.pi - phi)     # cos(phi)
    num = ct * ct * a1 * a1 + st * st * a2 * a2 + s2 * cphi * a1 * a2
    return num / (_SQRT_PI * delta * dhat)


def _dens_cl(u, theta, u1, u2, delta):
    """Momentum density of the matching classical two-packet mixture."""
    invd2 = 1.0 / (delta * delta)
    g1 = np.exp(-(u - u1) * (u - u1) * invd2)
    g2 = np.exp(-(u - u2) * (u - u2) * invd2)
    ct = np.cos(theta)
    st = np.sin(theta)
    return (ct * ct * g1 + st * st * g2) / (_SQRT_PI * delta)


def _moment_pair(theta, phi, u1, u2, delta):
    """Closed-form moment differences (k1, k2) between superposition and
    mixture, in the overflow-safe split form."""
    x = u2 - u1
    y = _coh_y(u1, u2, delta)
    t = _QUARTER_PI - theta
    s2 = np.sin(2.0 * theta)        # exact 0 at theta = 0
    c2 = np.sin(2.0 * t)            # cos(2 theta), exact 0 at theta = pi/4
    s4 = 2.0 * s2 * c2              # sin(4 theta), exact 0 at both
    cphi = -np.cos(np.pi - phi)     # cos(phi), exact -1 at phi = pi
    num1 = cphi * s4 * x
    num2 = cphi * s2 * (x * x - 2.0 * (u2 * u2 - u1 * u1) * c2)
    if y <= 1.0:
        half = 0.5 * (np.pi - phi)
        st = np.sin(t)
        sh = np.sin(half)
        den = np.expm1(y) + 2.0 * (st * st + s2 * sh * sh)
        k1 = num1 / (4.0 * den)
        k2 = num2 / (8.0 * den)
    else:
        emy = np.exp(-y)
        dh = 1.0 + cphi * s2 * emy
        k1 = num1 * emy / (4.0 * dh)
        k2 = num2 * emy / (8.0 * dh)
    return k1, k2


# ---------------------------------------------------------------------------
# dispatched integrand
#
# parameter vector p (8 float64 slots):
#   p[0] state kind (STATE_SUP / STATE_CL) for LINE_* and SURVIVAL
#   p[1] theta   p[2] phi   p[3] u1   p[4] u2   p[5] delta
#   p[6], p[7] extras:
#     MOMENT_*   : p[6] = power m, p[7] = multiplier
#     LINE_*     : p[6] = detuning nu, p[7] = line ratio Omega/Gamma0
#     SURVIVAL   : p[6] = t in 1/Gamma0 units, p[7] = epsilon
# ---------------------------------------------------------------------------

def _upow(u, m):
    if m == 0.0:
        return u * 0.0 + 1.0
    if m == 1.0:
        return u
    return u * u


def _integrand_value(code, u, p):
    theta = p[1]
    phi = p[2]
    u1 = p[3]
    u2 = p[4]
    delta = p[5]
    if code == MOMENT_SUP:
        return _upow(u, p[6]) * p[7] * _dens_sup(u, theta, phi, u1, u2, delta)
    if code == MOMENT_CL:
        return _upow(u, p[6]) * p[7] * _dens_cl(u, theta, u1, u2, delta)
    if code == MOMENT_DIFF:
        diff = (_dens_sup(u, theta, phi, u1, u2, delta)
                - _dens_cl(u, theta, u1, u2, delta))
        return _upow(u, p[6]) * p[7] * diff
    if p[0] == STATE_SUP:
        rho = _dens_sup(u, theta, phi, u1, u2, delta)
    else:
        rho = _dens_cl(u, theta, u1, u2, delta)
    if code == LINE_PAR:
        nu = p[6]
        r = p[7]
        off = nu - u
        width2 = (1.0 + 2.0 * u) / (4.0 * r * r)
        return rho * (1.0 + 3.0 * u) / (2.0 * np.pi * r) / (off * off + width2)
    if code == LINE_PERP:
        nu = p[6]
        r = p[7]
        off = nu + 0.5 * u * u
        width2 = (1.0 - u * u) / (4.0 * r * r)
        return rho * (1.0 - 1.5 * u * u) / (2.0 * np.pi * r) / (off * off + width2)
    # SURVIVAL
    t = p[6]
    eps = p[7]
    return rho * np.exp(-(1.0 - 1.5 * eps - 0.5 * u * u) * t)


# ---------------------------------------------------------------------------
# G7/K15 panel rule (QUADPACK abscissas)
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])

# full 15-node layout for vectorized evaluation: -x7..-x0..+x7 interleaved
_NODES15 = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_WK15 = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_WG15 = np.zeros(15)
_WG15[1:7:2] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[13:7:-2] = _WG[:3]

# demands below the running total's roundoff floor are unmeetable
_EPS_FLOOR = 64.0 * 2.220446049250313e-16


def _gk_core(code, p, a, b):
    """K15 value and |K15 - G7| error estimate on [a, b] (scalar loop)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = _integrand_value(code, c, p)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for i in range(7):
        z = h * _XGK[i]
        f1 = _integrand_value(code, c - z, p)
        f2 = _integrand_value(code, c + z, p)
        s = f1 + f2
        resk += _WGK[i] * s
        if i % 2 == 1:
            resg += _WG[(i - 1) // 2] * s
    return resk * h, np.abs(resk - resg) * np.abs(h)


def _adaptive_core(code, p, edges, abs_tol, rel_tol, max_depth, cap):
    """Globally adaptive G7/K15 over the panels defined by ``edges``.

    Splits the worst panel until the summed error estimate meets
    max(abs_tol, rel_tol * |integral|).  Returns (value, error, status)
    with status 0 on convergence and 1 when the budget ran out.
    """
    n0 = len(edges) - 1
    av = np.empty(cap)
    bv = np.empty(cap)
    iv = np.empty(cap)
    ev = np.empty(cap)
    dv = np.zeros(cap, dtype=np.int64)
    n = 0
    for i in range(n0):
        a = edges[i]
        b = edges[i + 1]
        if b <= a:
            continue
        val, err = _gk_core(code, p, a, b)
        av[n] = a
        bv[n] = b
        iv[n] = val
        ev[n] = err
        n += 1
    status = 0
    while True:
        total = 0.0
        esum = 0.0
        # fixed summation order: ascending left edge
        order = np.argsort(av[:n], kind="mergesort")
        for k in range(n):
            j = order[k]
            total += iv[j]
            esum += ev[j]
        tol = max(abs_tol, rel_tol * np.abs(total), _EPS_FLOOR * np.abs(total))
        if esum <= tol:
            return total, esum, 0
        # worst splittable panel
        jworst = -1
        eworst = -1.0
        for j in range(n):
            if dv[j] < max_depth and ev[j] > eworst:
                mid = 0.5 * (av[j] + bv[j])
                if mid > av[j] and mid < bv[j]:
                    eworst = ev[j]
                    jworst = j
        if jworst < 0 or n >= cap:
            return total, esum, 1
        a = av[jworst]
        b = bv[jworst]
        d = dv[jworst] + 1
        mid = 0.5 * (a + b)
        v1, e1 = _gk_core(code, p, a, mid)
        v2, e2 = _gk_core(code, p, mid, b)
        av[jworst] = a
        bv[jworst] = mid
        iv[jworst] = v1
        ev[jworst] = e1
        dv[jworst] = d
        av[n] = mid
        bv[n] = b
        iv[n] = v2
        ev[n] = e2
        dv[n] = d
        n += 1


# ---------------------------------------------------------------------------
# numba twins
# ---------------------------------------------------------------------------

if BACKEND == "numba":
    from numba import njit

    _jit = njit(cache=True, nogil=True)
    _dhat_nb = _jit(_dhat)
    _dens_sup_nb = _jit(_dens_sup)
    _dens_cl_nb = _jit(_dens_cl)

    @njit(cache=True, nogil=True)
    def _integrand_value_nb(code, u, p):
        theta = p[1]
        phi = p[2]
        u1 = p[3]
        u2 = p[4]
        delta = p[5]
        if code == MOMENT_SUP or code == MOMENT_CL or code == MOMENT_DIFF:
            m = p[6]
            if m == 0.0:
                um = 1.0
            elif m == 1.0:
                um = u
            else:
                um = u * u
            if code == MOMENT_SUP:
                return um * p[7] * _dens_sup_nb(u, theta, phi, u1, u2, delta)
            if code == MOMENT_CL:
                return um * p[7] * _dens_cl_nb(u, theta, u1, u2, delta)
            diff = (_dens_sup_nb(u, theta, phi, u1, u2, delta)
                    - _dens_cl_nb(u, theta, u1, u2, delta))
            return um * p[7] * diff
        if p[0] == STATE_SUP:
            rho = _dens_sup_nb(u, theta, phi, u1, u2, delta)
        else:
            rho = _dens_cl_nb(u, theta, u1, u2, delta)
        if code == LINE_PAR:
            nu = p[6]
            r = p[7]
            off = nu - u
            width2 = (1.0 + 2.0 * u) / (4.0 * r * r)
            return rho * (1.0 + 3.0 * u) / (2.0 * np.pi * r) / (off * off + width2)
        if code == LINE_PERP:
            nu = p[6]
            r = p[7]
            off = nu + 0.5 * u * u
            width2 = (1.0 - u * u) / (4.0 * r * r)
            return rho * (1.0 - 1.5 * u * u) / (2.0 * np.pi * r) / (off * off + width2)
        t = p[6]
        eps = p[7]
        return rho * np.exp(-(1.0 - 1.5 * eps - 0.5 * u * u) * t)

    @njit(cache=True, nogil=True)
    def _gk_core_nb(code, p, a, b):
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        fc = _integrand_value_nb(code, c, p)
        resk = _WGK[7] * fc
        resg = _WG[3] * fc
        for i in range(7):
            z = h * _XGK[i]
            f1 = _integrand_value_nb(code, c - z, p)
            f2 = _integrand_value_nb(code, c + z, p)
            s = f1 + f2
            resk += _WGK[i] * s
            if i % 2 == 1:
                resg += _WG[(i - 1) // 2] * s
        return resk * h, np.abs(resk - resg) * np.abs(h)

    @njit(cache=True, nogil=True)
    def _adaptive_core_nb(code, p, edges, abs_tol, rel_tol, max_depth, cap):
        n0 = len(edges) - 1
        av = np.empty(cap)
        bv = np.empty(cap)
        iv = np.empty(cap)
        ev = np.empty(cap)
        dv = np.zeros(cap, dtype=np.int64)
        n = 0
        for i in range(n0):
            a = edges[i]
            b = edges[i + 1]
            if b <= a:
                continue
            val, err = _gk_core_nb(code, p, a, b)
            av[n] = a
            bv[n] = b
            iv[n] = val
            ev[n] = err
            n += 1
        while True:
            total = 0.0
            esum = 0.0
            order = np.argsort(av[:n], kind="mergesort")
            for k in range(n):
                j = order[k]
                total += iv[j]
                esum += ev[j]
            tol = max(abs_tol, rel_tol * np.abs(total),
                      _EPS_FLOOR * np.abs(total))
            if esum <= tol:
                return total, esum, 0
            jworst = -1
            eworst = -1.0
            for j in range(n):
                if dv[j] < max_depth and ev[j] > eworst:
                    mid = 0.5 * (av[j] + bv[j])
                    if mid > av[j] and mid < bv[j]:
                        eworst = ev[j]
                        jworst = j
            if jworst < 0 or n >= cap:
                return total, esum, 1
            a = av[jworst]
            b = bv[jworst]
            d = dv[jworst] + 1
            mid = 0.5 * (a + b)
            v1, e1 = _gk_core_nb(code, p, a, mid)
            v2, e2 = _gk_core_nb(code, p, mid, b)
            av[jworst] = a
            bv[jworst] = mid
            iv[jworst] = v1
            ev[jworst] = e1
            dv[jworst] = d
            av[n] = mid
            bv[n] = b
            iv[n] = v2
            ev[n] = e2
            dv[n] = d
            n += 1


def quad_dispatch(code, params, edges, abs_tol, rel_tol, max_depth, cap=8192):
    """Adaptive quadrature of a coded integrand over breakpointed panels.

    Returns (value, error_estimate, status); status 1 means the subdivision
    budget ran out with the estimate still above tolerance.
    """
    p = np.asarray(params, dtype=np.float64)
    e = np.asarray(edges, dtype=np.float64)
    if BACKEND == "numba":
        return _adaptive_core_nb(code, p, e, float(abs_tol), float(rel_tol),
                                 int(max_depth), int(cap))
    return _adaptive_core(code, p, e, float(abs_tol), float(rel_tol),
                          int(max_depth), int(cap))


# ---------------------------------------------------------------------------
# batched numpy driver for arbitrary vectorized callables
# ---------------------------------------------------------------------------

def adaptive_callable(f, edges, abs_tol, rel_tol, max_depth, cap=8192):
    """Adaptive G7/K15 for a vectorized callable f(ndarray) -> ndarray.

    Batched refinement: every round, all panels above their length-weighted
    share of the tolerance are bisected at once.  Deterministic.
    Returns (value, error_estimate, status).
    """
    e = np.asarray(edges, dtype=np.float64)
    a = e[:-1]
    b = e[1:]
    keep = b > a
    a = a[keep]
    b = b[keep]
    depth = np.zeros(a.size, dtype=np.int64)
    span = float(e[-1] - e[0])

    def panels(a, b):
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        nodes = c[:, None] + h[:, None] * _NODES15[None, :]
        vals = f(nodes.reshape(-1)).reshape(nodes.shape)
        k = (vals @ _WK15) * h
        g = (vals @ _WG15) * h
        return k, np.abs(k - g)

    iv, ev = panels(a, b)
    while True:
        order = np.argsort(a, kind="mergesort")
        total = float(np.add.reduce(iv[order]))
        esum = float(np.add.reduce(ev[order]))
        tol = max(abs_tol, rel_tol * abs(total), _EPS_FLOOR * abs(total))
        if esum <= tol:
            return total, esum, 0
        mid = 0.5 * (a + b)
        splittable = (depth < max_depth) & (mid > a) & (mid < b)
        if not splittable.any():
            return total, esum, 1
        share = tol * np.maximum((b - a) / span, 1e-16)
        pick = splittable & (ev > share)
        if not pick.any():
            # nothing above its share: bisect the single worst panel
            j = int(np.argmax(np.where(splittable, ev, -1.0)))
            pick = np.zeros_like(splittable)
            pick[j] = True
        if a.size + int(pick.sum()) > cap:
            return total, esum, 1
        ka = a[pick]
        kb = b[pick]
        km = 0.5 * (ka + kb)
        kd = depth[pick] + 1
        i1, e1 = panels(ka, km)
        i2, e2 = panels(km, kb)
        a = np.concatenate([a[~pick], ka, km])
        b = np.concatenate([b[~pick], km, kb])
        iv = np.concatenate([iv[~pick], i1, i2])
        ev = np.concatenate([ev[~pick], e1, e2])
        depth = np.concatenate([depth[~pick], kd, kd])


def vector_integrand(code, params):
    """Vectorized callable equivalent of a coded integrand (numpy path)."""
    p = np.asarray(params, dtype=np.float64)

    def f(u):
        return _integrand_value(code, u, p)

    return f
