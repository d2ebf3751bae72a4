"""Named parameter-space scenarios with CSV/JSON export.

Each scenario reproduces one figure-style computation: coherence-effect
sweeps with ridge (extremum-locus) extraction, angular emission maps,
line-shape panels for broad and ultranarrow transitions, frequency-by-
separation maps, and survival curves.  Runners return in-memory results;
``run_scenario`` writes the CSV, a config sidecar and a summary JSON
atomically and deterministically (identical invocations give byte-identical
files).

Default parameters not fixed by a scenario's definition (weights, phases,
axis ranges) are declared here and echoed into the sidecar, never silently
assumed.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass, field, replace
from decimal import Decimal

import numpy as np

from . import __version__
from ._kernels import _dhat, _moment_pair, active_backend
from .emission import (AtomSpec, angular_difference, angular_rate,
                       line_shape_grid, stationary_peak, survival_probability,
                       xi0, xi1, xi2)
from .dilation import gamma_q_inv
from .numerics import golden_section
from .wavepackets import (Eigenstate, Mixture, PacketPairSpec, Superposition,
                          ZERO_NORM_THRESHOLD, moment_diff_closed)

__all__ = [
    "ScenarioConfig", "SweepResult", "RidgeEntry", "SCENARIO_NAMES",
    "sweep_fig1", "sweep_delta_q", "angular_map", "spectrum_panels",
    "fig3_maps", "survival_curves", "run_scenario", "qtd_threads",
]

SCENARIO_NAMES = (
    "fig1a", "fig1b", "fig1c",
    "deltaq-a", "deltaq-b", "deltaq-c",
    "angular",
    "fig2a", "fig2b", "fig2c", "fig2d",
    "fig3", "survival",
)


def qtd_threads() -> int:
    """Worker cap from QTD_THREADS (default 1: fully serial)."""
    try:
        n = int(os.environ.get("QTD_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


@dataclass(frozen=True)
class ScenarioConfig:
    """Tunable knobs for every scenario; None means the scenario default.

    The effective (fully resolved) parameter set is what lands in the
    sidecar JSON next to each output file.
    """
    scenario: str = ""
    theta: float | None = None
    phi: float | None = None
    u1: float | None = None
    u2: float | None = None
    delta: float | None = None
    epsilon: float = 0.0
    line_ratio: float | None = None
    grid: int = 128
    omega_points: int = 2048
    resolution: int = 64
    sep_max_over_delta: float = 6.0
    sum_momenta: float | None = None
    fig3_rows: int = 48
    fig3_omega_points: int = 512
    t_max: float = 5.0
    t_points: int = 41
    out: str | None = None

    def __post_init__(self):
        if self.grid < 2 or self.omega_points < 2 or self.t_points < 2:
            raise ValueError("grid resolutions must be >= 2")
        if self.resolution < 8:
            raise ValueError("angular resolution must be >= 8 per angle")
        if self.fig3_rows < 2 or self.fig3_omega_points < 2:
            raise ValueError("fig3 resolutions must be >= 2")
        if self.sep_max_over_delta <= 0 or self.t_max <= 0:
            raise ValueError("ranges must be nonempty")


@dataclass(frozen=True)
class RidgeEntry:
    """Extremum of one grid row, refined along axis2 by golden section."""
    axis1_value: float
    axis2_value: float
    value: float
    kind: str  # "max" or "min"


@dataclass
class SweepResult:
    """Rectangular sweep of one observable with extremum-locus annotations.

    values is row-major: values[i, j] belongs to (axis1[i], axis2[j]).
    ridge holds per-row maxima and minima along axis2.  Cells where the
    observable is undefined (the zero-norm point) carry NaN and are skipped
    by the ridge.
    """
    axis1_name: str
    axis1: np.ndarray
    axis2_name: str
    axis2: np.ndarray
    values: np.ndarray
    ridge: list[RidgeEntry]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.axis1 = np.asarray(self.axis1, dtype=np.float64)
        self.axis2 = np.asarray(self.axis2, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.axis1.size, self.axis2.size):
            raise ValueError("grid dimensions must match axes")


# ---------------------------------------------------------------------------
# sweeps of the coherence observables
# ---------------------------------------------------------------------------

def _pair_from_sep(total: float, sep: float) -> tuple[float, float]:
    return 0.5 * (total - sep), 0.5 * (total + sep)


def _cell_value(which: str, theta: float, phi: float, sep: float,
                total: float, delta: float) -> float:
    """k1 or k2 for one sweep cell; NaN at the zero-norm point."""
    u1, u2 = _pair_from_sep(total, sep)
    x = u2 - u1
    y = x * x / (4.0 * delta * delta)
    if _dhat(theta, phi, y) <= ZERO_NORM_THRESHOLD:
        return np.nan
    k1, k2 = _moment_pair(theta, phi, u1, u2, delta)
    return k1 if which == "k1" else k2


def _extract_ridge(axis1, axis2, values, row_fn) -> list[RidgeEntry]:
    """Per-row extrema along axis2, refined with the continuous row_fn."""
    entries: list[RidgeEntry] = []
    n2 = axis2.size
    for i, a1 in enumerate(axis1):
        row = values[i]
        finite = np.isfinite(row)
        if not finite.any():
            continue
        for kind, sign in (("max", -1.0), ("min", 1.0)):
            masked = np.where(finite, sign * row, np.inf)
            j = int(np.argmin(masked))
            lo = axis2[max(j - 1, 0)]
            hi = axis2[min(j + 1, n2 - 1)]
            if hi > lo:
                x, fx, _, _ = golden_section(
                    lambda s: sign * row_fn(a1, s), lo, hi, tol=1e-12)
                entries.append(RidgeEntry(float(a1), float(x),
                                          float(sign * fx), kind))
            else:
                entries.append(RidgeEntry(float(a1), float(axis2[j]),
                                          float(row[j]), kind))
    return entries


def _coherence_sweep(which: str, axis1_name: str, axis1, fixed: dict,
                     config: ScenarioConfig) -> SweepResult:
    delta = config.delta if config.delta is not None else 0.01
    total = config.sum_momenta if config.sum_momenta is not None else 0.05
    sep_axis = np.linspace(0.0, config.sep_max_over_delta * delta, config.grid)

    def cell(a1: float, sep: float) -> float:
        theta = fixed.get("theta", a1 if axis1_name == "theta" else None)
        phi = fixed.get("phi", a1 if axis1_name == "phi" else None)
        return _cell_value(which, theta, phi, sep, total, delta)

    values = np.empty((axis1.size, sep_axis.size))
    for i, a1 in enumerate(axis1):
        for j, sep in enumerate(sep_axis):
            values[i, j] = cell(a1, sep)
    ridge = _extract_ridge(axis1, sep_axis, values, cell)

    finite = np.isfinite(values)
    imax = np.unravel_index(int(np.argmax(np.where(finite, values, -np.inf))),
                            values.shape)
    imin = np.unravel_index(int(np.argmin(np.where(finite, values, np.inf))),
                            values.shape)
    meta = {
        "observable": "gamma_q_inv" if which == "k2" else "delta_q",
        "delta": delta, "sum_momenta": total, **fixed,
        "grid": [int(axis1.size), int(sep_axis.size)],
        "global_max": {"axis1": float(axis1[imax[0]]),
                       "axis2": float(sep_axis[imax[1]]),
                       "value": float(values[imax])},
        "global_min": {"axis1": float(axis1[imin[0]]),
                       "axis2": float(sep_axis[imin[1]]),
                       "value": float(values[imin])},
    }
    return SweepResult(axis1_name, axis1, "separation", sep_axis, values,
                       ridge, meta)


def _fig1_like(which: str, variant: str, config: ScenarioConfig) -> SweepResult:
    n = config.grid
    if variant == "a":
        theta = (config.theta if config.theta is not None
                 else (np.pi / 4 if which == "k2" else np.pi / 8))
        axis1 = np.linspace(0.0, np.pi, n, endpoint=False)
        res = _coherence_sweep(which, "phi", axis1, {"theta": theta}, config)
    elif variant in ("b", "c"):
        phi = (config.phi if config.phi is not None
               else (0.0 if variant == "b" else float(np.pi)))
        axis1 = np.linspace(0.0, np.pi / 2, n, endpoint=False)
        res = _coherence_sweep(which, "theta", axis1, {"phi": phi}, config)
    else:
        raise ValueError("variant must be one of 'a', 'b', 'c'")
    res.metadata["variant"] = variant
    return res


def sweep_fig1(variant: str, config: ScenarioConfig = ScenarioConfig()) -> SweepResult:
    """gamma_q_inv over (phase|weight) x separation.

    Variants: 'a' phase x separation at fixed weight (default pi/4);
    'b' weight x separation at phase 0; 'c' weight x separation at phase
    pi.  For variant 'b' the metadata reports the equal-weight ridge
    endpoint, the separation maximizing the effect at theta = pi/4, whose
    exact location is 2 sqrt(1 + W0(1/e)) spreads.
    """
    res = _fig1_like("k2", variant, config)
    if variant == "b":
        delta = res.metadata["delta"]
        total = res.metadata["sum_momenta"]
        sep, val, _, _ = golden_section(
            lambda s: -_cell_value("k2", float(np.pi / 4), 0.0, s, total, delta),
            1e-6 * delta, config.sep_max_over_delta * delta, tol=1e-14)
        res.metadata["ridge_endpoint_sep_over_delta"] = float(sep / delta)
        res.metadata["ridge_endpoint_value"] = float(-val)
    return res


def sweep_delta_q(variant: str, config: ScenarioConfig = ScenarioConfig()) -> SweepResult:
    """delta_q over (phase|weight) x separation; variant 'a' fixes the
    weight at pi/8 (the equal-weight row is identically zero)."""
    return _fig1_like("k1", variant, config)


# ---------------------------------------------------------------------------
# angular map
# ---------------------------------------------------------------------------

def _default_pair(config: ScenarioConfig) -> PacketPairSpec:
    return PacketPairSpec(
        theta=config.theta if config.theta is not None else np.pi / 4,
        phi=config.phi if config.phi is not None else 0.0,
        u1=config.u1 if config.u1 is not None else 0.015,
        u2=config.u2 if config.u2 is not None else 0.035,
        delta=config.delta if config.delta is not None else 0.01,
    )


def angular_map(config: ScenarioConfig = ScenarioConfig()):
    """Tabulated dipole pattern, motional corrections and coherent-vs-
    classical difference on a (Theta, Phi) grid.

    Returns (big_theta, big_phi, table) where table maps column name ->
    2-d array; the plotting of sign structure (diverging palette) is left
    to the renderer.
    """
    spec = _default_pair(config)
    atom = AtomSpec(config.epsilon, config.line_ratio or 1.5e9)
    n = config.resolution
    big_theta = np.linspace(0.0, np.pi, n)
    big_phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    tt, pp = np.meshgrid(big_theta, big_phi, indexing="ij")
    table = {
        "xi0": xi0(tt, pp),
        "xi1": xi1(tt, pp),
        "xi2": xi2(tt, pp),
        "rate_sup": angular_rate(tt, pp, Superposition(spec), atom),
        "rate_cl": angular_rate(tt, pp, Mixture(spec), atom),
        "diff": angular_difference(tt, pp, spec),
    }
    meta = {"spec": asdict(spec), "epsilon": atom.epsilon,
            "resolution": n, "gamma_q_inv": gamma_q_inv(spec),
            "delta_q": moment_diff_closed(spec).k1}
    return big_theta, big_phi, table, meta


# ---------------------------------------------------------------------------
# spectrum panels
# ---------------------------------------------------------------------------

_FIG2 = {
    # kind, line_ratio, delta
    "fig2a": ("parallel", 1.5e9, 6e-9),
    "fig2b": ("parallel", 1.5e9, 8e-9),
    "fig2c": ("perpendicular", 1.5e17, 6e-9),
    "fig2d": ("perpendicular", 1.5e17, 8e-9),
}


def _panel_axis(kind: str, u1: float, u2: float, delta: float, r: float,
                n: int) -> np.ndarray:
    """Detuning axis spanning both packet resonances with margin."""
    pad = 20.0 / r
    if kind == "parallel":
        lo = u1 - 3.0 * delta - pad
        hi = u2 + 3.0 * delta + pad
    else:
        lo = -0.5 * (u2 + 3.0 * delta) ** 2 - pad
        hi = -0.5 * max(u1 - 3.0 * delta, 0.0) ** 2 + pad
    return np.linspace(lo, hi, n)


def _midpoint_detuning(kind: str, u1: float, u2: float) -> float:
    """Detuning resonant with the average of the two mean momenta."""
    um = 0.5 * (u1 + u2)
    return um if kind == "parallel" else -0.5 * um * um


def spectrum_panels(variant: str, config: ScenarioConfig = ScenarioConfig()):
    """Line-shape panel: coherent and classical curves on one detuning axis.

    Caption-fixed parameters per panel: packet centers 2e-8 and 4e-8,
    spread 6e-9 (a, c) or 8e-9 (b, d), line ratio 1.5e9 (a, b; parallel
    emission) or 1.5e17 (c, d; perpendicular).  Weight and phase are not
    caption-fixed; defaults theta = pi/4, phi = 0 (maximal coherence term)
    are declared in the metadata.
    """
    if variant not in _FIG2:
        raise ValueError(f"variant must be one of {sorted(_FIG2)}")
    kind, r_default, delta_default = _FIG2[variant]
    spec = PacketPairSpec(
        theta=config.theta if config.theta is not None else np.pi / 4,
        phi=config.phi if config.phi is not None else 0.0,
        u1=config.u1 if config.u1 is not None else 2e-8,
        u2=config.u2 if config.u2 is not None else 4e-8,
        delta=config.delta if config.delta is not None else delta_default,
    )
    atom = AtomSpec(config.epsilon,
                    config.line_ratio if config.line_ratio is not None else r_default)
    nus = _panel_axis(kind, spec.u1, spec.u2, spec.delta, atom.line_ratio,
                      config.omega_points)
    threads = qtd_threads()
    p_sup = line_shape_grid(nus, Superposition(spec), atom, kind, threads=threads)
    p_cl = line_shape_grid(nus, Mixture(spec), atom, kind, threads=threads)
    norm = stationary_peak(atom, spec.delta, kind)

    from .emission import line_shape
    nu_mid = _midpoint_detuning(kind, spec.u1, spec.u2)
    ps_mid = line_shape(nu_mid, Superposition(spec), atom, kind)
    pc_mid = line_shape(nu_mid, Mixture(spec), atom, kind)
    meta = {
        "variant": variant, "kind": kind, "spec": asdict(spec),
        "epsilon": atom.epsilon, "line_ratio": atom.line_ratio,
        "normalization": norm,
        "midpoint_detuning": nu_mid,
        "midpoint_upshift": float((ps_mid - pc_mid) / pc_mid),
        "max_rel_diff_vs_cl": float(np.max(np.abs(p_sup - p_cl) / p_cl)),
        "max_diff_vs_peak": float(np.max(np.abs(p_sup - p_cl)) / norm),
    }
    from .emission import SpectrumGrid
    return SpectrumGrid(nus, p_sup, p_cl, norm, meta)


# ---------------------------------------------------------------------------
# frequency-by-separation maps
# ---------------------------------------------------------------------------

def fig3_maps(config: ScenarioConfig = ScenarioConfig()):
    """Parallel-emission maps over (separation, detuning).

    Returns three SweepResults: the coherent line shape, the absolute
    coherent-minus-classical difference, and the relative difference.
    Defaults (declared, axis etc. in metadata): mean momentum 3e-8,
    spread 6e-9, line ratio 1.5e9, theta pi/4, phi 0.
    """
    theta = config.theta if config.theta is not None else np.pi / 4
    phi = config.phi if config.phi is not None else 0.0
    delta = config.delta if config.delta is not None else 6e-9
    total = config.sum_momenta if config.sum_momenta is not None else 6e-8
    atom = AtomSpec(config.epsilon,
                    config.line_ratio if config.line_ratio is not None else 1.5e9)
    seps = np.linspace(0.0, config.sep_max_over_delta * delta, config.fig3_rows)
    half_span = 0.5 * seps[-1] + 3.0 * delta + 20.0 / atom.line_ratio
    nus = 0.5 * total + np.linspace(-half_span, half_span,
                                    config.fig3_omega_points)
    threads = qtd_threads()
    psup = np.empty((seps.size, nus.size))
    pcl = np.empty((seps.size, nus.size))
    for i, sep in enumerate(seps):
        u1, u2 = _pair_from_sep(total, sep)
        spec = PacketPairSpec(theta, phi, u1, u2, delta)
        psup[i] = line_shape_grid(nus, Superposition(spec), atom, "parallel",
                                  threads=threads)
        pcl[i] = line_shape_grid(nus, Mixture(spec), atom, "parallel",
                                 threads=threads)
    absdiff = psup - pcl
    reldiff = absdiff / pcl

    meta = {"theta": theta, "phi": phi, "delta": delta, "sum_momenta": total,
            "epsilon": atom.epsilon, "line_ratio": atom.line_ratio,
            "kind": "parallel"}
    maps = []
    for name, grid in (("p_sup", psup), ("abs_diff", absdiff),
                       ("rel_diff", reldiff)):
        ridge: list[RidgeEntry] = []
        if name == "rel_diff":
            for i, sep in enumerate(seps):
                j = int(np.argmax(np.abs(grid[i])))
                ridge.append(RidgeEntry(float(sep), float(nus[j]),
                                        float(grid[i, j]), "max"))
        maps.append(SweepResult("separation", seps, "detuning", nus, grid,
                                ridge, {**meta, "observable": name}))
    return tuple(maps)


# ---------------------------------------------------------------------------
# survival curves
# ---------------------------------------------------------------------------

def survival_curves(config: ScenarioConfig = ScenarioConfig()):
    """Excited-state survival for superposition, mixture and the mean-
    momentum eigenstate on one time grid (units 1/Gamma0).

    The summary reports the Richardson-extrapolated initial slope of
    S_sup - S_cl, which must equal minus the rate shift k2.
    """
    spec = _default_pair(config)
    atom = AtomSpec(config.epsilon, config.line_ratio or 1.5e9)
    ts = np.linspace(0.0, config.t_max, config.t_points)
    sup = Superposition(spec)
    cl = Mixture(spec)
    eig = Eigenstate(cl.moments()[0])
    s_sup = np.array([survival_probability(t, sup, atom) for t in ts])
    s_cl = np.array([survival_probability(t, cl, atom) for t in ts])
    s_eig = np.array([survival_probability(t, eig, atom) for t in ts])

    def d(t):
        return (survival_probability(t, sup, atom)
                - survival_probability(t, cl, atom))

    h = 0.01
    r1 = (4.0 * d(h) - d(2.0 * h)) / (2.0 * h)
    r2 = (4.0 * d(0.5 * h) - d(h)) / h
    slope = (4.0 * r2 - r1) / 3.0
    gq = gamma_q_inv(spec)
    meta = {"spec": asdict(spec), "epsilon": atom.epsilon,
            "eigenstate_u": float(eig.u),
            "initial_slope_diff": float(slope),
            "gamma_q_inv": gq,
            "slope_identity_residual": float(slope + gq)}
    return ts, s_sup, s_cl, s_eig, meta


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _fmt_omega_column(nus: np.ndarray) -> list[str]:
    """omega/Omega = 1 + nu as text, kept resolvable for ultranarrow lines.

    17 significant digits suffice while the grid step survives the float
    addition 1 + nu; otherwise (perpendicular panels, |nu| ~ 1e-16) the
    column switches to the exact decimal expansion of the dyadic 1 + nu.
    """
    plain = [format(1.0 + float(nu), ".17g") for nu in nus]
    if len(set(plain)) == len(plain):
        return plain
    one = Decimal(1)
    return [str(one + Decimal(float(nu))) for nu in nus]


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qtd-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], columns: list[list[str]]) -> None:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _sidecar(path: str, config: ScenarioConfig, extra: dict) -> None:
    doc = {"config": asdict(config), "effective": extra,
           "version": __version__, "backend": active_backend()}
    _atomic_write(path, json.dumps(doc, sort_keys=True, indent=2,
                                   default=float) + "\n")


def _write_sweep_csv(path: str, res: SweepResult) -> None:
    flags = np.zeros_like(res.values, dtype=int)
    for e in res.ridge:
        i = int(np.argmin(np.abs(res.axis1 - e.axis1_value)))
        j = int(np.argmin(np.abs(res.axis2 - e.axis2_value)))
        flags[i, j] = 1 if e.kind == "max" else -1
    a1 = np.repeat(res.axis1, res.axis2.size)
    a2 = np.tile(res.axis2, res.axis1.size)
    cols = [[_fmt(v) for v in a1], [_fmt(v) for v in a2],
            [_fmt(v) for v in res.values.ravel()],
            [str(v) for v in flags.ravel()]]
    _write_csv(path, ["axis1", "axis2", "value", "ridge_flag"], cols)


def _ridge_json(res: SweepResult):
    return [{"axis1": e.axis1_value, "axis2": e.axis2_value,
             "value": e.value, "kind": e.kind} for e in res.ridge]


def run_scenario(name: str, config: ScenarioConfig = ScenarioConfig(),
                 outdir: str = ".") -> dict:
    """Execute one named scenario and write its files into ``outdir``.

    Writes <name>.csv (three CSVs for fig3), <name>.config.json and
    <name>.summary.json; returns the summary dict (also containing the
    list of files written).
    """
    if name not in SCENARIO_NAMES:
        raise ValueError(
            f"unknown scenario {name!r}; valid names: {', '.join(SCENARIO_NAMES)}")
    config = replace(config, scenario=name)
    base = os.path.join(outdir, name)
    files = []
    summary: dict = {"scenario": name}

    if name.startswith("fig1") or name.startswith("deltaq"):
        variant = name[-1]
        res = (sweep_fig1(variant, config) if name.startswith("fig1")
               else sweep_delta_q(variant, config))
        _write_sweep_csv(base + ".csv", res)
        files.append(base + ".csv")
        summary.update({k: v for k, v in res.metadata.items()})
        summary["ridge"] = _ridge_json(res)
        effective = res.metadata
    elif name == "angular":
        bt, bp, table, meta = angular_map(config)
        tt, pp = np.meshgrid(bt, bp, indexing="ij")
        cols = [[_fmt(v) for v in tt.ravel()], [_fmt(v) for v in pp.ravel()]]
        header = ["big_theta", "big_phi"]
        for key in ("xi0", "xi1", "xi2", "rate_sup", "rate_cl", "diff"):
            header.append(key)
            cols.append([_fmt(v) for v in table[key].ravel()])
        _write_csv(base + ".csv", header, cols)
        files.append(base + ".csv")
        summary.update(meta)
        effective = meta
    elif name.startswith("fig2"):
        sg = spectrum_panels(name, config)
        cols = [_fmt_omega_column(sg.detuning),
                [_fmt(v) for v in sg.p_sup], [_fmt(v) for v in sg.p_cl],
                [_fmt(v) for v in (sg.p_sup - sg.p_cl)],
                [_fmt(v) for v in (sg.p_sup - sg.p_cl) / sg.p_cl]]
        _write_csv(base + ".csv",
                   ["omega_over_Omega", "p_sup", "p_cl", "abs_diff", "rel_diff"],
                   cols)
        files.append(base + ".csv")
        summary.update(sg.metadata)
        effective = sg.metadata
    elif name == "fig3":
        maps = fig3_maps(config)
        for res, suffix in zip(maps, ("psup", "absdiff", "reldiff")):
            p = os.path.join(outdir, f"fig3_{suffix}.csv")
            _write_sweep_csv(p, res)
            files.append(p)
        summary.update(maps[0].metadata)
        summary["rel_diff_ridge"] = _ridge_json(maps[2])
        effective = maps[0].metadata
    elif name == "survival":
        ts, s_sup, s_cl, s_eig, meta = survival_curves(config)
        cols = [[_fmt(v) for v in arr] for arr in (ts, s_sup, s_cl, s_eig)]
        _write_csv(base + ".csv", ["t", "s_sup", "s_cl", "s_eigenstate"], cols)
        files.append(base + ".csv")
        summary.update(meta)
        effective = meta
    else:  # pragma: no cover
        raise AssertionError(name)

    _sidecar(base + ".config.json", config, effective)
    files.append(base + ".config.json")
    files.append(base + ".summary.json")
    # summaries carry basenames so identical runs into different
    # directories stay byte-identical
    summary["files"] = sorted(os.path.basename(f) for f in files)
    _atomic_write(base + ".summary.json",
                  json.dumps(summary, sort_keys=True, indent=2,
                             default=float) + "\n")
    summary["files"] = sorted(files)
    return summary
