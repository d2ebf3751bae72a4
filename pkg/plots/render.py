#!/usr/bin/env python3
"""Regenerate publication-style figures from scenario CSV/JSON outputs.

Consumes the CSV and sidecar-JSON contract of the qtd CLI verbatim and
renders raster images: sweep heatmaps with extremum-locus overlays,
line-shape panels, angular maps, frequency-by-separation maps, and
survival curves.  Signed observables use a diverging palette centered at
zero (warm positive, cool negative); sidecar parameters are echoed into a
figure annotation.

Usage: render.py --job job.json

The job document holds {"kind": ..., "csv": path-or-list, "sidecar": path,
"out": image path}.  Inputs are opened read-only; rendering twice produces
byte-identical images.  Exits 2 on schema mismatches.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from decimal import Decimal

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("sweep", "spectrum", "angular", "fig3", "survival")

HEADERS = {
    "sweep": ["axis1", "axis2", "value", "ridge_flag"],
    "spectrum": ["omega_over_Omega", "p_sup", "p_cl", "abs_diff", "rel_diff"],
    "angular": ["big_theta", "big_phi", "xi0", "xi1", "xi2",
                "rate_sup", "rate_cl", "diff"],
    "survival": ["t", "s_sup", "s_cl", "s_eigenstate"],
}

SAVE_OPTS = dict(dpi=120, metadata={"Software": "qtd-plots"})


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class FigureJob:
    kind: str
    csv: tuple[str, ...]
    sidecar: str
    out: str


def load_job(path: str) -> FigureJob:
    with open(path) as fh:
        doc = json.load(fh)
    missing = {"kind", "csv", "sidecar", "out"} - set(doc)
    if missing:
        raise SchemaError(f"job is missing keys: {', '.join(sorted(missing))}")
    kind = doc["kind"]
    if kind not in KINDS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of {KINDS}")
    csvs = doc["csv"] if isinstance(doc["csv"], list) else [doc["csv"]]
    want = 3 if kind == "fig3" else 1
    if len(csvs) != want:
        raise SchemaError(f"kind {kind} needs {want} csv file(s), got {len(csvs)}")
    return FigureJob(kind, tuple(csvs), doc["sidecar"], doc["out"])


def read_table(path: str, kind: str) -> dict[str, np.ndarray]:
    """Read one CSV of the declared kind, validating the header."""
    header_kind = "sweep" if kind == "fig3" else kind
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != HEADERS[header_kind]:
            raise SchemaError(
                f"{path}: header {header} does not match kind "
                f"{kind} ({HEADERS[header_kind]})")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {}
    for i, name in enumerate(header):
        if name == "omega_over_Omega":
            # may carry exact decimals finer than double resolution;
            # recover the detuning by subtracting 1 in decimal
            cols["detuning"] = np.array(
                [float(Decimal(r[i]) - 1) for r in rows])
        cols[name] = np.array([float(r[i]) for r in rows])
    return cols


def load_sidecar(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _annotate(fig, sidecar: dict) -> None:
    eff = sidecar.get("effective", {})
    keep = []
    for key in ("observable", "variant", "kind", "delta", "sum_momenta",
                "theta", "phi", "line_ratio", "epsilon", "eigenstate_u"):
        if key in eff and not isinstance(eff[key], (dict, list)):
            keep.append(f"{key}={eff[key]:.6g}" if isinstance(eff[key], float)
                        else f"{key}={eff[key]}")
    spec = eff.get("spec")
    if isinstance(spec, dict):
        keep += [f"{k}={v:.4g}" for k, v in spec.items()]
    txt = "  ".join(keep) + f"   [qtd {sidecar.get('version', '?')}]"
    fig.text(0.01, 0.005, txt, fontsize=5, family="monospace")


def _grid(cols: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a1 = np.unique(cols["axis1"])
    a2 = np.unique(cols["axis2"])
    values = cols["value"].reshape(a1.size, a2.size)
    flags = cols["ridge_flag"].reshape(a1.size, a2.size)
    return a1, a2, values, flags


def _diverging(ax, a1, a2, values, flags=None):
    finite = np.isfinite(values)
    vmax = np.abs(values[finite]).max() if finite.any() else 1.0
    mesh = ax.pcolormesh(a2, a1, np.ma.masked_invalid(values),
                         cmap="RdBu_r", vmin=-vmax, vmax=vmax,
                         shading="nearest")
    if flags is not None:
        for flag, color in ((1, "#d62728"), (-1, "#1f77b4")):
            ii, jj = np.nonzero(flags == flag)
            if ii.size:
                ax.plot(a2[jj], a1[ii], ".", color=color, ms=2.5)
    return mesh


def render_sweep(job: FigureJob) -> None:
    cols = read_table(job.csv[0], "sweep")
    sidecar = load_sidecar(job.sidecar)
    a1, a2, values, flags = _grid(cols)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    mesh = _diverging(ax, a1, a2, values, flags)
    fig.colorbar(mesh, ax=ax,
                 label=sidecar.get("effective", {}).get("observable", "value"))
    ax.set_xlabel("separation (units of mc)")
    ax.set_ylabel("axis1")
    _annotate(fig, sidecar)
    fig.savefig(job.out, **SAVE_OPTS)
    plt.close(fig)


def render_spectrum(job: FigureJob) -> None:
    cols = read_table(job.csv[0], "spectrum")
    sidecar = load_sidecar(job.sidecar)
    eff = sidecar.get("effective", {})
    norm = float(eff.get("normalization", 1.0)) or 1.0
    ratio = float(eff.get("line_ratio", 1.0))
    x = cols["detuning"] * ratio          # (omega - Omega) / Gamma0
    fig, (ax, axd) = plt.subplots(
        2, 1, figsize=(6.0, 4.8), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    ax.plot(x, cols["p_sup"] / norm, label="coherent superposition", lw=1.2)
    ax.plot(x, cols["p_cl"] / norm, label="classical mixture", lw=1.2,
            ls="--")
    ax.set_ylabel("emission probability / stationary peak")
    ax.legend(fontsize=8)
    axd.plot(x, cols["rel_diff"], color="#2ca02c", lw=1.0)
    axd.axhline(0.0, color="0.6", lw=0.6)
    axd.set_ylabel("rel. diff")
    axd.set_xlabel(r"detuning $(\omega-\Omega)/\Gamma_0$")
    _annotate(fig, sidecar)
    fig.savefig(job.out, **SAVE_OPTS)
    plt.close(fig)


def render_angular(job: FigureJob) -> None:
    cols = read_table(job.csv[0], "angular")
    sidecar = load_sidecar(job.sidecar)
    bt = np.unique(cols["big_theta"])
    bp = np.unique(cols["big_phi"])
    fig = plt.figure(figsize=(9.0, 3.2))
    # polar cuts in the motion-dipole plane: phi = 0 forward, pi backward
    j0 = int(np.argmin(np.abs(bp - 0.0)))
    jpi = int(np.argmin(np.abs(bp - np.pi)))
    for k, field in enumerate(("xi0", "xi1", "xi2")):
        grid = cols[field].reshape(bt.size, bp.size)
        ax = fig.add_subplot(1, 4, k + 1, projection="polar")
        ang = np.concatenate([bt, 2 * np.pi - bt[::-1]])
        val = np.concatenate([grid[:, j0], grid[::-1, jpi]])
        for sign, color in ((1.0, "#d62728"), (-1.0, "#1f77b4")):
            sel = np.sign(val) == sign
            ax.plot(np.where(sel, ang, np.nan), np.abs(val), color=color,
                    lw=1.1)
        ax.set_title(field, fontsize=9)
        ax.set_theta_zero_location("N")
        ax.set_xticks([])
        ax.tick_params(labelsize=5)
    ax = fig.add_subplot(1, 4, 4)
    diff = cols["diff"].reshape(bt.size, bp.size)
    mesh = _diverging(ax, bt, bp, diff)
    fig.colorbar(mesh, ax=ax, label="coherent - classical")
    ax.set_xlabel("Phi")
    ax.set_ylabel("Theta")
    _annotate(fig, sidecar)
    fig.savefig(job.out, **SAVE_OPTS)
    plt.close(fig)


def render_fig3(job: FigureJob) -> None:
    sidecar = load_sidecar(job.sidecar)
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    titles = ("coherent line shape", "absolute difference",
              "relative difference")
    for ax, path, title in zip(axes, job.csv, titles):
        cols = read_table(path, "fig3")
        a1, a2, values, flags = _grid(cols)
        if title == "coherent line shape":
            mesh = ax.pcolormesh(a2, a1, values, cmap="viridis",
                                 shading="nearest")
        else:
            mesh = _diverging(ax, a1, a2, values, flags)
        fig.colorbar(mesh, ax=ax)
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("detuning")
        ax.set_ylabel("separation")
    _annotate(fig, sidecar)
    fig.savefig(job.out, **SAVE_OPTS)
    plt.close(fig)


def render_survival(job: FigureJob) -> None:
    cols = read_table(job.csv[0], "survival")
    sidecar = load_sidecar(job.sidecar)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(cols["t"], cols["s_sup"], label="coherent superposition", lw=1.2)
    ax.plot(cols["t"], cols["s_cl"], label="classical mixture", ls="--",
            lw=1.2)
    ax.plot(cols["t"], cols["s_eigenstate"], label="mean-momentum eigenstate",
            ls=":", lw=1.2)
    ax.set_xlabel(r"t  (units of $1/\Gamma_0$)")
    ax.set_ylabel("excited-state survival")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    _annotate(fig, sidecar)
    fig.savefig(job.out, **SAVE_OPTS)
    plt.close(fig)


RENDERERS = {
    "sweep": render_sweep,
    "spectrum": render_spectrum,
    "angular": render_angular,
    "fig3": render_fig3,
    "survival": render_survival,
}


def render(job: FigureJob) -> None:
    RENDERERS[job.kind](job)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render one figure from scenario CSV/JSON outputs")
    parser.add_argument("--job", required=True, metavar="JOB_JSON")
    args = parser.parse_args(argv)
    try:
        job = load_job(args.job)
        render(job)
    except (SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(job.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
