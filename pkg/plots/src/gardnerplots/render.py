"""Render figure-style images from lattice-wave CSV outputs.

Consumes the CSV/JSON files written by the gardner-lattice CLI and renders
one of four figure kinds:

  profile     line plot u(n) per sampled time (trajectory CSV: t,n,u)
  heatmap     space-time field as an image      (trajectory CSV)
  waterfall   staggered per-time profiles       (trajectory CSV)
  region_map  discrete collision-type map       (region CSV: a,b,label)

Rendering is deterministic: fixed figure geometry, fixed colors, no
timestamps.  If a meta.json sidecar sits next to a trajectory CSV, its
far-field levels are drawn as reference lines on profile plots.

Exit codes: 0 on success, 2 on bad inputs (missing file, empty or
mismatched CSV, unknown kind).  No output file is written on failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (7.0, 4.5)
DPI = 110

REGION_COLORS = {
    "head_on": "#d95f02",
    "overtaking_positive": "#1b9e77",
    "overtaking_negative": "#7570b3",
    "degenerate": "#e7298a",
    "excluded": "#d9d9d9",
}


class InputError(ValueError):
    pass


def read_trajectory(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Load a t,n,u CSV into (times, sites, values[time, site])."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["t", "n", "u"]:
            raise InputError(f"expected columns t,n,u, got {reader.fieldnames}")
        rows = [(float(r["t"]), int(r["n"]), float(r["u"])) for r in reader]
    if not rows:
        raise InputError("trajectory CSV has no data rows")
    times = sorted({r[0] for r in rows})
    sites = sorted({r[1] for r in rows})
    t_index = {t: i for i, t in enumerate(times)}
    n_index = {n: j for j, n in enumerate(sites)}
    values = np.full((len(times), len(sites)), np.nan)
    for t, n, u in rows:
        values[t_index[t], n_index[n]] = u
    if np.any(np.isnan(values)):
        raise InputError("trajectory CSV does not cover a full time x site grid")
    return np.asarray(times), np.asarray(sites), values


def read_region_map(path: str) -> list[tuple[float, float, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["a", "b", "label"]:
            raise InputError(f"expected columns a,b,label, got {reader.fieldnames}")
        rows = [(float(r["a"]), float(r["b"]), r["label"]) for r in reader]
    if not rows:
        raise InputError("region CSV has no data rows")
    unknown = {label for _, _, label in rows} - set(REGION_COLORS)
    if unknown:
        raise InputError(f"unknown region labels: {sorted(unknown)}")
    return rows


def sidecar_levels(csv_path: str) -> list[float]:
    meta_path = os.path.join(os.path.dirname(csv_path) or ".", "meta.json")
    if not os.path.exists(meta_path):
        return []
    try:
        with open(meta_path) as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return []
    levels = {meta.get("background_left"), meta.get("background_right")}
    return sorted(v for v in levels if isinstance(v, (int, float)))


def render_profile(csv_path: str, out_path: str) -> None:
    times, sites, values = read_trajectory(csv_path)
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for i, t in enumerate(times):
        ax.plot(sites, values[i], lw=1.4, label=f"t = {t:g}")
    for level in sidecar_levels(csv_path):
        ax.axhline(level, color="0.4", lw=0.8, ls="--")
    ax.set_xlabel("lattice site n")
    ax.set_ylabel("u")
    if len(times) <= 8:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_heatmap(csv_path: str, out_path: str) -> None:
    times, sites, values = read_trajectory(csv_path)
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    extent = (sites[0] - 0.5, sites[-1] + 0.5, times[0], times[-1])
    im = ax.imshow(
        values,
        aspect="auto",
        origin="lower",
        extent=extent,
        cmap="viridis",
        interpolation="nearest",
    )
    fig.colorbar(im, ax=ax, label="u")
    ax.set_xlabel("lattice site n")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_waterfall(csv_path: str, out_path: str, max_traces: int = 12) -> None:
    times, sites, values = read_trajectory(csv_path)
    idx = np.unique(np.linspace(0, len(times) - 1, max_traces).astype(int))
    span = float(np.max(values) - np.min(values)) or 1.0
    offset = 0.6 * span
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for rank, i in enumerate(idx):
        ax.plot(sites, values[i] + rank * offset, lw=1.1, color="C0")
        ax.text(
            sites[-1], values[i][-1] + rank * offset, f" t={times[i]:g}",
            fontsize=7, va="center",
        )
    ax.set_xlabel("lattice site n")
    ax.set_yticks([])
    ax.set_ylabel("u (staggered in time)")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_region_map(csv_path: str, out_path: str) -> None:
    rows = read_region_map(csv_path)
    a_vals = sorted({a for a, _, _ in rows})
    b_vals = sorted({b for _, b, _ in rows})
    labels = sorted(REGION_COLORS)
    code = {label: i for i, label in enumerate(labels)}
    grid = np.full((len(b_vals), len(a_vals)), code["excluded"])
    a_index = {a: j for j, a in enumerate(a_vals)}
    b_index = {b: i for i, b in enumerate(b_vals)}
    for a, b, label in rows:
        grid[b_index[b], a_index[a]] = code[label]
    cmap = matplotlib.colors.ListedColormap([REGION_COLORS[label] for label in labels])
    fig, ax = plt.subplots(figsize=(6.0, 5.0), dpi=DPI)
    ax.imshow(
        grid,
        origin="lower",
        aspect="auto",
        cmap=cmap,
        vmin=-0.5,
        vmax=len(labels) - 0.5,
        extent=(min(a_vals), max(a_vals), min(b_vals), max(b_vals)),
        interpolation="nearest",
    )
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=REGION_COLORS[label]) for label in labels
    ]
    ax.legend(handles, labels, loc="lower left", fontsize=7, framealpha=0.9)
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


RENDERERS = {
    "profile": render_profile,
    "heatmap": render_heatmap,
    "waterfall": render_waterfall,
    "region_map": render_region_map,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gardner-plots", description="Render images from lattice-wave CSV files."
    )
    parser.add_argument("--in", dest="input", required=True, help="input CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--kind", required=True, choices=sorted(RENDERERS))
    args = parser.parse_args(argv)
    try:
        RENDERERS[args.kind](args.input, args.out)
    except (InputError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        # never leave a partial image behind
        if os.path.exists(args.out):
            os.remove(args.out)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
