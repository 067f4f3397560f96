"""Figure rendering from sweep CSVs.

Consumes only the public sweep schema

    system,topology,n,p,trials,mean_T,stderr_T,mean_M,mean_maxocc,verdicts,seed,wall_ms

(no coupling to the simulator package).  Four figure kinds:

mean_vs_n         extinction-time curves vs n, one line per (system,
                  topology, p) group, 3-sigma error bars
residual_fit      mean_T - 2n for the symmetric-speed star data with
                  fitted sqrt(n) and sqrt(n)*log(n) reference curves
coefficient_vs_p  two-type/one-type mean ratio vs p at fixed n, against
                  the log(1/(1-p)) trend
occupancy_hist    histogram of mean max-site-occupancy across rows

Rendering is deterministic: Agg backend, pinned rcParams, fixed SVG hash
salt, and no date metadata, so identical CSV input regenerates identical
bytes.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

STYLE_SEED = "annihilate-plots-1"

REQUIRED = {
    "mean_vs_n": ("system", "topology", "n", "p", "mean_T", "stderr_T"),
    "residual_fit": ("system", "topology", "n", "p", "mean_T", "stderr_T"),
    "coefficient_vs_p": ("system", "topology", "n", "p", "mean_T"),
    "occupancy_hist": ("mean_maxocc",),
}


class FigureError(ValueError):
    """Raised for missing columns, empty data, or a malformed spec."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: tuple[str, ...]
    figure: str
    output: str  # base path; .png and .svg are appended
    log_x: bool = False
    log_y: bool = False
    title: str = ""

    def __post_init__(self):
        if self.figure not in REQUIRED:
            raise FigureError(
                f"unknown figure kind {self.figure!r}; "
                f"expected one of {sorted(REQUIRED)}")
        if not self.input_csv:
            raise FigureError("input_csv must list at least one file")

    @classmethod
    def from_dict(cls, raw: dict) -> "FigureSpec":
        paths = raw.get("input_csv", [])
        if isinstance(paths, str):
            paths = [paths]
        return cls(
            input_csv=tuple(paths),
            figure=raw.get("figure", ""),
            output=raw.get("output", "figure"),
            log_x=bool(raw.get("log_x", False)),
            log_y=bool(raw.get("log_y", False)),
            title=raw.get("title", ""),
        )


def load_specs(path: str) -> list[FigureSpec]:
    """A spec file holds one figure object, a list, or {"figures": [...]}."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict) and "figures" in raw:
        raw = raw["figures"]
    if isinstance(raw, dict):
        raw = [raw]
    return [FigureSpec.from_dict(item) for item in raw]


def _read_rows(spec: FigureSpec) -> list[dict]:
    rows: list[dict] = []
    for path in spec.input_csv:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED[spec.figure] if c not in header]
            if missing:
                raise FigureError(
                    f"{path}: missing column(s) {', '.join(missing)} "
                    f"required by {spec.figure}")
            rows.extend(reader)
    if not rows:
        raise FigureError("no data rows")
    return rows


def _pin_style() -> None:
    plt.rcdefaults()
    matplotlib.rcParams.update({
        "svg.hashsalt": STYLE_SEED,
        "figure.figsize": (7.0, 4.5),
        "figure.dpi": 110,
        "savefig.dpi": 110,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 10,
    })


def _save(fig, base: str) -> list[str]:
    out_dir = os.path.dirname(os.path.abspath(base))
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for ext in ("png", "svg"):
        path = f"{base}.{ext}"
        fig.savefig(path, metadata={"Date": None} if ext == "svg" else None)
        written.append(path)
    plt.close(fig)
    return written


def one_type_star_mean(n: int) -> float:
    """Closed-form one-type star mean: 2 * sum of 1/q_i stage means."""
    total = 0.0
    for i in range(1, n + 1):
        q = 1.0 - (1.0 / (2 * i)) * ((2 * n - 2 * i + 1) / (2 * n))
        total += 1.0 / q
    return 2.0 * total


def _fit_coefficient(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(x * y) / np.sum(x * x))


def _figure_mean_vs_n(spec: FigureSpec, rows: list[dict]):
    fig, ax = plt.subplots()
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["system"], row["topology"], row["p"]), []).append(row)
    for (system, topology, p), members in sorted(groups.items()):
        members.sort(key=lambda r: int(r["n"]))
        n = np.array([int(r["n"]) for r in members])
        mean = np.array([float(r["mean_T"]) for r in members])
        err = 3 * np.array([float(r["stderr_T"]) for r in members])
        ax.errorbar(n, mean, yerr=err, marker="o", capsize=3,
                    label=f"{system}-type {topology}, p={p}")
    ax.set_xlabel("n (half the particle count)")
    ax.set_ylabel("mean extinction time")
    ax.set_title(spec.title or "Extinction time vs system size")
    if spec.log_x:
        ax.set_xscale("log")
    if spec.log_y:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    return fig


def _figure_residual_fit(spec: FigureSpec, rows: list[dict]):
    sel = [r for r in rows
           if r["system"] == "two" and r["topology"] == "star"
           and abs(float(r["p"]) - 0.5) < 1e-9]
    if len(sel) < 2:
        raise FigureError("residual_fit needs >= 2 star rows at p=0.5")
    sel.sort(key=lambda r: int(r["n"]))
    n = np.array([int(r["n"]) for r in sel], float)
    resid = np.array([float(r["mean_T"]) for r in sel]) - 2 * n
    err = 3 * np.array([float(r["stderr_T"]) for r in sel])
    fig, ax = plt.subplots()
    ax.errorbar(n, resid, yerr=err, marker="o", capsize=3, ls="none",
                color="k", label="mean_T - 2n")
    grid = np.geomspace(n.min(), n.max(), 128)
    c1 = _fit_coefficient(np.sqrt(n), resid)
    c2 = _fit_coefficient(np.sqrt(n) * np.log(n), resid)
    ax.plot(grid, c1 * np.sqrt(grid), label=f"{c1:.2f} sqrt(n)")
    ax.plot(grid, c2 * np.sqrt(grid) * np.log(grid), ls="--",
            label=f"{c2:.2f} sqrt(n) log n")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("second-order excess")
    ax.set_title(spec.title or "Star p=1/2: excess over the 2n leading term")
    ax.legend(fontsize=8)
    return fig


def _figure_coefficient_vs_p(spec: FigureSpec, rows: list[dict]):
    sel = [r for r in rows
           if r["system"] == "two" and r["topology"] == "star"
           and float(r["p"]) < 1.0]
    if not sel:
        raise FigureError("coefficient_vs_p needs two-type star rows with p < 1")
    # use the most common n so the ratio is a single curve in p
    counts: dict[int, int] = {}
    for r in sel:
        counts[int(r["n"])] = counts.get(int(r["n"]), 0) + 1
    n_fixed = max(counts, key=lambda k: (counts[k], k))
    sel = [r for r in sel if int(r["n"]) == n_fixed]
    sel.sort(key=lambda r: float(r["p"]))
    p = np.array([float(r["p"]) for r in sel])
    mean = np.array([float(r["mean_T"]) for r in sel])
    baseline = one_type_star_mean(n_fixed)
    ratio = mean / baseline
    fig, ax = plt.subplots()
    ax.plot(p, ratio, marker="o", color="k", label="two-type / one-type mean")
    grid = np.linspace(p.min(), p.max(), 128)
    trend = np.log(1.0 / (1.0 - grid))
    scale = _fit_coefficient(np.log(1.0 / (1.0 - p)), ratio)
    ax.plot(grid, scale * trend, ls="--",
            label=f"{scale:.2f} log(1/(1-p))")
    ax.set_xlabel("blue speed p")
    ax.set_ylabel(f"mean ratio at n={n_fixed}")
    ax.set_title(spec.title or "Slow-down of the two-type system as p -> 1")
    ax.legend(fontsize=8)
    return fig


def _figure_occupancy_hist(spec: FigureSpec, rows: list[dict]):
    occ = np.array([float(r["mean_maxocc"]) for r in rows])
    fig, ax = plt.subplots()
    ax.hist(occ, bins=min(20, max(5, occ.size)), color="#4878b0",
            edgecolor="black")
    ax.set_xlabel("mean max site occupancy")
    ax.set_ylabel("sweep points")
    ax.set_title(spec.title or "Site occupancy across sweep points")
    return fig


_RENDERERS = {
    "mean_vs_n": _figure_mean_vs_n,
    "residual_fit": _figure_residual_fit,
    "coefficient_vs_p": _figure_coefficient_vs_p,
    "occupancy_hist": _figure_occupancy_hist,
}


def render_figures(spec: FigureSpec) -> list[str]:
    """Render one figure spec; returns the written file paths (png, svg)."""
    _pin_style()
    rows = _read_rows(spec)
    fig = _RENDERERS[spec.figure](spec, rows)
    return _save(fig, spec.output)
