"""Figure rendering for sweep-grid CSVs: traces, heatmaps, panel grids.

The heatmap data region is drawn with one image cell per grid cell
(``interpolation="nearest"``, no resampling of the stored array), so the
drawn array dimensions always equal the CSV grid dimensions; empty cells are
masked and rendered in the "bad" color.  Output is deterministic: rendering
the same inputs twice produces byte-identical images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import GridData, read_grid, read_sidecar

DPI = 100
CMAP = "viridis"
BAD_COLOR = "lightgray"

KINDS = ("trace", "heatmap", "panel_grid")


class PlotError(ValueError):
    """Job-level rendering problem (wrong kind, dimension mismatch)."""


@dataclass
class PlotJob:
    csv_paths: list[str]
    kind: str
    out_path: str
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        if not self.csv_paths:
            raise PlotError("at least one input CSV is required")
        if self.kind in ("trace", "heatmap") and len(self.csv_paths) != 1:
            raise PlotError(f"kind {self.kind!r} takes exactly one CSV")


def _panel_title(grid: GridData) -> str:
    meta = read_sidecar(grid.path)
    if meta:
        for note in meta.get("provenance", {}).get("notes", []):
            if "coupling_g" in note:
                return note
    return grid.observable


def _edges(values: np.ndarray) -> np.ndarray:
    """Cell edges for pcolormesh-style extents from cell-center coordinates."""
    mids = 0.5 * (values[1:] + values[:-1])
    first = values[0] - (mids[0] - values[0])
    last = values[-1] + (values[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def _draw_heatmap(ax, grid: GridData, vmin=None, vmax=None):
    if grid.is_1d:
        raise PlotError(f"{grid.path}: heatmap needs a 2D grid, got a 1D trace")
    # axis1 horizontal (flux or frequency), axis2 vertical (drive amplitude)
    data = grid.cells.T
    cmap = plt.get_cmap(CMAP).copy()
    cmap.set_bad(BAD_COLOR)
    e1, e2 = _edges(grid.axis1), _edges(grid.axis2)
    im = ax.imshow(
        data,
        origin="lower",
        aspect="auto",
        interpolation="nearest",
        extent=(e1[0], e1[-1], e2[0], e2[-1]),
        cmap=cmap,
        vmin=vmin,
        vmax=vmax,
    )
    ax.set_xlabel(grid.axis1_label)
    ax.set_ylabel(grid.axis2_label)
    return im


def _render_trace(job: PlotJob, grid: GridData, fig):
    if not grid.is_1d:
        raise PlotError(f"{grid.path}: trace needs a 1D grid, got 2D")
    ax = fig.add_subplot(111)
    y = grid.cells[:, 0]
    ax.plot(grid.axis1, y, lw=1.2)
    k = int(np.ma.argmax(y))
    ax.annotate(
        f"peak {grid.axis1[k]:.6g}",
        xy=(grid.axis1[k], y[k]),
        xytext=(8, -4),
        textcoords="offset points",
        fontsize=8,
    )
    ax.set_xlabel(grid.axis1_label)
    ax.set_ylabel(grid.observable)
    ax.set_title(job.title or grid.observable)


def _render_heatmap(job: PlotJob, grid: GridData, fig):
    ax = fig.add_subplot(111)
    im = _draw_heatmap(ax, grid)
    fig.colorbar(im, ax=ax, label=grid.observable)
    ax.set_title(job.title or grid.observable)


def _render_panel_grid(job: PlotJob, grids: list[GridData], fig):
    for g in grids:
        if g.is_1d:
            raise PlotError(f"{g.path}: panel_grid needs 2D grids, got a 1D trace")
    vmin = min(float(g.cells.min()) for g in grids)
    vmax = max(float(g.cells.max()) for g in grids)
    n = len(grids)
    ncols = min(n, 2)
    nrows = (n + ncols - 1) // ncols
    im = None
    for k, g in enumerate(grids, start=1):
        ax = fig.add_subplot(nrows, ncols, k)
        im = _draw_heatmap(ax, g, vmin=vmin, vmax=vmax)
        ax.set_title(_panel_title(g), fontsize=8)
    fig.colorbar(im, ax=fig.axes, label=grids[0].observable, shrink=0.8)
    if job.title:
        fig.suptitle(job.title)


def build_figure(job: PlotJob):
    """Assemble the matplotlib figure for a job; returns (figure, grids)."""
    grids = [read_grid(p) for p in job.csv_paths]
    if job.kind == "panel_grid":
        width = 4.0 * min(len(grids), 2) + 1.5
        height = 3.2 * ((len(grids) + 1) // 2)
        fig = plt.figure(figsize=(width, height), dpi=DPI, layout="constrained")
        _render_panel_grid(job, grids, fig)
    else:
        fig = plt.figure(figsize=(6.4, 4.8), dpi=DPI)
        if job.kind == "trace":
            _render_trace(job, grids[0], fig)
            fig.tight_layout()
        else:
            _render_heatmap(job, grids[0], fig)
            fig.tight_layout()
    return fig, grids


def render(job: PlotJob) -> str:
    """Render a job to its output image path and return the path."""
    fig, _ = build_figure(job)
    try:
        fig.savefig(job.out_path, dpi=DPI, metadata={"Software": "figplots"})
    finally:
        plt.close(fig)
    return job.out_path
