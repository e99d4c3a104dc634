"""Render qrsim sweep CSV grids into publication-style figures."""

from .csvio import GridData, read_grid, read_sidecar
from .render import PlotJob, PlotError, render

__version__ = "0.1.0"

__all__ = ["GridData", "PlotJob", "PlotError", "read_grid", "read_sidecar", "render"]
