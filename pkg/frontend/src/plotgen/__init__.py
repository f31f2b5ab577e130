"""Batch renderer for recspec experiment artifacts.

Reads the CSV files written by the ``recspec`` CLI and renders the standard
figure layouts (radius histograms, matrix-power norms, hidden-state norms,
real-vs-complex overlays).  A preset names the panel grid and the data files
it expects inside ``--data-dir``; rendering is read-only and deterministic.
"""

from .data import PlotDataError, read_csv_columns
from .figures import PRESETS, FigureSpec, PanelSpec, build_figure, render

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "PanelSpec",
    "PlotDataError",
    "PRESETS",
    "build_figure",
    "read_csv_columns",
    "render",
]
