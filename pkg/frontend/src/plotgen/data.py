"""Strict CSV loading for plot inputs.

Every input is fully validated before any figure work starts: required
columns must exist, every row must parse, and at least one data row must be
present.  A truncated or header-only file raises :class:`PlotDataError`, so
the CLI can fail without creating a partial output image.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


class PlotDataError(Exception):
    """Input CSV is missing, malformed, or empty."""


def read_csv_columns(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    """Load the required columns of a CSV as float arrays.

    Empty cells become NaN (optional columns like bound_log use them); any
    other unparseable cell, a missing column, or a file with no data rows is
    an error.
    """
    if not path.is_file():
        raise PlotDataError(f"missing data file: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotDataError(f"{path}: empty file") from None
        missing = [c for c in required if c not in header]
        if missing:
            raise PlotDataError(f"{path}: missing column(s) {', '.join(missing)}")
        idx = {c: header.index(c) for c in required}
        rows: list[list[float]] = []
        for ln, row in enumerate(reader, start=2):
            if row == []:
                continue
            if len(row) != len(header):
                raise PlotDataError(f"{path}: line {ln} has {len(row)} cells, expected {len(header)}")
            try:
                rows.append([float(row[idx[c]]) if row[idx[c]] != "" else float("nan") for c in required])
            except ValueError as exc:
                raise PlotDataError(f"{path}: line {ln}: {exc}") from None
    if not rows:
        raise PlotDataError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float64)
    return {c: data[:, j] for j, c in enumerate(required)}
