"""Figure specifications and strict CSV loading."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np


class RenderError(Exception):
    """Raised when an input CSV is missing, malformed, or truncated."""


@dataclass(frozen=True)
class FigureSpec:
    """One output image: which scenario panel it is, which CSVs feed it,
    where it goes, and how the axes are labeled."""

    scenario: str
    panel: str
    inputs: tuple          # (path, required_columns) pairs
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    styles: dict = field(default_factory=dict)


def load_table(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a CSV into named columns, enforcing the documented header and a
    rectangular, non-empty body."""
    if not os.path.isfile(path):
        raise RenderError(f"{path}: input file missing")
    with open(path) as fh:
        header_line = fh.readline().strip()
    if not header_line:
        raise RenderError(f"{path}: empty file")
    header = header_line.split(",")
    missing = [c for c in required if c not in header]
    if missing:
        raise RenderError(f"{path}: missing column(s) {missing}; "
                          f"header was {header_line!r}")
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise RenderError(f"{path}: malformed CSV body: {exc}") from exc
    if data.size == 0:
        raise RenderError(f"{path}: no data rows")
    if data.shape[1] != len(header):
        raise RenderError(f"{path}: row width {data.shape[1]} does not match "
                          f"header width {len(header)} (truncated file?)")
    return {name: data[:, i] for i, name in enumerate(header)}


def load_inputs(spec: FigureSpec) -> dict[str, dict[str, np.ndarray]]:
    """Load and validate every input of a spec before any image is written."""
    return {path: load_table(path, cols) for path, cols in spec.inputs}
