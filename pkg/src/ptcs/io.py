"""CSV/JSON/PNG emission for grids, trajectories and matrices.

CSV is the canonical data format: 17-significant-digit decimals give
lossless double round-trips, and grid metadata travels as '#'-prefixed
header comments.  PNG rendering is a thin leaf feature; it never influences
numerical results.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import PhaseSpaceDistribution

__all__ = [
    "emit_grid",
    "read_grid",
    "emit_trajectory",
    "read_trajectory",
    "emit_matrix_json",
    "render_heatmap",
]

FMT = "%.17g"


class CsvFormatError(ValueError):
    """Malformed CSV input, with line number context."""


def emit_grid(dist: PhaseSpaceDistribution, path, q_scale: float = 1.0,
              p_scale: float = 1.0, rho_scale: float = 1.0):
    """Write a distribution as CSV with header ``q,p,rho``, row-major in q then p.

    Scales convert the dimensionless axes to the caller's units.
    """
    if dist.values.size == 0:
        raise ValueError("refusing to emit an empty grid")
    path = Path(path)
    try:
        with open(path, "w") as fh:
            for key, val in sorted(dist.meta.items()):
                fh.write(f"# {key} = {val}\n")
            fh.write("q,p,rho\n")
            for i, tq in enumerate(dist.tqs):
                for j, pt in enumerate(dist.pts):
                    fh.write((FMT + "," + FMT + "," + FMT + "\n")
                             % (tq * q_scale, pt * p_scale,
                                dist.values[i, j] * rho_scale))
    except OSError as exc:
        raise OSError(f"failed writing grid to {path}: {exc}") from exc


def read_grid(path):
    """Read an emitted grid CSV back into (q, p, rho) arrays and metadata."""
    meta, rows = {}, []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    key, _, val = line[1:].partition("=")
                    meta[key.strip()] = val.strip()
                continue
            if line == "q,p,rho":
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise CsvFormatError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise CsvFormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2], meta


def emit_trajectory(points: np.ndarray, path, q_scale: float = 1.0,
                    p_scale: float = 1.0, meta: dict | None = None):
    """Write trajectory rows as CSV with header ``q,p``."""
    path = Path(path)
    with open(path, "w") as fh:
        for key, val in sorted((meta or {}).items()):
            fh.write(f"# {key} = {val}\n")
        fh.write("q,p\n")
        for tq, pt in points:
            fh.write((FMT + "," + FMT + "\n") % (tq * q_scale, pt * p_scale))


def read_trajectory(path):
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#") or line == "q,p":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvFormatError(f"{path}:{lineno}: expected 2 columns")
            rows.append([float(p) for p in parts])
    return np.array(rows)


def emit_matrix_json(matrix: np.ndarray, path):
    """Write a complex matrix as {"nmax": ..., "re": [[...]], "im": [[...]]}."""
    matrix = np.asarray(matrix, dtype=complex)
    payload = {"nmax": matrix.shape[0] - 1,
               "re": matrix.real.tolist(),
               "im": matrix.imag.tolist()}
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def render_heatmap(grid_csv, out_png, overlay_csv=None):
    """Raster heatmap of a grid CSV, blue-to-red ramp over [0, max rho].

    A degenerate (constant) grid maps to the middle of the ramp.  The
    optional overlay CSV is drawn as a thick curve.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import LinearSegmentedColormap

    q, p, rho, meta = read_grid(grid_csv)
    qs = np.unique(q)
    ps = np.unique(p)
    grid = rho.reshape(len(qs), len(ps))
    cmap = LinearSegmentedColormap.from_list(
        "blue_red", ["#0000ff", "#00ffff", "#ffff00", "#ff0000"])
    vmax = float(grid.max())
    if vmax <= grid.min():
        # flat input: guard the color range and show mid-ramp
        grid = np.full_like(grid, 0.5)
        vmin, vmax = 0.0, 1.0
    else:
        vmin = 0.0
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.pcolormesh(qs, ps, grid.T, cmap=cmap, vmin=vmin, vmax=vmax,
                       shading="auto")
    fig.colorbar(im, ax=ax, label="rho")
    if overlay_csv is not None:
        traj = read_trajectory(overlay_csv)
        ax.plot(traj[:, 0], traj[:, 1], "k-", linewidth=2.5)
    units = meta.get("units", "dimensionless")
    ax.set_xlabel(f"q [{units}]")
    ax.set_ylabel(f"p [{units}]")
    ax.set_title(meta.get("kind", "phase-space distribution"))
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
