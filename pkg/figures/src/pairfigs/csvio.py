"""Readers for the simulator CSV formats (spectra and sweep summaries)."""

import os

import numpy as np


class FigureInputError(Exception):
    pass


def read_csv(path):
    """Parse a simulator CSV: '#' metadata lines, a header row, data rows.

    Returns (meta, columns, array) with the array shaped (rows, columns).
    Non-numeric cells (the status column of sweep summaries) come back as nan.
    """
    if not os.path.exists(path):
        raise FigureInputError(f"input CSV does not exist: {path}")
    meta = {}
    columns = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = val.strip()
                continue
            cells = line.split(",")
            if columns is None:
                try:
                    [float(c) for c in cells]
                except ValueError:
                    columns = cells
                    continue
                columns = [f"col{i}" for i in range(len(cells))]
            row = []
            for c in cells:
                try:
                    row.append(float(c))
                except ValueError:
                    row.append(np.nan)
            rows.append(row)
    if not rows:
        raise FigureInputError(f"no data rows in {path}")
    return meta, columns or [], np.asarray(rows)


def read_spectrum(path):
    """Two-column spectrum CSV -> dict(axis, values, kind, meta)."""
    meta, columns, data = read_csv(path)
    if data.shape[1] != 2:
        raise FigureInputError(
            f"{path}: expected a two-column spectrum, got columns {columns}")
    return {"axis": data[:, 0], "values": data[:, 1],
            "kind": meta.get("kind", "momentum"), "meta": meta, "path": path}


def read_summary(path):
    """Sweep summary CSV -> (meta, dict of named columns)."""
    meta, columns, data = read_csv(path)
    return meta, {name: data[:, i] for i, name in enumerate(columns)}
