"""CSV and PGM writers. Output is byte-stable for identical inputs."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_semap_csv(path, semap) -> Path:
    """Matrix layout: first row x coordinates, first column y coordinates."""
    rows = [[y, *semap.se[i]] for i, y in enumerate(semap.ys)]
    return write_csv(path, ["y\\x", *(_fmt(x) for x in semap.xs)], rows)


def write_pgm(path, values, vmax: float) -> Path:
    """Binary 8-bit PGM, linear 0 -> 0 and ``vmax`` -> 255, first row at the top."""
    if vmax <= 0:
        raise ValueError("vmax must be positive")
    arr = np.asarray(values, dtype=float)
    img = np.clip(np.rint(arr / vmax * 255.0), 0, 255).astype(np.uint8)
    h, w = img.shape
    path = Path(path)
    path.write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(t) for t in dims.split())
    return np.frombuffer(rest, dtype=np.uint8, count=w * h).reshape(h, w)


def write_cdf_csv(path, cdf) -> Path:
    return write_csv(path, ["se_bps_hz", "probability"], zip(cdf.samples, cdf.probabilities))
