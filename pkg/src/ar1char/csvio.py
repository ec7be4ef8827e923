"""CSV files: covariance sequences (lag,gamma), spectra (index,eigenvalue), paths (t,x).

Numbers are written with 17 significant digits so doubles round-trip exactly.
Files are written to a temporary sibling and renamed into place, so a failed
write never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import io
import os
import sys
import tempfile
from typing import Iterable, Sequence

import numpy as np

from .covariance import CovarianceSequence


def fmt(v: float) -> str:
    return f"{v:.17g}"


def render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_text(path, text: str) -> None:
    """Write atomically; ``None`` or ``"-"`` means standard output."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_covariance(path, lags: Sequence[int], values: Sequence[float]) -> None:
    write_text(path, render(("lag", "gamma"), zip((int(m) for m in lags), (float(v) for v in values))))


def write_spectrum(path, eigenvalues: Sequence[float]) -> None:
    write_text(path, render(("index", "eigenvalue"), enumerate(float(v) for v in eigenvalues)))


def write_path(path, values: Sequence[float]) -> None:
    write_text(path, render(("t", "x"), enumerate(float(v) for v in values)))


def _read(path, header: tuple[str, str]) -> tuple[list[int], list[float]]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        first = next(reader, None)
        if first is None or tuple(c.strip() for c in first) != header:
            raise ValueError(f"{path}: expected header {','.join(header)!r}, got {first!r}")
        keys, vals = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                keys.append(int(row[0]))
                vals.append(float(row[1]))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not keys:
        raise ValueError(f"{path}: no data rows")
    return keys, vals


def read_covariance(path) -> CovarianceSequence:
    lags, vals = _read(path, ("lag", "gamma"))
    if lags != list(range(len(lags))):
        raise ValueError(f"{path}: lags must run 0, 1, 2, ... without gaps")
    return CovarianceSequence(vals)


def read_path(path) -> np.ndarray:
    t, vals = _read(path, ("t", "x"))
    if t != list(range(len(t))):
        raise ValueError(f"{path}: time index must run 0, 1, 2, ... without gaps")
    return np.array(vals)
