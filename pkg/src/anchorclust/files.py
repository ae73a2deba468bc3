"""CSV input and output.

Point files hold one point per row, ``f1,...,fd`` with an optional trailing
integer label. A first row that does not parse as numbers is taken as a
header and skipped. Blank lines are ignored. Label files hold one integer
per line.

Floats are written with 17 significant digits, which reproduces every
double exactly on reading.
"""

import csv
import math
from contextlib import nullcontext

import numpy as np

from .errors import DataError
from .geometry import PointSet

FLOAT_FORMAT = "%.17g"


def _parse_float(text, lineno, path):
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"{path}:{lineno}: cannot parse {text.strip()!r} as a number") from None
    if not math.isfinite(value):
        raise DataError(f"{path}:{lineno}: non-finite value {text.strip()!r}")
    return value


def _parse_label(text, lineno, path):
    try:
        value = int(text.strip())
    except ValueError:
        raise DataError(f"{path}:{lineno}: label {text.strip()!r} is not an integer") from None
    if value < 0:
        raise DataError(f"{path}:{lineno}: label {value} is negative")
    return value


def _looks_numeric(fields):
    try:
        for f in fields:
            float(f)
    except ValueError:
        return False
    return True


def load_points(path, has_labels=False):
    """Read a point CSV into a PointSet.

    Raises DataError on an empty file, ragged rows, unparseable or
    non-finite values, naming the offending line.
    """
    rows, labels, width = [], [], None
    with open(path, newline="") as fh:
        first = True
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if first:
                first = False
                if not _looks_numeric(fields):
                    continue
            if width is None:
                width = len(fields)
                if has_labels and width < 2:
                    raise DataError(f"{path}:{lineno}: a labeled row needs at least one coordinate and a label")
            elif len(fields) != width:
                raise DataError(f"{path}:{lineno}: expected {width} fields, found {len(fields)} (ragged row)")
            coords = fields[:-1] if has_labels else fields
            rows.append([_parse_float(f, lineno, path) for f in coords])
            if has_labels:
                labels.append(_parse_label(fields[-1], lineno, path))
    if not rows:
        raise DataError(f"{path}: no data rows")
    return PointSet(np.array(rows, dtype=np.float64), np.array(labels, dtype=np.int64) if has_labels else None)


def _sink(target):
    # a path, or an already open text stream
    if hasattr(target, "write"):
        return nullcontext(target)
    return open(target, "w", newline="")


def write_points(target, points):
    """Write a PointSet (labels as the last column when present)."""
    X = points.points
    with _sink(target) as fh:
        for i in range(points.n):
            row = ",".join(FLOAT_FORMAT % v for v in X[i])
            if points.has_labels:
                row += f",{int(points.labels[i])}"
            fh.write(row + "\n")


def write_labels(target, labels):
    with _sink(target) as fh:
        fh.writelines(f"{int(v)}\n" for v in np.asarray(labels))


def read_labels(path):
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                out.append(_parse_label(line, lineno, path))
    if not out:
        raise DataError(f"{path}: no labels")
    return np.array(out, dtype=np.int64)
