"""Text formats for tensors, pseudospectra grids and ODE trajectories.

Tensor files are ``key: value`` lines::

    format: tensor3
    m: 2
    p: 2
    n: 3
    real: 1.0 0.0 ...
    imag: 0.0 0.0 ...

``real`` and ``imag`` list ``m*p*n`` numbers in slice-major order,
column-major within a slice.  Floats are written with ``repr`` so a
save/load round trip is bit exact.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import MalformedFileError
from .tensor_core import Tensor3

__all__ = [
    "save_tensor", "load_tensor", "dumps_tensor", "loads_tensor",
    "write_grid", "read_grid", "grid_meta_path", "write_trajectory",
    "format_complex",
]

_FORMAT = "tensor3"
_KEYS = ("format", "m", "p", "n", "real", "imag")


def format_complex(z):
    """``a+bi`` with 17 significant digits."""
    z = complex(z)
    return "%.17g%+.17gi" % (z.real, z.imag)


def _fmt(x):
    return repr(float(x))


def dumps_tensor(t):
    flat = t.flat()
    lines = [
        "format: %s" % _FORMAT,
        "m: %d" % t.m,
        "p: %d" % t.p,
        "n: %d" % t.n,
        "real: " + " ".join(_fmt(v) for v in flat.real),
        "imag: " + " ".join(_fmt(v) for v in flat.imag),
    ]
    return "\n".join(lines) + "\n"


def save_tensor(path, t):
    Path(path).write_text(dumps_tensor(t))


def _parse_int(value, line, key):
    try:
        v = int(value)
    except ValueError:
        raise MalformedFileError("expected an integer, got %r" % value, line, key) from None
    if v < 1:
        raise MalformedFileError("dimension must be >= 1, got %d" % v, line, key)
    return v


def _parse_floats(value, line, key):
    out = []
    for pos, tok in enumerate(value.split(), 1):
        try:
            out.append(float(tok))
        except ValueError:
            raise MalformedFileError(
                "entry %d is not a number: %r" % (pos, tok), line, key) from None
    return np.array(out, dtype=float)


def loads_tensor(text):
    fields = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition(":")
        key = key.strip()
        if not sep:
            raise MalformedFileError("expected 'key: value'", lineno)
        if key not in _KEYS:
            raise MalformedFileError("unknown key", lineno, key)
        if key in fields:
            raise MalformedFileError("duplicate key", lineno, key)
        fields[key] = value.strip()
        lines[key] = lineno
    for key in _KEYS:
        if key not in fields:
            raise MalformedFileError("missing key", None, key)
    if fields["format"] != _FORMAT:
        raise MalformedFileError("unsupported format %r" % fields["format"], lines["format"], "format")
    m, p, n = (_parse_int(fields[k], lines[k], k) for k in ("m", "p", "n"))
    size = m * p * n
    parts = {}
    for key in ("real", "imag"):
        arr = _parse_floats(fields[key], lines[key], key)
        if arr.size != size:
            raise MalformedFileError(
                "expected %d values for a %dx%dx%d tensor, got %d" % (size, m, p, n, arr.size),
                lines[key], key)
        parts[key] = arr
    return Tensor3.from_flat(parts["real"] + 1j * parts["imag"], m, p, n)


def load_tensor(path):
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise MalformedFileError("not a text file: %s" % exc) from None
    return loads_tensor(text)


def grid_meta_path(path):
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


def write_grid(path, grid, provenance=None):
    """Write ``re,im,value`` rows (``im`` outer, ``re`` inner) plus metadata.

    The metadata record goes next to the CSV as ``<stem>.meta.json``.
    Returns the metadata path.
    """
    path = Path(path)
    re, im = grid.re, grid.im
    with path.open("w", newline="") as fh:
        fh.write("re,im,value\n")
        for iy in range(grid.ny):
            col = grid.values[:, iy]
            y = "%.17g" % im[iy]
            fh.writelines("%.17g,%s,%.17g\n" % (re[ix], y, col[ix]) for ix in range(grid.nx))
    norm = grid.norm
    meta = {
        "region": {"re_min": grid.re_min, "re_max": grid.re_max,
                   "im_min": grid.im_min, "im_max": grid.im_max},
        "resolution": {"nx": grid.nx, "ny": grid.ny},
        "norm": "inf" if norm == np.inf else str(norm),
        "epsilons": list(grid.epsilons),
        "order": "im outer, re inner",
        "value": "sigma_min" if norm == 2 else "1/resolvent_norm",
        "provenance": provenance or {},
    }
    meta.update({k: v for k, v in grid.meta.items() if k not in meta})
    mpath = grid_meta_path(path)
    mpath.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return mpath


def read_grid(path):
    """Return ``(re, im, value)`` column arrays and the metadata dict."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["re", "im", "value"]:
            raise MalformedFileError("bad grid header %r" % header, 1)
        rows = np.array([[float(x) for x in row] for row in reader])
    meta_path = grid_meta_path(path)
    meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    if rows.size == 0:
        rows = np.zeros((0, 3))
    return rows[:, 0], rows[:, 1], rows[:, 2], meta


def write_trajectory(path, solution):
    """Long-format CSV: ``t,i,j,k,re,im`` per state entry (0-based indices)."""
    with Path(path).open("w", newline="") as fh:
        fh.write("t,i,j,k,re,im\n")
        for t, state in zip(solution.times, solution.states):
            m, s, n = state.shape
            d = state.data
            for k in range(n):
                for j in range(s):
                    for i in range(m):
                        z = d[i, j, k]
                        fh.write("%.17g,%d,%d,%d,%.17g,%.17g\n" % (t, i, j, k, z.real, z.imag))
