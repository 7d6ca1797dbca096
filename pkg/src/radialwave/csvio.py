"""CSV artifacts: initial data, snapshots, energy histories, convergence
tables and quadrature tables.  Floats are written with 17 significant digits
so that every file round-trips exactly through :func:`read_csv`.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .core import ConfigError, ModelParams

FLOAT_FMT = "%.17g"

HEADERS = {
    ("t0", "n", "q", "k"): "initial-data",
    ("t", "r", "u"): "snapshots",
    ("t", "E"): "energy",
    ("N", "L2", "Linf"): "convergence",
    ("v", "x"): "quadrature",
}


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return FLOAT_FMT % float(x)


@dataclass
class InitialData:
    t0: float
    params: ModelParams
    r: np.ndarray
    u: np.ndarray
    ut: np.ndarray


@dataclass
class Table:
    kind: str
    header: tuple
    rows: np.ndarray


def _write(path, lines: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in lines:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    text = buf.getvalue()
    if path is None or path == "-":
        import sys
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_initial_data(path, data: InitialData) -> None:
    P = data.params
    lines = [("t0", "n", "q", "k"), (data.t0, P.n, P.q, P.k), ("r", "u", "ut")]
    lines += list(zip(data.r, data.u, data.ut))
    _write(path, lines)


def write_table(path, header: Sequence[str], rows) -> None:
    _write(path, [tuple(header)] + [tuple(r) for r in rows])


def write_snapshots(path, rows) -> None:
    write_table(path, ("t", "r", "u"), rows)


def write_energy(path, rows) -> None:
    write_table(path, ("t", "E"), rows)


def write_convergence(path, rows) -> None:
    write_table(path, ("N", "L2", "Linf"), rows)


def write_quadrature(path, rows) -> None:
    write_table(path, ("v", "x"), rows)


def _floats(row, lineno) -> list:
    try:
        return [float(c) for c in row]
    except ValueError:
        raise ConfigError(f"line {lineno}: non-numeric value in {row}") from None


def read_csv(path) -> Union[InitialData, Table]:
    """Parse any artifact written by this module, dispatching on the header."""
    text = Path(path).read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ConfigError(f"{path}: empty file")
    header = tuple(c.strip() for c in rows[0])
    kind = HEADERS.get(header)
    if kind is None:
        raise ConfigError(f"{path}: unrecognised header {','.join(header)}")
    if kind == "initial-data":
        if len(rows) < 3 or tuple(c.strip() for c in rows[2]) != ("r", "u", "ut"):
            raise ConfigError(f"{path}: initial data needs a values line and an r,u,ut header")
        t0, n, q, k = _floats(rows[1], 2)
        try:
            params = ModelParams(int(n), q, int(k))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        body = np.array([_floats(r, i + 4) for i, r in enumerate(rows[3:])], dtype=float).reshape(-1, 3)
        return InitialData(t0, params, body[:, 0], body[:, 1], body[:, 2])
    body = np.array([_floats(r, i + 2) for i, r in enumerate(rows[1:])], dtype=float)
    body = body.reshape(-1, len(header))
    return Table(kind, header, body)


def read_initial_data(path) -> InitialData:
    out = read_csv(path)
    if not isinstance(out, InitialData):
        raise ConfigError(f"{path}: expected initial data, found {out.kind}")
    return out
