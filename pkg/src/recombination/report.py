"""JSON and CSV emission.

All files are UTF-8 with LF line endings and sorted JSON keys.  Exact
numbers are written as ``"p/q"`` strings and float-mode numbers as JSON
numbers.  Partitions use the block syntax ``{1,3}{2}``.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .arith import format_number
from .chain import TransitionMatrix
from .partitions import Partition, format_partition
from .quasistationary import QuasiStationaryReport


def num(x):
    if isinstance(x, Fraction):
        return format_number(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    return x


def part(p: Partition) -> str:
    return format_partition(p)


def parts(ps: Iterable[Partition]) -> list:
    return [format_partition(p) for p in ps]


def matrix_json(states: Sequence[Partition], M: np.ndarray) -> dict:
    return {
        "states": parts(states),
        "matrix": [[num(x) for x in row] for row in M],
    }


def closure_json(P: TransitionMatrix) -> dict:
    rho = P.rho
    return {
        "count": P.size,
        "states": parts(P.space.states),
        "absorbing": part(P.space[P.space.absorbing]),
        "support": parts(rho.support),
        "coarsestAdded": rho.coarsest_weight() == 0,
        "degenerate": P.space.absorbing == P.space.start,
    }


def qsd_json(r: QuasiStationaryReport) -> dict:
    out = {
        "degenerate": r.degenerate,
        "delta": parts(r.delta),
    }
    if r.degenerate:
        out.update({
            "absorptionBound": r.absorption_bound,
            "notice": r.notice,
            "eta": None, "beta0": None, "F": [], "phi": {}, "Q": None,
            "quasiLimiting": {}, "limitConstant": None,
        })
        return out
    out.update({
        "eta": num(r.eta),
        "beta0": num(r.beta0),
        "theta": num(r.theta),
        "F": parts(r.F),
        "phi": {part(s): num(v) for s, v in zip(r.transient, r.phi)},
        "boundary": parts(r.boundary),
        "Q": matrix_json(r.boundary, r.Q),
        "quasiLimiting": {part(s): num(v) for s, v in zip(r.transient, r.quasi_limiting)},
        "limitConstant": num(r.limit_constant),
    })
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def csv_text(header: Sequence, rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _cell(x):
    x = num(x)
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else x


def matrix_csv(P: TransitionMatrix) -> str:
    states = parts(P.space.states)
    return csv_text(["state"] + states, ([s] + list(row) for s, row in zip(states, P.matrix)))


def series_csv(states: Sequence[Partition], series: Sequence[np.ndarray], absorbing: int) -> str:
    one = series[0].sum()
    rows = ([n] + list(b) + [one - b[absorbing]] for n, b in enumerate(series))
    return csv_text(["n"] + parts(states) + ["survival"], rows)


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
