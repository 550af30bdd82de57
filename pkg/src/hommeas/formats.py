"""On-disk formats: JSON for codes, complexes, maps and gadgets; CSV results.

All JSON is written with sorted keys and a trailing newline so that equal
objects serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .cell2 import CellComplex2
from .cover import CellMap
from .csscode import CssCode
from .f2la import BitMatrix
from .gadget import HomGadget, validate

RESULT_COLUMNS = (
    "gadget",
    "protocol",
    "p",
    "trials",
    "readout_errors",
    "data_errors",
    "rate",
    "ci_low",
    "ci_high",
    "seed",
)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path: str | Path):
    return json.loads(Path(path).read_text())


def read_matrix(path: str | Path) -> BitMatrix:
    """Matrix text file: ``rows cols`` on the first line, then 0/1 rows."""
    return BitMatrix.from_text(Path(path).read_text())


def write_matrix(path: str | Path, m: BitMatrix) -> None:
    Path(path).write_text(m.to_text())


def read_code(path: str | Path) -> CssCode:
    return CssCode.from_json(read_json(path))


def read_complex(path: str | Path) -> CellComplex2:
    return CellComplex2.from_json(read_json(path))


def gadget_to_json(g: HomGadget, meta: Mapping | None = None) -> dict:
    out = {
        "data": g.data.to_json(),
        "ancilla": g.ancilla.to_json(),
        "gamma": {"rows": g.gamma.rows, "cols": g.gamma.cols, "bits": g.gamma.to_strings()},
        "meta": dict(meta or {}),
    }
    if isinstance(g.origin, CellMap):
        out["cellmap"] = g.origin.to_json()
    return out


def gadget_from_json(obj: dict | str) -> HomGadget:
    """Load and validate a gadget bundle."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    gm = obj["gamma"]
    gamma = BitMatrix.from_strings(gm["bits"], cols=int(gm["cols"])) if gm["rows"] else BitMatrix.zeros(0, int(gm["cols"]))
    origin = CellMap.from_json(obj["cellmap"]) if obj.get("cellmap") else None
    return validate(CssCode.from_json(obj["data"]), CssCode.from_json(obj["ancilla"]), gamma, origin)


def read_gadget(path: str | Path) -> tuple[HomGadget, dict]:
    obj = read_json(path)
    return gadget_from_json(obj), obj.get("meta", {})


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def results_csv(rows: Iterable[Mapping]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in RESULT_COLUMNS])
    return buf.getvalue()


def parse_p_grid(spec: str) -> list[float]:
    """Noise grid from ``lo:hi:log10[:N]``, ``lo:hi:lin[:N]`` or ``a,b,c``.

    Ranges include both ends and default to 5 points.
    """
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4) or parts[2] not in ("log10", "lin"):
            raise ValueError(f"bad noise grid {spec!r}; expected lo:hi:log10[:N] or lo:hi:lin[:N]")
        lo, hi = float(parts[0]), float(parts[1])
        num = int(parts[3]) if len(parts) == 4 else 5
        if num < 1:
            raise ValueError("grid needs at least one point")
        if parts[2] == "log10":
            if lo <= 0 or hi <= 0:
                raise ValueError("log10 grid needs positive end points")
            vals = np.logspace(math.log10(lo), math.log10(hi), num)
        else:
            vals = np.linspace(lo, hi, num)
        out = [float(f"{v:.6g}") for v in vals]
    else:
        out = [float(v) for v in spec.split(",") if v.strip()]
    for p in out:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"noise value {p} is outside [0, 1]")
    return out
