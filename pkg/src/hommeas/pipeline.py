"""End-to-end gadget construction and reporting on toric data codes.

These helpers glue the builders together the way the command line and the
demos use them: pick a torus and a loop, build the covering ancilla,
validate the gadget and collect every check into one report.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cell2 import CellComplex2, EdgePath, build_torus, css_of_complex, surface_distance, torus_loop
from .cover import CoveringAncilla, build_covering_ancilla, verify_cellmap
from .csscode import CssCode, same_z_class
from .f2la import BitMatrix
from .gadget import (
    HomGadget,
    check_conditions,
    effective_x_distance,
    measured_group,
    stabilizer_preservation_check,
    validate,
)

PRESETS = ("Z1", "Z2", "Z1Z2")


def resolve_loop(torus: CellComplex2, spec: str) -> EdgePath:
    """Preset name or comma-separated edge indices forming a closed walk."""
    if spec in PRESETS:
        return torus_loop(torus, spec)
    try:
        edges = [int(t) for t in spec.replace(" ", "").split(",") if t]
    except ValueError:
        raise ValueError(f"loop {spec!r} is neither a preset {PRESETS} nor an edge list") from None
    loop = EdgePath.from_edges(torus, edges)
    if not loop.is_loop:
        raise ValueError(f"edges {edges} do not close up")
    return loop


def dual_torus_permutation(d: int) -> np.ndarray:
    """Edge relabelling that turns the dual d x d torus into a standard one.

    ``sigma[e]`` is the edge of :func:`build_torus` playing the role of the
    dual of edge ``e``: horizontal (x, y) goes to vertical (x, y - 1) and
    vertical (x, y) to horizontal (x - 1, y). Under it, the face checks of
    the torus become vertex checks and vice versa.
    """
    sigma = np.empty(2 * d * d, dtype=np.int64)
    for y in range(d):
        for x in range(d):
            sigma[x + d * y] = d * d + x + d * ((y - 1) % d)
            sigma[d * d + x + d * y] = (x - 1) % d + d * y
    return sigma


def name_z_class(data: CssCode, torus: CellComplex2, vec: np.ndarray) -> str:
    """Name the coset of a data Z-operator by comparing with the presets."""
    if same_z_class(data, vec, np.zeros(data.n, dtype=np.uint8)):
        return "stabilizer"
    for name in PRESETS:
        if same_z_class(data, vec, torus_loop(torus, name).edge_vector()):
            return name
    return "other"


@dataclass
class GadgetBuild:
    d: int
    loop_spec: str
    torus: CellComplex2
    data: CssCode
    cover: CoveringAncilla
    gadget: HomGadget
    x_type: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def loop_weight(self) -> int:
        return int(self.cover.lifted_loop.edge_vector().sum()) if self.cover.lifted_loop.steps else 0


def build_covering_gadget(d: int, loop: str = "Z1", width: int | None = None, x_type: bool = False) -> GadgetBuild:
    """Covering-space gadget on the d x d torus.

    With ``x_type`` the loop is read on the dual lattice and the gadget
    measures an X-logical. It is stored in Z-measurement form on the dual
    code: data (H_Z, H_X), same ancilla, CNOT pattern relabelled.
    """
    torus = build_torus(d)
    data = css_of_complex(torus)
    path = resolve_loop(torus, loop)
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cov = build_covering_ancilla(torus, path, width)
    notes += [str(w.message) for w in caught]
    ancilla = css_of_complex(cov.ancilla)
    gamma = cov.cellmap.gamma1()
    if x_type:
        sigma = dual_torus_permutation(d)
        gamma = gamma.take_rows(sigma.tolist())
        g = validate(data.dual(), ancilla, gamma)
    else:
        g = validate(data, ancilla, gamma, origin=cov.cellmap)
    return GadgetBuild(d, loop, torus, data, cov, g, x_type, notes)


def gadget_report(b: GadgetBuild, effdist_length: int | None = None) -> dict:
    """Every verification result for a built gadget, as plain data."""
    g = b.gadget
    cond = check_conditions(g.data, g.ancilla, g.gamma)
    pres = stabilizer_preservation_check(g)
    cert = verify_cellmap(b.cover.cellmap)
    mg = measured_group(g)
    d_za, d_xa = surface_distance(b.cover.ancilla) if g.ancilla.k else (0, 0)
    d_anc = min(d_za, d_xa)
    if b.x_type:
        sigma = dual_torus_permutation(b.d)
        inv = np.argsort(sigma)
        names = [name_z_class(css_of_complex(b.torus), b.torus, mg.basis.row(i)[inv]) for i in range(mg.rank)]
        names = [n.replace("Z", "X") for n in names]
    else:
        names = [name_z_class(b.data, b.torus, mg.basis.row(i)) for i in range(mg.rank)]
    eff = effective_x_distance(g, max_length=effdist_length, check=False)
    gw = g.gamma.to_array()
    rows = gw.sum(axis=1)
    n, m, w, d = g.n, g.m, b.loop_weight, b.d
    return {
        "data": {"shape": "torus", "d": d, "n": n, "k": b.data.k},
        "loop": b.loop_spec,
        "measurement": "X" if b.x_type else "Z",
        "deck": [b.cover.deck.r, b.cover.deck.s],
        "width": b.cover.width,
        "condition1": cond.condition1,
        "condition2": cond.condition2,
        "stabilizers_preserved": pres.ok,
        "cellmap_commutes": cert.ok,
        "ancilla": {"n": m, "k": g.ancilla.k, "d_z": d_za, "d_x": d_xa, "d": d_anc},
        "measured_group": {
            "rank": mg.rank,
            "generators": [list(map(int, np.flatnonzero(mg.basis.row(i)))) for i in range(mg.rank)],
            "classes": names,
        },
        "effective_x_distance": {"value": eff.value, "exact": eff.exact, "lower_bound": eff.lower_bound},
        "fault_tolerant": eff.lower_bound >= min(d, d_anc) if d_anc else False,
        "gamma": {
            "max_row_weight": int(rows.max(initial=0)),
            "double_cover_rows": int((rows >= 2).sum()),
            "unused_data_qubits": int((rows == 0).sum()),
            "max_col_weight": int(gw.sum(axis=0).max(initial=0)),
        },
        "size": {"m": m, "n": n, "w": w, "d": d, "ratio": round(m * d / (n * w), 6) if w else None},
        "notes": list(b.notes),
    }


def format_report(rep: dict) -> str:
    def mark(ok: bool) -> str:
        return "pass" if ok else "FAIL"

    a, s, e, mg = rep["ancilla"], rep["size"], rep["effective_x_distance"], rep["measured_group"]
    lines = [
        f"data code        torus d={rep['data']['d']}  [[{rep['data']['n']},{rep['data']['k']},{rep['data']['d']}]]",
        f"loop             {rep['loop']} ({rep['measurement']}-type)  deck=({rep['deck'][0]},{rep['deck'][1]})  width={rep['width']}",
        f"condition 1      {mark(rep['condition1'])}   rs(H_Z' G^T) in rs(H_Z)",
        f"condition 2      {mark(rep['condition2'])}   rs(H_X G) in rs(H_X')",
        f"stabilizers      {mark(rep['stabilizers_preserved'])}   joint groups equal before and after",
        f"cell map         {mark(rep['cellmap_commutes'])}   both squares commute",
        f"ancilla          [[{a['n']},{a['k']},{a['d']}]]  d_z={a['d_z']} d_x={a['d_x']}",
        f"measured group   rank {mg['rank']}: {', '.join(mg['classes']) or '-'}",
        f"effective X dist {e['value']} ({'exact' if e['exact'] else 'lower bound ' + str(e['lower_bound'])})",
        f"gamma            max row weight {rep['gamma']['max_row_weight']}, "
        f"{rep['gamma']['double_cover_rows']} doubly covered, {rep['gamma']['unused_data_qubits']} unused",
        f"size             m={s['m']} n={s['n']} w={s['w']} d={s['d']} m*d/(n*w)={s['ratio']}",
    ]
    lines += [f"warning          {note}" for note in rep["notes"]]
    return "\n".join(lines) + "\n"


def size_table(ds=(3, 5), loops=PRESETS) -> list[dict]:
    """Ancilla size versus data size for every preset (auto width)."""
    out = []
    for d in ds:
        for loop in loops:
            b = build_covering_gadget(d, loop)
            n, m, w = b.gadget.n, b.gadget.m, b.loop_weight
            out.append({"d": d, "loop": loop, "m": m, "n": n, "w": w, "ratio": round(m * d / (n * w), 6)})
    return out
