"""Ancilla codes from cyclic covers of the torus.

A logical loop on the d x d torus lifts to a path in the plane ending at a
translate of its start by ``t = (d*r, d*s)``. The cylinder obtained by
quotienting the plane by that translation covers the torus, and a finite
band around the lifted loop is a surface code whose single Z-logical maps
onto the loop. The band never needs the whole cylinder: cells are
generated from planar coordinates and identified modulo ``t``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cell2 import CellComplex2, EdgePath, build_torus, close_rough_boundaries, css_of_complex, surface_distance
from .errors import CellComplexError, ContractibleLoop
from .f2la import BitMatrix

_STEPS = ((1, 0), (0, 1))


@dataclass(frozen=True)
class Deck:
    """Translation by ``(d*r, d*s)`` of the plane covering a d x d torus."""

    r: int
    s: int

    @property
    def is_trivial(self) -> bool:
        return self.r == 0 and self.s == 0

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.r, self.s) == 1


def _torus_size(torus: CellComplex2) -> int:
    if torus.meta.get("shape") != "torus":
        raise CellComplexError("covering construction expects a complex from build_torus")
    return int(torus.meta["d"])


def _edge_step(d: int, e: int, o: int) -> tuple[int, int]:
    """Planar displacement of a torus edge step."""
    dx, dy = _STEPS[0] if e < d * d else _STEPS[1]
    return dx * o, dy * o


def lift_path(torus: CellComplex2, path: EdgePath, origin: tuple[int, int] | None = None) -> list[tuple[int, int]]:
    """Planar vertex positions of the lift of ``path``."""
    d = _torus_size(torus)
    if origin is None:
        origin = (path.start % d, path.start // d)
    x, y = origin
    pts = [(x, y)]
    for e, o in path.steps:
        dx, dy = _edge_step(d, e, o)
        x, y = x + dx, y + dy
        pts.append((x, y))
    return pts


def lift_deck(torus: CellComplex2, loop: EdgePath) -> Deck:
    """Deck translation connecting the two ends of the lifted loop."""
    d = _torus_size(torus)
    if not loop.is_loop:
        raise CellComplexError("lift_deck needs a closed walk")
    pts = lift_path(torus, loop)
    dx, dy = pts[-1][0] - pts[0][0], pts[-1][1] - pts[0][1]
    return Deck(dx // d, dy // d)


class _Quotient:
    """Z^2 modulo a nonzero translation ``t``; keys are canonical labels."""

    def __init__(self, t: tuple[int, int]):
        a, b = t
        self.g = math.gcd(a, b)
        self.u = (a // self.g, b // self.g)
        # Bezout pair so that (p, q) . u == 1
        p, q = _bezout(*self.u)
        self.pq = (p, q)

    def key(self, pt: tuple[int, int]) -> tuple[int, int]:
        ux, uy = self.u
        alpha = ux * pt[1] - uy * pt[0]
        beta = self.pq[0] * pt[0] + self.pq[1] * pt[1]
        return alpha, beta % self.g


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True, eq=False)
class CellMap:
    """Cellular map from ``source`` onto ``target`` given on each cell type.

    ``edge_map[j] == -1`` sends source edge j to zero (used for edges added
    while closing boundaries). Vertex and face maps are total.
    """

    source: CellComplex2
    target: CellComplex2
    vertex_map: np.ndarray
    edge_map: np.ndarray
    face_map: np.ndarray

    def __post_init__(self):
        for name, arr, size, tsize in (
            ("vertex_map", self.vertex_map, self.source.n_vertices, self.target.n_vertices),
            ("edge_map", self.edge_map, self.source.n_edges, self.target.n_edges),
            ("face_map", self.face_map, self.source.n_faces, self.target.n_faces),
        ):
            arr = np.asarray(arr, dtype=np.int64)
            if arr.shape != (size,):
                raise CellComplexError(f"{name} has shape {arr.shape}, expected ({size},)")
            if arr.size and (arr.max() >= tsize or arr.min() < -1):
                raise CellComplexError(f"{name} points outside the target")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @staticmethod
    def _matrix(index: np.ndarray, rows: int) -> BitMatrix:
        m = np.zeros((rows, index.size), dtype=np.uint8)
        cols = np.flatnonzero(index >= 0)
        m[index[cols], cols] = 1
        return BitMatrix.from_array(m, cols=index.size)

    def gamma0(self) -> BitMatrix:
        return self._matrix(self.vertex_map, self.target.n_vertices)

    def gamma1(self) -> BitMatrix:
        return self._matrix(self.edge_map, self.target.n_edges)

    def gamma2(self) -> BitMatrix:
        return self._matrix(self.face_map, self.target.n_faces)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "vertex_map": self.vertex_map.tolist(),
            "edge_map": self.edge_map.tolist(),
            "face_map": self.face_map.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> CellMap:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            CellComplex2.from_json(obj["source"]),
            CellComplex2.from_json(obj["target"]),
            np.asarray(obj["vertex_map"]),
            np.asarray(obj["edge_map"]),
            np.asarray(obj["face_map"]),
        )


def identity_cellmap(m: CellComplex2) -> CellMap:
    return CellMap(m, m, np.arange(m.n_vertices), np.arange(m.n_edges), np.arange(m.n_faces))


class CellMapCertificate(NamedTuple):
    ok: bool
    face_residual: BitMatrix
    vertex_residual: BitMatrix
    bad_faces: list[int]
    bad_edges: list[int]
    walks_ok: bool


def verify_cellmap(cmap: CellMap) -> CellMapCertificate:
    """Check both commuting squares of the chain map exactly.

    ``face_residual = d2 g2 + g1 d2'`` and ``vertex_residual = g0 d1' + d1 g1``
    must vanish. Nonzero columns are reported as offending source faces and
    edges. ``walks_ok`` additionally checks that each source face boundary
    maps edge by edge onto its image face boundary, up to rotation and
    reversal.
    """
    src, tgt = cmap.source, cmap.target
    g0, g1, g2 = cmap.gamma0(), cmap.gamma1(), cmap.gamma2()
    face_res = tgt.boundary_2() @ g2 + g1 @ src.boundary_2()
    vert_res = g0 @ src.boundary_1() + tgt.boundary_1() @ g1
    bad_faces = np.flatnonzero(face_res.col_weights()).tolist()
    bad_edges = np.flatnonzero(vert_res.col_weights()).tolist()
    walks_ok = True
    for f, face in enumerate(src.faces):
        image = [int(cmap.edge_map[e]) for e in face]
        target = list(tgt.faces[int(cmap.face_map[f])])
        if not _same_cycle(image, target):
            walks_ok = False
            if f not in bad_faces:
                bad_faces.append(f)
    ok = not bad_faces and not bad_edges
    return CellMapCertificate(ok, face_res, vert_res, sorted(bad_faces), bad_edges, walks_ok)


def _same_cycle(a: list[int], b: list[int]) -> bool:
    if len(a) != len(b):
        return False
    n = len(a)
    for seq in (b, b[::-1]):
        for shift in range(n):
            if all(a[i] == seq[(i + shift) % n] for i in range(n)):
                return True
    return False


def gate_matrix(cmap: CellMap) -> BitMatrix:
    """Gate matrix: ancilla qubit j is a CNOT target of data qubit edge_map[j]."""
    return cmap.gamma1()


# construction ---------------------------------------------------------------


class CoveringAncilla(NamedTuple):
    ancilla: CellComplex2
    cellmap: CellMap
    lifted_loop: EdgePath
    deck: Deck
    width: int


def default_width(d: int) -> int:
    """Vertex rows on each side of the loop, counting the loop row itself."""
    return math.ceil((d - 1) / 2) + 1


def _band(torus: CellComplex2, loop: EdgePath, width: int) -> CoveringAncilla:
    d = _torus_size(torus)
    deck = lift_deck(torus, loop)
    quo = _Quotient((d * deck.r, d * deck.s))
    path = lift_path(torus, loop)

    # planar ball of radius width-1 around the lifted loop, modulo t
    radius = width - 1
    ball: dict[tuple[int, int], tuple[int, int]] = {}
    frontier = []
    for pt in path:
        k = quo.key(pt)
        if k not in ball:
            ball[k] = pt
            frontier.append(pt)
    for _ in range(radius):
        nxt = []
        for x, y in frontier:
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                q = (x + dx, y + dy)
                k = quo.key(q)
                if k not in ball:
                    ball[k] = q
                    nxt.append(q)
        frontier = nxt

    # faces with all four corners in the ball, edges from faces and the loop
    face_keys: dict[tuple[int, int], tuple[int, int]] = {}
    for k, (x, y) in ball.items():
        corners = [(x + 1, y), (x, y + 1), (x + 1, y + 1)]
        if all(quo.key(c) in ball for c in corners):
            face_keys[k] = (x, y)
    edge_keys: dict[tuple[tuple[int, int], int], tuple[int, int]] = {}

    def add_edge(pt: tuple[int, int], direction: int) -> None:
        edge_keys.setdefault((quo.key(pt), direction), pt)

    for x, y in (face_keys[k] for k in sorted(face_keys)):
        add_edge((x, y), 0)
        add_edge((x + 1, y), 1)
        add_edge((x, y + 1), 0)
        add_edge((x, y), 1)
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if x1 != x0:
            add_edge((min(x0, x1), y0), 0)
        else:
            add_edge((x0, min(y0, y1)), 1)

    used = sorted({quo.key(p) for (_, direction), p in edge_keys.items()} | {
        quo.key((p[0] + _STEPS[direction][0], p[1] + _STEPS[direction][1]))
        for (_, direction), p in edge_keys.items()
    })
    vindex = {k: i for i, k in enumerate(used)}
    vpos = [ball[k] for k in used]
    ekeys = sorted(edge_keys)
    eindex = {k: i for i, k in enumerate(ekeys)}
    edges = []
    for kk in ekeys:
        p = edge_keys[kk]
        step = _STEPS[kk[1]]
        edges.append((vindex[quo.key(p)], vindex[quo.key((p[0] + step[0], p[1] + step[1]))]))
    fkeys = sorted(face_keys)
    faces = []
    for k in fkeys:
        x, y = face_keys[k]
        faces.append(
            (
                eindex[quo.key((x, y)), 0],
                eindex[quo.key((x + 1, y)), 1],
                eindex[quo.key((x, y + 1)), 0],
                eindex[quo.key((x, y)), 1],
            )
        )
    meta = {"shape": "covering-band", "d": d, "deck": [deck.r, deck.s], "width": width}
    ancilla = CellComplex2(
        len(used), tuple(edges), tuple(faces), coords=tuple((float(x), float(y)) for x, y in vpos), meta=meta
    )

    def tv(pt: tuple[int, int]) -> int:
        return (pt[0] % d) + d * (pt[1] % d)

    vmap = np.array([tv(p) for p in vpos], dtype=np.int64)
    emap = np.array([tv(edge_keys[kk]) + (d * d if kk[1] else 0) for kk in ekeys], dtype=np.int64)
    fmap = np.array([tv(face_keys[k]) for k in fkeys], dtype=np.int64)
    cmap = CellMap(ancilla, torus, vmap, emap, fmap)

    lifted_edges = []
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if x1 != x0:
            lifted_edges.append(eindex[quo.key((min(x0, x1), y0)), 0])
        else:
            lifted_edges.append(eindex[quo.key((x0, min(y0, y1))), 1])
    lifted = EdgePath.from_edges(ancilla, lifted_edges, start=vindex[quo.key(path[0])])
    return CoveringAncilla(ancilla, cmap, lifted, deck, width)


def build_covering_ancilla(
    torus: CellComplex2, loop: EdgePath, width: int | None = None, max_width: int | None = None
) -> CoveringAncilla:
    """Band around the lifted loop in the cyclic cover defined by the loop.

    With ``width=None`` the band starts at :func:`default_width` and grows
    until the ancilla encodes one qubit with distance at least the torus
    distance. ``width=1`` keeps only the loop itself, which is the cat-state
    (repetition code) ancilla; this is allowed but warned about.
    """
    d = _torus_size(torus)
    if not loop.is_loop:
        raise CellComplexError("loop must be a closed walk")
    deck = lift_deck(torus, loop)
    if deck.is_trivial:
        raise ContractibleLoop("loop is contractible; it represents no logical operator")
    if not deck.is_primitive:
        warnings.warn(
            f"deck translation ({deck.r}, {deck.s}) is not primitive; the ancilla measures a product of logicals",
            stacklevel=2,
        )
    if width is not None:
        if width < 1:
            raise CellComplexError("width must be at least 1")
        if width == 1:
            warnings.warn("width 1 keeps only the loop: the ancilla is a repetition code", stacklevel=2)
        return _band(torus, loop, width)
    start = default_width(d)
    stop = max_width if max_width is not None else 2 * d + 2
    for w in range(start, stop + 1):
        cov = _band(torus, loop, w)
        code = css_of_complex(cov.ancilla)
        if code.k != 1:
            continue
        if min(surface_distance(cov.ancilla)) >= d:
            return cov
    raise CellComplexError(f"no width up to {stop} reaches ancilla distance {d}")


def rough_boundary_ancilla(patch: CellComplex2, keep) -> tuple[CellComplex2, BitMatrix]:
    """Ancilla made by closing every rough segment of ``patch`` outside ``keep``.

    Returns the ancilla complex and the gate matrix: old edges pair up with
    themselves and the closing edges get no CNOT.
    """
    ancilla = close_rough_boundaries(patch, keep)
    gamma = np.zeros((patch.n_edges, ancilla.n_edges), dtype=np.uint8)
    gamma[np.arange(patch.n_edges), np.arange(patch.n_edges)] = 1
    return ancilla, BitMatrix.from_array(gamma, cols=ancilla.n_edges)


__all__ = [
    "CellMap",
    "CellMapCertificate",
    "CoveringAncilla",
    "Deck",
    "build_covering_ancilla",
    "build_torus",
    "default_width",
    "gate_matrix",
    "identity_cellmap",
    "lift_deck",
    "lift_path",
    "rough_boundary_ancilla",
    "verify_cellmap",
]
