"""Two-dimensional cellulations and the surface codes they define.

Vertices carry X-checks, edges carry qubits and faces carry Z-checks. A
rough boundary is a named chain of boundary vertices whose X-checks are
dropped; faces next to it are stored as open walks ending on those
vertices. Everything else is smooth.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .csscode import CssCode, min_distance_x, min_distance_z
from .errors import CellComplexError, KIsZero
from .f2la import BitMatrix


@dataclass(frozen=True, eq=False)
class CellComplex2:
    """A finite 2D cell complex with optional rough boundary segments.

    Attributes
    ----------
    n_vertices : int
    edges : tuple of (u, v)
        Endpoint pairs; parallel edges and loops are allowed.
    faces : tuple of tuples
        Edge indices in walk order around each face.
    rough : mapping from segment name to vertex tuple
        Vertices without an X-check, grouped into named boundary segments
        listed in boundary order.
    coords : optional tuple of (x, y)
        Vertex positions, used only for drawing and for covering maps.
    meta : mapping
        Builder parameters, e.g. ``{"shape": "torus", "d": 5}``.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]
    rough: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    coords: tuple[tuple[float, float], ...] | None = None
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "faces", tuple(tuple(int(e) for e in f) for f in self.faces))
        object.__setattr__(self, "rough", {k: tuple(int(v) for v in vs) for k, vs in self.rough.items()})
        nv, ne = self.n_vertices, len(self.edges)
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise CellComplexError(f"edge ({a}, {b}) has an endpoint out of range")
        seen: set[int] = set()
        for name, verts in self.rough.items():
            if seen & set(verts):
                raise CellComplexError(f"rough segment {name!r} overlaps another segment")
            seen |= set(verts)
        rough_vertices = seen
        incidence = np.zeros(ne, dtype=np.int64)
        for i, face in enumerate(self.faces):
            if not face:
                raise CellComplexError(f"face {i} is empty")
            for e in face:
                if not 0 <= e < ne:
                    raise CellComplexError(f"face {i} uses unknown edge {e}")
                incidence[e] += 1
            for e1, e2 in zip(face, face[1:]):
                if not set(self.edges[e1]) & set(self.edges[e2]):
                    raise CellComplexError(f"face {i}: edges {e1} and {e2} are not adjacent")
            odd = self._odd_vertices(face)
            if not odd <= rough_vertices:
                raise CellComplexError(f"face {i} is not closed (open at {sorted(odd)})")
        if (incidence > 2).any():
            raise CellComplexError(f"edge {int(np.argmax(incidence))} borders more than two faces")

    def _odd_vertices(self, face: Iterable[int]) -> set[int]:
        odd: set[int] = set()
        for e in face:
            a, b = self.edges[e]
            odd ^= {a}
            odd ^= {b}
        return odd

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def rough_vertices(self) -> set[int]:
        return {v for verts in self.rough.values() for v in verts}

    @property
    def checked_vertices(self) -> list[int]:
        rough = self.rough_vertices
        return [v for v in range(self.n_vertices) if v not in rough]

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def boundary_1(self) -> BitMatrix:
        """Full vertex-edge incidence, including rough vertices."""
        d1 = np.zeros((self.n_vertices, self.n_edges), dtype=np.uint8)
        for e, (a, b) in enumerate(self.edges):
            d1[a, e] ^= 1
            d1[b, e] ^= 1
        return BitMatrix.from_array(d1, cols=self.n_edges)

    def boundary_2(self) -> BitMatrix:
        d2 = np.zeros((self.n_edges, self.n_faces), dtype=np.uint8)
        for f, face in enumerate(self.faces):
            for e in face:
                d2[e, f] ^= 1
        return BitMatrix.from_array(d2, cols=self.n_faces)

    def faces_of_edge(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_edges)]
        for f, face in enumerate(self.faces):
            for e in face:
                out[e].append(f)
        return out

    def boundary_edges(self) -> dict[int, str]:
        """Edges on a boundary, tagged ``"rough"`` or ``"smooth"``."""
        rough = self.rough_vertices
        out = {}
        for e, fs in enumerate(self.faces_of_edge()):
            a, b = self.edges[e]
            if a in rough or b in rough:
                out[e] = "rough"
            elif len(fs) < 2:
                out[e] = "smooth"
        return out

    def vertex_neighbors(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(self.edges):
            adj[a].append((b, e))
            if a != b:
                adj[b].append((a, e))
        return adj

    def to_json(self) -> dict:
        return {
            "n_vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "faces": [list(f) for f in self.faces],
            "rough": {k: list(v) for k, v in sorted(self.rough.items())},
            "boundary_edges": {str(e): t for e, t in sorted(self.boundary_edges().items())},
            "coords": None if self.coords is None else [list(c) for c in self.coords],
            "meta": dict(self.meta),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> CellComplex2:
        if isinstance(obj, str):
            obj = json.loads(obj)
        coords = obj.get("coords")
        return cls(
            n_vertices=int(obj["n_vertices"]),
            edges=tuple(tuple(e) for e in obj["edges"]),
            faces=tuple(tuple(f) for f in obj["faces"]),
            rough=obj.get("rough", {}),
            coords=None if coords is None else tuple(tuple(c) for c in coords),
            meta=obj.get("meta", {}),
        )


def css_of_complex(m: CellComplex2) -> CssCode:
    """Surface code of ``m``: X-checks on checked vertices, Z-checks on faces."""
    h_x = m.boundary_1().take_rows(m.checked_vertices)
    return CssCode(h_x, m.boundary_2().T)


# paths ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EdgePath:
    """Walk on a complex as (edge, orientation) steps.

    Orientation ``+1`` traverses ``edges[e]`` from its first endpoint to its
    second. A loop is a path whose end equals its start.
    """

    complex: CellComplex2
    start: int
    steps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(e), int(o)) for e, o in self.steps))
        u = self.start
        for e, o in self.steps:
            a, b = self.complex.edges[e]
            if o == 1 and a == u:
                u = b
            elif o == -1 and b == u:
                u = a
            else:
                raise CellComplexError(f"step ({e}, {o}) does not leave vertex {u}")

    @classmethod
    def from_edges(cls, cx: CellComplex2, edges: Sequence[int], start: int | None = None) -> EdgePath:
        """Infer orientations; ``start`` defaults to an endpoint of the first edge."""
        if not edges:
            if start is None:
                raise CellComplexError("an empty path needs an explicit start vertex")
            return cls(cx, start)
        starts = [start] if start is not None else list(dict.fromkeys(cx.edges[edges[0]]))
        for s in starts:
            u, steps = s, []
            for e in edges:
                a, b = cx.edges[e]
                if a == u:
                    steps.append((e, 1))
                    u = b
                elif b == u:
                    steps.append((e, -1))
                    u = a
                else:
                    break
            else:
                return cls(cx, s, tuple(steps))
        raise CellComplexError(f"edges {list(edges)} do not form a walk")

    @property
    def vertices(self) -> list[int]:
        out = [self.start]
        for e, o in self.steps:
            a, b = self.complex.edges[e]
            out.append(b if o == 1 else a)
        return out

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def is_loop(self) -> bool:
        return self.end == self.start

    def __len__(self) -> int:
        return len(self.steps)

    def edge_vector(self) -> np.ndarray:
        v = np.zeros(self.complex.n_edges, dtype=np.uint8)
        for e, _ in self.steps:
            v[e] ^= 1
        return v

    def reversed(self) -> EdgePath:
        return EdgePath(self.complex, self.end, tuple((e, -o) for e, o in reversed(self.steps)))

    def rebased(self, vertex: int) -> EdgePath:
        """The same loop started at ``vertex``, which must lie on it."""
        if not self.is_loop:
            raise CellComplexError("only loops can be rebased")
        verts = self.vertices[:-1]
        if vertex not in verts:
            raise CellComplexError(f"vertex {vertex} is not on the loop")
        i = verts.index(vertex)
        return EdgePath(self.complex, vertex, self.steps[i:] + self.steps[:i])

    def __add__(self, other: EdgePath) -> EdgePath:
        if other.complex is not self.complex or other.start != self.end:
            raise CellComplexError("paths do not concatenate")
        return EdgePath(self.complex, self.start, self.steps + other.steps)


def shortest_path(m: CellComplex2, u: int, v: int) -> EdgePath:
    adj = m.vertex_neighbors()
    parent: dict[int, tuple[int, int]] = {u: (-1, -1)}
    queue = deque([u])
    while queue and v not in parent:
        a = queue.popleft()
        for b, e in adj[a]:
            if b not in parent:
                parent[b] = (a, e)
                queue.append(b)
    if v not in parent:
        raise CellComplexError(f"vertices {u} and {v} are not connected")
    edges = []
    node = v
    while node != u:
        node, e = parent[node]
        edges.append(e)
    return EdgePath.from_edges(m, edges[::-1], start=u)


def compose_loops(l1: EdgePath, p: EdgePath, l2: EdgePath) -> EdgePath:
    """The loop l1 . p . l2 . reverse(p), based at the start of ``p``.

    As an edge vector it equals l1 + l2 because p is traversed twice.
    """
    if not (l1.is_loop and l2.is_loop):
        raise CellComplexError("l1 and l2 must be loops")
    if not (l1.complex is p.complex is l2.complex):
        raise CellComplexError("loops and path live on different complexes")
    v1, v2 = p.start, p.end
    on1 = l1.vertices if l1.steps else [l1.start]
    on2 = l2.vertices if l2.steps else [l2.start]
    if v1 not in on1:
        raise CellComplexError(f"path starts at {v1}, which is not on l1")
    if v2 not in on2:
        raise CellComplexError(f"path ends at {v2}, which is not on l2")
    a = l1.rebased(v1) if l1.steps else l1
    b = l2.rebased(v2) if l2.steps else l2
    return a + p + b + p.reversed()


# distances ------------------------------------------------------------------


def surface_distance(m: CellComplex2) -> tuple[int, int]:
    """(d_Z, d_X) as shortest nontrivial primal cycle and dual cut."""
    code = css_of_complex(m)
    if code.k == 0:
        raise KIsZero("complex encodes no logical qubits")
    return (min_distance_z(code, method="graph").value, min_distance_x(code, method="graph").value)


# builders -------------------------------------------------------------------


def build_torus(d: int) -> CellComplex2:
    """d x d square cellulation of the torus; edge ``x + d*y`` is horizontal
    from (x, y), edge ``d*d + x + d*y`` vertical, face ``x + d*y`` has lower
    left corner (x, y)."""
    if d < 2:
        raise CellComplexError("torus size must be at least 2")

    def vid(x: int, y: int) -> int:
        return (x % d) + d * (y % d)

    edges = [(vid(x, y), vid(x + 1, y)) for y in range(d) for x in range(d)]
    edges += [(vid(x, y), vid(x, y + 1)) for y in range(d) for x in range(d)]
    faces = [
        (vid(x, y), d * d + vid(x + 1, y), vid(x, y + 1), d * d + vid(x, y))
        for y in range(d)
        for x in range(d)
    ]
    coords = tuple((float(x), float(y)) for y in range(d) for x in range(d))
    return CellComplex2(d * d, tuple(edges), tuple(faces), coords=coords, meta={"shape": "torus", "d": d})


def build_cylinder(circumference: int, height_vertices: int) -> CellComplex2:
    """Circle of length ``c`` times a segment with ``h`` vertex rows.

    Both ends are smooth. ``h == 1`` gives the bare circle (a repetition code).
    """
    c, h = circumference, height_vertices
    if c < 2 or h < 1:
        raise CellComplexError(f"invalid cylinder size c={c}, h={h}")

    def vid(x: int, y: int) -> int:
        return (x % c) + c * y

    edges = [(vid(x, y), vid(x + 1, y)) for y in range(h) for x in range(c)]
    edges += [(vid(x, y), vid(x, y + 1)) for y in range(h - 1) for x in range(c)]
    nh = c * h
    faces = [
        (vid(x, y), nh + vid(x + 1, y), vid(x, y + 1), nh + vid(x, y))
        for y in range(h - 1)
        for x in range(c)
    ]
    coords = tuple((float(x), float(y)) for y in range(h) for x in range(c))
    return CellComplex2(
        c * h, tuple(edges), tuple(faces), coords=coords, meta={"shape": "cylinder", "c": c, "h": h}
    )


def build_planar_patch(
    width: int, height: int, rough: Mapping[str, tuple[str, int, int]] | None = None
) -> CellComplex2:
    """Rectangular patch with vertex grid ``(width+1) x (height+1)``.

    ``rough`` maps a segment name to ``(side, y_lo, y_hi)`` with side
    ``"left"`` or ``"right"``; those vertices lose their X-checks. Top and
    bottom are always smooth. A boundary edge between two rough vertices is
    omitted, so adjacent faces become open walks.
    """
    rough = dict(rough or {})
    W, H = width, height
    if W < 1 or H < 1:
        raise CellComplexError("patch needs positive width and height")

    def vid(x: int, y: int) -> int:
        return x + (W + 1) * y

    segments: dict[str, tuple[int, ...]] = {}
    for name, (side, lo, hi) in rough.items():
        if side not in ("left", "right") or not 0 <= lo <= hi <= H:
            raise CellComplexError(f"bad rough segment {name!r}: {(side, lo, hi)}")
        x = 0 if side == "left" else W
        segments[name] = tuple(vid(x, y) for y in range(lo, hi + 1))
    unchecked = {v for vs in segments.values() for v in vs}

    edges: list[tuple[int, int]] = []
    hidx: dict[tuple[int, int], int] = {}
    vidx: dict[tuple[int, int], int] = {}
    for y in range(H + 1):
        for x in range(W):
            hidx[x, y] = len(edges)
            edges.append((vid(x, y), vid(x + 1, y)))
    for y in range(H):
        for x in range(W + 1):
            a, b = vid(x, y), vid(x, y + 1)
            if 0 < x < W or a not in unchecked or b not in unchecked:
                vidx[x, y] = len(edges)
                edges.append((a, b))

    faces = []
    for y in range(H):
        for x in range(W):
            bottom, top = hidx[x, y], hidx[x, y + 1]
            right, left = vidx.get((x + 1, y)), vidx.get((x, y))
            if left is None and right is None:
                raise CellComplexError(f"face ({x}, {y}) would lose both vertical sides")
            if left is None:
                faces.append((bottom, right, top))
            elif right is None:
                faces.append((top, left, bottom))
            else:
                faces.append((bottom, right, top, left))
    coords = tuple((float(x), float(y)) for y in range(H + 1) for x in range(W + 1))
    meta = {"shape": "planar", "width": W, "height": H}
    return CellComplex2((W + 1) * (H + 1), tuple(edges), tuple(faces), segments, coords, meta)


def build_square() -> CellComplex2:
    """A single square face with smooth boundary; encodes nothing."""
    return build_planar_patch(1, 1)


def planar_two_qubit_patch(d: int = 3) -> CellComplex2:
    """Planar patch with three rough segments, encoding two logical qubits.

    The left side is one rough segment; the right side holds two rough
    segments, ``right_upper`` and ``right_lower``, separated by a smooth
    stretch. Z1 runs from ``left`` to ``right_upper``, Z2 from ``left`` to
    ``right_lower``.
    """
    if d < 2:
        raise CellComplexError("patch distance must be at least 2")
    height = 3 * d - 1
    rough = {
        "left": ("left", 0, height),
        "right_lower": ("right", 0, d - 1),
        "right_upper": ("right", height - d + 1, height),
    }
    m = build_planar_patch(d, height, rough)
    return CellComplex2(m.n_vertices, m.edges, m.faces, m.rough, m.coords, {**m.meta, "shape": "planar-two-qubit", "d": d})


def close_rough_boundaries(m: CellComplex2, keep: Iterable[str]) -> CellComplex2:
    """Turn every rough segment not in ``keep`` into smooth boundary.

    Vertices of a closed segment regain their X-checks, and each open face
    touching them gains one new edge joining its two open ends. New edges
    are appended, so old edge indices are preserved.
    """
    keep = set(keep)
    unknown = keep - set(m.rough)
    if unknown:
        raise CellComplexError(f"unknown rough segments {sorted(unknown)}")
    closing = {v for name, vs in m.rough.items() if name not in keep for v in vs}
    if not closing:
        return m
    edges = list(m.edges)
    faces = []
    for face in m.faces:
        odd = m._odd_vertices(face)
        if odd & closing:
            if len(odd) != 2:
                raise CellComplexError(f"face {face} has {len(odd)} open ends")
            # the walk runs from one open end to the other; close it
            first = set(m.edges[face[0]]) & odd
            last = set(m.edges[face[-1]]) & odd
            a = last.pop() if last else min(odd)
            b = first.pop() if first else max(odd)
            faces.append(face + (len(edges),))
            edges.append((a, b))
        else:
            faces.append(face)
    rough = {k: v for k, v in m.rough.items() if k in keep}
    return CellComplex2(m.n_vertices, tuple(edges), tuple(faces), rough, m.coords, dict(m.meta))


# loop presets ---------------------------------------------------------------


def torus_loop(torus: CellComplex2, name: str) -> EdgePath:
    """Named logical loop on a torus from :func:`build_torus`.

    ``"Z1"`` is the horizontal loop along row 0, ``"Z2"`` the vertical loop
    along column 0, and ``"Z1Z2"`` the staircase from (0, 0) to (d, d).
    """
    d = int(torus.meta.get("d", 0))
    if torus.meta.get("shape") != "torus":
        raise CellComplexError("presets are defined on tori from build_torus")
    if name == "Z1":
        edges = [x for x in range(d)]
    elif name == "Z2":
        edges = [d * d + d * y for y in range(d)]
    elif name == "Z1Z2":
        edges = []
        for i in range(d):
            edges.append((i % d) + d * (i % d))
            edges.append(d * d + ((i + 1) % d) + d * (i % d))
    else:
        raise ValueError(f"unknown loop preset {name!r}")
    return EdgePath.from_edges(torus, edges, start=0)

