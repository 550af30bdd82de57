"""Homomorphic measurement gadgets: validation, measured logicals, distance.

A gadget couples a data code (H_X, H_Z) to an ancilla code (H_X', H_Z')
through transversal CNOTs described by a gate matrix Gamma (n x m, data
qubit i controls ancilla qubit j when Gamma[i, j] = 1). The joint
stabilizer group is preserved exactly when

    rs(H_Z' Gamma^T) is contained in rs(H_Z)  and
    rs(H_X Gamma) is contained in rs(H_X').

X-type measurements reuse the same machinery on the dual codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cell2 import css_of_complex
from .cover import gate_matrix
from .csscode import CssCode, logical_coefficients
from .errors import Condition1Violation, Condition2Violation, DimensionMismatch, FaultToleranceViolation, NotGraphlike
from .f2la import BitMatrix, as_bits, block, first_outside, independent_extension, kernel_basis, subspace_leq
from .graphs import CheckGraph, edge_labels

# kernel dimension up to which non-graphlike ancillas are enumerated
_EFFDIST_ENUM_LIMIT = 20


@dataclass(frozen=True, eq=False)
class HomGadget:
    """Data code, ancilla code and gate matrix; ``origin`` is an optional CellMap."""

    data: CssCode
    ancilla: CssCode
    gamma: BitMatrix
    origin: object | None = None

    def __post_init__(self):
        if self.gamma.shape != (self.data.n, self.ancilla.n):
            raise DimensionMismatch(
                f"gate matrix is {self.gamma.shape}, expected ({self.data.n}, {self.ancilla.n})"
            )

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def m(self) -> int:
        return self.ancilla.n

    def dual(self) -> HomGadget:
        """Gadget for X-type measurement: both codes dualized, same CNOT pattern."""
        return HomGadget(self.data.dual(), self.ancilla.dual(), self.gamma, self.origin)


class ConditionReport(NamedTuple):
    condition1: bool
    condition2: bool
    witness1: np.ndarray | None
    witness2: np.ndarray | None
    row1: int | None
    row2: int | None

    @property
    def ok(self) -> bool:
        return self.condition1 and self.condition2


def check_conditions(data: CssCode, ancilla: CssCode, gamma: BitMatrix) -> ConditionReport:
    """Evaluate both inclusions without raising."""
    lhs1 = ancilla.h_z @ gamma.T
    lhs2 = data.h_x @ gamma
    r1 = first_outside(lhs1, data.h_z)
    r2 = first_outside(lhs2, ancilla.h_x)
    return ConditionReport(
        r1 is None,
        r2 is None,
        None if r1 is None else lhs1.row(r1),
        None if r2 is None else lhs2.row(r2),
        r1,
        r2,
    )


def validate(data: CssCode, ancilla: CssCode, gamma: BitMatrix, origin=None) -> HomGadget:
    """Build a gadget after checking both stabilizer-preservation inclusions."""
    g = HomGadget(data, ancilla, gamma, origin)
    rep = check_conditions(data, ancilla, gamma)
    if not rep.condition1:
        raise Condition1Violation(
            f"row {rep.row1} of H_Z' Gamma^T is not a data Z-stabilizer", rep.witness1, rep.row1
        )
    if not rep.condition2:
        raise Condition2Violation(
            f"row {rep.row2} of H_X Gamma is not an ancilla X-stabilizer", rep.witness2, rep.row2
        )
    return g


class PreservationCertificate(NamedTuple):
    z_before_in_after: bool
    z_after_in_before: bool
    x_before_in_after: bool
    x_after_in_before: bool

    @property
    def ok(self) -> bool:
        return all(self)

    def failures(self) -> list[str]:
        return [name for name, v in zip(self._fields, self) if not v]


def stabilizer_blocks(g: HomGadget) -> dict[str, BitMatrix]:
    """Joint Z- and X-stabilizer generators before and after the CNOTs."""
    hx, hz, hxa, hza, gm = g.data.h_x, g.data.h_z, g.ancilla.h_x, g.ancilla.h_z, g.gamma
    zn = BitMatrix.zeros
    return {
        "T_Z": block([[hz, zn(hz.rows, g.m)], [zn(hza.rows, g.n), hza]]),
        "T_X": block([[hx, zn(hx.rows, g.m)], [zn(hxa.rows, g.n), hxa]]),
        "T_Z'": block([[hz, zn(hz.rows, g.m)], [hza @ gm.T, hza]]),
        "T_X'": block([[hx, hx @ gm], [zn(hxa.rows, g.n), hxa]]),
    }


def stabilizer_preservation_check(g: HomGadget) -> PreservationCertificate:
    """Row-space equality of the joint stabilizer groups, both directions."""
    b = stabilizer_blocks(g)
    return PreservationCertificate(
        subspace_leq(b["T_Z"], b["T_Z'"]),
        subspace_leq(b["T_Z'"], b["T_Z"]),
        subspace_leq(b["T_X"], b["T_X'"]),
        subspace_leq(b["T_X'"], b["T_X"]),
    )


class MeasuredGroup(NamedTuple):
    """Data Z-logicals read out by the gadget.

    ``basis`` rows are Gamma v for the ancilla vectors in ``ancilla_vectors``;
    they are independent modulo the data Z-stabilizers.
    """

    basis: BitMatrix
    ancilla_vectors: BitMatrix
    rank: int

    def coefficients(self, data: CssCode) -> np.ndarray:
        """Coordinates of each generator in the data Z-logical basis."""
        if self.rank == 0:
            return np.zeros((0, data.k), dtype=np.uint8)
        return np.array([logical_coefficients(data, self.basis.row(i)) for i in range(self.rank)])


def measured_group(g: HomGadget) -> MeasuredGroup:
    kern = kernel_basis(g.ancilla.h_x)
    images = kern @ g.gamma.T  # rows are (Gamma v)^T
    keep = independent_extension(g.data.h_z, images)
    return MeasuredGroup(images.take_rows(keep), kern.take_rows(keep), len(keep))


# constructors ---------------------------------------------------------------


def repetition_code(w: int, shape: str = "circle") -> CssCode:
    """Length-w repetition code with two-body X-checks and no Z-checks."""
    if w < 1:
        raise ValueError("repetition code needs at least one qubit")
    if shape not in ("circle", "path"):
        raise ValueError(f"unknown shape {shape!r}")
    pairs = [(i, i + 1) for i in range(w - 1)]
    if shape == "circle" and w > 2:
        pairs.append((w - 1, 0))
    h_x = np.zeros((len(pairs), w), dtype=np.uint8)
    for r, (a, b) in enumerate(pairs):
        h_x[r, a] = h_x[r, b] = 1
    return CssCode(BitMatrix.from_array(h_x, cols=w), BitMatrix.zeros(0, w))


def shor_gadget(data: CssCode, support, shape: str = "circle") -> HomGadget:
    """Cat-state measurement of the Z-operator ``support`` as a gadget."""
    s = as_bits(support)
    if s.size != data.n:
        raise DimensionMismatch(f"support has length {s.size}, code has {data.n} qubits")
    if data.h_x.dot(s).any():
        raise ValueError("support is not a Z-logical or Z-stabilizer (not in ker H_X)")
    idx = np.flatnonzero(s)
    if idx.size == 0:
        raise ValueError("support is empty")
    ancilla = repetition_code(idx.size, shape)
    gamma = np.zeros((data.n, idx.size), dtype=np.uint8)
    gamma[idx, np.arange(idx.size)] = 1
    return validate(data, ancilla, BitMatrix.from_array(gamma, cols=idx.size))


def steane_gadget(data: CssCode) -> HomGadget:
    """A second copy of the data code coupled by transversal CNOTs."""
    return validate(data, data, BitMatrix.identity(data.n))


def covering_gadget(data: CssCode, cmap) -> HomGadget:
    """Gadget from a cellular covering map (see :mod:`hommeas.cover`)."""
    return validate(data, css_of_complex(cmap.source), gate_matrix(cmap), origin=cmap)


# effective distance ---------------------------------------------------------


class EffectiveDistance(NamedTuple):
    """Smallest data-error footprint of an ancilla X-logical.

    ``value`` is attained by ``witness`` (an ancilla X-logical). When
    ``exact`` is False the search was truncated and only
    ``lower_bound <= true value <= value`` is certified.
    """

    value: int
    exact: bool
    lower_bound: int
    witness: np.ndarray


def _image_size(gamma_dense: np.ndarray, support: np.ndarray) -> int:
    return int(gamma_dense[:, support.astype(bool)].any(axis=1).sum())


def effective_x_distance(g: HomGadget, max_length: int | None = None, check: bool = True) -> EffectiveDistance:
    """Minimum over connected ancilla X-logicals E of the number of data
    qubits whose CNOTs touch E.

    Connected X-logicals of a graphlike ancilla are simple nontrivial cycles
    of its face graph, searched depth-first with the image size as the cost.
    Each data qubit covers at most ``mu`` ancilla qubits (the largest row
    weight of Gamma), so cycles longer than ``mu * (best - 1)`` cannot win;
    that cap makes the search exact unless ``max_length`` cuts it shorter.

    With ``check`` set, gadgets carrying a cellular origin must satisfy
    ``value >= min(d_data, d_ancilla)``; otherwise FaultToleranceViolation.
    """
    gd = g.gamma.to_array()
    try:
        res = _effdist_graph(g, gd, max_length)
    except NotGraphlike:
        res = _effdist_enumerate(g, gd)
    if check and g.origin is not None:
        bound = min(g.data.d, g.ancilla.d)
        if res.value < bound:
            raise FaultToleranceViolation(
                f"effective X-distance {res.value} is below min(d_data, d_ancilla) = {bound}"
            )
    return res


def _effdist_graph(g: HomGadget, gd: np.ndarray, max_length: int | None) -> EffectiveDistance:
    anc = g.ancilla
    graph = CheckGraph(anc.h_z)
    labels = edge_labels(anc.logicals_z)
    mu = max(1, int(gd.sum(axis=1).max(initial=0)))
    edge_images = [frozenset(np.flatnonzero(gd[:, e]).tolist()) for e in range(anc.n)]

    # seed with the shortest nontrivial cycle
    _, seed = graph.shortest_nontrivial_cycle(labels)
    best = _image_size(gd, seed)
    witness = seed
    cap = mu * (best - 1)
    exact = True
    if max_length is not None and max_length < cap:
        cap, exact = max_length, False

    n_nodes = graph.n_nodes
    # hop distances for the return-to-start pruning
    hops = [graph.bfs(r)[0] for r in range(n_nodes)]
    adjacency = graph.adjacency
    endpoints = graph.endpoints

    for start in range(n_nodes):
        if not adjacency[start]:
            continue
        home = hops[start]
        on_path = [False] * n_nodes
        on_path[start] = True
        edges: list[int] = []
        counts: dict[int, int] = {}

        def push(e: int) -> None:
            edges.append(e)
            for q in edge_images[e]:
                counts[q] = counts.get(q, 0) + 1

        def pop() -> None:
            e = edges.pop()
            for q in edge_images[e]:
                counts[q] -= 1
                if not counts[q]:
                    del counts[q]

        def dfs(node: int, cls: int) -> None:
            nonlocal best, witness, cap
            for nxt, e in adjacency[node]:
                if edges and e == edges[-1] and endpoints[e][0] != endpoints[e][1]:
                    continue
                c2 = cls ^ labels[e]
                if nxt == start:
                    if c2:
                        push(e)
                        size = len(counts)
                        if size < best:
                            best = size
                            witness = np.zeros(anc.n, dtype=np.uint8)
                            witness[edges] = 1
                            if exact or max_length is None:
                                cap = min(cap, mu * (best - 1))
                        pop()
                    continue
                # only cycles whose smallest node is the start, to avoid repeats
                if nxt < start or on_path[nxt]:
                    continue
                if len(edges) + 1 + home[nxt] > cap:
                    continue
                push(e)
                if len(counts) < best:
                    on_path[nxt] = True
                    dfs(nxt, c2)
                    on_path[nxt] = False
                pop()

        dfs(start, 0)

    lower = best if exact else min(best, math.ceil((cap + 1) / mu))
    return EffectiveDistance(int(best), exact, int(lower), witness)


def _effdist_enumerate(g: HomGadget, gd: np.ndarray) -> EffectiveDistance:
    # non-graphlike ancilla: scan the whole X-logical space, connected or not
    anc = g.ancilla
    basis = kernel_basis(anc.h_z).to_array()
    if basis.shape[0] > _EFFDIST_ENUM_LIMIT:
        raise ValueError(
            f"ancilla is not graphlike and ker H_Z' has dimension {basis.shape[0]} (> {_EFFDIST_ENUM_LIMIT})"
        )
    lz = anc.logicals_z.to_array()
    best, witness = None, None
    v = np.zeros(anc.n, dtype=np.uint8)
    for step in range(1, 1 << basis.shape[0]):
        v ^= basis[(step & -step).bit_length() - 1]
        if not ((lz.astype(np.int64) @ v) & 1).any():
            continue
        size = _image_size(gd, v)
        if best is None or size < best:
            best, witness = size, v.copy()
    if best is None:
        raise ValueError("ancilla has no X-logical")
    return EffectiveDistance(best, True, best, witness)
