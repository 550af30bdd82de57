"""Matching decoders on graphlike check matrices.

Checks are nodes and qubits are edges (see :class:`CheckGraph`); a syndrome
marks defect nodes and a correction is a set of edges whose boundary is the
defect set, with the virtual boundary node absorbing odd parity.
"""

from __future__ import annotations

from collections import deque

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import DecoderError
from .f2la import BitMatrix
from .graphs import CheckGraph

# largest defect count solved by the exact subset recursion
EXACT_DP_LIMIT = 12


class DecodingGraph:
    """Shortest-path data for a graphlike check matrix."""

    def __init__(self, checks: BitMatrix):
        self.checks = checks
        self.graph = CheckGraph(checks)
        g = self.graph
        self.has_boundary = g.has_boundary_edges()
        # one representative edge per node pair, for path recovery
        self._pair_edge: dict[tuple[int, int], int] = {}
        rows, cols = [], []
        for e, (a, b) in enumerate(g.endpoints):
            a, b = int(a), int(b)
            if a == b:
                continue
            key = (a, b)
            if key not in self._pair_edge:
                self._pair_edge[key] = e
                rows += [a, b]
                cols += [b, a]
        adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n_nodes, g.n_nodes))
        dist, pred = shortest_path(adj, directed=False, unweighted=True, return_predecessors=True)
        self.dist = dist
        self.pred = pred
        self._dense_checks = checks.to_array().astype(np.int64)

    @property
    def n_qubits(self) -> int:
        return self.graph.n_edges

    def syndrome(self, correction: np.ndarray) -> np.ndarray:
        return (self._dense_checks @ np.asarray(correction, dtype=np.int64)) & 1

    def path_edges(self, a: int, b: int) -> list[int]:
        if not np.isfinite(self.dist[a, b]):
            raise DecoderError(f"nodes {a} and {b} are disconnected")
        out = []
        node = b
        while node != a:
            prev = int(self.pred[a, node])
            out.append(self._pair_edge[min(prev, node), max(prev, node)])
            node = prev
        return out


def _pairing_dp(dist: np.ndarray, defects: list[int], boundary: int | None) -> list[tuple[int, int]]:
    s = len(defects)
    inf = float("inf")
    cost = {0: 0.0}
    choice: dict[int, tuple[int, int]] = {}

    def solve(mask: int) -> float:
        if mask in cost:
            return cost[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        best, pick = inf, None
        if boundary is not None:
            c = dist[defects[i], boundary] + solve(rest)
            if c < best:
                best, pick = c, (i, -1)
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            c = dist[defects[i], defects[j]] + solve(rest & ~(1 << j))
            if c < best:
                best, pick = c, (i, j)
        cost[mask] = best
        if pick is not None:
            choice[mask] = pick
        return best

    full = (1 << s) - 1
    if not np.isfinite(solve(full)):
        raise DecoderError("no valid pairing of the defects exists")
    pairs = []
    mask = full
    while mask:
        i, j = choice[mask]
        if j < 0:
            pairs.append((defects[i], -1))
            mask &= ~(1 << i)
        else:
            pairs.append((defects[i], defects[j]))
            mask &= ~((1 << i) | (1 << j))
    return pairs


def _pairing_blossom(dist: np.ndarray, defects: list[int], boundary: int | None) -> list[tuple[int, int]]:
    g = nx.Graph()
    for a in range(len(defects)):
        for b in range(a + 1, len(defects)):
            w = dist[defects[a], defects[b]]
            if np.isfinite(w):
                g.add_edge(("d", a), ("d", b), weight=float(w))
        if boundary is not None:
            w = dist[defects[a], boundary]
            if np.isfinite(w):
                g.add_edge(("d", a), ("b", a), weight=float(w))
    if boundary is not None:
        for a in range(len(defects)):
            for b in range(a + 1, len(defects)):
                g.add_edge(("b", a), ("b", b), weight=0.0)
    matching = nx.min_weight_matching(g)
    pairs = []
    covered = set()
    for u, v in matching:
        covered |= {u, v}
        if u[0] == "d" and v[0] == "d":
            pairs.append((defects[u[1]], defects[v[1]]))
        elif u[0] == "d" or v[0] == "d":
            d = u if u[0] == "d" else v
            pairs.append((defects[d[1]], -1))
    if any(("d", a) not in covered for a in range(len(defects))):
        raise DecoderError("matching left a defect unpaired")
    return pairs


def _exact(graph: DecodingGraph, defects: list[int]) -> np.ndarray:
    boundary = graph.graph.boundary if graph.has_boundary else None
    if boundary is None and len(defects) % 2:
        raise DecoderError("odd number of defects and no boundary to absorb one")
    if len(defects) <= EXACT_DP_LIMIT:
        pairs = _pairing_dp(graph.dist, defects, boundary)
    else:
        pairs = _pairing_blossom(graph.dist, defects, boundary)
    corr = np.zeros(graph.n_qubits, dtype=np.uint8)
    for a, b in pairs:
        for e in graph.path_edges(a, boundary if b < 0 else b):
            corr[e] ^= 1
    return corr


def _union_find(graph: DecodingGraph, defects: list[int]) -> np.ndarray:
    g = graph.graph
    n = g.n_nodes
    parent = list(range(n))
    parity = [0] * n
    grounded = [False] * n
    members: dict[int, list[int]] = {v: [v] for v in range(n)}
    grounded[g.boundary] = True
    defect = [0] * n
    for v in defects:
        defect[v] = 1
        parity[v] = 1

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        if len(members[ra]) < len(members[rb]):
            ra, rb = rb, ra
        parent[rb] = ra
        members[ra].extend(members.pop(rb))
        parity[ra] ^= parity[rb]
        grounded[ra] = grounded[ra] or grounded[rb]

    support = np.zeros(g.n_edges, dtype=bool)

    def odd_roots() -> list[int]:
        return [r for r in {find(v) for v in defects} if parity[r] and not grounded[r]]

    active = odd_roots()
    while active:
        grown = []
        for r in active:
            for v in members[r]:
                for _, e in g.adjacency[v]:
                    if not support[e]:
                        grown.append(e)
        if not grown:
            raise DecoderError("an odd cluster cannot grow further")
        for e in grown:
            support[e] = True
            a, b = g.endpoints[e]
            union(int(a), int(b))
        active = odd_roots()

    # peel a spanning forest of the grown support
    corr = np.zeros(g.n_edges, dtype=np.uint8)
    seen = [False] * n
    tree_edge = [-1] * n
    tree_parent = [-1] * n
    roots = [g.boundary] + list(range(n))
    for root in roots:
        if seen[root]:
            continue
        seen[root] = True
        order = [root]
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b, e in g.adjacency[a]:
                if support[e] and not seen[b]:
                    seen[b] = True
                    tree_edge[b] = e
                    tree_parent[b] = a
                    order.append(b)
                    queue.append(b)
        for v in reversed(order[1:]):
            if defect[v]:
                corr[tree_edge[v]] ^= 1
                defect[tree_parent[v]] ^= 1
                defect[v] = 0
        if defect[root] and root != g.boundary:
            raise DecoderError("peeling left an unmatched defect")
    return corr


class MatchingDecoder:
    """Syndrome-to-correction map with a per-syndrome cache.

    ``method`` is ``"exact"`` (minimum weight) or ``"union_find"``.
    """

    def __init__(self, checks: BitMatrix, method: str = "exact"):
        if method not in ("exact", "union_find"):
            raise ValueError(f"unknown decoder {method!r}")
        self.method = method
        self.graph = DecodingGraph(checks)
        self._cache: dict[bytes, np.ndarray] = {}

    def decode(self, syndrome: np.ndarray) -> np.ndarray:
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        key = np.packbits(syndrome).tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = matching_decode(self.graph, syndrome, self.method)
            self._cache[key] = hit
        return hit

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        """Corrections for each row of ``syndromes``."""
        syndromes = np.asarray(syndromes, dtype=np.uint8)
        if syndromes.shape[0] == 0:
            return np.zeros((0, self.graph.n_qubits), dtype=np.uint8)
        uniq, inverse = np.unique(syndromes, axis=0, return_inverse=True)
        table = np.array([self.decode(s) for s in uniq], dtype=np.uint8).reshape(len(uniq), -1)
        return table[inverse.reshape(-1)]


def matching_decode(graph: DecodingGraph, syndrome, method: str = "exact") -> np.ndarray:
    """Correction whose syndrome equals ``syndrome``."""
    syndrome = np.asarray(syndrome, dtype=np.uint8)
    if syndrome.shape != (graph.graph.n_checks,):
        raise ValueError(f"syndrome has shape {syndrome.shape}, expected ({graph.graph.n_checks},)")
    defects = np.flatnonzero(syndrome).tolist()
    if not defects:
        return np.zeros(graph.n_qubits, dtype=np.uint8)
    if method == "exact":
        corr = _exact(graph, defects)
    elif method == "union_find":
        corr = _union_find(graph, defects)
    else:
        raise ValueError(f"unknown decoder {method!r}")
    if not np.array_equal(graph.syndrome(corr), syndrome):
        raise DecoderError("correction does not reproduce the syndrome")
    return corr
