"""Graphs whose nodes are checks and whose edges are qubits.

A check matrix with column weight at most two is a graph: each qubit joins
the (at most two) checks it touches. Qubits touching a single check attach to
one shared virtual ``boundary`` node; qubits touching none become self-loops
on it. Primal surface-code graphs come from H_X (vertices), dual ones from
H_Z (faces).
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import NotGraphlike
from .f2la import BitMatrix


class CheckGraph:
    """Multigraph view of a graphlike check matrix.

    Node ``n_checks`` is the boundary node; it is always present but may be
    isolated.
    """

    def __init__(self, checks: BitMatrix):
        dense = checks.to_array()
        weights = dense.sum(axis=0)
        if (weights > 2).any():
            bad = int(np.flatnonzero(weights > 2)[0])
            raise NotGraphlike(f"column {bad} has weight {int(weights[bad])}")
        self.n_checks = checks.rows
        self.n_edges = checks.cols
        self.boundary = self.n_checks
        self.n_nodes = self.n_checks + 1
        ends = np.full((self.n_edges, 2), self.boundary, dtype=np.int64)
        for e in range(self.n_edges):
            rows = np.flatnonzero(dense[:, e])
            ends[e, : rows.size] = rows
        ends.sort(axis=1)
        self.endpoints = ends
        self.adjacency: list[list[tuple[int, int]]] = [[] for _ in range(self.n_nodes)]
        for e, (a, b) in enumerate(ends):
            self.adjacency[a].append((int(b), e))
            if a != b:
                self.adjacency[b].append((int(a), e))

    def has_boundary_edges(self) -> bool:
        return bool(self.adjacency[self.boundary])

    def bfs(self, root: int, labels: list[int] | None = None, cutoff: int | None = None):
        """Breadth-first tree from ``root``.

        Returns ``(dist, parent_edge, cls)``; ``cls[v]`` is the XOR of edge
        labels along the tree path (all zeros when ``labels`` is None).
        Unreached nodes have ``dist == -1``.
        """
        dist = [-1] * self.n_nodes
        parent = [-1] * self.n_nodes
        cls = [0] * self.n_nodes
        dist[root] = 0
        queue = deque([root])
        while queue:
            a = queue.popleft()
            if cutoff is not None and dist[a] >= cutoff:
                continue
            for b, e in self.adjacency[a]:
                if dist[b] < 0:
                    dist[b] = dist[a] + 1
                    parent[b] = e
                    if labels is not None:
                        cls[b] = cls[a] ^ labels[e]
                    queue.append(b)
        return dist, parent, cls

    def tree_path(self, parent: list[int], node: int) -> list[int]:
        """Edges from ``node`` back to the BFS root."""
        path = []
        while parent[node] >= 0:
            e = parent[node]
            path.append(e)
            a, b = self.endpoints[e]
            node = int(a) if int(b) == node else int(b)
        return path

    def shortest_nontrivial_cycle(self, labels: list[int]) -> tuple[int, np.ndarray]:
        """Shortest cycle whose label XOR is nonzero.

        ``labels[e]`` is an integer bitmask (the homology class of edge ``e``
        as seen by a dual logical basis). Nonzero-class cycles satisfy the
        three-path condition, so the optimum is a BFS-tree cycle closed by one
        non-tree edge from some root. Returns the length and the edge
        indicator of the symmetric difference (whose weight equals the length
        at the optimum).
        """
        best = np.iinfo(np.int64).max
        witness: tuple[int, int, list[int]] | None = None
        for e, (a, b) in enumerate(self.endpoints):
            if a == b and labels[e]:
                return 1, self._indicator([e])
        for root in range(self.n_nodes):
            if not self.adjacency[root]:
                continue
            cutoff = None if witness is None else best // 2
            dist, parent, cls = self.bfs(root, labels, cutoff)
            for e, (a, b) in enumerate(self.endpoints):
                a, b = int(a), int(b)
                if dist[a] < 0 or dist[b] < 0:
                    continue
                if cls[a] ^ cls[b] ^ labels[e]:
                    length = dist[a] + dist[b] + 1
                    if length < best:
                        best = length
                        witness = (a, b, parent)
                        witness_edge = e
        if witness is None:
            raise ValueError("every cycle has trivial class")
        a, b, parent = witness
        edges = self.tree_path(parent, a) + [witness_edge] + self.tree_path(parent, b)
        return int(best), self._indicator(edges)

    def _indicator(self, edges: list[int]) -> np.ndarray:
        v = np.zeros(self.n_edges, dtype=np.uint8)
        for e in edges:
            v[e] ^= 1
        return v


def edge_labels(logicals: BitMatrix) -> list[int]:
    """Bitmask per column: bit i is set when logical row i touches the column."""
    dense = logicals.to_array()
    return [sum(1 << int(i) for i in np.flatnonzero(dense[:, e])) for e in range(dense.shape[1])]
