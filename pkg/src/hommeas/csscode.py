"""CSS codes as pairs of check matrices, and their distances."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import CommutationViolation, DimensionMismatch, KIsZero, NotGraphlike
from .f2la import (
    BitMatrix,
    RowReducer,
    as_bits,
    independent_extension,
    inverse,
    kernel_basis,
    rank,
)
from .graphs import CheckGraph, edge_labels

# Largest kernel dimension we enumerate exhaustively.
ENUMERATION_LIMIT = 24


class DistanceResult(NamedTuple):
    value: int
    exact: bool
    witness: np.ndarray


@dataclass(frozen=True, eq=False)
class ChainComplex3:
    """C2 --d2--> C1 --d1--> C0 over GF(2)."""

    d2: BitMatrix
    d1: BitMatrix

    def __post_init__(self):
        if self.d1.cols != self.d2.rows:
            raise DimensionMismatch(f"d1 {self.d1.shape} cannot follow d2 {self.d2.shape}")
        if not (self.d1 @ self.d2).is_zero():
            raise CommutationViolation("d1 d2 != 0")


@dataclass(frozen=True, eq=False)
class CssCode:
    """An [[n, k]] CSS code given by X- and Z-check matrices.

    ``k`` is computed at construction; distances are computed on first use.
    """

    h_x: BitMatrix
    h_z: BitMatrix
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.h_x.cols != self.h_z.cols:
            raise DimensionMismatch(f"H_X has {self.h_x.cols} columns, H_Z has {self.h_z.cols}")
        if not (self.h_x @ self.h_z.T).is_zero():
            raise CommutationViolation("H_X H_Z^T != 0")
        self._cache["rank_x"] = rank(self.h_x)
        self._cache["rank_z"] = rank(self.h_z)

    @property
    def n(self) -> int:
        return self.h_x.cols

    @property
    def rank_x(self) -> int:
        return self._cache["rank_x"]

    @property
    def rank_z(self) -> int:
        return self._cache["rank_z"]

    @property
    def k(self) -> int:
        return self.n - self.rank_x - self.rank_z

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CssCode):
            return NotImplemented
        return self.h_x == other.h_x and self.h_z == other.h_z

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CssCode(n={self.n}, k={self.k})"

    def dual(self) -> CssCode:
        """Swap the roles of X and Z."""
        return CssCode(self.h_z, self.h_x)

    @cached_property
    def logicals_z(self) -> BitMatrix:
        """Z-logical representatives, dual to :attr:`logicals_x` (L_X L_Z^T = I)."""
        return _logical_pair(self)[0]

    @cached_property
    def logicals_x(self) -> BitMatrix:
        return _logical_pair(self)[1]

    @cached_property
    def z_stabilizer_reducer(self) -> RowReducer:
        return RowReducer(self.h_z)

    @property
    def d_z(self) -> int:
        return self._distance("z").value

    @property
    def d_x(self) -> int:
        return self._distance("x").value

    @property
    def d(self) -> int:
        return min(self.d_x, self.d_z)

    def _distance(self, kind: str) -> DistanceResult:
        key = f"d_{kind}"
        if key not in self._cache:
            fn = min_distance_z if kind == "z" else min_distance_x
            self._cache[key] = fn(self)
        return self._cache[key]

    @property
    def params(self) -> str:
        return f"[[{self.n},{self.k},{self.d}]]"

    def to_json(self) -> dict:
        return {"n": self.n, "h_x": self.h_x.to_strings(), "h_z": self.h_z.to_strings()}

    @classmethod
    def from_json(cls, obj: dict | str) -> CssCode:
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["n"])
        return css_from_checks(
            BitMatrix.from_strings(obj["h_x"], cols=n), BitMatrix.from_strings(obj["h_z"], cols=n)
        )


def css_from_checks(h_x: BitMatrix, h_z: BitMatrix) -> CssCode:
    """Validated CSS code; raises CommutationViolation or DimensionMismatch."""
    return CssCode(h_x, h_z)


def to_chain(code: CssCode) -> ChainComplex3:
    return ChainComplex3(d2=code.h_z.T, d1=code.h_x)


def from_chain(cc: ChainComplex3) -> CssCode:
    return CssCode(cc.d1, cc.d2.T)


def _logical_pair(code: CssCode) -> tuple[BitMatrix, BitMatrix]:
    n = code.n
    kz = kernel_basis(code.h_x)
    kx = kernel_basis(code.h_z)
    lz = kz.take_rows(independent_extension(code.h_z, kz))
    lx = kx.take_rows(independent_extension(code.h_x, kx))
    if lz.rows == 0:
        return BitMatrix.zeros(0, n), BitMatrix.zeros(0, n)
    pairing = lx @ lz.T
    lx = inverse(pairing) @ lx
    return lz, lx


def logical_coefficients(code: CssCode, v) -> np.ndarray:
    """Coordinates of a Z-operator in the basis :attr:`CssCode.logicals_z`.

    ``v`` must lie in ker(H_X); two operators share a logical class iff their
    coefficient vectors agree.
    """
    v = as_bits(v)
    if code.h_x.dot(v).any():
        raise ValueError("operator is not in ker(H_X)")
    return code.logicals_x.dot(v)


def same_z_class(code: CssCode, u, v) -> bool:
    """True iff ``u + v`` is a Z-stabilizer, i.e. u and v are equivalent."""
    return code.z_stabilizer_reducer.contains(as_bits(u) ^ as_bits(v))


# distances ------------------------------------------------------------------


def min_distance_z(code: CssCode, budget: int | None = None, method: str = "auto") -> DistanceResult:
    """Minimum weight of ker(H_X) minus rs(H_Z).

    ``method`` is ``"graph"`` (shortest nontrivial cycle, needs graphlike
    H_X), ``"enumerate"`` (all of ker H_X), ``"bounded"`` (all supports up
    to ``budget``) or ``"auto"``, which tries them in that order. The result
    carries ``exact=False`` when only an upper bound could be certified.
    """
    if code.k == 0:
        raise KIsZero("code encodes no logical qubits")
    if method == "auto":
        try:
            return _distance_graph(code)
        except NotGraphlike:
            pass
        dim = code.n - code.rank_x
        method = "enumerate" if dim <= ENUMERATION_LIMIT else "bounded"
    if method == "graph":
        return _distance_graph(code)
    if method == "enumerate":
        return _distance_enumerate(code)
    if method == "bounded":
        return _distance_bounded(code, budget if budget is not None else 8)
    raise ValueError(f"unknown method {method!r}")


def min_distance_x(code: CssCode, budget: int | None = None, method: str = "auto") -> DistanceResult:
    return min_distance_z(code.dual(), budget, method)


def _distance_graph(code: CssCode) -> DistanceResult:
    graph = CheckGraph(code.h_x)
    length, cycle = graph.shortest_nontrivial_cycle(edge_labels(code.logicals_x))
    return DistanceResult(length, True, cycle)


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=1)


def _distance_enumerate(code: CssCode) -> DistanceResult:
    basis = kernel_basis(code.h_x)
    q = basis.rows
    vecs = basis.words
    classes = BitMatrix.from_array(code.logicals_x.dot(basis.to_array()), cols=code.k).words
    lo = min(q, 14)

    # every combination of the first `lo` basis vectors, by doubling
    table = np.zeros((1, vecs.shape[1]), dtype=np.uint64)
    ctab = np.zeros((1, classes.shape[1]), dtype=np.uint64)
    for i in range(lo):
        table = np.concatenate([table, table ^ vecs[i]])
        ctab = np.concatenate([ctab, ctab ^ classes[i]])

    best, best_vec = np.iinfo(np.int64).max, None
    hv = np.zeros(vecs.shape[1], dtype=np.uint64)
    hc = np.zeros(classes.shape[1], dtype=np.uint64)
    for step in range(1 << (q - lo)):
        if step:
            j = lo + (step & -step).bit_length() - 1  # gray-code bit to flip
            hv ^= vecs[j]
            hc ^= classes[j]
        nontrivial = (ctab ^ hc).any(axis=1)
        if not nontrivial.any():
            continue
        weights = np.where(nontrivial, _popcount_rows(table ^ hv), np.iinfo(np.int64).max)
        i = int(np.argmin(weights))
        if weights[i] < best:
            best = int(weights[i])
            best_vec = table[i] ^ hv
    witness = BitMatrix.from_words(best_vec.reshape(1, -1), code.n).row(0)
    return DistanceResult(best, True, witness)


def _distance_bounded(code: CssCode, budget: int) -> DistanceResult:
    cols = code.h_x.T.words
    cls = BitMatrix.from_array(code.logicals_x.to_array().T, cols=code.k).words
    for w in range(1, budget + 1):
        for support in itertools.combinations(range(code.n), w):
            idx = list(support)
            if np.bitwise_xor.reduce(cols[idx], axis=0).any():
                continue
            if np.bitwise_xor.reduce(cls[idx], axis=0).any():
                v = np.zeros(code.n, dtype=np.uint8)
                v[idx] = 1
                return DistanceResult(w, True, v)
    # nothing up to the budget: fall back to the lightest basis representative
    reps = code.logicals_z.to_array()
    i = int(np.argmin(reps.sum(axis=1)))
    return DistanceResult(int(reps[i].sum()), False, reps[i])
