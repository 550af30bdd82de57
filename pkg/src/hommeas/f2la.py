"""Linear algebra over GF(2) on bit-packed matrices.

Rows are packed little-endian into ``uint64`` words, so column ``j`` lives in
word ``j // 64`` at bit ``j % 64``. Elimination XORs whole packed rows at
once. Every operation returns new objects; stored words are read-only.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ComplexError, DimensionMismatch

_WORD = 64


def _n_words(cols: int) -> int:
    return (cols + _WORD - 1) // _WORD


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    nw = _n_words(cols)
    if nw == 0:
        return np.zeros((rows, 0), dtype=np.uint64)
    padded = np.zeros((rows, nw * _WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if cols == 0:
        return np.zeros((rows, 0), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


def as_bits(v: Iterable[int] | str | np.ndarray) -> np.ndarray:
    """Coerce a 0/1 string, sequence or array to a ``uint8`` vector."""
    if isinstance(v, str):
        return np.frombuffer(v.encode(), dtype=np.uint8) - ord("0")
    return np.asarray(v, dtype=np.uint8).reshape(-1) & 1


class BitMatrix:
    """Dense binary matrix with bit-packed rows.

    Examples
    --------
    >>> m = BitMatrix.from_strings(["110", "011"])
    >>> m.shape
    (2, 3)
    >>> (m @ m.T).to_strings()
    ['01', '10']
    """

    __slots__ = ("_words", "_rows", "_cols")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch(f"negative shape ({rows}, {cols})")
        nw = _n_words(cols)
        if words is None:
            words = np.zeros((rows, nw), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64, copy=True).reshape(rows, nw)
            tail = cols % _WORD
            if tail and rows:
                words[:, -1] &= np.uint64((1 << tail) - 1)
        words.flags.writeable = False
        self._words = words
        self._rows = rows
        self._cols = cols

    # construction -----------------------------------------------------------

    @classmethod
    def from_array(cls, a: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        a = np.asarray(a, dtype=np.uint8)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size or cols is None else a.reshape(0, cols)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2D array, got shape {a.shape}")
        if cols is not None and a.shape[1] != cols:
            if a.shape[0] == 0:
                a = np.zeros((0, cols), dtype=np.uint8)
            else:
                raise DimensionMismatch(f"expected {cols} columns, got {a.shape[1]}")
        return cls(a.shape[0], a.shape[1], _pack(a & 1))

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: int | None = None) -> BitMatrix:
        if not rows:
            return cls.zeros(0, cols or 0)
        widths = {len(r) for r in rows}
        if len(widths) != 1 or (cols is not None and widths != {cols}):
            raise DimensionMismatch("row strings have inconsistent lengths")
        return cls.from_array(np.stack([as_bits(r) for r in rows]))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_array(np.eye(n, dtype=np.uint8), cols=n)

    @classmethod
    def from_words(cls, words: np.ndarray, cols: int) -> BitMatrix:
        return cls(words.shape[0], cols, words)

    # accessors --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    def to_array(self) -> np.ndarray:
        return _unpack(self._words, self._cols)

    def row(self, i: int) -> np.ndarray:
        return _unpack(self._words[i : i + 1], self._cols)[0]

    def to_strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in r) for r in self.to_array()]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(ij)
        return int((self._words[i, j // _WORD] >> np.uint64(j % _WORD)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(self.to_strings()[:8])
        more = ", ..." if self._rows > 8 else ""
        return f"BitMatrix({self._rows}x{self._cols}: [{body}{more}])"

    def is_zero(self) -> bool:
        return not self._words.any()

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_array().sum(axis=0, dtype=np.int64)

    # algebra ----------------------------------------------------------------

    @property
    def T(self) -> BitMatrix:
        return BitMatrix.from_array(self.to_array().T, cols=self._rows)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return BitMatrix(self._rows, self._cols, self._words ^ other._words)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self._cols != other._rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        prod = self.to_array().astype(np.int64) @ other.to_array().astype(np.int64)
        return BitMatrix.from_array(prod & 1, cols=other._cols)

    def dot(self, v: np.ndarray) -> np.ndarray:
        """Matrix-vector product; ``v`` may also be a stack of row vectors (k, cols)."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape[-1] != self._cols:
            raise DimensionMismatch(f"{self.shape} . {v.shape}")
        return ((v.astype(np.int64) @ self.to_array().T.astype(np.int64)) & 1).astype(np.uint8)

    def take_rows(self, idx: Sequence[int] | np.ndarray) -> BitMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        return BitMatrix(len(idx), self._cols, self._words[idx])

    def take_cols(self, idx: Sequence[int] | np.ndarray) -> BitMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        return BitMatrix.from_array(self.to_array()[:, idx], cols=len(idx))

    def with_bit_flipped(self, i: int, j: int) -> BitMatrix:
        words = self._words.copy()
        words[i, j // _WORD] ^= np.uint64(1) << np.uint64(j % _WORD)
        return BitMatrix(self._rows, self._cols, words)

    def to_text(self) -> str:
        return "\n".join([f"{self._rows} {self._cols}", *self.to_strings()]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        rows, cols = (int(t) for t in lines[0].split())
        body = lines[1:]
        if len(body) != rows:
            raise DimensionMismatch(f"header says {rows} rows, found {len(body)}")
        return cls.from_strings(body, cols=cols) if rows else cls.zeros(0, cols)


def vstack(*mats: BitMatrix) -> BitMatrix:
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise DimensionMismatch(f"vstack of column counts {sorted(cols)}")
    (c,) = cols
    words = np.concatenate([m.words for m in mats], axis=0)
    return BitMatrix(words.shape[0], c, words)


def hstack(*mats: BitMatrix) -> BitMatrix:
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise DimensionMismatch(f"hstack of row counts {sorted(rows)}")
    (r,) = rows
    dense = np.concatenate([m.to_array() for m in mats], axis=1)
    return BitMatrix.from_array(dense.reshape(r, sum(m.cols for m in mats)), cols=sum(m.cols for m in mats))


def block(blocks: Sequence[Sequence[BitMatrix]]) -> BitMatrix:
    return vstack(*[hstack(*row) for row in blocks])


# elimination ----------------------------------------------------------------


class RREF(NamedTuple):
    reduced: BitMatrix
    rank: int
    pivot_cols: list[int]


def _eliminate(words: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """In-place Gauss-Jordan on a private copy of packed rows."""
    rows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        w, b = divmod(c, _WORD)
        bit = np.uint64(1) << np.uint64(b)
        hits = np.flatnonzero(words[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = (words[:, w] & bit) != 0
        mask[r] = False
        words[mask] ^= words[r]
        pivots.append(c)
        r += 1
    return words, pivots


def rref(m: BitMatrix) -> RREF:
    """Reduced row echelon form, rank and pivot columns.

    Zero rows are dropped from ``reduced``, so it has exactly ``rank`` rows.
    """
    words, pivots = _eliminate(m.words.copy(), m.cols)
    rank = len(pivots)
    return RREF(BitMatrix(rank, m.cols, words[:rank]), rank, pivots)


def rank(m: BitMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Rows spanning ``{v : m v = 0}``; there are ``cols - rank`` of them."""
    red, r, pivots = rref(m)
    n = m.cols
    free = [c for c in range(n) if c not in set(pivots)]
    dense = red.to_array()
    out = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        out[i, f] = 1
        if r:
            out[i, pivots] = dense[:, f]
    return BitMatrix.from_array(out, cols=n)


class RowReducer:
    """Reusable membership test against a fixed row space."""

    def __init__(self, m: BitMatrix):
        self.cols = m.cols
        red, self.rank, self.pivots = rref(m)
        self._words = red.words

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Return ``v`` minus its component in the row space (packed)."""
        v = as_bits(v)
        if v.size != self.cols:
            raise DimensionMismatch(f"vector of length {v.size} against {self.cols} columns")
        w = _pack(v.reshape(1, -1))[0]
        for i, c in enumerate(self.pivots):
            if (w[c // _WORD] >> np.uint64(c % _WORD)) & np.uint64(1):
                w ^= self._words[i]
        return w

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()


def rowspace_contains(m: BitMatrix, v: np.ndarray | str | Sequence[int]) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    return RowReducer(m).contains(as_bits(v))


def subspace_leq(a: BitMatrix, b: BitMatrix) -> bool:
    """True iff rs(a) is contained in rs(b)."""
    if a.cols != b.cols:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return rank(b) == rank(vstack(b, a))


def first_outside(a: BitMatrix, b: BitMatrix) -> int | None:
    """Index of the first row of ``a`` outside rs(b), or None."""
    if a.cols != b.cols:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    red = RowReducer(b)
    dense = a.to_array()
    for i in range(a.rows):
        if not red.contains(dense[i]):
            return i
    return None


def quotient_dim(kernel_of: BitMatrix, rowspace_of: BitMatrix) -> int:
    """dim ker(kernel_of) / rs(rowspace_of); the pair must form a complex."""
    if kernel_of.cols != rowspace_of.cols:
        raise DimensionMismatch(f"{kernel_of.shape} vs {rowspace_of.shape}")
    if not (kernel_of @ rowspace_of.T).is_zero():
        raise ComplexError("rs(rowspace_of) is not inside ker(kernel_of)")
    return (kernel_of.cols - rank(kernel_of)) - rank(rowspace_of)


class IncrementalBasis:
    """Echelon basis that grows one vector at a time."""

    def __init__(self, cols: int):
        self.cols = cols
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, w: np.ndarray) -> np.ndarray:
        for row, c in zip(self._rows, self._pivots):
            if (w[c // _WORD] >> np.uint64(c % _WORD)) & np.uint64(1):
                w = w ^ row
        return w

    def add(self, v: np.ndarray) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        w = self._reduce(_pack(as_bits(v).reshape(1, -1))[0])
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        word = int(nz[0])
        low = int(w[word] & (~w[word] + np.uint64(1)))
        self._pivots.append(word * _WORD + low.bit_length() - 1)
        self._rows.append(w)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self._reduce(_pack(as_bits(v).reshape(1, -1))[0]).any()


def independent_extension(base: BitMatrix, candidates: BitMatrix) -> list[int]:
    """Greedy pick of candidate rows that are independent modulo rs(base)."""
    basis = IncrementalBasis(base.cols)
    for row in base.to_array():
        basis.add(row)
    return [i for i, row in enumerate(candidates.to_array()) if basis.add(row)]


def inverse(m: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix."""
    n, c = m.shape
    if n != c:
        raise DimensionMismatch(f"inverse of non-square {m.shape}")
    aug = hstack(m, BitMatrix.identity(n))
    red, r, pivots = rref(aug)
    if r < n or pivots[n - 1] >= n:
        raise ValueError("matrix is singular over GF(2)")
    return red.take_cols(range(n, 2 * n))
