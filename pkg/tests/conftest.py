from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from hommeas.f2la import BitMatrix, kernel_basis


@st.composite
def bit_arrays(draw, max_rows=8, max_cols=12, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    bits = draw(st.lists(st.integers(0, 1), min_size=r * c, max_size=r * c))
    return np.array(bits, dtype=np.uint8).reshape(r, c)


def span_set(a: np.ndarray) -> set[tuple[int, ...]]:
    """Every GF(2) combination of the rows of ``a`` (brute force)."""
    r, c = a.shape
    out = set()
    for coeffs in itertools.product((0, 1), repeat=r):
        v = (np.array(coeffs, dtype=np.int64) @ a.astype(np.int64)) % 2 if r else np.zeros(c, dtype=np.int64)
        out.add(tuple(int(x) for x in v))
    return out


def random_css(rng: np.random.Generator, n: int, rx: int, rz: int) -> tuple[np.ndarray, np.ndarray]:
    """Random commuting pair: H_Z rows are drawn from the kernel of H_X."""
    hx = (rng.random((rx, n)) < 0.4).astype(np.uint8)
    kern = kernel_basis(BitMatrix.from_array(hx, cols=n)).to_array()
    if kern.shape[0] == 0:
        return hx, np.zeros((0, n), dtype=np.uint8)
    coeffs = (rng.random((rz, kern.shape[0])) < 0.5).astype(np.int64)
    hz = ((coeffs @ kern.astype(np.int64)) % 2).astype(np.uint8)
    return hx, hz


def brute_effdist(g) -> int:
    """Smallest data footprint over every nontrivial ancilla X-logical.

    Every element of ker H_Z' is enumerated; it is a nontrivial X-logical
    exactly when it anticommutes with some Z-logical of the ancilla.
    """
    kx = kernel_basis(g.ancilla.h_z).to_array().astype(np.int64)
    lz = g.ancilla.logicals_z.to_array().astype(np.int64)
    gd = g.gamma.to_array().astype(np.int64)
    q = kx.shape[0]
    best = None
    for lo in range(0, 1 << q, 1 << 14):
        idx = np.arange(lo, min(lo + (1 << 14), 1 << q))
        coeffs = (idx[:, None] >> np.arange(q)) & 1
        vecs = (coeffs @ kx) % 2
        nontrivial = ((vecs @ lz.T) % 2).any(axis=1)
        sizes = ((vecs @ gd.T) > 0).sum(axis=1)
        if nontrivial.any():
            m = int(sizes[nontrivial].min())
            best = m if best is None else min(best, m)
    return best


@pytest.fixture(scope="session")
def torus3():
    from hommeas.cell2 import build_torus

    return build_torus(3)
