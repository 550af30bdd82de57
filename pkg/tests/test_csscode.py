from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_css, span_set
from hommeas.cell2 import build_torus, css_of_complex
from hommeas.csscode import (
    CssCode,
    css_from_checks,
    from_chain,
    logical_coefficients,
    min_distance_x,
    min_distance_z,
    same_z_class,
    to_chain,
)
from hommeas.errors import CommutationViolation, DimensionMismatch, KIsZero
from hommeas.f2la import BitMatrix, rowspace_contains


def brute_force_dz(hx: np.ndarray, hz: np.ndarray) -> int | None:
    """Minimum weight over all 2^n vectors in ker H_X but outside rs H_Z."""
    n = hx.shape[1]
    hzm = BitMatrix.from_array(hz, cols=n)
    best = None
    for bits in itertools.product((0, 1), repeat=n):
        v = np.array(bits, dtype=np.uint8)
        w = int(v.sum())
        if w == 0 or (best is not None and w >= best):
            continue
        if ((hx.astype(np.int64) @ v) % 2).any():
            continue
        if not rowspace_contains(hzm, v):
            best = w
    return best


def steane() -> CssCode:
    h = BitMatrix.from_strings(["1010101", "0110011", "0001111"])
    return css_from_checks(h, h)


def test_commutation_violation():
    with pytest.raises(CommutationViolation):
        css_from_checks(BitMatrix.from_strings(["11"]), BitMatrix.from_strings(["10"]))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        css_from_checks(BitMatrix.from_strings(["11"]), BitMatrix.from_strings(["101"]))


def test_steane_parameters():
    c = steane()
    assert (c.n, c.k, c.d_x, c.d_z) == (7, 1, 3, 3)
    assert c.params == "[[7,1,3]]"


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_torus_parameters(d):
    c = css_of_complex(build_torus(d))
    assert (c.n, c.k, c.d_z, c.d_x) == (2 * d * d, 2, d, d)


def test_logical_pairing():
    for c in (steane(), css_of_complex(build_torus(3))):
        pair = (c.logicals_x @ c.logicals_z.T).to_array()
        assert np.array_equal(pair, np.eye(c.k, dtype=np.uint8))
        assert (c.h_x @ c.logicals_z.T).is_zero()
        assert (c.h_z @ c.logicals_x.T).is_zero()


def test_logical_coefficients_and_classes():
    c = css_of_complex(build_torus(3))
    lz = c.logicals_z
    for i in range(c.k):
        e = np.zeros(c.k, dtype=np.uint8)
        e[i] = 1
        assert np.array_equal(logical_coefficients(c, lz.row(i)), e)
    stab = c.h_z.row(0)
    assert same_z_class(c, lz.row(0), lz.row(0) ^ stab)
    assert not same_z_class(c, lz.row(0), lz.row(1))
    with pytest.raises(ValueError):
        logical_coefficients(c, np.eye(1, c.n, 0, dtype=np.uint8)[0])


def test_chain_roundtrip():
    c = css_of_complex(build_torus(3))
    cc = to_chain(c)
    assert cc.d1.shape == (9, 18) and cc.d2.shape == (18, 9)
    assert from_chain(cc) == c


def test_json_roundtrip():
    c = steane()
    assert CssCode.from_json(c.to_json()) == c


def test_k_zero_distance_raises():
    c = css_from_checks(BitMatrix.identity(2), BitMatrix.zeros(0, 2))
    assert c.k == 0
    with pytest.raises(KIsZero):
        min_distance_z(c)


def test_methods_agree_on_torus():
    c = css_of_complex(build_torus(3))
    for method in ("graph", "enumerate", "bounded"):
        r = min_distance_z(c, budget=4, method=method)
        assert r.value == 3 and r.exact
        assert (c.h_x.dot(r.witness) == 0).all()
        assert not c.z_stabilizer_reducer.contains(r.witness)
    assert min_distance_x(c, method="enumerate").value == 3


def test_bounded_inexact_when_budget_too_small():
    c = css_of_complex(build_torus(4))
    r = min_distance_z(c, budget=2, method="bounded")
    assert not r.exact and r.value > 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 9))
def test_distance_matches_brute_force(seed, n):
    rng = np.random.default_rng(seed)
    hx, hz = random_css(rng, n, rng.integers(1, n // 2 + 1), rng.integers(0, n // 2 + 1))
    code = css_from_checks(BitMatrix.from_array(hx, cols=n), BitMatrix.from_array(hz, cols=n))
    if code.k == 0:
        return
    dims = [len(span_set(h)).bit_length() - 1 for h in (hx, hz)]
    assert code.k == n - dims[0] - dims[1]
    assert min_distance_z(code, method="enumerate").value == brute_force_dz(hx, hz)
    assert code.d_z == brute_force_dz(hx, hz)
    assert code.d_x == brute_force_dz(hz, hx)
