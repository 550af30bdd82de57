from __future__ import annotations

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hommeas.cell2 import (
    EdgePath,
    build_cylinder,
    build_torus,
    css_of_complex,
    planar_two_qubit_patch,
    shortest_path,
    surface_distance,
    torus_loop,
)
from hommeas.cover import (
    CellMap,
    Deck,
    build_covering_ancilla,
    default_width,
    gate_matrix,
    identity_cellmap,
    lift_deck,
    lift_path,
    rough_boundary_ancilla,
    verify_cellmap,
)
from hommeas.csscode import logical_coefficients
from hommeas.errors import CellComplexError, ContractibleLoop


def cover(d, name, width=None):
    t = build_torus(d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return t, build_covering_ancilla(t, torus_loop(t, name), width)


def test_deck_of_presets():
    t = build_torus(3)
    assert lift_deck(t, torus_loop(t, "Z1")) == Deck(1, 0)
    assert lift_deck(t, torus_loop(t, "Z2")) == Deck(0, 1)
    assert lift_deck(t, torus_loop(t, "Z1Z2")) == Deck(1, 1)
    assert Deck(2, 0).is_primitive is False and Deck(0, 0).is_trivial


def test_lift_path_positions():
    t = build_torus(3)
    pts = lift_path(t, torus_loop(t, "Z1"))
    assert pts == [(0, 0), (1, 0), (2, 0), (3, 0)]


def test_deck_invariant_under_face_detour(torus3):
    # replace the step 0 -> 1 along row 0 by a detour around face 0
    straight = EdgePath.from_edges(torus3, [0, 1, 2], start=0)
    detour = EdgePath.from_edges(torus3, [9, 3, 10, 1, 2], start=0)
    assert lift_deck(torus3, detour) == lift_deck(torus3, straight)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.lists(st.integers(0, 3), min_size=1, max_size=25))
def test_deck_parity_matches_homology(d, moves):
    t = build_torus(d)
    nbrs = t.vertex_neighbors()
    u, edges = 0, []
    for m in moves:
        v, e = nbrs[u][m % len(nbrs[u])]
        edges.append(e)
        u = v
    back = shortest_path(t, u, 0)
    loop = EdgePath(t, 0, EdgePath.from_edges(t, edges, start=0).steps + back.steps)
    deck = lift_deck(t, loop)
    coeffs = logical_coefficients(css_of_complex(t), loop.edge_vector())
    assert [deck.r % 2, deck.s % 2] == coeffs.tolist()


def test_contractible_loop_rejected(torus3):
    face = EdgePath.from_edges(torus3, list(torus3.faces[0]), start=0)
    with pytest.raises(ContractibleLoop):
        build_covering_ancilla(torus3, face)


def test_non_torus_rejected():
    cyl = build_cylinder(3, 3)
    with pytest.raises(CellComplexError):
        lift_deck(cyl, EdgePath.from_edges(cyl, [0, 1, 2], start=0))


def test_open_walk_rejected(torus3):
    with pytest.raises(CellComplexError):
        build_covering_ancilla(torus3, EdgePath.from_edges(torus3, [0, 1], start=0))


def test_non_primitive_warns(torus3):
    twice = torus_loop(torus3, "Z1") + torus_loop(torus3, "Z1")
    with pytest.warns(UserWarning, match="not primitive"):
        build_covering_ancilla(torus3, twice, width=2)


def test_width_one_is_repetition_code(torus3):
    with pytest.warns(UserWarning, match="repetition"):
        cov = build_covering_ancilla(torus3, torus_loop(torus3, "Z1"), width=1)
    code = css_of_complex(cov.ancilla)
    assert (code.n, code.k, code.d_z, code.d_x) == (3, 1, 3, 1)


@pytest.mark.parametrize("d", [3, 5])
@pytest.mark.parametrize("name", ["Z1", "Z2", "Z1Z2"])
def test_auto_width_ancilla(d, name):
    t, cov = cover(d, name)
    code = css_of_complex(cov.ancilla)
    assert code.k == 1
    assert min(surface_distance(cov.ancilla)) == d
    assert cov.width >= default_width(d)
    assert verify_cellmap(cov.cellmap).ok
    g = gate_matrix(cov.cellmap).to_array()
    assert (g.sum(axis=0) == 1).all()


@pytest.mark.parametrize("name", ["Z1", "Z1Z2"])
def test_width_monotone(name):
    prev_n, prev_dx = 0, 0
    for w in range(1, 6):
        _, cov = cover(5, name, w)
        n = cov.ancilla.n_edges
        dz, dx = surface_distance(cov.ancilla)
        assert n > prev_n and dx > prev_dx
        assert dx == 2 * w - 1
        prev_n, prev_dx = n, dx


def test_sizes_of_presets():
    assert cover(3, "Z1Z2")[1].ancilla.n_edges == 18
    _, c5 = cover(5, "Z1Z2")
    g = gate_matrix(c5.cellmap).to_array()
    assert g.shape == (50, 50) and (g.sum(axis=1) == 1).all()
    _, c4 = cover(5, "Z1Z2", 4)
    g4 = gate_matrix(c4.cellmap).to_array()
    assert c4.ancilla.n_edges == 70
    assert int((g4.sum(axis=1) >= 2).sum()) == 20


def test_identity_cellmap():
    t = build_torus(3)
    cert = verify_cellmap(identity_cellmap(t))
    assert cert.ok and cert.walks_ok
    assert cert.face_residual.is_zero() and cert.vertex_residual.is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mutated_cellmap_reports_offender(seed):
    _, cov = cover(3, "Z1Z2")
    cm = cov.cellmap
    rng = np.random.default_rng(seed)
    j = int(rng.integers(cm.source.n_edges))
    edge_map = cm.edge_map.copy()
    edge_map[j] = (edge_map[j] + 1 + rng.integers(cm.target.n_edges - 1)) % cm.target.n_edges
    bad = CellMap(cm.source, cm.target, cm.vertex_map, edge_map, cm.face_map)
    cert = verify_cellmap(bad)
    assert not cert.ok
    faces_with_j = {f for f, face in enumerate(cm.source.faces) if j in face}
    assert j in cert.bad_edges or faces_with_j & set(cert.bad_faces)


def test_cellmap_json_roundtrip():
    _, cov = cover(3, "Z1")
    again = CellMap.from_json(cov.cellmap.to_json())
    assert np.array_equal(again.edge_map, cov.cellmap.edge_map)
    assert again.gamma1() == cov.cellmap.gamma1()


def test_cellmap_shape_checks(torus3):
    with pytest.raises(CellComplexError):
        CellMap(torus3, torus3, np.arange(9), np.arange(17), np.arange(9))
    with pytest.raises(CellComplexError):
        CellMap(torus3, torus3, np.arange(9), np.full(18, 40), np.arange(9))


def test_rough_boundary_ancilla():
    p = planar_two_qubit_patch(3)
    anc, gamma = rough_boundary_ancilla(p, {"left", "right_upper"})
    assert gamma.shape == (47, 49)
    g = gamma.to_array()
    assert not g[:, 47:].any() and np.array_equal(g[:, :47], np.eye(47, dtype=np.uint8))
    assert css_of_complex(anc).k == 1
