"""Homomorphic logical measurement gadgets for CSS surface codes."""

from __future__ import annotations

from .cell2 import (
    CellComplex2,
    EdgePath,
    build_cylinder,
    build_planar_patch,
    build_square,
    build_torus,
    close_rough_boundaries,
    compose_loops,
    css_of_complex,
    planar_two_qubit_patch,
    surface_distance,
    torus_loop,
)
from .cover import CellMap, Deck, build_covering_ancilla, gate_matrix, lift_deck, verify_cellmap
from .csscode import ChainComplex3, CssCode, css_from_checks, from_chain, min_distance_x, min_distance_z, to_chain
from .decoding import DecodingGraph, MatchingDecoder, matching_decode
from .f2la import BitMatrix, kernel_basis, quotient_dim, rank, rowspace_contains, rref, subspace_leq
from .gadget import (
    HomGadget,
    MeasuredGroup,
    effective_x_distance,
    measured_group,
    shor_gadget,
    stabilizer_preservation_check,
    steane_gadget,
    validate,
)
from .simproto import (
    NoiseModel,
    PauliFrame,
    apply_interaction,
    readout_ancilla,
    run_homomorphic,
    run_shor_repeated,
    shor_accuracy,
)

__version__ = "0.1.0"
