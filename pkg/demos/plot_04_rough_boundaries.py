"""
Planar patches and rough boundaries
===================================

A planar patch with three rough segments encodes two qubits. Closing some
segments gives an ancilla that measures one of them.
"""

from __future__ import annotations

from hommeas import css_of_complex, planar_two_qubit_patch, surface_distance
from hommeas.cover import rough_boundary_ancilla
from hommeas.gadget import measured_group, validate

patch = planar_two_qubit_patch(3)
data = css_of_complex(patch)
print("segments:", sorted(patch.rough))
print(f"patch: n={data.n} k={data.k} (d_z, d_x)={surface_distance(patch)}")

# keep the left and upper-right segments open, close the lower-right one
ancilla, gamma = rough_boundary_ancilla(patch, {"left", "right_upper"})
g = validate(data, css_of_complex(ancilla), gamma)
mg = measured_group(g)
print("ancilla k:", g.ancilla.k, "measured rank:", mg.rank)
print("logical coefficients:", mg.coefficients(data))
