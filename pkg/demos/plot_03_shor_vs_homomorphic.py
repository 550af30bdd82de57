"""
Single-shot readout versus repeated cat states
==============================================

One round of a cat-state readout is only as good as the parity of w noisy
bits. The covering gadget instead decodes its ancilla and improves with d.
"""

from __future__ import annotations

import numpy as np

from hommeas.pipeline import build_covering_gadget
from hommeas.simproto import NoiseModel, run_homomorphic, run_shor_repeated, shor_accuracy

p = 0.01
for w in (3, 5, 9):
    s = run_shor_repeated(None, np.ones(w, dtype=np.uint8), p, rounds=1, trials=100_000, seed=1)
    print(f"Shor w={w}: simulated {s.accuracy:.4f}, closed form {shor_accuracy(p, w):.4f}")

# majority voting over repeated rounds helps, at the cost of time
for rounds in (1, 3, 5):
    s = run_shor_repeated(None, np.ones(9, dtype=np.uint8), 0.05, rounds, 100_000, seed=2)
    print(f"Shor w=9 p=0.05 rounds={rounds}: accuracy {s.accuracy:.4f}")

# the homomorphic gadget reads the logical in one shot
for d in (3, 5):
    g = build_covering_gadget(d, "Z1").gadget
    st = run_homomorphic(g, NoiseModel.uniform(p, seed=3), 100_000)
    lo, hi = st.ci
    print(f"covering gadget d={d}: readout error {st.rate:.5f} [{lo:.5f}, {hi:.5f}]")
