"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; each test prints its verdict
line (visible even without ``-s``) and fails if the criterion fails.
"""

from __future__ import annotations

import itertools
import math
import time
import warnings

import numpy as np
import pytest

from conftest import brute_effdist, random_css, span_set
from hommeas.cell2 import build_torus, css_of_complex, surface_distance, torus_loop
from hommeas.cli import main
from hommeas.cover import verify_cellmap
from hommeas.csscode import css_from_checks, min_distance_x, min_distance_z, same_z_class
from hommeas.f2la import BitMatrix, quotient_dim, rank, rowspace_contains, subspace_leq
from hommeas.gadget import (
    HomGadget,
    check_conditions,
    effective_x_distance,
    measured_group,
    stabilizer_preservation_check,
    steane_gadget,
)
from hommeas.pipeline import PRESETS, build_covering_gadget, size_table
from hommeas.simproto import NoiseModel, run_homomorphic, run_shor_repeated, shor_accuracy


@pytest.fixture
def verdict(capsys):
    def report(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return report


def _gadget(d, loop, width=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_covering_gadget(d, loop, width)


def test_criterion_1_toric_parameters(verdict):
    t0 = time.perf_counter()
    ok, notes = True, []
    for d in (2, 3, 4, 5):
        torus = build_torus(d)
        code = css_of_complex(torus)
        dz, dx = surface_distance(torus)
        ok &= (code.n, code.k, dz, dx) == (2 * d * d, 2, d, d)
        notes.append(f"d={d}: [[{code.n},{code.k}]] d_z={dz} d_x={dx}")
    code3 = css_of_complex(build_torus(3))
    ez = min_distance_z(code3, method="enumerate")
    ex = min_distance_x(code3, method="enumerate")
    ok &= ez.exact and ex.exact and (ez.value, ex.value) == (3, 3)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10
    verdict(1, "toric code [[2d^2,2,d]] for d=2..5", ok, "; ".join(notes) + f"; {elapsed:.2f}s")


def _mutation_sound(g: HomGadget, rng: np.random.Generator, count: int) -> tuple[bool, int]:
    base = g.gamma.to_array()
    failing = 0
    for _ in range(count):
        a = base.copy()
        i, j = int(rng.integers(g.n)), int(rng.integers(g.m))
        a[i, j] ^= 1
        gm = BitMatrix.from_array(a, cols=g.m)
        rep = check_conditions(g.data, g.ancilla, gm)
        pres = stabilizer_preservation_check(HomGadget(g.data, g.ancilla, gm)).ok
        if rep.ok:
            if not pres:
                return False, failing
            continue
        failing += 1
        if not rep.condition1:
            lhs = g.ancilla.h_z @ gm.T
            if not np.array_equal(lhs.row(rep.row1), rep.witness1) or rowspace_contains(g.data.h_z, rep.witness1):
                return False, failing
        if not rep.condition2:
            lhs = g.data.h_x @ gm
            if not np.array_equal(lhs.row(rep.row2), rep.witness2) or rowspace_contains(g.ancilla.h_x, rep.witness2):
                return False, failing
        if pres:
            return False, failing
    return True, failing


def test_criterion_2_gadget_validity(verdict):
    rng = np.random.default_rng(2024)
    ok, notes = True, []
    for d, loop in ((3, "Z1"), (3, "Z1Z2"), (5, "Z1Z2")):
        b = _gadget(d, loop)
        g = b.gadget
        cond = check_conditions(g.data, g.ancilla, g.gamma)
        cert = verify_cellmap(b.cover.cellmap)
        exact = cert.ok and cert.face_residual.is_zero() and cert.vertex_residual.is_zero()
        sound, failing = _mutation_sound(g, rng, 100)
        ok &= cond.ok and stabilizer_preservation_check(g).ok and exact and sound
        notes.append(f"{loop} d={d}: valid, {failing}/100 mutants rejected with witness")
    verdict(2, "gadget validity and mutation soundness", ok, "; ".join(notes))


def test_criterion_3_measured_group(verdict):
    ok, notes = True, []
    for loop in ("Z1", "Z1Z2"):
        b = _gadget(3, loop)
        mg = measured_group(b.gadget)
        target = torus_loop(b.torus, loop).edge_vector()
        ok &= mg.rank == 1 and same_z_class(b.data, mg.basis.row(0), target)
        notes.append(f"{loop}: rank {mg.rank}")
    steane = measured_group(steane_gadget(css_of_complex(build_torus(3))))
    ok &= steane.rank == 2
    notes.append(f"Steane: rank {steane.rank}")
    verdict(3, "measured group cosets", ok, "; ".join(notes))


def test_criterion_4_ancilla_properties(verdict):
    t0 = time.perf_counter()
    ok, notes = True, []
    for d in (3, 5):
        for loop in PRESETS:
            b = _gadget(d, loop)
            g = b.gadget
            d_anc = min(surface_distance(b.cover.ancilla))
            bound = min(d, d_anc)
            if d == 3:
                eff = brute_effdist(g)
                graph = effective_x_distance(g).value
                ok &= eff == graph
            else:
                res = effective_x_distance(g, max_length=d + 2)
                eff = res.lower_bound
            ok &= g.ancilla.k == 1 and d_anc == d and eff >= bound
            notes.append(f"d={d} {loop}: k'={g.ancilla.k} d_A={d_anc} effdist>={eff}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    verdict(4, "auto-width ancilla k'=1, d_A=d, effective distance bound", ok, "; ".join(notes) + f"; {elapsed:.1f}s")


def test_criterion_5_shor_formula(verdict):
    t0 = time.perf_counter()
    ok, worst = True, 0.0
    trials = 100_000
    for i, (p, w) in enumerate(itertools.product((0.01, 0.05, 0.10), (3, 5, 9))):
        s = run_shor_repeated(None, np.ones(w, dtype=np.uint8), p, 1, trials, seed=500 + i)
        q = shor_accuracy(p, w)
        sigma = math.sqrt(q * (1 - q) / trials)
        z = abs(s.accuracy - q) / sigma
        worst = max(worst, z)
        ok &= z <= 3
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    verdict(5, "single-round Shor accuracy 1/2 + (1/2)(1-2p)^w", ok, f"max |z| = {worst:.2f}; {elapsed:.1f}s")


def test_criterion_6_single_shot_scaling(verdict):
    t0 = time.perf_counter()
    stats = {}
    for d in (3, 5):
        g = _gadget(d, "Z1").gadget
        stats[d] = run_homomorphic(g, NoiseModel.uniform(0.01, seed=6), 100_000)
    zero = run_homomorphic(_gadget(3, "Z1").gadget, NoiseModel(seed=6), 10_000)
    lo3, _ = stats[3].ci
    _, hi5 = stats[5].ci
    ok = stats[5].rate < stats[3].rate and hi5 < lo3 and zero.readout_errors == 0
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    detail = (
        f"d=3 rate {stats[3].rate:.5f} CI {stats[3].ci[0]:.5f}-{stats[3].ci[1]:.5f}; "
        f"d=5 rate {stats[5].rate:.5f} CI {stats[5].ci[0]:.5f}-{stats[5].ci[1]:.5f}; zero-noise errors {zero.readout_errors}; "
        f"{elapsed:.1f}s"
    )
    verdict(6, "readout error decreases from d=3 to d=5 at p=0.01", ok, detail)


def test_criterion_7_size_report(verdict, capsys):
    rows = size_table((3, 5), PRESETS)
    code = main(["report", "--ds", "3,5", "--loops", ",".join(PRESETS)])
    text = capsys.readouterr().out
    ok = code == 0 and len(rows) == 6 and all(math.isfinite(r["m"]) and r["m"] > 0 for r in rows)
    ok &= len(text.splitlines()) == 7
    detail = "; ".join(f"d={r['d']} {r['loop']}: m={r['m']} n={r['n']} w={r['w']} ratio={r['ratio']}" for r in rows)
    verdict(7, "ancilla size report m, n, w, d, m*d/(n*w)", ok, detail)


def test_criterion_8_determinism(verdict, tmp_path, capsys):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        codes = [
            main(["build", "--shape", "torus", "--d", "3", "--out-dir", str(d)]),
            main(["gadget", "build", "--d", "3", "--loop", "Z1", "--out", str(d / "g.json"), "--report", str(d / "r.json")]),
            main(["simulate", "--bundle", str(d / "g.json"), "--p", "0.01:0.05:lin:3", "--trials", "20000", "--seed", "7", "--out", str(d / "h.csv")]),
            main(["simulate", "--bundle", str(d / "g.json"), "--protocol", "shor", "--p", "0.05", "--trials", "20000", "--seed", "7", "--out", str(d / "s.csv")]),
        ]
        capsys.readouterr()
        files = ("complex.json", "code.json", "g.json", "r.json", "h.csv", "s.csv")
        outputs.append((codes, [(d / f).read_bytes() for f in files]))
    ok = outputs[0][0] == [0, 0, 0, 0] and outputs[0] == outputs[1]
    verdict(8, "byte-identical CSV/JSON across seeded runs", ok, "6 artifacts compared")


def _brute_dz(hx: np.ndarray, hz: np.ndarray) -> int | None:
    n = hx.shape[1]
    vecs = ((np.arange(1, 1 << n)[:, None] >> np.arange(n)) & 1).astype(np.int64)
    in_ker = ~((vecs @ hx.T.astype(np.int64)) & 1).any(axis=1)
    stabs = span_set(hz)
    weights = [int(v.sum()) for v in vecs[in_ker] if tuple(int(x) for x in v) not in stabs]
    return min(weights) if weights else None


def test_criterion_9_oracle_equivalence(verdict):
    rng = np.random.default_rng(9)
    checked = agree = 0
    f2_ok = True
    while checked < 50:
        n = int(rng.integers(4, 13))
        hx, hz = random_css(rng, n, int(rng.integers(1, n // 2 + 1)), int(rng.integers(1, n // 2 + 1)))
        code = css_from_checks(BitMatrix.from_array(hx, cols=n), BitMatrix.from_array(hz, cols=n))
        # f2la against exhaustive spans
        sx, sz = span_set(hx), span_set(hz)
        f2_ok &= 2 ** rank(code.h_x) == len(sx) and 2 ** rank(code.h_z) == len(sz)
        f2_ok &= subspace_leq(code.h_x, code.h_z) == (sx <= sz)
        for _ in range(4):
            v = rng.integers(0, 2, n).astype(np.uint8)
            f2_ok &= rowspace_contains(code.h_z, v) == (tuple(int(x) for x in v) in sz)
        ker = {v for v in itertools.product((0, 1), repeat=n) if not ((hx.astype(np.int64) @ np.array(v)) & 1).any()}
        f2_ok &= quotient_dim(code.h_x, code.h_z) == len(ker).bit_length() - 1 - (len(sz).bit_length() - 1)
        if code.k == 0:
            continue
        checked += 1
        agree += min_distance_z(code, method="enumerate").value == _brute_dz(hx, hz)
    ok = agree == 50 and f2_ok
    verdict(9, "kernel enumeration and f2la agree with brute force", ok, f"{agree}/50 distances agree; f2la {'ok' if f2_ok else 'mismatch'}")
