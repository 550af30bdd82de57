"""Pauli-frame Monte Carlo of logical Z-measurement protocols.

Only CNOTs and Z-basis measurements act on CSS states here, so X and Z
error components evolve independently and a frame of two bit vectors is an
exact description of every sampled run. Noise is phenomenological: i.i.d.
flips on the data before the interaction, residual X flips on the freshly
prepared ancilla, and flips of the ancilla readout bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.stats import binomtest

from .decoding import MatchingDecoder
from .errors import DimensionMismatch
from .f2la import BitMatrix, as_bits
from .gadget import HomGadget, measured_group
from .csscode import CssCode

# trials per independently seeded block; fixed so results do not depend on batching
BLOCK = 4096


@dataclass(frozen=True)
class NoiseModel:
    """Phenomenological noise strengths and the master seed.

    ``p_anc_z`` adds Z flips on the ancilla, which propagate back to the
    data through the CNOTs; it defaults to zero.
    """

    p_data: float = 0.0
    p_anc_residual: float = 0.0
    p_meas: float = 0.0
    p_anc_z: float = 0.0
    seed: int | None = 0

    def __post_init__(self):
        for name in ("p_data", "p_anc_residual", "p_meas", "p_anc_z"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} = {p} is not a probability")

    @classmethod
    def uniform(cls, p: float, seed: int | None = 0) -> NoiseModel:
        return cls(p_data=p, p_anc_residual=p, p_meas=p, seed=seed)


@dataclass
class PauliFrame:
    """X and Z error bits of one block; 2D arrays hold a batch of frames."""

    x: np.ndarray
    z: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.uint8)
        self.z = np.zeros_like(self.x) if self.z is None else np.asarray(self.z, dtype=np.uint8)
        if self.x.shape != self.z.shape:
            raise DimensionMismatch(f"x has shape {self.x.shape}, z has {self.z.shape}")

    @classmethod
    def zeros(cls, n: int, batch: int | None = None) -> PauliFrame:
        shape = (n,) if batch is None else (batch, n)
        return cls(np.zeros(shape, dtype=np.uint8), np.zeros(shape, dtype=np.uint8))

    @property
    def size(self) -> int:
        return self.x.shape[-1]

    def __xor__(self, other: PauliFrame) -> PauliFrame:
        return PauliFrame(self.x ^ other.x, self.z ^ other.z)

    def copy(self) -> PauliFrame:
        return PauliFrame(self.x.copy(), self.z.copy())


def _mul(a: np.ndarray, m: np.ndarray) -> np.ndarray:
    return ((a.astype(np.int64) @ m.astype(np.int64)) & 1).astype(np.uint8)


def apply_interaction(gamma: BitMatrix, data: PauliFrame, anc: PauliFrame) -> tuple[PauliFrame, PauliFrame]:
    """Push frames through the CNOTs (data controls, ancilla targets).

    X flows from control to target and Z from target to control.
    """
    if data.size != gamma.rows or anc.size != gamma.cols:
        raise DimensionMismatch(f"frames of sizes {data.size}, {anc.size} do not fit a {gamma.shape} gate matrix")
    g = gamma.to_array()
    new_anc = PauliFrame(anc.x ^ _mul(data.x, g), anc.z.copy())
    new_data = PauliFrame(data.x.copy(), data.z ^ _mul(anc.z, g.T))
    return new_data, new_anc


class MeasurementResult(NamedTuple):
    logical_outcomes: np.ndarray
    check_syndrome: np.ndarray
    readout: np.ndarray
    correction: np.ndarray


class _Readout:
    """Precomputed pieces for decoding ancilla readouts."""

    def __init__(self, gadget: HomGadget, decoder: str = "exact"):
        self.gadget = gadget
        anc = gadget.ancilla
        self.h_z = anc.h_z.to_array()
        self.h_x = anc.h_x.to_array()
        self.group = measured_group(gadget)
        self.vectors = self.group.ancilla_vectors.to_array()
        self.decoder = MatchingDecoder(anc.h_z, decoder) if anc.h_z.rows else None

    def read(self, anc_x: np.ndarray, flips: np.ndarray, codeword_bits: np.ndarray | None):
        readout = anc_x ^ flips
        if codeword_bits is not None and self.h_x.shape[0]:
            readout = readout ^ _mul(codeword_bits, self.h_x)
        syndrome = _mul(readout, self.h_z.T)
        if self.decoder is None:
            correction = np.zeros_like(readout)
        else:
            correction = self.decoder.decode_batch(syndrome.reshape(-1, syndrome.shape[-1])).reshape(readout.shape)
        logical = _mul(readout ^ correction, self.vectors.T)
        return MeasurementResult(logical, syndrome, readout, correction)


def readout_ancilla(
    anc_frame: PauliFrame,
    gadget: HomGadget,
    noise: NoiseModel,
    decoder: str = "exact",
    rng: np.random.Generator | None = None,
    sample_codeword: bool = True,
) -> MeasurementResult:
    """Measure every ancilla qubit in Z, decode, and read the logical bits.

    The ancilla starts in logical |0...0>, so the noiseless readout is a
    uniformly random X-stabilizer codeword; with ``sample_codeword`` that
    codeword is drawn explicitly.
    """
    rng = np.random.default_rng(noise.seed) if rng is None else rng
    shape = anc_frame.x.shape
    flips = (rng.random(shape) < noise.p_meas).astype(np.uint8)
    bits = None
    if sample_codeword:
        bits = rng.integers(0, 2, size=shape[:-1] + (gadget.ancilla.h_x.rows,), dtype=np.uint8)
    return _Readout(gadget, decoder).read(anc_frame.x, flips, bits)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return (float(ci.low), float(ci.high))


class RunStats(NamedTuple):
    trials: int
    readout_errors: int
    data_errors: int
    seed: int | None

    @property
    def rate(self) -> float:
        return self.readout_errors / self.trials if self.trials else float("nan")

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.readout_errors, self.trials)

    @property
    def data_rate(self) -> float:
        return self.data_errors / self.trials if self.trials else float("nan")

    @property
    def data_ci(self) -> tuple[float, float]:
        return wilson_interval(self.data_errors, self.trials)


def _base_seed(seed: int | None) -> int:
    return int(np.random.SeedSequence().entropy) if seed is None else int(seed)


def _in_rowspace_mod2(rows: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Per row of ``vecs``: is it in the span of ``rows``? (small k only)"""
    k = rows.shape[0]
    if k == 0:
        return ~vecs.any(axis=1)
    span = np.array([[(i >> j) & 1 for j in range(k)] for i in range(1 << k)], dtype=np.int64)
    span = (span @ rows.astype(np.int64)) & 1
    keys = {tuple(r) for r in span.tolist()}
    return np.array([tuple(v) in keys for v in vecs.tolist()], dtype=bool)


def run_homomorphic(
    gadget: HomGadget,
    noise: NoiseModel,
    trials: int,
    decoder: str = "exact",
    sample_codeword: bool = True,
) -> RunStats:
    """Monte Carlo of one gadget round.

    Per trial: sample data X/Z and ancilla X/Z errors, apply the CNOTs,
    read out with measurement flips and decode. The reference value of each
    measured logical is its parity on the data X error left after ideal
    decoding of the data, so a readout error means the protocol's answer
    differs from the data's logical eigenvalue. Data corruption counts Z
    errors that, after ideal decoding, act as a logical outside the measured
    group.
    """
    if trials < 0:
        raise ValueError("trials must be non-negative")
    data = gadget.data
    reader = _Readout(gadget, decoder)
    if reader.group.rank == 0:
        raise ValueError("gadget measures no logical operator")
    measured_data = reader.group.basis.to_array()
    measured_coeffs = reader.group.coefficients(data)
    lx = data.logicals_x.to_array()
    dec_x = MatchingDecoder(data.h_z, decoder) if data.h_z.rows else None
    dec_z = MatchingDecoder(data.h_x, decoder) if data.h_x.rows else None
    hz, hx = data.h_z.to_array(), data.h_x.to_array()

    readout_errors = data_errors = 0
    n, m = gadget.n, gadget.m
    base = _base_seed(noise.seed)
    for b, start in enumerate(range(0, trials, BLOCK)):
        size = min(BLOCK, trials - start)
        rng = np.random.default_rng(np.random.SeedSequence([base, b]))
        dx = (rng.random((size, n)) < noise.p_data).astype(np.uint8)
        dz = (rng.random((size, n)) < noise.p_data).astype(np.uint8)
        ax = (rng.random((size, m)) < noise.p_anc_residual).astype(np.uint8)
        az = (rng.random((size, m)) < noise.p_anc_z).astype(np.uint8)
        flips = (rng.random((size, m)) < noise.p_meas).astype(np.uint8)
        bits = None
        if sample_codeword:
            bits = rng.integers(0, 2, size=(size, gadget.ancilla.h_x.rows), dtype=np.uint8)

        data_frame, anc_frame = apply_interaction(gadget.gamma, PauliFrame(dx, dz), PauliFrame(ax, az))
        result = reader.read(anc_frame.x, flips, bits)

        residual_x = dx if dec_x is None else dx ^ dec_x.decode_batch(_mul(dx, hz.T))
        truth = _mul(residual_x, measured_data.T)
        readout_errors += int((result.logical_outcomes != truth).any(axis=1).sum())

        residual_z = data_frame.z if dec_z is None else data_frame.z ^ dec_z.decode_batch(_mul(data_frame.z, hx.T))
        coeffs = _mul(residual_z, lx.T)
        data_errors += int((~_in_rowspace_mod2(measured_coeffs, coeffs)).sum())
    return RunStats(trials, readout_errors, data_errors, noise.seed)


# Shor baseline ----------------------------------------------------------------


def shor_accuracy(p: float, w: int) -> float:
    """Probability that an ideal w-qubit cat-state readout with independent
    bit-flip probability ``p`` returns the right parity."""
    return 0.5 + 0.5 * (1.0 - 2.0 * p) ** w


class ShorStats(NamedTuple):
    trials: int
    correct: int
    rounds: int
    weight: int
    p: float
    seed: int | None

    @property
    def accuracy(self) -> float:
        return self.correct / self.trials if self.trials else float("nan")

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.correct, self.trials)

    @property
    def errors(self) -> int:
        return self.trials - self.correct


def run_shor_repeated(
    code: CssCode | None, support, p: float, rounds: int, trials: int, seed: int | None = 0
) -> ShorStats:
    """Majority vote over ``rounds`` cat-state readouts of ``support``.

    The cat state is ideal and each of its w measured bits flips with
    probability ``p``; the data is reset by ideal error correction between
    rounds, so rounds are independent.
    """
    s = as_bits(support)
    if code is not None:
        if s.size != code.n:
            raise DimensionMismatch(f"support has length {s.size}, code has {code.n} qubits")
        if code.h_x.dot(s).any():
            raise ValueError("support is not in ker H_X")
    if rounds < 1 or rounds % 2 == 0:
        raise ValueError("rounds must be a positive odd number")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} is not a probability")
    w = int(s.sum())
    correct = 0
    base = _base_seed(seed)
    for b, start in enumerate(range(0, trials, BLOCK)):
        size = min(BLOCK, trials - start)
        rng = np.random.default_rng(np.random.SeedSequence([base, b]))
        flips = rng.random((size, rounds, w)) < p
        wrong_rounds = (flips.sum(axis=2) & 1).sum(axis=1)
        correct += int((wrong_rounds <= rounds // 2).sum())
    return ShorStats(trials, correct, rounds, w, p, seed)
