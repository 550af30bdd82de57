"""Exception types shared across the package."""

from __future__ import annotations

import numpy as np


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class ComplexError(ValueError):
    """Two boundary maps do not compose to zero."""


class CommutationViolation(ComplexError):
    """H_X H_Z^T is nonzero, so the checks do not define a CSS code."""


class KIsZero(ValueError):
    """The code encodes no logical qubit, so a distance is undefined."""


class NotGraphlike(ValueError):
    """A check matrix has a column of weight greater than two."""


class CellComplexError(ValueError):
    """Malformed cellulation data."""


class ContractibleLoop(ValueError):
    """A loop lifts to a closed loop in the universal cover."""


class DecoderError(RuntimeError):
    """The decoder could not produce a correction for the syndrome."""


class GadgetViolation(ValueError):
    """Base class for homomorphic-gadget condition failures.

    ``witness`` is a row that lies in the left-hand row space but not in the
    right-hand one; ``row`` is its index in the product matrix.
    """

    def __init__(self, message: str, witness: np.ndarray, row: int):
        super().__init__(message)
        self.witness = witness
        self.row = row


class Condition1Violation(GadgetViolation):
    """rs(H_Z' Gamma^T) is not contained in rs(H_Z)."""


class Condition2Violation(GadgetViolation):
    """rs(H_X Gamma) is not contained in rs(H_X')."""


class FaultToleranceViolation(AssertionError):
    """The effective X-distance falls below min(d_data, d_ancilla)."""
