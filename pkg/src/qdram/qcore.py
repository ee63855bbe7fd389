"""Single-qubit pure states and 2x2 density matrices.

Amplitudes are plain Python ``complex`` numbers in the {|up>, |down>} basis.
All values are immutable; every operation returns a new object. Batched
numpy counterparts used by the Monte Carlo engine live next to the code that
needs them and are cross-checked against these scalar versions in the tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, NonFinite, OutOfRange, ZeroVector

TOL = 1e-12
"""Tolerance used for every state invariant (norm, trace, hermiticity)."""

_ZERO_NORM = 1e-300


def _check_finite(*values: complex) -> None:
    for v in values:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NonFinite(f"non-finite amplitude {v!r}")


@dataclass(frozen=True)
class QubitState:
    """Pure state ``up|up> + down|down>`` with unit norm."""

    up: complex
    down: complex

    def __post_init__(self) -> None:
        _check_finite(self.up, self.down)
        norm2 = abs(self.up) ** 2 + abs(self.down) ** 2
        if abs(norm2 - 1.0) > TOL:
            raise InvalidState(f"state norm^2 is {norm2!r}, expected 1")

    @property
    def probs(self) -> ProbPair:
        p_up = abs(self.up) ** 2
        return ProbPair(p_up, 1.0 - p_up)

    def as_array(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    m00: complex
    m01: complex
    m10: complex
    m11: complex

    def __post_init__(self) -> None:
        _check_finite(self.m00, self.m01, self.m10, self.m11)
        if abs(self.m00.imag) > TOL or abs(self.m11.imag) > TOL:
            raise InvalidState("diagonal entries must be real")
        if abs(self.m10 - self.m01.conjugate()) > TOL:
            raise InvalidState("matrix is not Hermitian")
        if abs(self.m00.real + self.m11.real - 1.0) > TOL:
            raise InvalidState(f"trace is {self.m00.real + self.m11.real!r}, expected 1")
        if self.m00.real * self.m11.real - abs(self.m01) ** 2 < -TOL:
            raise InvalidState("matrix is not positive semidefinite")
        if self.m00.real < -TOL or self.m11.real < -TOL:
            raise InvalidState("negative population")

    @classmethod
    def from_array(cls, a: np.ndarray) -> DensityMatrix:
        a = np.asarray(a, dtype=complex)
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    @classmethod
    def diag(cls, p_up: float, p_down: float) -> DensityMatrix:
        return cls(complex(p_up), 0j, 0j, complex(p_down))

    def as_array(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]], dtype=complex)

    @property
    def p_up(self) -> float:
        return self.m00.real

    def trace(self) -> float:
        return self.m00.real + self.m11.real

    def det(self) -> float:
        return self.m00.real * self.m11.real - abs(self.m01) ** 2


@dataclass(frozen=True)
class ProbPair:
    """Outcome probabilities (|a_up|^2, |a_down|^2)."""

    p_up: float
    p_down: float

    def __post_init__(self) -> None:
        if not (-TOL <= self.p_up <= 1 + TOL and -TOL <= self.p_down <= 1 + TOL):
            raise OutOfRange(f"probabilities outside [0, 1]: {self}")
        if abs(self.p_up + self.p_down - 1.0) > TOL:
            raise InvalidState(f"probabilities do not sum to 1: {self}")

    @classmethod
    def from_up(cls, p_up: float) -> ProbPair:
        return cls(p_up, 1.0 - p_up)


UP = QubitState(1 + 0j, 0j)
DOWN = QubitState(0j, 1 + 0j)
PLUS = QubitState(complex(math.sqrt(0.5)), complex(math.sqrt(0.5)))


def make_qubit(up: complex, down: complex) -> QubitState:
    """Normalize ``(up, down)`` to a unit vector, keeping the caller's global phase.

    Raises ``NonFinite`` on NaN/Inf and ``ZeroVector`` when both amplitudes vanish.
    """
    up, down = complex(up), complex(down)
    _check_finite(up, down)
    # hypot avoids overflow for huge finite inputs
    norm = math.hypot(abs(up), abs(down))
    if norm < _ZERO_NORM:
        raise ZeroVector("cannot normalize the zero vector")
    return QubitState(up / norm, down / norm)


def fidelity_pure(a: QubitState, b: QubitState) -> float:
    overlap = a.up.conjugate() * b.up + a.down.conjugate() * b.down
    return min(1.0, abs(overlap) ** 2)


def fidelity_mixed(rho: DensityMatrix, q: QubitState) -> float:
    """<q|rho|q>, the fidelity of a density matrix with a pure reference."""
    val = (
        q.up.conjugate() * (rho.m00 * q.up + rho.m01 * q.down)
        + q.down.conjugate() * (rho.m10 * q.up + rho.m11 * q.down)
    ).real
    return min(1.0, max(0.0, val))


def magnitude_fidelity(p: ProbPair, q: ProbPair) -> float:
    """Squared Bhattacharyya overlap of two outcome distributions.

    This ignores relative phase entirely, so it scores exactly the information
    a measure-and-recreate refresh is able to keep.
    """
    bc = math.sqrt(max(p.p_up, 0.0) * max(q.p_up, 0.0)) + math.sqrt(
        max(p.p_down, 0.0) * max(q.p_down, 0.0)
    )
    return min(1.0, bc * bc)


def rotate_y(q: QubitState, theta: float) -> QubitState:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    up = c * q.up - s * q.down
    down = s * q.up + c * q.down
    # renormalize to absorb rounding so the result keeps the 1e-12 invariant
    return make_qubit(up, down)


def apply_relative_phase(q: QubitState, phi: float) -> QubitState:
    return make_qubit(q.up, q.down * cmath.exp(1j * phi))


def to_density(q: QubitState) -> DensityMatrix:
    return DensityMatrix(
        complex(abs(q.up) ** 2),
        q.up * q.down.conjugate(),
        q.down * q.up.conjugate(),
        complex(abs(q.down) ** 2),
    )


def purity(rho: DensityMatrix) -> float:
    return rho.m00.real ** 2 + rho.m11.real ** 2 + 2 * abs(rho.m01) ** 2


def pure_state_of(rho: DensityMatrix) -> QubitState:
    """Recover |psi> from rho = |psi><psi| (global phase fixed so the larger
    amplitude is real and positive). Only meaningful for pure rho."""
    if rho.m00.real >= rho.m11.real:
        return make_qubit(rho.m00, rho.m10)
    return make_qubit(rho.m01, rho.m11)
