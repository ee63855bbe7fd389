"""Quantum erasure: undo a spin read-out by projecting the detector onto (|1>+|2>)/sqrt(2).

Reading the spin entangles it with a two-state analyzer,

    Phi = a_up |up>|1> + a_down |down>|2>,

where |1> (analyzer magnetized +z) means "passed" and |2> (magnetized -z)
means "reflected". Projecting the analyzer onto |1> collapses the spin to
|up>. Projecting it onto the +x state (|1>+|2>)/sqrt(2) leaves the original
superposition, phase included. The -x outcome leaves (a_up, -a_down), which a
Z flip repairs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, ZeroProbabilityBranch
from .qcore import TOL, DensityMatrix, QubitState, _check_finite, make_qubit

ZERO_BRANCH = 1e-15
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class DetectorState:
    c1: complex
    c2: complex

    def __post_init__(self) -> None:
        _check_finite(self.c1, self.c2)
        norm2 = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm2 - 1.0) > TOL:
            raise InvalidState(f"detector norm^2 is {norm2!r}, expected 1")


@dataclass(frozen=True)
class JointState:
    """Amplitudes over |up,1>, |up,2>, |down,1>, |down,2> (in that order)."""

    amps: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        _check_finite(*self.amps)
        norm2 = sum(abs(a) ** 2 for a in self.amps)
        if abs(norm2 - 1.0) > TOL:
            raise InvalidState(f"joint norm^2 is {norm2!r}, expected 1")


@dataclass(frozen=True)
class ProjectionResult:
    residual: QubitState
    probability: float


class Branch(enum.Enum):
    Symmetric = "symmetric"
    Antisymmetric = "antisymmetric"


@dataclass(frozen=True)
class ErasureOutcome:
    branch: Branch
    recovered: QubitState
    branch_probability: float
    phase_flip: bool


DETECTOR_PASSED = DetectorState(1 + 0j, 0j)
DETECTOR_REFLECTED = DetectorState(0j, 1 + 0j)


def symmetric_detector() -> DetectorState:
    return DetectorState(complex(_SQRT_HALF), complex(_SQRT_HALF))


def antisymmetric_detector() -> DetectorState:
    return DetectorState(complex(_SQRT_HALF), complex(-_SQRT_HALF))


def entangle_with_detector(q: QubitState) -> JointState:
    return JointState((q.up, 0j, 0j, q.down))


def _contract(joint: JointState, d: DetectorState) -> tuple[complex, complex]:
    a = joint.amps
    c1, c2 = d.c1.conjugate(), d.c2.conjugate()
    return c1 * a[0] + c2 * a[1], c1 * a[2] + c2 * a[3]


def project_detector(joint: JointState, d: DetectorState) -> ProjectionResult:
    """Apply <d| to the detector factor.

    ``probability`` is the squared norm of the unnormalized spin residual;
    ``residual`` is that vector normalized.
    """
    up, down = _contract(joint, d)
    prob = abs(up) ** 2 + abs(down) ** 2
    if prob < ZERO_BRANCH:
        raise ZeroProbabilityBranch(f"detector outcome {d} has probability {prob:.3g}")
    return ProjectionResult(make_qubit(up, down), min(1.0, prob))


def reduced_quanton(joint: JointState) -> DensityMatrix:
    """Spin density matrix with the detector traced out."""
    a = joint.amps
    m00 = abs(a[0]) ** 2 + abs(a[1]) ** 2
    m11 = abs(a[2]) ** 2 + abs(a[3]) ** 2
    m01 = a[0] * a[2].conjugate() + a[1] * a[3].conjugate()
    return DensityMatrix(complex(m00), m01, m01.conjugate(), complex(m11))


def erase_and_recover(q: QubitState, rng: np.random.Generator) -> ErasureOutcome:
    joint = entangle_with_detector(q)
    sym = project_detector(joint, symmetric_detector())
    if rng.random() < sym.probability:
        return ErasureOutcome(Branch.Symmetric, sym.residual, sym.probability, False)
    anti = project_detector(joint, antisymmetric_detector())
    r = anti.residual
    return ErasureOutcome(Branch.Antisymmetric, QubitState(r.up, -r.down), anti.probability, True)


def erase_and_recover_batch(
    states: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``erase_and_recover`` over spin vectors of shape ``(n, 2)``.

    Returns the recovered vectors and a boolean array marking symmetric branches.
    """
    up, down = states[:, 0], states[:, 1]
    # <+|Phi> = (up, down)/sqrt2 and <-|Phi> = (up, -down)/sqrt2
    p_sym = 0.5 * (np.abs(up) ** 2 + np.abs(down) ** 2)
    symmetric = rng.random(states.shape[0]) < p_sym
    residual_down = np.where(symmetric, down, -down)
    # the conditional Z flip on the antisymmetric branch restores the sign
    fixed_down = np.where(symmetric, residual_down, -residual_down)
    norm = np.sqrt(np.abs(up) ** 2 + np.abs(fixed_down) ** 2)
    out = np.stack([up / norm, fixed_down / norm], axis=1)
    return out, symmetric


def detector_bloch(d: DetectorState) -> tuple[float, float, float]:
    """Bloch vector of the analyzer magnetization: |1> is +z, |2> is -z."""
    cross = d.c1.conjugate() * d.c2
    return 2.0 * cross.real, 2.0 * cross.imag, abs(d.c1) ** 2 - abs(d.c2) ** 2
