"""Decoherence between refreshes: amplitude/phase damping and coherent leakage.

The arithmetic is written once against arrays of shape ``(..., 2, 2)`` so the
memory engine can evolve all cells of a logical qubit in one call; the
``DensityMatrix`` functions are thin wrappers over the batched forms.
Relaxation is toward |up>, the orientation injected by the polarizing contact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidNoiseModel, NegativeTime, OutOfRange
from .qcore import DensityMatrix


@dataclass(frozen=True)
class Markovian:
    """Exponential T1 relaxation and T2 dephasing. ``math.inf`` disables either."""

    t1: float
    t2: float

    def __post_init__(self) -> None:
        if not (self.t1 > 0 and self.t2 > 0):
            raise InvalidNoiseModel("t1 and t2 must be positive")
        if self.t2 > 2 * self.t1:
            raise InvalidNoiseModel(f"unphysical pair: t2={self.t2} > 2*t1={2 * self.t1}")


@dataclass(frozen=True)
class CoherentLeakage:
    """Unitary precession about y at angular rate ``omega`` (rad/s)."""

    omega: float

    def __post_init__(self) -> None:
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise InvalidNoiseModel("omega must be finite and >= 0")


@dataclass(frozen=True)
class Noiseless:
    pass


NoiseModel = Union[Markovian, CoherentLeakage, Noiseless]


@dataclass(frozen=True)
class ChannelParams:
    gamma: float
    lam: float

    def __post_init__(self) -> None:
        _check_unit("gamma", self.gamma)
        _check_unit("lam", self.lam)


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise OutOfRange(f"{name}={value!r} outside [0, 1]")


def markovian_params(dt: float, model: Markovian) -> ChannelParams:
    """Per-step strengths giving populations exp(-dt/t1) and coherences exp(-dt/t2).

    Amplitude damping alone shrinks coherences by exp(-dt/(2 t1)); the phase
    damping strength supplies the remainder.
    """
    gamma = -math.expm1(-dt / model.t1)
    lam = -math.expm1(-dt * (2.0 / model.t2 - 1.0 / model.t1))
    return ChannelParams(gamma, min(1.0, max(0.0, lam)))


# -- batched kernels ------------------------------------------------------


def _relax(rho: np.ndarray, gamma: float, pop_keep: float, coh_keep: float) -> np.ndarray:
    """Move a fraction ``gamma`` of |down> population to |up> (``pop_keep`` = 1 - gamma)
    and scale coherences by ``coh_keep``. Callers pass the keep factors directly
    so they survive when 1 - gamma underflows."""
    out = np.empty_like(rho, dtype=complex)
    out[..., 0, 0] = rho[..., 0, 0] + gamma * rho[..., 1, 1]
    out[..., 1, 1] = pop_keep * rho[..., 1, 1]
    out[..., 0, 1] = coh_keep * rho[..., 0, 1]
    out[..., 1, 0] = coh_keep * rho[..., 1, 0]
    return out


def amplitude_damping_batch(rho: np.ndarray, gamma: float) -> np.ndarray:
    _check_unit("gamma", gamma)
    return _relax(rho, gamma, 1.0 - gamma, math.sqrt(1.0 - gamma))


def phase_damping_batch(rho: np.ndarray, lam: float) -> np.ndarray:
    _check_unit("lam", lam)
    out = np.array(rho, dtype=complex, copy=True)
    keep = math.sqrt(1.0 - lam)
    out[..., 0, 1] *= keep
    out[..., 1, 0] *= keep
    return out


def y_rotation_unitary(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def evolve_batch(rho: np.ndarray, dt: float, model: NoiseModel) -> np.ndarray:
    if dt < 0:
        raise NegativeTime(f"dt={dt!r} is negative")
    if dt == 0 or isinstance(model, Noiseless):
        return np.array(rho, dtype=complex, copy=True)
    if isinstance(model, Markovian):
        # same map as amplitude_damping then phase_damping with markovian_params,
        # written with the exponentials to keep tiny surviving coherences exact
        return _relax(
            rho,
            -math.expm1(-dt / model.t1),
            math.exp(-dt / model.t1),
            math.exp(-dt / model.t2),
        )
    if isinstance(model, CoherentLeakage):
        u = y_rotation_unitary(model.omega * dt)
        return u @ rho @ u.conj().T
    raise TypeError(f"unknown noise model {model!r}")


# -- DensityMatrix API -------------------------------------------------------


def amplitude_damping(rho: DensityMatrix, gamma: float) -> DensityMatrix:
    return DensityMatrix.from_array(amplitude_damping_batch(rho.as_array(), gamma))


def phase_damping(rho: DensityMatrix, lam: float) -> DensityMatrix:
    return DensityMatrix.from_array(phase_damping_batch(rho.as_array(), lam))


def evolve(rho: DensityMatrix, dt: float, model: NoiseModel) -> DensityMatrix:
    return DensityMatrix.from_array(evolve_batch(rho.as_array(), dt, model))
