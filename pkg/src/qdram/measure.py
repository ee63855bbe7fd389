"""Projective Z measurement, magnitude estimation and re-preparation, Zeno survival.

Randomness always comes in as an explicit ``numpy.random.Generator``. Scalar
and batched forms draw from the generator in the same order, so a batched call
over ``n`` cells reproduces ``n`` sequential scalar calls exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

import numpy as np

from .channels import CoherentLeakage, evolve_batch
from .errors import EmptySample, OutOfRange
from .qcore import UP, DensityMatrix, QubitState, apply_relative_phase, rotate_y

Z95 = NormalDist().inv_cdf(0.975)

_PROJ_UP = np.array([[1, 0], [0, 0]], dtype=complex)
_PROJ_DOWN = np.array([[0, 0], [0, 1]], dtype=complex)


class Outcome(enum.Enum):
    Up = "up"
    Down = "down"


class PhasePolicy(enum.Enum):
    Zero = "zero"
    UniformRandom = "uniform_random"


@dataclass(frozen=True)
class Estimate:
    """Estimated |a_up|^2 with a 95% Wilson interval.

    ``n_samples`` is ``None`` for a value known exactly (e.g. right after a
    write), in which case the interval collapses to the point.
    """

    p_hat: float
    n_samples: int | None
    ci_low: float
    ci_high: float

    def __post_init__(self) -> None:
        if self.n_samples is not None and self.n_samples < 1:
            raise OutOfRange("n_samples must be positive")
        if not (0.0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1.0):
            raise OutOfRange(f"inconsistent estimate {self}")

    @classmethod
    def exact(cls, p: float) -> Estimate:
        p = min(1.0, max(0.0, p))
        return cls(p, None, p, p)


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for work item ``index`` under a master ``seed``.

    Keyed on the item, not on the worker, so totals do not depend on how items
    are distributed over threads.
    """
    ss = np.random.SeedSequence(entropy=seed & 0xFFFF_FFFF_FFFF_FFFF, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def measure_z(rho: DensityMatrix, rng: np.random.Generator) -> tuple[Outcome, DensityMatrix]:
    if rng.random() < rho.p_up:
        return Outcome.Up, DensityMatrix.diag(1.0, 0.0)
    return Outcome.Down, DensityMatrix.diag(0.0, 1.0)


def measure_z_batch(rho: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Measure every matrix in ``rho`` (shape ``(n, 2, 2)``).

    Returns a boolean array (True = Up) and the collapsed states.
    """
    ups = rng.random(rho.shape[0]) < rho[:, 0, 0].real
    post = np.where(ups[:, None, None], _PROJ_UP, _PROJ_DOWN)
    return ups, post


def wilson_interval(successes: int, n: int, z: float = Z95) -> tuple[float, float]:
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    # rounding can push the bounds a hair past p at the endpoints
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


def estimate_from_counts(n_up: int, n: int) -> Estimate:
    if n <= 0:
        raise EmptySample("cannot estimate from an empty sample")
    lo, hi = wilson_interval(n_up, n)
    return Estimate(n_up / n, n, lo, hi)


def estimate_up_probability(outcomes: Sequence[Outcome]) -> Estimate:
    n_up = sum(1 for o in outcomes if o is Outcome.Up)
    return estimate_from_counts(n_up, len(outcomes))


def recreate_from_estimate(
    est: Estimate,
    phase_policy: PhasePolicy = PhasePolicy.UniformRandom,
    rng: np.random.Generator | None = None,
) -> QubitState:
    """Fresh |up> quanton, y-rotated so |a_up|^2 = p_hat, then given a relative phase."""
    theta = 2.0 * math.acos(math.sqrt(est.p_hat))
    q = rotate_y(UP, theta)
    if phase_policy is PhasePolicy.UniformRandom:
        if rng is None:
            raise ValueError("UniformRandom phase policy needs a random generator")
        q = apply_relative_phase(q, rng.uniform(0.0, 2.0 * math.pi))
    return q


def recreate_batch(
    p_hat: float, n: int, phase_policy: PhasePolicy, rng: np.random.Generator
) -> np.ndarray:
    """Density matrices of ``n`` cells re-prepared from the same ``p_hat``."""
    a_up = math.sqrt(p_hat)
    a_down = math.sqrt(1.0 - p_hat)
    if phase_policy is PhasePolicy.UniformRandom:
        phases = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, n))
    else:
        phases = np.ones(n, dtype=complex)
    out = np.empty((n, 2, 2), dtype=complex)
    out[:, 0, 0] = p_hat
    out[:, 1, 1] = 1.0 - p_hat
    out[:, 1, 0] = a_up * a_down * phases
    out[:, 0, 1] = np.conj(out[:, 1, 0])
    return out


def zeno_survival_analytic(omega: float, total_time: float, n_measurements: int) -> float:
    """Probability that ``n`` evenly spaced Z measurements all find |up>
    while the spin precesses at ``omega``: cos^2(omega*T / 2n) ** n."""
    if n_measurements < 1:
        raise OutOfRange("n_measurements must be >= 1")
    if omega < 0 or total_time < 0:
        raise OutOfRange("omega and total_time must be >= 0")
    return math.cos(omega * total_time / (2 * n_measurements)) ** (2 * n_measurements)


def zeno_survival_mc(
    omega: float,
    total_time: float,
    n_measurements: int,
    trials: int,
    rng: np.random.Generator,
) -> float:
    if n_measurements < 1 or trials < 1:
        raise OutOfRange("n_measurements and trials must be >= 1")
    if omega < 0 or total_time < 0:
        raise OutOfRange("omega and total_time must be >= 0")
    model = CoherentLeakage(omega)
    dt = total_time / n_measurements
    rho = np.broadcast_to(_PROJ_UP, (trials, 2, 2)).copy()
    alive = np.ones(trials, dtype=bool)
    for _ in range(n_measurements):
        rho = evolve_batch(rho, dt, model)
        ups, rho = measure_z_batch(rho, rng)
        alive &= ups
    return float(alive.mean())
