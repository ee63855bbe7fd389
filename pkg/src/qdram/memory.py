"""Redundant-cell quantum memory with three refresh schemes.

Each logical qubit is held in ``R`` quantum dots. Between refreshes the cells
decohere independently; a refresh is one of

* measure-and-recreate: read all R cells, estimate |a_up|^2, re-inject and
  rotate fresh quantons to that magnitude (relative phase is lost);
* Zeno: observe every cell in the Z basis and do nothing else;
* erasure: entangle with an analyzer and erase the which-spin record, which
  restores the full state but only while the cells are still pure.

Cell states are held as one ``(R, 2, 2)`` array per logical qubit. The
reference state is kept for scoring only; no refresh reads it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Iterator, Union

import numpy as np

from .channels import NoiseModel, evolve_batch
from .erasure import erase_and_recover_batch
from .errors import GeometryViolation, MixedStateCell, NonPositiveInput, OutOfRange, PreconditionError
from .measure import (
    Estimate,
    PhasePolicy,
    estimate_from_counts,
    measure_z_batch,
    recreate_batch,
    substream,
)
from .qcore import DensityMatrix, ProbPair, QubitState, magnitude_fidelity, make_qubit

if TYPE_CHECKING:
    from .config import ExperimentConfig

ERASURE_PURITY_TOL = 1e-9


@dataclass(frozen=True)
class MeasureRecreate:
    period: float
    phase_policy: PhasePolicy = PhasePolicy.UniformRandom
    name = "measure_recreate"

    def __post_init__(self) -> None:
        _check_period(self.period)


@dataclass(frozen=True)
class Zeno:
    interval: float
    name = "zeno"

    def __post_init__(self) -> None:
        _check_period(self.interval)

    @property
    def period(self) -> float:
        return self.interval


@dataclass(frozen=True)
class Erasure:
    period: float
    name = "erasure"

    def __post_init__(self) -> None:
        _check_period(self.period)


RefreshPolicy = Union[MeasureRecreate, Zeno, Erasure]


def _check_period(value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise OutOfRange(f"refresh period must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class MemoryCell:
    state: DensityMatrix
    last_refresh: float


@dataclass(frozen=True)
class LogicalQubit:
    rho: np.ndarray
    last_refresh: np.ndarray
    reference: QubitState | None = None
    stored_estimate: Estimate | None = None
    clock: float = 0.0
    cycle: int = 0
    # per-cell flag: every Zeno observation so far matched the reference's
    # dominant basis state
    survived: np.ndarray | None = None

    @classmethod
    def empty(cls, redundancy: int) -> LogicalQubit:
        if redundancy < 1:
            raise OutOfRange("redundancy must be >= 1")
        rho = np.zeros((redundancy, 2, 2), dtype=complex)
        rho[:, 0, 0] = 1.0
        return cls(rho, np.zeros(redundancy), survived=np.ones(redundancy, dtype=bool))

    @property
    def redundancy(self) -> int:
        return self.rho.shape[0]

    @property
    def cells(self) -> list[MemoryCell]:
        return [
            MemoryCell(DensityMatrix.from_array(r), float(t))
            for r, t in zip(self.rho, self.last_refresh)
        ]


@dataclass(frozen=True)
class RefreshReport:
    cycle_index: int
    p_hat: float
    magnitude_fidelity_vs_reference: float
    full_fidelity_vs_reference: float
    wall_time: float
    survival: float | None = None


@dataclass
class TimeSeries:
    reports: list[RefreshReport] = field(default_factory=list)

    def append(self, report: RefreshReport) -> None:
        if self.reports and report.cycle_index <= self.reports[-1].cycle_index:
            raise ValueError("cycle_index must be strictly increasing")
        self.reports.append(report)

    def __iter__(self) -> Iterator[RefreshReport]:
        return iter(self.reports)

    def __len__(self) -> int:
        return len(self.reports)

    def __getitem__(self, i: int) -> RefreshReport:
        return self.reports[i]


# -- bookkeeping helpers -------------------------------------------------------


def _mean_full_fidelity(rho: np.ndarray, ref: QubitState) -> float:
    v = ref.as_array()
    vals = np.einsum("i,nij,j->n", v.conj(), rho, v).real
    return float(np.clip(vals, 0.0, 1.0).mean())


def _report(lq: LogicalQubit, p_hat: float, survival: float | None = None) -> RefreshReport:
    ref = lq.reference
    if ref is None:
        raise ValueError("logical qubit has not been written")
    return RefreshReport(
        cycle_index=lq.cycle,
        p_hat=p_hat,
        magnitude_fidelity_vs_reference=magnitude_fidelity(ProbPair.from_up(p_hat), ref.probs),
        full_fidelity_vs_reference=_mean_full_fidelity(lq.rho, ref),
        wall_time=lq.clock,
        survival=survival,
    )


def cell_purities(rho: np.ndarray) -> np.ndarray:
    return (
        rho[:, 0, 0].real ** 2 + rho[:, 1, 1].real ** 2 + 2 * np.abs(rho[:, 0, 1]) ** 2
    )


def _pure_vectors(rho: np.ndarray) -> np.ndarray:
    """State vectors of pure cells, read off the column with the larger diagonal."""
    use_first = rho[:, 0, 0].real >= rho[:, 1, 1].real
    cols = np.where(use_first[:, None], rho[:, :, 0], rho[:, :, 1])
    return cols / np.linalg.norm(cols, axis=1, keepdims=True)


def _outer(vecs: np.ndarray) -> np.ndarray:
    return np.einsum("ni,nj->nij", vecs, vecs.conj())


# -- operations ----------------------------------------------------------------


def write(lq: LogicalQubit, q: QubitState) -> LogicalQubit:
    rho = np.broadcast_to(q.as_array()[:, None] * q.as_array().conj()[None, :], lq.rho.shape)
    return replace(
        lq,
        rho=rho.copy(),
        last_refresh=np.full(lq.redundancy, lq.clock),
        reference=q,
        stored_estimate=Estimate.exact(abs(q.up) ** 2),
        survived=np.ones(lq.redundancy, dtype=bool),
    )


def step(lq: LogicalQubit, dt: float, model: NoiseModel) -> LogicalQubit:
    return replace(lq, rho=evolve_batch(lq.rho, dt, model), clock=lq.clock + dt)


def read(lq: LogicalQubit, rng: np.random.Generator) -> tuple[Estimate, LogicalQubit]:
    """Destructive read-out of all cells; the returned qubit is left collapsed."""
    ups, post = measure_z_batch(lq.rho, rng)
    return estimate_from_counts(int(ups.sum()), lq.redundancy), replace(lq, rho=post)


def refresh_measure_recreate(
    lq: LogicalQubit,
    rng: np.random.Generator,
    phase_policy: PhasePolicy = PhasePolicy.UniformRandom,
) -> tuple[LogicalQubit, RefreshReport]:
    est, lq = read(lq, rng)
    rho = recreate_batch(est.p_hat, lq.redundancy, phase_policy, rng)
    lq = replace(
        lq,
        rho=rho,
        stored_estimate=est,
        last_refresh=np.full(lq.redundancy, lq.clock),
        cycle=lq.cycle + 1,
    )
    return lq, _report(lq, est.p_hat)


def refresh_zeno(lq: LogicalQubit, rng: np.random.Generator) -> tuple[LogicalQubit, RefreshReport]:
    ups, post = measure_z_batch(lq.rho, rng)
    expect_up = lq.reference is None or abs(lq.reference.up) ** 2 >= 0.5
    survived = lq.survived if lq.survived is not None else np.ones(lq.redundancy, dtype=bool)
    survived = survived & (ups if expect_up else ~ups)
    est = estimate_from_counts(int(ups.sum()), lq.redundancy)
    lq = replace(
        lq,
        rho=post,
        stored_estimate=est,
        last_refresh=np.full(lq.redundancy, lq.clock),
        cycle=lq.cycle + 1,
        survived=survived,
    )
    return lq, _report(lq, est.p_hat, survival=float(survived.mean()))


def refresh_erasure(lq: LogicalQubit, rng: np.random.Generator) -> tuple[LogicalQubit, RefreshReport]:
    purities = cell_purities(lq.rho)
    bad = np.flatnonzero(purities < 1.0 - ERASURE_PURITY_TOL)
    if bad.size:
        raise MixedStateCell(int(bad[0]), float(purities[bad[0]]))
    recovered, _ = erase_and_recover_batch(_pure_vectors(lq.rho), rng)
    rho = _outer(recovered)
    lq = replace(
        lq,
        rho=rho,
        last_refresh=np.full(lq.redundancy, lq.clock),
        cycle=lq.cycle + 1,
    )
    # no Z read-out happens here; report the exact mean population instead
    return lq, _report(lq, float(rho[:, 0, 0].real.mean()))


def refresh(
    lq: LogicalQubit, policy: RefreshPolicy, rng: np.random.Generator
) -> tuple[LogicalQubit, RefreshReport]:
    if isinstance(policy, MeasureRecreate):
        return refresh_measure_recreate(lq, rng, policy.phase_policy)
    if isinstance(policy, Zeno):
        return refresh_zeno(lq, rng)
    if isinstance(policy, Erasure):
        return refresh_erasure(lq, rng)
    raise TypeError(f"unknown refresh policy {policy!r}")


# -- capacity ------------------------------------------------------------------


def capacity(dot_density: float, redundancy: int, area: float) -> int:
    """Logical qubits that fit in ``area`` cm^2 at ``dot_density`` dots/cm^2."""
    if not (dot_density > 0 and redundancy > 0 and area > 0):
        raise NonPositiveInput("dot_density, redundancy and area must all be positive")
    if not (math.isfinite(dot_density) and math.isfinite(area)):
        raise NonPositiveInput("dot_density and area must be finite")
    if int(redundancy) != redundancy:
        raise NonPositiveInput("redundancy must be an integer")
    # exact rational floor, no float rounding at the boundary
    return math.floor(Fraction(dot_density) * Fraction(area) / int(redundancy))


NM2_PER_CM2 = 1e14


def density_from_pore_geometry(pore_diameter: float, pitch: float) -> float:
    """Dots per cm^2 for pores on a hexagonal lattice with centre spacing ``pitch`` (nm)."""
    if not pore_diameter > 0:
        raise NonPositiveInput("pore diameter must be positive")
    if pore_diameter > pitch:
        raise GeometryViolation(f"pore diameter {pore_diameter} nm exceeds pitch {pitch} nm")
    return 2.0 / (math.sqrt(3.0) * pitch * pitch) * NM2_PER_CM2


# -- experiment runner -----------------------------------------------------------


def initial_state(p_up: float, relative_phase: float) -> QubitState:
    if not 0.0 <= p_up <= 1.0:
        raise OutOfRange("p_up must lie in [0, 1]")
    return make_qubit(math.sqrt(p_up), math.sqrt(1.0 - p_up) * complex(math.cos(relative_phase), math.sin(relative_phase)))


def run_experiment(config: ExperimentConfig, seed: int, repetition: int = 0) -> TimeSeries:
    """One repetition: write, then ``cycles`` rounds of (free evolution, refresh).

    The random stream is ``substream(seed, repetition)``, so a repetition's
    result does not depend on which thread runs it.
    """
    rng = substream(seed, repetition)
    policy = config.policy
    lq = write(LogicalQubit.empty(config.redundancy), initial_state(config.p_up, config.relative_phase))
    series = TimeSeries()
    for k in range(config.cycles):
        try:
            lq = step(lq, policy.period, config.noise)
            lq, report = refresh(lq, policy, rng)
        except PreconditionError as exc:
            exc.cycle = k + 1
            raise
        series.append(report)
    return series


def run_ensemble(config: ExperimentConfig, threads: int = 1) -> list[TimeSeries]:
    reps = range(config.repetitions)
    if threads <= 1:
        return [run_experiment(config, config.seed, r) for r in reps]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map keeps submission order, so output order is independent of scheduling
        return list(pool.map(lambda r: run_experiment(config, config.seed, r), reps))
