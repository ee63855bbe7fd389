"""Monte Carlo simulator of a quantum-dot spin memory with periodic refresh."""

from .channels import CoherentLeakage, Markovian, Noiseless, evolve
from .config import ExperimentConfig, parse_config
from .erasure import detector_bloch, entangle_with_detector, erase_and_recover, project_detector
from .measure import Outcome, PhasePolicy, measure_z, substream
from .memory import Erasure, LogicalQubit, MeasureRecreate, Zeno, run_experiment
from .qcore import DensityMatrix, QubitState, make_qubit

__all__ = [
    "CoherentLeakage", "DensityMatrix", "Erasure", "ExperimentConfig", "LogicalQubit",
    "Markovian", "MeasureRecreate", "Noiseless", "Outcome", "PhasePolicy", "QubitState",
    "Zeno", "detector_bloch", "entangle_with_detector", "erase_and_recover", "evolve",
    "make_qubit", "measure_z", "parse_config", "project_detector", "run_experiment",
    "substream",
]
