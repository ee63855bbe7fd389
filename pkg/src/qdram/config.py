"""Experiment configuration: an INI-style document with one section per concern.

Grammar (all keys optional; unknown sections or keys are errors)::

    [memory]
    redundancy   = 100             # cells per logical qubit, >= 1
    cycles       = 100             # refresh cycles, >= 0
    repetitions  = 1000            # independent Monte Carlo runs, >= 1

    [protocol]
    name         = measure_recreate  # measure_recreate | zeno | erasure
    period       = 1e-07           # seconds between refreshes; default t2/10
    phase_policy = uniform_random  # uniform_random | zero (measure_recreate only)

    [noise]
    model        = markovian       # markovian | coherent_leakage | noiseless
    t2           = 1e-06           # seconds
    t1           = 2e-06           # seconds; default 2*t2; 'inf' allowed
    omega        = 0.0             # rad/s, coherent_leakage only

    [state]
    p_up           = 0.5           # |a_up|^2 of the written qubit
    relative_phase = 0.0           # radians

    [run]
    seed         = 0               # unsigned 64-bit
    output       = qdram.csv

Comments start with ``#`` or ``;``.
"""

from __future__ import annotations

import configparser
import difflib
import math
from dataclasses import dataclass, field

from .channels import CoherentLeakage, Markovian, NoiseModel, Noiseless
from .errors import InvalidNoiseModel, OutOfRange, ParseError, ValidationError
from .measure import PhasePolicy
from .memory import Erasure, MeasureRecreate, RefreshPolicy, Zeno

DEFAULT_T2 = 1e-6

SCHEMA: dict[str, tuple[str, ...]] = {
    "memory": ("redundancy", "cycles", "repetitions"),
    "protocol": ("name", "period", "phase_policy"),
    "noise": ("model", "t1", "t2", "omega"),
    "state": ("p_up", "relative_phase"),
    "run": ("seed", "output"),
}

PROTOCOLS = ("measure_recreate", "zeno", "erasure")
NOISE_MODELS = ("markovian", "coherent_leakage", "noiseless")


@dataclass(frozen=True)
class ExperimentConfig:
    policy: RefreshPolicy = field(default_factory=lambda: MeasureRecreate(DEFAULT_T2 / 10))
    redundancy: int = 100
    cycles: int = 100
    repetitions: int = 1000
    noise: NoiseModel = field(default_factory=lambda: Markovian(2 * DEFAULT_T2, DEFAULT_T2))
    p_up: float = 0.5
    relative_phase: float = 0.0
    seed: int = 0
    output_path: str = "qdram.csv"
    # kept so a coherent/noiseless config still restates its t1/t2
    t1: float = 2 * DEFAULT_T2
    t2: float = DEFAULT_T2

    @property
    def protocol(self) -> str:
        return self.policy.name

    def to_text(self) -> str:
        """Render the effective configuration in the same grammar ``parse_config`` reads."""
        noise_name, omega = _noise_name(self.noise)
        lines = [
            "[memory]",
            f"redundancy = {self.redundancy}",
            f"cycles = {self.cycles}",
            f"repetitions = {self.repetitions}",
            "",
            "[protocol]",
            f"name = {self.protocol}",
            f"period = {self.policy.period!r}",
        ]
        if isinstance(self.policy, MeasureRecreate):
            lines.append(f"phase_policy = {self.policy.phase_policy.value}")
        lines += [
            "",
            "[noise]",
            f"model = {noise_name}",
            f"t1 = {self.t1!r}",
            f"t2 = {self.t2!r}",
            f"omega = {omega!r}",
            "",
            "[state]",
            f"p_up = {self.p_up!r}",
            f"relative_phase = {self.relative_phase!r}",
            "",
            "[run]",
            f"seed = {self.seed}",
            f"output = {self.output_path}",
        ]
        return "\n".join(lines) + "\n"


def _noise_name(model: NoiseModel) -> tuple[str, float]:
    if isinstance(model, Markovian):
        return "markovian", 0.0
    if isinstance(model, CoherentLeakage):
        return "coherent_leakage", model.omega
    return "noiseless", 0.0


def _suggest(word: str, choices: tuple[str, ...] | list[str]) -> str:
    close = difflib.get_close_matches(word, list(choices), n=1)
    return f" (did you mean '{close[0]}'?)" if close else ""


class _Reader:
    def __init__(self, parser: configparser.ConfigParser):
        self.p = parser

    def raw(self, section: str, key: str) -> str | None:
        if self.p.has_option(section, key):
            return self.p.get(section, key).strip()
        return None

    def int(self, section: str, key: str, default: int, minimum: int, maximum: int | None = None) -> int:
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            value = int(text, 0)
        except ValueError:
            raise ValidationError(f"{section}.{key}", f"expected an integer, got {text!r}") from None
        if value < minimum or (maximum is not None and value > maximum):
            bound = f">= {minimum}" if maximum is None else f"in [{minimum}, {maximum}]"
            raise ValidationError(f"{section}.{key}", f"must be {bound}, got {value}")
        return value

    def float(self, section: str, key: str, default: float | None, allow_inf: bool = False) -> float | None:
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            value = float(text)
        except ValueError:
            raise ValidationError(f"{section}.{key}", f"expected a number, got {text!r}") from None
        if math.isnan(value) or (math.isinf(value) and not allow_inf):
            raise ValidationError(f"{section}.{key}", f"must be finite, got {text!r}")
        return value

    def choice(self, section: str, key: str, default: str, choices: tuple[str, ...]) -> str:
        text = self.raw(section, key)
        if text is None:
            return default
        value = text.lower()
        if value not in choices:
            raise ValidationError(
                f"{section}.{key}",
                f"must be one of {', '.join(choices)}, got {text!r}{_suggest(value, choices)}",
            )
        return value


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None, default_section="__none__"
    )
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).replace("\n", " ")) from exc

    for section in parser.sections():
        if section not in SCHEMA:
            raise ValidationError(section, f"unknown section{_suggest(section, tuple(SCHEMA))}")
        for key in parser.options(section):
            if key not in SCHEMA[section]:
                all_keys = [k for keys in SCHEMA.values() for k in keys]
                raise ValidationError(f"{section}.{key}", f"unknown key{_suggest(key, all_keys)}")

    r = _Reader(parser)
    redundancy = r.int("memory", "redundancy", 100, 1)
    cycles = r.int("memory", "cycles", 100, 0)
    repetitions = r.int("memory", "repetitions", 1000, 1)

    model_name = r.choice("noise", "model", "markovian", NOISE_MODELS)
    t2 = r.float("noise", "t2", DEFAULT_T2, allow_inf=True)
    t1 = r.float("noise", "t1", 2 * t2, allow_inf=True)
    omega = r.float("noise", "omega", 0.0)
    try:
        if model_name == "markovian":
            noise: NoiseModel = Markovian(t1, t2)
        elif model_name == "coherent_leakage":
            noise = CoherentLeakage(omega)
        else:
            noise = Noiseless()
    except InvalidNoiseModel as exc:
        raise ValidationError("noise", str(exc)) from None
    if not (t1 > 0 and t2 > 0):
        raise ValidationError("noise.t2" if t2 <= 0 else "noise.t1", "must be positive")

    period = r.float("protocol", "period", None)
    if period is None:
        period = t2 / 10
    if not (period > 0 and math.isfinite(period)):
        raise ValidationError("protocol.period", f"must be positive and finite, got {period!r}")
    proto = r.choice("protocol", "name", "measure_recreate", PROTOCOLS)
    phase = r.choice("protocol", "phase_policy", "uniform_random", tuple(p.value for p in PhasePolicy))
    if proto != "measure_recreate" and r.raw("protocol", "phase_policy") is not None:
        raise ValidationError("protocol.phase_policy", f"only applies to measure_recreate, not {proto}")
    try:
        if proto == "measure_recreate":
            policy: RefreshPolicy = MeasureRecreate(period, PhasePolicy(phase))
        elif proto == "zeno":
            policy = Zeno(period)
        else:
            policy = Erasure(period)
    except OutOfRange as exc:
        raise ValidationError("protocol.period", str(exc)) from None

    p_up = r.float("state", "p_up", 0.5)
    if not 0.0 <= p_up <= 1.0:
        raise ValidationError("state.p_up", f"must lie in [0, 1], got {p_up!r}")
    relative_phase = r.float("state", "relative_phase", 0.0)

    seed = r.int("run", "seed", 0, 0, 2**64 - 1)
    output = r.raw("run", "output") or "qdram.csv"

    return ExperimentConfig(
        policy=policy,
        redundancy=redundancy,
        cycles=cycles,
        repetitions=repetitions,
        noise=noise,
        p_up=p_up,
        relative_phase=relative_phase,
        seed=seed,
        output_path=output,
        t1=t1,
        t2=t2,
    )
