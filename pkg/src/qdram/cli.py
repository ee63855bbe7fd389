"""Command-line runner: ``qdram simulate | zeno | capacity``.

Exit codes: 0 success, 1 usage or I/O error, 2 a protocol precondition failed
during simulation (for example erasure attempted on a mixed cell).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import ExperimentConfig, parse_config
from .errors import PreconditionError, QDRAMError
from .measure import substream, zeno_survival_analytic, zeno_survival_mc
from .memory import TimeSeries, capacity, density_from_pore_geometry, run_ensemble

CSV_HEADER = ("cycle", "p_hat", "magnitude_fidelity", "full_fidelity", "sim_time_s")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def aggregate(runs: Sequence[TimeSeries]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-cycle mean and (population) std over repetitions.

    Returns ``(cycles, mean, std)`` where the value arrays have columns
    p_hat, magnitude_fidelity, full_fidelity, sim_time_s.
    """
    if not runs or len(runs[0]) == 0:
        return np.zeros(0, dtype=int), np.zeros((0, 4)), np.zeros((0, 4))
    data = np.array(
        [
            [
                (r.p_hat, r.magnitude_fidelity_vs_reference, r.full_fidelity_vs_reference, r.wall_time)
                for r in series
            ]
            for series in runs
        ]
    )
    cycles = np.array([r.cycle_index for r in runs[0]])
    return cycles, data.mean(axis=0), data.std(axis=0)


def std_path(out: Path) -> Path:
    return out.with_name(out.stem + ".std" + (out.suffix or ".csv"))


def write_csv(path: Path, cycles: np.ndarray, values: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for c, row in zip(cycles, values):
            w.writerow([int(c), *(fmt(v) for v in row)])


def cmd_simulate(config: ExperimentConfig, threads: int = 1, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        runs = run_ensemble(config, threads)
    except PreconditionError as exc:
        print(f"error: simulation precondition failed at cycle {exc.cycle}: {exc}", file=err)
        return 2
    cycles, mean, std = aggregate(runs)
    path = Path(config.output_path)
    try:
        write_csv(path, cycles, mean)
        write_csv(std_path(path), cycles, std)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=err)
        return 1

    print("# effective configuration", file=out)
    print(config.to_text(), file=out)
    print(f"wrote {len(cycles)} cycles x {config.repetitions} repetitions to {path}", file=out)
    print(f"per-cycle std written to {std_path(path)}", file=out)
    if len(cycles):
        p, mf, ff, t = mean[-1]
        print(
            f"final cycle {cycles[-1]} at t={fmt(t)} s: "
            f"p_hat={p:.6f}±{std[-1][0]:.6f}  magnitude_fidelity={mf:.6f}  full_fidelity={ff:.6f}",
            file=out,
        )
    return 0


def cmd_zeno(
    omega: float,
    total_time: float,
    n_list: Sequence[int],
    trials: int,
    seed: int,
    out=None,
    err=None,
) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    if omega < 0 or total_time < 0 or trials < 1 or not n_list or any(n < 1 for n in n_list):
        print("error: need omega >= 0, total_time >= 0, trials >= 1 and every n >= 1", file=err)
        return 1
    print(f"# omega*T = {fmt(omega * total_time)} rad, trials = {trials}, seed = {seed}", file=out)
    print(f"{'n':>6}  {'analytic':>12}  {'monte_carlo':>12}  {'sigma':>10}", file=out)
    for i, n in enumerate(n_list):
        exact = zeno_survival_analytic(omega, total_time, n)
        mc = zeno_survival_mc(omega, total_time, n, trials, substream(seed, i))
        sigma = math.sqrt(exact * (1 - exact) / trials)
        print(f"{n:>6}  {exact:>12.8f}  {mc:>12.8f}  {sigma:>10.2e}", file=out)
    return 0


def cmd_capacity(
    dot_density: float | None,
    redundancy: int,
    area: float,
    pitch: float | None = None,
    diameter: float = 52.0,
    out=None,
    err=None,
) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        if pitch is not None:
            dot_density = density_from_pore_geometry(diameter, pitch)
            print(f"dot density from hexagonal pores (pitch {pitch} nm): {dot_density:.6g} dots/cm^2", file=out)
        if dot_density is None:
            raise QDRAMError("give --density or --pitch")
        n = capacity(dot_density, redundancy, area)
    except QDRAMError as exc:
        print(f"error: {exc}", file=err)
        return 1
    print(f"{n} logical qubits", file=out)
    print(f"log2(state-space size) = {n}  (storage capacity 2^{n})", file=out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="experiment config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master RNG seed (u64)")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="CSV output path")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")

    parser = _Parser(prog="qdram", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("simulate", parents=[common], help="run a refresh-protocol experiment")

    z = sub.add_parser("zeno", parents=[common], help="Zeno survival table: analytic vs Monte Carlo")
    z.add_argument("--omega", type=float, default=math.pi / 2, help="precession rate (rad/s)")
    z.add_argument("--total-time", type=float, default=1.0, help="total evolution time (s)")
    z.add_argument("--n", dest="n_list", type=int, nargs="+", default=[1, 10, 100])
    z.add_argument("--trials", type=int, default=100_000)

    c = sub.add_parser("capacity", parents=[common], help="logical-qubit capacity of a dot array")
    c.add_argument("--density", type=float, default=None, help="dots per cm^2")
    c.add_argument("--redundancy", type=int, default=100)
    c.add_argument("--area", type=float, default=1.0, help="cm^2")
    c.add_argument("--pitch", type=float, default=None, help="hexagonal pore pitch (nm)")
    c.add_argument("--diameter", type=float, default=52.0, help="pore diameter (nm)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    seed = getattr(args, "seed", None)
    if seed is not None and not 0 <= seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 1

    if args.command == "simulate":
        threads = getattr(args, "threads", 1)
        if threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return 1
        try:
            text = args.config.read_text(encoding="utf-8") if hasattr(args, "config") else ""
            config = parse_config(text)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 1
        except QDRAMError as exc:
            print(f"error: invalid config: {exc}", file=sys.stderr)
            return 1
        if seed is not None:
            config = replace(config, seed=seed)
        if hasattr(args, "out"):
            config = replace(config, output_path=str(args.out))
        return cmd_simulate(config, threads)

    if args.command == "zeno":
        return cmd_zeno(args.omega, args.total_time, args.n_list, args.trials, seed or 0)

    return cmd_capacity(args.density, args.redundancy, args.area, args.pitch, args.diameter)


if __name__ == "__main__":
    sys.exit(main())
