"""Survival of |up> versus number of observations, coherent vs Markovian decay.

Coherent precession is frozen as n grows; exponential relaxation is not.
Writes a CSV with columns n, coherent_analytic, coherent_mc, markovian_mc.
"""

import argparse
import csv
import math
import sys

import numpy as np

from qdram.channels import Markovian, evolve_batch
from qdram.measure import measure_z_batch, substream, zeno_survival_analytic, zeno_survival_mc


def markovian_survival(n: int, total: float, trials: int, rng) -> float:
    # start in |down> so relaxation toward |up> is the "decay" being watched
    model = Markovian(t1=total, t2=total)
    rho = np.zeros((trials, 2, 2), dtype=complex)
    rho[:, 1, 1] = 1
    alive = np.ones(trials, dtype=bool)
    for _ in range(n):
        rho = evolve_batch(rho, total / n, model)
        ups, rho = measure_z_batch(rho, rng)
        alive &= ~ups
    return float(alive.mean())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    omega, total = math.pi / 2, 1.0
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "coherent_analytic", "coherent_mc", "markovian_mc", "markovian_exact"])
    for i, n in enumerate([1, 2, 5, 10, 20, 50, 100, 200]):
        w.writerow(
            [
                n,
                f"{zeno_survival_analytic(omega, total, n):.6f}",
                f"{zeno_survival_mc(omega, total, n, args.trials, substream(args.seed, 2 * i)):.6f}",
                f"{markovian_survival(n, total, args.trials, substream(args.seed, 2 * i + 1)):.6f}",
                f"{math.exp(-1):.6f}",
            ]
        )
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
