"""Drift of the stored magnitude under noiseless measure-and-recreate refresh.

Each refresh re-estimates |a_up|^2 from R fresh shots, so the stored value
performs a random walk. Compares the ensemble std per cycle with the exact
martingale prediction sqrt(p(1-p)(1 - (1-1/R)^C)) and the small-C form
sqrt(C p(1-p)/R).
"""

import argparse
import math

import numpy as np

from qdram.channels import Noiseless
from qdram.config import ExperimentConfig
from qdram.memory import MeasureRecreate, run_ensemble


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--redundancy", type=int, default=100)
    ap.add_argument("--cycles", type=int, default=30)
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.5)
    args = ap.parse_args()

    cfg = ExperimentConfig(
        policy=MeasureRecreate(1.0),
        redundancy=args.redundancy,
        cycles=args.cycles,
        repetitions=args.reps,
        noise=Noiseless(),
        p_up=args.p,
        seed=5,
    )
    runs = run_ensemble(cfg)
    p_hat = np.array([[r.p_hat for r in s] for s in runs])
    q = args.p * (1 - args.p)
    r = args.redundancy
    print(f"{'cycle':>5} {'std':>8} {'exact':>8} {'sqrt(Cpq/R)':>12}")
    for c in range(1, args.cycles + 1):
        exact = math.sqrt(q * (1 - (1 - 1 / r) ** c))
        print(f"{c:>5} {p_hat[:, c - 1].std():>8.4f} {exact:>8.4f} {math.sqrt(c * q / r):>12.4f}")


if __name__ == "__main__":
    main()
