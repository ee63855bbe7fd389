"""Compare the three refresh schemes on the same written qubit.

Prints final-cycle magnitude and full fidelity for each (scheme, noise) pair.
Erasure is only attempted where the cells stay pure.

    python scripts/compare_schemes.py --cycles 20 --reps 200
"""

import argparse
import math

import numpy as np

from qdram.channels import CoherentLeakage, Markovian, Noiseless
from qdram.config import ExperimentConfig
from qdram.errors import PreconditionError
from qdram.memory import Erasure, MeasureRecreate, Zeno, run_ensemble


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cycles", type=int, default=20)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--redundancy", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    period = 0.1
    noises = {
        "noiseless": Noiseless(),
        "markovian": Markovian(t1=2.0, t2=1.0),
        "coherent": CoherentLeakage(omega=0.5),
    }
    policies = {
        "measure_recreate": MeasureRecreate(period),
        "zeno": Zeno(period),
        "erasure": Erasure(period),
    }
    print(f"{'scheme':<18}{'noise':<12}{'magnitude_F':>12}{'full_F':>10}")
    for pname, policy in policies.items():
        for nname, noise in noises.items():
            cfg = ExperimentConfig(
                policy=policy,
                redundancy=args.redundancy,
                cycles=args.cycles,
                repetitions=args.reps,
                noise=noise,
                p_up=0.36,
                relative_phase=math.pi / 3,
                seed=args.seed,
            )
            try:
                runs = run_ensemble(cfg)
            except PreconditionError as exc:
                print(f"{pname:<18}{nname:<12}{'refused at cycle ' + str(exc.cycle):>22}")
                continue
            mf = np.mean([s[-1].magnitude_fidelity_vs_reference for s in runs])
            ff = np.mean([s[-1].full_fidelity_vs_reference for s in runs])
            print(f"{pname:<18}{nname:<12}{mf:>12.5f}{ff:>10.5f}")


if __name__ == "__main__":
    main()
