#!/usr/bin/env python3
"""Spam benchmark: VIBoost vs AdaBoost over repeated 10%/90% splits.

Requires a user-supplied dense CSV (57 features, last column the 0/1 or
+/-1 label).  Writes the per-round result table and charts through the
experiment harness.
"""

import argparse
import sys
from pathlib import Path

from viboost_lab.harness import ExperimentSpec, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spam_csv", type=Path, help="dense CSV with the label in the last column")
    ap.add_argument("--algo", default="viboost", choices=("viboost", "adaboost"))
    ap.add_argument("--rounds", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=40)
    ap.add_argument("--seed", type=int, default=909)
    ap.add_argument("--out", type=Path, default=Path("results/spam"))
    args = ap.parse_args()

    if not args.spam_csv.exists():
        sys.exit(f"spam CSV not found: {args.spam_csv}")
    spec = ExperimentSpec(
        dataset_source=f"csv:{args.spam_csv}",
        algorithm=args.algo,
        train_fraction=0.1,
        rounds=args.rounds,
        repeats=args.repeats,
        seed=args.seed,
        output_dir=args.out / args.algo,
    )
    table = run_experiment(spec)
    print(f"final mean test error ({args.algo}): {table.test_err_mean[-1]:.4f}")
    print(f"results under {spec.output_dir}")


if __name__ == "__main__":
    main()
