#!/usr/bin/env python3
"""Margin-trap experiment: both boosters fail once labels are flipped.

Generates the 31-feature margin-trap dataset with 20% label inversions,
runs AdaBoost and VIBoost over repeated 200/1000 splits, and reports the
final test errors together with VIBoost's SNR diagnostic.
"""

import argparse

import numpy as np

from viboost_lab.adaboost import AdaConfig, run_adaboost
from viboost_lab.datagen import make_long_servedio
from viboost_lab.hypotheses import build_stumps, ensemble_margins_on, predict_sign
from viboost_lab.viboost import VIConfig, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--noise-level", type=float, default=0.2)
    ap.add_argument("--count", type=int, default=1200)
    ap.add_argument("--train", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=40)
    ap.add_argument("--rounds", type=int, default=50)
    ap.add_argument("--seed", type=int, default=303)
    args = ap.parse_args()

    data = make_long_servedio(
        args.n, args.noise_level, args.count,
        np.random.default_rng(np.random.SeedSequence([args.seed, 0])),
    )
    vb_err, ada_err, vb_snr = [], [], []
    for rep in range(args.repeats):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, 1 + rep]))
        perm = rng.permutation(data.n_examples)
        train = data.subset(perm[: args.train])
        test = data.subset(perm[args.train :])
        space = build_stumps(train)
        stages, report, _ = run(train, space, VIConfig(rounds=args.rounds))
        margins = ensemble_margins_on(stages, space, test.features)
        vb_err.append(np.mean(predict_sign(margins) != test.labels))
        vb_snr.append(report.snr)
        ada_stages = run_adaboost(train, space, AdaConfig(rounds=args.rounds))
        margins = ensemble_margins_on(ada_stages, space, test.features)
        ada_err.append(np.mean(predict_sign(margins) != test.labels))

    print(f"adaboost  mean test error: {np.mean(ada_err):.4f}")
    print(f"viboost   mean test error: {np.mean(vb_err):.4f}")
    print(f"viboost   mean SNR:        {np.mean(vb_snr):.3f}")


if __name__ == "__main__":
    main()
