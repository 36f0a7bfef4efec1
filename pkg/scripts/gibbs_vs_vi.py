#!/usr/bin/env python3
"""Micro-instance oracle comparison: Gibbs chain vs variational posterior.

Runs the exact sampler and the stagewise variational algorithm on a tiny
instance (N <= 20, M <= 10) and prints the type-prior posteriors side by
side.  Useful for eyeballing how tight (or optimistic) the variational
approximation is.
"""

import argparse

import numpy as np

from viboost_lab.gibbs import GibbsHyper, run_gibbs
from viboost_lab.hypotheses import Dataset, build_stumps
from viboost_lab.viboost import VIConfig, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iters", type=int, default=9000)
    ap.add_argument("--burnin", type=int, default=1000)
    ap.add_argument("--rounds", type=int, default=10)
    ap.add_argument("--seed", type=int, default=505)
    args = ap.parse_args()

    x = np.array([[0.0], [0.0], [1.0], [1.0], [2.0], [2.0]])
    y = np.array([1, -1, -1, 1, 1, 1])
    data = Dataset(x, y)
    space = build_stumps(data)

    trace = run_gibbs(
        data, space, GibbsHyper(), iters=args.iters, burnin=args.burnin, thin=1,
        rng=np.random.default_rng(np.random.SeedSequence([args.seed, 0])),
    )
    _, report, state = run(data, space, VIConfig(rounds=args.rounds))
    eta_mean = state.eta[0] / (state.eta[0] + state.eta[1])

    print(f"gibbs  E[theta] = {trace.mean_theta():.4f}   E[xi] = {trace.mean_xi():+.4f}")
    print(f"vi     E[theta] = {eta_mean:.4f}   grade = {report.noise_grade:+.4f}")
    print(f"gibbs  per-example P(true) = {np.round(trace.mean_w(), 3)}")
    print(f"vi     per-example P(true) = {np.round(report.per_example_true_prob, 3)}")


if __name__ == "__main__":
    main()
