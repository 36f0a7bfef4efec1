"""Command-line interface.

Subcommands: gen-data (write a synthetic dataset), train (single run,
noise report as JSON on stdout), experiment (full repeated-split protocol
from a config file plus flag overrides), gibbs (micro-instance oracle).

Exit codes: 0 success, 2 configuration/parse problems, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

import numpy as np

from . import adaboost, datagen, gibbs, harness, viboost
from .errors import ConfigError, NumericError
from .hypotheses import build_stumps, predict_sign

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=50)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--algo", default="viboost", choices=harness.ALGORITHMS)
    p.add_argument("--out", type=Path, default=Path("results"))
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--mu0", type=float, default=1.0)
    p.add_argument("--mu0-prime", dest="mu0_prime", type=float, default=1.0)
    p.add_argument("--zeta", type=float, nargs=2, default=(1.0, 1.0), metavar=("Z1", "Z2"))
    p.add_argument(
        "--elbo",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="drive the inner loop with the evidence bound (--no-elbo: fixed iterations)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viboost-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="write a synthetic dataset")
    gen.add_argument("generator", choices=("step", "long-servedio", "sparse-text"))
    gen.add_argument("--theta", type=float, default=0.0)
    gen.add_argument("--xi", type=float, default=datagen.LOG3)
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--noise-level", type=float, default=0.2)
    gen.add_argument("--count", type=int, default=1200)
    gen.add_argument("--n-docs", type=int, default=145)
    gen.add_argument("--n-features", type=int, default=2000)
    _add_common_flags(gen)

    train = sub.add_parser("train", help="single run; prints the noise report as JSON")
    train.add_argument("--data", required=True, help="csv:PATH, sparse:PATH, or a generator name")
    train.add_argument("--theta", type=float, default=0.0)
    _add_common_flags(train)

    exp = sub.add_parser("experiment", help="repeated-split protocol")
    exp.add_argument("--data", default=None, help="overrides the config dataset source")
    exp.add_argument("--train-fraction", type=float, default=None)
    _add_common_flags(exp)

    gib = sub.add_parser("gibbs", help="micro-instance Gibbs oracle")
    gib.add_argument("--data", required=True)
    gib.add_argument("--theta", type=float, default=0.5)
    gib.add_argument("--iters", type=int, default=4000)
    gib.add_argument("--burnin", type=int, default=500)
    gib.add_argument("--thin", type=int, default=1)
    _add_common_flags(gib)
    return parser


def _vi_config(args, rounds=None) -> viboost.VIConfig:
    return viboost.VIConfig(
        mu0=args.mu0,
        mu0_prime=args.mu0_prime,
        zeta=(args.zeta[0], args.zeta[1]),
        tau=args.tau,
        rounds=rounds if rounds is not None else args.rounds,
        elbo_enabled=args.elbo,
    )


def _load_dataset(source: str, args, rng):
    if source.startswith("csv:"):
        return harness.load_dense_csv(source[4:])
    if source.startswith("sparse:"):
        return harness.load_sparse_binary(source[7:])
    if source == "step":
        return datagen.make_step_dataset(args.theta, rng, xi=args.xi if hasattr(args, "xi") else datagen.LOG3)
    if source == "long-servedio":
        return datagen.make_long_servedio(args.n, args.noise_level, args.count, rng)
    if source == "sparse-text":
        return datagen.make_sparse_text(args.n_docs, args.n_features, rng)
    raise ConfigError(f"unknown dataset source {source!r}")


def cmd_gen_data(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0]))
    data = _load_dataset(args.generator, args, rng)
    out = args.out
    if out.suffix == "":
        out.mkdir(parents=True, exist_ok=True)
        out = out / ("dataset.txt" if args.generator == "sparse-text" else "dataset.csv")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    if args.generator == "sparse-text":
        harness.write_sparse_binary(data, out)
    else:
        harness.write_dense_csv(data, out)
    print(f"wrote {data.n_examples} x {data.n_features} dataset to {out}")
    return EXIT_OK


def cmd_train(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0]))
    data = _load_dataset(args.data, args, rng)
    space = build_stumps(data)
    payload: dict = {"algorithm": args.algo, "rounds": args.rounds}
    if args.algo == "viboost":
        cfg = _vi_config(args)
        stages, report, state = viboost.run(data, space, cfg, rng)
        payload.update(report.to_dict())
        payload["train_error"] = viboost.training_error(state)
    elif args.algo in ("adaboost", "adaboost-smoothed"):
        mu0 = args.mu0 if args.algo == "adaboost-smoothed" else 0.0
        cfg = adaboost.AdaConfig(rounds=args.rounds, smoothing_mu0=mu0, tau=args.tau)
        stages = adaboost.run_adaboost(data, space, cfg)
        from .hypotheses import ensemble_margins

        margins = ensemble_margins(stages, space)
        payload["train_error"] = float(np.mean(predict_sign(margins) != data.labels))
    else:
        raise ConfigError("train supports viboost and the adaboost variants")
    print(json.dumps(payload))
    return EXIT_OK


def _read_config(path: Path | None) -> dict:
    if path is None:
        return {}
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    parser.read(path)
    return {section: dict(parser[section]) for section in parser.sections()}


def cmd_experiment(args) -> int:
    cfg_file = _read_config(args.config)
    exp = cfg_file.get("experiment", {})
    gen = cfg_file.get("generator", {})
    vi_section = cfg_file.get("viboost", {})

    source = args.data or exp.get("dataset")
    if source is None:
        raise ConfigError("no dataset source: pass --data or set [experiment] dataset")
    train_fraction = args.train_fraction
    if train_fraction is None:
        train_fraction = float(exp.get("train_fraction", 0.3))

    gen_params = {k: float(v) for k, v in gen.items()}
    vi_cfg = viboost.VIConfig(
        mu0=float(vi_section.get("mu0", args.mu0)),
        mu0_prime=float(vi_section.get("mu0_prime", args.mu0_prime)),
        zeta=(args.zeta[0], args.zeta[1]),
        tau=float(vi_section.get("tau", args.tau)),
        rounds=args.rounds,
        elbo_enabled=args.elbo,
    )
    spec = harness.ExperimentSpec(
        dataset_source=source,
        algorithm=exp.get("algorithm", args.algo),
        train_fraction=train_fraction,
        rounds=int(exp.get("rounds", args.rounds)),
        repeats=int(exp.get("repeats", args.repeats)),
        seed=int(exp.get("seed", args.seed)),
        output_dir=Path(exp.get("output_dir", args.out)),
        gen_params=gen_params,
        vi=vi_cfg,
        ada_config=adaboost.AdaConfig(rounds=args.rounds, smoothing_mu0=args.mu0, tau=args.tau),
    )
    table = harness.run_experiment(spec)
    print(f"wrote {spec.output_dir / 'results.csv'} ({len(table.rounds)} rounds, "
          f"{spec.repeats} repeats)")
    return EXIT_OK


def cmd_gibbs(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0]))
    data = _load_dataset(args.data, args, rng)
    space = build_stumps(data)
    hyper = gibbs.GibbsHyper(mu0=args.mu0, mu0_prime=args.mu0_prime, zeta=tuple(args.zeta))
    trace = gibbs.run_gibbs(
        data, space, hyper, iters=args.iters, burnin=args.burnin, thin=args.thin, rng=rng
    )
    args.out.mkdir(parents=True, exist_ok=True)
    trace.write_csv(args.out / "gibbs_trace.csv")
    summary = {
        "theta_mean": trace.mean_theta(),
        "xi_mean": trace.mean_xi(),
        "w_means": [float(v) for v in trace.mean_w()],
        "retained_sweeps": len(trace.samples),
    }
    print(json.dumps(summary))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "gen-data": cmd_gen_data,
        "train": cmd_train,
        "experiment": cmd_experiment,
        "gibbs": cmd_gibbs,
    }
    try:
        return handlers[args.command](args)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
