"""Experiment orchestration: loaders, repeated seeded splits, aggregation,
and CSV/SVG emission.

Reproducibility contract: an identical :class:`ExperimentSpec` (seed
included) produces byte-identical CSV output.  Per-repeat randomness comes
from seed-sequence children spawned from (seed, repeat index), so any
single repeat can be re-run in isolation.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import adaboost as ada
from . import datagen, gibbs, viboost
from .errors import ConfigError, ParseError
from .hypotheses import (
    Dataset,
    build_stumps,
    ensemble_margins_on,
    predict_sign,
)

CSV_SCHEMA_TAG = "# viboost-lab v1"

ALGORITHMS = ("viboost", "adaboost", "adaboost-smoothed", "gibbs")


@dataclass
class ExperimentSpec:
    """One experiment: a dataset source, an algorithm, and the protocol.

    ``dataset_source`` is either a generator name ("step", "long-servedio",
    "sparse-text") with parameters in ``gen_params``, or a file reference
    "csv:PATH" / "sparse:PATH".
    """

    dataset_source: str
    algorithm: str
    train_fraction: float
    rounds: int
    repeats: int
    seed: int
    output_dir: Path
    gen_params: dict = field(default_factory=dict)
    vi: viboost.VIConfig | None = None
    ada_config: ada.AdaConfig | None = None
    gibbs_hyper: gibbs.GibbsHyper | None = None
    gibbs_burnin: int = 500
    csv_header: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; pick from {ALGORITHMS}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        if self.rounds < 1:
            raise ConfigError("rounds must be >= 1")
        self.output_dir = Path(self.output_dir)


@dataclass
class ResultTable:
    """Per-round means and standard errors across repeats."""

    rounds: np.ndarray
    train_err_mean: np.ndarray
    train_err_se: np.ndarray
    test_err_mean: np.ndarray
    test_err_se: np.ndarray
    snr_mean: np.ndarray
    snr_se: np.ndarray
    grade_mean: np.ndarray
    grade_se: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.rounds)
        for name in (
            "train_err_mean", "train_err_se", "test_err_mean", "test_err_se",
            "snr_mean", "snr_se", "grade_mean", "grade_se",
        ):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length must match rounds")

    def write_csv(self, path: str | Path) -> None:
        cols = [
            ("round", self.rounds),
            ("train_err_mean", self.train_err_mean),
            ("train_err_se", self.train_err_se),
            ("test_err_mean", self.test_err_mean),
            ("test_err_se", self.test_err_se),
            ("snr_mean", self.snr_mean),
            ("snr_se", self.snr_se),
            ("grade_mean", self.grade_mean),
            ("grade_se", self.grade_se),
        ]
        lines = [CSV_SCHEMA_TAG, ",".join(name for name, _ in cols)]
        for i in range(len(self.rounds)):
            row = [str(int(self.rounds[i]))] + [
                format(float(vals[i]), ".17g") for _, vals in cols[1:]
            ]
            lines.append(",".join(row))
        Path(path).write_text("\n".join(lines) + "\n")


def load_dense_csv(path: str | Path, header: bool = False) -> Dataset:
    """Comma-separated reals, one example per line, label in the last column.

    Labels must be {-1,+1} or {0,1}; the latter is remapped with 0 -> -1.
    """
    rows: list[list[float]] = []
    start = 2 if header else 1
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    for lineno, line in enumerate(lines[start - 1 :], start=start):
        if not line:
            continue
        cells = line.split(",")
        parsed = []
        for col, cell in enumerate(cells, start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ParseError(
                    f"{path}: row {lineno}, column {col}: not a number: {cell!r}"
                ) from None
        rows.append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    width = len(rows[0])
    for lineno, parsed in enumerate(rows, start=start):
        if len(parsed) != width:
            raise ParseError(f"{path}: row {lineno}: expected {width} columns")
    arr = np.asarray(rows)
    features, labels = arr[:, :-1], arr[:, -1]
    values = set(np.unique(labels))
    if values <= {0.0, 1.0}:
        labels = np.where(labels == 0.0, -1.0, 1.0)
    elif not values <= {-1.0, 1.0}:
        raise ParseError(f"{path}: labels must be -1/+1 or 0/1, saw {sorted(values)}")
    return Dataset(features, labels.astype(int))


def load_sparse_binary(path: str | Path) -> Dataset:
    """Lines of "label idx idx ..." with 1-based indices of present features.

    Present features map to +1, absent to -1; the dimensionality is the
    largest index seen; duplicate indices on a line are ignored.
    """
    labels: list[int] = []
    index_sets: list[set[int]] = []
    max_idx = 0
    with open(path) as fh:
        lines = fh.read().splitlines()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] not in ("-1", "+1", "1"):
            raise ParseError(f"{path}: row {lineno}: label must be -1 or +1, got {parts[0]!r}")
        labels.append(1 if parts[0] in ("+1", "1") else -1)
        idxs = set()
        for tok in parts[1:]:
            try:
                idx = int(tok)
            except ValueError:
                raise ParseError(f"{path}: row {lineno}: bad index {tok!r}") from None
            if idx < 1:
                raise ParseError(f"{path}: row {lineno}: indices are 1-based, got {idx}")
            idxs.add(idx)
        index_sets.append(idxs)
        max_idx = max(max_idx, max(idxs, default=0))
    if not labels:
        raise ParseError(f"{path}: empty file")
    dim = max(max_idx, 1)
    features = -np.ones((len(labels), dim))
    for i, idxs in enumerate(index_sets):
        for idx in idxs:
            features[i, idx - 1] = 1.0
    return Dataset(features, np.asarray(labels))


def write_dense_csv(data: Dataset, path: str | Path) -> None:
    """Serialize features plus a trailing +/-1 label column."""
    lines = []
    for i in range(data.n_examples):
        cells = [format(v, ".17g") for v in data.features[i]]
        cells.append(format(int(data.labels[i]), "+d"))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def write_sparse_binary(data: Dataset, path: str | Path) -> None:
    """Serialize a +/-1 feature matrix in the sparse present/absent format."""
    lines = []
    for i in range(data.n_examples):
        present = np.flatnonzero(data.features[i] > 0) + 1
        lines.append(" ".join([format(int(data.labels[i]), "+d")] + [str(j) for j in present]))
    Path(path).write_text("\n".join(lines) + "\n")


def materialize_dataset(spec: ExperimentSpec, rng: np.random.Generator) -> Dataset:
    src = spec.dataset_source
    params = spec.gen_params
    if src.startswith("csv:"):
        return load_dense_csv(src[4:], header=bool(params.get("header", False)))
    if src.startswith("sparse:"):
        return load_sparse_binary(src[7:])
    if src == "step":
        return datagen.make_step_dataset(
            float(params.get("theta", 0.0)), rng, xi=float(params.get("xi", datagen.LOG3))
        )
    if src == "long-servedio":
        return datagen.make_long_servedio(
            int(params.get("n", 10)),
            float(params.get("noise_level", 0.2)),
            int(params.get("count", 1200)),
            rng,
        )
    if src == "sparse-text":
        return datagen.make_sparse_text(
            int(params.get("n_docs", 145)), int(params.get("n_features", 2000)), rng
        )
    raise ConfigError(f"unknown dataset source {src!r}")


def split_indices(
    n: int, train_fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint, exhaustive train/test index sets from one permutation."""
    n_train = max(1, min(n - 1, round(train_fraction * n)))
    perm = rng.permutation(n)
    return perm[:n_train], perm[n_train:]


def _errors_per_round(stages, space, features, labels) -> np.ndarray:
    margins = np.zeros(features.shape[0])
    out = np.empty(len(stages))
    for t, (alpha, idx) in enumerate(stages):
        margins += alpha * space.stumps[idx].predict(features)
        out[t] = float(np.mean(predict_sign(margins) != labels))
    return out


def _run_single_repeat(spec: ExperimentSpec, data: Dataset, rng: np.random.Generator):
    train_idx, test_idx = split_indices(data.n_examples, spec.train_fraction, rng)
    train, test = data.subset(train_idx), data.subset(test_idx)
    space = build_stumps(train)
    t_rounds = spec.rounds
    snr = np.full(t_rounds, np.nan)
    grade = np.full(t_rounds, np.nan)
    if spec.algorithm == "viboost":
        cfg = dataclasses.replace(spec.vi or viboost.VIConfig(), rounds=t_rounds)

        def hook(t, state):
            snr[t] = state.eta[0] / state.eta[1]
            grade[t] = math.log(state.omega[1] / state.omega[0])

        stages, _, _ = viboost.run(train, space, cfg, rng, round_hook=hook)
    elif spec.algorithm in ("adaboost", "adaboost-smoothed"):
        base = spec.ada_config or ada.AdaConfig()
        mu0 = base.smoothing_mu0 if spec.algorithm == "adaboost-smoothed" else 0.0
        if spec.algorithm == "adaboost-smoothed" and mu0 == 0.0:
            mu0 = 1.0
        cfg = ada.AdaConfig(rounds=t_rounds, smoothing_mu0=mu0, tau=base.tau)
        stages = ada.run_adaboost(train, space, cfg)
    else:  # gibbs
        hyper = spec.gibbs_hyper or gibbs.GibbsHyper()
        trace = gibbs.run_gibbs(
            train, space, hyper, iters=t_rounds + spec.gibbs_burnin,
            burnin=spec.gibbs_burnin, thin=1, rng=rng,
        )
        c_mean = trace.mean_c()
        stages = [(float(c_mean[i]), i) for i in range(space.size)]
        theta_mean = trace.mean_theta()
        snr_val = theta_mean / (1.0 - theta_mean) if theta_mean < 1.0 else math.inf
        train_err = float(
            np.mean(predict_sign(ensemble_margins_on(stages, space, train.features)) != train.labels)
        )
        test_err = float(
            np.mean(predict_sign(ensemble_margins_on(stages, space, test.features)) != test.labels)
        )
        one = np.ones(1)
        return one * train_err, one * test_err, one * snr_val, one * trace.mean_xi()

    train_err = _errors_per_round(stages, space, train.features, train.labels)
    test_err = _errors_per_round(stages, space, test.features, test.labels)
    return train_err, test_err, snr, grade


def run_experiment(spec: ExperimentSpec) -> ResultTable:
    """Full protocol: materialize data once, repeat seeded splits, aggregate,
    and persist results.csv plus the three SVG charts in output_dir."""
    data_rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 0]))
    data = materialize_dataset(spec, data_rng)

    per_repeat = []
    for rep in range(spec.repeats):
        rng = np.random.default_rng(np.random.SeedSequence([spec.seed, 1 + rep]))
        per_repeat.append(_run_single_repeat(spec, data, rng))

    stacked = [np.vstack([r[i] for r in per_repeat]) for i in range(4)]

    def mean_se(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mean = mat.mean(axis=0)
        if mat.shape[0] == 1:
            return mean, np.zeros_like(mean)
        return mean, mat.std(axis=0, ddof=1) / math.sqrt(mat.shape[0])

    (tr_m, tr_s), (te_m, te_s), (snr_m, snr_s), (gr_m, gr_s) = map(mean_se, stacked)
    rounds = np.arange(1, len(tr_m) + 1)
    table = ResultTable(rounds, tr_m, tr_s, te_m, te_s, snr_m, snr_s, gr_m, gr_s)

    spec.output_dir.mkdir(parents=True, exist_ok=True)
    table.write_csv(spec.output_dir / "results.csv")
    emit_plots(table, spec.output_dir)
    return table


def emit_plots(table: ResultTable, out_dir: str | Path) -> list[Path]:
    """Write error/SNR/noise-grade line charts (SVG) with SE bands."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def band_plot(path, series, ylabel):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for label, mean, se in series:
            ax.plot(table.rounds, mean, label=label, marker="o" if len(table.rounds) == 1 else None)
            ax.fill_between(table.rounds, mean - se, mean + se, alpha=0.25)
        ax.set_xlabel("round")
        ax.set_ylabel(ylabel)
        if len(series) > 1:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)

    band_plot(
        out_dir / "errors.svg",
        [
            ("train", table.train_err_mean, table.train_err_se),
            ("test", table.test_err_mean, table.test_err_se),
        ],
        "classification error",
    )
    band_plot(out_dir / "snr.svg", [("snr", table.snr_mean, table.snr_se)], "eta1 / eta2")
    band_plot(
        out_dir / "noise_grade.svg",
        [("noise grade", table.grade_mean, table.grade_se)],
        "log(omega2 / omega1)",
    )
    return written
