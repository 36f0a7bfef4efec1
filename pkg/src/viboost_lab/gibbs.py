"""Systematic-scan Gibbs sampler for the static noise model.

This is the exact-inference oracle used to validate the variational
results on micro instances.  One sweep updates, in order: every ensemble
weight c_i from its versatile-logistic full conditional (slice-sampling
transitions from the current value), the noise grade xi (exact Beta
transform), every type selector w_i (Bernoulli), and the type prior theta
(Beta).  It is deliberately capped at micro scale; its job is validation,
not inference at size.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import vlog
from .errors import ScaleGuardError
from .hypotheses import Dataset, StumpSpace
from .numerics import log1pexp
from .vlog import VLogParams

MAX_EXAMPLES = 20
MAX_CLASSIFIERS = 10


@dataclass(frozen=True)
class GibbsHyper:
    """Prior masses: weight multiplicity, grade multiplicity, Beta pair."""

    mu0: float = 1.0
    mu0_prime: float = 1.0
    zeta: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self) -> None:
        if not (self.mu0 > 0 and self.mu0_prime > 0):
            raise ValueError("mu0 and mu0_prime must be positive")
        if not (self.zeta[0] > 0 and self.zeta[1] > 0):
            raise ValueError("zeta must be positive")


@dataclass
class GibbsState:
    """One point of the chain: weights, grade, type selectors, type prior."""

    c: np.ndarray
    xi: float
    w: np.ndarray
    theta: float

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=float)
        self.w = np.asarray(self.w, dtype=int)
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.w.size and not np.all(np.isin(self.w, (0, 1))):
            raise ValueError("type selectors must be 0/1")

    def copy(self) -> "GibbsState":
        return GibbsState(self.c.copy(), self.xi, self.w.copy(), self.theta)


@dataclass
class GibbsTrace:
    """Retained post-burn-in states plus the thinning bookkeeping."""

    samples: list[GibbsState]
    burnin: int
    thin: int

    def __post_init__(self) -> None:
        if self.burnin < 0:
            raise ValueError("burnin must be >= 0")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")

    def mean_theta(self) -> float:
        return float(np.mean([s.theta for s in self.samples]))

    def mean_xi(self) -> float:
        return float(np.mean([s.xi for s in self.samples]))

    def mean_w(self) -> np.ndarray:
        return np.mean([s.w for s in self.samples], axis=0)

    def mean_c(self) -> np.ndarray:
        return np.mean([s.c for s in self.samples], axis=0)

    def write_csv(self, path: str | Path) -> None:
        """One row per retained sweep: theta, xi, then c and w vectors."""
        samples = self.samples
        m = samples[0].c.size if samples else 0
        n = samples[0].w.size if samples else 0
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["sweep", "theta", "xi"]
                + [f"c_{i}" for i in range(m)]
                + [f"w_{i}" for i in range(n)]
            )
            for t, s in enumerate(samples):
                writer.writerow(
                    [t, f"{s.theta:.17g}", f"{s.xi:.17g}"]
                    + [f"{v:.17g}" for v in s.c]
                    + [int(v) for v in s.w]
                )


def conditional_c(
    i: int, state: GibbsState, data: Dataset | None, space: StumpSpace | None, mu0: float
) -> VLogParams:
    """Full-conditional parameters for weight i.

    Slopes [+1, -1, -y_1 f_i(x_1), ...], knots [0, 0, -ftilde_i(x_1) f_i(x_1), ...],
    multiplicities [mu0, mu0, w_1, ...], where ftilde_i is the ensemble margin
    with weight i removed.  Zero-multiplicity entries (w_n = 0) are inert, so
    validity always comes from the prior block.
    """
    if data is None or space is None:
        return VLogParams(np.array([1.0, -1.0]), np.zeros(2), np.full(2, mu0))
    pred_i = space.prediction_table[i].astype(float)
    margins = state.c @ space.prediction_table.astype(float)
    ftilde = margins - state.c[i] * pred_i
    slopes = np.concatenate([[1.0, -1.0], -data.labels * pred_i])
    knots = np.concatenate([[0.0, 0.0], -ftilde * pred_i])
    mults = np.concatenate([[mu0, mu0], state.w.astype(float)])
    return VLogParams(slopes, knots, mults)


def _grade_multiplicities(
    labels: np.ndarray, w: np.ndarray, mu0_prime: float
) -> tuple[float, float]:
    not_w = 1 - w
    om1 = mu0_prime + float(not_w[labels == -1].sum()) if labels.size else mu0_prime
    om2 = mu0_prime + float(not_w[labels == +1].sum()) if labels.size else mu0_prime
    return om1, om2


def _sample_grade(om1: float, om2: float, rng: np.random.Generator) -> float:
    # exact draw from v-Log([+1,-1], [0,0], [om1, om2]) via the Beta transform
    v = rng.beta(om1, om2)
    while v <= 0.0 or v >= 1.0:
        v = rng.beta(om1, om2)
    return float(vlog.beta_transform(v, beta=1.0, gamma=0.0))


def type_selector_prob(theta: float, margin: float, xi: float, y: int) -> float:
    """P(w = 1) for one example: the true-label branch mass
    theta * sigmoid(y * margin) against (1 - theta) * sigmoid(y * xi)."""
    log_true = _log_theta(theta) - log1pexp(-y * margin)
    log_noise = _log_theta(1.0 - theta) - log1pexp(-y * xi)
    return _stable_sigmoid(log_true - log_noise)


def type_prior_params(w: np.ndarray, zeta: tuple[float, float]) -> tuple[float, float]:
    """Beta parameters of the type-prior conditional: counts added to zeta."""
    w = np.asarray(w, int)
    k = int(w.sum())
    return zeta[0] + k, zeta[1] + (w.size - k)


def gibbs_sweep(
    state: GibbsState,
    data: Dataset | None,
    space: StumpSpace | None,
    hyper: GibbsHyper,
    rng: np.random.Generator,
) -> GibbsState:
    """One full systematic scan; returns a new state."""
    state = state.copy()
    have_data = data is not None and space is not None
    m = state.c.size

    for i in range(m):
        params = conditional_c(i, state, data, space, hyper.mu0)
        state.c[i] = vlog.slice_update(params, float(state.c[i]), rng, transitions=4)

    labels = data.labels if have_data else np.zeros(0, int)
    om1, om2 = _grade_multiplicities(labels, state.w, hyper.mu0_prime)
    state.xi = _sample_grade(om1, om2, rng)

    if have_data:
        margins = state.c @ space.prediction_table.astype(float)
        for i in range(labels.size):
            p1 = type_selector_prob(state.theta, float(margins[i]), state.xi, int(labels[i]))
            state.w[i] = 1 if rng.random() < p1 else 0

    a, b = type_prior_params(state.w, hyper.zeta)
    state.theta = float(rng.beta(a, b))
    return state


def _log_theta(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


def _stable_sigmoid(t: float) -> float:
    if t == -math.inf:
        return 0.0
    e = math.exp(-abs(t))
    return 1.0 / (1.0 + e) if t >= 0 else e / (1.0 + e)


def run_gibbs(
    data: Dataset | None,
    space: StumpSpace | None,
    hyper: GibbsHyper,
    iters: int,
    burnin: int,
    thin: int,
    rng: np.random.Generator,
    init: GibbsState | None = None,
) -> GibbsTrace:
    """Run a chain and return the thinned post-burn-in trace.

    Micro instances only: more than 20 examples or 10 classifiers is
    refused, since this sampler exists to validate the variational path,
    not to scale.  Pass ``data=None`` for the empty-evidence case (prior
    recovery).
    """
    if not iters > burnin:
        raise ValueError("iters must exceed burnin")
    n = data.n_examples if data is not None else 0
    m = space.size if space is not None else 0
    if n > MAX_EXAMPLES or m > MAX_CLASSIFIERS:
        raise ScaleGuardError(
            f"gibbs oracle accepts at most {MAX_EXAMPLES} examples and "
            f"{MAX_CLASSIFIERS} classifiers; got N={n}, M={m}"
        )
    if init is None:
        state = GibbsState(c=np.zeros(m), xi=0.0, w=np.ones(n, int), theta=0.5)
    else:
        state = init.copy()
    samples: list[GibbsState] = []
    for t in range(iters):
        state = gibbs_sweep(state, data, space, hyper, rng)
        if t >= burnin and (t - burnin) % thin == 0:
            samples.append(state.copy())
    return GibbsTrace(samples=samples, burnin=burnin, thin=thin)
