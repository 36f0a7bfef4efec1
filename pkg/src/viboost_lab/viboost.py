"""VIBoost: stagewise variational inference for boosting under label noise.

Each round greedily picks the stump whose stage posterior has the largest
absolute mode, then cycles four coordinate updates while an evidence
bound keeps improving:

    alpha  <- tail-approximation mode of the stage weight posterior
    omega  <- noise-grade posterior multiplicities (from 1 - phi)
    phi_n  <- responsibility that example n carries a true label
    eta    <- type-prior Beta parameters (from phi)

The stage weight posterior is the versatile logistic with slopes
[+1, -1, -y_1 h(x_1), ...], knots [0, 0, -H(x_1) h(x_1), ...], and
multiplicities [mu0, mu0, phi_1, ...]; the two leading entries act as a
pair of phantom examples sitting on the decision boundary, one classified
correctly and one not, which is what smooths the classic boosting weight.

The greedy scan never runs a mode search per stump.  With

    Z = sum_n phi_n e^{-tau y_n H(x_n)},   d_n = phi_n e^{-tau y_n H(x_n)} / Z,
    eps(h) = sum_n d_n 1{h(x_n) != y_n},

the tail-approximation mode collapses to

    alpha(h) = (1 / 2 tau) log( (mu0/Z + 1 - eps) / (mu0/Z + eps) ),

so ranking stumps only needs their weighted errors, exactly as in
AdaBoost; with all phi_n = 1 the update *is* the smoothed AdaBoost weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import vlog
from .hypotheses import Dataset, StumpSpace, predict_sign
from .numerics import QuadratureConfig, digamma, logsumexp
from .vlog import VLogParams


@dataclass(frozen=True)
class VIConfig:
    """Hyperparameters and loop controls.

    ``elbo_enabled`` switches the inner loop between bound-driven stopping
    (threshold ``inner_tol``, cap ``inner_max``) and a fixed budget of
    ``inner_fixed`` iterations that skips the quadrature entirely.
    """

    mu0: float = 1.0
    mu0_prime: float = 1.0
    zeta: tuple[float, float] = (1.0, 1.0)
    tau: float = 1.0
    rounds: int = 50
    inner_tol: float = 1e-6
    inner_max: int = 50
    elbo_enabled: bool = False
    inner_fixed: int = 5

    def __post_init__(self) -> None:
        if not (self.mu0 > 0 and self.mu0_prime > 0 and self.tau > 0):
            raise ValueError("mu0, mu0_prime, tau must be positive")
        if not (self.zeta[0] > 0 and self.zeta[1] > 0):
            raise ValueError("zeta must be positive")
        if self.rounds < 1 or self.inner_max < 1 or self.inner_fixed < 1:
            raise ValueError("rounds, inner_max, inner_fixed must be >= 1")


@dataclass
class BoostState:
    """Mutable per-run state: ensemble margins plus variational parameters.

    ``labels`` binds the state to its training data; phi/omega/eta persist
    across boosting rounds (warm start).  ``elbo_rounds`` groups the trace
    per round; ``elbo_trace`` is its concatenation.
    """

    labels: np.ndarray
    margins: np.ndarray
    stages: list[tuple[float, int]] = field(default_factory=list)
    phi: np.ndarray = None
    omega: tuple[float, float] = (1.0, 1.0)
    eta: tuple[float, float] = (1.0, 1.0)
    elbo_trace: list[float] = field(default_factory=list)
    elbo_rounds: list[list[float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.labels = np.asarray(self.labels, dtype=int)
        self.margins = np.asarray(self.margins, dtype=float)
        if self.phi is None:
            self.phi = np.ones(self.labels.size)
        self.phi = np.asarray(self.phi, dtype=float)

    @property
    def n_examples(self) -> int:
        return self.labels.size


@dataclass
class NoiseReport:
    """Run diagnostics: SNR eta1/eta2, noise grade log(omega2/omega1),
    final per-example true-label responsibilities, and the bound trace."""

    snr: float
    noise_grade: float
    per_example_true_prob: np.ndarray
    elbo_trace: list[float]

    def to_dict(self) -> dict:
        return {
            "snr": self.snr,
            "noise_grade": self.noise_grade,
            "per_example_true_prob": [float(v) for v in self.per_example_true_prob],
            "elbo_trace": [float(v) for v in self.elbo_trace],
        }


def init_state(labels: np.ndarray, cfg: VIConfig) -> BoostState:
    """Fresh state: zero margins, phi = 1, eta = zeta, omega = (mu0', mu0')."""
    labels = np.asarray(labels, dtype=int)
    return BoostState(
        labels=labels,
        margins=np.zeros(labels.size),
        phi=np.ones(labels.size),
        omega=(cfg.mu0_prime, cfg.mu0_prime),
        eta=(float(cfg.zeta[0]), float(cfg.zeta[1])),
    )


def stage_vlog_params(
    state: BoostState, h: int, space: StumpSpace, cfg: VIConfig
) -> VLogParams:
    """Stage weight posterior parameters for candidate stump ``h``.

    Length N+2: two phantom prior entries (slopes +/-1, knot 0, mass mu0)
    followed by one entry per example with slope -y_n h(x_n), knot
    -H(x_n) h(x_n), and multiplicity phi_n.
    """
    pred = space.prediction_table[h].astype(float) if state.n_examples else np.zeros(0)
    slopes = np.concatenate([[1.0, -1.0], -state.labels * pred])
    knots = np.concatenate([[0.0, 0.0], -state.margins * pred])
    mults = np.concatenate([[cfg.mu0, cfg.mu0], state.phi])
    return VLogParams(slopes, knots, mults)


def _reweighted(state: BoostState, cfg: VIConfig) -> tuple[np.ndarray, float]:
    """Current example distribution d and log Z, in stable log space."""
    logw = np.log(state.phi) - cfg.tau * state.labels * state.margins
    log_z = logsumexp(logw)
    return np.exp(logw - log_z), log_z


def _alpha_from_eps(eps, log_z: float, cfg: VIConfig):
    """Stage weight(s) from weighted error(s) via the smoothed closed form,
    assembled with logaddexp so eps = 0, huge margins, and tiny Z are safe."""
    # rounding in the mistake/weight inner product can leave eps a few ulp
    # outside [0, 1], which would poison the logs below
    eps = np.clip(np.asarray(eps, dtype=float), 0.0, 1.0)
    log_a = math.log(cfg.mu0) - log_z
    with np.errstate(divide="ignore"):
        log_top = np.log(1.0 - eps)
        log_bot = np.log(eps)
    return (np.logaddexp(log_a, log_top) - np.logaddexp(log_a, log_bot)) / (2.0 * cfg.tau)


def _mistake_table(state: BoostState, space: StumpSpace) -> np.ndarray:
    return space.prediction_table != state.labels[None, :]


def select_classifier(
    state: BoostState, space: StumpSpace, cfg: VIConfig, mistakes: np.ndarray | None = None
) -> int:
    """Index of the stump whose stage posterior mode is largest in magnitude.

    Ties break toward the lowest index.  Among stumps with eps <= 1/2 this
    is the minimum-weighted-error stump, since alpha falls as eps grows.
    """
    if space.size == 0:
        raise ValueError("hypothesis space is empty")
    if mistakes is None:
        mistakes = _mistake_table(state, space)
    d, log_z = _reweighted(state, cfg)
    eps = mistakes @ d
    alphas = _alpha_from_eps(eps, log_z, cfg)
    return int(np.argmax(np.abs(alphas)))


def stage_alpha(state: BoostState, h: int, space: StumpSpace, cfg: VIConfig) -> float:
    """Tail-approximation mode of the stage posterior for stump ``h``."""
    d, log_z = _reweighted(state, cfg)
    eps = float(d[space.prediction_table[h] != state.labels].sum())
    return float(_alpha_from_eps(eps, log_z, cfg))


def vi_inner_iteration(
    state: BoostState, h: int, space: StumpSpace, cfg: VIConfig
) -> tuple[BoostState, float]:
    """One coordinate-update cycle for the fixed stump ``h``.

    Order matters: alpha from current phi; omega from current phi; the
    responsibilities phi_n from the *new* omega and the current eta; eta
    from the new phi.  Returns (state, alpha); the state mutates in place.
    """
    y = state.labels
    pred = space.prediction_table[h].astype(float)

    alpha = stage_alpha(state, h, space, cfg)

    not_phi = 1.0 - state.phi
    om1 = cfg.mu0_prime + float(not_phi[y == -1].sum())
    om2 = cfg.mu0_prime + float(not_phi[y == +1].sum())
    state.omega = (om1, om2)

    e1, e2 = digamma(state.eta[0]), digamma(state.eta[1])
    d0 = digamma(om1 + om2)
    d_side = np.where(y == 1, digamma(om2), digamma(om1))
    log_kappa = (e1 - e2 + d0 - d_side) - np.logaddexp(
        0.0, -y * (state.margins + alpha * pred)
    )
    # phi = kappa / (1 + kappa), evaluated as a stable sigmoid of log kappa
    ek = np.exp(-np.abs(log_kappa))
    state.phi = np.where(log_kappa >= 0, 1.0 / (1.0 + ek), ek / (1.0 + ek))

    s = float(state.phi.sum())
    state.eta = (cfg.zeta[0] + s, cfg.zeta[1] + (state.n_examples - s))
    return state, float(alpha)


def _xlogx(v: np.ndarray) -> np.ndarray:
    return np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)


def elbo(
    state: BoostState,
    h: int,
    alpha: float,
    space: StumpSpace,
    cfg: VIConfig,
    qcfg: QuadratureConfig | None = None,
) -> float:
    """Evidence bound for the current stage, up to an additive constant.

    Needs the stage posterior's log-normalizer, which is the one numeric
    quadrature in the whole algorithm.  ``alpha`` is accepted for interface
    symmetry with the inner iteration; the bound itself depends on the
    stage through phi/omega/eta and the stump, not through alpha.
    """
    if qcfg is None:
        qcfg = QuadratureConfig()
    y = state.labels
    phi = state.phi
    om1, om2 = state.omega
    et1, et2 = state.eta
    om0, et0 = om1 + om2, et1 + et2
    zeta0 = cfg.zeta[0] + cfg.zeta[1]

    log_bc = vlog.log_normalizer(stage_vlog_params(state, h, space, cfg), qcfg)

    grade_terms = (
        math.lgamma(om1)
        + math.lgamma(om2)
        - math.lgamma(om0)
        + (om0 - 2.0 * cfg.mu0_prime) * digamma(om0)
        - (om1 - cfg.mu0_prime) * digamma(om1)
        - (om2 - cfg.mu0_prime) * digamma(om2)
    )
    prior_terms = (
        math.lgamma(et1)
        + math.lgamma(et2)
        - math.lgamma(et0)
        + (et0 - zeta0) * digamma(et0)
        - (et1 - cfg.zeta[0]) * digamma(et1)
        - (et2 - cfg.zeta[1]) * digamma(et2)
    )
    entropy_terms = -float(np.sum(_xlogx(phi) + _xlogx(1.0 - phi)))
    type_terms = (
        -state.n_examples * digamma(et0)
        + digamma(et1) * float(phi.sum())
        + digamma(et2) * float((1.0 - phi).sum())
    )
    not_phi = 1.0 - phi
    label_terms = (
        -digamma(om0) * float(not_phi.sum())
        + digamma(om1) * float(not_phi[y == -1].sum())
        + digamma(om2) * float(not_phi[y == +1].sum())
    )
    return log_bc + grade_terms + prior_terms + entropy_terms + type_terms + label_terms


def run(
    data: Dataset,
    space: StumpSpace,
    cfg: VIConfig,
    rng: np.random.Generator | None = None,
    qcfg: QuadratureConfig | None = None,
    round_hook: Callable[[int, BoostState], None] | None = None,
) -> tuple[list[tuple[float, int]], NoiseReport, BoostState]:
    """Full boosting loop; returns (stages, NoiseReport, final state).

    The algorithm itself is deterministic -- ``rng`` is accepted so runs
    slot into the same seeded-harness interface as the samplers.  The
    committed stage weight is the last inner-loop alpha, and phi, omega,
    eta carry over from round to round.  ``round_hook(t, state)`` fires
    after each commit for per-round diagnostics.
    """
    state = init_state(data.labels, cfg)
    mistakes = _mistake_table(state, space)
    for t in range(cfg.rounds):
        h = select_classifier(state, space, cfg, mistakes=mistakes)
        alpha = 0.0
        if cfg.elbo_enabled:
            previous = elbo(state, h, alpha, space, cfg, qcfg)
            trace = [previous]
            for _ in range(cfg.inner_max):
                state, alpha = vi_inner_iteration(state, h, space, cfg)
                current = elbo(state, h, alpha, space, cfg, qcfg)
                trace.append(current)
                improvement = current - previous
                previous = current
                if improvement < cfg.inner_tol:
                    break
            state.elbo_rounds.append(trace)
            state.elbo_trace.extend(trace)
        else:
            for _ in range(cfg.inner_fixed):
                state, alpha = vi_inner_iteration(state, h, space, cfg)
        state.margins += alpha * space.prediction_table[h]
        state.stages.append((alpha, h))
        if round_hook is not None:
            round_hook(t, state)
    return state.stages, noise_report(state), state


def noise_report(state: BoostState) -> NoiseReport:
    """Summarize a finished state: SNR eta1/eta2 and grade log(omega2/omega1)."""
    return NoiseReport(
        snr=state.eta[0] / state.eta[1],
        noise_grade=math.log(state.omega[1] / state.omega[0]),
        per_example_true_prob=state.phi.copy(),
        elbo_trace=list(state.elbo_trace),
    )


def training_error(state: BoostState) -> float:
    """Misclassification rate of sign(H) on the training labels."""
    return float(np.mean(predict_sign(state.margins) != state.labels))
