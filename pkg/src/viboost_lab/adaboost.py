"""AdaBoost baseline and its prior-smoothed weight variant.

The smoothed stage weight

    alpha = (1 / 2 tau) * log( (mu0/Z + 1 - eps) / (mu0/Z + eps) )

reduces to the classic (1/2) log((1-eps)/eps) as mu0/Z -> 0 and shrinks
toward zero as the exponential loss Z drops, so the algorithm behaves
like AdaBoost early and grows conservative as training progresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWeightError
from .hypotheses import Dataset, StumpSpace
from .numerics import logsumexp


@dataclass(frozen=True)
class AdaConfig:
    """Rounds, smoothing strength (0 = classic AdaBoost), and tail scale."""

    rounds: int = 50
    smoothing_mu0: float = 0.0
    tau: float = 1.0

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.smoothing_mu0 < 0:
            raise ValueError("smoothing_mu0 must be nonnegative")
        if not self.tau > 0:
            raise ValueError("tau must be positive")


def smoothed_alpha(eps: float, Z: float, mu0: float, tau: float = 1.0) -> float:
    """Stage weight for weighted error eps with smoothing mass mu0/Z.

    With mu0 = 0 and eps in {0, 1} the classic weight diverges; the
    +/-inf sentinel is returned and callers treat it as an error.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    if not Z > 0:
        raise ValueError("Z must be positive")
    if mu0 < 0:
        raise ValueError("mu0 must be nonnegative")
    if not tau > 0:
        raise ValueError("tau must be positive")
    a = mu0 / Z
    if a == 0.0:
        if eps == 0.0:
            return math.inf
        if eps == 1.0:
            return -math.inf
    return (math.log(a + (1.0 - eps)) - math.log(a + eps)) / (2.0 * tau)


def run_adaboost(
    data: Dataset, space: StumpSpace, cfg: AdaConfig
) -> list[tuple[float, int]]:
    """Greedy boosting loop: pick the minimum-weighted-error stump, weight it
    (smoothed when cfg.smoothing_mu0 > 0), and reweight the examples.

    Returns the stage list [(alpha_t, stump_index_t)].  Ties in the error
    scan break toward the lowest stump index.
    """
    if space.size == 0:
        raise ValueError("hypothesis space is empty")
    y = data.labels
    mistakes = space.prediction_table != y[None, :]
    margins = np.zeros(data.n_examples)
    stages: list[tuple[float, int]] = []
    for _ in range(cfg.rounds):
        logw = -cfg.tau * y * margins
        log_z = logsumexp(logw)
        d = np.exp(logw - log_z)
        eps = mistakes @ d
        idx = int(np.argmin(eps))
        alpha = smoothed_alpha(float(eps[idx]), math.exp(log_z), cfg.smoothing_mu0, cfg.tau)
        if not math.isfinite(alpha):
            raise DegenerateWeightError(
                f"weighted error {eps[idx]:.0f} with no smoothing gives an infinite weight"
            )
        margins += alpha * space.prediction_table[idx]
        stages.append((alpha, idx))
    return stages
