"""Synthetic dataset generators and the noise-channel algebra.

Labels come from a two-type process: with probability ``type_prior`` an
example draws its label from the instance-dependent log-odds F(x) (a
"true" label), otherwise from the instance-independent noise grade xi
(a "noisy" label).  The mixture/channel helpers convert the familiar
keep/invert/rerandomize description of label corruption into that form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .hypotheses import Dataset

LOG3 = math.log(3.0)


@dataclass(frozen=True)
class NoiseMixture:
    """Keep / invert / rerandomize label corruption.

    rho = (P[keep], P[invert], P[Bernoulli(r) reassignment]).
    """

    rho: tuple[float, float, float]
    r: float

    def __post_init__(self) -> None:
        rho = tuple(float(v) for v in self.rho)
        object.__setattr__(self, "rho", rho)
        if len(rho) != 3 or any(v < 0 for v in rho):
            raise ValueError("rho must be three nonnegative probabilities")
        if abs(sum(rho) - 1.0) > 1e-12:
            raise ValueError("rho must sum to 1")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("r must lie in [0, 1]")


@dataclass(frozen=True)
class EquivalentChannel:
    """Two-step form of a label-corruption mixture.

    With probability theta the label is kept; otherwise it is replaced by a
    Bernoulli(s) draw.  (a, b) are the crossover probabilities of the
    corresponding binary asymmetric channel: a = P(Y=-1 | V=+1) and
    b = P(Y=+1 | V=-1).
    """

    theta: float
    s: float
    a: float
    b: float


@dataclass
class GenSpec:
    """Generator inputs: instances, log-odds function, noise grade, type prior.

    ``log_odds`` may return +/-inf; the sentinel resolves to a deterministic
    label before any arithmetic happens.
    """

    domain: np.ndarray
    log_odds: Callable[[np.ndarray], float]
    noise_grade: float
    type_prior: float

    def __post_init__(self) -> None:
        self.domain = np.asarray(self.domain, dtype=float)
        if self.domain.ndim == 1:
            self.domain = self.domain[:, None]
        if not 0.0 <= self.type_prior <= 1.0:
            raise ValueError("type_prior must lie in [0, 1]")


def _label_prob(log_odds: float) -> float:
    # P(y = +1) from a log-odds value, with +/-inf resolved deterministically
    if log_odds == math.inf:
        return 1.0
    if log_odds == -math.inf:
        return 0.0
    e = math.exp(-abs(log_odds))
    return 1.0 / (1.0 + e) if log_odds >= 0 else e / (1.0 + e)


def generate_labels(spec: GenSpec, rng: np.random.Generator) -> Dataset:
    """Draw one label per domain instance under the two-type process.

    Each example first draws its type selector w ~ Bernoulli(type_prior);
    true labels use P(+1) = sigmoid(F(x)), noisy ones P(+1) = sigmoid(xi).
    The selectors are recorded as ``true_types``.
    """
    n = spec.domain.shape[0]
    w = (rng.random(n) < spec.type_prior).astype(int)
    p_noise = _label_prob(spec.noise_grade)
    probs = np.array(
        [
            _label_prob(float(spec.log_odds(spec.domain[i]))) if w[i] else p_noise
            for i in range(n)
        ]
    )
    labels = np.where(rng.random(n) < probs, 1, -1)
    return Dataset(spec.domain.copy(), labels, true_types=w)


def step_spec(theta: float, xi: float = LOG3) -> GenSpec:
    """100 points on the odd integers of [-99, 99] with a hard step:
    log-odds +inf right of zero, -inf left of it."""
    domain = np.arange(-99.0, 100.0, 2.0)

    def log_odds(x: np.ndarray) -> float:
        return math.inf if x[0] > 0 else -math.inf

    return GenSpec(domain, log_odds, noise_grade=xi, type_prior=theta)


def make_step_dataset(theta: float, rng: np.random.Generator, xi: float = LOG3) -> Dataset:
    """Step dataset with noise grade log 3 (overridable) and type prior theta."""
    return generate_labels(step_spec(theta, xi), rng)


def make_long_servedio(
    n: int, noise_level: float, count: int, rng: np.random.Generator
) -> Dataset:
    """Margin-trap dataset on {-1,+1}^(2n+11) that defeats convex-loss boosters
    once labels are flipped.

    A clean label y is uniform; the instance is then one of three clusters:
    with probability 1/4 all coordinates equal y (large margin), with
    probability 1/4 the first 11 equal y and the last 2n equal -y (pullers),
    and with probability 1/2 exactly 5 random coordinates of the first 11 and
    n+6 random coordinates of the last 2n equal y (penalizers).  Every
    coordinate agrees with the clean label more often than not, so each is a
    weakly useful feature.  Labels are finally inverted independently with
    probability ``noise_level``; kept labels get true_type 1, flipped ones 0.
    """
    if n < 6:
        raise ValueError("the penalizer pattern needs n >= 6")
    if not 0.0 <= noise_level < 0.5:
        raise ValueError("noise_level must lie in [0, 0.5)")
    if count < 1:
        raise ValueError("count must be >= 1")
    dim = 2 * n + 11
    x = np.empty((count, dim))
    y = rng.choice([-1, 1], size=count)
    cluster = rng.random(count)
    for i in range(count):
        yi = float(y[i])
        if cluster[i] < 0.25:
            x[i] = yi
        elif cluster[i] < 0.5:
            x[i, :11] = yi
            x[i, 11:] = -yi
        else:
            x[i] = -yi
            head = rng.choice(11, size=5, replace=False)
            tail = 11 + rng.choice(2 * n, size=n + 6, replace=False)
            x[i, head] = yi
            x[i, tail] = yi
    flipped = rng.random(count) < noise_level
    labels = np.where(flipped, -y, y)
    return Dataset(x, labels, true_types=(~flipped).astype(int))


def mixture_to_channel(m: NoiseMixture) -> EquivalentChannel:
    """Collapse keep/invert/rerandomize into the keep-or-Bernoulli form.

    theta = 2 rho1 + rho3 - 1 (= rho1 - rho2), which must be nonnegative:
    inversion-dominant channels have no equivalent of this shape.
    """
    rho1, rho2, rho3 = m.rho
    theta = 2.0 * rho1 + rho3 - 1.0
    if theta < 0.0:
        raise ValueError("inversion-dominant mixture (rho1 < rho2) cannot be represented")
    theta_bar = 2.0 - 2.0 * rho1 - rho3
    s = (1.0 - rho1 - rho3 * (1.0 - m.r)) / theta_bar if theta_bar > 0 else 0.5
    a = rho2 + rho3 * (1.0 - m.r)
    b = rho2 + rho3 * m.r
    return EquivalentChannel(theta=theta, s=s, a=a, b=b)


def channel_conditionals(c: EquivalentChannel) -> dict[tuple[int, int], float]:
    """P(Y = y | V = v) for the keep-or-Bernoulli channel."""
    theta_bar = 1.0 - c.theta
    return {
        (+1, +1): c.theta + theta_bar * c.s,
        (-1, +1): theta_bar * (1.0 - c.s),
        (+1, -1): theta_bar * c.s,
        (-1, -1): c.theta + theta_bar * (1.0 - c.s),
    }


def mixture_conditionals(m: NoiseMixture) -> dict[tuple[int, int], float]:
    """P(Y = y | V = v) straight from the keep/invert/rerandomize description."""
    rho1, rho2, rho3 = m.rho
    return {
        (+1, +1): rho1 + rho3 * m.r,
        (-1, +1): rho2 + rho3 * (1.0 - m.r),
        (+1, -1): rho2 + rho3 * m.r,
        (-1, -1): rho1 + rho3 * (1.0 - m.r),
    }


def expected_snr(theta: float) -> float:
    """Expected true-to-noisy label ratio (1 + theta) / (1 - theta) on a
    balanced dataset; infinity at theta = 1."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if theta == 1.0:
        return math.inf
    return (1.0 + theta) / (1.0 - theta)


def make_sparse_text(
    n_docs: int,
    n_features: int,
    rng: np.random.Generator,
    informative: int = 60,
    p_hit: float = 0.35,
    p_miss: float = 0.05,
    p_background: float = 0.02,
) -> Dataset:
    """Synthetic stand-in for a present/absent bag-of-words corpus.

    Purely artificial: two balanced classes, a block of ``informative``
    features per class that appear more often in their own class, and a
    sparse background.  Features take values +1 (present) / -1 (absent).
    """
    if informative * 2 > n_features:
        raise ValueError("need n_features >= 2 * informative")
    labels = np.where(rng.random(n_docs) < 0.5, 1, -1)
    probs = np.full((n_docs, n_features), p_background)
    pos_block = slice(0, informative)
    neg_block = slice(informative, 2 * informative)
    for i in range(n_docs):
        if labels[i] == 1:
            probs[i, pos_block] = p_hit
            probs[i, neg_block] = p_miss
        else:
            probs[i, pos_block] = p_miss
            probs[i, neg_block] = p_hit
    present = rng.random((n_docs, n_features)) < probs
    features = np.where(present, 1.0, -1.0)
    return Dataset(features, labels)
