"""The versatile logistic distribution.

A density on the reals proportional to a product of sigmoid tails,

    p(z) ~ prod_k (1 + exp[beta_k (z - gamma_k)])^(-mu_k),

parameterized by a slope vector, a knot vector, and a nonnegative
multiplicity vector.  It is log-concave, unimodal whenever it is a valid
density, and conjugate to the binary logistic label distribution: each
observed label appends one (slope, knot, multiplicity=1) factor.

This module covers construction/validation, the conjugate update, exact
and tail-approximation modes, the log-normalizer, the closed-form
two-term digamma expectations, and sampling (exact Beta transform for the
shared-knot two-term case, slice sampling otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics
from .errors import BracketError
from .numerics import Bracket, QuadratureConfig


@dataclass(frozen=True, eq=False)
class VLogParams:
    """Slope/knot/multiplicity vectors of a versatile logistic."""

    slopes: np.ndarray
    knots: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self) -> None:
        for name in ("slopes", "knots", "multiplicities"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.slopes.ndim == self.knots.ndim == self.multiplicities.ndim == 1):
            raise ValueError("parameter vectors must be one-dimensional")
        k = self.slopes.size
        if self.knots.size != k or self.multiplicities.size != k:
            raise ValueError("slopes, knots, multiplicities must share one length")
        if k < 2:
            raise ValueError("a versatile logistic needs at least two factors")
        if np.any(self.multiplicities < 0):
            raise ValueError("multiplicities must be nonnegative")
        if not (
            np.all(np.isfinite(self.slopes))
            and np.all(np.isfinite(self.knots))
            and np.all(np.isfinite(self.multiplicities))
        ):
            raise ValueError("parameters must be finite")

    @property
    def k(self) -> int:
        return self.slopes.size


@dataclass(frozen=True)
class BLogObservation:
    """A binary label with the slope/knot of its logistic likelihood."""

    y: int
    slope: float
    knot: float

    def __post_init__(self) -> None:
        if self.y not in (-1, 1):
            raise ValueError("label must be -1 or +1")


def standard_logistic() -> VLogParams:
    """The two-factor parameterization of the standard logistic density."""
    return VLogParams(np.array([1.0, -1.0]), np.zeros(2), np.ones(2))


def is_valid(p: VLogParams) -> bool:
    """True iff the unnormalized density integrates to a finite value.

    Requires a positive slope and a negative slope that each carry strictly
    positive multiplicity; otherwise one tail fails to decay.
    """
    mu = p.multiplicities
    return bool(np.any((p.slopes > 0) & (mu > 0)) and np.any((p.slopes < 0) & (mu > 0)))


def unnorm_log_density(p: VLogParams, z):
    """Log of the unnormalized density at z (scalar or 1-D array).

    Each factor is evaluated through a stable log1pexp, so the result is
    finite for any |z| a float can represent.
    """
    zs = np.asarray(z, dtype=float)
    scalar = zs.ndim == 0
    zs = np.atleast_1d(zs)
    t = p.slopes[:, None] * (zs[None, :] - p.knots[:, None])
    vals = -(p.multiplicities[:, None] * np.logaddexp(0.0, t)).sum(axis=0)
    return float(vals[0]) if scalar else vals


def posterior_update(prior: VLogParams, obs: Sequence[BLogObservation]) -> VLogParams:
    """Conjugate update: append one unit-multiplicity factor per label.

    An observation (y, slope, knot) contributes slope' = -y * slope,
    knot' = knot, multiplicity' = 1.
    """
    if not obs:
        return prior
    extra_slopes = np.array([-o.y * o.slope for o in obs])
    extra_knots = np.array([o.knot for o in obs])
    return VLogParams(
        np.concatenate([prior.slopes, extra_slopes]),
        np.concatenate([prior.knots, extra_knots]),
        np.concatenate([prior.multiplicities, np.ones(len(obs))]),
    )


def _neg_log_density_grad(p: VLogParams, z: float) -> float:
    # d/dz of -log density: sum_k mu_k beta_k sigma(beta_k (z - gamma_k))
    t = p.slopes * (z - p.knots)
    e = np.exp(-np.abs(t))
    sig = np.where(t >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return float(np.sum(p.multiplicities * p.slopes * sig))


def _mode_bracket(p: VLogParams) -> Bracket:
    # expand from the knot range by doubling until the convex negative
    # log-density has a sign change in its derivative
    lo = float(np.min(p.knots)) - 1.0
    hi = float(np.max(p.knots)) + 1.0
    width = hi - lo
    for _ in range(200):
        if _neg_log_density_grad(p, lo) < 0.0:
            break
        lo -= width
        width *= 2.0
    else:
        raise BracketError("could not bracket the mode from below")
    width = hi - lo
    for _ in range(200):
        if _neg_log_density_grad(p, hi) > 0.0:
            break
        hi += width
        width *= 2.0
    else:
        raise BracketError("could not bracket the mode from above")
    return Bracket(lo, hi)


def mode_exact(p: VLogParams, tol: float = 1e-8) -> float:
    """The unique mode, located by bracketing plus golden-section search."""
    if not is_valid(p):
        raise ValueError("mode requires a valid (integrable) parameterization")
    bracket = _mode_bracket(p)
    return numerics.golden_section_min(lambda z: -unnorm_log_density(p, z), bracket, tol)


def mode_approx(p: VLogParams, tau: float = 1.0) -> float:
    """Closed-form mode estimate from the exponential tail approximation.

    Replacing each mu_k log(1 + e^{beta_k (z - gamma_k)}) summand with
    mu_k e^{tau beta_k (z - gamma_k)} and minimizing gives

        (1 / 2 tau beta) * log( sum_{beta_k<0} mu_k e^{tau beta gamma_k}
                              / sum_{beta_k>0} mu_k e^{-tau beta gamma_k} ),

    valid when all contributing slopes share a magnitude beta.  Sums are
    taken in log space so large knots cannot overflow.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    active = p.multiplicities > 0
    mags = np.abs(p.slopes[active])
    if mags.size == 0:
        raise ValueError("no factor carries positive multiplicity")
    beta = float(mags[0])
    if beta <= 0 or np.max(np.abs(mags - beta)) > 1e-12:
        raise ValueError("tail-approximation mode requires equal slope magnitudes")
    pos = active & (p.slopes > 0)
    neg = active & (p.slopes < 0)
    if not pos.any() or not neg.any():
        raise ValueError("each slope sign needs positive total multiplicity")
    with np.errstate(divide="ignore"):
        log_mu = np.log(p.multiplicities)
    num = numerics.logsumexp(log_mu[neg] + tau * beta * p.knots[neg])
    den = numerics.logsumexp(log_mu[pos] - tau * beta * p.knots[pos])
    return (num - den) / (2.0 * tau * beta)


def log_normalizer(p: VLogParams, cfg: QuadratureConfig | None = None) -> float:
    """Log of the integral of the unnormalized density.

    The negative log-density g is translated so its minimum sits at the
    origin with value zero; the translated integrand exp(-(g(z + zbar) -
    g(zbar))) is then <= 1 everywhere and is integrated over the real line
    with the arctan contraction.  The result is -g(zbar) + log(integral).
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if not is_valid(p):
        raise ValueError("log_normalizer requires a valid parameterization")
    zbar = mode_exact(p, tol=1e-9)
    peak = unnorm_log_density(p, zbar)

    def translated(z: float) -> float:
        # <= 0 up to the mode-location tolerance, so exp never overflows
        return math.exp(unnorm_log_density(p, z + zbar) - peak)

    integral = numerics.integrate_real_line(translated, cfg)
    return peak + math.log(integral)


def two_term_expectations(omega1: float, omega2: float) -> tuple[float, float]:
    """E log(1 + e^{+Z}) and E log(1 + e^{-Z}) for the shared-knot two-term case.

    Under the Beta transform these are -E log V and -E log(1 - V) for
    V ~ Beta(omega1, omega2), i.e. digamma differences.
    """
    if not (omega1 > 0 and omega2 > 0):
        raise ValueError("multiplicities must be positive")
    d0 = numerics.digamma(omega1 + omega2)
    return d0 - numerics.digamma(omega1), d0 - numerics.digamma(omega2)


def _two_term_transform_case(p: VLogParams) -> tuple[float, float, float, float] | None:
    # (beta, gamma, mu_pos, mu_neg) when the exact Beta transform applies
    if p.k != 2:
        return None
    b0, b1 = p.slopes
    if b0 == 0 or b1 == 0 or abs(abs(b0) - abs(b1)) > 1e-12 or b0 * b1 > 0:
        return None
    if abs(p.knots[0] - p.knots[1]) > 1e-12:
        return None
    beta = abs(b0)
    if b0 > 0:
        mu_pos, mu_neg = p.multiplicities
    else:
        mu_neg, mu_pos = p.multiplicities
    return beta, float(p.knots[0]), float(mu_pos), float(mu_neg)


def beta_transform(v, beta: float, gamma: float):
    """Map Beta draws to versatile-logistic draws: z = gamma + log(1/v - 1)/beta."""
    v = np.asarray(v, dtype=float)
    return gamma + np.log1p(-v) / beta - np.log(v) / beta


def _slice_width(p: VLogParams, mode: float) -> float:
    t = p.slopes * (mode - p.knots)
    e = np.exp(-np.abs(t))
    sig = 1.0 / (1.0 + e)
    curv = float(np.sum(p.multiplicities * p.slopes**2 * sig * (1.0 - sig)))
    return min(max(4.0 / math.sqrt(curv + 1e-12), 1e-2), 1e3)


def _slice_transitions(
    p: VLogParams, z: np.ndarray, rng: np.random.Generator, width: float, steps: int
) -> np.ndarray:
    """Run `steps` slice-sampling transitions (stepping out + shrinkage) on
    each entry of z in parallel.  Exact for the log-concave targets here."""
    z = np.array(z, dtype=float)
    n = z.size
    for _ in range(steps):
        logf = unnorm_log_density(p, z)
        level = logf + np.log(rng.uniform(size=n))
        u = rng.uniform(size=n)
        lo = z - width * u
        hi = lo + width
        grow = unnorm_log_density(p, lo) > level
        while grow.any():
            lo[grow] -= width
            grow_idx = np.flatnonzero(grow)
            still = unnorm_log_density(p, lo[grow_idx]) > level[grow_idx]
            grow[:] = False
            grow[grow_idx[still]] = True
        grow = unnorm_log_density(p, hi) > level
        while grow.any():
            hi[grow] += width
            grow_idx = np.flatnonzero(grow)
            still = unnorm_log_density(p, hi[grow_idx]) > level[grow_idx]
            grow[:] = False
            grow[grow_idx[still]] = True
        pending = np.ones(n, dtype=bool)
        out = np.empty(n)
        while pending.any():
            idx = np.flatnonzero(pending)
            prop = rng.uniform(lo[idx], hi[idx])
            ok = unnorm_log_density(p, prop) >= level[idx]
            out[idx[ok]] = prop[ok]
            pending[idx[ok]] = False
            rej = idx[~ok]
            pr = prop[~ok]
            below = pr < z[rej]
            lo[rej[below]] = pr[below]
            hi[rej[~below]] = pr[~below]
        z = out
    return z


def slice_update(
    p: VLogParams, z0: float, rng: np.random.Generator, transitions: int = 4
) -> float:
    """One in-chain update leaving the density of ``p`` invariant.

    Starts from the current value, so it composes into larger samplers
    (systematic-scan conditional updates) without bias.
    """
    width = _slice_width(p, z0)
    return float(_slice_transitions(p, np.array([z0]), rng, width, transitions)[0])


def sample_many(p: VLogParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` approximately independent samples.

    The shared-knot equal-slope two-term case uses the exact Beta
    transform.  Otherwise each draw is an independent slice chain started
    at the mode and burned in for a fixed number of transitions; chains
    run vectorized in parallel.
    """
    if not is_valid(p):
        raise ValueError("sampling requires a valid parameterization")
    two = _two_term_transform_case(p)
    if two is not None:
        beta, gamma, mu_pos, mu_neg = two
        v = rng.beta(mu_pos, mu_neg, size=size)
        bad = (v <= 0.0) | (v >= 1.0)
        while bad.any():
            v[bad] = rng.beta(mu_pos, mu_neg, size=int(bad.sum()))
            bad = (v <= 0.0) | (v >= 1.0)
        return beta_transform(v, beta, gamma)
    mode = mode_exact(p, tol=1e-8)
    width = _slice_width(p, mode)
    z0 = np.full(size, mode)
    return _slice_transitions(p, z0, rng, width, steps=12)


def sample(p: VLogParams, rng: np.random.Generator) -> float:
    """One draw from the normalized density."""
    return float(sample_many(p, rng, 1)[0])
