"""Scalar special functions, 1-D minimization, and real-line quadrature.

Everything here is a pure function; the rest of the package builds on
these primitives instead of reaching for ad-hoc formulas that overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, QuadratureError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Error targets for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 20_000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class Bracket:
    """An interval [lo, hi] believed to contain a minimum."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


def log1pexp(z: float) -> float:
    """log(1 + e^z) computed as log(1 + e^{-|z|}) + max(z, 0).

    Never overflows for finite z; the split keeps the exponential argument
    nonpositive so the identity log1pexp(z) - log1pexp(-z) = z holds
    bit-exactly.
    """
    return math.log1p(math.exp(-abs(z))) + (z if z > 0.0 else 0.0)


def digamma(x: float) -> float:
    """Digamma function for x > 0.

    Shifts the argument up to >= 6 with the recurrence psi(x+1) = psi(x) + 1/x,
    then applies the de Moivre asymptotic series through the x^-14 term.
    Absolute error is below 1e-10 on the whole positive axis.
    """
    if not x > 0.0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 6.0:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    # alternating Bernoulli-number series, Horner form in r = x^-2
    tail = r * (
        1.0 / 12.0
        - r * (
            1.0 / 120.0
            - r * (
                1.0 / 252.0
                - r * (
                    1.0 / 240.0
                    - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))
                )
            )
        )
    )
    return acc + math.log(x) - 0.5 / x - tail


def logsumexp(values: np.ndarray) -> float:
    """Stable log(sum(exp(values))) for a 1-D array; -inf entries drop out."""
    values = np.asarray(values, dtype=float)
    m = float(np.max(values)) if values.size else -math.inf
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(values - m))))


def golden_section_min(
    f: Callable[[float], float], bracket: Bracket, tol: float
) -> float:
    """Golden-section search for the minimizer of a unimodal f on a bracket.

    Returns a point within ``tol`` of the true minimizer.  If an interior
    probe exceeds both current endpoint values the function cannot be
    unimodal on the interval and :class:`BracketError` is raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = bracket.lo, bracket.hi
    fa, fb = f(a), f(b)

    def check(fm: float) -> None:
        # margin keeps rounding noise at a flat valley floor from tripping this
        slack = 1e-12 * max(1.0, abs(fm))
        if fm > fa + slack and fm > fb + slack:
            raise BracketError("interior probe above both endpoints; f is not unimodal here")

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    check(fc)
    check(fd)
    while (b - a) > tol:
        if fc < fd:
            b, fb = d, fd
            d, fd = c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            check(fc)
        else:
            a, fa = c, fc
            c, fc = d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            check(fd)
    return 0.5 * (a + b)


def integrate_real_line(g: Callable[[float], float], cfg: QuadratureConfig) -> float:
    """Integrate g over the whole real line.

    The substitution u = arctan(z) contracts the limits to (-pi/2, pi/2),
    where the transformed integrand g(tan u) * sec^2(u) is handled by
    adaptive Simpson subdivision.  The transformed integrand is defined as
    0 at the endpoints, which is exact for any integrable g that decays
    faster than sec^2 grows.
    """

    def transformed(u: float) -> float:
        half_pi = math.pi / 2.0
        if abs(u) >= half_pi:
            return 0.0
        gv = g(math.tan(u))
        if gv == 0.0:
            return 0.0
        cu = math.cos(u)
        return gv / (cu * cu)

    a0, b0 = -math.pi / 2.0, math.pi / 2.0
    n_panels = 8
    edges = np.linspace(a0, b0, n_panels + 1)
    fvals = [transformed(float(u)) for u in edges]

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width * (fa + 4.0 * fm + fb) / 6.0

    panels = []
    coarse = 0.0
    for i in range(n_panels):
        a, b = float(edges[i]), float(edges[i + 1])
        m = 0.5 * (a + b)
        fm = transformed(m)
        s = simpson(fvals[i], fm, fvals[i + 1], b - a)
        panels.append((a, b, fvals[i], fm, fvals[i + 1], s))
        coarse += s

    tol0 = max(cfg.abs_tol, cfg.rel_tol * abs(coarse)) / n_panels
    stack = [(a, b, fa, fm, fb, s, tol0) for (a, b, fa, fm, fb, s) in panels]
    total = 0.0
    budget = cfg.max_subdivisions
    while stack:
        a, b, fa, fm, fb, s, tol = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = transformed(lm), transformed(rm)
        sl = simpson(fa, flm, fm, m - a)
        sr = simpson(fm, frm, fb, b - m)
        err = sl + sr - s
        if abs(err) <= 15.0 * tol or (b - a) < 1e-13:
            total += sl + sr + err / 15.0
            continue
        budget -= 1
        if budget < 0:
            raise QuadratureError(
                f"subdivision budget {cfg.max_subdivisions} exhausted before reaching tolerance"
            )
        stack.append((a, m, fa, flm, fm, sl, tol / 2.0))
        stack.append((m, b, fm, frm, fb, sr, tol / 2.0))
    return total
