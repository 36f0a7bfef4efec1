"""Exception hierarchy shared across the package.

Numeric failures (bracketing, quadrature, degenerate boosting weights)
derive from :class:`NumericError`; malformed inputs and configuration
derive from :class:`ValueError` so that callers can distinguish "fix your
input" from "the computation broke".
"""


class NumericError(ArithmeticError):
    """Base class for numerical failures."""


class BracketError(NumericError):
    """A minimization bracket does not enclose a unimodal minimum."""


class QuadratureError(NumericError):
    """Adaptive quadrature exhausted its subdivision budget."""


class DegenerateWeightError(NumericError):
    """Classic AdaBoost hit a zero/one weighted error (infinite weight)."""


class EmptySpaceError(ValueError):
    """No decision stump can be built (all features constant)."""


class ParseError(ValueError):
    """A dataset file could not be parsed; message carries row/column."""


class ConfigError(ValueError):
    """Bad experiment configuration."""


class ScaleGuardError(ConfigError):
    """A micro-instance-only routine was asked to run at real scale."""
