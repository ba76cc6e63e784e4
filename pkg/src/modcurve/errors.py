"""Exception hierarchy shared by all modules.

Every error raised on purpose by this package derives from
:class:`ModcurveError`; the CLI maps those to exit code 3.
"""


class ModcurveError(Exception):
    """Base class for domain errors raised by modcurve."""


class InvalidArgumentError(ModcurveError, ValueError):
    """An argument violates a documented precondition."""


class OutOfScopeError(InvalidArgumentError):
    """The requested input lies outside the range where a formula is stated."""


class SingularCurveError(ModcurveError, ArithmeticError):
    """A Weierstrass cubic has vanishing discriminant."""


class PoleError(ModcurveError, ZeroDivisionError):
    """Evaluation at a pole."""


class ConvergenceError(ModcurveError, RuntimeError):
    """An iterative method did not converge."""


class DivergenceError(ModcurveError, ValueError):
    """An integral would diverge (e.g. Petersson pairing of non-cusp forms)."""


class ConsistencyError(ModcurveError, RuntimeError):
    """Two independent computations that must agree did not."""
