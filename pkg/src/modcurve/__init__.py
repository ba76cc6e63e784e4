"""Moduli of elliptic curves over C: SL2(Z), q-expansions, Weierstrass cubics and M_{1,1}."""

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DivergenceError,
    InvalidArgumentError,
    ModcurveError,
    OutOfScopeError,
    PoleError,
    SingularCurveError,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ConvergenceError",
    "DivergenceError",
    "InvalidArgumentError",
    "ModcurveError",
    "OutOfScopeError",
    "PoleError",
    "SingularCurveError",
]
