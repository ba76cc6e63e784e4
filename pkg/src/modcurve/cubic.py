"""Weierstrass cubics y^2 = 4x^3 - a x - b.

Curves are exact when both coefficients are rationals (``int`` or
``Fraction``) and floating otherwise.  The scaling action is
(a, b) -> (u^4 a, u^6 b), which is how g2, g3 transform under
Lambda -> u^-1 Lambda.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import analytic
from .errors import ConsistencyError, SingularCurveError
from .sl2z import RHO

Scalar = Union[int, Fraction, float, complex]

SMOOTH_TOL = 1e-12
ZERO_TOL = 1e-12
ISO_TOL = 1e-9
TAU_TOL = 1e-7


@dataclass(frozen=True)
class WeierstrassCurve:
    a: Scalar
    b: Scalar

    def __post_init__(self) -> None:
        if self.exact:
            object.__setattr__(self, "a", Fraction(self.a))
            object.__setattr__(self, "b", Fraction(self.b))
        else:
            object.__setattr__(self, "a", complex(self.a))
            object.__setattr__(self, "b", complex(self.b))

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in (self.a, self.b))

    @property
    def smooth(self) -> bool:
        D = discriminant(self)
        if self.exact:
            return D != 0
        return abs(D) > SMOOTH_TOL * (abs(self.a) ** 3 + abs(self.b) ** 2 + 1)

    def scaled(self, u: Scalar) -> WeierstrassCurve:
        """(u^4 a, u^6 b)."""
        return WeierstrassCurve(u**4 * self.a, u**6 * self.b)

    def contains(self, x: complex, y: complex, tol: float = 1e-9) -> bool:
        lhs, rhs = y * y, 4 * x**3 - self.a * x - self.b
        return abs(lhs - rhs) <= tol * (abs(lhs) + abs(4 * x**3) + abs(self.a * x) + abs(self.b) + 1)


def curve_from_tau(tau: complex) -> WeierstrassCurve:
    """The cubic (g2(tau), g3(tau)) of the lattice Z + Z tau."""
    g2, g3 = analytic.g2_g3(tau)
    return WeierstrassCurve(g2, g3)


def act_on_curve(lam: complex, curve: WeierstrassCurve) -> WeierstrassCurve:
    """The C*-action (a, b) -> (lam^-4 a, lam^-6 b)."""
    return WeierstrassCurve(curve.a / lam**4, curve.b / lam**6)


def discriminant(C: WeierstrassCurve):
    """D(a, b) = a^3 - 27 b^2."""
    return C.a**3 - 27 * C.b**2


def _check_smooth(C: WeierstrassCurve) -> None:
    if not C.smooth:
        raise SingularCurveError(f"curve ({C.a}, {C.b}) has zero discriminant")


def j_invariant(C: WeierstrassCurve):
    """1728 a^3 / (a^3 - 27 b^2); exact for exact curves."""
    _check_smooth(C)
    return 1728 * C.a**3 / discriminant(C)


def _a_vanishes(C: WeierstrassCurve) -> bool:
    if C.exact:
        return C.a == 0
    return abs(C.a) ** 3 <= ZERO_TOL * (abs(C.a) ** 3 + 27 * abs(C.b) ** 2)


def _b_vanishes(C: WeierstrassCurve) -> bool:
    if C.exact:
        return C.b == 0
    return 27 * abs(C.b) ** 2 <= ZERO_TOL * (abs(C.a) ** 3 + 27 * abs(C.b) ** 2)


def automorphism_order(C: WeierstrassCurve) -> int:
    """4 when b = 0 (j = 1728), 6 when a = 0 (j = 0), otherwise 2."""
    _check_smooth(C)
    if _b_vanishes(C):
        return 4
    if _a_vanishes(C):
        return 6
    return 2


def _close(x: complex, y: complex, tol: float = ISO_TOL) -> bool:
    return abs(x - y) <= tol * max(abs(x), abs(y), 1e-300)


def isomorphic(C1: WeierstrassCurve, C2: WeierstrassCurve) -> Optional[complex]:
    """A scalar u with C2 = (u^4 a1, u^6 b1), or None.

    u is the principal root; it is unique up to the automorphism group
    of C1 (mu_2, mu_4 or mu_6).
    """
    _check_smooth(C1)
    _check_smooth(C2)
    a1, b1, a2, b2 = (complex(v) for v in (C1.a, C1.b, C2.a, C2.b))
    za1, zb1, za2, zb2 = _a_vanishes(C1), _b_vanishes(C1), _a_vanishes(C2), _b_vanishes(C2)
    if (za1, zb1) != (za2, zb2):
        return None
    if za1:
        u = (b2 / b1) ** (1 / 6)
    elif zb1:
        u = (a2 / a1) ** (1 / 4)
    else:
        u = cmath.sqrt((b2 * a1) / (b1 * a2))
    if not za1 and not _close(u**4 * a1, a2):
        return None
    if not zb1 and not _close(u**6 * b1, b2):
        return None
    return u


def tau_from_curve(C: WeierstrassCurve) -> tuple[complex, complex]:
    """(tau, lam) with tau in F and (lam^-4 g2(tau), lam^-6 g3(tau)) = (a, b)."""
    _check_smooth(C)
    a, b = complex(C.a), complex(C.b)
    if _a_vanishes(C):
        tau = RHO
        g2, g3 = analytic.g2_g3(tau)
        lam = (g3 / b) ** (1 / 6)
    elif _b_vanishes(C):
        tau = 1j
        g2, g3 = analytic.g2_g3(tau)
        lam = (g2 / a) ** (1 / 4)
    else:
        tau = analytic.invert_j(complex(j_invariant(C)))
        g2, g3 = analytic.g2_g3(tau)
        lam = cmath.sqrt((g3 * a) / (b * g2))
    # a has weight 4 and b weight 6 under the scaling action
    s = max(abs(a) ** (1 / 4), abs(b) ** (1 / 6))
    ok_a = abs(g2 / lam**4 - a) <= TAU_TOL * s**4
    ok_b = abs(g3 / lam**6 - b) <= TAU_TOL * s**6
    if not (ok_a and ok_b):
        raise ConsistencyError(f"could not match the scale of curve ({a}, {b}) at tau = {tau}")
    return tau, lam
