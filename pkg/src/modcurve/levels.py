"""Level-m modular curves: group orders, cusps, Euler characteristics, genus."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, InvalidArgumentError, OutOfScopeError
from .sl2z import prime_divisors, sl2_mod_order

MAX_ENUMERATED_LEVEL = 12


@dataclass(frozen=True)
class LevelSummary:
    m: int
    d_m: int
    c_m: int
    chi_open: Fraction
    chi_compact: Fraction
    genus: int

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d_m,
            "cusps": self.c_m,
            "chi_open": f"{self.chi_open.numerator}/{self.chi_open.denominator}",
            "chi_compact": f"{self.chi_compact.numerator}/{self.chi_compact.denominator}",
            "genus": self.genus,
        }


def _euler_factor(m: int) -> Fraction:
    factor = Fraction(1)
    for p in prime_divisors(m):
        factor *= 1 - Fraction(1, p * p)
    return factor


def genus_formula(m: int) -> Fraction:
    """g_m = 1 - (m^2/4)(1 - m/6) prod_{p|m} (1 - 1/p^2)."""
    return 1 - Fraction(m * m, 4) * (1 - Fraction(m, 6)) * _euler_factor(m)


def level_summary(m: int) -> LevelSummary:
    """Exact invariants of the compactified level-m curve, m >= 3."""
    if not isinstance(m, int) or m < 3:
        raise OutOfScopeError(f"level formulas hold for m >= 3, got {m!r}")
    d = sl2_mod_order(m)
    if d % (2 * m):
        raise ConsistencyError(f"2m does not divide |SL2(Z/{m})| = {d}")
    c = d // (2 * m)
    chi_open = Fraction(-d, 12)
    chi_compact = c + chi_open
    genus = 1 - chi_compact / 2
    if genus != genus_formula(m) or genus.denominator != 1 or genus < 0:
        raise ConsistencyError(f"genus of level {m} disagrees between formulas")
    return LevelSummary(m, d, c, chi_open, chi_compact, int(genus))


def enumerate_cusps(m: int) -> int:
    """Count vectors of order m in (Z/m)^2 up to sign, by enumeration."""
    if not isinstance(m, int) or not 3 <= m <= MAX_ENUMERATED_LEVEL:
        raise InvalidArgumentError(
            f"cusp enumeration supports 3 <= m <= {MAX_ENUMERATED_LEVEL}, got {m!r}"
        )
    classes = set()
    for a in range(m):
        for c in range(m):
            if math.gcd(math.gcd(a, c), m) == 1:
                classes.add(min((a, c), ((-a) % m, (-c) % m)))
    return len(classes)
