"""Truncated Laurent series in q with exact rational coefficients.

A :class:`LaurentSeries` stores the coefficients of q^lead, q^(lead+1), ...
and is exact modulo ``O(q^prec)`` with ``prec = lead + len(coeffs)``.
Products keep the relative precision of the less precise factor.
"""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, InvalidArgumentError

Number = Union[int, Fraction]

DEFAULT_TERMS = 64


def default_terms() -> int:
    """Series truncation, overridable with ``MODCURVE_TERMS``."""
    raw = os.environ.get("MODCURVE_TERMS")
    if raw is None:
        return DEFAULT_TERMS
    try:
        value = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"MODCURVE_TERMS must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidArgumentError("MODCURVE_TERMS must be positive")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimals are rejected."""
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise InvalidArgumentError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidArgumentError(f"not an exact rational: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class LaurentSeries:
    __slots__ = ("lead", "coeffs")

    def __init__(self, coeffs: Iterable[Number], lead: int = 0):
        cs = [Fraction(c) for c in coeffs]
        # strip leading zeros so the first stored coefficient is nonzero
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        self.lead = lead + k
        self.coeffs = tuple(cs[k:])

    @classmethod
    def zero(cls, prec: int) -> LaurentSeries:
        return cls([], lead=prec)

    @classmethod
    def from_dict(cls, terms: dict[int, Number], prec: int) -> LaurentSeries:
        if not terms:
            return cls.zero(prec)
        lo = min(terms)
        if lo >= prec:
            return cls.zero(prec)
        return cls([terms.get(n, 0) for n in range(lo, prec)], lead=lo)

    @property
    def prec(self) -> int:
        return self.lead + len(self.coeffs)

    @property
    def valuation(self) -> int | None:
        return self.lead if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.prec:
            raise IndexError(f"coefficient of q^{n} is beyond the precision O(q^{self.prec})")
        if n < self.lead:
            return Fraction(0)
        return self.coeffs[n - self.lead]

    def coefficients(self, start: int, stop: int) -> list[Fraction]:
        return [self[n] for n in range(start, stop)]

    def truncate(self, prec: int) -> LaurentSeries:
        if prec >= self.prec:
            return self
        if prec <= self.lead:
            return LaurentSeries.zero(prec)
        return LaurentSeries(self.coeffs[: prec - self.lead], self.lead)

    def _aligned(self, other: LaurentSeries) -> tuple[int, int]:
        return min(self.lead, other.lead), min(self.prec, other.prec)

    def __add__(self, other: LaurentSeries | Number) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries([other])
        lo, prec = self._aligned(other)
        if prec <= lo:
            return LaurentSeries.zero(prec)
        return LaurentSeries([self[n] + other[n] for n in range(lo, prec)], lo)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        out = LaurentSeries([], 0)
        out.lead, out.coeffs = self.lead, tuple(-c for c in self.coeffs)
        return out

    def __sub__(self, other: LaurentSeries | Number) -> LaurentSeries:
        return self + (-other)

    def __rsub__(self, other: Number) -> LaurentSeries:
        return (-self) + other

    def __mul__(self, other: LaurentSeries | Number) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            c = Fraction(other)
            if c == 0:
                return LaurentSeries.zero(self.prec)
            return LaurentSeries([x * c for x in self.coeffs], self.lead)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: LaurentSeries | Number) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            c = Fraction(other)
            if c == 0:
                raise InvalidArgumentError("division by zero")
            return self * (1 / c)
        return series_mul(self, series_inv(other))

    def __pow__(self, n: int) -> LaurentSeries:
        return series_pow(self, n)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by q^k."""
        out = LaurentSeries([], 0)
        out.lead, out.coeffs = self.lead + k, self.coeffs
        return out

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def equal_to_precision(self, other: LaurentSeries) -> bool:
        """Agreement of all coefficients below the common precision."""
        return (self - other).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.lead == other.lead and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.lead, self.coeffs))

    def __repr__(self) -> str:
        return f"LaurentSeries({self})"

    def __str__(self) -> str:
        parts: list[str] = []
        for n, c in enumerate(self.coeffs, start=self.lead):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if n == 0:
                body = str(mag)
            else:
                mono = "q" if n == 1 else f"q^{n}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(f" {sign} {body}")
        parts.append(f" + O(q^{self.prec})")
        text = "".join(parts).strip()
        if text.startswith("+ "):
            text = text[2:]
        elif text.startswith("- "):
            text = "-" + text[2:]
        return text

    def to_json(self) -> dict:
        return {
            "lead": self.lead,
            "prec": self.prec,
            "coeffs": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LaurentSeries:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            lead, prec, raw = int(data["lead"]), int(data["prec"]), data["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed series JSON: {exc}") from None
        if prec != lead + len(raw):
            raise InvalidArgumentError("series JSON: prec must equal lead + len(coeffs)")
        coeffs = [parse_rational(c) for c in raw]
        if coeffs and coeffs[0] == 0:
            raise InvalidArgumentError("series JSON: leading coefficient must be nonzero")
        return cls(coeffs, lead)


def _common_denominator(cs: Sequence[Fraction]) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in cs), 1)


def _convolve_ints(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def series_mul(s: LaurentSeries, t: LaurentSeries) -> LaurentSeries:
    n = min(len(s.coeffs), len(t.coeffs))
    lead = s.lead + t.lead
    if n == 0:
        return LaurentSeries.zero(min(s.lead + t.prec, t.lead + s.prec))
    # clear denominators and convolve in integers
    ds, dt = _common_denominator(s.coeffs[:n]), _common_denominator(t.coeffs[:n])
    a = [int(c * ds) for c in s.coeffs[:n]]
    b = [int(c * dt) for c in t.coeffs[:n]]
    den = ds * dt
    return LaurentSeries([Fraction(x, den) for x in _convolve_ints(a, b, n)], lead)


def series_inv(s: LaurentSeries) -> LaurentSeries:
    if s.is_zero():
        raise InvalidArgumentError("cannot invert a series that is zero to its precision")
    a = s.coeffs
    n = len(a)
    inv0 = 1 / a[0]
    b = [inv0]
    for k in range(1, n):
        acc = sum((a[i] * b[k - i] for i in range(1, k + 1)), Fraction(0))
        b.append(-acc * inv0)
    return LaurentSeries(b, -s.lead)


def series_pow(s: LaurentSeries, n: int) -> LaurentSeries:
    if n < 0:
        return series_pow(series_inv(s), -n)
    if n == 0:
        return LaurentSeries([1] + [0] * (max(len(s.coeffs), 1) - 1))
    base = s
    result = None
    while n:
        if n & 1:
            result = base if result is None else series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def polynomial(coeffs: Sequence[Number], prec: int) -> LaurentSeries:
    """The polynomial sum c_n q^n viewed modulo q^prec."""
    return LaurentSeries.from_dict({n: c for n, c in enumerate(coeffs) if c}, prec)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n from x/(e^x - 1) = sum B_n x^n/n!, so B_1 = -1/2."""
    if n < 0:
        raise InvalidArgumentError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    acc = sum((math.comb(n + 1, k) * bernoulli(k) for k in range(n)), Fraction(0))
    return -acc / (n + 1)


def sigma(k: int, n: int) -> int:
    """Sum of d^k over the positive divisors d of n."""
    if n < 1:
        raise InvalidArgumentError(f"sigma needs n >= 1, got {n}")
    if k < 0:
        raise InvalidArgumentError("sigma needs k >= 0")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total


def _check_terms(terms: int) -> int:
    if not isinstance(terms, int) or terms < 1:
        raise InvalidArgumentError(f"term count must be a positive integer, got {terms!r}")
    return terms


def eisenstein_constant(weight: int) -> Fraction:
    """-2w/B_w, the coefficient multiplying sigma_{w-1}(n) in E_w."""
    return -Fraction(2 * weight) / bernoulli(weight)


@lru_cache(maxsize=64)
def eisenstein_normalized(weight: int, terms: int) -> LaurentSeries:
    """E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n modulo q^terms."""
    if not isinstance(weight, int) or weight < 4 or weight % 2:
        raise InvalidArgumentError(f"Eisenstein weight must be even and >= 4, got {weight}")
    _check_terms(terms)
    c = eisenstein_constant(weight)
    return LaurentSeries([1] + [c * sigma(weight - 1, n) for n in range(1, terms)])


@lru_cache(maxsize=64)
def delta_product(terms: int) -> LaurentSeries:
    """q prod_{n>=1} (1 - q^n)^24 modulo q^terms, by direct expansion."""
    _check_terms(terms)
    width = terms - 1  # exponents 1 .. terms-1 after the shift by q
    poly = [1] + [0] * (width - 1) if width > 0 else []
    for n in range(1, width):
        for _ in range(24):
            for i in range(width - 1, n - 1, -1):
                poly[i] -= poly[i - n]
    return LaurentSeries(poly, lead=1) if width > 0 else LaurentSeries.zero(terms)


@lru_cache(maxsize=64)
def delta_from_eisenstein(terms: int) -> LaurentSeries:
    """(E4^3 - E6^2)/1728 modulo q^terms."""
    _check_terms(terms)
    e4, e6 = eisenstein_normalized(4, terms), eisenstein_normalized(6, terms)
    return (e4**3 - e6**2) / 1728


def delta_normalized(terms: int) -> LaurentSeries:
    """Delta/(2 pi)^12 = q prod (1 - q^n)^24, checked against (E4^3 - E6^2)/1728."""
    prod_form = delta_product(terms)
    eis_form = delta_from_eisenstein(terms)
    if prod_form != eis_form:
        raise ConsistencyError("product and Eisenstein forms of Delta disagree")
    return prod_form


@lru_cache(maxsize=64)
def j_series(terms: int) -> LaurentSeries:
    """j = E4^3 / (Delta/(2 pi)^12) = 1/q + 744 + ... modulo q^terms."""
    _check_terms(terms)
    # inverting Delta (valuation 1) costs two orders of precision
    work = terms + 2
    e4 = eisenstein_normalized(4, work)
    j = (e4**3) / delta_product(work)
    return j.truncate(terms)


NAMED_SERIES = {
    "e4": lambda terms: eisenstein_normalized(4, terms),
    "e6": lambda terms: eisenstein_normalized(6, terms),
    "delta": delta_normalized,
    "j": j_series,
}
