"""The graded ring of level-one modular forms, generated by E4 and E6."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import qseries
from .errors import DivergenceError, InvalidArgumentError
from .qseries import LaurentSeries

PETERSSON_CUTOFF = 8.0
PETERSSON_NODES = 128
EXPANSION_TERMS = 40


def dim_M(w: int) -> int:
    """Dimension of the space of modular forms of weight w."""
    if w < 0 or w % 2 or w == 2:
        return 0
    k = w // 2
    return k // 6 if k % 6 == 1 else 1 + k // 6


def cusp_dim(w: int) -> int:
    if w < 4 or w % 2:
        return 0
    return dim_M(w) - 1


def monomial_basis(w: int) -> list[tuple[int, int]]:
    """All (alpha, beta) >= 0 with 4 alpha + 6 beta = w."""
    if w < 0 or w % 2:
        return []
    return [(alpha, (w - 4 * alpha) // 6) for alpha in range(w // 4 + 1) if (w - 4 * alpha) % 6 == 0]


@dataclass(frozen=True)
class OrderVector:
    nu_i: int = 0
    nu_rho: int = 0
    nu_infty: int = 0
    nu_other: tuple[tuple[str, int], ...] = ()

    @classmethod
    def parse(cls, text: str) -> OrderVector:
        """Parse ``"i=1,rho=0,inf=2,P=1"``; unknown labels are other points."""
        values = {"i": 0, "rho": 0, "inf": 0}
        others = []
        for item in filter(None, (s.strip() for s in text.split(","))):
            label, sep, raw = item.partition("=")
            if not sep:
                raise InvalidArgumentError(f"order entry {item!r} must look like label=n")
            try:
                n = int(raw)
            except ValueError:
                raise InvalidArgumentError(f"order of {label!r} must be an integer") from None
            label = label.strip()
            if label in values:
                values[label] += n
            else:
                others.append((label, n))
        return cls(values["i"], values["rho"], values["inf"], tuple(others))

    def weighted_sum(self) -> Fraction:
        return (
            Fraction(self.nu_i, 2)
            + Fraction(self.nu_rho, 3)
            + self.nu_infty
            + sum(n for _, n in self.nu_other)
        )


def valence_check(w: int, orders: OrderVector) -> bool:
    """nu_i/2 + nu_rho/3 + nu_infty + sum nu_P == w/12."""
    if w <= 0 or w % 2:
        raise InvalidArgumentError(f"valence formula needs a positive even weight, got {w}")
    return orders.weighted_sum() == Fraction(w, 12)


def monomial_orders(alpha: int, beta: int, gamma: int = 0) -> OrderVector:
    """Orders of E4^alpha E6^beta Delta^gamma: E4 vanishes simply at rho, E6 at i."""
    return OrderVector(nu_i=beta, nu_rho=alpha, nu_infty=gamma)


@dataclass(frozen=True)
class FormExpression:
    """A rational combination of monomials E4^alpha E6^beta of one weight."""

    terms: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {(int(a), int(b)): Fraction(c) for (a, b), c in self.terms.items() if c}
        weights = {4 * a + 6 * b for a, b in clean}
        if len(weights) > 1:
            raise InvalidArgumentError(f"form mixes weights {sorted(weights)}")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, alpha: int, beta: int, coeff: Fraction | int = 1) -> FormExpression:
        return cls({(alpha, beta): Fraction(coeff)})

    @classmethod
    def delta(cls) -> FormExpression:
        """(E4^3 - E6^2)/1728 = q - 24 q^2 + ..."""
        return cls({(3, 0): Fraction(1, 1728), (0, 2): Fraction(-1, 1728)})

    @property
    def weight(self) -> int:
        if not self.terms:
            raise InvalidArgumentError("the zero form has no weight")
        a, b = next(iter(self.terms))
        return 4 * a + 6 * b

    def __add__(self, other: FormExpression) -> FormExpression:
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return FormExpression(out)

    def __neg__(self) -> FormExpression:
        return self * -1

    def __sub__(self, other: FormExpression) -> FormExpression:
        return self + (-other)

    def __mul__(self, other: FormExpression | Fraction | int) -> FormExpression:
        if not isinstance(other, FormExpression):
            return FormExpression({k: c * Fraction(other) for k, c in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return FormExpression(out)

    __rmul__ = __mul__

    def q_expansion(self, terms: int = EXPANSION_TERMS) -> LaurentSeries:
        return _expand(tuple(sorted(self.terms.items())), terms)

    def is_cusp_form(self) -> bool:
        return self.q_expansion(1).is_zero()


@lru_cache(maxsize=128)
def _expand(items: tuple[tuple[tuple[int, int], Fraction], ...], terms: int) -> LaurentSeries:
    e4 = qseries.eisenstein_normalized(4, terms)
    e6 = qseries.eisenstein_normalized(6, terms)
    total = LaurentSeries.zero(terms)
    for (a, b), c in items:
        total = total + (e4**a) * (e6**b) * c
    return total


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination in exact arithmetic."""
    M = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for i in range(rank + 1, len(M)):
            if M[i][col]:
                f = M[i][col] / M[rank][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def monomial_basis_rank(w: int, extra_columns: int = 5) -> int:
    """Exact rank of the q-expansion matrix of the monomial basis (dim + extra columns)."""
    basis = monomial_basis(w)
    ncols = dim_M(w) + extra_columns
    rows = [FormExpression.monomial(a, b).q_expansion(ncols).coefficients(0, ncols) for a, b in basis]
    return exact_rank(rows)


@lru_cache(maxsize=8)
def _quadrature_grid(cutoff: float, nodes: int):
    """Gauss-Legendre nodes on {|x| <= 1/2, sqrt(1 - x^2) <= y <= cutoff}."""
    t, wt = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * t
    wx = 0.5 * wt
    ylo = np.sqrt(1 - x**2)
    half = 0.5 * (cutoff - ylo)
    X = np.repeat(x, nodes)
    Y = (ylo[:, None] + half[:, None] * (t[None, :] + 1)).ravel()
    W = (wx[:, None] * half[:, None] * wt[None, :]).ravel()
    return X, Y, W


def _evaluate(series: LaurentSeries, q: np.ndarray) -> np.ndarray:
    coeffs = [float(series[n]) for n in range(series.prec)]
    acc = np.zeros_like(q)
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


def petersson(
    f: FormExpression,
    g: FormExpression,
    w: int | None = None,
    cutoff: float = PETERSSON_CUTOFF,
    nodes: int = PETERSSON_NODES,
) -> complex:
    """Integral over F of f(tau) conj(g(tau)) Im(tau)^(w-2) dx dy.

    Forms are evaluated from their exact q-expansions, so cancellations
    such as E4^3 - E6^2 happen in rational arithmetic.  The region above
    Im tau = ``cutoff`` is dropped; for cusp forms the integrand there is
    O(exp(-4 pi cutoff)).
    """
    weight = f.weight
    if g.weight != weight or (w is not None and w != weight):
        raise InvalidArgumentError("Petersson pairing needs forms of one common weight")
    if not (f.is_cusp_form() and g.is_cusp_form()):
        raise DivergenceError("Petersson integral diverges unless both forms are cusp forms")
    X, Y, W = _quadrature_grid(cutoff, nodes)
    q = np.exp(2j * math.pi * (X + 1j * Y))
    fv = _evaluate(f.q_expansion(), q)
    gv = _evaluate(g.q_expansion(), q)
    integrand = fv * np.conj(gv) * Y ** (weight - 2)
    return complex(math.fsum((W * integrand.real).tolist()), math.fsum((W * integrand.imag).tolist()))

