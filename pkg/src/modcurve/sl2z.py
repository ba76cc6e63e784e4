"""Exact arithmetic in SL2(Z).

Matrices are immutable integer 2x2 matrices of determinant one.  Points of
the upper half plane are plain Python ``complex`` values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import ConvergenceError, InvalidArgumentError

BOUNDARY_TOL = 1e-12
STABILIZER_TOL = 1e-9
MAX_REDUCTION_STEPS = 10**6

RHO = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class Matrix:
    """An element (a b; c d) of SL2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for entry in (self.a, self.b, self.c, self.d):
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise InvalidArgumentError(f"matrix entries must be integers, got {entry!r}")
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidArgumentError(
                f"determinant of ({self.a} {self.b}; {self.c} {self.d}) is not 1"
            )

    def __matmul__(self, other: Matrix) -> Matrix:
        return compose(self, other)

    def __neg__(self) -> Matrix:
        return Matrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> Matrix:
        return Matrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> Matrix:
        base = self if n >= 0 else self.inverse()
        result = IDENTITY
        n = abs(n)
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def normalized(self) -> Matrix:
        """Representative of {g, -g} whose first nonzero entry of (c, d) is positive."""
        lead = self.c if self.c != 0 else self.d
        return self if lead > 0 else -self

    def mod(self, m: int) -> tuple[int, int, int, int]:
        """Entries reduced into ``range(m)``."""
        if m < 1:
            raise InvalidArgumentError("modulus must be positive")
        return (self.a % m, self.b % m, self.c % m, self.d % m)

    def __str__(self) -> str:
        return f"({self.a} {self.b}; {self.c} {self.d})"


IDENTITY = Matrix(1, 0, 0, 1)
S = Matrix(0, -1, 1, 0)
T = Matrix(1, 1, 0, 1)
U = Matrix(0, -1, 1, 1)
T_HAT = Matrix(1, 0, 1, 1)

GENERATORS = {
    "S": S,
    "S^-1": S.inverse(),
    "T": T,
    "T^-1": T.inverse(),
}


def compose(g: Matrix, h: Matrix) -> Matrix:
    return Matrix(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
        raise InvalidArgumentError(f"tau must be finite, got {tau!r}")
    if tau.imag <= 0:
        raise InvalidArgumentError(f"tau must lie in the upper half plane, got {tau!r}")
    return tau


def act(g: Matrix, tau: complex) -> complex:
    """Moebius action tau -> (a tau + b) / (c tau + d)."""
    tau = complex(tau)
    return (g.a * tau + g.b) / (g.c * tau + g.d)


def automorphy_factor(g: Matrix, tau: complex) -> complex:
    return g.c * complex(tau) + g.d


def reduce_to_fundamental_domain(tau: complex) -> tuple[complex, Matrix]:
    """Return ``(tau_star, gamma)`` with ``act(gamma, tau) ~= tau_star`` in F.

    The representative is canonical: ``-1/2 <= Re < 1/2`` and, on the unit
    circle, ``Re <= 0``.  Each step recomputes the point from the original
    ``tau`` and the accumulated matrix, so rounding errors do not pile up.
    """
    tau = check_tau(tau)
    gamma = IDENTITY
    z = tau
    for _ in range(MAX_REDUCTION_STEPS):
        n = math.floor(z.real + 0.5)
        if n:
            gamma = (T ** -n) @ gamma
            z = act(gamma, tau)
        if abs(z) < 1 - BOUNDARY_TOL:
            gamma = S @ gamma
            z = act(gamma, tau)
            continue
        break
    else:
        raise ConvergenceError(f"reduction of {tau!r} did not terminate")

    if z.real >= 0.5 - BOUNDARY_TOL:
        gamma = T.inverse() @ gamma
        z = act(gamma, tau)
    if abs(abs(z) - 1) <= BOUNDARY_TOL and z.real > 0:
        gamma = S @ gamma
        z = act(gamma, tau)
    if abs(z.real + 0.5) <= BOUNDARY_TOL:
        # rounding can leave Re tau* a few ulps below -1/2
        z = complex(-0.5, z.imag)
    return z, gamma


@dataclass(frozen=True)
class GeneratorWord:
    """A word in S, S^-1, T, T^-1 together with a central sign."""

    tokens: tuple[str, ...]
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise InvalidArgumentError("sign must be +1 or -1")
        for tok in self.tokens:
            if tok not in GENERATORS:
                raise InvalidArgumentError(f"unknown generator {tok!r}")

    def evaluate(self) -> Matrix:
        result = IDENTITY
        for tok in self.tokens:
            result = result @ GENERATORS[tok]
        return result if self.sign == 1 else -result

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        body = "*".join(self.tokens) if self.tokens else "I"
        return body if self.sign == 1 else f"-{body}"


def _nearest_integer(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def word_decompose(g: Matrix) -> GeneratorWord:
    """Write ``g = sign * T^n1 S T^n2 S ... T^nk``.

    Euclid on the first column: peel off ``T^n`` with ``n`` the nearest
    integer to ``a/c``, then a factor ``S``, until ``c == 0``.  Exact for any
    entry size; the word length is the sum of the partial quotients.
    """
    tokens: list[str] = []
    h = g
    while h.c != 0:
        n = _nearest_integer(Fraction(h.a, h.c))
        if n:
            tokens.extend(["T" if n > 0 else "T^-1"] * abs(n))
            h = (T ** -n) @ h
        tokens.append("S")
        h = S.inverse() @ h
    # h = +-(1 b; 0 1)
    sign = h.a
    n = h.b * sign
    tokens.extend(["T" if n > 0 else "T^-1"] * abs(n))
    word = GeneratorWord(tuple(tokens), sign)
    assert word.evaluate() == g
    return word


def parse_word(text: str) -> GeneratorWord:
    """Parse a word written as e.g. ``"S*T*T^-1"`` or ``"-S*T"``."""
    text = text.strip()
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    if text in ("", "I"):
        return GeneratorWord((), sign)
    return GeneratorWord(tuple(tok.strip() for tok in text.split("*")), sign)


def stabilizer_order(tau: complex) -> int:
    """Order of the stabilizer of tau in SL2(Z): 4, 6 or 2."""
    z, _ = reduce_to_fundamental_domain(tau)
    if abs(z - 1j) < STABILIZER_TOL:
        return 4
    if abs(z - RHO) < STABILIZER_TOL:
        return 6
    return 2


def prime_divisors(n: int) -> list[int]:
    n = abs(n)
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    return primes


def sl2_mod_order(m: int) -> int:
    """|SL2(Z/m)| = m^3 prod_{p | m} (1 - 1/p^2)."""
    if m < 1:
        raise InvalidArgumentError(f"level must be positive, got {m}")
    order = Fraction(m**3)
    for p in prime_divisors(m):
        order *= 1 - Fraction(1, p * p)
    assert order.denominator == 1
    return int(order)


def sl2_mod_order_bruteforce(m: int) -> int:
    """Count 2x2 matrices over Z/m with determinant 1 by enumeration."""
    if m < 1:
        raise InvalidArgumentError(f"level must be positive, got {m}")
    residues = range(m)
    return sum(
        1 for a, b, c, d in product(residues, repeat=4) if (a * d - b * c - 1) % m == 0
    )


@dataclass(frozen=True)
class AbelianPresentation:
    """Generators e_1..e_n modulo the integer relation vectors."""

    num_generators: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __init__(self, num_generators: int, relations: Iterable[Sequence[int]] = ()):
        rels = tuple(tuple(int(x) for x in r) for r in relations)
        if num_generators < 0:
            raise InvalidArgumentError("number of generators must be nonnegative")
        for r in rels:
            if len(r) != num_generators:
                raise InvalidArgumentError(
                    f"relation {r} has length {len(r)}, expected {num_generators}"
                )
        object.__setattr__(self, "num_generators", num_generators)
        object.__setattr__(self, "relations", rels)


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, each dividing the next)."""
    A = [list(r) for r in rows]
    nrows = len(A)
    diag = []
    for t in range(min(nrows, ncols)):
        while True:
            nonzero = [
                (abs(A[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if A[i][j]
            ]
            if not nonzero:
                return diag
            _, pi, pj = min(nonzero)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
            p = A[t][t]
            for i in range(t + 1, nrows):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, ncols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            if any(A[i][t] for i in range(t + 1, nrows)) or any(A[t][j] for j in range(t + 1, ncols)):
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
    return diag


def abelianize(p: AbelianPresentation) -> list[int]:
    """Invariant factors of Z^n / <relations>, ones dropped, 0 for each free factor."""
    diag = smith_diagonal(p.relations, p.num_generators)
    torsion = [d for d in diag if d != 1]
    return torsion + [0] * (p.num_generators - len(diag))


def sl2z_abelianization() -> list[int]:
    """Abelianization of <S, U | S^4, S^2 = U^3>, written additively."""
    return abelianize(AbelianPresentation(2, [(2, -3), (4, 0)]))
