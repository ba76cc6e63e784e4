"""Rank-two lattices in C: Gauss reduction, homothety testing, automorphisms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import InvalidArgumentError
from .sl2z import BOUNDARY_TOL, stabilizer_order

DEGENERACY_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class FramedLattice:
    """The lattice Z*lambda1 + Z*lambda2 with an ordered basis."""

    lambda1: complex
    lambda2: complex

    def __post_init__(self) -> None:
        l1, l2 = complex(self.lambda1), complex(self.lambda2)
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda2", l2)
        if not all(math.isfinite(v) for v in (l1.real, l1.imag, l2.real, l2.imag)):
            raise InvalidArgumentError("lattice periods must be finite")
        if abs(_cross(l1, l2)) <= DEGENERACY_TOL * abs(l1) * abs(l2) or l1 == 0 or l2 == 0:
            raise InvalidArgumentError(f"periods {l1!r}, {l2!r} are linearly dependent over R")

    @classmethod
    def from_tau(cls, tau: complex) -> FramedLattice:
        return cls(1.0, tau)

    @property
    def positively_framed(self) -> bool:
        return _cross(self.lambda1, self.lambda2) > 0

    @property
    def ratio(self) -> complex:
        return self.lambda2 / self.lambda1

    def scaled(self, c: complex) -> FramedLattice:
        return FramedLattice(c * self.lambda1, c * self.lambda2)

    def coordinates(self, z: complex) -> tuple[float, float]:
        """Real coordinates (x, y) with z = x*lambda1 + y*lambda2."""
        det = _cross(self.lambda1, self.lambda2)
        x = _cross(z, self.lambda2) / det
        y = _cross(self.lambda1, z) / det
        return x, y

    def contains(self, z: complex, tol: float = MEMBERSHIP_TOL) -> bool:
        x, y = self.coordinates(z)
        return abs(x - round(x)) <= tol and abs(y - round(y)) <= tol


def _cross(u: complex, v: complex) -> float:
    """Im(conj(u) * v): positive iff v/u lies in the upper half plane."""
    return u.real * v.imag - u.imag * v.real


class GaussReduction(NamedTuple):
    basis: FramedLattice
    tau: complex
    change: tuple[int, int, int, int]
    """Integers (p, q, r, s) with u = p*l1 + q*l2 and v = r*l1 + s*l2."""


def gauss_reduce(L: FramedLattice) -> GaussReduction:
    """Reduce to a basis (u, v) with u shortest and v/u canonical in F.

    Works on the basis vectors directly and tracks the integral change of
    basis, which always has determinant +-1.
    """
    u, v = L.lambda1, L.lambda2
    p, q, r, s = 1, 0, 0, 1
    if _cross(u, v) < 0:
        v, r, s = -v, -r, -s
    for _ in range(10**6):
        n = math.floor((v / u).real + 0.5)
        if n:
            v, r, s = v - n * u, r - n * p, s - n * q
        if abs(v) < abs(u) * (1 - BOUNDARY_TOL):
            # (u, v) -> (v, -u) keeps the orientation
            u, v, p, q, r, s = v, -u, r, s, -p, -q
            continue
        break
    tau = v / u
    if tau.real >= 0.5 - BOUNDARY_TOL:
        v, r, s = v - u, r - p, s - q
    tau = v / u
    if abs(abs(tau) - 1) <= BOUNDARY_TOL and tau.real > 0:
        u, v, p, q, r, s = v, -u, r, s, -p, -q
    assert abs(p * s - q * r) == 1
    return GaussReduction(FramedLattice(u, v), v / u, (p, q, r, s))


def automorphism_group(L: FramedLattice) -> tuple[int, complex]:
    """Order and a generator of {u in C* : u L = L}."""
    red = gauss_reduce(L)
    order = stabilizer_order(red.tau)
    generator = {2: -1 + 0j, 4: 1j, 6: cmath.exp(1j * math.pi / 3)}[order]
    return order, generator


def tori_isomorphic(L1: FramedLattice, L2: FramedLattice) -> Optional[complex]:
    """Return c with c*L1 == L2, or None when C/L1 and C/L2 are not isomorphic.

    The scalar is normalized by the automorphism group of L1 so that its
    argument lies in (-pi/n, pi/n], n = |Aut|; for equal lattices this gives 1.
    """
    r1, r2 = gauss_reduce(L1), gauss_reduce(L2)
    if abs(r1.tau - r2.tau) > MEMBERSHIP_TOL * (1 + abs(r1.tau)):
        return None
    c = r2.basis.lambda1 / r1.basis.lambda1
    order, gen = automorphism_group(L1)
    cands = [c * gen**k for k in range(order)]
    best = min(cands, key=lambda z: (round(abs(cmath.phase(z)), 12), cmath.phase(z) < 0))
    # certify: c*L1 and L2 contain each other's bases, and covolumes agree
    if not (L2.contains(best * L1.lambda1) and L2.contains(best * L1.lambda2)):
        return None
    covol1 = abs(_cross(L1.lambda1, L1.lambda2)) * abs(best) ** 2
    covol2 = abs(_cross(L2.lambda1, L2.lambda2))
    if abs(covol1 - covol2) > MEMBERSHIP_TOL * covol2:
        return None
    return best

