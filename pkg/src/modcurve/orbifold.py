"""Orbifold Euler characteristics, orbifold divisors and Picard-group classes."""

from __future__ import annotations

import enum
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class Stratum:
    euler: int
    aut_order: int
    label: str = ""

    def __post_init__(self) -> None:
        if self.aut_order < 1:
            raise InvalidArgumentError("automorphism order must be >= 1")


def stratified_euler(strata: Sequence[Stratum]) -> Fraction:
    """Sum of chi(stratum) / |Aut| over a stratification."""
    if not strata:
        raise InvalidArgumentError("need at least one stratum")
    return sum((Fraction(s.euler, s.aut_order) for s in strata), Fraction(0))


def moduli_strata(compact: bool = False) -> list[Stratum]:
    """Stratification of M_{1,1} (or its compactification) by automorphism group.

    Generic curves have automorphism group {+-1}, the curves with j = 1728
    and j = 0 have mu_4 and mu_6, and the nodal cubic at infinity has {+-1}.
    """
    if compact:
        strata = [Stratum(-1, 2, "sphere minus i, rho, infinity")]
    else:
        strata = [Stratum(-1, 2, "disk minus i, rho")]
    strata += [Stratum(1, 4, "i"), Stratum(1, 6, "rho")]
    if compact:
        strata.append(Stratum(1, 2, "infinity"))
    return strata


# ---------------------------------------------------------------------------
# simplicial complexes with a finite group action


@dataclass
class EquivariantComplex:
    """A finite simplicial complex on vertices 0..n-1 with permutation generators."""

    num_vertices: int
    simplices: list[list[frozenset[int]]]
    generators: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.simplices = [[frozenset(s) for s in layer] for layer in self.simplices]
        for dim, layer in enumerate(self.simplices):
            for s in layer:
                if len(s) != dim + 1:
                    raise InvalidArgumentError(f"simplex {sorted(s)} listed in dimension {dim}")
                if not all(0 <= v < self.num_vertices for v in s):
                    raise InvalidArgumentError(f"simplex {sorted(s)} uses an unknown vertex")
        self.generators = [tuple(g) for g in self.generators]
        for g in self.generators:
            if sorted(g) != list(range(self.num_vertices)):
                raise InvalidArgumentError(f"generator {list(g)} is not a vertex permutation")
        layers = [set(layer) for layer in self.simplices]
        for g in self.generators:
            for layer in layers:
                if any(_image(g, s) not in layer for s in layer):
                    raise InvalidArgumentError(
                        f"generator {list(g)} does not map the complex to itself"
                    )

    @classmethod
    def from_facets(
        cls, num_vertices: int, facets: Iterable[Sequence[int]], generators: Iterable[Sequence[int]] = ()
    ) -> EquivariantComplex:
        """Build the complex generated by the given facets (all faces included)."""
        faces: dict[int, set[frozenset[int]]] = {}
        for facet in facets:
            facet = tuple(facet)
            for k in range(1, len(facet) + 1):
                for face in combinations(facet, k):
                    faces.setdefault(k - 1, set()).add(frozenset(face))
        top = max(faces) if faces else -1
        layers = [sorted(faces.get(d, ()), key=sorted) for d in range(top + 1)]
        return cls(num_vertices, layers, [tuple(g) for g in generators])

    @classmethod
    def from_json(cls, data: Mapping | str) -> EquivariantComplex:
        """Parse ``{"vertices": n, "simplices": [[...], ...] | "facets": [...], "generators": [...]}``.

        ``vertices`` may be a count or a list of labels; simplices refer to
        vertex indices.  ``simplices`` lists every simplex, grouped by
        dimension; alternatively ``facets`` lists maximal simplices only.
        """
        if isinstance(data, str):
            data = json.loads(data)
        try:
            vertices = data["vertices"]
            n = vertices if isinstance(vertices, int) else len(vertices)
            gens = data.get("generators", [])
            if "facets" in data:
                return cls.from_facets(n, data["facets"], gens)
            return cls(n, data["simplices"], gens)
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed complex JSON: {exc!r}") from None

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.simplices))

    def group_elements(self) -> list[tuple[int, ...]]:
        identity = tuple(range(self.num_vertices))
        seen = {identity}
        queue = deque([identity])
        while queue:
            h = queue.popleft()
            for g in self.generators:
                gh = tuple(g[h[v]] for v in range(self.num_vertices))
                if gh not in seen:
                    seen.add(gh)
                    queue.append(gh)
        return sorted(seen)


def _image(g: Sequence[int], simplex: frozenset[int]) -> frozenset[int]:
    return frozenset(g[v] for v in simplex)


def simplex_orbits(K: EquivariantComplex) -> list[list[tuple[frozenset[int], int]]]:
    """Per dimension: (orbit representative, stabilizer order) pairs."""
    group = K.group_elements()
    result = []
    for layer in K.simplices:
        remaining = set(layer)
        orbits = []
        for s in sorted(layer, key=sorted):
            if s not in remaining:
                continue
            orbit = {_image(g, s) for g in group}
            remaining -= orbit
            stabilizer = sum(1 for g in group if _image(g, s) == s)
            orbits.append((s, stabilizer))
        result.append(orbits)
    return result


def simplicial_euler(K: EquivariantComplex) -> Fraction:
    """sum_k (-1)^k sum over orbits of k-simplices of 1/|stabilizer|."""
    total = Fraction(0)
    for dim, orbits in enumerate(simplex_orbits(K)):
        total += (-1) ** dim * sum((Fraction(1, stab) for _, stab in orbits), Fraction(0))
    return total


def hexagon_s3_complex() -> EquivariantComplex:
    """Hexagon triangulated from its center, with S3 acting by reflections in the 3 diagonals.

    Vertex 0 is the center and vertex k (1..6) sits at angle 60*(k-1) degrees.
    """
    facets = [(0, k, k % 6 + 1) for k in range(1, 7)]

    def reflection(axis: int) -> tuple[int, ...]:
        # reflection across the diagonal at angle 60*axis degrees: j -> 2*axis - j
        return (0,) + tuple((2 * axis - j) % 6 + 1 for j in range(6))

    return EquivariantComplex.from_facets(7, facets, [reflection(a) for a in range(3)])


# ---------------------------------------------------------------------------
# divisors


class Ambient(enum.Enum):
    OPEN = "M11"
    COMPACT = "Mbar11"
    OPEN_RED = "M11_red"
    COMPACT_RED = "Mbar11_red"

    @property
    def reduced(self) -> bool:
        return self in (Ambient.OPEN_RED, Ambient.COMPACT_RED)

    @property
    def compact(self) -> bool:
        return self in (Ambient.COMPACT, Ambient.COMPACT_RED)

    def aut_order(self, point: str) -> int:
        """Order of the (reduced) automorphism group at a point."""
        if point == "inf" and not self.compact:
            raise InvalidArgumentError("the cusp is not a point of the open moduli curve")
        if self.reduced:
            return {"i": 2, "rho": 3}.get(point, 1)
        return {"i": 4, "rho": 6}.get(point, 2)


@dataclass(frozen=True)
class DivisorEntry:
    point: str
    aut_order: int
    numerator: int

    @property
    def coefficient(self) -> Fraction:
        return Fraction(self.numerator, self.aut_order)


@dataclass(frozen=True)
class OrbifoldDivisor:
    """sum of numerator/aut_order * [point]."""

    entries: tuple[DivisorEntry, ...]
    ambient: Ambient

    def __init__(self, entries: Iterable, ambient: Ambient | str):
        ambient = Ambient(ambient)
        parsed = []
        for e in entries:
            if not isinstance(e, DivisorEntry):
                e = DivisorEntry(*e)
            expected = ambient.aut_order(e.point)
            if e.aut_order != expected:
                raise InvalidArgumentError(
                    f"point {e.point!r} has automorphism order {expected} on {ambient.value}, "
                    f"got {e.aut_order}"
                )
            parsed.append(e)
        object.__setattr__(self, "entries", tuple(parsed))
        object.__setattr__(self, "ambient", ambient)

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[str, int], ambient: Ambient | str) -> OrbifoldDivisor:
        """Build sum n_x/|Aut_x| [x] with the automorphism orders implied by ``ambient``."""
        ambient = Ambient(ambient)
        return cls([(p, ambient.aut_order(p), n) for p, n in coeffs.items() if n], ambient)

    def __add__(self, other: OrbifoldDivisor) -> OrbifoldDivisor:
        if self.ambient != other.ambient:
            raise InvalidArgumentError("cannot add divisors on different curves")
        totals: dict[str, int] = {}
        for e in self.entries + other.entries:
            totals[e.point] = totals.get(e.point, 0) + e.numerator
        return OrbifoldDivisor.from_coefficients(totals, self.ambient)

    def numerator_at(self, point: str) -> int:
        return sum(e.numerator for e in self.entries if e.point == point)


def divisor_degree(D: OrbifoldDivisor) -> Fraction:
    return sum((e.coefficient for e in D.entries), Fraction(0))


def class_in_Cl_red(D: OrbifoldDivisor) -> int:
    """Class in Cl(M11_red) = Z/6, generated by div(G6/G4) = [rho]/3 - [i]/2.

    Generic points are principal, so the class is 3 n_i + 2 n_rho mod 6.
    """
    if D.ambient is not Ambient.OPEN_RED:
        raise InvalidArgumentError(f"expected a divisor on M11_red, got {D.ambient.value}")
    return (3 * D.numerator_at("i") + 2 * D.numerator_at("rho")) % 6


def class_in_Cl_mbar_red(D: OrbifoldDivisor) -> int:
    """Class in Cl(Mbar11_red) = Z in units of [L_2]; equals 6 * degree."""
    if D.ambient is not Ambient.COMPACT_RED:
        raise InvalidArgumentError(f"expected a divisor on Mbar11_red, got {D.ambient.value}")
    value = 6 * divisor_degree(D)
    assert value.denominator == 1
    return int(value)


def picard_class_mbar(weight: int, twist: int) -> int:
    """Class of L_weight(twist * infinity) in Pic(Mbar11) = Z [L]; uses O(infinity) = L_12."""
    return weight + 12 * twist


def picard_class_open(weight: int, twist: int = 0) -> int:
    """Restriction to Pic(M11) = Z/12."""
    return picard_class_mbar(weight, twist) % 12


def picard_class_open_red(weight: int) -> int:
    """Class of L_weight in Pic(M11_red) = Z/6 generated by L_2 (weight must be even)."""
    if weight % 2:
        raise InvalidArgumentError("only even weights descend to the reduced orbifold")
    return (weight // 2) % 6


def element_order(x: int, n: int) -> int:
    """Order of x in Z/n."""
    return n // math.gcd(x % n, n)


def form_divisor(nu_i: int, nu_rho: int, nu_infty: int, others: Mapping[str, int] | None = None) -> OrbifoldDivisor:
    """Divisor on Mbar11_red of a form with the given orders of vanishing."""
    coeffs = {"i": nu_i, "rho": nu_rho, "inf": nu_infty}
    coeffs.update(others or {})
    return OrbifoldDivisor.from_coefficients(coeffs, Ambient.COMPACT_RED)
