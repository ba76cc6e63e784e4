"""Floating-point evaluation of modular quantities on the upper half plane.

Two independent routes to the Eisenstein series are provided: the
q-expansion (fast, used everywhere) and the defining lattice sum (slow,
used as an oracle).  Points are always moved into the fundamental domain
before a q-expansion is summed, so |q| <= exp(-pi*sqrt(3)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import qseries
from .errors import ConvergenceError, InvalidArgumentError, PoleError
from .lattice import FramedLattice
from .sl2z import RHO, automorphy_factor, check_tau, reduce_to_fundamental_domain

TWO_PI = 2 * math.pi
LAURENT_TERMS = 40
LAURENT_RADIUS_FRACTION = 0.45
WP_LATTICE_RADIUS = 300
POLE_TOL = 1e-9
SERIES_TERMS = 48

# g2 = (4 pi^4 / 3) E4 and g3 = (8 pi^6 / 27) E6
G2_SCALE = 4 * math.pi**4 / 3
G3_SCALE = 8 * math.pi**6 / 27


def two_zeta(weight: int) -> float:
    """2*zeta(w) = -(2 pi i)^w B_w / w! for even w >= 2."""
    if weight < 2 or weight % 2:
        raise InvalidArgumentError("two_zeta needs an even weight >= 2")
    sign = -1 if (weight // 2) % 2 == 0 else 1  # -(i^w) = -(-1)^(w/2)
    return sign * float(qseries.bernoulli(weight)) * TWO_PI**weight / math.factorial(weight)


@lru_cache(maxsize=None)
def _eisenstein_float_coeffs(weight: int, terms: int) -> np.ndarray:
    c = float(qseries.eisenstein_constant(weight))
    return np.array([1.0] + [c * float(qseries.sigma(weight - 1, n)) for n in range(1, terms)])


def _terms_for(weight: int, absq: float) -> int:
    """Enough q-terms that the tail of E_w is below 1e-17 (relative to 1)."""
    if absq == 0:
        return 1
    logq = math.log(absq)
    logc = math.log(abs(float(qseries.eisenstein_constant(weight))))
    peak = (weight - 1) / -logq
    n = 1
    while True:
        # sigma_{w-1}(n) <= zeta(w-1) n^(w-1) <= 2 n^(w-1)
        bound = logc + math.log(2) + (weight - 1) * math.log(n) + n * logq
        if n > peak and bound < math.log(1e-17):
            return max(n + 1, 8)
        n += 1


def _horner(coeffs: np.ndarray, q: complex) -> complex:
    acc = 0j
    for c in coeffs[::-1]:
        acc = acc * q + c
    return acc


def _eisenstein_e_reduced(weight: int, tau: complex) -> complex:
    q = cmath.exp(2j * math.pi * tau)
    n = _terms_for(weight, abs(q))
    return _horner(_eisenstein_float_coeffs(weight, n), q)


def eisenstein_e(weight: int, tau: complex) -> complex:
    """Normalized E_w(tau) (constant term 1) from its q-expansion."""
    if weight < 4 or weight % 2:
        raise InvalidArgumentError(f"Eisenstein weight must be even and >= 4, got {weight}")
    tau = check_tau(tau)
    z, gamma = reduce_to_fundamental_domain(tau)
    return _eisenstein_e_reduced(weight, z) / automorphy_factor(gamma, tau) ** weight


def eisenstein_g(weight: int, tau: complex) -> complex:
    """G_w(tau) = sum over nonzero m + n tau of lambda^-w, via q-expansion."""
    return two_zeta(weight) * eisenstein_e(weight, tau)


def _box_sums(values: np.ndarray, box: np.ndarray, radii: list[int]) -> list[complex]:
    """Compensated partial sums of ``values`` over max(|m|,|n|) <= r for each r."""
    sums = []
    acc_re: list[float] = []
    acc_im: list[float] = []
    lower = -1
    for r in sorted(radii):
        band = values[(box > lower) & (box <= r)]
        acc_re.append(math.fsum(band.real))
        acc_im.append(math.fsum(band.imag))
        sums.append((r, complex(math.fsum(acc_re), math.fsum(acc_im))))
        lower = r
    by_radius = dict(sums)
    return [by_radius[r] for r in radii]


def _extrapolate(radii: list[int], sums: list[complex]) -> complex:
    """Fit S(r) = S + c2/r^2 + c3/r^3 + c4/r^4 through the partial sums."""
    x = np.array([1.0 / r for r in radii])
    A = np.column_stack([np.ones_like(x), x**2, x**3, x**4])
    sol = np.linalg.solve(A, np.array(sums, dtype=complex))
    return complex(sol[0])


def _richardson_radii(radius: int) -> Optional[list[int]]:
    radii = [radius, radius // 2, radius // 4, radius // 8]
    return radii if radii[-1] >= 4 else None


def _lattice_points(L: FramedLattice, radius: int) -> tuple[np.ndarray, np.ndarray]:
    r = np.arange(-radius, radius + 1)
    M, N = np.meshgrid(r, r, indexing="ij")
    box = np.maximum(np.abs(M), np.abs(N)).ravel()
    lam = (M * L.lambda1 + N * L.lambda2).ravel()
    return lam, box


def _as_lattice(lattice: Union[complex, FramedLattice]) -> FramedLattice:
    if isinstance(lattice, FramedLattice):
        return lattice
    return FramedLattice.from_tau(check_tau(lattice))


def eisenstein_lattice_sum(
    k: int,
    lattice: Union[complex, FramedLattice],
    radius: int = 200,
    extrapolate: bool = True,
) -> complex:
    """Sum of lambda^-k over nonzero lattice points with max(|m|,|n|) <= radius.

    ``lattice`` is either tau (meaning Z + Z tau) or a :class:`FramedLattice`.
    Sums are accumulated exactly rounded (``math.fsum``).  With
    ``extrapolate`` the partial sums over the boxes of radius R, R/2, R/4,
    R/8 are fitted to the box-sum tail expansion to remove the
    O(R^-2) truncation error.
    """
    if k <= 2 or k % 2:
        raise InvalidArgumentError(
            f"lattice sum needs an even k >= 4 (odd k vanish, k = 2 is not absolutely convergent); got {k}"
        )
    if radius < 1:
        raise InvalidArgumentError("radius must be >= 1")
    L = _as_lattice(lattice)
    lam, box = _lattice_points(L, radius)
    keep = box > 0
    lam, box = lam[keep], box[keep]
    values = lam ** (-k)
    radii = _richardson_radii(radius) if extrapolate else None
    if radii is None:
        return _box_sums(values, box, [radius])[0]
    return _extrapolate(radii, _box_sums(values, box, radii))


@dataclass(frozen=True)
class ModularValues:
    E4: complex
    E6: complex
    g2: complex
    g3: complex
    delta: complex
    j: complex

    def as_dict(self) -> dict[str, complex]:
        return {k: getattr(self, k) for k in ("E4", "E6", "g2", "g3", "delta", "j")}


@lru_cache(maxsize=1)
def _delta_float_coeffs() -> np.ndarray:
    d = qseries.delta_product(SERIES_TERMS)
    return np.array([float(d[n]) for n in range(SERIES_TERMS)])


def _modular_reduced(z: complex) -> tuple[complex, complex, complex]:
    """E4, E6 and Delta/(2 pi)^12 at a point of F."""
    q = cmath.exp(2j * math.pi * z)
    return (
        _eisenstein_e_reduced(4, z),
        _eisenstein_e_reduced(6, z),
        _horner(_delta_float_coeffs(), q),
    )


def eval_modular(tau: complex) -> ModularValues:
    """E4, E6, g2, g3, Delta and j at tau.

    Delta is summed from its own q-expansion (q prod (1-q^n)^24, which
    equals g2^3 - 27 g3^2 exactly as series) to avoid the cancellation
    in the difference when Im tau is large.
    """
    tau = check_tau(tau)
    z, gamma = reduce_to_fundamental_domain(tau)
    e4, e6, dn = _modular_reduced(z)
    f = automorphy_factor(gamma, tau)
    e4, e6 = e4 / f**4, e6 / f**6
    delta = TWO_PI**12 * dn / f**12
    g2, g3 = G2_SCALE * e4, G3_SCALE * e6
    j = 1728 * g2**3 / delta
    return ModularValues(e4, e6, g2, g3, delta, j)


def j_invariant(tau: complex) -> complex:
    return eval_modular(tau).j


def g2_g3(tau: complex) -> tuple[complex, complex]:
    v = eval_modular(tau)
    return v.g2, v.g3


def lattice_invariants(L: FramedLattice) -> tuple[complex, complex]:
    """(g2, g3) of an arbitrary lattice; g2(cL) = c^-4 g2(L), g3(cL) = c^-6 g3(L)."""
    if not L.positively_framed:
        L = FramedLattice(L.lambda1, -L.lambda2)
    g2, g3 = g2_g3(L.ratio)
    return g2 / L.lambda1**4, g3 / L.lambda1**6


# ---------------------------------------------------------------------------
# Weierstrass p-function


def _reduce_z(tau_star: complex, w: complex) -> complex:
    """Representative of w modulo Z + Z tau_star in the centered cell."""
    y = w.imag / tau_star.imag
    x = w.real - y * tau_star.real
    return w - round(x) - round(y) * tau_star


@lru_cache(maxsize=256)
def _laurent_coefficients(tau_star: complex, terms: int) -> tuple[complex, ...]:
    """(2m+1) G_{2m+2}(tau_star) for m = 1..terms."""
    return tuple((2 * m + 1) * two_zeta(2 * m + 2) * _eisenstein_e_reduced(2 * m + 2, tau_star)
                 for m in range(1, terms + 1))


def _wp_laurent_reduced(tau_star: complex, w: complex, terms: int) -> tuple[complex, complex]:
    coeffs = _laurent_coefficients(tau_star, terms)
    w2 = w * w
    p, dp = 0j, 0j
    # Horner in w^2 from the top coefficient down
    for m in range(terms, 0, -1):
        c = coeffs[m - 1]
        p = p * w2 + c
        dp = dp * w2 + 2 * m * c
    return 1 / w2 + p * w2, -2 / (w2 * w) + dp * w


def _wp_lattice_reduced(tau_star: complex, w: complex, radius: int, extrapolate: bool = True) -> tuple[complex, complex]:
    lam, box = _lattice_points(FramedLattice.from_tau(tau_star), radius)
    nz = box > 0
    lam_nz, box_nz = lam[nz], box[nz]
    # 1/(w-l)^2 - 1/l^2 without cancellation
    dw = w - lam_nz
    p_terms = (2 * w * lam_nz - w * w) / (lam_nz**2 * dw**2)
    dp_terms = -2 / (w - lam) ** 3
    radii = _richardson_radii(radius) if extrapolate else None
    if radii is None:
        p = 1 / w**2 + _box_sums(p_terms, box_nz, [radius])[0]
        dp = _box_sums(dp_terms, box, [radius])[0]
        return p, dp
    p = 1 / w**2 + _extrapolate(radii, _box_sums(p_terms, box_nz, radii))
    dp = _extrapolate(radii, _box_sums(dp_terms, box, radii))
    return p, dp


def _prepare_wp(tau: complex, z: complex) -> tuple[complex, complex, complex]:
    """Return (tau_star, w, mu) with Lambda_tau = mu * Lambda_tau_star and w = z/mu reduced."""
    tau = check_tau(tau)
    z = complex(z)
    tau_star, gamma = reduce_to_fundamental_domain(tau)
    mu = automorphy_factor(gamma, tau)
    w = _reduce_z(tau_star, z / mu)
    if abs(w) <= POLE_TOL:
        raise PoleError(f"z = {z!r} lies on the lattice Z + Z*{tau!r}")
    return tau_star, w, mu


def wp_laurent(tau: complex, z: complex, terms: int = LAURENT_TERMS) -> tuple[complex, complex]:
    """p and p' from the Laurent expansion 1/z^2 + sum (2m+1) G_{2m+2} z^(2m)."""
    tau_star, w, mu = _prepare_wp(tau, z)
    p, dp = _wp_laurent_reduced(tau_star, w, terms)
    return p / mu**2, dp / mu**3


def wp_lattice(tau: complex, z: complex, radius: int = WP_LATTICE_RADIUS, extrapolate: bool = True) -> tuple[complex, complex]:
    """p and p' from the defining lattice sums."""
    tau_star, w, mu = _prepare_wp(tau, z)
    p, dp = _wp_lattice_reduced(tau_star, w, radius, extrapolate)
    return p / mu**2, dp / mu**3


def wp_of_lattice(L: FramedLattice, z: complex) -> tuple[complex, complex]:
    """p and p' for an arbitrary lattice, via p_L(z) = l1^-2 p_tau(z / l1)."""
    if not L.positively_framed:
        L = FramedLattice(L.lambda1, -L.lambda2)
    p, dp = wp(L.ratio, complex(z) / L.lambda1)
    return p / L.lambda1**2, dp / L.lambda1**3


def wp(tau: complex, z: complex) -> tuple[complex, complex]:
    """Weierstrass p and p' for the lattice Z + Z tau.

    Near the origin of the centered cell (|w| < 0.45, the shortest vector
    of the reduced lattice being 1) the Laurent series is used; elsewhere
    the lattice sum.
    """
    tau_star, w, mu = _prepare_wp(tau, z)
    if abs(w) < LAURENT_RADIUS_FRACTION:
        p, dp = _wp_laurent_reduced(tau_star, w, LAURENT_TERMS)
    else:
        p, dp = _wp_lattice_reduced(tau_star, w, WP_LATTICE_RADIUS)
    return p / mu**2, dp / mu**3


@dataclass(frozen=True)
class ProjectivePoint:
    x: complex
    y: complex
    z: complex

    def __post_init__(self) -> None:
        if self.x == 0 and self.y == 0 and self.z == 0:
            raise InvalidArgumentError("projective point cannot be [0, 0, 0]")

    def normalized(self) -> tuple[complex, complex, complex]:
        """Scale so the coordinate of largest modulus equals 1."""
        coords = (self.x, self.y, self.z)
        big = max(coords, key=abs)
        return tuple(c / big for c in coords)

    def equals(self, other: ProjectivePoint, tol: float = 1e-9) -> bool:
        a, b = self.normalized(), other.normalized()
        return all(abs(u - v) <= tol for u, v in zip(a, b))


def cubic_residual(point: ProjectivePoint, g2: complex, g3: complex) -> float:
    """Relative residual of z y^2 = 4x^3 - g2 x z^2 - g3 z^3."""
    x, y, z = point.normalized()
    terms = (z * y * y, 4 * x**3, g2 * x * z * z, g3 * z**3)
    residual = terms[0] - terms[1] + terms[2] + terms[3]
    return abs(residual) / max(sum(abs(t) for t in terms), 1e-300)


def embed(tau: complex, z: complex) -> ProjectivePoint:
    """The point [p(z), p'(z), 1] of the plane cubic; [0, 1, 0] for z in the lattice."""
    try:
        p, dp = wp(tau, z)
    except PoleError:
        return ProjectivePoint(0j, 1 + 0j, 0j)
    return ProjectivePoint(p, dp, 1 + 0j)


# ---------------------------------------------------------------------------
# inverting j


@lru_cache(maxsize=1)
def _j_float_series() -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of q*j(q) and of q * q d/dq j, as floats."""
    js = qseries.j_series(SERIES_TERMS)
    cs = np.array([float(js[n]) for n in range(-1, SERIES_TERMS)])
    ns = np.arange(-1, SERIES_TERMS, dtype=float)
    return cs, cs * ns


def _j_and_derivative(z: complex) -> tuple[complex, complex]:
    """j and dj/dtau at a point of (or near) F."""
    q = cmath.exp(2j * math.pi * z)
    cs, dcs = _j_float_series()
    j = _horner(cs, q) / q
    dj = 2j * math.pi * _horner(dcs, q) / q
    return j, dj


def invert_j(c: complex, tol: float = 1e-8) -> complex:
    """A point tau of F with j(tau) = c, by damped Newton from a grid of seeds."""
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise InvalidArgumentError(f"j value must be finite, got {c!r}")
    if abs(c) < 1e-12:
        return RHO
    if abs(c - 1728) < 1e-12 * 1728:
        return 1j
    scale = 1 + abs(c)
    ymax = max(3.0, math.log(scale) / TWO_PI + 1.0)
    seeds = []
    for x in np.linspace(-0.5, 0.5, 40):
        ylo = math.sqrt(max(1 - x * x, 0.0)) + 1e-3
        for y in np.geomspace(ylo, ymax, 20):
            tau = complex(x, y)
            seeds.append((abs(_j_and_derivative(tau)[0] - c), tau))
    if abs(c) > 1e3:
        # j ~ 1/q + 744 near the cusp
        seeds.append((0.0, cmath.log(1 / (c - 744)) / (2j * math.pi)))
    seeds.sort(key=lambda s: s[0])
    for _, seed in seeds[:12]:
        tau = _newton_j(c, seed, scale)
        if tau is not None:
            tau, _ = reduce_to_fundamental_domain(tau)
            if abs(j_invariant(tau) - c) < tol * scale:
                return tau
    raise ConvergenceError(f"Newton iteration for j(tau) = {c!r} failed from all seeds")


def _newton_j(c: complex, tau: complex, scale: float) -> Optional[complex]:
    if tau.imag <= 0:
        return None
    for _ in range(200):
        tau, _ = reduce_to_fundamental_domain(tau)
        j, dj = _j_and_derivative(tau)
        err = j - c
        if abs(err) < 1e-13 * scale:
            return tau
        if dj == 0:
            return None
        step = err / dj
        if abs(step) > 0.25:
            step *= 0.25 / abs(step)
        while (tau - step).imag <= 0:
            step /= 2
        tau = tau - step
    j, _ = _j_and_derivative(reduce_to_fundamental_domain(tau)[0])
    return tau if abs(j - c) < 1e-9 * scale else None


# ---------------------------------------------------------------------------
# the nodal cubic at q = 0


def nodal_param(w: complex) -> tuple[complex, complex]:
    """X = 1/3 + 4w/(w-1)^2, Y = 8w(w+1)/(w-1)^3 on Y^2 = (4/27)(3X+2)(3X-1)^2."""
    w = complex(w)
    if w == 1:
        raise PoleError("w = 1 maps to the point at infinity [0, 1, 0]")
    d = w - 1
    return 1 / 3 + 4 * w / d**2, 8 * w * (w + 1) / d**3


def nodal_residual(X: complex, Y: complex) -> float:
    """|Y^2 - (4/27)(3X+2)(3X-1)^2| relative to the sizes of the monomials.

    The right side expands to 4X^3 - (4/3)X + 8/27; measuring against the
    monomial sizes keeps the residual meaningful at the node, where both
    sides vanish.
    """
    terms = (Y * Y, 4 * X**3, (4 / 3) * X, 8 / 27)
    residual = terms[0] - terms[1] + terms[2] - terms[3]
    return abs(residual) / sum(abs(t) for t in terms)

