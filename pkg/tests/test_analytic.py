import cmath
import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcurve import analytic
from modcurve.analytic import (
    G2_SCALE,
    embed,
    eisenstein_e,
    eisenstein_g,
    eisenstein_lattice_sum,
    eval_modular,
    g2_g3,
    invert_j,
    j_invariant,
    lattice_invariants,
    nodal_param,
    nodal_residual,
    two_zeta,
    wp,
    wp_lattice,
    wp_laurent,
    wp_of_lattice,
)
from modcurve.errors import InvalidArgumentError, PoleError
from modcurve.lattice import FramedLattice
from modcurve.lattice import FramedLattice
from modcurve.sl2z import GENERATORS, IDENTITY, RHO, act, automorphy_factor


def sample_F(rng: random.Random, ymax: float = 2.5) -> complex:
    x = rng.uniform(-0.5, 0.5)
    return complex(x, rng.uniform(math.sqrt(1 - x * x), ymax))


def sample_z(rng: random.Random, tau: complex) -> complex:
    """A point of the period parallelogram kept away from the lattice."""
    while True:
        s, t = rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
        if max(abs(s), abs(t)) > 0.05:
            return s + t * tau


def random_gamma(rng: random.Random, length: int = 6):
    g = IDENTITY
    for _ in range(length):
        g = g @ GENERATORS[rng.choice(sorted(GENERATORS))]
    return g


seeds = st.integers(0, 2**32)


# --- constants --------------------------------------------------------------


def test_two_zeta_matches_mpmath():
    for w in range(2, 40, 2):
        assert abs(two_zeta(w) - 2 * float(mpmath.zeta(w))) < 1e-13


def test_two_zeta_rejects_odd():
    with pytest.raises(InvalidArgumentError):
        two_zeta(3)


def test_g4_at_i_closed_form():
    ref = float(mpmath.gamma(0.25) ** 8 / (960 * mpmath.pi**2))
    assert abs(eisenstein_g(4, 1j) - ref) < 1e-12 * ref


def test_special_values():
    assert abs(j_invariant(1j) - 1728) < 1e-6
    assert abs(j_invariant(RHO)) < 1e-6
    assert abs(eisenstein_e(6, 1j)) < 1e-12
    assert abs(eisenstein_e(4, RHO)) < 1e-12


def test_cusp_limit():
    g2, g3 = g2_g3(100j)
    assert abs(g2 - G2_SCALE) < 1e-12 * G2_SCALE
    assert abs(eval_modular(30j).delta) > 0


# --- Eisenstein series ------------------------------------------------------


@pytest.mark.parametrize("k", [4, 6, 8, 10])
def test_qseries_against_lattice_sum(k):
    rng = random.Random(k)
    for _ in range(10):
        tau = sample_F(rng)
        ref = eisenstein_lattice_sum(k, tau)
        assert abs(eisenstein_g(k, tau) - ref) < 1e-8 * abs(ref)


def test_qseries_against_lattice_sum_off_F():
    rng = random.Random(50)
    for _ in range(50):
        tau = complex(rng.uniform(-2, 2), rng.uniform(0.5, 3))
        for k in (4, 6):
            ref = eisenstein_lattice_sum(k, tau)
            assert abs(eisenstein_g(k, tau) - ref) < 1e-5 * abs(ref)


def test_raw_lattice_sum_converges_slowly():
    ref = eisenstein_g(4, 0.2 + 1.1j)
    raw = eisenstein_lattice_sum(4, 0.2 + 1.1j, radius=50, extrapolate=False)
    fit = eisenstein_lattice_sum(4, 0.2 + 1.1j, radius=50)
    assert abs(fit - ref) < abs(raw - ref)


def test_lattice_sum_g4_at_i():
    ref = eisenstein_g(4, 1j)
    assert abs(eisenstein_lattice_sum(4, 1j, radius=200) - ref) < 1e-6 * abs(ref)
    # the bare box sum only reaches a few parts in 1e6 at this radius
    raw = eisenstein_lattice_sum(4, 1j, radius=200, extrapolate=False)
    assert abs(raw - ref) < 1e-5 * abs(ref)


@pytest.mark.parametrize("k", [4, 6])
def test_lattice_sum_scaling(k):
    tau = 0.3 + 1.1j
    base = FramedLattice(1.0, tau)
    scaled = FramedLattice(2.0, 2 * tau)
    for extrapolate in (False, True):
        s1 = eisenstein_lattice_sum(k, base, extrapolate=extrapolate)
        s2 = eisenstein_lattice_sum(k, scaled, extrapolate=extrapolate)
        assert abs(s2 - 2.0 ** -k * s1) < 1e-8 * abs(s2)


@pytest.mark.parametrize("k", [2, 3, 5, 0, -4])
def test_lattice_sum_rejects_bad_k(k):
    with pytest.raises(InvalidArgumentError):
        eisenstein_lattice_sum(k, 1j)


def test_g2_g3_are_60_and_140_times_lattice_sums():
    tau = 0.31 + 1.2j
    g2, g3 = g2_g3(tau)
    assert abs(g2 - 60 * eisenstein_lattice_sum(4, tau)) < 1e-8 * abs(g2)
    assert abs(g3 - 140 * eisenstein_lattice_sum(6, tau)) < 1e-8 * abs(g3)


@given(seeds)
def test_weight_transformation(seed):
    rng = random.Random(seed)
    tau = sample_F(rng)
    g = random_gamma(rng)
    f = automorphy_factor(g, tau)
    for k in (4, 6):
        lhs = eisenstein_e(k, act(g, tau))
        assert abs(lhs - f**k * eisenstein_e(k, tau)) < 1e-9 * abs(f**k) * (1 + abs(lhs))


@given(seeds)
def test_j_is_modular(seed):
    rng = random.Random(seed)
    tau = sample_F(rng)
    j = j_invariant(tau)
    assert abs(j_invariant(act(random_gamma(rng), tau)) - j) < 1e-8 * (1 + abs(j))


def test_delta_nonvanishing_on_F():
    rng = random.Random(3)
    for _ in range(10**4):
        v = eval_modular(sample_F(rng, ymax=4.5))
        scale = abs(v.g2) ** 3 + abs(v.g3) ** 2 + 1
        assert abs(v.delta) > 1e-12 * scale
        assert abs(v.delta - (v.g2**3 - 27 * v.g3**2)) < 1e-8 * scale


def test_lattice_invariants_homogeneous():
    L = FramedLattice(1, 0.2 + 1.3j)
    c = 1.7 - 0.4j
    g2, g3 = lattice_invariants(L)
    h2, h3 = lattice_invariants(L.scaled(c))
    assert abs(h2 - g2 / c**4) < 1e-10 * abs(h2)
    assert abs(h3 - g3 / c**6) < 1e-10 * abs(h3)


# --- Weierstrass p ----------------------------------------------------------


@given(seeds)
def test_laurent_and_lattice_agree(seed):
    rng = random.Random(seed)
    tau = sample_F(rng, ymax=1.8)
    z = sample_z(rng, tau)
    # the overlap annulus 0.3 <= |z| <= 0.45 (shortest period is 1 on F)
    w = cmath.rect(rng.uniform(0.3, 0.45), rng.uniform(-math.pi, math.pi))
    p1, d1 = wp_laurent(tau, w)
    p2, d2 = wp_lattice(tau, w)
    assert abs(p1 - p2) < 1e-8 * abs(p2)
    assert abs(d1 - d2) < 1e-8 * abs(d2)


@given(seeds)
def test_weierstrass_ode(seed):
    rng = random.Random(seed)
    tau = sample_F(rng)
    z = sample_z(rng, tau)
    p, dp = wp(tau, z)
    g2, g3 = g2_g3(tau)
    rhs = 4 * p**3 - g2 * p - g3
    assert abs(dp * dp - rhs) < 1e-8 * max(abs(dp) ** 2, abs(4 * p**3), 1)


@given(seeds)
def test_wp_symmetries(seed):
    rng = random.Random(seed)
    tau = sample_F(rng)
    z = sample_z(rng, tau)
    p, dp = wp(tau, z)
    for shift in (1, tau, 2 - 3 * tau):
        q, dq = wp(tau, z + shift)
        assert abs(q - p) < 1e-8 * abs(p) and abs(dq - dp) < 1e-8 * abs(dp)
    q, dq = wp(tau, -z)
    assert abs(q - p) < 1e-9 * abs(p) and abs(dq + dp) < 1e-9 * abs(dp)


def test_wp_derivative_by_finite_difference():
    tau, z, h = 0.1 + 1.1j, 0.27 + 0.31j, 1e-5
    p, dp = wp(tau, z)
    fd = (wp(tau, z + h)[0] - wp(tau, z - h)[0]) / (2 * h)
    assert abs(fd - dp) < 1e-6 * abs(dp)


def test_wp_modular_covariance():
    rng = random.Random(11)
    for _ in range(20):
        tau = sample_F(rng)
        z = sample_z(rng, tau)
        g = random_gamma(rng)
        f = automorphy_factor(g, tau)
        # Z + Z g(tau) = f^-1 (Z + Z tau)
        p, dp = wp(tau, z)
        q, dq = wp(act(g, tau), z / f)
        assert abs(q - f**2 * p) < 1e-8 * abs(q)
        assert abs(dq - f**3 * dp) < 1e-8 * abs(dq)


def test_wp_lattice_scaling():
    L = FramedLattice(1, 0.15 + 1.2j)
    u = 1 + 1j
    for z in (0.2 + 0.1j, 0.41 - 0.3j, -0.33 + 0.52j):
        p, dp = wp_of_lattice(L, z)
        q, dq = wp_of_lattice(L.scaled(u), u * z)
        assert abs(q - p / u**2) < 1e-7 * abs(q)
        assert abs(dq - dp / u**3) < 1e-7 * abs(dq)


def test_wp_pole():
    with pytest.raises(PoleError):
        wp(1j, 2 + 3j)


def test_embedding_on_curve():
    rng = random.Random(5)
    for _ in range(50):
        tau = sample_F(rng)
        z = sample_z(rng, tau)
        g2, g3 = g2_g3(tau)
        assert analytic.cubic_residual(embed(tau, z), g2, g3) < 1e-8
    origin = embed(1j, 1 + 1j)
    assert origin.equals(analytic.ProjectivePoint(0, 1, 0))


# --- j inversion ------------------------------------------------------------


def test_invert_j_special_values():
    assert abs(invert_j(0) - RHO) < 1e-12
    assert abs(invert_j(1728) - 1j) < 1e-12


@given(seeds)
def test_invert_j_round_trip(seed):
    rng = random.Random(seed)
    c = cmath.rect(10 ** rng.uniform(-3, 7), rng.uniform(-math.pi, math.pi))
    tau = invert_j(c)
    assert -0.5 <= tau.real < 0.5 and abs(tau) >= 1 - 1e-9
    assert abs(j_invariant(tau) - c) < 1e-7 * max(1, abs(c))


@given(seeds)
def test_tau_to_j_to_tau(seed):
    rng = random.Random(seed)
    x = rng.uniform(-0.45, 0.45)
    tau = complex(x, rng.uniform(math.sqrt(1 - x * x) + 0.05, 3))
    assert abs(invert_j(j_invariant(tau)) - tau) < 1e-7


def test_invert_j_rejects_nonfinite():
    with pytest.raises(InvalidArgumentError):
        invert_j(complex("inf"))


# --- nodal cubic ------------------------------------------------------------


@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_nodal_param_identity(w):
    if abs(w - 1) < 1e-3:
        return
    assert nodal_residual(*nodal_param(w)) < 1e-12


def test_nodal_special_points():
    X, Y = nodal_param(-1)
    assert abs(X + 2 / 3) < 1e-15 and Y == 0
    X, Y = nodal_param(1e-9)
    assert abs(X - 1 / 3) < 1e-8 and abs(Y) < 1e-8


def test_nodal_param_pole():
    with pytest.raises(PoleError):
        nodal_param(1)
