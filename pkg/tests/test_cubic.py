import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcurve import analytic
from modcurve.cubic import (
    WeierstrassCurve,
    act_on_curve,
    automorphism_order,
    curve_from_tau,
    discriminant,
    isomorphic,
    j_invariant,
    tau_from_curve,
)
from modcurve.errors import SingularCurveError
from modcurve.sl2z import RHO

small = st.fractions(min_value=-50, max_value=50, max_denominator=9)
units = st.tuples(st.floats(0.3, 3), st.floats(-math.pi, math.pi)).map(lambda t: cmath.rect(*t))


def sample_F(rng, ymax=2.5):
    x = rng.uniform(-0.45, 0.45)
    return complex(x, rng.uniform(math.sqrt(1 - x * x) + 0.05, ymax))


def test_discriminant_examples():
    assert discriminant(WeierstrassCurve(1, 0)) == 1
    assert discriminant(WeierstrassCurve(0, 1)) == -27
    assert discriminant(WeierstrassCurve(3, 1)) == 0
    assert not WeierstrassCurve(3, 1).smooth


def test_exactness_is_preserved():
    C = WeierstrassCurve(Fraction(1, 3), 2)
    assert C.exact and isinstance(j_invariant(C), Fraction)
    assert not WeierstrassCurve(0.5, 2).exact


def test_j_examples():
    assert j_invariant(WeierstrassCurve(1, 0)) == 1728
    assert j_invariant(WeierstrassCurve(0, 1)) == 0
    assert j_invariant(WeierstrassCurve(3, 5)) == -72
    with pytest.raises(SingularCurveError):
        j_invariant(WeierstrassCurve(3, 1))


def test_j_matches_analytic():
    rng = random.Random(1)
    for _ in range(20):
        tau = sample_F(rng)
        j = j_invariant(curve_from_tau(tau))
        ref = analytic.j_invariant(tau)
        assert abs(j - ref) < 1e-8 * max(1, abs(ref))


@given(small, small, small.filter(lambda u: u != 0))
def test_discriminant_weight_twelve(a, b, u):
    C = WeierstrassCurve(a, b)
    assert discriminant(C.scaled(u)) == u**12 * discriminant(C)
    if C.smooth:
        assert j_invariant(C.scaled(u)) == j_invariant(C)


def test_isomorphic_examples():
    C = WeierstrassCurve(3, 5)
    assert abs(isomorphic(C, WeierstrassCurve(48, 320)) - 2) < 1e-12
    assert isomorphic(WeierstrassCurve(1, 0), WeierstrassCurve(0, 1)) is None
    assert isomorphic(C, WeierstrassCurve(3, 7)) is None


def test_isomorphic_construction_with_lambda():
    rng = random.Random(4)
    for _ in range(20):
        tau = sample_F(rng)
        lam = cmath.rect(rng.uniform(0.5, 2), rng.uniform(-3, 3))
        C = curve_from_tau(tau)
        D = act_on_curve(lam, C)
        u = isomorphic(C, D)
        assert u is not None
        # u is lam^-1 up to the automorphisms (here +-1)
        assert min(abs(u - 1 / lam), abs(u + 1 / lam)) < 1e-9 * abs(u)


@given(st.lists(st.tuples(small, small), min_size=3, max_size=3), units, units)
def test_isomorphism_is_an_equivalence(pairs, u, v):
    curves = [WeierstrassCurve(a, b) for a, b in pairs]
    curves = [C for C in curves if C.smooth] or [WeierstrassCurve(1, 1)]
    for C in curves:
        assert isomorphic(C, C) is not None
        D = C.scaled(u)
        E = D.scaled(v)
        assert isomorphic(C, D) is not None and isomorphic(D, C) is not None
        assert isomorphic(C, E) is not None
        for other in curves:
            same_j = j_invariant(C) == j_invariant(other)
            assert (isomorphic(C, other) is not None) == same_j


def test_automorphism_orders():
    assert automorphism_order(WeierstrassCurve(1, 0)) == 4
    assert automorphism_order(WeierstrassCurve(0, 1)) == 6
    assert automorphism_order(curve_from_tau(2j)) == 2
    assert automorphism_order(curve_from_tau(1j)) == 4
    assert automorphism_order(curve_from_tau(RHO)) == 6
    with pytest.raises(SingularCurveError):
        automorphism_order(WeierstrassCurve(0, 0))


def test_tau_from_curve_examples():
    tau, lam = tau_from_curve(curve_from_tau(0.2 + 1.1j))
    assert abs(tau - (0.2 + 1.1j)) < 1e-6 and abs(lam - 1) < 1e-6
    tau, lam = tau_from_curve(WeierstrassCurve(1, 0))
    assert abs(tau - 1j) < 1e-12
    assert abs(lam - analytic.g2_g3(1j)[0] ** 0.25) < 1e-9
    tau, _ = tau_from_curve(WeierstrassCurve(0, 1))
    assert abs(tau - RHO) < 1e-12


def test_tau_from_curve_round_trip():
    rng = random.Random(9)
    for _ in range(100):
        tau = sample_F(rng)
        lam = cmath.rect(rng.uniform(0.5, 2), rng.uniform(-3, 3))
        C = act_on_curve(lam, curve_from_tau(tau))
        t2, l2 = tau_from_curve(C)
        assert abs(t2 - tau) < 1e-6
        back = act_on_curve(l2, curve_from_tau(t2))
        assert abs(back.a - C.a) < 1e-7 * abs(C.a) and abs(back.b - C.b) < 1e-7 * abs(C.b)
