import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcurve.errors import InvalidArgumentError
from modcurve.modforms import monomial_orders, valence_check
from modcurve.orbifold import (
    Ambient,
    EquivariantComplex,
    OrbifoldDivisor,
    Stratum,
    class_in_Cl_mbar_red,
    class_in_Cl_red,
    divisor_degree,
    element_order,
    form_divisor,
    hexagon_s3_complex,
    moduli_strata,
    picard_class_mbar,
    picard_class_open,
    picard_class_open_red,
    simplex_orbits,
    simplicial_euler,
    stratified_euler,
)
from modcurve.sl2z import sl2z_abelianization


def test_moduli_euler_characteristics():
    assert stratified_euler(moduli_strata()) == Fraction(-1, 12)
    assert stratified_euler(moduli_strata(compact=True)) == Fraction(5, 12)
    assert stratified_euler([Stratum(1, 1)]) == 1


def test_hexagon():
    K = hexagon_s3_complex()
    assert K.euler_characteristic() == 1
    assert len(K.group_elements()) == 6
    assert simplicial_euler(K) == Fraction(1, 6)
    stabs = [[n for _, n in layer] for layer in simplex_orbits(K)]
    assert stabs == [[6, 2, 2], [2, 2, 1], [1]]
    # the same number from the strata of the quotient triangle
    strata = [Stratum(1, 6), Stratum(1, 2), Stratum(1, 2), Stratum(-1, 2), Stratum(-1, 2), Stratum(-1, 1), Stratum(1, 1)]
    assert stratified_euler(strata) == Fraction(1, 6)


def test_trivial_and_free_actions():
    facets = [(0, 1, 2), (0, 2, 3)]
    K = EquivariantComplex.from_facets(4, facets)
    assert simplicial_euler(K) == K.euler_characteristic() == 1
    # a hexagon boundary with the rotation by one step acts freely
    cycle = EquivariantComplex.from_facets(6, [(k, (k + 1) % 6) for k in range(6)], [tuple((k + 1) % 6 for k in range(6))])
    assert simplicial_euler(cycle) == Fraction(cycle.euler_characteristic(), 6) == 0
    # two disjoint triangles swapped
    swap = EquivariantComplex.from_facets(6, [(0, 1, 2), (3, 4, 5)], [(3, 4, 5, 0, 1, 2)])
    assert simplicial_euler(swap) == Fraction(swap.euler_characteristic(), 2) == 1


def test_action_must_preserve_complex():
    with pytest.raises(InvalidArgumentError):
        EquivariantComplex.from_facets(3, [(0, 1)], [(0, 2, 1)])
    with pytest.raises(InvalidArgumentError):
        EquivariantComplex.from_facets(3, [(0, 1)], [(0, 0, 1)])


def test_complex_from_json():
    K = EquivariantComplex.from_json(
        '{"vertices": 3, "simplices": [[[0],[1],[2]], [[0,1],[1,2],[0,2]]], "generators": [[1,2,0]]}'
    )
    assert simplicial_euler(K) == 0
    with pytest.raises(InvalidArgumentError):
        EquivariantComplex.from_json('{"simplices": []}')


def test_divisor_examples():
    D = OrbifoldDivisor.from_coefficients({"i": 1, "rho": 1}, Ambient.COMPACT_RED)
    assert divisor_degree(D) == Fraction(5, 6)
    assert divisor_degree(OrbifoldDivisor([], Ambient.COMPACT_RED)) == 0
    delta = form_divisor(0, 0, 1)
    assert divisor_degree(delta) == 1
    with pytest.raises(InvalidArgumentError):
        OrbifoldDivisor([("i", 4, 1)], Ambient.OPEN_RED)
    with pytest.raises(InvalidArgumentError):
        OrbifoldDivisor.from_coefficients({"inf": 1}, Ambient.OPEN_RED)


def test_class_in_Cl_red():
    gen = OrbifoldDivisor.from_coefficients({"rho": 1, "i": -1}, Ambient.OPEN_RED)
    assert class_in_Cl_red(gen) == 5 and element_order(5, 6) == 6
    assert class_in_Cl_red(OrbifoldDivisor.from_coefficients({"i": 2}, Ambient.OPEN_RED)) == 0
    assert class_in_Cl_red(OrbifoldDivisor.from_coefficients({"P": 1}, Ambient.OPEN_RED)) == 0
    with pytest.raises(InvalidArgumentError):
        class_in_Cl_red(form_divisor(1, 0, 0))


def test_class_in_Cl_mbar_red():
    assert class_in_Cl_mbar_red(form_divisor(0, 0, 1)) == 6
    assert class_in_Cl_mbar_red(form_divisor(1, 0, 0)) == 3
    assert class_in_Cl_mbar_red(form_divisor(0, 1, 0)) == 2


def random_divisor(rng, ambient):
    points = ["i", "rho", "P", "Q"] + (["inf"] if ambient.compact else [])
    return OrbifoldDivisor.from_coefficients({p: rng.randint(-9, 9) for p in points}, ambient)


def test_class_maps_additive():
    rng = random.Random(0)
    for _ in range(1000):
        for ambient, cls, mod in ((Ambient.OPEN_RED, class_in_Cl_red, 6), (Ambient.COMPACT_RED, class_in_Cl_mbar_red, None)):
            D1, D2 = random_divisor(rng, ambient), random_divisor(rng, ambient)
            total = cls(D1) + cls(D2)
            assert cls(D1 + D2) == (total % mod if mod else total)


def test_picard_classes():
    assert picard_class_mbar(12, 0) == picard_class_mbar(0, 1) == 12
    assert picard_class_mbar(1, 0) == 1
    assert picard_class_open(13, 2) == 1
    assert element_order(picard_class_open_red(2), 6) == 6
    assert sl2z_abelianization() == [12]


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3))
def test_form_divisor_class_is_half_the_weight(alpha, beta, gamma):
    w = 4 * alpha + 6 * beta + 12 * gamma
    if w == 0:
        return
    orders = monomial_orders(alpha, beta, gamma)
    assert valence_check(w, orders)
    D = form_divisor(orders.nu_i, orders.nu_rho, orders.nu_infty)
    assert class_in_Cl_mbar_red(D) == w // 2
