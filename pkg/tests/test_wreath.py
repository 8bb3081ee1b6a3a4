from fractions import Fraction

import pytest

from lamperc import wreath
from lamperc.animals import enumerate_site_animals, make_site_animal
from lamperc.groups import cyclic_lamp_group, make_group
from lamperc.wreath import (build_mu_tilde, build_mu_tilde_edge,
                            check_orthogonality, convolve, delta, format_scalar,
                            projection_measure)


@pytest.fixture
def zg():
    return make_group("Z")


@pytest.fixture
def h2():
    return cyclic_lamp_group(2)


def test_delta_is_unit(zg, h2):
    d = delta(zg, h2)
    m = build_mu_tilde(zg, h2, "rational")
    assert convolve(d, m).sub(m).is_zero()
    assert convolve(m, d).sub(m).is_zero()


def test_mu_tilde_atoms(zg, h2):
    m = build_mu_tilde(zg, h2, "rational")
    assert len(m.atoms) == 8
    assert all(v == Fraction(1, 8) for v in m.atoms.values())
    assert m.total_mass() == 1


def test_mu_tilde_atom_count_general_lamp(zg):
    for q in (2, 3, 4):
        h = cyclic_lamp_group(q)
        m = build_mu_tilde(zg, h, "rational")
        assert len(m.atoms) == 2 * q * q
        assert m.total_mass() == 1


def test_mu_tilde_symmetric_under_inversion(zg, h2):
    m = build_mu_tilde(zg, h2, "rational")
    assert m.reflect().sub(m).is_zero()
    me = build_mu_tilde_edge(zg, h2, "rational")
    assert me.reflect().sub(me).is_zero()


def test_mu_tilde_edge(zg, h2):
    m = build_mu_tilde_edge(zg, h2, "rational")
    assert len(m.atoms) == 4
    assert all(v == Fraction(1, 4) for v in m.atoms.values())
    assert m.value_at_identity() == 0  # one step never returns


def test_convolution_associative(zg, h2):
    m = build_mu_tilde(zg, h2, "rational")
    nu = projection_measure(make_site_animal(zg, [0]), h2, zg, "rational")
    lhs = convolve(convolve(m, nu), m)
    rhs = convolve(m, convolve(nu, m))
    assert lhs.sub(rhs).is_zero()


def test_projection_values(zg, h2):
    empty = make_site_animal(zg, [])
    m = projection_measure(empty, h2, zg, "rational")
    assert m.value_at_identity() == Fraction(1, 2)
    m1 = projection_measure(make_site_animal(zg, [0]), h2, zg, "rational")
    assert m1.value_at_identity() == Fraction(1, 8)


def test_projection_idempotent_and_orthogonal(zg, h2):
    animals = enumerate_site_animals(zg, 3)
    projs = [projection_measure(a, h2, zg, "rational") for a in animals]
    for m in projs:
        assert convolve(m, m).sub(m).is_zero()
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            assert check_orthogonality(animals[i], animals[j], h2, zg)


def test_convolution_powers_return_probabilities(zg, h2):
    m = build_mu_tilde(zg, h2, "rational")
    p2 = convolve(m, m)
    assert p2.value_at_identity() == Fraction(1, 8)
    p4 = convolve(p2, p2)
    assert p4.value_at_identity() == Fraction(1, 16)


def test_format_scalar():
    assert format_scalar(Fraction(19, 512)) == "19/512"
    assert format_scalar(Fraction(0)) == "0/1"
    assert format_scalar(0.125) == "0.125"
    assert float(format_scalar(1 / 3)) == 1 / 3


def test_sinc_measure_values():
    assert wreath.sinc_measure(Fraction(1, 2), 0) == 0.5
    assert wreath.sinc_measure(Fraction(1, 3), 0) == pytest.approx(1 / 3)
    # at p = 1/2 the measure vanishes at even nonzero sites
    assert wreath.sinc_measure(Fraction(1, 2), 2) == pytest.approx(0.0, abs=1e-15)


def test_intertwining_exact(zg, h2):
    m = build_mu_tilde(zg, h2, "rational")
    a = make_site_animal(zg, [0, 1])
    for x in a.vertices:
        res = wreath.intertwine_check(a, {x: Fraction(1)}, m, zg, h2, "rational")
        assert res == 0
