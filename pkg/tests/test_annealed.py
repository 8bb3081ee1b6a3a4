from fractions import Fraction

import pytest

from lamperc.annealed import (annealed_moments_by_animals, annealed_moments_mc,
                              annealed_spectral_measure,
                              lamplighter_moments_exact, path_sum_cap,
                              range_path_sum, verify_identity)
from lamperc.groups import ResourceCapError, cyclic_lamp_group, make_group


@pytest.fixture
def zg():
    return make_group("Z")


@pytest.fixture
def h2():
    return cyclic_lamp_group(2)


def test_known_site_moments(zg, h2):
    wr = lamplighter_moments_exact(zg, h2, 6)
    assert wr[0] == 1
    assert wr[1] == 0
    assert wr[2] == Fraction(1, 8)
    assert wr[4] == Fraction(1, 16)
    assert wr[6] == Fraction(19, 512)


def test_known_bond_moments(zg, h2):
    wr = lamplighter_moments_exact(zg, h2, 4, mode="bond")
    assert wr[2] == Fraction(1, 4)


def test_path_sum_matches_wreath(zg, h2):
    wr = lamplighter_moments_exact(zg, h2, 8)
    ps = range_path_sum(zg, 8, Fraction(1, 2))
    assert wr == ps


def test_path_sum_cap_enforced(zg):
    cap = path_sum_cap(zg)
    with pytest.raises(ResourceCapError):
        range_path_sum(zg, cap + 1, Fraction(1, 2))


def test_clipped_animal_sum_exact_on_line(zg, h2):
    wr = lamplighter_moments_exact(zg, h2, 8)
    an = annealed_moments_by_animals(zg, 8, Fraction(1, 2), 8)
    for n in range(9):
        value, tail = an[n]
        assert tail == 0
        assert value == wr[n]


def test_truncated_animal_sum_bounds(zg, h2):
    g = make_group("Z2-square")
    wr = lamplighter_moments_exact(g, h2, 4)
    an = annealed_moments_by_animals(g, 4, Fraction(1, 2), 5)
    for n in range(5):
        value, tail = an[n]
        assert abs(wr[n] - value) <= tail


def test_mc_deterministic(zg, h2):
    a = annealed_moments_mc(zg, 4, Fraction(1, 2), 500, seed=42)
    b = annealed_moments_mc(zg, 4, Fraction(1, 2), 500, seed=42)
    assert a == b
    c = annealed_moments_mc(zg, 4, Fraction(1, 2), 500, seed=43)
    assert a != c


def test_mc_close_to_exact(zg, h2):
    wr = lamplighter_moments_exact(zg, h2, 4)
    mc = annealed_moments_mc(zg, 4, Fraction(1, 2), 20_000, seed=3)
    for n in range(5):
        mean, err = mc[n]
        assert abs(float(wr[n]) - mean) <= 5 * err + 1e-12


def test_ids_moments_match_animal_sums(zg, h2):
    ids = annealed_spectral_measure(zg, h2, 10)
    an = annealed_moments_by_animals(zg, 6, Fraction(1, 2), 10)
    # the measure is truncated at size 10; compare within the leftover mass
    assert ids.unaccounted_mass < 0.02
    for n in range(7):
        assert abs(ids.moment(n) - float(an[n][0])) <= ids.unaccounted_mass + 1e-12


def test_verify_identity_report(zg, h2):
    rep = verify_identity(zg, h2, 6, samples=2_000, seed=9)
    assert rep.passed
    assert rep.rows[2].wreath == Fraction(1, 8)
    assert len(rep.rows) == 7


def test_verify_identity_bond(zg, h2):
    rep = verify_identity(zg, h2, 4, mode="bond", samples=2_000, seed=9)
    assert rep.passed
    assert rep.rows[2].wreath == Fraction(1, 4)


def test_verify_identity_finite_group(h2):
    g = make_group("Zn:4")
    rep = verify_identity(g, h2, 6, samples=2_000, seed=9)
    assert rep.passed
