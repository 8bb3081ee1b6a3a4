import math
from fractions import Fraction

import numpy as np
import pytest

from lamperc.animals import make_bond_animal, make_site_animal
from lamperc.groups import make_group
from lamperc.spectra import (build_PA, eigensolve, merge_atoms, point_spectrum,
                             return_moments, return_moments_exact,
                             rooted_spectral_measure)


@pytest.fixture
def zg():
    return make_group("Z")


def test_interval_matrix(zg):
    a = make_site_animal(zg, [0, 1, 2])
    m = build_PA(a, zg)
    assert m.index == (0, 1, 2)
    expect = np.array([[0, .5, 0], [.5, 0, .5], [0, .5, 0]])
    assert np.allclose(m.entries, expect)


def test_interval_spectrum_closed_form(zg):
    for ell in range(1, 13):
        a = make_site_animal(zg, range(ell))
        es = eigensolve(build_PA(a, zg))
        expect = sorted(math.cos(k * math.pi / (ell + 1)) for k in range(1, ell + 1))
        assert np.max(np.abs(es.eigenvalues - np.array(expect))) < 1e-10


def test_eigensolve_residuals_and_orthonormality(zg):
    a = make_site_animal(zg, range(-3, 4))
    es = eigensolve(build_PA(a, zg))
    assert np.max(es.residuals) < 1e-10
    gram = es.eigenvectors.T @ es.eigenvectors
    assert np.max(np.abs(gram - np.eye(7))) < 1e-10


def test_rooted_measure_moments_match_matrix_powers(zg):
    a = make_site_animal(zg, range(-2, 3))
    m = build_PA(a, zg)
    es = eigensolve(m)
    root = a.vertices.index(0)
    sm = rooted_spectral_measure(es, root)
    oracle = return_moments(m, root, 12)
    for n in range(13):
        assert abs(sm.moment(n) - oracle[n]) < 1e-10


def test_exact_return_moments_agree(zg):
    a = make_site_animal(zg, [-1, 0, 1])
    exact = return_moments_exact(a, zg, 8)
    m = build_PA(a, zg)
    dbl = return_moments(m, a.vertices.index(0), 8)
    for n in range(9):
        assert abs(float(exact[n]) - dbl[n]) < 1e-14
    assert exact[2] == Fraction(1, 2)


def test_bond_animal_matrix(zg):
    b = make_bond_animal(zg, [(0, 1)])
    m = build_PA(b, zg)
    assert np.allclose(m.entries, np.array([[0, .5], [.5, 0]]))
    es = eigensolve(m)
    assert np.allclose(es.eigenvalues, [-0.5, 0.5])


def test_empty_animal_measure(zg):
    a = make_site_animal(zg, [])
    es = eigensolve(build_PA(a, zg))
    sm = rooted_spectral_measure(es, 0)
    assert sm.atoms == [(0.0, 1.0)]


def test_merge_atoms():
    got = merge_atoms([(0.0, 0.25), (1e-12, 0.25), (0.5, 0.5)])
    assert len(got) == 2
    assert got[0][1] == 0.5 and got[1] == (0.5, 0.5)


def test_point_spectrum_contains_zero_and_symmetric(zg):
    vals = point_spectrum(zg, 6)
    assert any(abs(v) < 1e-12 for v in vals)
    arr = np.array(vals)
    # bipartite walks: spectrum symmetric about 0
    for v in vals:
        assert np.min(np.abs(arr + v)) < 1e-9


def test_asymmetric_matrix_rejected():
    from lamperc.spectra import SubMarkovMatrix

    bad = SubMarkovMatrix(index=(0, 1), entries=np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigensolve(bad)
