"""Acceptance suite: one test per contract criterion, one pass/fail line each.

Every numeric target is cross-checked by at least two independent oracles;
exact criteria run in rational arithmetic.  Run with `pytest -s` to see the
summary lines.
"""

import math
import time
from fractions import Fraction

import numpy as np

from lamperc.algebra import (intertwine_checks, isometry_checks,
                             projection_checks, sinc_checks, stabilizer_checks,
                             torsion_obstruction_detected)
from lamperc.animals import (animal_weight, enumerate_site_animals,
                             finite_mass, make_site_animal)
from lamperc.annealed import (annealed_moments_by_animals,
                              lamplighter_moments_exact, mc_sample_matrix,
                              range_path_sum)
from lamperc.groups import cyclic_lamp_group, make_group
from lamperc.spectra import (build_PA, eigensolve, point_spectrum,
                             return_moments, rooted_spectral_measure)


def report(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"{tag}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


def test_moment_identity_Z():
    t0 = time.perf_counter()
    g = make_group("Z")
    h = cyclic_lamp_group(2)
    wr = lamplighter_moments_exact(g, h, 10)
    ps = range_path_sum(g, 10, h.p)
    an = annealed_moments_by_animals(g, 10, h.p, 8)
    ok = wr == ps
    ok &= all(tail == 0 and value == wr[n] for n, (value, tail) in enumerate(an))
    ok &= wr[2] == Fraction(1, 8)
    elapsed = time.perf_counter() - t0
    report("moment identity on Z, n <= 10, three exact oracles",
           ok and elapsed < 10, f"n=2 value {wr[2]}, {elapsed:.1f}s < 10s")


def test_moment_identity_Z2():
    t0 = time.perf_counter()
    g = make_group("Z2-square")
    h = cyclic_lamp_group(2)
    wr = lamplighter_moments_exact(g, h, 6)
    ps = range_path_sum(g, 6, h.p)
    an = annealed_moments_by_animals(g, 6, h.p, 8)
    ok = wr == ps
    ok &= all(abs(wr[n] - value) <= tail for n, (value, tail) in enumerate(an))
    elapsed = time.perf_counter() - t0
    report("moment identity on Z2 square lattice, n <= 6",
           ok and elapsed < 120,
           f"tail bound {float(an[0][1]):.3f} at size 8, {elapsed:.1f}s < 120s")


def test_bond_identity_Z():
    t0 = time.perf_counter()
    g = make_group("Z")
    h = cyclic_lamp_group(2)
    wr = lamplighter_moments_exact(g, h, 8, mode="bond")
    ps = range_path_sum(g, 8, h.p, mode="bond")
    an = annealed_moments_by_animals(g, 8, h.p, 8, mode="bond")
    ok = wr == ps
    ok &= all(tail == 0 and value == wr[n] for n, (value, tail) in enumerate(an))
    ok &= wr[2] == Fraction(1, 4)
    elapsed = time.perf_counter() - t0
    report("bond identity on Z, n <= 8, three exact oracles",
           ok and elapsed < 10, f"n=2 value {wr[2]}, {elapsed:.1f}s < 10s")


def test_tree_case():
    t0 = time.perf_counter()
    g = make_group("tree:2")
    h = cyclic_lamp_group(3)
    masses = [finite_mass(g, h.p, k, "site") for k in (5, 10, 20)]
    ok = all(masses[i] < masses[i + 1] for i in range(len(masses) - 1))
    ok &= masses[-1] > Fraction(99, 100)  # calibrated cap K = 20
    wr = lamplighter_moments_exact(g, h, 6)
    ps = range_path_sum(g, 6, h.p)
    an = annealed_moments_by_animals(g, 6, h.p, 8)
    ok &= wr == ps
    ok &= all(abs(wr[n] - value) <= tail for n, (value, tail) in enumerate(an))
    elapsed = time.perf_counter() - t0
    report("degree-3 tree, |H|=3: finite mass and moment identity, n <= 6",
           ok and elapsed < 120,
           f"mass {float(masses[-1]):.4f} > 0.99 at K=20, {elapsed:.1f}s < 120s")


def test_projection_algebra():
    ok = True
    worst = []
    for spec in ("Z", "Z2-square"):
        g = make_group(spec)
        results = projection_checks(g, cyclic_lamp_group(2), 3)
        ok &= all(r.passed for r in results)
        worst.append(max(r.residual for r in results))
    report("projection algebra |A| <= 3 on Z and Z2: exact",
           ok, f"residuals {max(worst):g}")


def test_intertwining_and_eigenrelations():
    g = make_group("Z")
    results = intertwine_checks(g, cyclic_lamp_group(2), 4)
    ok = all(r.passed for r in results)
    worst = max(r.residual for r in results)
    report("intertwining and eigen-relations |A| <= 4 on Z",
           ok, f"worst residual {worst:.2e} <= 1e-12")


def test_partial_isometries():
    g = make_group("Z")
    h = cyclic_lamp_group(2)
    results = isometry_checks(g, h, 3, tol=1e-13)
    ok = all(r.passed for r in results)
    worst = max(r.residual for r in results)

    g6 = make_group("Zn:6")
    cycle6 = make_site_animal(g6, range(6))
    ok &= torsion_obstruction_detected(g6, h, cycle6)

    g4 = make_group("Zn:4")
    cycle4 = make_site_animal(g4, range(4))
    stab_results, dec = stabilizer_checks(g4, h, cycle4, tol=1e-12)
    ok &= all(r.passed for r in stab_results)
    spectrum = sorted(iso.eigenvalue for iso in dec.isometries)
    expect = [-1.0, 0.0, 0.0, 1.0]
    ok &= max(abs(a - b) for a, b in zip(spectrum, expect)) < 1e-12
    report("partial isometries: contracts on Z, Z6 torsion, Z4 diagonalization",
           ok, f"worst product residual {worst:.2e}, Z4 spectrum {{1, 0, -1, 0}}")


def test_cluster_spectra():
    g = make_group("Z")
    ok = True
    worst_eig = 0.0
    for ell in range(1, 13):
        a = make_site_animal(g, range(ell))
        es = eigensolve(build_PA(a, g))
        expect = sorted(math.cos(k * math.pi / (ell + 1))
                        for k in range(1, ell + 1))
        worst_eig = max(worst_eig, float(np.max(np.abs(
            es.eigenvalues - np.array(expect)))))
    ok &= worst_eig < 1e-10
    worst_mom = 0.0
    for a in enumerate_site_animals(g, 5):
        if a.is_empty:
            continue
        m = build_PA(a, g)
        root = a.vertices.index(g.identity)
        sm = rooted_spectral_measure(eigensolve(m), root)
        oracle = return_moments(m, root, 12)
        for n in range(13):
            worst_mom = max(worst_mom, abs(sm.moment(n) - oracle[n]))
    ok &= worst_mom < 1e-10
    report("cluster spectra: interval closed form and rooted moments",
           ok, f"eig err {worst_eig:.2e}, moment err {worst_mom:.2e} <= 1e-10")


def test_lambda_density():
    g = make_group("Z")
    vals = point_spectrum(g, 200)
    gaps = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    worst = max(max(gaps) / 2, vals[0] + 1, 1 - vals[-1])
    report("point spectrum density on Z at size 200: covers [-1, 1] to 0.01",
           worst <= 0.01, f"{len(vals)} points, worst distance {worst:.4f}")


def test_monte_carlo():
    t0 = time.perf_counter()
    g = make_group("Z")
    h = cyclic_lamp_group(2)
    nmax = 8
    samples = 100_000
    wr = lamplighter_moments_exact(g, h, nmax)
    verts, diag, masks = mc_sample_matrix(g, nmax, h.p, samples, seed=2024)
    ok = True
    worst_sigma = 0.0
    for n in range(nmax + 1):
        col = diag[:, n]
        mean = float(col.mean())
        err = float(col.std(ddof=1) / math.sqrt(samples))
        diff = abs(float(wr[n]) - mean)
        if err == 0:
            ok &= diff < 1e-12
        else:
            worst_sigma = max(worst_sigma, diff / err)
            ok &= diff <= 4 * err
    # animal frequencies: ball radius 8 so any |A| <= 3 cluster is
    # identified exactly by its membership bitmap
    idx = {v: i for i, v in enumerate(verts)}
    worst_freq_sigma = 0.0
    for a in enumerate_site_animals(g, 3):
        if a.is_empty:
            target = np.uint64(0)
        else:
            bits = 0
            for v in a.vertices:
                bits |= 1 << idx[v]
            target = np.uint64(bits)
        freq = float(np.mean(masks == target))
        w = float(animal_weight(a, h.p))
        err = math.sqrt(w * (1 - w) / samples)
        worst_freq_sigma = max(worst_freq_sigma, abs(freq - w) / err)
        ok &= abs(freq - w) <= 4 * err
    elapsed = time.perf_counter() - t0
    report("Monte Carlo on Z, 1e5 samples: moments and animal frequencies",
           ok and elapsed < 60,
           f"worst {worst_sigma:.2f} sigma, freq {worst_freq_sigma:.2f} sigma, "
           f"{elapsed:.1f}s < 60s")


def test_sinc_measure():
    results = sinc_checks()
    ok = all(r.passed for r in results)
    recorded = "; ".join(r.note for r in results if r.note)
    report("sinc measure: value at 0 and decreasing truncation residuals",
           ok, recorded)
