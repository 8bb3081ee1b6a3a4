"""Projection / intertwining / partial-isometry check suite.

Shared by the CLI ``algebra-checks`` command and the test suite.  Each check
returns a record with a residual (Fraction 0 in rational mode) and a pass
flag at the contract tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import wreath
from .animals import enumerate_site_animals, finite_mass
from .groups import GroupOracle, LampGroup
from .spectra import build_PA, eigensolve


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""


def _result(name, residual, tol, note=""):
    return CheckResult(name, float(residual), tol, float(residual) <= tol, note)


def projection_checks(g: GroupOracle, h: LampGroup, max_size: int = 3):
    """Idempotency, pairwise orthogonality and the trace sum, exactly."""
    animals = enumerate_site_animals(g, max_size)
    projs = [wreath.projection_measure(a, h, g, "rational") for a in animals]
    out = []
    worst_idem = Fraction(0)
    for a, m in zip(animals, projs):
        # m * m computed factor by factor (associativity): m is the product
        # of the per-site factors, so m * f_1 * ... * f_k = m * m, and each
        # step is a cheap explicit convolution
        acc = m
        for x in a.vertices:
            acc = wreath.convolve(acc, wreath.nu_at(g, h, x))
        for x in a.boundary:
            acc = wreath.convolve(acc, wreath.nubar_at(g, h, x))
        worst_idem = max(worst_idem, acc.sub(m).l1_norm())
    out.append(_result("projection idempotency", worst_idem, 0.0,
                       f"{len(animals)} animals, |A| <= {max_size}"))
    non_orthogonal = 0
    pairs = 0
    for i in range(len(animals)):
        for j in range(i + 1, len(animals)):
            pairs += 1
            if not wreath.check_orthogonality(animals[i], animals[j], h, g):
                non_orthogonal += 1
    out.append(_result("projection orthogonality", Fraction(non_orthogonal), 0.0,
                       f"{pairs} pairs, small pairs confirmed by convolution"))
    trace = sum(m.value_at_identity() for m in projs)
    mass = finite_mass(g, h.p, max_size, "site")
    out.append(_result("trace sum vs finite mass", abs(trace - mass), 0.0))
    weights = [wreath.animal_projection_value(a, h) for a in animals]
    worst_w = max(abs(m.value_at_identity() - w) for m, w in zip(projs, weights))
    out.append(_result("projection identity value", worst_w, 0.0))
    return out


def intertwine_checks(g: GroupOracle, h: LampGroup, max_size: int = 4):
    """Lemma-style invariance and eigen-relations for all small animals."""
    animals = enumerate_site_animals(g, max_size)
    mu_r = wreath.build_mu_tilde(g, h, "rational")
    mu_d = wreath.build_mu_tilde(g, h, "double")
    out = []
    worst_basis = Fraction(0)
    for a in animals:
        if a.is_empty:
            res = wreath.intertwine_check(a, {}, mu_r, g, h, "rational")
            worst_basis = max(worst_basis, res)
            continue
        for x in a.vertices:
            res = wreath.intertwine_check(a, {x: Fraction(1)}, mu_r, g, h, "rational")
            worst_basis = max(worst_basis, res)
    out.append(_result("intertwining on basis vectors (rational)", worst_basis, 0.0))
    worst_eig = 0.0
    for a in animals:
        if a.is_empty:
            continue
        es = eigensolve(build_PA(a, g))
        proj = wreath.projection_measure(a, h, g, "double")
        for j in range(es.eigenvalues.size):
            f = {v: float(es.eigenvectors[i, j]) for i, v in enumerate(a.vertices)}
            sigma = wreath.convolve(proj, wreath.embed_group_vector(g, h, f, "site"))
            lhs = wreath.convolve(sigma, mu_d)
            res = lhs.sub(sigma.scale(float(es.eigenvalues[j]))).l1_norm()
            worst_eig = max(worst_eig, res)
    out.append(_result("eigenfunction relation (double)", worst_eig, 1e-12))
    return out


def isometry_checks(g: GroupOracle, h: LampGroup, max_size: int = 3, tol: float = 1e-13):
    """Diagonal/off-diagonal contract of the partial-isometry products."""
    animals = [a for a in enumerate_site_animals(g, max_size) if not a.is_empty]
    out = []
    worst_diag = 0.0
    worst_off = 0.0
    obstructed = []
    for a in animals:
        es = eigensolve(build_PA(a, g))
        vecs = [es.eigenvectors[:, j] for j in range(es.eigenvalues.size)]
        prod = wreath.partial_isometry_products(a, h, g, vecs, "double")
        if prod.status != "ok":
            obstructed.append(a)
            continue
        n = len(vecs)
        for x in range(n):
            for y in range(n):
                d = prod.products[x][y]
                if x == y:
                    worst_diag = max(worst_diag, d.sub(prod.projection).l1_norm())
                else:
                    worst_off = max(worst_off, d.l1_norm())
    out.append(_result("isometry diagonal = projection", worst_diag, tol))
    out.append(_result("isometry off-diagonal = 0", worst_off, tol))
    if obstructed:
        out.append(CheckResult("torsion obstruction reporting", 0.0, 0.0, True,
                               f"{len(obstructed)} animals with coinciding translates"))
    return out


def torsion_obstruction_detected(g: GroupOracle, h: LampGroup, a) -> bool:
    es = eigensolve(build_PA(a, g))
    vecs = [es.eigenvectors[:, j] for j in range(es.eigenvalues.size)]
    prod = wreath.partial_isometry_products(a, h, g, vecs, "double")
    return prod.status == "torsion obstruction"


def stabilizer_checks(g: GroupOracle, h: LampGroup, a, tol: float = 1e-12):
    """Abelian-stabilizer Fourier diagonalization contracts."""
    mu_d = wreath.build_mu_tilde(g, h, "double")
    dec = wreath.abelian_stabilizer_diagonalize(a, g, h)
    out = []
    worst_eig = 0.0
    worst_iso = 0.0
    for iso in dec.isometries:
        m = iso.measure
        lhs = wreath.convolve(m, mu_d)
        worst_eig = max(worst_eig, lhs.sub(m.scale(iso.eigenvalue)).l1_norm())
        mstar = m.reflect()
        triple = wreath.convolve(wreath.convolve(m, mstar), m)
        worst_iso = max(worst_iso, triple.sub(m).l1_norm())
    out.append(_result("stabilizer eigen-relation", worst_eig, tol,
                       f"|G_A| = {len(dec.stabilizer)}, {len(dec.isometries)} isometries"))
    out.append(_result("partial isometry S S* S = S", worst_iso, tol))
    total = None
    for iso in dec.isometries:
        t = wreath.convolve(iso.measure.reflect(), iso.measure)
        total = t if total is None else total.add(t)
    res = total.sub(dec.projection_sum_target).l1_norm()
    out.append(_result("range projections sum to translate sum", res, tol))
    eigs = sorted(round(iso.eigenvalue, 9) for iso in dec.isometries)
    out.append(CheckResult("recovered spectrum", 0.0, 0.0, True, f"eigenvalues {eigs}"))
    return out, dec


def sinc_checks(ps=(Fraction(1, 3), Fraction(1, 2)), ks=(0, 1, 2),
                cutoffs=(100, 1000, 10000)):
    """nu(0) = p and decreasing truncated self-convolution residuals."""
    out = []
    for p in ps:
        ok0 = wreath.sinc_measure(p, 0) == float(p)
        out.append(CheckResult(f"sinc value at 0, p={p}", 0.0, 0.0, ok0))
        for k in ks:
            res = [wreath.sinc_selfconv_residual(p, k, c) for c in cutoffs]
            decreasing = all(res[i + 1] <= res[i] for i in range(len(res) - 1))
            out.append(CheckResult(
                f"sinc self-convolution p={p} k={k}", res[-1], 1e-3,
                decreasing and res[-1] <= 1e-3,
                "residuals " + ", ".join(f"{r:.3e}" for r in res)))
    return out


def run_algebra_suite(g: GroupOracle, h: LampGroup, max_size: int = 3):
    """Full suite for one group; Zn groups also exercise the torsion paths."""
    results = []
    results += projection_checks(g, h, min(max_size, 3))
    results += intertwine_checks(g, h, min(max_size, 4))
    results += isometry_checks(g, h, min(max_size, 3))
    if g.name.startswith("Zn:"):
        m = int(g.name.split(":")[1])
        from .animals import make_site_animal

        cycle = make_site_animal(g, range(m))
        detected = torsion_obstruction_detected(g, h, cycle)
        results.append(CheckResult("full-cycle torsion obstruction", 0.0, 0.0,
                                   detected, "reported" if detected else "missed"))
        stab_results, _ = stabilizer_checks(g, h, cycle)
        results += stab_results
    results += sinc_checks()
    return results
