"""Annealed return probabilities by independent oracles and their comparison.

Four routes to the same numbers: convolution powers of the lamplighter law,
the range-weighted path sum, percolation-weighted sums over animals (exact
on the integer line via interval clipping), and Monte Carlo over sampled
clusters.  ``verify_identity`` runs them side by side at p = 1/|H|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import wreath
from ._kernels import mc_bond_sample, mc_site_sample
from .animals import (Animal, animal_weight, bond_animal_weight,
                      enumerate_bond_animals, enumerate_site_animals,
                      finite_mass, make_bond_animal, make_site_animal,
                      open_threshold, splitmix64)
from .groups import GroupOracle, LampGroup, ResourceCapError, ball, key_hash64
from .spectra import (animal_spectrum, build_PA, eigensolve, merge_atoms,
                      return_moments_exact, rooted_spectral_measure)

PATH_SUM_CAPS = {2: 14, 4: 9, 6: 7}
PATH_SUM_BUDGET = 400_000


def path_sum_cap(g: GroupOracle) -> int:
    """Largest step count for exhaustive path enumeration on this group."""
    b = len({g.key_str(g.multiply(g.identity, s)) for s, _ in g.generators})
    if b in PATH_SUM_CAPS:
        return PATH_SUM_CAPS[b]
    n = 0
    while b ** (n + 1) <= PATH_SUM_BUDGET:
        n += 1
    return n


def lamplighter_moments_exact(g: GroupOracle, h: LampGroup, nmax: int,
                              mode: str = "site", arith: str = "rational",
                              atom_cap: int = 5_000_000):
    """Return probabilities of the lamplighter walk by convolution powers."""
    if mode == "site":
        law = wreath.build_mu_tilde(g, h, arith)
    elif mode == "bond":
        law = wreath.build_mu_tilde_edge(g, h, arith)
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    one = Fraction(1) if arith == "rational" else 1.0
    out = [one]
    power = None
    for _ in range(nmax):
        power = law if power is None else wreath.convolve(power, law)
        if len(power.atoms) > atom_cap:
            raise ResourceCapError("convolution support cap exceeded")
        v = power.value_at_identity()
        out.append(Fraction(v) if arith == "rational" else float(v))
    return out


def range_path_sum(g: GroupOracle, nmax: int, p, mode: str = "site",
                   arith: str = "rational"):
    """Sum over returning walk paths of probability times p^range.

    Site range counts distinct vertices visited, bond range distinct edges
    crossed.  The n = 0 entry is 1 by the lamp-off convention.  Exact in
    rational mode; exhaustive, so capped by path_sum_cap.
    """
    if nmax > path_sum_cap(g):
        raise ResourceCapError(f"path enumeration beyond cap {path_sum_cap(g)}")
    p = Fraction(p)
    if arith != "rational":
        p = float(p)
    zero = Fraction(0) if arith == "rational" else 0.0
    acc = [zero] * (nmax + 1)
    ekey = g.key_str(g.identity)

    def walk(pos, prob, visited, depth):
        if g.key_str(pos) == ekey:
            acc[depth] += prob * p ** len(visited)
        if depth == nmax:
            return
        for y, w in g.neighbors(pos):
            wv = w if arith == "rational" else float(w)
            if mode == "site":
                tag = g.key_str(y)
            else:
                tag = g.edge_str(g.edge_key(pos, y))
            added = tag not in visited
            if added:
                visited.add(tag)
            walk(y, prob * wv, visited, depth + 1)
            if added:
                visited.remove(tag)

    start = {ekey} if mode == "site" else set()
    one = Fraction(1) if arith == "rational" else 1.0
    walk(g.identity, one, start, 0)
    acc[0] = one  # all-lamps-off convention at n = 0
    return acc


def _z_clipped_classes(g: GroupOracle, n: int, p: Fraction, mode: str):
    """Interval classes on the line whose far endpoints cannot influence the
    n-step return; class weights carry the exact geometric tail, so the
    animal sum is exact with zero tail bound."""
    q = 1 - p
    m = n + 1
    for a in range(-m, 1):
        for b in range(0, m + 1):
            left_clip = a == -m
            right_clip = b == m
            if mode == "site":
                w = p ** (b - a + 1) * q ** 2
                if left_clip:
                    w = q * p ** (b + m + 1)
                if right_clip:
                    w = q * p ** (-a + m + 1)
                if left_clip and right_clip:
                    w = p ** (2 * m + 1)
            else:
                w = p ** (b - a) * q ** 2
                if left_clip:
                    w = q * p ** (b + m)
                if right_clip:
                    w = q * p ** (-a + m)
                if left_clip and right_clip:
                    w = p ** (2 * m)
            yield a, b, w


def annealed_moments_by_animals(g: GroupOracle, nmax: int, p, max_size: int,
                                mode: str = "site", arith: str = "rational"):
    """Percolation-weighted animal sums of n-step returns.

    Returns a list of (value, tail_bound).  On Z the clipping scheme makes
    the values exact with zero tail; elsewhere the tail bound is the mass of
    animals beyond max_size, valid since every n-step return lies in [0, 1].
    """
    p = Fraction(p)
    if g.name == "Z":
        return _z_clipped_moments(g, nmax, p, mode, arith)
    if mode == "site":
        animals = enumerate_site_animals(g, max_size)
        weights = [animal_weight(a, p) for a in animals]
    else:
        animals = enumerate_bond_animals(g, max_size)
        weights = [bond_animal_weight(a, p) for a in animals]
    covered = sum(weights)
    tail = 1 - covered
    values = [Fraction(0)] * (nmax + 1)
    for a, w in zip(animals, weights):
        mom = return_moments_exact(a, g, nmax)
        for n in range(nmax + 1):
            values[n] += w * mom[n]
    if arith == "rational":
        return [(v, tail) for v in values]
    return [(float(v), float(tail)) for v in values]


def _z_clipped_moments(g: GroupOracle, nmax: int, p: Fraction, mode: str, arith: str):
    out = [(Fraction(1), Fraction(0))]
    cache = {}
    for n in range(1, nmax + 1):
        total = Fraction(0)
        for a, b, w in _z_clipped_classes(g, n, p, mode):
            if (a, b) not in cache:
                verts = range(a, b + 1)
                if mode == "site":
                    animal = make_site_animal(g, verts)
                else:
                    animal = make_bond_animal(g, [(i, i + 1) for i in range(a, b)])
                cache[(a, b)] = return_moments_exact(animal, g, nmax)
            total += w * cache[(a, b)][n]
        out.append((total, Fraction(0)))
    if arith == "rational":
        return out
    return [(float(v), 0.0) for v, _ in out]


def _ball_arrays(g: GroupOracle, radius: int, mode: str):
    bl = ball(g, radius)
    verts = bl.vertices
    idx = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    degs = [len(bl.adjacency[v]) for v in verts]
    maxdeg = max(degs) if degs else 0
    nbr = np.zeros((nv, maxdeg), dtype=np.int64)
    wts = np.zeros((nv, maxdeg), dtype=np.float64)
    eidx = np.zeros((nv, maxdeg), dtype=np.int64)
    deg = np.array(degs, dtype=np.int64)
    edge_ids = {}
    for i, v in enumerate(verts):
        slots = {}
        for y, _, w in bl.adjacency[v]:
            slots[idx[y]] = slots.get(idx[y], 0.0) + float(w)
        for k, (j, w) in enumerate(sorted(slots.items())):
            nbr[i, k] = j
            wts[i, k] = w
            if mode == "bond":
                e = g.edge_key(v, verts[j])
                if e not in edge_ids:
                    edge_ids[e] = len(edge_ids)
                eidx[i, k] = edge_ids[e]
        deg[i] = len(slots)
    khash = np.array([key_hash64(g.key_str(v)) for v in verts], dtype=np.uint64)
    if mode == "bond":
        ehash = np.zeros(len(edge_ids), dtype=np.uint64)
        for e, i in edge_ids.items():
            ehash[i] = key_hash64(g.edge_str(e))
    else:
        ehash = None
    root = idx[g.identity]
    return verts, nbr, deg, wts, eidx, khash, ehash, root


def mc_sample_matrix(g: GroupOracle, nmax: int, p, samples: int, seed: int,
                     mode: str = "site"):
    """Per-sample return probabilities and cluster bitmaps from the kernels."""
    p = Fraction(p)
    thresh = np.uint64(open_threshold(p))
    verts, nbr, deg, wts, eidx, khash, ehash, root = _ball_arrays(g, nmax, mode)
    # mix the base seed so different user seeds get disjoint sample streams
    base = splitmix64(seed & ((1 << 64) - 1))
    seeds = np.uint64(base) + np.arange(samples, dtype=np.uint64)
    if mode == "site":
        diag, masks = mc_site_sample(nbr, deg, wts, khash, root, thresh, seeds, nmax)
    else:
        diag, masks = mc_bond_sample(nbr, deg, wts, eidx, ehash, root, thresh, seeds, nmax)
    return verts, diag, masks


def annealed_moments_mc(g: GroupOracle, nmax: int, p, samples: int, seed: int,
                        mode: str = "site"):
    """Monte Carlo estimate of annealed returns: list of (mean, stderr).

    Unbiased: only the radius-n neighbourhood of the identity can influence
    the n-step return, and exploration always covers the radius-nmax ball.
    """
    _, diag, _ = mc_sample_matrix(g, nmax, p, samples, seed, mode)
    out = []
    for n in range(nmax + 1):
        col = diag[:, n]
        mean = float(col.mean())
        if n == 0:
            out.append((mean, 0.0))
        else:
            out.append((mean, float(col.std(ddof=1) / np.sqrt(samples))))
    return out


@dataclass
class AnnealedMeasure:
    atoms: list  # (value, mass)
    unaccounted_mass: float
    p: float
    mode: str

    def moment(self, n: int) -> float:
        return float(sum(m * v ** n for v, m in self.atoms))

    def to_json(self):
        return {
            "atoms": [{"value": float(v), "mass": float(m)} for v, m in self.atoms],
            "unaccountedMass": float(self.unaccounted_mass),
            "meta": {"p": float(self.p), "mode": self.mode},
        }


def annealed_spectral_measure(g: GroupOracle, h: LampGroup, max_size: int,
                              mode: str = "site") -> AnnealedMeasure:
    """Integrated density of states truncated at max_size animals."""
    p = h.p
    if mode == "site":
        animals = enumerate_site_animals(g, max_size)
        weights = [animal_weight(a, p) for a in animals]
    else:
        animals = enumerate_bond_animals(g, max_size)
        weights = [bond_animal_weight(a, p) for a in animals]
    pairs = []
    for a, w in zip(animals, weights):
        if isinstance(a, Animal) and a.is_empty:
            pairs.append((0.0, float(w)))
            continue
        es = eigensolve(build_PA(a, g))
        root = a.vertices.index(g.identity)
        sm = rooted_spectral_measure(es, root)
        pairs.extend((v, float(w) * m) for v, m in sm.atoms)
    atoms = merge_atoms(pairs)
    covered = float(sum(weights))
    return AnnealedMeasure(atoms=atoms, unaccounted_mass=1.0 - covered,
                           p=float(p), mode=mode)


@dataclass
class MomentRow:
    n: int
    wreath: object
    path_sum: object  # None when beyond the enumeration cap
    animal_value: object
    animal_tail: object
    mc_mean: float
    mc_stderr: float
    ok_path: bool
    ok_animal: bool
    ok_mc: bool

    @property
    def ok(self) -> bool:
        return self.ok_path and self.ok_animal and self.ok_mc


@dataclass
class VerifyReport:
    group: str
    lamp_order: int
    mode: str
    arith: str
    p: Fraction
    seed: int
    samples: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)


def verify_identity(g: GroupOracle, h: LampGroup, nmax: int, mode: str = "site",
                    max_size: int = 8, samples: int = 20_000, seed: int = 1,
                    arith: str = "rational", mc_tol_sigma: float = 4.0) -> VerifyReport:
    """Cross-check all applicable oracles at p = 1/|H| and build a report."""
    p = h.p
    wr = lamplighter_moments_exact(g, h, nmax, mode, arith)
    cap = path_sum_cap(g)
    ps = range_path_sum(g, min(nmax, cap), p, mode, arith)
    an = annealed_moments_by_animals(g, nmax, p, max_size, mode, arith)
    mc = annealed_moments_mc(g, nmax, p, samples, seed, mode)
    report = VerifyReport(group=g.name, lamp_order=h.order, mode=mode,
                          arith=arith, p=p, seed=seed, samples=samples)
    for n in range(nmax + 1):
        w = wr[n]
        path = ps[n] if n < len(ps) else None
        av, at = an[n]
        mean, err = mc[n]
        if path is None:
            ok_path = True
        elif arith == "rational":
            ok_path = w == path
        else:
            ok_path = abs(w - path) <= 1e-12
        diff = w - av
        ok_animal = abs(diff) <= at + (0 if arith == "rational" else 1e-12)
        mc_diff = abs(float(w) - mean)
        ok_mc = mc_diff <= mc_tol_sigma * err + (1e-12 if err == 0 else 0)
        report.rows.append(MomentRow(n, w, path, av, at, mean, err,
                                     ok_path, ok_animal, ok_mc))
    return report
