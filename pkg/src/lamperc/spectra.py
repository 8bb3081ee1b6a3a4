"""Absorbing-walk matrices on animals, their spectra and rooted measures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import USE_NUMBA
from ._kernels import jacobi_eigh
from .animals import Animal, BondAnimal
from .groups import GroupOracle

ATOM_MERGE_TOL = 1e-9


@dataclass
class SubMarkovMatrix:
    """Symmetric substochastic matrix of the walk killed on leaving an animal."""

    index: tuple  # animal vertices in canonical order
    entries: np.ndarray

    @property
    def root(self) -> int:
        return 0 if not self.index else self.index.index(self._root_key)

    _root_key = None


@dataclass
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # orthonormal columns
    residuals: np.ndarray
    index: tuple


@dataclass
class SpectralMeasure:
    atoms: list  # (value, mass), values ascending

    @property
    def total_mass(self) -> float:
        return float(sum(m for _, m in self.atoms))

    def moment(self, n: int) -> float:
        return float(sum(m * v ** n for v, m in self.atoms))

    def to_json(self, meta=None):
        out = {"atoms": [{"value": float(v), "mass": float(m)} for v, m in self.atoms]}
        if meta:
            out["meta"] = meta
        return out


def _rational_entries(a, g: GroupOracle):
    """P_A as a dict-of-dicts with exact Fraction entries."""
    if isinstance(a, Animal):
        verts = a.vertices
        inside = set(verts)

        def allowed(x, y):
            return y in inside
    elif isinstance(a, BondAnimal):
        verts = a.vertices
        eset = set(a.edges)

        def allowed(x, y):
            return g.edge_key(x, y) in eset
    else:
        raise TypeError("expected Animal or BondAnimal")
    rows = {x: {} for x in verts}
    for x in verts:
        for s, w in g.generators:
            y = g.multiply(x, s)
            if allowed(x, y):
                rows[x][y] = rows[x].get(y, Fraction(0)) + w
    return verts, rows


def build_PA(a, g: GroupOracle) -> SubMarkovMatrix:
    """Transition matrix of the absorbing walk restricted to the animal."""
    verts, rows = _rational_entries(a, g)
    n = len(verts)
    pos = {x: i for i, x in enumerate(verts)}
    m = np.zeros((n, n))
    for x, row in rows.items():
        for y, w in row.items():
            m[pos[x], pos[y]] = float(w)
    smm = SubMarkovMatrix(index=tuple(verts), entries=m)
    smm._root_key = g.identity
    return smm


def eigensolve(m: SubMarkovMatrix) -> EigenSystem:
    """Full symmetric eigendecomposition with deterministic ordering.

    Eigenvalues ascend; each eigenvector's first nonzero component is made
    positive.  Uses the numba Jacobi kernel, or LAPACK via numpy on the
    fallback path; both meet the 1e-10 residual contract.
    """
    a = m.entries
    n = a.shape[0]
    if n == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0)), np.zeros(0), m.index)
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-14:
        raise ValueError("matrix is not symmetric")
    if USE_NUMBA:
        w, v = jacobi_eigh(np.ascontiguousarray(a, dtype=np.float64))
    else:
        w, v = np.linalg.eigh(a)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(n):
        col = v[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            v[:, j] = -col
    res = np.array([np.linalg.norm(a @ v[:, j] - w[j] * v[:, j]) for j in range(n)])
    return EigenSystem(w, v, res, m.index)


def merge_atoms(pairs, tol=ATOM_MERGE_TOL):
    """Merge (value, mass) pairs whose values are within tol, dropping zeros."""
    out = []
    for v, mass in sorted(pairs):
        if out and v - out[-1][0] <= tol:
            pv, pm = out[-1]
            total = pm + mass
            out[-1] = ((pv * pm + v * mass) / total if total else pv, total)
        else:
            out.append((v, mass))
    return [(v, m) for v, m in out if m != 0]


def rooted_spectral_measure(es: EigenSystem, root_index: int) -> SpectralMeasure:
    """Diagonal spectral measure at the root: masses are squared eigenvector
    components there.  The empty animal yields the unit atom at 0."""
    if es.eigenvalues.size == 0:
        return SpectralMeasure(atoms=[(0.0, 1.0)])
    pairs = [(float(es.eigenvalues[j]), float(es.eigenvectors[root_index, j] ** 2))
             for j in range(es.eigenvalues.size)]
    return SpectralMeasure(atoms=merge_atoms(pairs))


def return_moments(m: SubMarkovMatrix, root_index: int, nmax: int):
    """Independent oracle: (P_A^n)(e, e) by repeated matrix-vector products."""
    if m.entries.shape[0] == 0:
        return [1.0] + [0.0] * nmax
    v = np.zeros(m.entries.shape[0])
    v[root_index] = 1.0
    out = [1.0]
    for _ in range(nmax):
        v = m.entries @ v
        out.append(float(v[root_index]))
    return out


def return_moments_exact(a, g: GroupOracle, nmax: int):
    """(P_A^n)(e, e) in exact rational arithmetic."""
    if isinstance(a, Animal) and a.is_empty:
        return [Fraction(1)] + [Fraction(0)] * nmax
    verts, rows = _rational_entries(a, g)
    v = {g.identity: Fraction(1)}
    out = [Fraction(1)]
    for _ in range(nmax):
        nxt = {}
        for x, val in v.items():
            for y, w in rows[x].items():
                nxt[y] = nxt.get(y, Fraction(0)) + w * val
        v = nxt
        out.append(v.get(g.identity, Fraction(0)))
    return out


def _canonical_translate(a, g: GroupOracle):
    """Translation-invariant signature of an animal (site or bond).

    When the group's sort order is shift-invariant the translate putting the
    minimal vertex at the identity is canonical; otherwise take the minimum
    over all translates.
    """
    sk = g.sort_key
    if isinstance(a, Animal):
        if a.is_empty:
            return ("site", ())
        if g.shift_invariant_order:
            roots = [min(a.vertices, key=sk)]
        else:
            roots = a.vertices
        best = None
        for y in roots:
            iy = g.inverse(y)
            sig = tuple(sorted(sk(g.multiply(iy, v)) for v in a.vertices))
            if best is None or sig < best:
                best = sig
        return ("site", best)
    if g.shift_invariant_order:
        roots = [min(a.vertices, key=sk)]
    else:
        roots = a.vertices
    best = None
    for y in roots:
        iy = g.inverse(y)
        sig = tuple(sorted(
            tuple(map(sk, g.edge_key(g.multiply(iy, e[0]), g.multiply(iy, e[1]))))
            for e in a.edges))
        if best is None or sig < best:
            best = sig
    return ("bond", best, len(a.vertices))


def animal_spectrum(a, g: GroupOracle, _cache={}):
    """Eigenvalues of an animal's walk, cached up to translation."""
    key = (id(g), _canonical_translate(a, g))
    if key not in _cache:
        if isinstance(a, Animal) and a.is_empty:
            _cache[key] = np.zeros(1)
        else:
            _cache[key] = eigensolve(build_PA(a, g)).eigenvalues
    return _cache[key]


def point_spectrum(g: GroupOracle, max_size: int, mode: str = "site",
                   tol=ATOM_MERGE_TOL):
    """Sorted distinct eigenvalues over all animals up to max_size, plus 0."""
    from .animals import enumerate_bond_animals, enumerate_site_animals

    if mode == "site":
        animals = enumerate_site_animals(g, max_size)
    elif mode == "bond":
        animals = enumerate_bond_animals(g, max_size)
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    values = [0.0]
    for a in animals:
        values.extend(float(x) for x in animal_spectrum(a, g))
    values.sort()
    out = [values[0]]
    for v in values[1:]:
        if v - out[-1] > tol:
            out.append(v)
    return out
