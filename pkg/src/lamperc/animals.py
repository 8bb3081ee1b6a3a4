"""Lattice animals (site and bond) and Bernoulli cluster sampling.

A site animal is a finite connected induced subgraph containing the group
identity; the empty animal is admitted with vertex boundary {e}.  A bond
animal is a finite connected (not necessarily induced) subgraph containing
the identity, keyed by its edge set; the edgeless singleton is admitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groups import GroupOracle, ResourceCapError, key_hash64

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def state_word(seed: int, khash: int) -> int:
    """Counter-based pseudo-random word for one (seed, canonical key) pair."""
    return splitmix64(splitmix64(seed & MASK64) ^ khash)


def open_threshold(p: Fraction) -> int:
    """Integer threshold t such that a key is open iff its word < t."""
    return (p.numerator << 64) // p.denominator


@dataclass(frozen=True)
class Animal:
    """Site animal: canonically sorted vertices plus outer vertex boundary."""

    vertices: tuple
    boundary: tuple

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def boundary_size(self) -> int:
        return len(self.boundary)

    @property
    def is_empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class BondAnimal:
    """Bond animal: vertices, open edges and incident closed (boundary) edges."""

    vertices: tuple
    edges: tuple
    boundary_edges: tuple

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def boundary_size(self) -> int:
        return len(self.boundary_edges)


@dataclass(frozen=True)
class ClusterSample:
    animal: object  # Animal | BondAnimal | None when truncated
    seed: int
    p: Fraction
    truncated: bool


def _site_boundary(g: GroupOracle, vset):
    out = set()
    for x in vset:
        for y, _ in g.neighbors(x):
            if y not in vset:
                out.add(y)
    return out


def make_site_animal(g: GroupOracle, vertices) -> Animal:
    vset = set(vertices)
    if not vset:
        return Animal(vertices=(), boundary=(g.identity,))
    if g.identity not in vset:
        raise ValueError("site animal must contain the identity")
    sk = g.sort_key
    return Animal(
        vertices=tuple(sorted(vset, key=sk)),
        boundary=tuple(sorted(_site_boundary(g, vset), key=sk)),
    )


def _bond_boundary(g: GroupOracle, vset, eset):
    out = set()
    for x in vset:
        for y, _ in g.neighbors(x):
            e = g.edge_key(x, y)
            if e not in eset:
                out.add(e)
    return out


def make_bond_animal(g: GroupOracle, edges) -> BondAnimal:
    eset = set(edges)
    vset = {g.identity}
    for a, b in eset:
        vset.add(a)
        vset.add(b)
    sk = g.sort_key

    def esk(e):
        return (sk(e[0]), sk(e[1]))

    return BondAnimal(
        vertices=tuple(sorted(vset, key=sk)),
        edges=tuple(sorted(eset, key=esk)),
        boundary_edges=tuple(sorted(_bond_boundary(g, vset, eset), key=esk)),
    )


def enumerate_site_animals(g: GroupOracle, max_size: int, cap: int = 5_000_000):
    """All site animals with at most ``max_size`` vertices, empty one first.

    Canonical-growth BFS: extend each animal by a boundary vertex and dedup
    on the vertex set.  Output is sorted by (size, serialization).
    """
    if max_size < 0:
        raise ValueError("max_size must be >= 0")
    out = [make_site_animal(g, ())]
    if max_size == 0:
        return out
    seen = {frozenset((g.identity,))}
    layer = [frozenset((g.identity,))]
    all_sets = list(layer)
    for _ in range(max_size - 1):
        nxt = []
        for vset in layer:
            for y in _site_boundary(g, vset):
                grown = vset | {y}
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
                    if len(seen) > cap:
                        raise ResourceCapError("animal enumeration cap exceeded")
        all_sets.extend(nxt)
        layer = nxt
    animals = [make_site_animal(g, vs) for vs in all_sets]
    animals.sort(key=lambda a: (a.size, tuple(map(g.key_str, a.vertices))))
    return out + animals


def enumerate_bond_animals(g: GroupOracle, max_edges: int, cap: int = 5_000_000):
    """All bond animals with at most ``max_edges`` edges, singleton first."""
    if max_edges < 0:
        raise ValueError("max_edges must be >= 0")
    singleton = make_bond_animal(g, ())
    if max_edges == 0:
        return [singleton]
    seen = set()
    layer = [(frozenset((g.identity,)), frozenset())]
    all_states = []
    for _ in range(max_edges):
        nxt = []
        for vset, eset in layer:
            for e in _bond_boundary(g, vset, eset):
                grown_e = eset | {e}
                if grown_e not in seen:
                    seen.add(grown_e)
                    state = (vset | {e[0], e[1]}, grown_e)
                    nxt.append(state)
                    all_states.append(state)
                    if len(seen) > cap:
                        raise ResourceCapError("animal enumeration cap exceeded")
        layer = nxt
    animals = [make_bond_animal(g, es) for _, es in all_states]

    def esort(a):
        return (a.edge_count, tuple(g.edge_str(e) for e in a.edges))

    animals.sort(key=esort)
    return [singleton] + animals


def animal_weight(a: Animal, p: Fraction) -> Fraction:
    """Prob_p[cluster of e equals a] = p^|A| (1-p)^|dA|."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    return p ** a.size * (1 - p) ** a.boundary_size


def bond_animal_weight(a: BondAnimal, p: Fraction) -> Fraction:
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    return p ** a.edge_count * (1 - p) ** a.boundary_size


def sample_cluster(g: GroupOracle, p: Fraction, seed: int, cap: int = 100_000,
                   mode: str = "site") -> ClusterSample:
    """Sample the identity's percolation cluster by breadth-first exploration.

    Each vertex (site mode) or edge (bond mode) state is drawn once from a
    counter-based stream keyed by (seed, canonical key), so the result does
    not depend on exploration order.  Exploration beyond ``cap`` vertices
    yields a truncated marker, not an error.
    """
    if cap <= 0:
        raise ValueError("cap must be > 0")
    p = Fraction(p)
    thresh = open_threshold(p)

    def is_open(text):
        return state_word(seed, key_hash64(text)) < thresh

    if mode == "site":
        if not is_open(g.key_str(g.identity)):
            return ClusterSample(make_site_animal(g, ()), seed, p, False)
        vset = {g.identity}
        frontier = [g.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for y, _ in g.neighbors(x):
                    if y not in vset and is_open(g.key_str(y)):
                        vset.add(y)
                        nxt.append(y)
                        if len(vset) > cap:
                            return ClusterSample(None, seed, p, True)
            frontier = nxt
        return ClusterSample(make_site_animal(g, vset), seed, p, False)
    if mode == "bond":
        vset = {g.identity}
        eset = set()
        frontier = [g.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for y, _ in g.neighbors(x):
                    e = g.edge_key(x, y)
                    if e not in eset and is_open(g.edge_str(e)):
                        eset.add(e)
                        if y not in vset:
                            vset.add(y)
                            nxt.append(y)
                            if len(vset) > cap:
                                return ClusterSample(None, seed, p, True)
            frontier = nxt
        return ClusterSample(make_bond_animal(g, eset), seed, p, False)
    raise ValueError(f"unknown mode: {mode!r}")


def tree_subtree_counts(degree: int, max_size: int):
    """counts[k] = number of k-vertex subtrees containing the root of the
    homogeneous tree with branching degree d (vertex degree d+1)."""
    d = degree
    # b[k] = subtrees of size k hanging below one edge (root has d children)
    b = [Fraction(0)] * (max_size + 1)
    for k in range(1, max_size + 1):
        # b = x * (1 + b)^d, computed iteratively to fixed point in degree k
        conv = _poly_pow([Fraction(1)] + b[1:], d, max_size)
        b[k] = conv[k - 1]
    root = _poly_pow([Fraction(1)] + b[1:], d + 1, max_size)
    return [Fraction(0)] + [root[k - 1] for k in range(1, max_size + 1)]


def _poly_pow(coeffs, exp, trunc):
    out = [Fraction(0)] * (trunc + 1)
    out[0] = Fraction(1)
    for _ in range(exp):
        nxt = [Fraction(0)] * (trunc + 1)
        for i, a in enumerate(out):
            if a == 0:
                continue
            for j, c in enumerate(coeffs):
                if i + j > trunc:
                    break
                nxt[i + j] += a * c
        out = nxt
    return out


def finite_mass(g: GroupOracle, p: Fraction, max_size: int, mode: str = "site") -> Fraction:
    """Total percolation weight of animals up to ``max_size``.

    Monotone nondecreasing in max_size and bounded by 1.  On homogeneous
    trees (site mode) the sum is evaluated by subtree counting, which equals
    the enumeration sum exactly but scales to the sizes where it approaches 1.
    """
    p = Fraction(p)
    if mode == "site" and g.is_tree:
        d = g.degree
        counts = tree_subtree_counts(d, max_size)
        total = 1 - p  # empty animal
        for k in range(1, max_size + 1):
            total += counts[k] * p ** k * (1 - p) ** ((d - 1) * k + 2)
        return total
    if mode == "site":
        return sum(animal_weight(a, p) for a in enumerate_site_animals(g, max_size))
    if mode == "bond":
        return sum(bond_animal_weight(a, p) for a in enumerate_bond_animals(g, max_size))
    raise ValueError(f"unknown mode: {mode!r}")
