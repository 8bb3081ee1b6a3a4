"""Group oracles and Cayley-graph neighbourhoods.

Supported base groups: the integer line Z, the square and triangular planar
lattices, finite cycles Zn:m, free groups free:k and homogeneous trees
tree:d (degree d+1, realized as the free product of d+1 involutions).
Element keys are plain hashable Python values with a group-supplied total
order so that all downstream enumeration is canonical.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable


class GroupError(ValueError):
    """Bad group descriptor or non-symmetric weights."""


class ResourceCapError(RuntimeError):
    """A configured enumeration/ball size cap was exceeded."""


@dataclass(frozen=True, eq=False)
class GroupOracle:
    """Finitely generated group with a symmetric step distribution.

    ``generators`` maps generator keys to Fraction weights; the weights sum
    to one and are invariant under inversion.  ``sort_key`` supplies the
    total order used for canonical serialization.
    """

    name: str
    identity: object
    generators: tuple  # tuple of (key, Fraction weight)
    multiply: Callable
    inverse: Callable
    sort_key: Callable
    key_str: Callable
    degree: int = 0  # branching degree for tree-like groups, 0 otherwise
    # order of sort_key is invariant under left translation; lets callers
    # canonicalize a translate class by shifting the minimal vertex to e
    shift_invariant_order: bool = False
    _nbr_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        total = sum(w for _, w in self.generators)
        if total != 1:
            raise GroupError(f"generator weights sum to {total}, expected 1")
        wmap = {self.key_str(s): w for s, w in self.generators}
        for s, w in self.generators:
            inv = self.key_str(self.inverse(s))
            if wmap.get(inv) != w:
                raise GroupError("step distribution is not symmetric")

    @property
    def is_tree(self) -> bool:
        return self.degree > 0

    def edge_key(self, a, b):
        """Canonical unordered edge [a, b]."""
        if self.sort_key(b) < self.sort_key(a):
            a, b = b, a
        return (a, b)

    def edge_str(self, e) -> str:
        return self.key_str(e[0]) + "|" + self.key_str(e[1])

    def neighbors(self, x):
        """Distinct neighbour keys of x with merged step weights (cached)."""
        hit = self._nbr_cache.get(x)
        if hit is not None:
            return hit
        acc = {}
        for s, w in self.generators:
            y = self.multiply(x, s)
            acc[y] = acc.get(y, Fraction(0)) + w
        out = tuple(sorted(acc.items(), key=lambda kv: self.sort_key(kv[0])))
        self._nbr_cache[x] = out
        return out


@dataclass(frozen=True)
class LampGroup:
    """Finite lamp group given by its multiplication table; identity is 0."""

    order: int
    table: tuple  # table[a][b] = a*b

    def __post_init__(self):
        n = self.order
        if n < 1 or len(self.table) != n:
            raise GroupError("lamp table has wrong shape")
        for a in range(n):
            row = self.table[a]
            if len(row) != n or sorted(row) != list(range(n)):
                raise GroupError("lamp table is not a Latin square")
            if row[0] != a or self.table[0][a] != a:
                raise GroupError("lamp identity must be element 0")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(0)

    @property
    def p(self) -> Fraction:
        return Fraction(1, self.order)


def cyclic_lamp_group(order: int) -> LampGroup:
    """Z_q lamp group.  The spectrum only depends on |H|."""
    table = tuple(tuple((a + b) % order for b in range(order)) for a in range(order))
    return LampGroup(order=order, table=table)


@dataclass(frozen=True)
class CayleyBall:
    center: object
    radius: int
    vertices: tuple  # canonically sorted keys
    adjacency: dict  # key -> tuple of (neighbor, generator, Fraction weight)

    @property
    def index(self):
        return {v: i for i, v in enumerate(self.vertices)}


# ---------------------------------------------------------------------------
# concrete groups

def _int_group(name, gens):
    return GroupOracle(
        name=name,
        identity=0,
        generators=tuple(gens),
        multiply=lambda a, b: a + b,
        inverse=lambda a: -a,
        sort_key=lambda a: a,
        key_str=str,
        shift_invariant_order=True,
    )


def _z2_group(name, steps):
    w = Fraction(1, len(steps))
    return GroupOracle(
        name=name,
        identity=(0, 0),
        generators=tuple((s, w) for s in steps),
        multiply=lambda a, b: (a[0] + b[0], a[1] + b[1]),
        inverse=lambda a: (-a[0], -a[1]),
        sort_key=lambda a: a,
        key_str=lambda a: f"{a[0]},{a[1]}",
        shift_invariant_order=True,
    )


def _zn_group(m):
    if m < 2:
        raise GroupError("cycle length must be >= 2")
    acc = {}
    for s, w in ((1 % m, Fraction(1, 2)), ((-1) % m, Fraction(1, 2))):
        acc[s] = acc.get(s, Fraction(0)) + w
    return GroupOracle(
        name=f"Zn:{m}",
        identity=0,
        generators=tuple(sorted(acc.items())),
        multiply=lambda a, b: (a + b) % m,
        inverse=lambda a: (-a) % m,
        sort_key=lambda a: a,
        key_str=str,
    )


def _reduce_free(word, letter):
    """Append a +/-i letter to a reduced free-group word."""
    if word and word[-1] == -letter:
        return word[:-1]
    return word + (letter,)


def _free_group(k):
    if k < 1:
        raise GroupError("free rank must be >= 1")
    w = Fraction(1, 2 * k)
    gens = tuple(((i,), w) for i in range(1, k + 1)) + tuple(((-i,), w) for i in range(1, k + 1))

    def mult(a, b):
        out = a
        for letter in b:
            out = _reduce_free(out, letter)
        return out

    return GroupOracle(
        name=f"free:{k}",
        identity=(),
        generators=gens,
        multiply=mult,
        inverse=lambda a: tuple(-x for x in reversed(a)),
        sort_key=lambda a: (len(a), a),
        key_str=lambda a: ".".join(map(str, a)) if a else "e",
        degree=2 * k - 1,
    )


def _tree_group(d):
    """Free product of d+1 involutions; Cayley graph is the (d+1)-regular tree."""
    if d < 1:
        raise GroupError("tree degree parameter must be >= 1")
    n = d + 1
    w = Fraction(1, n)
    gens = tuple(((i,), w) for i in range(n))

    def mult(a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    return GroupOracle(
        name=f"tree:{d}",
        identity=(),
        generators=gens,
        multiply=mult,
        inverse=lambda a: tuple(reversed(a)),
        sort_key=lambda a: (len(a), a),
        key_str=lambda a: ".".join(map(str, a)) if a else "e",
        degree=d,
    )


def make_group(spec: str) -> GroupOracle:
    """Build a group oracle from a descriptor string.

    Descriptors: ``Z``, ``Z2-square``, ``Z2-tri``, ``Zn:m``, ``free:k``,
    ``tree:d`` (homogeneous tree of degree d+1).
    """
    spec = spec.strip()
    if spec == "Z":
        return _int_group("Z", [(1, Fraction(1, 2)), (-1, Fraction(1, 2))])
    if spec == "Z2-square":
        return _z2_group("Z2-square", [(1, 0), (-1, 0), (0, 1), (0, -1)])
    if spec == "Z2-tri":
        return _z2_group(
            "Z2-tri", [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
        )
    if spec.startswith("Zn:"):
        return _zn_group(int(spec[3:]))
    if spec.startswith("free:"):
        return _free_group(int(spec[5:]))
    if spec.startswith("tree:"):
        return _tree_group(int(spec[5:]))
    raise GroupError(f"unknown group descriptor: {spec!r}")


def ball(g: GroupOracle, radius: int, cap: int = 2_000_000) -> CayleyBall:
    """All products of at most ``radius`` generators, with full adjacency."""
    if radius < 0:
        raise GroupError("radius must be >= 0")
    seen = {g.identity}
    frontier = [g.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s, _ in g.generators:
                y = g.multiply(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ResourceCapError("ball size cap exceeded")
        frontier = nxt
    vertices = tuple(sorted(seen, key=g.sort_key))
    adjacency = {}
    for x in vertices:
        lst = []
        for s, w in g.generators:
            y = g.multiply(x, s)
            if y in seen:
                lst.append((y, s, w))
        adjacency[x] = tuple(lst)
    return CayleyBall(center=g.identity, radius=radius, vertices=vertices, adjacency=adjacency)


def key_hash64(text: str) -> int:
    """Stable 64-bit hash of a canonical key string."""
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")
