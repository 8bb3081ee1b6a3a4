"""Convolution algebra of finitely supported measures on the wreath product.

Measures live on pairs (configuration, group position).  Configurations map
group elements (site mode) or canonical edges (bond mode) to nonidentity
lamp states and are stored as frozensets of (key, lamp) pairs, so atoms are
hashable without a global order.  Values are Fractions in rational mode,
floats (or complex) in double mode; arithmetic never mixes the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .animals import Animal, BondAnimal, animal_weight, bond_animal_weight
from .groups import GroupOracle, LampGroup, ball


def _as_value(x, arith):
    if arith == "rational":
        return Fraction(x)
    return complex(x) if isinstance(x, complex) else float(x)


@dataclass
class WreathMeasure:
    """Finitely supported signed measure on the lamplighter group."""

    group: GroupOracle
    lamp: LampGroup
    mode: str  # "site" | "bond"
    atoms: dict = field(default_factory=dict)  # (config, position) -> value

    def _check_compatible(self, other: "WreathMeasure"):
        if self.group is not other.group or self.lamp.order != other.lamp.order \
                or self.mode != other.mode:
            raise ValueError("measures live on different wreath products")

    def copy(self) -> "WreathMeasure":
        return WreathMeasure(self.group, self.lamp, self.mode, dict(self.atoms))

    def value_at_identity(self):
        return self.atoms.get((frozenset(), self.group.identity), 0)

    def total_mass(self):
        return sum(self.atoms.values())

    def l1_norm(self):
        return sum(abs(v) for v in self.atoms.values())

    def scale(self, c) -> "WreathMeasure":
        return WreathMeasure(self.group, self.lamp, self.mode,
                             {k: c * v for k, v in self.atoms.items()})

    def add(self, other: "WreathMeasure") -> "WreathMeasure":
        self._check_compatible(other)
        out = dict(self.atoms)
        for k, v in other.atoms.items():
            w = out.get(k, 0) + v
            if w == 0:
                out.pop(k, None)
            else:
                out[k] = w
        return WreathMeasure(self.group, self.lamp, self.mode, out)

    def sub(self, other: "WreathMeasure") -> "WreathMeasure":
        return self.add(other.scale(-1))

    def is_zero(self, tol=0) -> bool:
        if tol == 0:
            return not self.atoms
        return all(abs(v) <= tol for v in self.atoms.values())

    def reflect(self) -> "WreathMeasure":
        """Pushforward under group inversion, with complex conjugation."""
        g, h = self.group, self.lamp
        out = {}
        for (cfg, pos), v in self.atoms.items():
            ipos = g.inverse(pos)
            newcfg = []
            for key, lamp in cfg:
                newcfg.append((self._shift_key(ipos, key), h.inv(lamp)))
            w = v.conjugate() if isinstance(v, complex) else v
            out[(frozenset(newcfg), ipos)] = w
        return WreathMeasure(g, h, self.mode, out)

    def _shift_key(self, gkey, key):
        g = self.group
        if self.mode == "site":
            return g.multiply(gkey, key)
        return g.edge_key(g.multiply(gkey, key[0]), g.multiply(gkey, key[1]))

    def point_str(self, point) -> str:
        cfg, pos = point
        g = self.group
        if self.mode == "site":
            items = sorted(((g.key_str(k), l) for k, l in cfg))
        else:
            items = sorted(((g.edge_str(k), l) for k, l in cfg))
        body = ";".join(f"{k}:{l}" for k, l in items)
        return f"[{body}]@{g.key_str(pos)}"

    def to_json(self):
        rows = []
        for point, v in sorted(self.atoms.items(), key=lambda kv: self.point_str(kv[0])):
            rows.append({"atom": self.point_str(point), "value": format_scalar(v)})
        return rows


def format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return format(float(v), ".17g")


def delta(g: GroupOracle, h: LampGroup, mode="site") -> WreathMeasure:
    return WreathMeasure(g, h, mode, {(frozenset(), g.identity): Fraction(1)})


def convolve(a: WreathMeasure, b: WreathMeasure) -> WreathMeasure:
    """(a*b)(w) = sum over u.v = w of a(u) b(v)."""
    a._check_compatible(b)
    g, h = a.group, a.lamp
    mode = a.mode
    out = {}
    for (cfg1, g1), v1 in a.atoms.items():
        shifted_cache = {}
        for (cfg2, g2), v2 in b.atoms.items():
            if cfg2 in shifted_cache:
                merged = shifted_cache[cfg2]
            else:
                merged = tuple((a._shift_key(g1, k), l) for k, l in cfg2)
                shifted_cache[cfg2] = merged
            combo = dict(cfg1)
            for k, l in merged:
                if k in combo:
                    prod = h.mul(combo[k], l)
                    if prod == 0:
                        del combo[k]
                    else:
                        combo[k] = prod
                else:
                    combo[k] = l
            point = (frozenset(combo.items()), g.multiply(g1, g2))
            w = out.get(point, 0) + v1 * v2
            if w == 0:
                out.pop(point, None)
            else:
                out[point] = w
    return WreathMeasure(g, h, mode, out)


def convolve_many(measures) -> WreathMeasure:
    it = iter(measures)
    acc = next(it).copy()
    for m in it:
        acc = convolve(acc, m)
    return acc


def nu_at(g: GroupOracle, h: LampGroup, key, mode="site", arith="rational") -> WreathMeasure:
    """Equidistribution of the lamp at one site (or edge): the projection nu_x."""
    w = _as_value(Fraction(1, h.order), arith)
    atoms = {}
    for lamp in range(h.order):
        cfg = frozenset() if lamp == 0 else frozenset({(key, lamp)})
        atoms[(cfg, g.identity)] = w
    return WreathMeasure(g, h, mode, atoms)


def nubar_at(g: GroupOracle, h: LampGroup, key, mode="site", arith="rational") -> WreathMeasure:
    """delta - nu_x, the complementary projection."""
    one = _as_value(1, arith)
    d = WreathMeasure(g, h, mode, {(frozenset(), g.identity): one})
    return d.sub(nu_at(g, h, key, mode, arith))


def embed_group_vector(g: GroupOracle, h: LampGroup, f: dict, mode="site") -> WreathMeasure:
    """Embed f: G -> scalars as sum of f(x) * delta_{(all off, x)}."""
    atoms = {}
    for key, v in f.items():
        if v != 0:
            atoms[(frozenset(), key)] = v
    return WreathMeasure(g, h, mode, atoms)


def build_mu_tilde(g: GroupOracle, h: LampGroup, arith="rational") -> WreathMeasure:
    """Switch-walk-switch law: nu at the identity, one mu-step, nu again."""
    nu = nu_at(g, h, g.identity, "site", arith)
    mu = embed_group_vector(
        g, h, {s: _as_value(w, arith) for s, w in _merged_generators(g)}, "site"
    )
    return convolve(convolve(nu, mu), nu)


def build_mu_tilde_edge(g: GroupOracle, h: LampGroup, arith="rational") -> WreathMeasure:
    """Edge-lamp walk law: mass mu(s)/|H| on lamp states of the crossed edge."""
    atoms = {}
    inv_h = _as_value(Fraction(1, h.order), arith)
    for s, w in _merged_generators(g):
        e = g.edge_key(g.identity, s)
        wv = _as_value(w, arith) * inv_h
        for lamp in range(h.order):
            cfg = frozenset() if lamp == 0 else frozenset({(e, lamp)})
            point = (cfg, s)
            atoms[point] = atoms.get(point, 0) + wv
    return WreathMeasure(g, h, "bond", atoms)


def _merged_generators(g: GroupOracle):
    acc = {}
    for s, w in g.generators:
        acc[s] = acc.get(s, Fraction(0)) + w
    return sorted(acc.items(), key=lambda kv: g.sort_key(kv[0]))


def projection_measure(a, h: LampGroup, g: GroupOracle, arith="rational") -> WreathMeasure:
    """The projection measure of an animal: nu on the animal, nubar on its boundary.

    Its value at the identity equals the animal's percolation weight at
    p = 1/|H|.
    """
    if isinstance(a, Animal):
        mode = "site"
        inner = a.vertices
        outer = a.boundary
    elif isinstance(a, BondAnimal):
        mode = "bond"
        inner = a.edges
        outer = a.boundary_edges
    else:
        raise TypeError("expected Animal or BondAnimal")
    acc = delta(g, h, mode)
    if arith != "rational":
        acc = WreathMeasure(g, h, mode, {(frozenset(), g.identity): _as_value(1, arith)})
    for key in inner:
        acc = convolve(acc, nu_at(g, h, key, mode, arith))
    for key in outer:
        acc = convolve(acc, nubar_at(g, h, key, mode, arith))
    return acc


def _projection_tags(a, g: GroupOracle):
    """Per-site factor of nu_{A,dA}: +1 for nu_x (inside), -1 for nubar_x."""
    if isinstance(a, Animal):
        tags = {g.key_str(x): 1 for x in a.vertices}
        tags.update({g.key_str(x): -1 for x in a.boundary})
    else:
        tags = {g.edge_str(e): 1 for e in a.edges}
        tags.update({g.edge_str(e): -1 for e in a.boundary_edges})
    return tags


def check_orthogonality(a, b, h: LampGroup, g: GroupOracle, arith="rational",
                        brute_sites=12) -> bool:
    """Whether nu_{A,dA} * nu_{B,dB} = 0, exactly.

    Both projections are products of commuting per-site factors nu_x / nubar_x
    at the identity position, so the convolution vanishes exactly when some
    site pairs nu with nubar (nu * nubar = 0).  Pairs with few enough sites
    are cross-checked against the explicit convolution.
    """
    ta = _projection_tags(a, g)
    tb = _projection_tags(b, g)
    vanishes = any(ta[k] * tb.get(k, 0) < 0 for k in ta)
    if len(ta) + len(tb) <= brute_sites:
        conv = convolve(projection_measure(a, h, g, arith),
                        projection_measure(b, h, g, arith))
        if conv.is_zero() != vanishes:
            raise AssertionError("factorized orthogonality disagrees with convolution")
    return vanishes


def apply_pa(a, g: GroupOracle, f: dict, arith="rational") -> dict:
    """One absorbing-walk step applied to a vector supported on the animal."""
    if isinstance(a, Animal):
        inside = set(a.vertices)

        def allowed(x, y):
            return x in inside and y in inside
    else:
        eset = set(a.edges)

        def allowed(x, y):
            return g.edge_key(x, y) in eset

    out = {}
    for x, v in f.items():
        if v == 0:
            continue
        for s, w in g.generators:
            y = g.multiply(x, s)
            if allowed(x, y):
                out[y] = out.get(y, 0) + _as_value(w, arith) * v
    return {k: v for k, v in out.items() if v != 0}


def intertwine_check(a, f: dict, mu_tilde: WreathMeasure, g: GroupOracle,
                     h: LampGroup, arith="rational"):
    """L1 residual of: projection * f * mu_tilde = projection * (P_A f).

    Zero exactly in rational mode; below 1e-13 in double mode.  The empty
    animal is handled by its own identity nubar_e * mu_tilde = 0.
    """
    mode = mu_tilde.mode
    proj = projection_measure(a, h, g, arith)
    if isinstance(a, Animal) and a.is_empty:
        return convolve(proj, mu_tilde).l1_norm()
    fm = embed_group_vector(g, h, f, mode)
    lhs = convolve(convolve(proj, fm), mu_tilde)
    paf = embed_group_vector(g, h, apply_pa(a, g, f, arith), mode)
    rhs = convolve(proj, paf)
    return lhs.sub(rhs).l1_norm()


@dataclass
class IsometryProducts:
    status: str  # "ok" | "torsion obstruction"
    products: list  # matrix of WreathMeasure, or empty on obstruction
    projection: WreathMeasure


def stabilizer(a, g: GroupOracle):
    """Brute-force left stabilizer {z : zA = A} of the animal's vertex set."""
    vset = set(a.vertices)
    if not vset:
        return [g.identity]
    cands = {g.multiply(x, g.inverse(y)) for x in vset for y in vset}
    out = [z for z in cands if {g.multiply(z, v) for v in vset} == vset]
    return sorted(out, key=g.sort_key)


def translates_distinct(a: Animal, g: GroupOracle) -> bool:
    seen = set()
    for y in a.vertices:
        iy = g.inverse(y)
        t = frozenset(g.key_str(g.multiply(iy, v)) for v in a.vertices)
        if t in seen:
            return False
        seen.add(t)
    return True


def partial_isometry_products(a: Animal, h: LampGroup, g: GroupOracle,
                              eigenvectors, arith="double") -> IsometryProducts:
    """Products S*_x S_y as measures for an eigenbasis of the animal walk.

    Contract (when all translates of the animal by its elements are distinct,
    always true over torsion-free groups): the diagonal equals the animal's
    projection measure and off-diagonal entries vanish.  Otherwise reports a
    torsion obstruction instead of asserting the identity.
    """
    proj = projection_measure(a, h, g, arith)
    if not translates_distinct(a, g):
        return IsometryProducts("torsion obstruction", [], proj)
    verts = a.vertices
    embeds = []
    refls = []
    for col in eigenvectors:
        f = {v: col[i] for i, v in enumerate(verts)}
        fm = embed_group_vector(g, h, f, "site")
        embeds.append(fm)
        refls.append(fm.reflect())
    n = len(embeds)
    mat = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            m = convolve(convolve(convolve(proj, embeds[y]), refls[x]), proj)
            mat[x][y] = m
    return IsometryProducts("ok", mat, proj)


@dataclass
class FourierIsometry:
    char_index: int
    orbit_index: int
    eigenvalue: float
    measure: WreathMeasure


@dataclass
class StabilizerDiagonalization:
    stabilizer: list
    orbit_reps: list
    isometries: list  # FourierIsometry
    projection_sum_target: WreathMeasure  # sum of translate projections


def _p_step(g: GroupOracle, x, y) -> float:
    total = Fraction(0)
    ix = g.inverse(x)
    step = g.multiply(ix, y)
    for s, w in g.generators:
        if g.key_str(s) == g.key_str(step):
            total += w
    return float(total)


def abelian_stabilizer_diagonalize(a: Animal, g: GroupOracle, h: LampGroup):
    """Character-basis diagonalization of the animal walk for cyclic stabilizers.

    All stabilizers arising from the supported base groups are cyclic (they
    are trivial on the torsion-free groups and subgroups of a cycle on Zn),
    so characters suffice and every block is one-dimensional.
    Returns partial isometries whose measures m satisfy m * mu_tilde =
    lambda * m, m * m~ * m = m, and whose range projections sum to the
    translate-projection sum.
    """
    stab = stabilizer(a, g)
    order = len(stab)
    gen = _cyclic_generator(stab, g)
    if gen is None:
        raise ValueError("stabilizer is not cyclic; out of supported scope")
    # stabilizer elements as powers of the generator
    powers = [g.identity]
    for _ in range(order - 1):
        powers.append(g.multiply(powers[-1], gen))
    # orbits of the animal's vertices under left multiplication
    verts = list(a.vertices)
    reps = []
    assigned = set()
    for v in sorted(verts, key=g.sort_key):
        kv = g.key_str(v)
        if kv in assigned:
            continue
        reps.append(v)
        for z in powers:
            assigned.add(g.key_str(g.multiply(z, v)))
    m = len(reps)
    proj = projection_measure(a, h, g, "double")
    omega = np.exp(2j * np.pi / order)
    isometries = []
    for j in range(order):
        chi = [omega ** (j * t) for t in range(order)]
        M = np.zeros((m, m), dtype=complex)
        for k in range(m):
            for l in range(m):
                M[k, l] = sum(
                    chi[t] * _p_step(g, reps[l], g.multiply(powers[t], reps[k]))
                    for t in range(order)
                )
        if np.max(np.abs(M - M.conj().T)) > 1e-10:
            raise ValueError("character block is not hermitian")
        evals, U = np.linalg.eigh(M)
        chim = WreathMeasure(
            g, h, "site",
            {(frozenset(), powers[t]): chi[t] for t in range(order)},
        )
        base = convolve(proj, chim)
        for k in range(m):
            acc = None
            for l in range(m):
                c = U[l, k] / order
                if c == 0:
                    continue
                term = convolve(
                    base,
                    WreathMeasure(g, h, "site", {(frozenset(), reps[l]): complex(c)}),
                )
                acc = term if acc is None else acc.add(term)
            isometries.append(FourierIsometry(j, k, float(evals[k]), acc))
    target = None
    for r in reps:
        pb = projection_measure(make_translate(a, g, r), h, g, "double")
        target = pb if target is None else target.add(pb)
    return StabilizerDiagonalization(stab, reps, isometries, target)


def make_translate(a: Animal, g: GroupOracle, y) -> Animal:
    from .animals import make_site_animal

    iy = g.inverse(y)
    return make_site_animal(g, [g.multiply(iy, v) for v in a.vertices])


def _cyclic_generator(stab, g: GroupOracle):
    order = len(stab)
    keys = {g.key_str(z) for z in stab}
    for z in stab:
        acc = g.identity
        gen_ok = True
        seen = set()
        for _ in range(order):
            acc = g.multiply(acc, z)
            ks = g.key_str(acc)
            if ks not in keys or ks in seen:
                gen_ok = False
                break
            seen.add(ks)
        if gen_ok and len(seen) == order and g.key_str(acc) == g.key_str(g.identity):
            return z
    return None


def sinc_measure(p, k: int) -> float:
    """Values of the idempotent signed measure on Z with box characteristic
    function: p at zero, sin(k pi p)/(k pi) elsewhere."""
    p = float(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if k == 0:
        return p
    return np.sin(k * np.pi * p) / (k * np.pi)


def sinc_selfconv_residual(p, k: int, cutoff: int) -> float:
    """|sum_{|j|<=cutoff} nu(j) nu(k-j) - nu(k)| for the sinc measure."""
    total = sum(sinc_measure(p, j) * sinc_measure(p, k - j)
                for j in range(-cutoff, cutoff + 1))
    return abs(total - sinc_measure(p, k))


def animal_projection_value(a, h: LampGroup):
    """Closed-form value of the projection measure at the identity."""
    p = h.p
    if isinstance(a, Animal):
        return animal_weight(a, p)
    return bond_animal_weight(a, p)
