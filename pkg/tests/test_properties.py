"""Property-based checks of the group oracles and the convolution algebra."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from lamperc.groups import make_group
from lamperc.wreath import WreathMeasure, convolve, delta
from lamperc.groups import cyclic_lamp_group

G = make_group("Z")
H = cyclic_lamp_group(2)

words = st.lists(st.sampled_from([1, -1]), max_size=6)


def to_elem(word):
    x = G.identity
    for s in word:
        x = G.multiply(x, s)
    return x


@given(words, words, words)
@settings(max_examples=60, deadline=None)
def test_associativity(wa, wb, wc):
    a, b, c = to_elem(wa), to_elem(wb), to_elem(wc)
    assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))


@given(words)
@settings(max_examples=60, deadline=None)
def test_inverse(wa):
    a = to_elem(wa)
    assert G.multiply(a, G.inverse(a)) == G.identity
    assert G.multiply(G.inverse(a), a) == G.identity


points = st.lists(
    st.tuples(
        st.lists(st.tuples(st.integers(-2, 2), st.just(1)),
                 max_size=2, unique_by=lambda t: t[0]),
        st.integers(-2, 2),
        st.fractions(min_value=-2, max_value=2),
    ),
    max_size=3,
)


def to_measure(spec):
    atoms = {}
    for cfg, pos, val in spec:
        key = (frozenset(cfg), pos)
        w = atoms.get(key, Fraction(0)) + val
        if w:
            atoms[key] = w
        else:
            atoms.pop(key, None)
    return WreathMeasure(G, H, "site", atoms)


@given(points, points, points)
@settings(max_examples=40, deadline=None)
def test_convolution_associative(sa, sb, sc):
    a, b, c = to_measure(sa), to_measure(sb), to_measure(sc)
    lhs = convolve(convolve(a, b), c)
    rhs = convolve(a, convolve(b, c))
    assert lhs.sub(rhs).is_zero()


@given(points, points, points)
@settings(max_examples=40, deadline=None)
def test_convolution_bilinear(sa, sb, sc):
    a, b, c = to_measure(sa), to_measure(sb), to_measure(sc)
    lhs = convolve(a, b.add(c))
    rhs = convolve(a, b).add(convolve(a, c))
    assert lhs.sub(rhs).is_zero()


@given(points)
@settings(max_examples=40, deadline=None)
def test_delta_unit_and_reflect_involution(sa):
    a = to_measure(sa)
    d = delta(G, H)
    assert convolve(d, a).sub(a).is_zero()
    assert convolve(a, d).sub(a).is_zero()
    assert a.reflect().reflect().sub(a).is_zero()
