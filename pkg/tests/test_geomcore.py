from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov.errors import DegenerateError, GeometryError
from okounkov.geomcore import (
    LinearSubspace,
    PolyCone,
    Polytope,
    cone_meet_subspace,
    cone_over,
    cone_slice,
    convex_hull,
    lattice_points,
    minkowski_sum,
    polytope_volume,
    volume_report,
)

F = Fraction


def simplex(d):
    return convex_hull([(0,) * d] + [tuple(int(i == j) for j in range(d)) for i in range(d)], d)


def square(s=1):
    return convex_hull([(0, 0), (s, 0), (0, s), (s, s)], 2)


# -- examples ---------------------------------------------------------------------


def test_interior_point_is_dropped():
    P = convex_hull([(0, 0), (1, 0), (0, 1), (F(1, 4), F(1, 4))], 2)
    assert set(P.vertices) == {(0, 0), (1, 0), (0, 1)}
    assert P == simplex(2)


def test_unit_square():
    P = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
    assert len(P.vertices) == 4 and len(P.facets) == 4
    assert polytope_volume(P) == 1


def test_hull_of_degree_one_valuations_is_the_simplex():
    # valuation vectors of T_0, T_1, T_2 on P^2
    assert convex_hull([(0, 0), (1, 0), (0, 1)], 2) == Polytope.from_inequalities([(-1, 0), (0, -1), (1, 1)], [0, 0, 1], 2)


def test_empty_point_set():
    with pytest.raises(GeometryError, match="empty point set"):
        convex_hull([], 2)


def test_volumes():
    assert polytope_volume(square()) == 1
    for d in range(1, 5):
        assert polytope_volume(simplex(d)) == F(1, factorial(d))
    assert polytope_volume(convex_hull([(0, 0), (1, 0), (0, 5), (1, 3)], 2)) == 4


def test_degenerate_volume_is_flagged():
    seg = convex_hull([(0, 0), (1, 1)], 2)
    assert not seg.full_dimensional and seg.affine_dim == 1
    assert volume_report(seg) == (0, True)
    with pytest.raises(DegenerateError):
        polytope_volume(seg, strict=True)


def test_lattice_points():
    assert len(lattice_points(square().scale(2))) == 9
    for m in range(6):
        P = simplex(2).scale(m) if m else convex_hull([(0, 0)], 2)
        assert len(lattice_points(P)) == (m + 1) * (m + 2) // 2
    assert lattice_points(square()) == sorted(lattice_points(square()))


def test_unbounded_inequalities():
    with pytest.raises(GeometryError, match="polytope required"):
        Polytope.from_inequalities([(-1, 0), (0, -1)], [0, 0], 2)


def test_minkowski():
    assert minkowski_sum(square(), square()) == square(2)
    with pytest.raises(GeometryError):
        minkowski_sum(square(), simplex(3))


def test_cone_slices():
    assert cone_slice(PolyCone.from_rays([(0, 1), (3, 1)], 2), 1, 1) == convex_hull([(0,), (3,)], 1)
    C = PolyCone.from_rays([(0, 0, 1), (1, 0, 1), (0, 1, 1)], 3)
    assert cone_slice(C, 2, 1) == simplex(2)
    assert cone_slice(PolyCone.from_rays([(0, 1), (5, 1)], 2), 1, 1) == convex_hull([(0,), (5,)], 1)
    with pytest.raises(GeometryError, match="not graded"):
        cone_slice(PolyCone.from_rays([(1, 0), (0, 1)], 2), 1, 1)


def test_cone_meet_subspace():
    C = PolyCone.from_rays([(1, 0, 1), (0, 1, 1), (1, 1, 1)], 3)
    L = LinearSubspace.span([(1, 1, 0), (0, 0, 1)], 3)  # the plane x = y
    assert cone_meet_subspace(C, L) == PolyCone.from_rays([(1, 1), (1, 2)], 2)
    full = LinearSubspace.span([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert cone_meet_subspace(C, full) == C
    orth = PolyCone.from_rays([(1, 0), (0, 1)], 2)
    anti = LinearSubspace.span([(1, -1)], 2)
    assert cone_meet_subspace(orth, anti).rays == ()


def test_halfspace_round_trip():
    C = PolyCone.from_rays([(1, 0, 1), (0, 1, 1), (1, 1, 1), (0, 0, 1)], 3)
    assert PolyCone.from_halfspaces(C.halfspaces, 3) == C


# -- properties -----------------------------------------------------------------

coord = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def points(d, lo=3, hi=12):
    return st.lists(st.tuples(*[coord] * d), min_size=lo, max_size=hi)


@given(points(2) | points(3))
@settings(max_examples=60, deadline=None)
def test_hull_contains_inputs_and_vertices_are_inputs(pts):
    d = len(pts[0])
    P = convex_hull(pts, d)
    assert all(P.contains(p) for p in pts)
    assert set(P.vertices) <= {tuple(F(x) for x in p) for p in pts}
    # V -> H -> V round trip
    if P.full_dimensional:
        Q = Polytope.from_inequalities([n for n, _ in P.facets], [b for _, b in P.facets], d)
        assert set(Q.vertices) == set(P.vertices)


def _cbrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= q^(1/3) <= hi with hi - lo <= 2^-bits (q >= 0)."""
    scale = 1 << bits
    n = q.numerator * scale**3 // q.denominator
    r = _icbrt(n)
    return F(r, scale), F(r + 2, scale)


def _icbrt(n: int) -> int:
    """floor(n^(1/3)) by integer Newton iteration."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


@given(points(2, 3, 7), points(2, 3, 7))
@settings(max_examples=60, deadline=None)
def test_brunn_minkowski_plane(p, q):
    P, Q = convex_hull(p, 2), convex_hull(q, 2)
    a, b = polytope_volume(P), polytope_volume(Q)
    c = polytope_volume(minkowski_sum(P, Q))
    # sqrt(c) >= sqrt(a) + sqrt(b), squared twice
    e = c - a - b
    assert e >= 0 and e * e >= 4 * a * b


@given(points(3, 4, 7), points(3, 4, 7))
@settings(max_examples=25, deadline=None)
def test_brunn_minkowski_space(p, q):
    P, Q = convex_hull(p, 3), convex_hull(q, 3)
    a, b = polytope_volume(P), polytope_volume(Q)
    c = polytope_volume(minkowski_sum(P, Q))
    _, hi_c = _cbrt_bounds(c, 80)
    lo_a, _ = _cbrt_bounds(a, 80)
    lo_b, _ = _cbrt_bounds(b, 80)
    # a violation would show as a strict gap between certified brackets
    assert hi_c >= lo_a + lo_b


@given(st.integers(1, 6))
@settings(max_examples=6, deadline=None)
def test_ehrhart_interpolation_of_a_lattice_polygon(extra):
    P = convex_hull([(0, 0), (2, 0), (3, 1), (0, 2)], 2)
    counts = [1] + [len(lattice_points(P.scale(m))) for m in (1, 2)]
    # L(m) = c2 m^2 + c1 m + 1 through m = 0, 1, 2
    c2 = F(counts[2] - 2 * counts[1] + counts[0], 2)
    c1 = counts[1] - counts[0] - c2
    assert c2 == polytope_volume(P)
    m = 2 + extra
    assert len(lattice_points(P.scale(m))) == c2 * m * m + c1 * m + 1


@given(st.fractions(min_value=F(1, 5), max_value=5, max_denominator=7))
@settings(max_examples=30, deadline=None)
def test_cone_over_slices_to_dilates(m):
    P = convex_hull([(0, 0), (1, 0), (F(1, 2), F(3, 2))], 2)
    assert cone_slice(cone_over(P), 2, m) == P.scale(m)
