from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov.errors import ValidationError
from okounkov.geomcore import convex_hull, minkowski_sum, polytope_volume
from okounkov.toric import (
    FlagChart,
    InvariantDivisor,
    PicardSplitting,
    ToricModel,
    divisor_polytope,
    ehrhart_count,
    ehrhart_polynomial,
    global_cone,
    global_fibre,
    global_orthant_check,
    hirzebruch,
    normalize_on_chart,
    p1xp1,
    projective_line,
    projective_plane,
    toric_okounkov_body,
    volume_consistency,
)

F = Fraction
D = InvariantDivisor.of


def projective_space(d):
    rays = [tuple(int(i == j) for j in range(d)) for i in range(d)] + [tuple([-1] * d)]
    cones = [tuple(j for j in range(d + 1) if j != i) for i in range(d + 1)]
    return ToricModel(d, tuple(rays), tuple(cones))


def simplex(d, s=1):
    return convex_hull([(0,) * d] + [tuple(s * int(i == j) for j in range(d)) for i in range(d)], d)


def box(a, b):
    return convex_hull([(0, 0), (a, 0), (0, b), (a, b)], 2)


def test_p2_polytope_of_multiple_of_hyperplane():
    assert divisor_polytope(projective_plane(), D(0, 0, 3)) == simplex(2, 3)


def test_p1xp1_polytope_is_box():
    assert divisor_polytope(p1xp1(), D(0, 0, 2, 5)) == box(2, 5)


def test_zero_divisor_gives_point():
    P = divisor_polytope(projective_plane(), D(0, 0, 0))
    assert list(P.vertices) == [(0, 0)]


def test_non_complete_fan_is_rejected():
    T = ToricModel(2, ((1, 0), (0, 1)), ((0, 1),))
    with pytest.raises(ValidationError) as exc:
        divisor_polytope(T, D(1, 1))
    assert "divisor not big/complete fan required" in str(exc.value)


def test_singular_fan_rejected():
    with pytest.raises(ValidationError) as exc:
        ToricModel(2, ((1, 0), (1, 2), (-1, -1)), ((0, 1), (1, 2), (2, 0)))
    assert exc.value.reason == "singular-fan"


def test_non_primitive_ray_rejected():
    with pytest.raises(ValidationError):
        ToricModel(1, ((2,), (-1,)), ((0,), (1,)))


def test_normalize_on_chart():
    T = projective_plane()
    sigma = FlagChart((0, 1))
    assert normalize_on_chart(T, D(1, 0, 0), sigma) == D(0, 0, 1)
    assert normalize_on_chart(T, D(0, 0, 4), sigma) == D(0, 0, 4)
    # P_D' is P_D translated by -u
    P = divisor_polytope(T, D(1, 0, 0))
    Q = divisor_polytope(T, D(0, 0, 1))
    assert P.translate((1, 0)) == Q


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_hyperplane_body_is_simplex(d):
    T = projective_space(d)
    L = InvariantDivisor(tuple([0] * d + [1]))
    body = toric_okounkov_body(T, L, FlagChart(tuple(range(d))))
    assert not body.degenerate
    assert body.polytope == simplex(d)


def test_body_of_p1xp1_and_p1():
    assert toric_okounkov_body(p1xp1(), D(0, 0, 3, 1), FlagChart((0, 1))).polytope == box(3, 1)
    body = toric_okounkov_body(projective_line(), D(0, 2), FlagChart((0,))).polytope
    assert sorted(body.vertices) == [(0,), (2,)]


def test_non_big_class_is_degenerate():
    body = toric_okounkov_body(p1xp1(), D(0, 0, 2, 0), FlagChart((0, 1)))
    assert body.degenerate


def test_ehrhart_counts():
    T = projective_plane()
    assert [ehrhart_count(T, D(0, 0, 1), m) for m in range(6)] == [(m + 1) * (m + 2) // 2 for m in range(6)]
    S = p1xp1()
    assert [ehrhart_count(S, D(0, 0, 1, 2), m) for m in range(6)] == [(m + 1) * (2 * m + 1) for m in range(6)]
    assert ehrhart_polynomial(S, D(0, 0, 1, 2)) == [1, 3, 2]


def test_hirzebruch_volume_and_counts():
    T = hirzebruch(1)
    L = D(0, 0, 1, 2)
    assert [ehrhart_count(T, L, m) for m in (1, 2, 3)] == [9, 25, 49]
    assert ehrhart_polynomial(T, L) == [1, 4, 4]
    assert volume_consistency(T, L, FlagChart((0, 1))) == (4, 4)


def test_ehrhart_polynomial_needs_lattice_polytope():
    with pytest.raises(ValidationError):
        ehrhart_polynomial(projective_plane(), D(0, 0, F(1, 2)))


def test_picard_splitting_round_trip():
    T = hirzebruch(2)
    S = PicardSplitting(T, FlagChart((0, 1)))
    E = D(1, 2, 0, 3)
    assert S.Phi_inverse(S.Phi(E)) == E
    assert S.rank == 2


@pytest.mark.parametrize("T", [projective_plane(), p1xp1(), hirzebruch(1), hirzebruch(2)], ids=["P2", "F0", "F1", "F2"])
def test_global_orthant(T):
    sigma = FlagChart((0, 1))
    n = T.nrays
    samples = [
        InvariantDivisor(tuple([1] * n)),
        InvariantDivisor(tuple([0] * (n - 1) + [2])),
        InvariantDivisor(tuple([-1] + [1] * (n - 1))),
        InvariantDivisor(tuple([2] * (n - 1) + [-1])),
    ]
    classes = [InvariantDivisor(tuple([0, 0] + [1] * (n - 2))), InvariantDivisor(tuple([0, 0] + [2] * (n - 3) + [3]))]
    rep = global_orthant_check(T, sigma, samples, classes)
    assert rep.ok
    assert [inside for _, inside, _ in rep.membership] == [True, True, False, False]


def test_global_fibre_is_scaled_for_multiples():
    T = p1xp1()
    sigma = FlagChart((0, 1))
    C = global_cone(T, sigma)
    assert global_fibre(C, 2, (2, 3)) == box(2, 3)
    assert global_fibre(C, 2, (F(1, 2), 1)) == box(F(1, 2), 1)


big_pair = st.tuples(st.integers(1, 4), st.integers(1, 4))


@settings(max_examples=20, deadline=None)
@given(big_pair, st.integers(1, 4))
def test_homogeneity(ab, p):
    T, sigma = hirzebruch(1), FlagChart((0, 1))
    L = D(0, 0, ab[0], ab[0] + ab[1])
    body = toric_okounkov_body(T, L, sigma).polytope
    assert toric_okounkov_body(T, L * p, sigma).polytope == body.scale(p)


@settings(max_examples=20, deadline=None)
@given(big_pair, big_pair)
def test_minkowski_superadditivity(x, y):
    T, sigma = hirzebruch(1), FlagChart((0, 1))
    L1 = D(0, 0, x[0], x[0] + x[1])
    L2 = D(0, 0, y[0], y[0] + y[1])
    A = toric_okounkov_body(T, L1, sigma).polytope
    B = toric_okounkov_body(T, L2, sigma).polytope
    AB = toric_okounkov_body(T, L1 + L2, sigma).polytope
    assert minkowski_sum(A, B).issubset(AB)


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), big_pair)
def test_translation_invariance(u1, u2, ab):
    T, sigma = hirzebruch(1), FlagChart((0, 1))
    L = D(0, 0, ab[0], ab[0] + ab[1])
    # add div(χ^u): coefficient <u, v_i> on each ray
    shifted = L + InvariantDivisor(tuple(u1 * v[0] + u2 * v[1] for v in T.rays))
    assert toric_okounkov_body(T, shifted, sigma).polytope == toric_okounkov_body(T, L, sigma).polytope
    assert polytope_volume(divisor_polytope(T, shifted)) == polytope_volume(divisor_polytope(T, L))
