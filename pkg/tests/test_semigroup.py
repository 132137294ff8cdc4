from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov.errors import HypothesisError, ValidationError
from okounkov.semigroup import (
    GradedSemigroup,
    check_admissibility,
    curve_semigroup,
    density_sequence,
    fujita_gap,
    fujita_limit,
    khovanskii_translate,
    kfold_sumset_size,
    okounkov_body,
    ray_fiber_check,
    subspace_cone_check,
    translate_holds,
)

from _instances import subspace_instances

F = Fraction


def test_index_three_semigroup_is_not_admissible():
    g = GradedSemigroup(1, generators=[(0, 1), (3, 1)])
    assert [len(g.degree_slice(m)) for m in range(1, 7)] == [2, 3, 4, 5, 6, 7]
    assert sorted(g.degree_slice(2)) == [(0,), (3,), (6,)]
    rep = check_admissibility(g)
    assert rep.has_zero and rep.is_bounded and rep.bound == 3
    assert not rep.generates_full_group and rep.index == 3
    with pytest.raises(HypothesisError):
        okounkov_body(g)
    with pytest.raises(HypothesisError):
        density_sequence(g, 5)


def test_admissible_generators_give_exact_body():
    g = GradedSemigroup(1, generators=[(0, 1), (1, 1)])
    rep = check_admissibility(g)
    assert rep.ok and rep.index == 1
    body = okounkov_body(g)
    assert body.exact
    assert sorted(body.polytope.vertices) == [(0,), (1,)]
    seq, vol = density_sequence(g, 10)
    assert vol == 1
    assert seq[-1] == (10, F(11, 10))


def test_missing_zero_detected():
    g = GradedSemigroup(1, generators=[(1, 0), (0, 1)])
    rep = check_admissibility(g)
    assert not rep.has_zero and not rep.ok


def test_curve_semigroup_body_and_density():
    g = curve_semigroup(5, 2)
    body = okounkov_body(g)
    assert body.exact
    assert sorted(body.polytope.vertices) == [(0,), (5,)]
    seq, vol = density_sequence(g, 40)
    assert vol == 5
    # #Γ_m = 5m - 1
    assert seq[39] == (40, F(199, 40))


def test_curve_semigroup_rejects_low_degree():
    with pytest.raises(ValidationError):
        curve_semigroup(2, 1)


def test_slices_table_additivity_checked():
    bad = {0: [(0,)], 1: [(0,), (1,)], 2: [(0,), (2,)]}
    with pytest.raises(ValidationError):
        GradedSemigroup(1, slices=bad, max_degree=2)


def test_slices_table_body_is_hull_of_scaled_slices():
    slices = {m: [(k,) for k in range(2 * m + 1)] for m in range(0, 7)}
    g = GradedSemigroup(1, slices=slices, max_degree=6)
    body = okounkov_body(g)
    assert not body.exact
    assert sorted(body.polytope.vertices) == [(0,), (2,)]


def test_numerical_semigroup_translate():
    g = GradedSemigroup(0, generators=[(3,), (5,)])
    res = khovanskii_translate(g, 200)
    assert res.z == (8,) and res.verified_in_box
    assert translate_holds(g, (8,), 200)
    assert not translate_holds(g, (7,), 200)


@pytest.mark.parametrize(
    "gens,z",
    [
        ([(0, 1), (1, 2)], (0, 0)),
        ([(2, 0), (3, 0), (0, 1), (1, 1)], (0, 1)),
    ],
)
def test_two_dimensional_translates(gens, z):
    g = GradedSemigroup(1, generators=gens)
    res = khovanskii_translate(g, 60)
    assert res.z == z and res.verified_in_box


def test_translate_needs_full_group():
    with pytest.raises(HypothesisError):
        khovanskii_translate(GradedSemigroup(0, generators=[(2,), (4,)]), 20)


def test_kfold_sumset_size():
    assert kfold_sumset_size([(0,), (3,)], 4) == 5
    assert kfold_sumset_size([(0, 0), (1, 0), (0, 1)], 3) == 10


def test_fujita_curve():
    g = curve_semigroup(3, 0)
    # Γ_p is all of [0, 3p] so nothing is lost
    assert fujita_limit(g, 4) == 3
    assert fujita_gap(g, 4, 5) == F(61, 20)


def test_ray_fiber_equality_without_finite_index():
    g = GradedSemigroup(2, 2, generators=[(1, 0, 1, 0), (0, 1, 0, 1), (1, 1, 1, 1)])
    r = ray_fiber_check(g, (1, 1), 8, 32)
    assert r.equal
    assert not r.hypothesis_met and r.reason == "group-not-finite-index"


def _half_plane_semigroup():
    def rule(m):
        if m == (0, 0):
            return [(0,)]
        if m[1] == 0:
            return []
        return [(k,) for k in range(m[0] + m[1] + 1)]

    return GradedSemigroup(
        1,
        2,
        rule=rule,
        max_degree=64,
        closure_rays=[(0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1)],
        check_degree=6,
    )


def test_ray_on_boundary_of_support_fails():
    g = _half_plane_semigroup()
    r = ray_fiber_check(g, (1, 0), 8, 32)
    assert not r.hypothesis_met and r.reason == "subspace-misses-interior"
    assert r.equal is False
    ok = ray_fiber_check(g, (1, 1), 8, 32)
    assert ok.hypothesis_met and ok.equal


def test_subspace_checks_random():
    met = 0
    for g, L in subspace_instances(40):
        r = subspace_cone_check(g, L, 8, 64)
        if r.hypothesis_met:
            met += 1
            assert r.equal
    assert met > 10


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 3), st.integers(1, 3)), min_size=1, max_size=4),
    st.integers(1, 5),
    st.integers(1, 5),
)
def test_slices_are_additive(gens, k, l):
    g = GradedSemigroup(1, generators=gens)
    a, b, c = set(g.degree_slice(k)), set(g.degree_slice(l)), set(g.degree_slice(k + l))
    assert {(x[0] + y[0],) for x in a for y in b} <= c


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(2, 9), min_size=2, max_size=3))
def test_translate_contains_cone_points(gens):
    if reduce(gcd, gens) != 1:
        return
    g = GradedSemigroup(0, generators=[(x,) for x in gens])
    res = khovanskii_translate(g, 120)
    assert res.z is not None
    z = res.z[0]
    elems = {p[0] for p in map(tuple, np.argwhere(g.elements_in_box(120)))}
    assert all(x in elems for x in range(z, 121))
    assert z == 0 or (z - 1) not in elems
