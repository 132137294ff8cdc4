from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov import linalg

mat3 = st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3)


def test_inertia_of_diagonal_forms():
    assert linalg.inertia([[1, 0, 0], [0, -1, 0], [0, 0, -1]]) == (1, 2, 0)
    assert linalg.inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert linalg.inertia([[1, 1], [1, 1]]) == (1, 0, 1)


def test_lattice_index():
    assert linalg.lattice_index([(0, 2)], 2) is None
    assert linalg.lattice_index([(2, 0), (0, 3)], 2) == 6
    assert linalg.lattice_index([(0, 1), (1, 1)], 2) == 1
    assert linalg.lattice_index([(2, 0), (3, 0), (0, 1)], 2) == 1


def test_primitive():
    assert linalg.primitive([Fraction(1, 2), Fraction(3, 4)]) == (2, 3)
    assert linalg.primitive([0, -6, 4]) == (0, -3, 2)


@given(mat3)
@settings(max_examples=100, deadline=None)
def test_nullspace_and_rank(m):
    ns = linalg.nullspace(m, 3)
    assert linalg.rank(m) + len(ns) == 3
    for v in ns:
        assert all(linalg.dot(r, v) == 0 for r in m)


@given(mat3)
@settings(max_examples=100, deadline=None)
def test_inverse_and_det(m):
    d = linalg.det(m)
    if d == 0:
        return
    inv = linalg.inverse(m)
    for i in range(3):
        for j in range(3):
            assert sum(Fraction(m[i][k]) * inv[k][j] for k in range(3)) == (i == j)
    assert linalg.det(inv) == 1 / d
