"""Exact rational polyhedral geometry.

Polytopes and pointed cones carry both their generator and inequality
descriptions.  Conversion between the two is an incremental double
description over the integers; everything is exact (``Fraction`` and
``int``), there is no floating point in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import GeometryError, DegenerateError
from .linalg import Vector, dot, primitive, vec

__all__ = [
    "Polytope",
    "PolyCone",
    "LinearSubspace",
    "convex_hull",
    "polytope_volume",
    "lattice_points",
    "minkowski_sum",
    "cone_slice",
    "cone_meet_subspace",
]


# ---------------------------------------------------------------------------
# double description core


def _extreme_rays(rows: Sequence[Sequence], k: int) -> list[tuple[int, ...]]:
    """Extreme rays of {z in Q^k : a . z >= 0 for every row a}.

    ``rows`` must have rank k, which makes the cone pointed.
    """
    A = [primitive(r) for r in rows]
    A = [a for a in A if any(a)]
    # a simplicial start from k independent rows
    chosen: list[int] = []
    basis: list[tuple[int, ...]] = []
    for i, a in enumerate(A):
        if linalg.rank(basis + [a]) > len(basis):
            basis.append(a)
            chosen.append(i)
            if len(basis) == k:
                break
    # rows that are extreme in coordinate directions first keeps the
    # intermediate ray sets small
    order = sorted(range(len(A)), key=lambda i: -max(abs(x) for x in A[i]))
    if len(basis) < k:
        raise GeometryError("constraint system does not define a pointed cone")
    inv = linalg.inverse(basis)
    rays: list[tuple[tuple[int, ...], int]] = []
    for j in range(k):
        col = [inv[i][j] for i in range(k)]
        zero = 0
        for pos, ci in enumerate(chosen):
            if dot(A[ci], col) == 0:
                zero |= 1 << ci
        rays.append((primitive(col), zero))
    chosen_set = set(chosen)
    for i in order:
        a = A[i]
        if i in chosen_set:
            continue
        bit = 1 << i
        vals = [sum(x * y for x, y in zip(a, r)) for r, _ in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        if not neg:
            rays = [(r, z | bit) if vals[j] == 0 else (r, z) for j, (r, z) in enumerate(rays)]
            continue
        new: list[tuple[tuple[int, ...], int]] = []
        for p in pos:
            rp, zp = rays[p]
            for n in neg:
                rn, zn = rays[n]
                common = zp & zn
                if common.bit_count() < k - 2:
                    continue
                adjacent = True
                for j, (_, zj) in enumerate(rays):
                    if j != p and j != n and (zj & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[p], vals[n]
                r = tuple(vp * x - vn * y for x, y in zip(rn, rp))
                new.append((primitive(r), common | bit))
        kept = [(r, z | bit) if vals[j] == 0 else (r, z) for j, (r, z) in enumerate(rays) if vals[j] >= 0]
        rays = kept + new
    out = []
    seen = set()
    for r, _ in rays:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def _independent_subset(vectors: Sequence[Sequence], n: int) -> list:
    picked: list = []
    for v in vectors:
        if linalg.rank(picked + [v]) > len(picked):
            picked.append(v)
            if len(picked) == n:
                break
    return picked


def _cone_from_generators(gens: Sequence[Sequence], n: int):
    """V -> H for the cone spanned by ``gens`` in R^n.

    Returns (rays, facets, equations): irredundant primitive rays, primitive
    facet normals f with f . x >= 0 chosen inside the linear span, and a basis
    of primitive equation normals e with e . x = 0.
    """
    gens = [primitive(g) for g in gens]
    gens = [g for g in gens if any(g)]
    span = [primitive(b) for b in linalg.row_basis(_independent_subset(gens, n))]
    k = len(span)
    equations = [primitive(e) for e in linalg.nullspace(span, n)] if k < n else []
    if k == 0:
        return [], [], equations
    coords = [tuple(sum(x * y for x, y in zip(b, g)) for b in span) for g in gens]
    zs = _extreme_rays(coords, k)
    facets = []
    for z in zs:
        y = [sum(z[i] * span[i][c] for i in range(k)) for c in range(n)]
        facets.append(primitive(y))
    facets = sorted(set(facets))
    rays = []
    seen = set()
    for g in gens:
        if g in seen:
            continue
        tight = [f for f in facets if sum(a * b for a, b in zip(f, g)) == 0]
        if len(tight) < k - 1:
            continue
        if linalg.rank(tight) == k - 1 if tight else k == 1:
            seen.add(g)
            rays.append(g)
    return sorted(rays), facets, sorted(set(equations))


def _cone_from_inequalities(halfspaces: Sequence[Sequence], equations: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """H -> V for {x : h . x >= 0, e . x = 0}; the cone must be pointed."""
    if equations:
        W = linalg.nullspace([list(e) for e in equations], n)
    else:
        W = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    j = len(W)
    if j == 0:
        return []
    rows = [[dot(w, h) for w in W] for h in halfspaces]
    if linalg.rank(rows) < j:
        raise GeometryError("cone not pointed")
    zs = _extreme_rays(rows, j)
    return [primitive([sum(z[i] * W[i][c] for i in range(j)) for c in range(n)]) for z in zs]


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class LinearSubspace:
    basis: tuple[Vector, ...]
    ambient_dim: int

    def __post_init__(self):
        if any(len(b) != self.ambient_dim for b in self.basis):
            raise GeometryError("basis vector has wrong dimension")
        if linalg.rank(self.basis) != len(self.basis):
            raise GeometryError("basis vectors are linearly dependent")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "LinearSubspace":
        rows = linalg.row_basis([vec(v) for v in vectors])
        return cls(tuple(tuple(r) for r in rows), ambient_dim)

    @classmethod
    def kernel(cls, equations: Iterable[Sequence], ambient_dim: int) -> "LinearSubspace":
        eqs = [vec(e) for e in equations]
        return cls(tuple(tuple(b) for b in linalg.nullspace(eqs, ambient_dim)), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def embed(self, z: Sequence) -> Vector:
        return tuple(sum((Fraction(z[i]) * self.basis[i][c] for i in range(self.dim)), Fraction(0)) for c in range(self.ambient_dim))

    def contains(self, x: Sequence) -> bool:
        return linalg.rank(list(self.basis) + [vec(x)]) == self.dim


@dataclass(frozen=True)
class PolyCone:
    """Pointed rational cone with synchronized ray and halfspace data.

    ``halfspaces`` are primitive normals n with n . x >= 0; ``equations``
    are primitive normals of the linear span's orthogonal complement.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    halfspaces: tuple[tuple[int, ...], ...]
    equations: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence], dim: int) -> "PolyCone":
        rays = [vec(r) for r in rays]
        if any(len(r) != dim for r in rays):
            raise GeometryError("ray has wrong dimension")
        r, f, e = _cone_from_generators(rays, dim)
        return cls(dim, tuple(r), tuple(f), tuple(e))

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Sequence], dim: int, equations: Iterable[Sequence] = ()) -> "PolyCone":
        rays = _cone_from_inequalities([vec(h) for h in halfspaces], [vec(e) for e in equations], dim)
        return cls.from_rays(rays, dim)

    @property
    def linear_dim(self) -> int:
        return self.dim - len(self.equations)

    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) >= 0 for h in self.halfspaces)

    def contains_interior(self, x: Sequence) -> bool:
        """True iff x lies in the relative interior."""
        x = vec(x)
        if not self.rays:
            return all(v == 0 for v in x)
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) > 0 for h in self.halfspaces)

    def __eq__(self, other):
        if not isinstance(other, PolyCone):
            return NotImplemented
        return self.dim == other.dim and all(other.contains(r) for r in self.rays) and all(self.contains(r) for r in other.rays)

    def __hash__(self):
        return hash((self.dim, frozenset(self.rays)))

    def issubset(self, other: "PolyCone") -> bool:
        return all(other.contains(r) for r in self.rays)


@dataclass(frozen=True)
class Polytope:
    """Rational polytope with vertices and facet inequalities.

    Facets are (normal, offset) with primitive integer normal, meaning
    normal . x <= offset.  ``equations`` record the affine hull as
    (normal, offset) pairs meaning normal . x == offset; they are empty
    exactly when the polytope is full-dimensional.  Facets of a
    lower-dimensional polytope are relative to its affine hull.
    """

    dim: int
    vertices: tuple[Vector, ...]
    facets: tuple[tuple[tuple[int, ...], Fraction], ...]
    equations: tuple[tuple[tuple[int, ...], Fraction], ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def affine_dim(self) -> int:
        if self.is_empty:
            return -1
        return self.dim - len(self.equations)

    @property
    def full_dimensional(self) -> bool:
        return not self.is_empty and not self.equations

    def contains(self, x: Sequence) -> bool:
        if self.is_empty:
            return False
        x = vec(x)
        return all(dot(n, x) == b for n, b in self.equations) and all(dot(n, x) <= b for n, b in self.facets)

    def issubset(self, other: "Polytope") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.dim == other.dim and self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash((self.dim, frozenset(self.vertices)))

    def scale(self, c) -> "Polytope":
        c = Fraction(c)
        if c <= 0:
            raise GeometryError("scale factor must be positive")
        return convex_hull([tuple(c * x for x in v) for v in self.vertices], self.dim) if self.vertices else self

    def translate(self, t: Sequence) -> "Polytope":
        t = vec(t)
        return convex_hull([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.dim)

    def linear_image(self, matrix: Sequence[Sequence]) -> "Polytope":
        """Image under x -> matrix . x (matrix given as rows)."""
        m = [vec(r) for r in matrix]
        return convex_hull([tuple(dot(r, v) for r in m) for v in self.vertices], len(m))

    def denominators_lcm(self) -> int:
        return math.lcm(*(x.denominator for v in self.vertices for x in v)) if self.vertices else 1

    @classmethod
    def from_inequalities(cls, normals: Iterable[Sequence], offsets: Iterable, dim: int) -> "Polytope":
        """Polytope {x : normal . x <= offset}; raises if unbounded."""
        rows = []
        for n, b in zip(normals, offsets):
            n = vec(n)
            rows.append([-a for a in n] + [Fraction(b)])
        rows.append([Fraction(0)] * dim + [Fraction(1)])
        if linalg.rank(rows) < dim + 1:
            raise GeometryError("polytope required")
        try:
            rays = _cone_from_inequalities(rows, [], dim + 1)
        except GeometryError:
            raise GeometryError("polytope required") from None
        pts = []
        for r in rays:
            if r[-1] == 0:
                raise GeometryError("polytope required")
            pts.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
        if not pts:
            return cls(dim, (), (), ())
        return convex_hull(pts, dim)


# ---------------------------------------------------------------------------
# operations


def convex_hull(points: Iterable[Sequence], dim: int) -> Polytope:
    pts = [vec(p) for p in points]
    if not pts:
        raise GeometryError("empty point set")
    if any(len(p) != dim for p in pts):
        raise GeometryError("point has wrong dimension")
    pts = sorted(set(pts))
    lifted = [p + (Fraction(1),) for p in pts]
    rays, facets, equations = _cone_from_generators(lifted, dim + 1)
    verts = sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays)
    if len(verts) == 1:
        facets = []
    out_f = []
    for f in facets:
        normal = tuple(-a for a in f[:-1])
        g = math.gcd(*normal) if any(normal) else 0
        if g == 0:
            continue
        out_f.append((tuple(a // g for a in normal), Fraction(f[-1], g)))
    out_e = []
    for e in equations:
        normal = tuple(e[:-1])
        out_e.append((normal, Fraction(-e[-1])))
    return Polytope(dim, tuple(verts), tuple(sorted(out_f)), tuple(sorted(out_e)))


def _simplices(verts: list[Vector], dim: int) -> list[tuple[Vector, ...]]:
    """Pulling triangulation of conv(verts); simplices have affine_dim + 1 vertices."""
    P = convex_hull(verts, dim)
    if P.affine_dim == 0:
        return [(P.vertices[0],)]
    v0 = P.vertices[0]
    out = []
    for n, b in P.facets:
        if dot(n, v0) == b:
            continue
        face = [v for v in P.vertices if dot(n, v) == b]
        for s in _simplices(face, dim):
            out.append((v0,) + s)
    return out


def triangulate(P: Polytope) -> list[tuple[Vector, ...]]:
    if P.is_empty:
        return []
    return _simplices(list(P.vertices), P.dim)


def polytope_volume(P: Polytope, *, strict: bool = False) -> Fraction:
    """Euclidean volume (unit cube = 1); 0 for lower-dimensional P.

    With ``strict`` a degenerate polytope raises DegenerateError instead.
    """
    if not P.full_dimensional:
        if strict:
            raise DegenerateError("polytope is not full-dimensional")
        return Fraction(0)
    d = P.dim
    total = Fraction(0)
    for s in triangulate(P):
        v0 = s[0]
        total += abs(linalg.det([[a - b for a, b in zip(v, v0)] for v in s[1:]]))
    return total / math.factorial(d)


def volume_report(P: Polytope) -> tuple[Fraction, bool]:
    """(volume, degenerate flag)."""
    return polytope_volume(P), not P.full_dimensional


def lattice_points(P: Polytope) -> list[tuple[int, ...]]:
    if not isinstance(P, Polytope):
        raise GeometryError("polytope required")
    if P.is_empty:
        return []
    lo = [math.ceil(min(v[i] for v in P.vertices)) for i in range(P.dim)]
    hi = [math.floor(max(v[i] for v in P.vertices)) for i in range(P.dim)]
    out = []
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(n_i * x_i for n_i, x_i in zip(n, x)) == b for n, b in P.equations) and all(
            sum(n_i * x_i for n_i, x_i in zip(n, x)) <= b for n, b in P.facets
        ):
            out.append(x)
    return out


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise GeometryError("dimension mismatch")
    return convex_hull([tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices], P.dim)


def cone_slice(C: PolyCone, height_axis: int, height) -> Polytope:
    """{x in C : x[axis] = height}, with the axis coordinate dropped."""
    h = Fraction(height)
    if any(r[height_axis] <= 0 for r in C.rays):
        raise GeometryError("cone not graded along axis")
    d = C.dim - 1
    if not C.rays or h == 0:
        return convex_hull([(Fraction(0),) * d], d)
    if h < 0:
        raise GeometryError("negative height")
    pts = []
    for r in C.rays:
        s = h / r[height_axis]
        pts.append(tuple(s * x for i, x in enumerate(r) if i != height_axis))
    return convex_hull(pts, d)


def cone_over(P: Polytope, height=1) -> PolyCone:
    """Cone over P placed at the given height in the last coordinate."""
    h = Fraction(height)
    return PolyCone.from_rays([tuple(v) + (h,) for v in P.vertices], P.dim + 1)


def cone_meet_subspace(C: PolyCone, L: LinearSubspace) -> PolyCone:
    """C ∩ L in the coordinates of L's basis."""
    if L.ambient_dim != C.dim:
        raise GeometryError("dimension mismatch")
    k = L.dim
    if k == 0:
        return PolyCone(0, (), (), ())
    eqs = [[dot(e, b) for b in L.basis] for e in C.equations]
    hs = [[dot(h, b) for b in L.basis] for h in C.halfspaces]
    eqs = [e for e in eqs if any(e)]
    if eqs and linalg.rank(eqs) == k:
        return PolyCone.from_rays([], k)
    rays = _cone_from_inequalities(hs, eqs, k)
    return PolyCone.from_rays(rays, k)
