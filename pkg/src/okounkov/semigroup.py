"""Graded sub-semigroups of N^d x N^r and their cones and bodies."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy.signal import fftconvolve

from . import linalg
from .errors import HypothesisError, ValidationError
from .geomcore import (
    LinearSubspace,
    PolyCone,
    Polytope,
    cone_meet_subspace,
    cone_slice,
    convex_hull,
    polytope_volume,
)

Point = tuple[int, ...]
Degree = int | tuple[int, ...]


@dataclass(frozen=True)
class AdmissibilityReport:
    has_zero: bool
    is_bounded: bool
    bound: Fraction | None
    generates_full_group: bool
    index: int | None = None
    certified_to_degree: int | None = None

    @property
    def ok(self) -> bool:
        return self.has_zero and self.is_bounded and self.generates_full_group


class BodyEstimate(NamedTuple):
    polytope: Polytope
    exact: bool


class GradedSemigroup:
    """A semigroup Γ ⊆ N^d x N^r (values first, grading last).

    Built either from finitely many generators or from explicit degree
    slices (a table or a rule).  Explicit sources may declare the rays of the
    closed cone they span when it is known in closed form.
    """

    def __init__(
        self,
        value_dim: int,
        grading_dim: int = 1,
        *,
        generators: Iterable[Sequence[int]] | None = None,
        slices: dict | None = None,
        rule: Callable[[Degree], Iterable[Sequence[int]]] | None = None,
        max_degree: int | None = None,
        closure_rays: Iterable[Sequence] | None = None,
        check_degree: int | None = None,
    ):
        if value_dim < 0 or grading_dim < 1:
            raise ValidationError("bad dimensions")
        self.value_dim = value_dim
        self.grading_dim = grading_dim
        self._lock = threading.Lock()
        self._memo: dict = {}
        n = value_dim + grading_dim
        self.closure_rays = tuple(tuple(Fraction(x) for x in r) for r in closure_rays) if closure_rays else None
        if generators is not None:
            gens = [tuple(int(x) for x in g) for g in generators]
            if any(len(g) != n for g in gens):
                raise ValidationError("generator has wrong length")
            if any(x < 0 for g in gens for x in g):
                raise ValidationError("generator coordinates must be nonnegative")
            self.generators: tuple[Point, ...] | None = tuple(sorted(set(g for g in gens if any(g))))
            self.max_degree = None
            self._table = None
            self._rule = None
        else:
            if (slices is None) == (rule is None):
                raise ValidationError("give exactly one of generators, slices, rule")
            if max_degree is None:
                raise ValidationError("explicit sources need max_degree")
            self.generators = None
            self.max_degree = int(max_degree)
            self._rule = rule
            self._table = None
            if slices is not None:
                table = {}
                for key, pts in slices.items():
                    deg = self._norm_degree(key)
                    table[deg] = frozenset(tuple(int(x) for x in p) for p in pts)
                for pts in table.values():
                    if any(len(p) != value_dim or min(p, default=0) < 0 for p in pts):
                        raise ValidationError("slice point has wrong length or negative entry")
                self._table = table
            top = self.max_degree if check_degree is None else min(check_degree, self.max_degree)
            self._check_additivity(top)
            if self.closure_rays is not None:
                declared = PolyCone.from_rays(self.closure_rays, n)
                for deg in self._degrees_upto(top):
                    degt = (deg,) if isinstance(deg, int) else deg
                    if any(not declared.contains(p + degt) for p in self._slice_explicit(deg)):
                        raise ValidationError("slice point outside the declared closure cone")

    # -- basic access --------------------------------------------------------

    @property
    def finitely_generated(self) -> bool:
        return self.generators is not None

    @property
    def ambient_dim(self) -> int:
        return self.value_dim + self.grading_dim

    def _norm_degree(self, key) -> Degree:
        if self.grading_dim == 1:
            if isinstance(key, str):
                key = key.split(",")[0]
            if isinstance(key, (tuple, list)):
                (key,) = key
            return int(key)
        if isinstance(key, str):
            key = key.split(",")
        return tuple(int(x) for x in key)

    def _degrees_upto(self, top: int):
        if self.grading_dim == 1:
            return range(top + 1)
        return (t for t in itertools.product(range(top + 1), repeat=self.grading_dim))

    def _check_additivity(self, top: int) -> None:
        zero = self._zero_degree()
        if self._slice_explicit(zero) != frozenset({(0,) * self.value_dim}):
            raise ValidationError("slice at degree 0 must be {0}", reason="semigroup-zero")
        degs = [dg for dg in self._degrees_upto(top)]
        for k in degs:
            for l in degs:
                s = self._add_deg(k, l)
                if self._deg_size(s) > top:
                    continue
                target = self._slice_explicit(s)
                for p in self._slice_explicit(k):
                    for q in self._slice_explicit(l):
                        if tuple(a + b for a, b in zip(p, q)) not in target:
                            raise ValidationError(
                                f"slices violate additivity at degrees {k} + {l}", reason="semigroup-additivity"
                            )

    def _zero_degree(self) -> Degree:
        return 0 if self.grading_dim == 1 else (0,) * self.grading_dim

    @staticmethod
    def _add_deg(a: Degree, b: Degree) -> Degree:
        if isinstance(a, int):
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    @staticmethod
    def _deg_size(a: Degree) -> int:
        return a if isinstance(a, int) else max(a, default=0)

    def _slice_explicit(self, m: Degree) -> frozenset:
        if self._deg_size(m) > self.max_degree:
            raise ValidationError("degree out of range", reason="degree-out-of-range")
        if self._table is not None:
            if m == self._zero_degree() and m not in self._table:
                return frozenset({(0,) * self.value_dim})
            return self._table.get(m, frozenset())
        with self._lock:
            if m not in self._memo:
                self._memo[m] = frozenset(tuple(int(x) for x in p) for p in self._rule(m))
            return self._memo[m]

    def degree_slice(self, m: Degree) -> list[Point]:
        """Γ_m as a sorted list of points of N^d."""
        m = self._norm_degree(m)
        if self._deg_size(m) < 0 or (not isinstance(m, int) and min(m) < 0):
            raise ValidationError("degree must be nonnegative")
        if self.generators is None:
            return sorted(self._slice_explicit(m))
        return sorted(self._slice_generated(m))

    def _slice_generated(self, m: Degree) -> frozenset:
        d = self.value_dim
        with self._lock:
            hit = self._memo.get(m)
        if hit is not None:
            return hit
        if m == self._zero_degree():
            out = frozenset({(0,) * d})
        else:
            pts: set = set()
            for g in self.generators:
                h = g[d:] if self.grading_dim > 1 else g[d]
                if self.grading_dim == 1:
                    if h == 0:
                        raise HypothesisError("generator of degree 0 makes slices infinite", reason="semigroup-zero")
                    if h > m:
                        continue
                    rest = m - h
                else:
                    if not any(h):
                        raise HypothesisError("generator of degree 0 makes slices infinite", reason="semigroup-zero")
                    if any(x > y for x, y in zip(h, m)):
                        continue
                    rest = tuple(y - x for x, y in zip(h, m))
                for p in self._slice_generated(rest):
                    pts.add(tuple(a + b for a, b in zip(p, g[:d])))
            out = frozenset(pts)
        with self._lock:
            self._memo[m] = out
        return out

    def points_upto(self, m_max: int) -> list[Point]:
        """All elements (v, m) with 1 <= m <= m_max (graded case)."""
        out = []
        for m in range(1, m_max + 1):
            out.extend(p + (m,) for p in self.degree_slice(m))
        return out

    def elements_in_box(self, box: int) -> np.ndarray:
        """Boolean array over [0, box]^n marking elements of Γ."""
        n = self.ambient_dim
        shape = (box + 1,) * n
        if self.generators is not None:
            mark = np.zeros(shape, dtype=bool)
            mark[(0,) * n] = True
            gens = [g for g in self.generators if all(x <= box for x in g)]
            while True:
                new = mark.copy()
                for g in gens:
                    src = tuple(slice(0, box + 1 - x) for x in g)
                    dst = tuple(slice(x, box + 1) for x in g)
                    new[dst] |= mark[src]
                if np.array_equal(new, mark):
                    return mark
                mark = new
        mark = np.zeros(shape, dtype=bool)
        for deg in self._degrees_upto(min(box, self.max_degree)):
            degt = (deg,) if isinstance(deg, int) else deg
            for p in self._slice_explicit(deg):
                if all(x <= box for x in p):
                    mark[p + degt] = True
        return mark

    # -- cones ----------------------------------------------------------------

    def cone(self, m_max: int | None = None) -> PolyCone:
        """Closed cone Σ(Γ); for explicit sources without declared closure, the
        cone over elements up to ``m_max`` (a lower bound)."""
        n = self.ambient_dim
        if self.generators is not None:
            return PolyCone.from_rays(self.generators, n)
        if self.closure_rays is not None:
            return PolyCone.from_rays(self.closure_rays, n)
        top = self.max_degree if m_max is None else min(m_max, self.max_degree)
        pts = np.argwhere(self.elements_in_box(top)) if self.grading_dim > 1 else None
        if pts is not None:
            return PolyCone.from_rays([tuple(int(x) for x in p) for p in pts], n)
        return PolyCone.from_rays(self.points_upto(top), n)

    def group_generators(self, top: int | None = None) -> list[Point]:
        if self.generators is not None:
            return list(self.generators)
        top = self.max_degree if top is None else min(top, self.max_degree)
        if self.grading_dim == 1:
            return self.points_upto(top)
        return [tuple(int(x) for x in p) for p in np.argwhere(self.elements_in_box(top))]


def check_admissibility(gamma: GradedSemigroup) -> AdmissibilityReport:
    d = gamma.value_dim
    n = gamma.ambient_dim
    if gamma.generators is not None:
        has_zero = all(any(g[d:]) for g in gamma.generators)
        bound = None
        if has_zero:
            bound = max(
                (Fraction(max(g[:d], default=0), sum(g[d:])) for g in gamma.generators),
                default=Fraction(0),
            )
        index = linalg.lattice_index(gamma.generators, n)
        return AdmissibilityReport(has_zero, has_zero, bound, index == 1, index)
    has_zero = True  # enforced on construction
    bound = Fraction(0)
    if gamma.closure_rays is not None:
        for r in gamma.closure_rays:
            h = sum(r[d:])
            if h == 0:
                return AdmissibilityReport(True, False, None, False)
            bound = max(bound, max(r[:d], default=Fraction(0)) / h)
    else:
        for deg in gamma._degrees_upto(gamma.max_degree):
            s = gamma._deg_size(deg) if gamma.grading_dim == 1 else sum(deg)
            if s == 0:
                continue
            for p in gamma._slice_explicit(deg):
                bound = max(bound, Fraction(max(p, default=0), s))
    # the generated subgroup, scanned degree by degree until index 1
    gens: list[Point] = []
    index = None
    certified = None
    top = gamma.max_degree if gamma.grading_dim == 1 else min(gamma.max_degree, 8)
    for m in range(1, top + 1):
        if gamma.grading_dim == 1:
            gens.extend(p + (m,) for p in gamma.degree_slice(m))
        else:
            gens = gamma.group_generators(m)
        index = linalg.lattice_index(_reduce_rows(gens, n), n)
        if index == 1:
            certified = m
            break
    return AdmissibilityReport(True, True, bound, index == 1, index, certified)


def _reduce_rows(rows: list[Point], n: int) -> list[Point]:
    # a lattice basis generating the same group keeps later calls cheap
    rows = [r for r in rows if any(r)]
    if len(rows) <= 2 * n:
        return rows
    return _hermite_rows(rows, n)


def _hermite_rows(rows: list[Point], n: int) -> list[Point]:
    rows = [list(r) for r in rows]
    out = []
    r0 = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r0, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r0], rows[i0] = rows[i0], rows[r0]
            clean = True
            for i in range(r0 + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r0][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r0])]
                    clean = clean and rows[i][c] == 0
            if clean:
                out.append(tuple(rows[r0]))
                r0 += 1
                break
    return out


def _require_admissible(gamma: GradedSemigroup) -> AdmissibilityReport:
    rep = check_admissibility(gamma)
    if not rep.ok:
        raise HypothesisError("semigroup is not admissible", reason="semigroup-inadmissible", report=rep)
    return rep


def okounkov_body(gamma: GradedSemigroup, m_max: int | None = None) -> BodyEstimate:
    """Δ(Γ): exact slice of the closed cone when that cone is known, else the
    hull of (1/m)Γ_m for m <= m_max."""
    if gamma.grading_dim != 1:
        raise ValidationError("okounkov_body needs a singly graded semigroup")
    _require_admissible(gamma)
    d = gamma.value_dim
    if gamma.generators is not None or gamma.closure_rays is not None:
        return BodyEstimate(cone_slice(gamma.cone(), d, 1), True)
    if m_max is None:
        m_max = gamma.max_degree
    pts = []
    for m in range(1, m_max + 1):
        pts.extend(tuple(Fraction(x, m) for x in p) for p in gamma.degree_slice(m))
    return BodyEstimate(convex_hull(pts, d), False)


def density_sequence(gamma: GradedSemigroup, m_max: int) -> tuple[list[tuple[int, Fraction]], Fraction]:
    """(#Γ_m / m^d for 1 <= m <= m_max, vol(Δ))."""
    if m_max < 1:
        raise ValidationError("m_max must be at least 1")
    body = okounkov_body(gamma, m_max).polytope
    d = gamma.value_dim
    seq = [(m, Fraction(len(gamma.degree_slice(m)), m**d)) for m in range(1, m_max + 1)]
    return seq, polytope_volume(body) if d > 0 else Fraction(1)


# -- Khovanskii translate ------------------------------------------------------


@dataclass(frozen=True)
class TranslateResult:
    z: Point | None
    box: int
    verified_in_box: bool
    cone: PolyCone


def khovanskii_translate(gamma: GradedSemigroup, box: int) -> TranslateResult:
    """Lexicographically smallest z in [0, box//2]^k with (z + Σ) ∩ Z^k ∩ [0, box]^k ⊆ Γ.

    Γ is treated as a plain subset of N^k.  The verification is exhaustive
    inside the box and says nothing beyond it.
    """
    n = gamma.ambient_dim
    gens = gamma.group_generators()
    if linalg.lattice_index(_reduce_rows(gens, n), n) != 1:
        raise HypothesisError("statement (*) fails if Γ does not generate", reason="group-not-generated")
    cone = gamma.cone(box)
    mark = gamma.elements_in_box(box)
    pts = np.indices(mark.shape).reshape(n, -1)
    member = mark.reshape(-1)
    normals = np.array(cone.halfspaces, dtype=np.int64).reshape(-1, n)
    eqs = np.array(cone.equations, dtype=np.int64).reshape(-1, n)
    hs = normals @ pts
    es = eqs @ pts
    bad = ~member
    for z in itertools.product(range(box // 2 + 1), repeat=n):
        zv = np.asarray(z, dtype=np.int64)
        inside = np.all(hs >= (normals @ zv)[:, None], axis=0) & np.all(es == (eqs @ zv)[:, None], axis=0)
        if not np.any(inside & bad):
            return TranslateResult(tuple(z), box, True, cone)
    return TranslateResult(None, box, False, cone)


def translate_holds(gamma: GradedSemigroup, z: Sequence[int], box: int) -> bool:
    """Box-limited check of (z + Σ) ∩ Z^k ⊆ Γ."""
    n = gamma.ambient_dim
    cone = gamma.cone(box)
    mark = gamma.elements_in_box(box)
    pts = np.indices(mark.shape).reshape(n, -1)
    normals = np.array(cone.halfspaces, dtype=np.int64).reshape(-1, n)
    eqs = np.array(cone.equations, dtype=np.int64).reshape(-1, n)
    zv = np.asarray(z, dtype=np.int64)
    inside = np.all(normals @ pts >= (normals @ zv)[:, None], axis=0) & np.all(eqs @ pts == (eqs @ zv)[:, None], axis=0)
    return not np.any(inside & ~mark.reshape(-1))


# -- Fujita ----------------------------------------------------------------------


def _sumset_power(mask: np.ndarray, k: int) -> np.ndarray:
    """k-fold sumset of the point set given as a boolean array (k >= 1)."""
    result = None
    base = mask
    while k:
        if k & 1:
            result = base if result is None else fftconvolve(result.astype(float), base.astype(float)) > 0.5
        k >>= 1
        if k:
            base = fftconvolve(base.astype(float), base.astype(float)) > 0.5
    return result


def kfold_sumset_size(points: Sequence[Point], k: int) -> int:
    if not points:
        raise ValidationError("empty slice")
    d = len(points[0])
    if d == 0:
        return 1
    hi = [max(p[i] for p in points) for i in range(d)]
    mask = np.zeros([h + 1 for h in hi], dtype=bool)
    for p in points:
        mask[p] = True
    return int(np.count_nonzero(_sumset_power(mask, k)))


def fujita_gap(gamma: GradedSemigroup, p: int, k: int) -> Fraction:
    """#(k * Γ_p) / (k^d p^d)."""
    _require_admissible(gamma)
    if p < 1 or k < 1:
        raise ValidationError("p and k must be positive")
    slice_p = gamma.degree_slice(p)
    if not slice_p:
        raise HypothesisError("Γ_p is empty", reason="empty-slice")
    d = gamma.value_dim
    return Fraction(kfold_sumset_size(slice_p, k), (k * p) ** d)


def fujita_limit(gamma: GradedSemigroup, p: int) -> Fraction:
    """lim_k #(k * Γ_p)/(k^d p^d) = vol(conv Γ_p)/p^d once Γ_p generates Z^d."""
    slice_p = gamma.degree_slice(p)
    if not slice_p:
        raise HypothesisError("Γ_p is empty", reason="empty-slice")
    d = gamma.value_dim
    return polytope_volume(convex_hull(slice_p, d)) / p**d


# -- cones versus subspaces ---------------------------------------------------------


@dataclass(frozen=True)
class FiberCheck:
    hypothesis_met: bool
    equal: bool | None
    section_cone: PolyCone  # Σ(Γ) ∩ L, in L coordinates
    fiber_cone: PolyCone  # Σ(Γ ∩ L), in L coordinates
    box: int
    reason: str = ""


def _subspace_coords(L: LinearSubspace):
    """Function mapping integer points of L to L-coordinates."""
    basis = [list(b) for b in L.basis]
    k = L.dim
    # k columns on which the basis is invertible
    sel = _independent_columns(basis, k)
    inv = linalg.inverse([[basis[i][c] for i in range(k)] for c in sel])

    def coords(x):
        xs = [Fraction(x[c]) for c in sel]
        return tuple(sum((inv[i][j] * xs[j] for j in range(k)), Fraction(0)) for i in range(k))

    return coords


def _independent_columns(basis, k):
    n = len(basis[0])
    picked: list[int] = []
    rows: list[list] = []
    for c in range(n):
        col = [basis[i][c] for i in range(k)]
        if linalg.rank(rows + [col]) > len(rows):
            rows.append(col)
            picked.append(c)
            if len(picked) == k:
                break
    return picked


def _fiber_cone(gamma: GradedSemigroup, L: LinearSubspace, box: int) -> PolyCone:
    n = gamma.ambient_dim
    mark = gamma.elements_in_box(box)
    pts = np.argwhere(mark)
    eqs = [linalg.primitive(e) for e in linalg.nullspace([list(b) for b in L.basis], n)] if L.dim < n else []
    if eqs:
        E = np.array(eqs, dtype=np.int64)
        pts = pts[np.all(pts @ E.T == 0, axis=1)]
    coords = _subspace_coords(L)
    return PolyCone.from_rays([coords(p) for p in pts], L.dim)


def subspace_cone_check(
    gamma: GradedSemigroup,
    L: LinearSubspace,
    box: int = 8,
    max_box: int = 64,
    interior_ok: bool | None = None,
) -> FiberCheck:
    """Compare Σ(Γ) ∩ L with Σ(Γ ∩ L).

    The hypotheses (finite-index group, L meeting the interior of Σ) are
    checked exactly.  Σ(Γ ∩ L) is the cone over the elements of Γ ∩ L in a
    box; the box doubles until the two cones agree or ``max_box`` is hit.
    """
    n = gamma.ambient_dim
    sigma = gamma.cone(max_box)
    section = cone_meet_subspace(sigma, L)
    index = linalg.lattice_index(_reduce_rows(gamma.group_generators(max_box), n), n)
    if interior_ok is None:
        witness = [sum((Fraction(r[i]) for r in section.rays), Fraction(0)) for i in range(L.dim)]
        interior_ok = bool(section.rays) and sigma.is_full_dimensional() and sigma.contains_interior(L.embed(witness))
    hyp = index is not None and interior_ok
    reason = "" if hyp else ("group-not-finite-index" if index is None else "subspace-misses-interior")
    b = box
    while True:
        fiber = _fiber_cone(gamma, L, b)
        equal = fiber == section
        if equal or b >= max_box:
            break
        b = min(2 * b, max_box)
    return FiberCheck(hyp, equal, section, fiber, b, reason)


def ray_fiber_check(gamma: GradedSemigroup, a: Sequence[int], box: int = 8, max_box: int = 64) -> FiberCheck:
    """Σ(Γ_{Na}) against Σ(Γ)_{Ra} in coordinates (values, multiple of a)."""
    d, r = gamma.value_dim, gamma.grading_dim
    a = tuple(int(x) for x in a)
    if len(a) != r or not any(a) or min(a) < 0:
        raise ValidationError("a must be a nonzero vector in N^r")
    n = d + r
    basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(d)]
    basis.append(tuple([Fraction(0)] * d + [Fraction(x) for x in a]))
    L = LinearSubspace(tuple(basis), n)
    sigma = gamma.cone(max_box)
    proj = [tuple(ray[d:]) for ray in sigma.rays]
    supp = PolyCone.from_rays(proj, r)
    interior = supp.is_full_dimensional() and supp.contains_interior(a)
    return subspace_cone_check(gamma, L, box, max_box, interior_ok=interior)


# -- the curve example --------------------------------------------------------------


def curve_semigroup(c: int, g: int, max_degree: int = 400) -> GradedSemigroup:
    """{(0,0)} ∪ {(k, m) : m >= 1, 0 <= k <= mc - g}."""
    if g < 0:
        raise ValidationError("genus must be nonnegative")
    if c < 2 * g + 1:
        raise ValidationError("degree too small", reason="degree-too-small")

    def rule(m):
        if m == 0:
            return [(0,)]
        return [(k,) for k in range(m * c - g + 1)]

    return GradedSemigroup(
        1,
        1,
        rule=rule,
        max_degree=max_degree,
        closure_rays=[(0, 1), (c, 1)],
        check_degree=12,
    )
