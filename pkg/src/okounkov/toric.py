"""Smooth projective toric varieties: divisor polytopes, the chart map, toric
Okounkov bodies, Ehrhart counts and the global cone over the Picard group."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import linalg
from .errors import GeometryError, ValidationError
from .geomcore import PolyCone, Polytope, lattice_points, polytope_volume


@dataclass(frozen=True)
class ToricModel:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(tuple(int(i) for i in c) for c in self.max_cones))
        for r in self.rays:
            if len(r) != self.rank:
                raise ValidationError("ray has wrong length")
            if linalg.primitive(r) != r or not any(r):
                raise ValidationError(f"ray {r} is not primitive")
        for c in self.max_cones:
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise ValidationError("cone refers to a missing ray")
            if len(c) != self.rank:
                raise ValidationError(f"maximal cone {c} is not simplicial of full dimension")
            if abs(linalg.det([self.rays[i] for i in c])) != 1:
                raise ValidationError(f"maximal cone {c} is not unimodular", reason="singular-fan")

    @property
    def nrays(self) -> int:
        return len(self.rays)


@dataclass(frozen=True)
class InvariantDivisor:
    coeffs: tuple[Fraction, ...]  # D = sum a_i D_i

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))

    @classmethod
    def of(cls, *coeffs) -> "InvariantDivisor":
        return cls(tuple(coeffs))

    def __add__(self, other: "InvariantDivisor") -> "InvariantDivisor":
        return InvariantDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, c) -> "InvariantDivisor":
        return InvariantDivisor(tuple(Fraction(c) * a for a in self.coeffs))

    __rmul__ = __mul__

    @property
    def effective(self) -> bool:
        return all(a >= 0 for a in self.coeffs)


@dataclass(frozen=True)
class FlagChart:
    """Maximal cone σ with its rays ordered; Y_i = D_1 ∩ ... ∩ D_i."""

    rays: tuple[int, ...]

    def check(self, T: ToricModel) -> None:
        if sorted(self.rays) not in [sorted(c) for c in T.max_cones]:
            raise ValidationError("chart is not a maximal cone of the fan")

    def phi_matrix(self, T: ToricModel) -> list[tuple[int, ...]]:
        return [T.rays[i] for i in self.rays]

    def complement(self, T: ToricModel) -> list[int]:
        return [j for j in range(T.nrays) if j not in self.rays]


def _check_divisor(T: ToricModel, D: InvariantDivisor) -> None:
    if len(D.coeffs) != T.nrays:
        raise ValidationError("divisor needs one coefficient per ray")


def divisor_polytope(T: ToricModel, D: InvariantDivisor) -> Polytope:
    """P_D = {u : <u, v_i> >= -a_i}."""
    _check_divisor(T, D)
    normals = [tuple(-x for x in v) for v in T.rays]
    try:
        return Polytope.from_inequalities(normals, D.coeffs, T.rank)
    except GeometryError:
        raise ValidationError("divisor not big/complete fan required", reason="unbounded-polytope") from None


def chart_character(T: ToricModel, D: InvariantDivisor, sigma: FlagChart) -> list[Fraction]:
    """The u with <u, v_i> = -a_i on the rays of σ."""
    _check_divisor(T, D)
    sigma.check(T)
    return linalg.solve(sigma.phi_matrix(T), [-D.coeffs[i] for i in sigma.rays])


def normalize_on_chart(T: ToricModel, D: InvariantDivisor, sigma: FlagChart) -> InvariantDivisor:
    """D + div(χ^u), zero on the rays of σ."""
    u = chart_character(T, D, sigma)
    return InvariantDivisor(tuple(a + linalg.dot(u, v) for a, v in zip(D.coeffs, T.rays)))


class ToricBody(NamedTuple):
    polytope: Polytope
    degenerate: bool  # True when the class is not big


def toric_okounkov_body(T: ToricModel, L: InvariantDivisor, sigma: FlagChart) -> ToricBody:
    """Δ(L) = φ(P_D') with φ(u) = (<u, v_i>) over the rays of σ."""
    Dn = normalize_on_chart(T, L, sigma)
    P = divisor_polytope(T, Dn)
    if P.is_empty:
        return ToricBody(P, True)
    body = P.linear_image(sigma.phi_matrix(T))
    return ToricBody(body, not body.full_dimensional)


def ehrhart_count(T: ToricModel, D: InvariantDivisor, m: int) -> int:
    """h^0(mD) = #(m P_D ∩ M)."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    P = divisor_polytope(T, D)
    if P.is_empty:
        return 0
    if m == 0:
        return 1
    return len(lattice_points(P.scale(m)))


def ehrhart_polynomial(T: ToricModel, D: InvariantDivisor) -> list[Fraction]:
    """Coefficients c_0..c_d of the Ehrhart polynomial of a lattice P_D.

    Obtained by exact interpolation through m = 0..d; raises for a
    non-lattice polytope, where the count is only quasi-polynomial.
    """
    P = divisor_polytope(T, D)
    if P.denominators_lcm() != 1:
        raise ValidationError("P_D is not a lattice polytope")
    d = T.rank
    xs = list(range(d + 1))
    ys = [ehrhart_count(T, D, m) for m in xs]
    vander = [[Fraction(x) ** k for k in range(d + 1)] for x in xs]
    return linalg.solve(vander, ys)


# -- global cone -------------------------------------------------------------


@dataclass(frozen=True)
class PicardSplitting:
    """Coordinates on Pic(X): the class of D is given by the coefficients of
    its normalization D' on the rays outside σ."""

    model: ToricModel
    sigma: FlagChart

    @property
    def rank(self) -> int:
        return self.model.nrays - self.model.rank

    def class_of(self, D: InvariantDivisor) -> tuple[Fraction, ...]:
        Dn = normalize_on_chart(self.model, D, self.sigma)
        return tuple(Dn.coeffs[j] for j in self.sigma.complement(self.model))

    def divisor_of(self, xi: Sequence) -> InvariantDivisor:
        """The representative of class ξ that vanishes on σ."""
        coeffs = [Fraction(0)] * self.model.nrays
        for j, x in zip(self.sigma.complement(self.model), xi):
            coeffs[j] = Fraction(x)
        return InvariantDivisor(tuple(coeffs))

    def Phi(self, E: InvariantDivisor) -> tuple[Fraction, ...]:
        """E -> (ν-coordinates, class); the ν part is E restricted to σ."""
        return tuple(E.coeffs[i] for i in self.sigma.rays) + self.class_of(E)

    def Phi_inverse(self, w: Sequence) -> InvariantDivisor:
        d = self.model.rank
        nu, xi = [Fraction(x) for x in w[:d]], w[d:]
        base = self.divisor_of(xi)
        # E = D_ξ + div(χ^u) with <u, v_i> = ν_i on σ
        u = linalg.solve(self.sigma.phi_matrix(self.model), nu)
        return InvariantDivisor(tuple(a + linalg.dot(u, v) for a, v in zip(base.coeffs, self.model.rays)))


def global_cone(T: ToricModel, sigma: FlagChart, box: int | None = None) -> PolyCone:
    """Closed cone spanned by (φ(u), ξ) for u ∈ P_{D_ξ}, ξ in a box of classes.

    The default box contains the classes of all boundary divisors D_i,
    which is enough for the cone to be exact.
    """
    S = PicardSplitting(T, sigma)
    if box is None:
        classes = [S.class_of(InvariantDivisor(tuple(int(i == j) for j in range(T.nrays)))) for i in range(T.nrays)]
        box = max(int(abs(x)) + (x.denominator != 1) for c in classes for x in c)
    phi = sigma.phi_matrix(T)
    gens = []
    for xi in itertools.product(range(-box, box + 1), repeat=S.rank):
        P = divisor_polytope(T, S.divisor_of(xi))
        for v in P.vertices:
            gens.append(tuple(linalg.dot(r, v) for r in phi) + tuple(Fraction(x) for x in xi))
    return PolyCone.from_rays(gens, T.nrays)


def global_fibre(C: PolyCone, d: int, xi: Sequence) -> Polytope:
    """{ν : (ν, ξ) ∈ C}."""
    xi = [Fraction(x) for x in xi]
    normals, offsets = [], []
    for h in C.halfspaces:
        normals.append(tuple(-a for a in h[:d]))
        offsets.append(linalg.dot(h[d:], xi))
    for e in C.equations:
        for s in (1, -1):
            normals.append(tuple(s * a for a in e[:d]))
            offsets.append(-s * linalg.dot(e[d:], xi))
    return Polytope.from_inequalities(normals, offsets, d)


@dataclass(frozen=True)
class OrthantReport:
    membership: tuple[tuple[tuple[Fraction, ...], bool, bool], ...]  # (E, in cone, effective)
    fibres: tuple[tuple[tuple[Fraction, ...], bool], ...]  # (class, fibre == Δ)

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.membership) and all(ok for _, ok in self.fibres)


def global_orthant_check(
    T: ToricModel,
    sigma: FlagChart,
    samples: Sequence[InvariantDivisor],
    classes: Sequence[InvariantDivisor] = (),
) -> OrthantReport:
    """Φ(E) lies in the global cone iff E is effective; and the fibre of the
    cone over each big class in ``classes`` equals its toric body."""
    sigma.check(T)
    S = PicardSplitting(T, sigma)
    C = global_cone(T, sigma)
    mem = []
    for E in samples:
        _check_divisor(T, E)
        w = S.Phi(E)
        assert S.Phi_inverse(w) == E
        mem.append((E.coeffs, C.contains(w), E.effective))
    fib = []
    for L in classes:
        body = toric_okounkov_body(T, L, sigma)
        xi = S.class_of(L)
        fib.append((xi, (not body.degenerate) and global_fibre(C, T.rank, xi) == body.polytope))
    return OrthantReport(tuple(mem), tuple(fib))


# -- standard fans -------------------------------------------------------------


def projective_plane() -> ToricModel:
    return ToricModel(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (2, 0)))


def projective_line() -> ToricModel:
    return ToricModel(1, ((1,), (-1,)), ((0,), (1,)))


def p1xp1() -> ToricModel:
    return ToricModel(2, ((1, 0), (0, 1), (-1, 0), (0, -1)), ((0, 1), (1, 2), (2, 3), (3, 0)))


def hirzebruch(a: int) -> ToricModel:
    if a < 0:
        raise ValidationError("Hirzebruch index must be nonnegative")
    return ToricModel(2, ((1, 0), (0, 1), (-1, a), (0, -1)), ((0, 1), (1, 2), (2, 3), (3, 0)))


def volume_consistency(T: ToricModel, D: InvariantDivisor, sigma: FlagChart) -> tuple[Fraction, Fraction]:
    """(vol Δ(D), vol P_D); these agree since φ is unimodular."""
    return polytope_volume(toric_okounkov_body(T, D, sigma).polytope), polytope_volume(divisor_polytope(T, D))
