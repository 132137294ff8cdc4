"""Linear series on projective space spanned by monomials, the lexicographic
flag valuation, and graded families of monomial ideals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from . import linalg
from .errors import HypothesisError, ValidationError
from .geomcore import Polytope, convex_hull, lattice_points, polytope_volume

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Monomial:
    exponents: Exponents  # (a_0, ..., a_d)

    def __post_init__(self):
        if any(a < 0 for a in self.exponents):
            raise ValidationError("exponents must be nonnegative")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


def lex_valuation(s: Monomial | Sequence[int]) -> Exponents:
    """ν(T_0^a0 ... T_d^ad) = (a_1, ..., a_d)."""
    exps = s.exponents if isinstance(s, Monomial) else tuple(s)
    return tuple(exps[1:])


def degree_monomials(m: int, nvars: int) -> list[Exponents]:
    """All degree-m exponent vectors in nvars variables, sorted by increasing
    lexicographic valuation."""
    out = []
    for tail in itertools.product(range(m + 1), repeat=nvars - 1):
        if sum(tail) <= m:
            out.append((m - sum(tail),) + tail)
    return sorted(out, key=lex_valuation)


@dataclass(frozen=True)
class GeneralSubspace:
    """W ⊆ H^0(P^d, O(m)) as a coefficient matrix; columns follow
    ``degree_monomials(degree, nvars)``."""

    degree: int
    nvars: int
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        ncols = len(degree_monomials(self.degree, self.nvars))
        if any(len(r) != ncols for r in self.rows):
            raise ValidationError("coefficient row has wrong length")

    @classmethod
    def from_polynomials(cls, polys: Iterable[Mapping[Exponents, object]], degree: int, nvars: int) -> "GeneralSubspace":
        """Build from dicts {exponent tuple: coefficient}."""
        cols = {e: i for i, e in enumerate(degree_monomials(degree, nvars))}
        rows = []
        for p in polys:
            row = [Fraction(0)] * len(cols)
            for e, c in p.items():
                e = tuple(e)
                if e not in cols:
                    raise ValidationError(f"monomial {e} is not of degree {degree}")
                row[cols[e]] += Fraction(c)
            rows.append(tuple(row))
        return cls(degree, nvars, tuple(rows))

    @property
    def rank(self) -> int:
        return linalg.rank(self.rows) if self.rows else 0


def subspace_valuation_image(W: GeneralSubspace) -> set[Exponents]:
    """Valuation vectors of W - {0}: pivots of the column-ordered echelon form."""
    if not W.rows:
        return set()
    cols = degree_monomials(W.degree, W.nvars)
    _, piv = linalg.rref(W.rows, len(cols))
    return {lex_valuation(cols[c]) for c in piv}


@dataclass(frozen=True)
class MonomialSeries:
    """Graded series W_m spanned by monomials; stored as valuation vectors
    v ∈ N^d with |v| <= m (the monomial is T_0^(m-|v|) x^v)."""

    dim: int
    max_degree: int
    pieces: tuple[frozenset, ...]  # pieces[m] = W_m

    def __post_init__(self):
        if len(self.pieces) != self.max_degree + 1:
            raise ValidationError("need one piece per degree 0..max_degree")
        if self.pieces[0] != frozenset({(0,) * self.dim}):
            raise ValidationError("W_0 must be the constants")
        for m, piece in enumerate(self.pieces):
            if any(len(v) != self.dim or min(v, default=0) < 0 or sum(v) > m for v in piece):
                raise ValidationError(f"W_{m} contains a monomial of the wrong degree")

    def check_multiplicative(self) -> list[tuple[int, int]]:
        """Pairs (k, l) with W_k * W_l not inside W_{k+l}."""
        bad = []
        for k in range(1, self.max_degree + 1):
            for l in range(k, self.max_degree + 1 - k):
                target = self.pieces[k + l]
                if any(tuple(a + b for a, b in zip(p, q)) not in target for p in self.pieces[k] for q in self.pieces[l]):
                    bad.append((k, l))
        return bad

    def homogenized(self, m: int) -> list[Exponents]:
        return sorted((m - sum(v),) + tuple(v) for v in self.pieces[m])


def standard_simplex(d: int) -> Polytope:
    pts = [(0,) * d] + [tuple(int(i == j) for j in range(d)) for i in range(d)]
    return convex_hull(pts, d)


def series_from_body(K: Polytope, M: int) -> MonomialSeries:
    """W_m spanned by x^v for v ∈ mK ∩ Z^d."""
    T = standard_simplex(K.dim)
    if not K.issubset(T):
        raise ValidationError("rescale K into the simplex first", reason="body-outside-simplex")
    pieces = [frozenset({(0,) * K.dim})]
    for m in range(1, M + 1):
        pieces.append(frozenset(lattice_points(K.scale(m))))
    return MonomialSeries(K.dim, M, tuple(pieces))


@dataclass(frozen=True)
class SeriesBody:
    polytope: Polytope
    exact: bool | None  # None without a reference body
    contained: bool | None
    volume_gap: Fraction | None
    hausdorff_approx: float | None  # floating point, diagnostic only


def _hausdorff_approx(P: Polytope, K: Polytope) -> float:
    def dist(x: np.ndarray, V: np.ndarray) -> float:
        # min ||V^T l - x|| with l >= 0, sum l = 1 (sum enforced by a heavy row)
        w = 1e3
        A = np.vstack([V.T, w * np.ones(len(V))])
        b = np.concatenate([x, [w]])
        lam, _ = nnls(A, b)
        return float(np.linalg.norm(V.T @ lam - x))

    VP = np.array([[float(c) for c in v] for v in P.vertices])
    VK = np.array([[float(c) for c in v] for v in K.vertices])
    d1 = max(dist(x, VK) for x in VP)
    d2 = max(dist(x, VP) for x in VK)
    return max(d1, d2)


def series_okounkov_body(W: MonomialSeries, m_max: int, reference: Polytope | None = None) -> SeriesBody:
    """hull of ∪_{m<=m_max} (1/m) ν(W_m), compared against ``reference``."""
    if m_max < 1 or m_max > W.max_degree:
        raise ValidationError("m_max out of range")
    pts = []
    for m in range(1, m_max + 1):
        pts.extend(tuple(Fraction(x, m) for x in v) for v in W.pieces[m])
    P = convex_hull(pts, W.dim)
    if reference is None:
        return SeriesBody(P, None, None, None, None)
    exact = P == reference
    contained = P.issubset(reference)
    gap = polytope_volume(reference) - polytope_volume(P)
    return SeriesBody(P, exact, contained, gap, 0.0 if exact else _hausdorff_approx(P, reference))


def surrogate_condition_b(W: MonomialSeries) -> int | None:
    """Smallest m whose valuation image contains 0 and every unit vector.

    A finite stand-in for the birationality condition on the series; None
    when no degree up to ``max_degree`` qualifies.
    """
    need = [(0,) * W.dim] + [tuple(int(i == j) for j in range(W.dim)) for i in range(W.dim)]
    for m in range(1, W.max_degree + 1):
        if all(v in W.pieces[m] for v in need):
            return m
    return None


# -- monomial ideals --------------------------------------------------------


def _minimal_generators(gens: Iterable[Sequence[int]]) -> list[Exponents]:
    gs = sorted(set(tuple(int(x) for x in g) for g in gens))
    out = []
    for g in gs:
        if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gs):
            out.append(g)
    return out


def _pure_powers(gens: list[Exponents], d: int) -> list[int] | None:
    powers = []
    for i in range(d):
        cands = [g[i] for g in gens if all(g[j] == 0 for j in range(d) if j != i) and g[i] > 0]
        if not cands:
            return None
        powers.append(min(cands))
    return powers


def _check_primary(gens: Sequence[Sequence[int]]) -> tuple[list[Exponents], list[int]]:
    gs = _minimal_generators(gens)
    if not gs:
        raise HypothesisError("ideal is zero", reason="not-m-primary")
    d = len(gs[0])
    if any(len(g) != d for g in gs):
        raise ValidationError("generators have mixed lengths")
    if any(not any(g) for g in gs):
        return gs, [0] * d  # unit ideal
    powers = _pure_powers(gs, d)
    if powers is None:
        raise HypothesisError("ideal is not primary to the maximal ideal", reason="not-m-primary")
    return gs, powers


def in_ideal(e: Sequence[int], gens: Sequence[Exponents]) -> bool:
    return any(all(a >= b for a, b in zip(e, g)) for g in gens)


def ideal_colength(gens: Sequence[Sequence[int]]) -> int:
    """Number of standard monomials (monomials outside the ideal)."""
    gs, powers = _check_primary(gens)
    return sum(1 for e in itertools.product(*(range(p) for p in powers)) if not in_ideal(e, gs))


def ideal_multiplicity(gens: Sequence[Sequence[int]]) -> Fraction:
    """d! times the covolume of the Newton polyhedron."""
    gs, powers = _check_primary(gens)
    d = len(gs[0])
    if not any(powers):
        return Fraction(0)
    R = max(max(g) for g in gs)
    pts = []
    for g in gs:
        for subset in itertools.product((False, True), repeat=d):
            pts.append(tuple(R if up else g[i] for i, up in enumerate(subset)))
    inside = polytope_volume(convex_hull(pts, d))
    return factorial(d) * (Fraction(R) ** d - inside)


@dataclass(frozen=True)
class MonomialIdealFamily:
    nvars: int
    ideals: tuple[tuple[Exponents, ...], ...]  # ideals[k-1] = generators of a_k

    @property
    def max_index(self) -> int:
        return len(self.ideals)

    def ideal(self, k: int) -> tuple[Exponents, ...]:
        if k == 0:
            return ((0,) * self.nvars,)
        return self.ideals[k - 1]

    def check(self) -> list[str]:
        problems = []
        for k in range(1, self.max_index + 1):
            try:
                _check_primary(self.ideal(k))
            except HypothesisError:
                problems.append(f"a_{k} is not m-primary")
        for k in range(1, self.max_index + 1):
            for l in range(k, self.max_index + 1 - k):
                target = self.ideal(k + l)
                for g in self.ideal(k):
                    for h in self.ideal(l):
                        if not in_ideal(tuple(a + b for a, b in zip(g, h)), target):
                            problems.append(f"a_{k} a_{l} not inside a_{k + l}")
                            break
                    else:
                        continue
                    break
        return problems

    @classmethod
    def from_rule(cls, nvars: int, max_index: int, rule) -> "MonomialIdealFamily":
        return cls(nvars, tuple(tuple(_minimal_generators(rule(k))) for k in range(1, max_index + 1)))


def valuation_family(weights: Sequence[int], max_index: int) -> MonomialIdealFamily:
    """a_k = (x^e : sum w_i e_i >= k), the valuation ideals of a monomial valuation."""
    d = len(weights)

    def rule(k):
        gens = []
        for e in itertools.product(*(range(-(-k // w) + 1) for w in weights)):
            if sum(w * x for w, x in zip(weights, e)) >= k:
                gens.append(e)
        return gens

    return MonomialIdealFamily.from_rule(d, max_index, rule)


def power_family(gens: Sequence[Sequence[int]], step: int, max_index: int) -> MonomialIdealFamily:
    """a_k = a^(step*k)."""
    base = _minimal_generators(gens)
    d = len(base[0])

    def rule(k):
        cur = {(0,) * d}
        for _ in range(step * k):
            cur = set(_minimal_generators(tuple(a + b for a, b in zip(c, g)) for c in cur for g in base))
        return cur

    return MonomialIdealFamily.from_rule(d, max_index, rule)


def family_multiplicity_check(F: MonomialIdealFamily, m_max: int) -> tuple[list[tuple[int, Fraction]], list[tuple[int, Fraction]]]:
    """Sequences d! colength(a_m)/m^d and e(a_p)/p^d for 1 <= m, p <= m_max."""
    if m_max > F.max_index:
        raise ValidationError("m_max beyond the family")
    d = F.nvars
    col = [(m, Fraction(factorial(d) * ideal_colength(F.ideal(m)), m**d)) for m in range(1, m_max + 1)]
    mult = [(p, ideal_multiplicity(F.ideal(p)) / p**d) for p in range(1, m_max + 1)]
    return col, mult
