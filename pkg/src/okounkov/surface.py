"""Surfaces given by an intersection form: Zariski decomposition, μ-invariants,
restricted intervals and the two-dimensional Okounkov bodies bounded by the
graphs of α and β, together with the slicing and derivative identities.

Two kinds of models are supported.  In quadric mode there are no negative
curves and the pseudo-effective cone is {q >= 0, . h >= 0} (the abelian
surface picture).  In curves mode a finite list of curve classes is given
and every statement is relative to that list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import linalg
from .errors import HypothesisError, ValidationError
from .geomcore import Polytope, convex_hull, minkowski_sum
from .surd import Surd, as_surd, smallest_root_above

Number = Union[Fraction, Surd]
Class = tuple[Fraction, ...]

QUADRIC = "quadric"
CURVES = "curves"


def _exact(x: Number) -> Number:
    """Collapse rational surds to Fractions."""
    if isinstance(x, Surd) and x.is_rational():
        return x.to_fraction()
    return x


def _cls(xs: Sequence) -> Class:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class SurfaceModel:
    Q: tuple[tuple[Fraction, ...], ...]
    h: Class
    mode: str = QUADRIC
    curves: tuple[Class, ...] = ()

    def __post_init__(self):
        Q = tuple(_cls(r) for r in self.Q)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "h", _cls(self.h))
        object.__setattr__(self, "curves", tuple(_cls(c) for c in self.curves))
        rho = len(Q)
        if rho == 0 or any(len(r) != rho for r in Q):
            raise ValidationError("intersection matrix must be square")
        if any(Q[i][j] != Q[j][i] for i in range(rho) for j in range(rho)):
            raise ValidationError("intersection matrix must be symmetric")
        if linalg.inertia(Q) != (1, rho - 1, 0):
            raise ValidationError("intersection form must have signature (1, rho-1)", reason="bad-signature")
        if len(self.h) != rho:
            raise ValidationError("reference class has wrong length")
        if self.q(self.h) <= 0:
            raise ValidationError("reference class must have positive square")
        if self.mode not in (QUADRIC, CURVES):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.mode == QUADRIC and self.curves:
            raise ValidationError("quadric models carry no curves")
        for c in self.curves:
            if len(c) != rho:
                raise ValidationError("curve class has wrong length")
            if self.B(c, self.h) <= 0:
                raise ValidationError("curves must meet the reference class positively")

    @classmethod
    def build(cls, Q, h, mode=QUADRIC, curves=()) -> "SurfaceModel":
        return cls(tuple(tuple(r) for r in Q), tuple(h), mode, tuple(tuple(c) for c in curves))

    @property
    def rank(self) -> int:
        return len(self.Q)

    def B(self, x: Sequence, y: Sequence):
        return sum((x[i] * self.Q[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if self.Q[i][j]), Fraction(0))

    def q(self, x: Sequence):
        return self.B(x, x)

    def is_nef(self, x: Sequence) -> bool:
        """Model-relative: q >= 0, x.h >= 0 and x.C >= 0 on listed curves."""
        return self.q(x) >= 0 and self.B(x, self.h) >= 0 and all(self.B(x, c) >= 0 for c in self.curves)

    def curve_index(self, c: Sequence) -> int | None:
        c = _cls(c)
        return next((i for i, x in enumerate(self.curves) if x == c), None)


def abelian_model() -> SurfaceModel:
    return SurfaceModel.build([[1, 0, 0], [0, -1, 0], [0, 0, -1]], [1, 0, 0])


def blowup_model() -> SurfaceModel:
    """P^2 blown up at a point; basis (H, E)."""
    return SurfaceModel.build([[1, 0], [0, -1]], [2, -1], CURVES, [[0, 1], [1, -1]])


def two_point_blowup_model() -> SurfaceModel:
    """P^2 blown up at two points; basis (H, E1, E2), curves E1, E2 and the
    line through both points."""
    return SurfaceModel.build(
        [[1, 0, 0], [0, -1, 0], [0, 0, -1]], [3, -1, -1], CURVES, [[0, 1, 0], [0, 0, 1], [1, -1, -1]]
    )


# -- Zariski decomposition ------------------------------------------------------


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: Class
    negative: tuple[tuple[int, Fraction], ...]  # (curve index, coefficient > 0)

    def coefficient(self, j: int) -> Fraction:
        return dict(self.negative).get(j, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.negative)


class _Aff:
    """x0 + x1*(t - t0), compared at t0+ (value first, then slope)."""

    __slots__ = ("v", "s")

    def __init__(self, v, s=Fraction(0)):
        self.v, self.s = Fraction(v), Fraction(s)

    def __add__(self, o):
        return _Aff(self.v + o.v, self.s + o.s)

    def __sub__(self, o):
        return _Aff(self.v - o.v, self.s - o.s)

    def scale(self, c):
        return _Aff(self.v * c, self.s * c)

    def sign(self) -> int:
        if self.v:
            return 1 if self.v > 0 else -1
        return (self.s > 0) - (self.s < 0)


def _gram(S: SurfaceModel, support: Sequence[int]) -> list[list[Fraction]]:
    return [[S.B(S.curves[i], S.curves[j]) for j in support] for i in support]


def _support_at(S: SurfaceModel, D: Class, direction: Class) -> tuple[list[int], list[list[Fraction]]]:
    """Negative support of D + ε·direction for small ε > 0, and the inverse
    Gram matrix of that support."""
    support: list[int] = []
    while True:
        if support:
            G = _gram(S, support)
            if linalg.inertia(G) != (0, len(support), 0):
                raise HypothesisError("model curves inconsistent", reason="model-inconsistent")
            Ginv = linalg.inverse(G)
        else:
            Ginv = []
        rhs = [_Aff(S.B(D, S.curves[j]), S.B(direction, S.curves[j])) for j in support]
        n = [sum((rhs[k].scale(Ginv[i][k]) for k in range(len(support))), _Aff(0)) for i in range(len(support))]
        if any(x.sign() < 0 for x in n):
            raise HypothesisError("model curves inconsistent", reason="model-inconsistent")
        new = []
        for j, c in enumerate(S.curves):
            if j in support:
                continue
            val = _Aff(S.B(D, c), S.B(direction, c))
            for i, x in zip(support, n):
                val = val - x.scale(S.B(S.curves[i], c))
            if val.sign() < 0:
                new.append(j)
        if not new:
            # drop curves whose coefficient is identically zero at t0+
            keep = [i for i, x in zip(support, n) if x.sign() > 0]
            if keep != support:
                support = keep
                continue
            return support, Ginv
        support = sorted(support + new)


def _negative_part(S: SurfaceModel, D: Class, support: Sequence[int], Ginv) -> list[Fraction]:
    b = [S.B(D, S.curves[j]) for j in support]
    return [sum((Ginv[i][k] * b[k] for k in range(len(support))), Fraction(0)) for i in range(len(support))]


def zariski_decomposition(S: SurfaceModel, D: Sequence) -> ZariskiDecomposition:
    D = _cls(D)
    if len(D) != S.rank:
        raise ValidationError("class has wrong length")
    if S.mode == QUADRIC:
        return ZariskiDecomposition(D, ())
    zero = (Fraction(0),) * S.rank
    support, Ginv = _support_at(S, D, zero)
    n = _negative_part(S, D, support, Ginv)
    P = list(D)
    for j, x in zip(support, n):
        P = [p - x * c for p, c in zip(P, S.curves[j])]
    return ZariskiDecomposition(tuple(P), tuple((j, x) for j, x in zip(support, n) if x))


def is_big(S: SurfaceModel, D: Sequence) -> bool:
    D = _cls(D)
    P = zariski_decomposition(S, D).positive
    return S.q(P) > 0 and S.B(P, S.h) > 0


def _require_big(S: SurfaceModel, D: Class) -> ZariskiDecomposition:
    Z = zariski_decomposition(S, D)
    if not (S.q(Z.positive) > 0 and S.B(Z.positive, S.h) > 0):
        raise HypothesisError("divisor is not big", reason="not-big")
    return Z


def surface_volume(S: SurfaceModel, D: Sequence) -> Fraction:
    """q(P); zero for classes that are not big."""
    D = _cls(D)
    Z = zariski_decomposition(S, D)
    P = Z.positive
    if S.q(P) > 0 and S.B(P, S.h) > 0:
        return S.q(P)
    return Fraction(0)


# -- piecewise linear functions -----------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous function given by breakpoints t_0 < ... < t_k and affine
    pieces (slope, intercept) on [t_i, t_{i+1}].  Only the last breakpoint may
    be irrational."""

    breakpoints: tuple[Number, ...]
    pieces: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise ValidationError("need one piece per interval")
        for i in range(1, len(self.pieces)):
            t = self.breakpoints[i]
            (s0, c0), (s1, c1) = self.pieces[i - 1], self.pieces[i]
            if s0 * t + c0 != s1 * t + c1:
                raise ValidationError("piecewise linear function is discontinuous")

    @property
    def domain(self) -> tuple[Number, Number]:
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, t: Number) -> Number:
        lo, hi = self.domain
        if t < lo or t > hi:
            raise ValidationError("argument outside the domain")
        for i, (s, c) in enumerate(self.pieces):
            if t <= self.breakpoints[i + 1]:
                return _exact(s * t + c) if isinstance(t, Surd) else s * t + c
        s, c = self.pieces[-1]
        return s * t + c

    @property
    def slopes(self) -> list[Fraction]:
        return [s for s, _ in self.pieces]

    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_concave(self) -> bool:
        return all(a >= b for a, b in zip(self.slopes, self.slopes[1:]))

    def integral(self) -> Number:
        total: Number = Fraction(0)
        for i, (s, c) in enumerate(self.pieces):
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            total = total + (b * b - a * a) * (s / 2) + (b - a) * c
        return _exact(total)

    def shift(self, dt: Fraction, dy: Fraction = Fraction(0)) -> "PiecewiseLinearFn":
        """The function t -> f(t - dt) + dy."""
        return PiecewiseLinearFn(
            tuple(_exact(t + dt) for t in self.breakpoints),
            tuple((s, c - s * dt + dy) for s, c in self.pieces),
        )

    def scale(self, p: Fraction) -> "PiecewiseLinearFn":
        """The function t -> p f(t / p), whose graph is p times the graph of f."""
        return PiecewiseLinearFn(tuple(_exact(t * p) for t in self.breakpoints), tuple((s, c * p) for s, c in self.pieces))

    def restrict(self, lo: Fraction, hi: Number | None = None) -> "PiecewiseLinearFn":
        a, b = self.domain
        hi = b if hi is None else hi
        if lo < a or hi > b or lo >= hi:
            raise ValidationError("restriction outside the domain")
        bps, pcs = [lo], []
        for i, pc in enumerate(self.pieces):
            l, r = self.breakpoints[i], self.breakpoints[i + 1]
            if r <= lo or l >= hi:
                continue
            pcs.append(pc)
            bps.append(r if r < hi else hi)
        return PiecewiseLinearFn(tuple(bps), tuple(pcs)).simplified()

    def simplified(self) -> "PiecewiseLinearFn":
        """Merge adjacent pieces with the same affine function."""
        bps, pcs = [self.breakpoints[0]], []
        for i, pc in enumerate(self.pieces):
            if pcs and pcs[-1] == pc:
                bps[-1] = self.breakpoints[i + 1]
            else:
                pcs.append(pc)
                bps.append(self.breakpoints[i + 1])
        return PiecewiseLinearFn(tuple(bps), tuple(pcs))

    def kinks(self) -> list[Number]:
        """Interior breakpoints where the slope actually changes."""
        f = self.simplified()
        return list(f.breakpoints[1:-1])

    def same_as(self, other: "PiecewiseLinearFn") -> bool:
        a, b = self.simplified(), other.simplified()
        return a.breakpoints == b.breakpoints and a.pieces == b.pieces

    def to_json(self) -> list[dict]:
        from .io import number_json

        return [
            {"from": number_json(self.breakpoints[i]), "to": number_json(self.breakpoints[i + 1]), "slope": number_json(s), "intercept": number_json(c)}
            for i, (s, c) in enumerate(self.pieces)
        ]


# -- μ and the sweep ---------------------------------------------------------------


@dataclass(frozen=True)
class FlagData:
    """Flag X ⊇ C ⊇ {x}.  ``mult`` maps curve indices to mult_x(C_j, C);
    curves missing from the table do not pass through x."""

    curve: Class
    mult: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, curve: Sequence, mult: Mapping[int, object] | None = None) -> "FlagData":
        return cls(_cls(curve), tuple(sorted((int(k), Fraction(v)) for k, v in (mult or {}).items())))

    def ord_x(self, Z: ZariskiDecomposition) -> Fraction:
        m = dict(self.mult)
        return sum((x * m.get(j, Fraction(0)) for j, x in Z.negative), Fraction(0))


@dataclass(frozen=True)
class _Chamber:
    start: Fraction
    end: Number
    support: tuple[int, ...]
    # N_t = sum (n0 + n1 t) C_j, P_t = p0 + p1 t
    n: tuple[tuple[Fraction, Fraction], ...]
    p0: Class
    p1: Class


def _check_flag_curve(S: SurfaceModel, C: Class) -> None:
    if len(C) != S.rank:
        raise ValidationError("flag curve has wrong length")
    if S.B(C, S.h) <= 0:
        raise ValidationError("flag curve must meet the reference class positively", reason="unbounded-direction")


def _chamber_from(S: SurfaceModel, D: Class, C: Class, t0: Fraction) -> _Chamber:
    """The chamber of the sweep t -> D - tC starting at t0 (open to the right)."""
    direction = tuple(-x for x in C)
    Dt0 = tuple(d - t0 * c for d, c in zip(D, C))
    if S.mode == QUADRIC:
        support, Ginv = [], []
    else:
        support, Ginv = _support_at(S, Dt0, direction)
    # n(t) = Ginv (D.C_k - t C.C_k)
    b0 = [S.B(D, S.curves[j]) for j in support]
    b1 = [-S.B(C, S.curves[j]) for j in support]
    n = []
    for i in range(len(support)):
        n.append(
            (
                sum((Ginv[i][k] * b0[k] for k in range(len(support))), Fraction(0)),
                sum((Ginv[i][k] * b1[k] for k in range(len(support))), Fraction(0)),
            )
        )
    p0, p1 = list(D), [-x for x in C]
    for j, (a0, a1) in zip(support, n):
        p0 = [p - a0 * c for p, c in zip(p0, S.curves[j])]
        p1 = [p - a1 * c for p, c in zip(p1, S.curves[j])]
    # next linear event: a new curve goes negative or a coefficient reaches zero
    events = []
    for j, c in enumerate(S.curves):
        if j in support:
            continue
        v0, v1 = S.B(p0, c), S.B(p1, c)
        if v1 < 0:
            events.append(-v0 / v1)
    for a0, a1 in n:
        if a1 < 0:
            events.append(-a0 / a1)
    events = [e for e in events if e > t0]
    t_lin = min(events) if events else None
    # end of bigness: first root of q(P_t) beyond t0
    qa, qb, qc = S.q(p1), 2 * S.B(p0, p1), S.q(p0)
    root = smallest_root_above(qa, qb, qc, lower=t0, strict=True)
    if root is None:
        # P_t leaves the positive cone only through q = 0 when C.h > 0
        raise HypothesisError("unbounded direction", reason="unbounded-direction")
    root = _exact(root)
    end = t_lin if t_lin is not None and t_lin < root else root
    return _Chamber(t0, end, tuple(support), tuple(n), tuple(p0), tuple(p1))


def _sweep(S: SurfaceModel, D: Class, C: Class, limit: int = 1000) -> list[_Chamber]:
    chambers = [_chamber_from(S, D, C, Fraction(0))]
    while isinstance(chambers[-1].end, Fraction) and len(chambers) < limit:
        t = chambers[-1].end
        Pt = tuple(a + t * b for a, b in zip(chambers[-1].p0, chambers[-1].p1))
        if S.q(Pt) <= 0:
            break
        chambers.append(_chamber_from(S, D, C, t))
    return chambers


def _strip_flag_curve(S: SurfaceModel, D: Class, C: Class) -> tuple[Fraction, Class]:
    """(a, D - aC) with a the coefficient of C in the negative part of D."""
    j = S.curve_index(C) if S.mode == CURVES else None
    if j is None:
        return Fraction(0), D
    a = zariski_decomposition(S, D).coefficient(j)
    return a, tuple(d - a * c for d, c in zip(D, C))


def mu_invariant(S: SurfaceModel, D: Sequence, C: Sequence) -> Number:
    """sup{s > 0 : D - sC big}."""
    D, C = _cls(D), _cls(C)
    _check_flag_curve(S, C)
    _require_big(S, D)
    if S.mode == QUADRIC:
        root = smallest_root_above(S.q(C), -2 * S.B(D, C), S.q(D), lower=0, strict=True)
        if root is None:
            raise HypothesisError("unbounded direction", reason="unbounded-direction")
        return _exact(root)
    a, D0 = _strip_flag_curve(S, D, C)
    return _exact(a + _sweep(S, D0, C)[-1].end)


def restricted_interval(S: SurfaceModel, D: Sequence, flag: FlagData) -> tuple[Fraction, Fraction]:
    """[ord_x(N|C), ord_x(N|C) + C.P]."""
    D = _cls(D)
    Z = _require_big(S, D)
    j = S.curve_index(flag.curve) if S.mode == CURVES else None
    if j is not None and Z.coefficient(j) > 0:
        raise HypothesisError("flag curve in B_+", reason="flag-in-augmented-base-locus")
    alpha = flag.ord_x(Z)
    return alpha, alpha + S.B(flag.curve, Z.positive)


# -- bodies -----------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceBody:
    a: Fraction
    mu: Number
    alpha: PiecewiseLinearFn
    beta: PiecewiseLinearFn

    @property
    def rational(self) -> bool:
        return isinstance(self.mu, Fraction)

    def breakpoints(self) -> list[Number]:
        pts = set(self.alpha.breakpoints) | set(self.beta.breakpoints)
        return sorted(pts)

    def polygon(self) -> list[tuple[Number, Number]]:
        """Vertices in counterclockwise order (exact; may contain surds)."""
        lower = [(t, self.alpha(t)) for t in self.alpha.simplified().breakpoints]
        upper = [(t, self.beta(t)) for t in self.beta.simplified().breakpoints]
        pts = lower + [p for p in reversed(upper)]
        out = []
        for p in pts:
            if not out or out[-1] != p:
                out.append(p)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    def as_polytope(self) -> Polytope:
        if not self.rational:
            raise ValidationError("body has an irrational vertex; truncate it first")
        return convex_hull(self.polygon(), 2)

    def truncate(self, mu_prime: Fraction) -> "SurfaceBody":
        """Δ ∩ ([a, μ'] × R), a rational polygon when μ' is rational."""
        mu_prime = Fraction(mu_prime)
        if not (self.a < mu_prime <= self.mu):
            raise ValidationError("truncation point outside (a, mu]")
        return SurfaceBody(self.a, mu_prime, self.alpha.restrict(self.a, mu_prime), self.beta.restrict(self.a, mu_prime))

    def area(self) -> Number:
        return _exact(self.beta.integral() - self.alpha.integral())

    def contains(self, t: Number, y: Number) -> bool:
        if t < self.a or t > self.mu:
            return False
        return self.alpha(t) <= y <= self.beta(t)

    def fiber(self, t: Number) -> tuple[Number, Number] | None:
        if t < self.a or t > self.mu:
            return None
        return self.alpha(t), self.beta(t)

    def shape_ok(self) -> bool:
        return (
            self.alpha.is_convex()
            and self.beta.is_concave()
            and all(self.alpha(t) <= self.beta(t) for t in self.breakpoints())
        )

    def same_as(self, other: "SurfaceBody") -> bool:
        return self.a == other.a and self.mu == other.mu and self.alpha.same_as(other.alpha) and self.beta.same_as(other.beta)

    def shift(self, dt: Fraction) -> "SurfaceBody":
        return SurfaceBody(self.a + dt, _exact(self.mu + dt), self.alpha.shift(dt), self.beta.shift(dt))

    def scale(self, p: Fraction) -> "SurfaceBody":
        p = Fraction(p)
        return SurfaceBody(self.a * p, _exact(self.mu * p), self.alpha.scale(p), self.beta.scale(p))


def okounkov_body_surface(S: SurfaceModel, D: Sequence, flag: FlagData) -> SurfaceBody:
    D, C = _cls(D), flag.curve
    _check_flag_curve(S, C)
    _require_big(S, D)
    a, D0 = _strip_flag_curve(S, D, C)
    chambers = _sweep(S, D0, C)
    m = dict(flag.mult)
    bps = [a + ch.start for ch in chambers] + [_exact(a + chambers[-1].end)]
    al, be = [], []
    for ch in chambers:
        # α(t) = Σ n_j(t) mult_j, β = α + C.P_t, in the shifted variable t - a
        s_al = sum((a1 * m.get(j, 0) for j, (a0, a1) in zip(ch.support, ch.n)), Fraction(0))
        c_al = sum((a0 * m.get(j, 0) for j, (a0, a1) in zip(ch.support, ch.n)), Fraction(0))
        s_be = s_al + S.B(C, ch.p1)
        c_be = c_al + S.B(C, ch.p0)
        al.append((s_al, c_al - s_al * a))
        be.append((s_be, c_be - s_be * a))
    alpha = PiecewiseLinearFn(tuple(bps), tuple(al)).simplified()
    beta = PiecewiseLinearFn(tuple(bps), tuple(be)).simplified()
    return SurfaceBody(a, bps[-1], alpha, beta)


@dataclass(frozen=True)
class SliceReport:
    t: Fraction
    upper_part_ok: bool
    fiber_ok: bool | None  # None when t lies left of the body

    @property
    def ok(self) -> bool:
        return self.upper_part_ok and self.fiber_ok is not False


def slice_check(S: SurfaceModel, D: Sequence, flag: FlagData, t) -> SliceReport:
    """Δ(D) ∩ {ν1 >= t} = Δ(D - tC) + (t, 0) and Δ(D) ∩ {ν1 = t} = Δ_{X|C}(D - tC)."""
    D, t = _cls(D), Fraction(t)
    body = okounkov_body_surface(S, D, flag)
    if t < 0 or t >= body.mu:
        raise ValidationError("t must satisfy 0 <= t < mu")
    Dt = tuple(d - t * c for d, c in zip(D, flag.curve))
    moved = okounkov_body_surface(S, Dt, flag).shift(t)
    if t <= body.a:
        upper = moved.same_as(body)
    else:
        upper = moved.same_as(SurfaceBody(t, body.mu, body.alpha.restrict(t), body.beta.restrict(t)))
    fiber_ok = None
    if t >= body.a:
        fiber_ok = body.fiber(t) == restricted_interval(S, Dt, flag)
    return SliceReport(t, upper, fiber_ok)


@dataclass(frozen=True)
class DerivativeReport:
    left: Fraction
    right: Fraction
    restricted_length: Fraction

    @property
    def value(self) -> Fraction:
        return self.right

    @property
    def ok(self) -> bool:
        return self.left == self.right == 2 * self.restricted_length


def _one_sided_derivative(S: SurfaceModel, D: Class, direction: Class) -> Fraction:
    """d/ds q(P(D + s·direction)) at s = 0+."""
    if S.mode == QUADRIC:
        return 2 * S.B(D, direction)
    support, Ginv = _support_at(S, D, direction)
    b1 = [S.B(direction, S.curves[j]) for j in support]
    dP = list(direction)
    for i, j in enumerate(support):
        coef = sum((Ginv[i][k] * b1[k] for k in range(len(support))), Fraction(0))
        dP = [p - coef * c for p, c in zip(dP, S.curves[j])]
    P = zariski_decomposition(S, D).positive
    return 2 * S.B(P, dP)


def volume_derivative(S: SurfaceModel, D: Sequence, flag: FlagData) -> DerivativeReport:
    """Both one-sided derivatives of s -> vol(D + sC) at 0, and β - α."""
    D, C = _cls(D), flag.curve
    al, be = restricted_interval(S, D, flag)
    right = _one_sided_derivative(S, D, C)
    left = -_one_sided_derivative(S, D, tuple(-x for x in C))
    return DerivativeReport(left, right, be - al)


# -- global body ----------------------------------------------------------------


def _pseudo_effective(S: SurfaceModel, x: Class) -> bool:
    if S.mode == QUADRIC:
        return S.q(x) >= 0 and S.B(x, S.h) >= 0
    try:
        P = zariski_decomposition(S, x).positive
    except HypothesisError:
        return False
    return S.q(P) >= 0 and S.B(P, S.h) >= 0


def _surd_sqrt_ge(v3: Fraction, v1: Fraction, v2: Fraction) -> bool:
    """sqrt(v3) >= sqrt(v1) + sqrt(v2), squared twice."""
    d = v3 - v1 - v2
    return d >= 0 and d * d >= 4 * v1 * v2


@dataclass
class ProbeReport:
    bodies: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)
    homogeneity: bool = True
    subadditivity: bool = True
    log_concavity: bool = True
    containment: bool = True
    shape: bool = True
    area_volume: bool = True

    @property
    def ok(self) -> bool:
        return all((self.homogeneity, self.subadditivity, self.log_concavity, self.containment, self.shape, self.area_volume))


def _minkowski_inside(A: SurfaceBody, B: SurfaceBody, AB: SurfaceBody) -> bool:
    if A.rational and B.rational and AB.rational:
        return minkowski_sum(A.as_polytope(), B.as_polytope()).issubset(AB.as_polytope())
    # exact vertex test; AB is convex so vertex sums suffice
    return all(AB.contains(_exact(p[0] + q[0]), _exact(p[1] + q[1])) for p in A.polygon() for q in B.polygon())


def global_body_probe(S: SurfaceModel, flag: FlagData, grid: Sequence[Sequence], scales=(2, 3)) -> ProbeReport:
    rep = ProbeReport()
    C = flag.curve
    classes = []
    for xi in grid:
        xi = _cls(xi)
        try:
            rep.bodies[xi] = okounkov_body_surface(S, xi, flag)
            classes.append(xi)
        except HypothesisError as e:
            rep.skipped.append((xi, e.reason))
    for xi in classes:
        body = rep.bodies[xi]
        vol = surface_volume(S, xi)
        rep.shape &= body.shape_ok()
        rep.area_volume &= as_surd(2 * body.area()) == as_surd(vol)
        for p in scales:
            scaled = okounkov_body_surface(S, tuple(p * x for x in xi), flag)
            rep.homogeneity &= scaled.same_as(body.scale(p))
        # points (ξ, t, y) of the body have ξ - tc pseudo-effective
        ts = [t for t in body.breakpoints() if isinstance(t, Fraction)]
        rep.containment &= all(_pseudo_effective(S, tuple(x - t * c for x, c in zip(xi, C))) for t in ts)
        end = tuple(_exact(x - body.mu * c) for x, c in zip(xi, C))
        if all(isinstance(x, Fraction) for x in end):
            rep.containment &= _pseudo_effective(S, end)
        elif S.mode == QUADRIC:
            rep.containment &= _q_surd(S, end) >= 0
    for i, x in enumerate(classes):
        for y in classes[i:]:
            s = tuple(a + b for a, b in zip(x, y))
            try:
                body_s = okounkov_body_surface(S, s, flag)
            except HypothesisError:
                rep.subadditivity = False
                continue
            rep.subadditivity &= _minkowski_inside(rep.bodies[x], rep.bodies[y], body_s)
            rep.log_concavity &= _surd_sqrt_ge(surface_volume(S, s), surface_volume(S, x), surface_volume(S, y))
    return rep


def _q_surd(S: SurfaceModel, x: Sequence[Number]) -> Surd:
    total = Surd.of(0)
    for i in range(S.rank):
        for j in range(S.rank):
            if S.Q[i][j]:
                total = total + as_surd(x[i]) * as_surd(x[j]) * S.Q[i][j]
    return total


# -- a scalar from a fourfold -------------------------------------------------


@dataclass(frozen=True)
class CutkoskyValue:
    value: Number
    well_posed: bool


def cutkosky_mu(S: SurfaceModel, A: Sequence, B1: Sequence, B2: Sequence, t) -> CutkoskyValue:
    """sup{s > 0 : ((1 - t - s)A - tB2 - sB1)^2 >= 0} on the quadric model.

    Writing w = (1-t)A - tB2 and u = A + B1 the class is w - su, so the
    answer is the smaller root of q(u)s^2 - 2B(w,u)s + q(w).
    """
    if S.mode != QUADRIC:
        raise ValidationError("the construction needs a quadric model")
    A, B1, B2, t = _cls(A), _cls(B1), _cls(B2), Fraction(t)
    for X in (A, B1, B2):
        if not (S.q(X) > 0 and S.B(X, S.h) > 0):
            raise ValidationError("A, B1, B2 must be ample")
    w = tuple((1 - t) * a - t * b for a, b in zip(A, B2))
    u = tuple(a + b for a, b in zip(A, B1))
    if not (S.q(w) >= 0 and S.B(w, S.h) >= 0):
        return CutkoskyValue(Fraction(0), False)
    root = smallest_root_above(S.q(u), -2 * S.B(w, u), S.q(w), lower=0, strict=False)
    if root is None:
        return CutkoskyValue(Fraction(0), False)
    return CutkoskyValue(_exact(root), True)


def second_difference(values: Sequence[Number]) -> Number:
    a, b, c = (as_surd(v) for v in values)
    return _exact(a - b * 2 + c)
