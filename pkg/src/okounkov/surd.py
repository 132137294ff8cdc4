"""Exact real numbers of the form r0 + sum c_i * sqrt(s_i).

Irrational endpoints of surface bodies (roots of quadratics) and sums of
them are carried as :class:`Surd` values.  Zero testing is exact: square
roots of integers with distinct squarefree parts are linearly independent
over Q, so after merging radicands whose ratio is a perfect square a surd
vanishes iff every coefficient does.  Signs of nonzero surds are then
decided by refining integer square-root brackets until the enclosing
interval excludes zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

NumberLike = Union[int, Fraction, "Surd"]

_SMALL_PRIMES = [p for p in range(2, 200) if all(p % q for q in range(2, int(p**0.5) + 1))]


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _strip_squares(n: int) -> tuple[int, int]:
    """Return (k, s) with n = k*k*s, removing small square factors only."""
    k = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            k *= p
    r = isqrt(n)
    if r * r == n:
        return k * r, 1
    return k, n


class Surd:
    """Immutable exact value ``sum(coeff * sqrt(radicand))``.

    ``terms`` maps positive integer radicands to nonzero Fraction
    coefficients; radicand 1 holds the rational part.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self._terms = _normalize(terms or {})
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, value: NumberLike) -> "Surd":
        if isinstance(value, Surd):
            return value
        if isinstance(value, (int, Fraction, Rational)):
            return cls({1: Fraction(value)})
        raise TypeError(f"cannot convert {type(value).__name__} to Surd")

    @classmethod
    def sqrt(cls, value) -> "Surd":
        """Exact square root of a nonnegative rational."""
        q = Fraction(value)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        return cls({q.numerator * q.denominator: Fraction(1, q.denominator)})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.rational_part()

    def __float__(self) -> float:
        return float(sum(float(c) * (r ** 0.5) for r, c in self._terms.items()))

    def approx(self, digits: int = 30) -> str:
        lo, hi = self._bracket(4 * digits + 8)
        return f"{float((lo + hi) / 2):.{min(digits, 17)}g}"

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = Surd.of(other)
        except TypeError:
            return NotImplemented
        t = dict(self._terms)
        for r, c in o._terms.items():
            t[r] = t.get(r, Fraction(0)) + c
        return Surd(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd({r: -c for r, c in self._terms.items()})

    def __sub__(self, other):
        try:
            return self + (-Surd.of(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return Surd.of(other) - self

    def __mul__(self, other):
        try:
            o = Surd.of(other)
        except TypeError:
            return NotImplemented
        t: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in o._terms.items():
                k, s = _strip_squares(r1 * r2)
                t[s] = t.get(s, Fraction(0)) + c1 * c2 * k
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Surd):
            if not other.is_rational():
                if other.rational_part() == 0 and len(other._terms) == 1:
                    ((r, c),) = other._terms.items()
                    return self * Surd({r: 1 / (c * r)})
                raise ValueError("division by a non-monomial surd is not supported")
            other = other.rational_part()
        other = Fraction(other)
        if other == 0:
            raise ZeroDivisionError("surd division by zero")
        return Surd({r: c / other for r, c in self._terms.items()})

    # order --------------------------------------------------------------
    def sign(self) -> int:
        if not self._terms:
            return 0
        bits = 16
        while True:
            lo, hi = self._bracket(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def _bracket(self, bits: int) -> tuple[Fraction, Fraction]:
        scale = 1 << bits
        lo = hi = Fraction(0)
        for r, c in self._terms.items():
            if r == 1:
                lo += c
                hi += c
                continue
            f = isqrt(r * scale * scale)
            a, b = Fraction(f, scale), Fraction(f + 1, scale)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def _cmp(self, other) -> int:
        return (self - Surd.of(other)).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for r in sorted(self._terms):
            c = self._terms[r]
            parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return " + ".join(parts)

    def to_json(self) -> dict:
        """Symbolic encoding; ``approx`` is a convenience decimal only."""
        if self.is_rational():
            q = self.rational_part()
            return {"kind": "rational", "value": [str(q.numerator), str(q.denominator)]}
        return {
            "kind": "quadratic" if len(self._terms) <= 2 else "surd",
            "terms": [
                {"radicand": str(r), "coeff": [str(c.numerator), str(c.denominator)]}
                for r, c in sorted(self._terms.items())
            ],
            "approx": self.approx(),
            "approx_is_exact": False,
        }


def _normalize(terms: dict[int, Fraction]) -> dict[int, Fraction]:
    clean: dict[int, Fraction] = {}
    for r, c in terms.items():
        c = Fraction(c)
        if c == 0:
            continue
        if r <= 0:
            raise ValueError("radicands must be positive")
        k, s = _strip_squares(int(r))
        clean[s] = clean.get(s, Fraction(0)) + c * k
    # merge radicands with a square ratio: sqrt(b) = isqrt(a*b)/a * sqrt(a)
    keys = sorted(clean)
    merged: dict[int, Fraction] = {}
    for r in keys:
        for base in merged:
            if _is_square(base * r):
                merged[base] += clean[r] * Fraction(isqrt(base * r), base)
                break
        else:
            merged[r] = clean[r]
    return {r: c for r, c in merged.items() if c != 0}


def as_surd(x: NumberLike) -> Surd:
    return Surd.of(x)


def smallest_root_above(a, b, c, lower=0, strict=True) -> Surd | None:
    """Smallest real root of ``a*t^2 + b*t + c`` greater than ``lower``.

    Returns None when no such root exists.  Coefficients are rationals.
    """
    a, b, c, lower = Fraction(a), Fraction(b), Fraction(c), Fraction(lower)
    roots: list[Surd] = []
    if a == 0:
        if b != 0:
            roots.append(Surd.of(-c / b))
    else:
        disc = b * b - 4 * a * c
        if disc >= 0:
            s = Surd.sqrt(disc)
            roots = [(Surd.of(-b) - s) / (2 * a), (Surd.of(-b) + s) / (2 * a)]
    roots = [r for r in roots if (r > lower if strict else r >= lower)]
    return min(roots) if roots else None
