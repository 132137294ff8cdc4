"""JSON encoding of exact values and parsing of the input schemas.

Integers are written as decimal strings and rationals as ``["num", "den"]``
so that large values survive any JSON reader.  Irrational values are
encoded symbolically with a decimal approximation marked as such.
Inputs accept plain ints, strings like ``"3/4"`` or ``[num, den]`` pairs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .geomcore import Polytope
from .surd import Surd


def parse_number(x: Any) -> Fraction:
    try:
        if isinstance(x, bool):
            raise TypeError
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ValueError
            return Fraction(int(x[0]), int(x[1]))
        if isinstance(x, float):
            raise ValidationError("floats are not accepted; use a rational string")
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {x!r}") from None


def parse_vector(v: Any) -> tuple[Fraction, ...]:
    if not isinstance(v, (list, tuple)):
        raise ValidationError(f"expected a list, got {v!r}")
    return tuple(parse_number(x) for x in v)


def parse_int_vector(v: Any) -> tuple[int, ...]:
    out = parse_vector(v)
    if any(x.denominator != 1 for x in out):
        raise ValidationError(f"expected integers, got {v!r}")
    return tuple(int(x) for x in out)


def number_json(x) -> Any:
    if isinstance(x, Surd):
        if not x.is_rational():
            return x.to_json()
        x = x.to_fraction()
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return [str(x.numerator), str(x.denominator)]


def tagged_json(x) -> dict:
    """Always-tagged form used for endpoints that may be irrational."""
    return (x if isinstance(x, Surd) else Surd.of(Fraction(x))).to_json()


def vector_json(v) -> list:
    return [number_json(x) for x in v]


def polytope_json(P: Polytope) -> dict:
    return {
        "dim": P.dim,
        "vertices": [vector_json(v) for v in sorted(P.vertices)],
        "facets": [{"normal": [str(a) for a in n], "offset": number_json(b)} for n, b in sorted(P.facets)],
        "equations": [{"normal": [str(a) for a in n], "offset": number_json(b)} for n, b in sorted(P.equations)],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}", reason="unreadable-input") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e.msg}", reason="bad-json") from None


def require(doc: dict, key: str, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"missing field {key!r}", reason="schema")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise ValidationError(f"field {key!r} has the wrong type", reason="schema")
    return val


# -- schema readers -----------------------------------------------------------


def read_points(doc: dict) -> tuple[int, list]:
    pts = [parse_vector(p) for p in require(doc, "points", list)]
    dim = int(doc.get("dim", len(pts[0]) if pts else 0))
    return dim, pts


def read_semigroup(doc: dict):
    from .semigroup import GradedSemigroup, curve_semigroup

    if "curve" in doc:
        c = require(doc, "curve", dict)
        return curve_semigroup(int(require(c, "c")), int(require(c, "g")), int(c.get("max_degree", 400)))
    d = int(require(doc, "value_dim"))
    r = int(doc.get("grading_dim", 1))
    if "generators" in doc:
        return GradedSemigroup(d, r, generators=[parse_int_vector(g) for g in require(doc, "generators", list)])
    slices = require(doc, "slices", dict)
    table = {}
    for key, pts in slices.items():
        deg = tuple(int(x) for x in key.split(",")) if r > 1 else int(key)
        table[deg] = [parse_int_vector(p) for p in pts]
    top = int(doc.get("max_degree", max((k if isinstance(k, int) else max(k)) for k in table)))
    rays = doc.get("closure_rays")
    return GradedSemigroup(
        d, r, slices=table, max_degree=top, closure_rays=[parse_vector(x) for x in rays] if rays else None
    )


def read_fan(doc: dict):
    from .toric import ToricModel

    return ToricModel(
        int(require(doc, "rank")),
        tuple(parse_int_vector(v) for v in require(doc, "rays", list)),
        tuple(tuple(int(i) for i in c) for c in require(doc, "max_cones", list)),
    )


def read_toric_job(doc: dict):
    from .toric import FlagChart, InvariantDivisor

    fan = read_fan(require(doc, "fan", dict))
    D = InvariantDivisor(parse_vector(require(doc, "divisor", list)))
    chart = doc.get("chart", list(fan.max_cones[0]))
    return fan, D, FlagChart(tuple(int(i) for i in chart))


def read_surface(doc: dict):
    from .surface import QUADRIC, SurfaceModel

    return SurfaceModel(
        tuple(parse_vector(r) for r in require(doc, "Q", list)),
        parse_vector(require(doc, "h", list)),
        doc.get("mode", QUADRIC),
        tuple(parse_vector(c) for c in doc.get("curves", [])),
    )


def read_surface_job(doc: dict):
    from .surface import FlagData

    S = read_surface(require(doc, "model", dict))
    D = parse_vector(require(doc, "divisor", list))
    flag_doc = doc.get("flag")
    flag = None
    if flag_doc is not None:
        mult = {int(k): parse_number(v) for k, v in flag_doc.get("mult", {}).items()}
        flag = FlagData.of(parse_vector(require(flag_doc, "curve", list)), mult)
    return S, D, flag


def read_family(doc: dict):
    from .monomial import MonomialIdealFamily

    d = int(require(doc, "vars"))
    ideals = require(doc, "ideals", dict)
    keys = sorted(int(k) for k in ideals)
    if keys != list(range(1, len(keys) + 1)):
        raise ValidationError("ideals must be indexed 1..n without gaps", reason="schema")
    return MonomialIdealFamily(d, tuple(tuple(parse_int_vector(g) for g in ideals[str(k)]) for k in keys))
