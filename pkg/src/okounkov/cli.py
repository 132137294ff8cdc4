"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a mathematical hypothesis fails
(the reason code is printed as JSON on stderr), 64 unknown command.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import io
from .errors import HypothesisError, OkounkovError, ValidationError
from .geomcore import Polytope, convex_hull, lattice_points, polytope_volume
from .surd import Surd

EX_USAGE = 64


# -- output helpers -------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, Surd):
        if x.is_rational():
            x = x.to_fraction()
        else:
            return repr(x)
    return str(Fraction(x))


def vertices_csv(vertices: Sequence[Sequence]) -> str:
    d = len(vertices[0]) if vertices else 0
    names = ["x", "y", "z"][:d] if d <= 3 else [f"x{i}" for i in range(d)]
    lines = [",".join(names + [f"{n}_approx" for n in names])]
    for v in vertices:
        lines.append(",".join([_fmt(x) for x in v] + [f"{float(x):.12g}" for x in v]))
    return "\n".join(lines) + "\n"


def polygon_svg(vertices: Sequence[Sequence], size: int = 400, pad: int = 20) -> str:
    """A single filled polygon; y grows upward as in the usual plots."""
    pts = [(float(x), float(y)) for x, y in vertices]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    w = max(max(xs) - min(xs), 1e-9)
    h = max(max(ys) - min(ys), 1e-9)
    s = (size - 2 * pad) / max(w, h)
    coords = " ".join(f"{pad + (x - min(xs)) * s:.3f},{size - pad - (y - min(ys)) * s:.3f}" for x, y in pts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
        f'  <polygon points="{coords}" fill="#9ecae1" stroke="#08519c" stroke-width="1.5"/>\n'
        "</svg>\n"
    )


def _ccw(P: Polytope) -> list:
    """Vertices of a 2-D polytope in counterclockwise order."""
    vs = list(P.vertices)
    if len(vs) < 3:
        return sorted(vs)
    cx = sum(v[0] for v in vs) / len(vs)
    cy = sum(v[1] for v in vs) / len(vs)
    return sorted(vs, key=lambda v: (math.atan2(float(v[1] - cy), float(v[0] - cx)), v))


class Result:
    def __init__(self, payload: dict, polygon: list | None = None, vertices: list | None = None):
        self.payload = payload
        self.polygon = polygon  # 2-D vertex cycle for CSV/SVG
        self.vertices = vertices if vertices is not None else polygon


def _polytope_result(P: Polytope, extra: dict | None = None) -> Result:
    payload = {"polytope": io.polytope_json(P)}
    payload.update(extra or {})
    poly = _ccw(P) if P.dim == 2 and P.affine_dim == 2 else None
    return Result(payload, poly, sorted(P.vertices))


# -- commands -------------------------------------------------------------------------


def cmd_hull(args, doc) -> Result:
    dim, pts = io.read_points(doc)
    P = convex_hull(pts, dim)
    vol = polytope_volume(P)
    extra = {"volume": io.number_json(vol), "full_dimensional": P.full_dimensional}
    if all(x.denominator == 1 for v in P.vertices for x in v) and dim <= 4:
        extra["lattice_points"] = len(lattice_points(P))
    return _polytope_result(P, extra)


def cmd_semigroup_body(args, doc) -> Result:
    from .semigroup import okounkov_body

    gamma = io.read_semigroup(doc)
    est = okounkov_body(gamma, args.m_max)
    return _polytope_result(est.polytope, {"exact": est.exact, "volume": io.number_json(polytope_volume(est.polytope))})


def cmd_semigroup_density(args, doc) -> Result:
    from .semigroup import density_sequence

    _need(args, "m_max")
    gamma = io.read_semigroup(doc)
    seq, vol = density_sequence(gamma, args.m_max)
    return Result({"volume": io.number_json(vol), "sequence": [{"m": m, "ratio": io.number_json(r)} for m, r in seq]})


def cmd_semigroup_fujita(args, doc) -> Result:
    from .semigroup import fujita_gap, fujita_limit, okounkov_body

    _need(args, "p", "k")
    gamma = io.read_semigroup(doc)
    vol = polytope_volume(okounkov_body(gamma).polytope)
    ratio = fujita_gap(gamma, args.p, args.k)
    limit = fujita_limit(gamma, args.p)
    return Result(
        {
            "p": args.p,
            "k": args.k,
            "volume": io.number_json(vol),
            "sumset_ratio": io.number_json(ratio),
            "limit_ratio": io.number_json(limit),
            "gap": io.number_json(vol - limit),
            "gap_at_k": io.number_json(vol - ratio),
        }
    )


def cmd_semigroup_translate(args, doc) -> Result:
    from .semigroup import khovanskii_translate

    gamma = io.read_semigroup(doc)
    box = int(args.grid) if args.grid else 60
    res = khovanskii_translate(gamma, box)
    return Result({"z": list(res.z) if res.z is not None else None, "box": res.box, "verified_in_box": res.verified_in_box})


def _body_from_doc(doc) -> Polytope:
    pts = [io.parse_vector(v) for v in io.require(doc, "vertices", list)]
    return convex_hull(pts, int(doc.get("dim", len(pts[0]))))


def cmd_monomial_body(args, doc) -> Result:
    from .monomial import series_from_body, series_okounkov_body, surrogate_condition_b

    _need(args, "m_max")
    K = _body_from_doc(doc)
    W = series_from_body(K, args.m_max)
    res = series_okounkov_body(W, args.m_max, K)
    m_b = surrogate_condition_b(W)
    return _polytope_result(
        res.polytope,
        {
            "equals_reference": res.exact,
            "inside_reference": res.contained,
            "volume_gap": io.number_json(res.volume_gap),
            "hausdorff_approx": res.hausdorff_approx,
            "surrogate_B_degree": m_b,
        },
    )


def cmd_monomial_mult(args, doc) -> Result:
    from .monomial import family_multiplicity_check, ideal_colength, ideal_multiplicity, valuation_family

    if "ideal" in doc:
        gens = [io.parse_int_vector(g) for g in io.require(doc, "ideal", list)]
        return Result({"colength": ideal_colength(gens), "multiplicity": io.number_json(ideal_multiplicity(gens))})
    if "valuation" in doc:
        _need(args, "m_max")
        F = valuation_family(io.parse_int_vector(doc["valuation"]), args.m_max)
    else:
        F = io.read_family(doc)
    problems = F.check()
    if problems:
        raise HypothesisError("; ".join(problems[:3]), reason="not-a-graded-family")
    m_max = args.m_max or F.max_index
    col, mult = family_multiplicity_check(F, m_max)
    return Result(
        {
            "colength_ratios": [{"m": m, "value": io.number_json(v)} for m, v in col],
            "multiplicity_ratios": [{"p": p, "value": io.number_json(v)} for p, v in mult],
        }
    )


def cmd_toric_body(args, doc) -> Result:
    from .toric import toric_okounkov_body

    fan, D, chart = io.read_toric_job(doc)
    body = toric_okounkov_body(fan, D, chart)
    if body.degenerate:
        raise HypothesisError("divisor is not big", reason="not-big")
    return _polytope_result(body.polytope, {"volume": io.number_json(polytope_volume(body.polytope))})


def cmd_toric_count(args, doc) -> Result:
    from .toric import divisor_polytope, ehrhart_count, ehrhart_polynomial

    _need(args, "m_max")
    fan, D, _ = io.read_toric_job(doc)
    counts = [{"m": m, "count": ehrhart_count(fan, D, m)} for m in range(args.m_max + 1)]
    out = {"counts": counts, "volume": io.number_json(polytope_volume(divisor_polytope(fan, D)))}
    try:
        out["ehrhart_polynomial"] = [io.number_json(c) for c in ehrhart_polynomial(fan, D)]
    except ValidationError:
        out["ehrhart_polynomial"] = None
    return Result(out)


def cmd_surface_zariski(args, doc) -> Result:
    from .surface import surface_volume, zariski_decomposition

    S, D, _ = io.read_surface_job(doc)
    Z = zariski_decomposition(S, D)
    return Result(
        {
            "positive": io.vector_json(Z.positive),
            "negative": [{"curve": j, "class": io.vector_json(S.curves[j]), "coeff": io.number_json(x)} for j, x in Z.negative],
            "volume": io.number_json(surface_volume(S, D)),
        }
    )


def _need_flag(flag):
    if flag is None:
        raise ValidationError("this command needs a flag", reason="schema")
    return flag


def body_payload(body) -> dict:
    return {
        "a": io.number_json(body.a),
        "mu": io.tagged_json(body.mu),
        "alpha": body.alpha.to_json(),
        "beta": body.beta.to_json(),
        "vertices": [[io.number_json(x), io.number_json(y)] for x, y in body.polygon()],
        "area": io.number_json(body.area()),
    }


def cmd_surface_body(args, doc) -> Result:
    from .surface import okounkov_body_surface

    S, D, flag = io.read_surface_job(doc)
    body = okounkov_body_surface(S, D, _need_flag(flag))
    return Result(body_payload(body), body.polygon())


def cmd_surface_slice(args, doc) -> Result:
    from .surface import slice_check

    _need(args, "t")
    S, D, flag = io.read_surface_job(doc)
    rep = slice_check(S, D, _need_flag(flag), args.t)
    return Result({"t": io.number_json(rep.t), "upper_part_ok": rep.upper_part_ok, "fiber_ok": rep.fiber_ok, "ok": rep.ok})


def cmd_surface_derivative(args, doc) -> Result:
    from .surface import volume_derivative

    S, D, flag = io.read_surface_job(doc)
    rep = volume_derivative(S, D, _need_flag(flag))
    return Result(
        {
            "left": io.number_json(rep.left),
            "right": io.number_json(rep.right),
            "restricted_length": io.number_json(rep.restricted_length),
            "ok": rep.ok,
        }
    )


def cmd_cutkosky(args, doc) -> Result:
    from .surface import cutkosky_mu, second_difference

    S = io.read_surface(io.require(doc, "model", dict))
    A, B1, B2 = (io.parse_vector(io.require(doc, k, list)) for k in ("A", "B1", "B2"))
    if args.t is not None:
        ts = [args.t]
    else:
        n = int(args.grid) if args.grid else 3
        ts = [Fraction(k, 10) for k in range(n)]
    vals = [cutkosky_mu(S, A, B1, B2, t) for t in ts]
    out = {"samples": [{"t": io.number_json(t), "mu": io.tagged_json(v.value), "well_posed": v.well_posed} for t, v in zip(ts, vals)]}
    if len(vals) >= 3:
        out["second_differences"] = [io.tagged_json(second_difference([vals[i + j].value for j in range(3)])) for i in range(len(vals) - 2)]
    return Result(out)


def cmd_gallery(args, doc) -> Result:
    from .gallery import write_gallery

    out_dir = args.output or "gallery"
    summary = write_gallery(out_dir)
    args.output = None  # the summary goes to stdout
    return Result(summary)


def cmd_validate(args, doc) -> Result:
    from .validate import validate_document

    return Result(validate_document(doc, args.schema))


COMMANDS: dict[str, Callable] = {
    "hull": cmd_hull,
    "semigroup-body": cmd_semigroup_body,
    "semigroup-density": cmd_semigroup_density,
    "semigroup-fujita": cmd_semigroup_fujita,
    "semigroup-translate": cmd_semigroup_translate,
    "monomial-body": cmd_monomial_body,
    "monomial-mult": cmd_monomial_mult,
    "toric-body": cmd_toric_body,
    "toric-count": cmd_toric_count,
    "surface-zariski": cmd_surface_zariski,
    "surface-body": cmd_surface_body,
    "surface-slice": cmd_surface_slice,
    "surface-derivative": cmd_surface_derivative,
    "cutkosky": cmd_cutkosky,
    "gallery": cmd_gallery,
    "validate": cmd_validate,
}

NO_INPUT = {"gallery"}


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ValidationError(f"--{n.replace('_', '-')} is required for {args.command}", reason="missing-option")


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="okounkov", description="Exact Okounkov body computations.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o")
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=_rational)
    p.add_argument("--grid")
    p.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    p.add_argument("--schema", default=None, help="schema name for validate")
    return p


def _emit(args, res: Result, out) -> None:
    if args.format == "json":
        text = io.dumps(res.payload)
    elif args.format == "csv":
        if res.vertices is None:
            raise ValidationError("this result has no vertex list", reason="no-geometry")
        text = vertices_csv(res.vertices)
    else:
        if res.polygon is None:
            raise ValidationError("SVG output needs a 2-dimensional body", reason="no-geometry")
        text = polygon_svg(res.polygon)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        if res.polygon is not None and args.format == "json":
            base = os.path.splitext(args.output)[0]
            with open(base + ".csv", "w", encoding="utf-8") as fh:
                fh.write(vertices_csv(res.polygon))
            with open(base + ".svg", "w", encoding="utf-8") as fh:
                fh.write(polygon_svg(res.polygon))
    else:
        out.write(text)


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        name = argv[0] if argv else ""
        err.write(f"unknown command {name!r}\n" + parser.format_usage())
        return EX_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        doc = {}
        if args.command not in NO_INPUT:
            if not args.input:
                raise ValidationError("--input is required", reason="missing-option")
            doc = io.load(args.input)
            if not isinstance(doc, dict):
                raise ValidationError("input must be a JSON object", reason="schema")
        if args.command == "validate" and not args.schema:
            raise ValidationError("--schema is required for validate", reason="missing-option")
        res = COMMANDS[args.command](args, doc)
        _emit(args, res, out)
        return 0
    except HypothesisError as e:
        err.write(json.dumps({"error": str(e), "reason": e.reason, "exit": 3}, sort_keys=True) + "\n")
        return 3
    except OkounkovError as e:
        err.write(json.dumps({"error": str(e), "reason": e.reason, "exit": 2}, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
