"""Regenerate the figure data: the abelian-surface trapezoid, a surface body
with a nonzero lower boundary, and μ(t) for the fourfold example."""

from __future__ import annotations

import os
from fractions import Fraction

from . import io
from .surface import (
    FlagData,
    abelian_model,
    cutkosky_mu,
    okounkov_body_surface,
    second_difference,
    two_point_blowup_model,
)

ABELIAN_D = (3, 1, 0)
ABELIAN_C = (2, 1, 1)
# conic through both blown-up points, x its intersection with E1
FIG4_D = (3, -1, -1)
FIG4_FLAG = ((2, -1, -1), {0: 1})
CUTKOSKY = {"A": (3, 1, 1), "B1": (2, 1, 0), "B2": (2, 0, 1)}
MU_SAMPLES = 50


def trapezoid():
    return okounkov_body_surface(abelian_model(), ABELIAN_D, FlagData.of(ABELIAN_C))


def figure4_body():
    curve, mult = FIG4_FLAG
    return okounkov_body_surface(two_point_blowup_model(), FIG4_D, FlagData.of(curve, mult))


def mu_curve(n: int = MU_SAMPLES):
    """(t, μ(t)) at t = k/(2n), k < n, all inside the range where s = 0 is admissible."""
    S = abelian_model()
    ts = [Fraction(k, 2 * n) for k in range(n)]
    return [(t, cutkosky_mu(S, CUTKOSKY["A"], CUTKOSKY["B1"], CUTKOSKY["B2"], t).value) for t in ts]


def write_gallery(out_dir: str) -> dict:
    from .cli import body_payload, polygon_svg, vertices_csv

    os.makedirs(out_dir, exist_ok=True)
    summary = {}
    for name, body in (("trapezoid", trapezoid()), ("figure4", figure4_body())):
        poly = body.polygon()
        with open(os.path.join(out_dir, f"{name}.json"), "w", encoding="utf-8") as fh:
            fh.write(io.dumps(body_payload(body)))
        with open(os.path.join(out_dir, f"{name}.csv"), "w", encoding="utf-8") as fh:
            fh.write(vertices_csv(poly))
        with open(os.path.join(out_dir, f"{name}.svg"), "w", encoding="utf-8") as fh:
            fh.write(polygon_svg(poly))
        summary[name] = {
            "vertices": len(poly),
            "alpha_nonzero": any(s != 0 or c != 0 for s, c in body.alpha.pieces),
            "beta_breakpoints": [io.number_json(t) for t in body.beta.kinks()],
        }
    samples = mu_curve()
    lines = ["t,mu,mu_approx"]
    for t, mu in samples:
        lines.append(f"{t},{mu!r},{float(mu):.15g}" if not isinstance(mu, Fraction) else f"{t},{mu},{float(mu):.15g}")
    with open(os.path.join(out_dir, "mu_curve.csv"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    diffs = [second_difference([samples[i + j][1] for j in range(3)]) for i in range(len(samples) - 2)]
    summary["mu_curve"] = {"samples": len(samples), "nonzero_second_differences": sum(1 for d in diffs if d != 0)}
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(io.dumps(summary))
    return summary
