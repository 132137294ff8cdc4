"""Schema and invariant checks for input documents; failures are reported,
never raised."""

from __future__ import annotations

import itertools

from . import io, linalg
from .errors import OkounkovError


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def _surface(doc: dict) -> list[dict]:
    doc = doc.get("model", doc)
    out = []
    Q = [io.parse_vector(r) for r in io.require(doc, "Q", list)]
    rho = len(Q)
    square = rho > 0 and all(len(r) == rho for r in Q)
    out.append(_check("square", square))
    if not square:
        return out
    out.append(_check("symmetric", all(Q[i][j] == Q[j][i] for i in range(rho) for j in range(rho))))
    sig = linalg.inertia(Q)
    out.append(_check("signature", sig == (1, rho - 1, 0), f"(pos, neg, zero) = {sig}"))
    try:
        io.read_surface(doc)
        out.append(_check("model", True))
    except OkounkovError as e:
        out.append(_check("model", False, str(e)))
    return out


def _fan(doc: dict) -> list[dict]:
    doc = doc.get("fan", doc)
    out = []
    d = int(io.require(doc, "rank"))
    rays = [io.parse_int_vector(v) for v in io.require(doc, "rays", list)]
    for i, r in enumerate(rays):
        out.append(_check(f"ray {i} primitive", len(r) == d and any(r) and linalg.primitive(r) == r, str(list(r))))
    for c in io.require(doc, "max_cones", list):
        c = [int(i) for i in c]
        if len(c) != d or any(i < 0 or i >= len(rays) for i in c):
            out.append(_check(f"cone {c} simplicial", False, "wrong number of rays or bad index"))
            continue
        det = linalg.det([rays[i] for i in c])
        out.append(_check(f"cone {c} unimodular", abs(det) == 1, f"det = {det}"))
    return out


def _semigroup(doc: dict) -> list[dict]:
    if "slices" not in doc:
        try:
            io.read_semigroup(doc)
            return [_check("semigroup", True)]
        except OkounkovError as e:
            return [_check("semigroup", False, str(e))]
    d = int(io.require(doc, "value_dim"))
    table = {int(k): {io.parse_int_vector(p) for p in v} for k, v in io.require(doc, "slices", dict).items()}
    out = [_check("degree 0 slice is {0}", table.get(0) == {(0,) * d})]
    top = max(table)
    for k, l in itertools.combinations_with_replacement(sorted(table), 2):
        if k == 0 or k + l > top or (k + l) not in table:
            continue
        bad = [(p, q) for p in table[k] for q in table[l] if tuple(a + b for a, b in zip(p, q)) not in table[k + l]]
        if bad:
            p, q = min(bad)
            out.append(_check(f"additivity {k}+{l}", False, f"{list(p)} + {list(q)} missing from degree {k + l}"))
    if all(c["ok"] for c in out):
        out.append(_check("additivity", True, f"checked up to degree {top}"))
    return out


def _family(doc: dict) -> list[dict]:
    try:
        F = io.read_family(doc)
    except OkounkovError as e:
        return [_check("family", False, str(e))]
    problems = F.check()
    return [_check("graded family", not problems, "; ".join(problems))]


SCHEMAS = {"surface": _surface, "fan": _fan, "semigroup": _semigroup, "family": _family}


def validate_document(doc: dict, schema: str) -> dict:
    if schema not in SCHEMAS:
        checks = [_check("schema", False, f"unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}")]
    else:
        try:
            checks = SCHEMAS[schema](doc)
        except OkounkovError as e:
            checks = [_check("parse", False, str(e))]
    return {"schema": schema, "ok": all(c["ok"] for c in checks), "checks": checks}
