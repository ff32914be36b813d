"""Batch front end: JSON documents in, reports and plot data out.

Document format "fairkit/1": one JSON object with a format tag, optional
settings, and a list of entities. Entity kinds: bezier, bspline,
piecewise, polyline, spiral, hermite, patch, scores. Serialization is
canonical (fixed key order, shortest round-trip floats) so that
serialize(parse(serialize(x))) is byte-identical.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import aesthetics, comparator, diffgeom, fairness, geomcore, hermite, spirals, surfaudit
from .errors import (
    DocumentSyntaxError,
    DuplicateId,
    FairkitError,
    SchemaViolation,
    UnknownEntityKind,
)

FORMAT_TAG = "fairkit/1"
ENTITY_KINDS = ("bezier", "bspline", "piecewise", "polyline", "spiral", "hermite", "patch", "scores")

CURVE_KINDS = ("bezier", "bspline", "piecewise", "polyline", "spiral")


@dataclass
class Entity:
    id: str
    kind: str
    payload: dict
    obj: object


@dataclass
class Document:
    version: str
    settings: dict
    entities: list[Entity]
    _index: dict[str, Entity] = field(default_factory=dict)

    def __post_init__(self):
        self._index = {e.id: e for e in self.entities}

    def get(self, entity_id: str) -> Entity:
        if entity_id not in self._index:
            raise SchemaViolation(f"no entity with id {entity_id!r}")
        return self._index[entity_id]

    def curve(self, entity_id: str) -> geomcore.Curve:
        e = self.get(entity_id)
        if e.kind not in CURVE_KINDS:
            raise SchemaViolation(f"entity {entity_id!r} has kind {e.kind}, not a curve")
        return e.obj


# --- payload normalization -----------------------------------------------------


def _points(raw, entity_id, name="points", depth=2):
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise SchemaViolation(f"{entity_id}.{name}: not a numeric array")
    if arr.ndim != depth or not np.all(np.isfinite(arr)):
        raise SchemaViolation(f"{entity_id}.{name}: expected finite array of rank {depth}")
    return arr.tolist()


def _scalar(raw, entity_id, name):
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise SchemaViolation(f"{entity_id}.{name}: expected a number, got {raw!r}")
    if not math.isfinite(v):
        raise SchemaViolation(f"{entity_id}.{name}: must be finite")
    return v


def _require(payload, entity_id, *names):
    for name in names:
        if name not in payload:
            raise SchemaViolation(f"{entity_id}.{name}: required field missing")


def _normalize_curve_payload(kind: str, payload: dict, entity_id: str) -> dict:
    if kind == "bezier":
        _require(payload, entity_id, "points")
        out = {"points": _points(payload["points"], entity_id)}
        if payload.get("weights") is not None:
            out["weights"] = [
                _scalar(w, entity_id, f"weights[{i}]") for i, w in enumerate(payload["weights"])
            ]
        return out
    if kind == "bspline":
        _require(payload, entity_id, "degree", "knots", "points")
        return {
            "degree": int(payload["degree"]),
            "knots": [_scalar(k, entity_id, f"knots[{i}]") for i, k in enumerate(payload["knots"])],
            "points": _points(payload["points"], entity_id),
        }
    if kind == "polyline":
        _require(payload, entity_id, "points")
        return {"points": _points(payload["points"], entity_id)}
    if kind == "piecewise":
        _require(payload, entity_id, "segments")
        segs = []
        for i, seg in enumerate(payload["segments"]):
            skind = seg.get("kind")
            if skind not in ("bezier", "bspline", "polyline"):
                raise SchemaViolation(f"{entity_id}.segments[{i}]: unsupported segment kind {skind!r}")
            sub = _normalize_curve_payload(skind, seg, f"{entity_id}.segments[{i}]")
            segs.append({"kind": skind, **sub})
        out = {"segments": segs}
        if payload.get("join_tol") is not None:
            out["join_tol"] = _scalar(payload["join_tol"], entity_id, "join_tol")
        return out
    if kind == "spiral":
        _require(payload, entity_id, "family", "s_range")
        out = {
            "family": payload["family"],
            "s_range": [
                _scalar(payload["s_range"][0], entity_id, "s_range[0]"),
                _scalar(payload["s_range"][1], entity_id, "s_range[1]"),
            ],
            "origin": [
                _scalar(v, entity_id, f"origin[{i}]")
                for i, v in enumerate(payload.get("origin", [0.0, 0.0]))
            ],
            "theta0": _scalar(payload.get("theta0", 0.0), entity_id, "theta0"),
        }
        for key in ("scale", "alpha", "c0", "c1", "a", "b", "c", "kappa0"):
            if payload.get(key) is not None:
                out[key] = _scalar(payload[key], entity_id, key)
        return out
    raise UnknownEntityKind(f"{entity_id}: unknown curve kind {kind!r}")


def _build_entity(entity_id: str, kind: str, payload: dict) -> Entity:
    if kind in CURVE_KINDS:
        norm = _normalize_curve_payload(kind, payload, entity_id)
        spec = {"kind": "spiral" if kind == "spiral" else kind, **norm}
        obj = geomcore.construct_curve(spec)
        return Entity(entity_id, kind, norm, obj)
    if kind == "hermite":
        _require(payload, entity_id, "p0", "p1", "d0", "d1")
        norm = {k: [_scalar(v, entity_id, k) for v in payload[k]] for k in ("p0", "p1", "d0", "d1")}
        for k in ("k0", "k1"):
            if payload.get(k) is not None:
                norm[k] = _scalar(payload[k], entity_id, k)
        obj = hermite.HermiteData(
            p0=norm["p0"], p1=norm["p1"], d0=norm["d0"], d1=norm["d1"],
            k0=norm.get("k0"), k1=norm.get("k1"),
        )
        return Entity(entity_id, kind, norm, obj)
    if kind == "patch":
        _require(payload, entity_id, "points")
        pts = np.asarray(payload["points"], dtype=float)
        if pts.ndim != 3:
            raise SchemaViolation(f"{entity_id}.points: expected (m+1, n+1, 3) net")
        norm = {"points": pts.tolist()}
        weights = None
        if payload.get("weights") is not None:
            weights = np.asarray(payload["weights"], dtype=float)
            norm["weights"] = weights.tolist()
        obj = surfaudit.SurfacePatch(pts, weights)
        return Entity(entity_id, kind, norm, obj)
    if kind == "scores":
        _require(payload, entity_id, "subject", "scores")
        sheet = aesthetics.validate_sheet(
            payload["scores"], rater=str(payload.get("rater", "anonymous")), subject=str(payload["subject"])
        )
        norm = {
            "subject": sheet.subject,
            "rater": sheet.rater,
            "scores": {c: sheet.scores[c] for c in aesthetics.CRITERIA},
        }
        return Entity(entity_id, kind, norm, sheet)
    raise UnknownEntityKind(f"{entity_id}: unknown entity kind {kind!r}")


def parse_document(text: str) -> Document:
    """Parse and validate a fairkit/1 JSON document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "format" not in raw or "entities" not in raw:
        raise DocumentSyntaxError("document must be an object with 'format' and 'entities'")
    if raw["format"] != FORMAT_TAG:
        raise SchemaViolation(f"unsupported format {raw['format']!r}; expected {FORMAT_TAG!r}")
    settings = raw.get("settings", {})
    if not isinstance(settings, dict):
        raise SchemaViolation("settings must be an object")
    entities: list[Entity] = []
    seen: set[str] = set()
    problems: list[str] = []
    for i, item in enumerate(raw["entities"]):
        if not isinstance(item, dict) or "id" not in item or "kind" not in item:
            raise SchemaViolation(f"entities[{i}]: each entity needs 'id' and 'kind'")
        eid, kind = str(item["id"]), str(item["kind"])
        if eid in seen:
            raise DuplicateId(f"duplicate entity id {eid!r}")
        seen.add(eid)
        if kind not in ENTITY_KINDS:
            raise UnknownEntityKind(f"entity {eid!r}: unknown kind {kind!r}")
        payload = {k: v for k, v in item.items() if k not in ("id", "kind")}
        try:
            entities.append(_build_entity(eid, kind, payload))
        except FairkitError as exc:
            problems.append(f"{eid}: {type(exc).__name__}: {exc}")
    if problems:
        raise SchemaViolation("; ".join(problems))
    return Document(version=FORMAT_TAG, settings=dict(settings), entities=entities)


# --- canonical serialization -----------------------------------------------------

_SPIRAL_KEY_ORDER = ("family", "s_range", "origin", "theta0", "scale", "alpha", "c0", "c1", "a", "b", "c", "kappa0")


def _ordered_payload(kind: str, payload: dict) -> dict:
    if kind == "bezier":
        keys = ("points", "weights")
    elif kind == "bspline":
        keys = ("degree", "knots", "points")
    elif kind in ("polyline",):
        keys = ("points",)
    elif kind == "piecewise":
        out = {"segments": [
            {"kind": seg["kind"], **_ordered_payload(seg["kind"], seg)} for seg in payload["segments"]
        ]}
        if "join_tol" in payload:
            out["join_tol"] = payload["join_tol"]
        return out
    elif kind == "spiral":
        keys = _SPIRAL_KEY_ORDER
    elif kind == "hermite":
        keys = ("p0", "p1", "d0", "d1", "k0", "k1")
    elif kind == "patch":
        keys = ("points", "weights")
    elif kind == "scores":
        return {
            "subject": payload["subject"],
            "rater": payload["rater"],
            "scores": {c: payload["scores"][c] for c in aesthetics.CRITERIA},
        }
    else:
        keys = tuple(sorted(payload))
    return {k: payload[k] for k in keys if k in payload}


def serialize_document(doc: Document) -> str:
    """Canonical document bytes: fixed key order, round-trip floats."""
    body = {
        "format": doc.version,
        "settings": {k: doc.settings[k] for k in sorted(doc.settings)},
        "entities": [
            {"id": e.id, "kind": e.kind, **_ordered_payload(e.kind, e.payload)} for e in doc.entities
        ],
    }
    return json.dumps(body, indent=2) + "\n"


# --- report helpers ---------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _machine(value):
    """JSON-safe copy with numpy scalars/arrays converted."""
    if isinstance(value, dict):
        return {k: _machine(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_machine(v) for v in value]
    if isinstance(value, np.ndarray):
        return _machine(value.tolist())
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _write_json(path: str, data) -> None:
    with open(path, "w") as fh:
        json.dump(_machine(data), fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) + "\n")


def _svg_polylines(path: str, polylines, width=640, height=480) -> None:
    """Plot polylines (lists of (x, y)) into a standalone SVG."""
    pts = np.concatenate([np.asarray(p, dtype=float) for p in polylines if len(p)])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    margin = 20.0

    def map_xy(p):
        x = margin + (p[0] - lo[0]) / span[0] * (width - 2 * margin)
        y = height - margin - (p[1] - lo[1]) / span[1] * (height - 2 * margin)
        return x, y

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for poly in polylines:
        if not len(poly):
            continue
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in (map_xy(p) for p in poly))
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _analyze_report(doc: Document, entity_id: str) -> dict:
    curve = doc.curve(entity_id)
    rep = fairness.fairness_report(curve)
    data = {
        "id": entity_id,
        "kind": doc.get(entity_id).kind,
        "extrema_count": rep.extrema_count,
        "extrema": [
            {"t": e.t, "s": e.s, "kappa": e.kappa, "kind": e.kind} for e in rep.extrema
        ],
        "smoothness_order": rep.smoothness_order,
        "kappa_max": rep.kappa_max,
        "kappa_rate_max": rep.kappa_rate_max,
        "energy": rep.energy,
        "energy_converged": rep.energy_converged,
        "monotone_curvature": rep.monotone_curvature,
    }
    if rep.lcg_fit is not None:
        data["lcg"] = {
            "slope": rep.lcg_fit.slope,
            "r_squared": rep.lcg_fit.r_squared,
            "convention": rep.lcg_fit.convention,
        }
    return data


def _print_analyze(data: dict) -> None:
    print(f"curve {data['id']} ({data['kind']})")
    print(f"  extrema            {data['extrema_count']}")
    for e in data["extrema"]:
        print(f"    {e['kind']:3s} at t={_fmt(e['t'])} s={_fmt(e['s'])} kappa={_fmt(e['kappa'])}")
    print(f"  smoothness order   {data['smoothness_order']}")
    print(f"  kappa max          {_fmt(data['kappa_max'])}")
    print(f"  kappa rate max     {_fmt(data['kappa_rate_max'])}")
    suffix = "" if data["energy_converged"] else " (not converged)"
    print(f"  bending energy     {_fmt(data['energy'])}{suffix}")
    print(f"  monotone curvature {data['monotone_curvature']}")
    if "lcg" in data:
        print(f"  lcg fit            slope={_fmt(data['lcg']['slope'])} r2={_fmt(data['lcg']['r_squared'])}")
    else:
        print("  lcg fit            not applicable")


# --- commands -----------------------------------------------------------------------


def _cmd_analyze(args, doc: Document) -> int:
    reports = [_analyze_report(doc, eid) for eid in args.ids]
    for data in reports:
        _print_analyze(data)
    if args.json:
        _write_json(args.json, reports)
    if args.csv or args.svg:
        rows = []
        polys = []
        for eid in args.ids:
            curve = doc.curve(eid)
            prof = diffgeom.sample_profile(curve, 256)
            rows.extend((eid, float(s), float(k), float(r)) for s, k, r in zip(prof.s, prof.kappa, prof.dkappa_ds))
            pts = curve.point_many(prof.t)
            if curve.dimension == 2:
                polys.append(pts)
                # curvature comb: hair tips offset along the normal by -kappa
                d1 = curve.derivatives_many(prof.t, 1)[1]
                tang = d1 / np.linalg.norm(d1, axis=1)[:, None]
                normal = np.column_stack([-tang[:, 1], tang[:, 0]])
                comb_scale = 0.2 * curve.scale_hint() / max(float(np.abs(prof.kappa).max()), 1e-12)
                polys.append(pts - comb_scale * prof.kappa[:, None] * normal)
        if args.csv:
            _write_csv(args.csv, ["id", "s", "kappa", "dkappa_ds"], rows)
        if args.svg and polys:
            _svg_polylines(args.svg, polys)
    return 0


def _cmd_compare(args, doc: Document) -> int:
    h = doc.get(args.hermite).obj
    if not isinstance(h, hermite.HermiteData):
        raise SchemaViolation(f"entity {args.hermite!r} is not hermite data")
    curves = {eid: doc.curve(eid) for eid in args.ids}
    result = comparator.compare(curves, h)
    print("ranking: " + " > ".join(result.ranking))
    for stage in result.stages:
        verdicts = "; ".join(f"{r.candidate}: {r.reason}" for r in stage.rejected) or "no rejections"
        print(f"  stage {stage.stage}: {verdicts}")
    if result.ties:
        for group in result.ties:
            print("  tie: " + ", ".join(group))
    for cid in sorted(result.metrics):
        m = result.metrics[cid]
        if "error" in m:
            print(f"  {cid}: error {m['error']}")
        else:
            extra = f" ravf={m['ravf']}" if "ravf" in m else ""
            print(
                f"  {cid}: extrema={m['extrema_count']} order={m['smoothness_order']} "
                f"energy={_fmt(m['energy'])}{extra}"
            )
    if args.json:
        _write_json(
            args.json,
            {
                "ranking": result.ranking,
                "stages": [
                    {
                        "stage": s.stage,
                        "before": s.before,
                        "after": s.after,
                        "rejected": [
                            {"candidate": r.candidate, "reason": r.reason, "value": r.value}
                            for r in s.rejected
                        ],
                    }
                    for s in result.stages
                ],
                "ties": result.ties,
                "metrics": result.metrics,
            },
        )
    return 0


def _cmd_generate(args, doc: Document) -> int:
    payload = {"family": args.family, "s_range": [args.s0, args.s1], "origin": [args.origin[0], args.origin[1]], "theta0": args.theta0}
    for key in ("scale", "alpha", "c0", "c1", "a", "b", "c", "kappa0"):
        val = getattr(args, key if key not in ("a", "b", "c") else "sp_" + key)
        if val is not None:
            payload[key] = val
    entity = _build_entity(args.id, "spiral", payload)
    if any(e.id == args.id for e in doc.entities):
        raise DuplicateId(f"duplicate entity id {args.id!r}")
    doc.entities.append(entity)
    text = serialize_document(Document(doc.version, doc.settings, doc.entities))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_lcg(args, doc: Document) -> int:
    curve = doc.curve(args.id)
    fit = fairness.lcg(curve, args.samples)
    prof = diffgeom.sample_profile(curve, args.samples)
    print(f"lcg {args.id}: slope={_fmt(fit.slope)} r2={_fmt(fit.r_squared)}")
    print(f"  convention: {fit.convention}")
    if args.csv:
        rows = [
            (float(s), float(k), float(x), float(y))
            for s, k, (x, y) in zip(prof.s, prof.kappa, fit.points)
        ]
        _write_csv(args.csv, ["s", "kappa", "x_log_rho", "y_log_measure"], rows)
    if args.svg:
        _svg_polylines(args.svg, [fit.points])
    return 0


def _cmd_zebra(args, doc: Document) -> int:
    pa = doc.get(args.a).obj
    pb = doc.get(args.b).obj
    if not isinstance(pa, surfaudit.SurfacePatch) or not isinstance(pb, surfaudit.SurfacePatch):
        raise SchemaViolation("zebra needs two patch entities")
    boundary = surfaudit.BoundarySpec(edge_a=args.edge_a, edge_b=args.edge_b, reverse=args.reverse)
    audit = surfaudit.audit_joint(pa, pb, boundary=boundary, view=tuple(args.view), stations=args.stations)
    print(f"joint {args.a}|{args.b}: verdict {audit.label}")
    print(f"  max position gap {_fmt(max(s.position_gap for s in audit.stations))}")
    print(f"  max normal angle {_fmt(max(s.normal_angle_gap for s in audit.stations))}")
    print(f"  max zebra kink   {_fmt(audit.max_kink)}")
    if args.csv:
        rows = [
            (
                s.x,
                s.position_gap,
                s.normal_angle_gap,
                s.curvature_gaps[0],
                s.curvature_gaps[1],
                s.curvature_gaps[2],
                s.zebra_kink,
            )
            for s in audit.stations
        ]
        _write_csv(
            args.csv,
            ["x", "position_gap", "normal_angle_gap", "kn_gap_tangent", "kn_gap_cross", "kn_gap_diagonal", "zebra_kink"],
            rows,
        )
    if args.svg:
        profile = [(s.x, 0.0 if math.isnan(s.zebra_kink) else s.zebra_kink) for s in audit.stations]
        _svg_polylines(args.svg, [profile])
    return 0


def _cmd_ravf(args, doc: Document) -> int:
    sheets = []
    for eid in args.ids:
        e = doc.get(eid)
        if e.kind != "scores":
            raise SchemaViolation(f"entity {eid!r} is not a score sheet")
        sheets.append(e.obj)
    agg = aesthetics.aggregate(sheets)
    print(f"ravf over {agg.raters} sheet(s): {agg.ravf}")
    for c in aesthetics.CRITERIA:
        print(f"  {c:26s} {_fmt(agg.per_criterion_mean[c])}")
    print(f"  rounding: {agg.rounding}; aggregation: {agg.aggregation}")
    return 0


def _cmd_elastica(args, doc: Document) -> int:
    h = doc.get(args.hermite).obj
    if not isinstance(h, hermite.HermiteData):
        raise SchemaViolation(f"entity {args.hermite!r} is not hermite data")
    fit = hermite.fit_minimum_energy_curve(h, n=args.nodes, max_iters=args.max_iters)
    print(
        f"elastica {args.hermite}: energy={_fmt(fit.energy)} iterations={fit.iterations} "
        f"converged={fit.converged}"
    )
    if args.csv:
        _write_csv(args.csv, ["x", "y", "z"][: h.dimension], [tuple(map(float, p)) for p in fit.polyline])
    return 0


def _cmd_selftest(args, doc=None) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("FAIRKIT_SEED", "0"))
    rng = np.random.default_rng(seed)
    failures = []

    res = spirals.gauss_kronrod(np.exp, 0.0, 1.0, tol=1e-10)
    if abs(res.value - (math.e - 1.0)) > 1e-10:
        failures.append("quadrature")
    print(f"[{'PASS' if 'quadrature' not in failures else 'FAIL'}] quadrature: exp integral")

    xs = rng.uniform(0.1, 6.0, size=5)
    ok = all(
        np.allclose(spirals.fresnel(-x), tuple(-v for v in spirals.fresnel(x)), atol=1e-14) for x in xs
    )
    if not ok:
        failures.append("fresnel")
    print(f"[{'PASS' if ok else 'FAIL'}] fresnel: odd symmetry at {len(xs)} points")

    ok = True
    for _ in range(5):
        pts = rng.normal(size=(4, 2)) * 2.0
        curve = geomcore.BezierCurve(pts)
        ts = np.linspace(0.0, 1.0, 20001)
        kappa = diffgeom.curvature_many(curve, ts)
        d = np.sign(np.diff(kappa))
        d = d[d != 0]
        oracle = int(np.sum(d[1:] != d[:-1]))
        if len(fairness.find_curvature_extrema(curve)) != oracle:
            ok = False
    if not ok:
        failures.append("extrema")
    print(f"[{'PASS' if ok else 'FAIL'}] extrema counts match a dense-sampling oracle")

    doc_text = json.dumps(
        {
            "format": FORMAT_TAG,
            "entities": [{"id": "c", "kind": "bezier", "points": [[0, 0], [1, 1], [2, 0]]}],
        }
    )
    once = serialize_document(parse_document(doc_text))
    twice = serialize_document(parse_document(once))
    ok = once == twice
    if not ok:
        failures.append("roundtrip")
    print(f"[{'PASS' if ok else 'FAIL'}] document round-trip is byte-stable")

    if failures:
        print(f"selftest failed: {failures}")
        return 1
    print("selftest passed")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairkit", description="Curve and surface fairness toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_doc(p):
        p.add_argument("document", help="path to a fairkit/1 JSON document")

    p = sub.add_parser("analyze", help="fairness report per curve")
    add_doc(p)
    p.add_argument("ids", nargs="+")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--json")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("compare", help="staged comparison on shared Hermite data")
    add_doc(p)
    p.add_argument("--hermite", required=True)
    p.add_argument("ids", nargs="+")
    p.add_argument("--json")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("generate", help="append a spiral entity to the document")
    add_doc(p)
    p.add_argument("--id", required=True)
    p.add_argument("--family", required=True, choices=("clothoid", "log_aesthetic", "superspiral"))
    p.add_argument("--s0", type=float, required=True)
    p.add_argument("--s1", type=float, required=True)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--origin", type=float, nargs=2, default=(0.0, 0.0))
    p.add_argument("--scale", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--c0", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--a", dest="sp_a", type=float)
    p.add_argument("--b", dest="sp_b", type=float)
    p.add_argument("--c", dest="sp_c", type=float)
    p.add_argument("--kappa0", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("lcg", help="logarithmic curvature graph")
    add_doc(p)
    p.add_argument("id")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(func=_cmd_lcg)

    p = sub.add_parser("zebra", help="surface joint audit")
    add_doc(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--edge-a", default="u1", choices=("u0", "u1", "v0", "v1"))
    p.add_argument("--edge-b", default="u0", choices=("u0", "u1", "v0", "v1"))
    p.add_argument("--reverse", action="store_true")
    p.add_argument("--stations", type=int, default=33)
    p.add_argument("--view", type=float, nargs=3, default=(0.0, 0.0, 1.0))
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(func=_cmd_zebra)

    p = sub.add_parser("ravf", help="aggregate expert score sheets")
    add_doc(p)
    p.add_argument("ids", nargs="+")
    p.set_defaults(func=_cmd_ravf)

    p = sub.add_parser("elastica", help="discrete minimum-energy curve fit")
    add_doc(p)
    p.add_argument("--hermite", required=True)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_elastica)

    p = sub.add_parser("selftest", help="quick built-in checks (FAIRKIT_SEED)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_selftest, document=None)

    return parser


def run(command: str, argv: list[str]) -> int:
    """Programmatic entry: run one command with its arguments."""
    return main([command, *argv])


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "selftest":
            return args.func(args)
        with open(args.document) as fh:
            doc = parse_document(fh.read())
        return args.func(args, doc)
    except FairkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
