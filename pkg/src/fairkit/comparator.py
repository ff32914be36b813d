"""Staged lexicographic comparison of candidate curves on shared Hermite data.

Stage order is fixed: curvature extremum count, smoothness order, bending
energy, then (only when expert score sheets are supplied) aesthetics.
A candidate rejected at a later stage outranks one rejected earlier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import diffgeom, fairness
from .aesthetics import ScoreSheet, aggregate
from .errors import CommonDataViolation, EmptyCandidateSet, FairkitError
from .geomcore import Curve
from .hermite import HermiteData

STAGES = ("extrema", "smoothness", "energy", "aesthetics")


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    diagnostics: dict[str, dict]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Rejection:
    candidate: str
    stage: str
    reason: str
    value: float


@dataclass(frozen=True)
class StageRecord:
    stage: str
    before: list[str]
    after: list[str]
    rejected: list[Rejection]


@dataclass(frozen=True)
class CompareConfig:
    energy_tie_rel: float = 1e-6
    position_tol: float = 1e-8
    angle_tol: float = 1e-8
    curvature_rel_tol: float = 1e-3
    require_common_data: bool = True
    strict_curvature: bool = False
    aesthetic_sheets: Mapping[str, Sequence[ScoreSheet]] | None = None


@dataclass(frozen=True)
class ComparisonResult:
    ranking: list[str]
    stages: list[StageRecord]
    ties: list[list[str]]
    metrics: dict[str, dict]
    common_data: VerifyResult
    notes: list[str] = field(default_factory=list)


def _as_candidate_map(curves) -> dict[str, Curve]:
    if isinstance(curves, Mapping):
        items = list(curves.items())
    elif hasattr(curves, "curves"):  # CandidateSet
        items = list(curves.curves.items())
    else:
        items = [(f"c{i}", c) for i, c in enumerate(curves)]
    if not items:
        raise EmptyCandidateSet("no candidates supplied")
    return dict(items)


def verify_common_data(curves, h: HermiteData, config: CompareConfig | None = None) -> VerifyResult:
    """Check every candidate matches the Hermite endpoints and tangents.

    End-curvature gaps are always reported when h carries curvatures, but
    fail the check only under strict_curvature (a G1-only candidate such
    as the parabola is legitimate on G2 data).
    """
    cfg = config or CompareConfig()
    cand = _as_candidate_map(curves)
    scale = h.chord
    ok = True
    diags: dict[str, dict] = {}
    for name, curve in cand.items():
        d: dict = {}
        lo, hi = curve.domain
        d["p0_gap"] = float(np.linalg.norm(curve.point(lo) - h.p0))
        d["p1_gap"] = float(np.linalg.norm(curve.point(hi) - h.p1))
        t0 = curve.derivatives(lo, 1)[0]
        t1 = curve.derivatives(hi, 1)[0]
        d["d0_angle"] = fairness._angle_between(t0, h.d0)
        d["d1_angle"] = fairness._angle_between(t1, h.d1)
        bad = (
            d["p0_gap"] > cfg.position_tol * scale
            or d["p1_gap"] > cfg.position_tol * scale
            or d["d0_angle"] > cfg.angle_tol
            or d["d1_angle"] > cfg.angle_tol
        )
        if h.has_curvatures:
            d["k0_gap"] = abs(diffgeom.curvature(curve, lo) - h.k0)
            d["k1_gap"] = abs(diffgeom.curvature(curve, hi) - h.k1)
            if cfg.strict_curvature:
                kref = max(abs(h.k0), abs(h.k1), 1.0 / scale)
                bad = bad or d["k0_gap"] > cfg.curvature_rel_tol * kref or d["k1_gap"] > cfg.curvature_rel_tol * kref
        if bad:
            d["ok"] = False
            ok = False
        else:
            d["ok"] = True
        diags[name] = d
    return VerifyResult(ok=ok, diagnostics=diags)


def _smoothness_rank(order) -> int:
    return 5 if order == "analytic" else int(order)


def compare(curves, h: HermiteData, config: CompareConfig | None = None) -> ComparisonResult:
    """Run the staged rejection and return the full ranking with logs."""
    cfg = config or CompareConfig()
    cand = _as_candidate_map(curves)
    notes: list[str] = []
    verify = verify_common_data(cand, h, cfg)
    if not verify.ok:
        if cfg.require_common_data:
            bad = sorted(k for k, v in verify.diagnostics.items() if not v["ok"])
            raise CommonDataViolation(f"candidates not on the shared Hermite data: {bad}")
        notes.append("common-data verification failed; comparison forced by config")

    metrics: dict[str, dict] = {}
    errored: dict[str, str] = {}
    for name in sorted(cand):
        curve = cand[name]
        try:
            extrema = fairness.find_curvature_extrema(curve)
            order = fairness.smoothness_order(curve)
            energy = fairness.bending_energy(curve)
            metrics[name] = {
                "extrema_count": len(extrema),
                "smoothness_order": order,
                "energy": energy,
            }
        except FairkitError as exc:
            errored[name] = f"{type(exc).__name__}: {exc}"
            metrics[name] = {"error": errored[name]}

    survivors = sorted(k for k in cand if k not in errored)
    stages: list[StageRecord] = []
    rejected_by_stage: dict[str, list[tuple[str, float]]] = {}

    # stage 1: extremum count
    if survivors:
        best = min(metrics[k]["extrema_count"] for k in survivors)
        gone = [k for k in survivors if metrics[k]["extrema_count"] > best]
        stages.append(
            StageRecord(
                stage="extrema",
                before=list(survivors),
                after=[k for k in survivors if k not in gone],
                rejected=[
                    Rejection(k, "extrema", f"{metrics[k]['extrema_count']} extrema > minimum {best}",
                              float(metrics[k]["extrema_count"]))
                    for k in gone
                ],
            )
        )
        rejected_by_stage["extrema"] = [(k, float(metrics[k]["extrema_count"])) for k in gone]
        survivors = stages[-1].after

    # stage 2: smoothness order ("analytic" outranks any finite order)
    if survivors:
        best = max(_smoothness_rank(metrics[k]["smoothness_order"]) for k in survivors)
        gone = [k for k in survivors if _smoothness_rank(metrics[k]["smoothness_order"]) < best]
        stages.append(
            StageRecord(
                stage="smoothness",
                before=list(survivors),
                after=[k for k in survivors if k not in gone],
                rejected=[
                    Rejection(k, "smoothness",
                              f"order {metrics[k]['smoothness_order']} < best {best}",
                              float(_smoothness_rank(metrics[k]["smoothness_order"])))
                    for k in gone
                ],
            )
        )
        rejected_by_stage["smoothness"] = [
            (k, -float(_smoothness_rank(metrics[k]["smoothness_order"]))) for k in gone
        ]
        survivors = stages[-1].after

    # stage 3: bending energy with a relative tie tolerance
    if survivors:
        emin = min(metrics[k]["energy"] for k in survivors)
        tie = cfg.energy_tie_rel * max(abs(emin), 1e-300)
        gone = [k for k in survivors if metrics[k]["energy"] > emin + tie]
        stages.append(
            StageRecord(
                stage="energy",
                before=list(survivors),
                after=[k for k in survivors if k not in gone],
                rejected=[
                    Rejection(k, "energy", f"energy {metrics[k]['energy']:.9g} > minimum {emin:.9g}",
                              float(metrics[k]["energy"]))
                    for k in gone
                ],
            )
        )
        rejected_by_stage["energy"] = [(k, float(metrics[k]["energy"])) for k in gone]
        survivors = stages[-1].after

    # stage 4: aesthetics, only with supplied sheets covering all survivors
    sheets = cfg.aesthetic_sheets or {}
    if survivors and sheets and all(k in sheets for k in survivors):
        ravfs = {k: aggregate(list(sheets[k])).ravf for k in survivors}
        for k in survivors:
            metrics[k]["ravf"] = ravfs[k]
        best = max(ravfs.values())
        gone = [k for k in survivors if ravfs[k] < best]
        stages.append(
            StageRecord(
                stage="aesthetics",
                before=list(survivors),
                after=[k for k in survivors if k not in gone],
                rejected=[
                    Rejection(k, "aesthetics", f"RAVF {ravfs[k]} < best {best}", float(ravfs[k]))
                    for k in gone
                ],
            )
        )
        rejected_by_stage["aesthetics"] = [(k, -float(ravfs[k])) for k in gone]
        survivors = stages[-1].after

    # ranking: survivors, then later-stage rejects before earlier-stage ones,
    # within a stage by metric then id; errored candidates last
    ranking = sorted(survivors)
    for stage in reversed([s for s in STAGES if s in rejected_by_stage]):
        ranking.extend(k for k, _ in sorted(rejected_by_stage[stage], key=lambda kv: (kv[1], kv[0])))
    ranking.extend(sorted(errored))

    ties: list[list[str]] = []
    if len(survivors) > 1:
        ties.append(sorted(survivors))
    return ComparisonResult(
        ranking=ranking,
        stages=stages,
        ties=ties,
        metrics=metrics,
        common_data=verify,
        notes=notes,
    )
