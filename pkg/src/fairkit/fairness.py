"""Curve quality metrics and joint continuity classification.

Covers curvature extremum detection, monotone-curvature testing, bending
energy, parametric/geometric continuity orders at joints, the logarithmic
curvature graph, and the aggregate per-curve FairnessReport.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import diffgeom
from .errors import CuspError, NonMonotoneCurvature, NonPositiveCurvature
from .geomcore import Curve
from .spirals import gauss_kronrod

LCG_CONVENTION = "x = log(rho), y = log|ds/d(log rho)|, rho = 1/kappa"


@dataclass(frozen=True)
class CurvatureExtremum:
    """Interior strict local extremum of kappa(s)."""

    t: float
    s: float
    kappa: float
    kind: str  # "max" | "min"


@dataclass(frozen=True)
class ContinuityTolerances:
    """Gap tolerances used by joint classification.

    position is relative to the model scale; angle is radians; the rest
    are relative gaps. The *_floor values (in units of curvature per model
    scale power) mark the level below which an invariant counts as zero.
    """

    position: float = 1e-8
    angle: float = 1e-8
    curvature: float = 1e-6
    rate: float = 1e-5
    second_rate: float = 1e-4
    parametric: float = 1e-8
    curvature_floor: float = 1e-3
    rate_floor: float = 1e-3
    second_rate_floor: float = 1e-1


@dataclass(frozen=True)
class ContinuityClass:
    """Joint classification: -1 means the endpoints do not even coincide."""

    parametric_order: int
    geometric_order: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LcgResult:
    """Logarithmic curvature graph points with a least-squares line fit."""

    points: np.ndarray  # (n, 2) columns x, y
    slope: float
    r_squared: float
    convention: str = LCG_CONVENTION


@dataclass(frozen=True)
class FairnessReport:
    """The section-2 metric bundle for one curve."""

    extrema: list[CurvatureExtremum]
    extrema_count: int
    smoothness_order: int | str
    kappa_max: float
    kappa_rate_max: float
    energy: float
    energy_converged: bool
    lcg_fit: LcgResult | None
    monotone_curvature: bool


@dataclass(frozen=True)
class ReportConfig:
    profile_samples: int = 512
    energy_rel_tol: float = 1e-8
    extrema_tol: float | None = None
    lcg_samples: int = 256


def _segment_samples(curve: Curve, per_segment: int):
    """Per-segment parameter grids plus the arclength offset of each segment."""
    segs = curve.segments()
    out = []
    offset = 0.0
    for seg, (ga, gb) in segs:
        la, lb = seg.domain
        ts = np.linspace(la, lb, per_segment)
        length = diffgeom.arc_length(seg, la, lb, rel_tol=1e-10)
        out.append((seg, (ga, gb), ts, offset, length))
        offset += length
    return out, offset


def _kappa_constant(kappa_all: np.ndarray) -> bool:
    spread = float(kappa_all.max() - kappa_all.min())
    return spread <= 1e-9 * max(float(np.abs(kappa_all).max()), 1e-30)


def find_curvature_extrema(curve: Curve, tol: float = 1e-12, per_segment: int = 2049) -> list[CurvatureExtremum]:
    """Interior strict local extrema of kappa(s).

    Sign changes of dkappa/ds are bracketed on a dense per-segment grid and
    refined by bisection to parameter tolerance tol; near-duplicates within
    1e-6 of the total arclength merge; endpoints are excluded.
    """
    samples, total_len = _segment_samples(curve, per_segment)
    kappa_all = np.concatenate([diffgeom.curvature_many(seg, ts) for seg, _, ts, _, _ in samples])
    if _kappa_constant(kappa_all):
        return []
    found = []
    for seg, (ga, gb), ts, offset, length in samples:
        rate = diffgeom.curvature_rate_many(seg, ts)
        band = 1e-9 * float(np.abs(rate).max()) if np.abs(rate).max() > 0 else 0.0
        signs = np.zeros(ts.shape[0], dtype=int)
        signs[rate > band] = 1
        signs[rate < -band] = -1
        nz = np.nonzero(signs)[0]
        for i, j in zip(nz[:-1], nz[1:]):
            if signs[i] == signs[j]:
                continue
            a, b = float(ts[i]), float(ts[j])
            fa = float(rate[i])
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = float(diffgeom.curvature_rate_many(seg, np.array([m]))[0])
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
                if b - a <= tol * max(1.0, seg.domain[1] - seg.domain[0]):
                    break
            t_loc = 0.5 * (a + b)
            la, lb = seg.domain
            s_here = offset + (diffgeom.arc_length(seg, la, t_loc) if t_loc > la else 0.0)
            kind = "max" if signs[i] > 0 else "min"
            t_glob = ga + (t_loc - la) / (lb - la) * (gb - ga)
            kap = float(diffgeom.curvature_many(seg, np.array([t_loc]))[0])
            found.append(CurvatureExtremum(t=t_glob, s=s_here, kappa=kap, kind=kind))
    found.sort(key=lambda e: e.s)
    merge_tol = 1e-6 * total_len
    merged: list[CurvatureExtremum] = []
    for ext in found:
        if merged and ext.s - merged[-1].s <= merge_tol:
            continue
        merged.append(ext)
    return [e for e in merged if merge_tol < e.s < total_len - merge_tol]


def is_curvature_monotone(curve: Curve, tol: float = 1e-9, per_segment: int = 2049) -> bool:
    """True iff kappa(s) does not change direction; constant kappa counts."""
    samples, _ = _segment_samples(curve, per_segment)
    kappa_all = np.concatenate([diffgeom.curvature_many(seg, ts) for seg, _, ts, _, _ in samples])
    if _kappa_constant(kappa_all):
        return True
    diffs = np.diff(kappa_all)
    eps = tol * float(kappa_all.max() - kappa_all.min())
    return bool(np.all(diffs >= -eps) or np.all(diffs <= eps))


def bending_energy(curve: Curve, rel_tol: float = 1e-8, full_output: bool = False):
    """Integral of kappa^2 ds over the full domain by adaptive Gauss-Kronrod.

    With full_output=True returns (value, converged); a blown subdivision
    budget yields the best estimate with converged=False.
    """
    exact_len = getattr(curve, "arc_length_exact", None)
    lo, hi = curve.domain
    total = 0.0
    converged = True
    if exact_len is not None:
        # arclength-parameterized: integrate kappa(s)^2 directly
        def f(ss):
            return curve.curvature_exact_many(np.atleast_1d(ss)) ** 2

        res = gauss_kronrod(f, lo, hi, tol=rel_tol)
        total, converged = res.value, res.converged
    else:
        for seg, _, ts, _, _ in _segment_samples(curve, 257)[0]:
            speeds = np.linalg.norm(seg.derivatives_many(ts, 1)[1], axis=1)
            if speeds.min() <= diffgeom._cusp_tol(seg):
                raise CuspError("cusp inside the integration range")

            def f(tt, _seg=seg):
                d = _seg.derivatives_many(np.atleast_1d(tt), 2)
                sp = np.linalg.norm(d[1], axis=1)
                if _seg.dimension == 2:
                    num = d[1][:, 0] * d[2][:, 1] - d[1][:, 1] * d[2][:, 0]
                else:
                    num = np.linalg.norm(np.cross(d[1], d[2]), axis=1)
                return (num / sp**3) ** 2 * sp

            la, lb = seg.domain
            res = gauss_kronrod(f, la, lb, tol=rel_tol)
            total += res.value
            converged = converged and res.converged
    if full_output:
        return total, converged
    return total


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _angle_between(u: np.ndarray, v: np.ndarray) -> float:
    uu, vv = _unit(u), _unit(v)
    if uu.shape[0] == 2:
        sin = abs(float(uu[0] * vv[1] - uu[1] * vv[0]))
    else:
        sin = float(np.linalg.norm(np.cross(uu, vv)))
    return math.atan2(sin, float(uu @ vv))


def _end_invariants(curve: Curve, t: float):
    """Geometric invariants at a curve end: T, curvature vector, rate, 2nd rate."""
    d = curve.derivatives_many(np.array([t]), 3)
    d1, d2 = d[1][0], d[2][0]
    speed = float(np.linalg.norm(d1))
    T = d1 / speed
    curv_vec = (d2 - (d2 @ T) * T) / speed**2
    if curve.dimension == 2:
        kappa_signed = float(d1[0] * d2[1] - d1[1] * d2[0]) / speed**3
    else:
        kappa_signed = float(np.linalg.norm(curv_vec))
    rate = diffgeom.curvature_rate(curve, t)
    rate2 = diffgeom.curvature_second_rate(curve, t)
    return T, curv_vec, kappa_signed, rate, rate2


def _rel_gap(va: float, vb: float) -> float:
    denom = max(min(abs(va), abs(vb)), 1e-300)
    return abs(va - vb) / denom


def _passes(va: float, vb: float, rel: float, floor: float) -> bool:
    return abs(va - vb) <= rel * max(abs(va), abs(vb), floor)


def continuity_at_joint(
    a: Curve, b: Curve, max_k: int = 4, tols: ContinuityTolerances | None = None
) -> ContinuityClass:
    """Classify the joint where a ends and b starts.

    Parametric order compares raw derivative vectors; geometric order
    compares arclength-normalized invariants (G0 position, G1 unit tangent,
    G2 curvature vector, G3 curvature rate, G4 second curvature rate).
    """
    tols = tols or ContinuityTolerances()
    max_k = min(max_k, 4)
    scale = max(a.scale_hint(), b.scale_hint())
    ta, tb = a.domain[1], b.domain[0]
    pa, pb = a.point(ta), b.point(tb)
    diag: dict = {"position_gap": float(np.linalg.norm(pa - pb))}
    if diag["position_gap"] > tols.position * scale:
        return ContinuityClass(-1, -1, diag)

    # parametric: raw derivative vectors, relative to their own magnitude
    da = a.derivatives(ta, max_k) if max_k >= 1 else []
    db = b.derivatives(tb, max_k) if max_k >= 1 else []
    parametric = 0
    for k in range(1, max_k + 1):
        va, vb = da[k - 1], db[k - 1]
        ref = max(np.linalg.norm(va), np.linalg.norm(vb), 1e-9 * scale)
        if np.linalg.norm(va - vb) <= tols.parametric * ref:
            parametric = k
        else:
            break

    Ta, ka_vec, ka, ra, ra2 = _end_invariants(a, ta)
    Tb, kb_vec, kb, rb, rb2 = _end_invariants(b, tb)
    diag["tangent_angle_gap"] = _angle_between(Ta, Tb)
    diag["curvature_gap"] = _rel_gap(ka, kb)
    diag["curvature_rate_gap"] = _rel_gap(ra, rb)
    diag["second_rate_gap"] = _rel_gap(ra2, rb2)
    if a.dimension == 3:
        try:
            diag["torsion_gap"] = _rel_gap(diffgeom.torsion(a, ta), diffgeom.torsion(b, tb))
        except Exception:
            diag["torsion_gap"] = float("nan")

    geometric = 0
    kfloor = tols.curvature_floor / scale
    if max_k >= 1 and diag["tangent_angle_gap"] <= tols.angle:
        geometric = 1
        kv_gap = float(np.linalg.norm(ka_vec - kb_vec))
        kv_ref = max(np.linalg.norm(ka_vec), np.linalg.norm(kb_vec), kfloor)
        if max_k >= 2 and kv_gap <= tols.curvature * kv_ref:
            geometric = 2
            if max_k >= 3 and _passes(ra, rb, tols.rate, tols.rate_floor / scale**2):
                geometric = 3
                if max_k >= 4 and _passes(ra2, rb2, tols.second_rate, tols.second_rate_floor / scale**3):
                    geometric = 4
    # exact parametric continuity implies geometric continuity of the same order
    geometric = max(geometric, parametric)
    return ContinuityClass(parametric_order=parametric, geometric_order=geometric, diagnostics=diag)


def smoothness_order(curve: Curve, tols: ContinuityTolerances | None = None) -> int | str:
    """"analytic" for a single analytic piece, else the minimum geometric
    order over all interior joints, capped at 4."""
    segs = curve.segments()
    if len(segs) == 1:
        return "analytic"
    order = 4
    for (sa, _), (sb, _) in zip(segs[:-1], segs[1:]):
        order = min(order, continuity_at_joint(sa, sb, max_k=4, tols=tols).geometric_order)
        if order <= -1:
            break
    return order


def lcg(curve: Curve, n: int = 256) -> LcgResult:
    """Logarithmic curvature graph with a least-squares line fit.

    Requires strictly monotone positive curvature over the domain.
    """
    profile = diffgeom.sample_profile(curve, n)
    kappa, rate = profile.kappa, profile.dkappa_ds
    if np.any(kappa <= 0):
        raise NonPositiveCurvature("logarithmic curvature graph needs kappa > 0")
    band = 1e-12 * max(float(np.abs(rate).max()), 1e-300)
    if not (np.all(rate > band) or np.all(rate < -band)):
        raise NonMonotoneCurvature("dkappa/ds must be nonzero with one sign")
    x = -np.log(kappa)
    y = np.log(kappa / np.abs(rate))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot <= 1e-20 * max(float((y**2).sum()), 1e-300):
        r2 = 1.0 if ss_res <= 1e-18 * n * max(float((y**2).max()), 1e-300) else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return LcgResult(points=np.column_stack([x, y]), slope=float(slope), r_squared=float(r2))


def fairness_report(curve: Curve, config: ReportConfig | None = None) -> FairnessReport:
    """All section-2 metrics for one curve."""
    cfg = config or ReportConfig()
    profile = diffgeom.sample_profile(curve, cfg.profile_samples)
    extrema = find_curvature_extrema(curve, tol=cfg.extrema_tol or 1e-12)
    energy, converged = bending_energy(curve, rel_tol=cfg.energy_rel_tol, full_output=True)
    try:
        fit = lcg(curve, cfg.lcg_samples)
    except (NonMonotoneCurvature, NonPositiveCurvature):
        fit = None
    return FairnessReport(
        extrema=extrema,
        extrema_count=len(extrema),
        smoothness_order=smoothness_order(curve),
        kappa_max=float(np.abs(profile.kappa).max()),
        kappa_rate_max=float(np.abs(profile.dkappa_ds).max()),
        energy=energy,
        energy_converged=converged,
        lcg_fit=fit,
        monotone_curvature=is_curvature_monotone(curve),
    )
