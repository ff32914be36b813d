"""Differential quantities of a curve.

Signed planar curvature (positive for counterclockwise turning), spatial
curvature magnitude, torsion, arc length by adaptive quadrature, and the
curvature rate dkappa/ds. Spiral curves expose exact closed forms which
are used whenever available; polynomial curves get exact derivative-based
formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CuspError, InflectionError, OutOfDomain, PlanarCurve, ReversedInterval
from .geomcore import Curve
from .spirals import _kronrod_panel, gauss_kronrod

CUSP_REL_TOL = 1e-12


@dataclass(frozen=True)
class CurvatureProfile:
    """Arclength-uniform samples of the differential invariants.

    Arrays share length n >= 2; tau is None for planar curves.
    """

    s: np.ndarray
    t: np.ndarray
    kappa: np.ndarray
    dkappa_ds: np.ndarray
    tau: np.ndarray | None = None

    def __len__(self) -> int:
        return self.s.shape[0]

    @property
    def total_length(self) -> float:
        return float(self.s[-1] - self.s[0])


def _cusp_tol(curve: Curve) -> float:
    return CUSP_REL_TOL * curve.scale_hint()


def _cross_z(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def curvature_many(curve: Curve, ts: np.ndarray) -> np.ndarray:
    """Vectorized curvature at parameters ts; signed for planar curves."""
    ts = np.asarray(ts, dtype=float)
    exact = getattr(curve, "curvature_exact_many", None)
    if exact is not None:
        return exact(ts)
    d = curve.derivatives_many(ts, 2)
    d1, d2 = d[1], d[2]
    speed = np.linalg.norm(d1, axis=1)
    if np.any(speed <= _cusp_tol(curve)):
        raise CuspError("first derivative vanishes within the sampled range")
    if curve.dimension == 2:
        return _cross_z(d1, d2) / speed**3
    return np.linalg.norm(np.cross(d1, d2), axis=1) / speed**3


def curvature(curve: Curve, t: float) -> float:
    """Curvature at one parameter; see curvature_many."""
    return float(curvature_many(curve, np.array([t]))[0])


def curvature_rate_many(curve: Curve, ts: np.ndarray) -> np.ndarray:
    """Vectorized dkappa/ds at parameters ts."""
    ts = np.asarray(ts, dtype=float)
    exact = getattr(curve, "curvature_rate_exact_many", None)
    if exact is not None:
        return exact(ts)
    d = curve.derivatives_many(ts, 3)
    d1, d2, d3 = d[1], d[2], d[3]
    speed = np.linalg.norm(d1, axis=1)
    if np.any(speed <= _cusp_tol(curve)):
        raise CuspError("first derivative vanishes within the sampled range")
    dot12 = np.einsum("ij,ij->i", d1, d2)
    if curve.dimension == 2:
        c12 = _cross_z(d1, d2)
        c13 = _cross_z(d1, d3)
        dkdt = (c13 * speed**2 - 3.0 * dot12 * c12) / speed**5
        return dkdt / speed
    cr12 = np.cross(d1, d2)
    cr13 = np.cross(d1, d3)
    n12 = np.linalg.norm(cr12, axis=1)
    dkdt = np.empty_like(speed)
    ok = n12 > 1e-300
    dn12 = np.zeros_like(speed)
    dn12[ok] = np.einsum("ij,ij->i", cr12[ok], cr13[ok]) / n12[ok]
    dkdt = (dn12 * speed**2 - 3.0 * dot12 * n12) / speed**5
    return dkdt / speed


def curvature_rate(curve: Curve, t: float) -> float:
    return float(curvature_rate_many(curve, np.array([t]))[0])


def curvature_second_rate(curve: Curve, t: float) -> float:
    """d^2 kappa / ds^2 at t, by one-sided-safe finite differences of the rate."""
    exact = getattr(curve, "curvature_second_rate_exact_many", None)
    if exact is not None:
        return float(exact(np.array([t]))[0])
    lo, hi = curve.domain
    h = 1e-5 * (hi - lo)
    if t - h >= lo and t + h <= hi:
        r = curvature_rate_many(curve, np.array([t - h, t + h]))
        drdt = (r[1] - r[0]) / (2.0 * h)
    elif t + 2 * h <= hi:
        r = curvature_rate_many(curve, np.array([t, t + h, t + 2 * h]))
        drdt = (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * h)
    else:
        r = curvature_rate_many(curve, np.array([t - 2 * h, t - h, t]))
        drdt = (r[0] - 4.0 * r[1] + 3.0 * r[2]) / (2.0 * h)
    speed = float(np.linalg.norm(curve.derivatives(t, 1)[0]))
    return float(drdt) / speed


def torsion(curve: Curve, t: float) -> float:
    """Signed torsion of a spatial curve at t."""
    if curve.dimension != 3:
        raise PlanarCurve("torsion requires a spatial curve")
    d1, d2, d3 = curve.derivatives(t, 3)
    speed = float(np.linalg.norm(d1))
    if speed <= _cusp_tol(curve):
        raise CuspError("first derivative vanishes")
    cr = np.cross(d1, d2)
    n2 = float(cr @ cr)
    # curvature below resolvable level means the osculating plane is undefined
    if math.sqrt(n2) <= 1e-12 * speed**3 / curve.scale_hint():
        raise InflectionError("|r' x r''| below tolerance; torsion undefined")
    return float(cr @ d3) / n2


def _speed_integrand(curve: Curve):
    def f(ts):
        d1 = curve.derivatives_many(np.atleast_1d(ts), 1)[1]
        return np.linalg.norm(d1, axis=1)

    return f


def _segment_breaks(curve: Curve, t0: float, t1: float) -> np.ndarray:
    cuts = [t0, t1]
    for _, (a, b) in curve.segments():
        for x in (a, b):
            if t0 < x < t1:
                cuts.append(x)
    return np.unique(np.asarray(cuts, dtype=float))


def arc_length(curve: Curve, t0: float, t1: float, rel_tol: float = 1e-9) -> float:
    """Arc length between parameters by adaptive quadrature of |r'(t)|."""
    lo, hi = curve.domain
    slack = 1e-12 * max(hi - lo, 1.0)
    if t0 < lo - slack or t1 > hi + slack:
        raise OutOfDomain(f"interval [{t0}, {t1}] outside domain [{lo}, {hi}]")
    if t0 >= t1:
        raise ReversedInterval(f"need t0 < t1, got [{t0}, {t1}]")
    exact = getattr(curve, "arc_length_exact", None)
    if exact is not None:
        return exact(t0, t1)
    f = _speed_integrand(curve)
    total = 0.0
    breaks = _segment_breaks(curve, t0, t1)
    for a, b in zip(breaks[:-1], breaks[1:]):
        total += gauss_kronrod(f, float(a), float(b), tol=rel_tol).value
    return total


def _arclength_table(curve: Curve, nodes_per_segment: int = 64):
    """Cumulative length at a dense parameter grid, panel-exact between nodes."""
    lo, hi = curve.domain
    grid = [np.array([lo])]
    for _, (a, b) in curve.segments():
        grid.append(np.linspace(a, b, nodes_per_segment + 1)[1:])
    ts = np.unique(np.concatenate(grid))
    ts = ts[(ts >= lo) & (ts <= hi)]
    f = _speed_integrand(curve)
    cum = np.zeros(ts.shape[0])
    for i in range(ts.shape[0] - 1):
        val, _ = _kronrod_panel(f, ts[i], ts[i + 1])
        cum[i + 1] = cum[i] + val
    return ts, cum


def param_at_arclength(curve: Curve, s_targets: np.ndarray, rel_tol: float = 1e-6) -> np.ndarray:
    """Invert the arclength function: parameters where s(t) hits each target."""
    s_targets = np.asarray(s_targets, dtype=float)
    exact = getattr(curve, "arc_length_exact", None)
    lo, hi = curve.domain
    if exact is not None:
        return np.clip(lo + s_targets, lo, hi)
    ts, cum = _arclength_table(curve)
    total = cum[-1]
    f = _speed_integrand(curve)
    out = np.interp(np.clip(s_targets, 0.0, total), cum, ts)
    # Newton polish on F(t) = L(t) - s with panel-exact local lengths
    for _ in range(3):
        idx = np.clip(np.searchsorted(ts, out, side="right") - 1, 0, ts.shape[0] - 2)
        length = np.empty_like(out)
        for j, (i, t) in enumerate(zip(idx, out)):
            val = _kronrod_panel(f, ts[i], t)[0] if t > ts[i] else 0.0
            length[j] = cum[i] + val
        speed = f(out)
        step = (length - np.clip(s_targets, 0.0, total)) / np.maximum(speed, 1e-300)
        out = np.clip(out - step, lo, hi)
        if np.max(np.abs(step)) <= rel_tol * max(hi - lo, 1e-300):
            break
    return out


def sample_profile(curve: Curve, n: int) -> CurvatureProfile:
    """n samples equally spaced in arclength over the full domain."""
    if n < 2:
        raise ValueError(f"profile needs at least 2 samples, got {n}")
    exact = getattr(curve, "arc_length_exact", None)
    lo, hi = curve.domain
    total = exact(lo, hi) if exact is not None else arc_length(curve, lo, hi)
    s = np.linspace(0.0, total, n)
    t = param_at_arclength(curve, s)
    kappa = curvature_many(curve, t)
    rate = curvature_rate_many(curve, t)
    tau = None
    if curve.dimension == 3:
        tau = np.empty(n)
        for i, ti in enumerate(t):
            try:
                tau[i] = torsion(curve, float(ti))
            except InflectionError:
                tau[i] = np.nan
    return CurvatureProfile(s=s, t=t, kappa=kappa, dkappa_ds=rate, tau=tau)
