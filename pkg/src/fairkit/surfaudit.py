"""Tensor-product patch evaluation, zebra (isophote) values, joint audits.

A joint audit samples stations along a shared boundary and grades the
joint G0/G1/G2 from position gaps, normal angles, and normal curvatures
in three tangent directions; the zebra kink angle measures how sharply
the isophote direction turns across the joint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateControlData, DegenerateNormal, DimensionMismatch
from .geomcore import SimilarityTransform


def _bernstein(n: int, t: float) -> np.ndarray:
    b = np.array([1.0])
    for _ in range(n):
        b = np.concatenate([[0.0], b]) * t + np.concatenate([b, [0.0]]) * (1.0 - t)
    return b


def _bernstein_deriv(n: int, t: float, order: int) -> np.ndarray:
    """Derivative of the Bernstein basis vector of degree n, given order."""
    if order == 0:
        return _bernstein(n, t)
    if order > n:
        return np.zeros(n + 1)
    lower = _bernstein_deriv(n - 1, t, order - 1)
    up = np.concatenate([[0.0], lower]) - np.concatenate([lower, [0.0]])
    return n * up


class SurfacePatch:
    """Tensor-product Bezier patch on [0,1]^2, optionally rational.

    Control net shape (m+1, n+1, 3); u runs along the first axis.
    """

    def __init__(self, control_net, weights=None):
        net = np.asarray(control_net, dtype=float)
        if net.ndim != 3 or net.shape[2] != 3 or net.shape[0] < 2 or net.shape[1] < 2:
            raise DegenerateControlData(f"control net must be (m+1>=2, n+1>=2, 3), got {net.shape}")
        if not np.all(np.isfinite(net)):
            raise DegenerateControlData("control net contains non-finite values")
        self._net = net
        if weights is not None:
            w = np.asarray(weights, dtype=float)
            if w.shape != net.shape[:2]:
                raise DegenerateControlData("weights must match the control net")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise DegenerateControlData("weights must be positive and finite")
            self._weights = w
        else:
            self._weights = None

    @property
    def control_net(self) -> np.ndarray:
        return self._net

    @property
    def weights(self):
        return self._weights

    @property
    def degrees(self) -> tuple[int, int]:
        return (self._net.shape[0] - 1, self._net.shape[1] - 1)

    def scale_hint(self) -> float:
        span = self._net.reshape(-1, 3).max(axis=0) - self._net.reshape(-1, 3).min(axis=0)
        return float(max(np.linalg.norm(span), 1e-300))

    def _tensor_value(self, data: np.ndarray, u: float, v: float, du: int, dv: int) -> np.ndarray:
        m, n = self.degrees
        bu = _bernstein_deriv(m, u, du)
        bv = _bernstein_deriv(n, v, dv)
        return np.einsum("i,ijk,j->k", bu, data, bv)

    def derivative(self, u: float, v: float, du: int = 0, dv: int = 0) -> np.ndarray:
        """Partial derivative of the surface point, total order <= 2."""
        if du + dv > 2:
            raise ValueError("patch derivatives supported to total order 2")
        if self._weights is None:
            return self._tensor_value(self._net, u, v, du, dv)
        homog = np.concatenate([self._net * self._weights[..., None], self._weights[..., None]], axis=2)

        def hval(a, b):
            h = self._tensor_value(homog, u, v, a, b)
            return h[:3], h[3]

        N, w = hval(0, 0)
        S = N / w
        if (du, dv) == (0, 0):
            return S
        Nu, wu = hval(1, 0)
        Nv, wv = hval(0, 1)
        Su = (Nu - S * wu) / w
        Sv = (Nv - S * wv) / w
        if (du, dv) == (1, 0):
            return Su
        if (du, dv) == (0, 1):
            return Sv
        if (du, dv) == (2, 0):
            Nuu, wuu = hval(2, 0)
            return (Nuu - 2.0 * Su * wu - S * wuu) / w
        if (du, dv) == (0, 2):
            Nvv, wvv = hval(0, 2)
            return (Nvv - 2.0 * Sv * wv - S * wvv) / w
        Nuv, wuv = hval(1, 1)
        return (Nuv - Su * wv - Sv * wu - S * wuv) / w

    def split_u(self, t: float) -> tuple["SurfacePatch", "SurfacePatch"]:
        """Exact de Casteljau subdivision along u."""
        if self._weights is None:
            data = self._net
        else:
            data = np.concatenate([self._net * self._weights[..., None], self._weights[..., None]], axis=2)
        left = [data[0]]
        right = [data[-1]]
        b = data
        while b.shape[0] > 1:
            b = (1.0 - t) * b[:-1] + t * b[1:]
            left.append(b[0])
            right.append(b[-1])
        left = np.array(left)
        right = np.array(right[::-1])
        if self._weights is None:
            return SurfacePatch(left), SurfacePatch(right)
        lw, rw = left[..., 3], right[..., 3]
        return (
            SurfacePatch(left[..., :3] / lw[..., None], lw),
            SurfacePatch(right[..., :3] / rw[..., None], rw),
        )

    def transformed(self, T: SimilarityTransform) -> "SurfacePatch":
        if T.dimension != 3:
            raise DimensionMismatch("patch transforms must be 3D")
        return SurfacePatch(T.apply(self._net), self._weights)


def patch_eval(patch: SurfacePatch, u: float, v: float) -> np.ndarray:
    return patch.derivative(u, v, 0, 0)


def patch_normal(patch: SurfacePatch, u: float, v: float) -> np.ndarray:
    ru = patch.derivative(u, v, 1, 0)
    rv = patch.derivative(u, v, 0, 1)
    cr = np.cross(ru, rv)
    norm = float(np.linalg.norm(cr))
    if norm < 1e-12 * patch.scale_hint():
        raise DegenerateNormal(f"|du x dv| = {norm:.3e} at (u={u}, v={v})")
    return cr / norm


def zebra_value(patch: SurfacePatch, u: float, v: float, view, bands: int = 20) -> tuple[float, int]:
    """Isophote value s = normal . view and its band index in [0, bands)."""
    if bands < 2:
        raise ValueError(f"need bands >= 2, got {bands}")
    view = np.asarray(view, dtype=float)
    view = view / np.linalg.norm(view)
    s = float(patch_normal(patch, u, v) @ view)
    idx = int(math.floor((s + 1.0) / 2.0 * bands))
    return s, min(max(idx, 0), bands - 1)


@dataclass(frozen=True)
class BoundarySpec:
    """Which edges meet: edge names u0, u1, v0, v1; reverse flips b's
    boundary parameter."""

    edge_a: str = "u1"
    edge_b: str = "u0"
    reverse: bool = False

    def map_a(self, x: float) -> tuple[float, float]:
        return _edge_uv(self.edge_a, x)

    def map_b(self, x: float) -> tuple[float, float]:
        return _edge_uv(self.edge_b, 1.0 - x if self.reverse else x)


def _edge_uv(edge: str, x: float) -> tuple[float, float]:
    if edge == "u0":
        return (0.0, x)
    if edge == "u1":
        return (1.0, x)
    if edge == "v0":
        return (x, 0.0)
    if edge == "v1":
        return (x, 1.0)
    raise ValueError(f"unknown edge {edge!r}")


@dataclass(frozen=True)
class AuditTolerances:
    position: float = 1e-8
    angle: float = 1e-8
    curvature: float = 1e-6
    curvature_floor: float = 1e-3


@dataclass(frozen=True)
class StationSample:
    x: float
    position_gap: float
    normal_angle_gap: float
    curvature_gaps: tuple[float, float, float]
    zebra_kink: float


@dataclass(frozen=True)
class JointAudit:
    """Verdict -1 = boundary mismatch, else the highest order passed at
    every station."""

    stations: list[StationSample]
    verdict: int
    max_kink: float

    @property
    def label(self) -> str:
        return "mismatch" if self.verdict < 0 else f"G{self.verdict}"


def _fundamental_forms(patch: SurfacePatch, u: float, v: float):
    ru = patch.derivative(u, v, 1, 0)
    rv = patch.derivative(u, v, 0, 1)
    ruu = patch.derivative(u, v, 2, 0)
    ruv = patch.derivative(u, v, 1, 1)
    rvv = patch.derivative(u, v, 0, 2)
    cr = np.cross(ru, rv)
    norm = float(np.linalg.norm(cr))
    if norm < 1e-12 * patch.scale_hint():
        raise DegenerateNormal("normal undefined at audit station")
    nrm = cr / norm
    I = np.array([[ru @ ru, ru @ rv], [ru @ rv, rv @ rv]])
    II = np.array([[nrm @ ruu, nrm @ ruv], [nrm @ ruv, nrm @ rvv]])
    return ru, rv, nrm, I, II


def _normal_curvature(ru, rv, I, II, direction: np.ndarray) -> float:
    rhs = np.array([ru @ direction, rv @ direction])
    ab = np.linalg.solve(I, rhs)
    denom = float(ab @ I @ ab)
    return float(ab @ II @ ab) / denom


def _zebra_direction(patch: SurfacePatch, u: float, v: float, view: np.ndarray):
    """Isophote level-set direction in 3D, or None when grad s vanishes."""
    h = 1e-5

    def s_at(uu, vv):
        n = patch_normal(patch, min(max(uu, 0.0), 1.0), min(max(vv, 0.0), 1.0))
        return float(n @ view)

    def partial(coord):
        if coord == "u":
            lo, x = 0.0, u
        else:
            lo, x = 0.0, v
        if h <= x <= 1.0 - h:
            if coord == "u":
                return (s_at(u + h, v) - s_at(u - h, v)) / (2 * h)
            return (s_at(u, v + h) - s_at(u, v - h)) / (2 * h)
        if x < h:
            if coord == "u":
                return (-3 * s_at(u, v) + 4 * s_at(u + h, v) - s_at(u + 2 * h, v)) / (2 * h)
            return (-3 * s_at(u, v) + 4 * s_at(u, v + h) - s_at(u, v + 2 * h)) / (2 * h)
        if coord == "u":
            return (3 * s_at(u, v) - 4 * s_at(u - h, v) + s_at(u - 2 * h, v)) / (2 * h)
        return (3 * s_at(u, v) - 4 * s_at(u, v - h) + s_at(u, v - 2 * h)) / (2 * h)

    su, sv = partial("u"), partial("v")
    if math.hypot(su, sv) < 1e-12:
        return None
    ru = patch.derivative(u, v, 1, 0)
    rv = patch.derivative(u, v, 0, 1)
    w = -sv * ru + su * rv
    norm = float(np.linalg.norm(w))
    if norm < 1e-300:
        return None
    return w / norm


def _line_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Angle between directions modulo sign (stable near zero)."""
    if float(a @ b) < 0:
        b = -b
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(a @ b))


def audit_joint(
    a: SurfacePatch,
    b: SurfacePatch,
    boundary: BoundarySpec | None = None,
    view=(0.0, 0.0, 1.0),
    stations: int = 33,
    tols: AuditTolerances | None = None,
) -> JointAudit:
    """Grade the joint between two patches along a shared boundary."""
    boundary = boundary or BoundarySpec()
    tols = tols or AuditTolerances()
    view = np.asarray(view, dtype=float)
    view = view / np.linalg.norm(view)
    scale = max(a.scale_hint(), b.scale_hint())
    samples = []
    pass0 = pass1 = pass2 = True
    for x in np.linspace(0.0, 1.0, stations):
        ua, va = boundary.map_a(float(x))
        ub, vb = boundary.map_b(float(x))
        pa = patch_eval(a, ua, va)
        pb = patch_eval(b, ub, vb)
        pos_gap = float(np.linalg.norm(pa - pb))
        rua, rva, na, Ia, IIa = _fundamental_forms(a, ua, va)
        rub, rvb, nb, Ib, IIb = _fundamental_forms(b, ub, vb)
        angle = _line_angle(na, nb)
        flip = -1.0 if float(na @ nb) < 0 else 1.0
        # shared tangent frame: boundary tangent, in-surface cross, diagonal
        tang = rva if boundary.edge_a in ("u0", "u1") else rua
        tang = tang / np.linalg.norm(tang)
        cross_dir = np.cross(na, tang)
        diag_dir = (tang + cross_dir) / math.sqrt(2.0)
        gaps = []
        for d in (tang, cross_dir, diag_dir):
            kna = _normal_curvature(rua, rva, Ia, IIa, d)
            knb = flip * _normal_curvature(rub, rvb, Ib, IIb, d)
            ref = max(abs(kna), abs(knb), tols.curvature_floor / scale)
            gaps.append(abs(kna - knb) / ref)
        wa = _zebra_direction(a, ua, va, view)
        wb = _zebra_direction(b, ub, vb, view)
        kink = _line_angle(wa, wb) if wa is not None and wb is not None else float("nan")
        samples.append(
            StationSample(
                x=float(x),
                position_gap=pos_gap,
                normal_angle_gap=angle,
                curvature_gaps=tuple(gaps),
                zebra_kink=kink,
            )
        )
        pass0 = pass0 and pos_gap <= tols.position * scale
        pass1 = pass1 and angle <= tols.angle
        pass2 = pass2 and all(g <= tols.curvature for g in gaps)
    if not pass0:
        verdict = -1
    elif not pass1:
        verdict = 0
    elif not pass2:
        verdict = 1
    else:
        verdict = 2
    kinks = [s.zebra_kink for s in samples if not math.isnan(s.zebra_kink)]
    return JointAudit(stations=samples, verdict=verdict, max_kink=max(kinks) if kinks else float("nan"))
