"""Parametric curve representations and evaluation.

Curve kinds: Bezier segments (optionally rational), B-splines, piecewise
compositions, polylines, and (via the spirals module) arclength-defined
analytic spirals. All curves are immutable after construction and expose
points and exact parametric derivatives up to order 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.interpolate import BSpline

from .errors import (
    DegenerateControlData,
    DimensionMismatch,
    InvalidJoint,
    InvalidKnots,
    OutOfDomain,
    UnknownEntityKind,
)

MAX_DERIVATIVE_ORDER = 5
DEFAULT_JOIN_TOL = 1e-8


def as_point(value, dim=None) -> np.ndarray:
    """Validate and convert a coordinate sequence to a float array."""
    p = np.asarray(value, dtype=float)
    if p.ndim != 1 or p.size not in (2, 3):
        raise DegenerateControlData(f"point must have 2 or 3 coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DegenerateControlData(f"point has non-finite components: {p}")
    if dim is not None and p.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.size}")
    return p


def _binom(n: int, k: int) -> float:
    return float(math.comb(n, k))


@dataclass(frozen=True)
class SimilarityTransform:
    """Rotation + translation + uniform scale, scale > 0, det(rotation) = +1."""

    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        rot = np.asarray(self.rotation, dtype=float)
        tr = np.asarray(self.translation, dtype=float)
        if rot.ndim != 2 or rot.shape[0] != rot.shape[1] or rot.shape[0] not in (2, 3):
            raise DimensionMismatch(f"rotation must be 2x2 or 3x3, got {rot.shape}")
        if tr.shape != (rot.shape[0],):
            raise DimensionMismatch("translation dimension does not match rotation")
        if not np.allclose(rot @ rot.T, np.eye(rot.shape[0]), atol=1e-12):
            raise DegenerateControlData("rotation is not orthonormal")
        if np.linalg.det(rot) < 0:
            raise DegenerateControlData("rotation must have determinant +1")
        if not (self.scale > 0 and np.isfinite(self.scale)):
            raise DegenerateControlData(f"scale must be positive and finite, got {self.scale}")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tr)

    @property
    def dimension(self) -> int:
        return self.rotation.shape[0]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map points (shape (..., d)) through scale * R @ p + t."""
        pts = np.asarray(points, dtype=float)
        return self.scale * pts @ self.rotation.T + self.translation

    def apply_vector(self, vectors: np.ndarray) -> np.ndarray:
        """Map direction vectors: scale * R @ v, no translation."""
        return self.scale * np.asarray(vectors, dtype=float) @ self.rotation.T

    @property
    def rotation_angle(self) -> float:
        """Planar rotation angle in radians (2D transforms only)."""
        if self.dimension != 2:
            raise DimensionMismatch("rotation_angle defined for 2D transforms")
        return math.atan2(self.rotation[1, 0], self.rotation[0, 0])

    @classmethod
    def identity(cls, dim: int) -> "SimilarityTransform":
        return cls(np.eye(dim), np.zeros(dim), 1.0)

    @classmethod
    def planar(cls, angle: float = 0.0, translation=(0.0, 0.0), scale: float = 1.0):
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[c, -s], [s, c]]), np.asarray(translation, dtype=float), scale)


class Curve:
    """Abstract parametric curve over a closed parameter interval."""

    kind: str = "abstract"

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def domain(self) -> tuple[float, float]:
        raise NotImplementedError

    def point(self, t: float) -> np.ndarray:
        return self.point_many(np.array([t]))[0]

    def point_many(self, ts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivatives(self, t: float, max_order: int) -> list[np.ndarray]:
        """Parametric derivative vectors of orders 1..max_order at t."""
        stack = self.derivatives_many(np.array([t]), max_order)
        return [stack[k][0] for k in range(1, max_order + 1)]

    def derivatives_many(self, ts: np.ndarray, max_order: int) -> list[np.ndarray]:
        """Arrays of shape (m, d) for derivative orders 0..max_order."""
        raise NotImplementedError

    def transformed(self, T: SimilarityTransform) -> "Curve":
        raise NotImplementedError

    def segments(self) -> list[tuple["Curve", tuple[float, float]]]:
        """Analytic pieces as (piece, global parameter interval) in order."""
        return [(self, self.domain)]

    def scale_hint(self) -> float:
        """Bounding-box diagonal of the control data; the model length scale."""
        raise NotImplementedError

    def __call__(self, t: float) -> np.ndarray:
        return self.point(t)

    def _check_param(self, t: float) -> float:
        lo, hi = self.domain
        slack = 1e-12 * max(hi - lo, 1.0)
        if not (lo - slack <= t <= hi + slack):
            raise OutOfDomain(f"parameter {t} outside domain [{lo}, {hi}]")
        return min(max(t, lo), hi)

    def _check_params(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        lo, hi = self.domain
        slack = 1e-12 * max(hi - lo, 1.0)
        if ts.size and (ts.min() < lo - slack or ts.max() > hi + slack):
            raise OutOfDomain(f"parameters outside domain [{lo}, {hi}]")
        return np.clip(ts, lo, hi)


def _decasteljau_many(ctrl: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Evaluate a Bezier net (n+1, d) at parameters ts (m,), giving (m, d)."""
    m = ts.shape[0]
    b = np.repeat(ctrl[None, :, :], m, axis=0)
    u = ts[:, None, None]
    for _ in range(ctrl.shape[0] - 1):
        b = (1.0 - u) * b[:, :-1, :] + u * b[:, 1:, :]
    return b[:, 0, :]


def _derivative_nets(ctrl: np.ndarray, max_order: int) -> list[np.ndarray]:
    """Control nets of the Bezier derivative curves, orders 0..max_order."""
    n = ctrl.shape[0] - 1
    nets = [ctrl]
    net = ctrl
    for k in range(1, max_order + 1):
        if k > n:
            nets.append(np.zeros((1, ctrl.shape[1])))
            continue
        net = (n - k + 1) * np.diff(net, axis=0)
        nets.append(net)
    return nets


class BezierCurve(Curve):
    """Single Bezier segment on [0, 1], polynomial or rational.

    Control points shape (n+1, d); optional positive weights (n+1,).
    """

    kind = "bezier"

    def __init__(self, points, weights=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] not in (2, 3):
            raise DegenerateControlData(f"control points must be (n+1>=2, 2|3), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DegenerateControlData("control points contain non-finite values")
        self._points = pts
        if weights is not None:
            w = np.asarray(weights, dtype=float)
            if w.shape != (pts.shape[0],):
                raise DegenerateControlData("weights must match the control point count")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise DegenerateControlData("weights must be positive and finite")
            self._weights = w
            # homogeneous net [w*P | w], differentiated once at construction
            homog = np.concatenate([pts * w[:, None], w[:, None]], axis=1)
            self._nets = _derivative_nets(homog, MAX_DERIVATIVE_ORDER)
        else:
            self._weights = None
            self._nets = _derivative_nets(pts, MAX_DERIVATIVE_ORDER)

    @property
    def control_points(self) -> np.ndarray:
        return self._points

    @property
    def weights(self):
        return self._weights

    @property
    def degree(self) -> int:
        return self._points.shape[0] - 1

    @property
    def is_rational(self) -> bool:
        return self._weights is not None

    @property
    def dimension(self) -> int:
        return self._points.shape[1]

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, 1.0)

    def point_many(self, ts):
        ts = self._check_params(ts)
        if self._weights is None:
            return _decasteljau_many(self._points, ts)
        h = _decasteljau_many(self._nets[0], ts)
        return h[:, :-1] / h[:, -1:]

    def derivatives_many(self, ts, max_order):
        ts = self._check_params(ts)
        _check_order(max_order)
        d = self.dimension
        if self._weights is None:
            return [
                _decasteljau_many(self._nets[k], ts) if self._nets[k].shape[0] > 1 or k <= self.degree
                else np.zeros((ts.shape[0], d))
                for k in range(max_order + 1)
            ]
        # rational: r = N / w, Leibniz on N = r * w
        homog = [_decasteljau_many(self._nets[k], ts) for k in range(max_order + 1)]
        num = [hk[:, :-1] for hk in homog]
        den = [hk[:, -1:] for hk in homog]
        out = [num[0] / den[0]]
        for k in range(1, max_order + 1):
            acc = num[k].copy()
            for j in range(k):
                acc -= _binom(k, j) * out[j] * den[k - j]
            out.append(acc / den[0])
        return out

    def transformed(self, T: SimilarityTransform) -> "BezierCurve":
        if T.dimension != self.dimension:
            raise DimensionMismatch("transform dimension does not match curve")
        return BezierCurve(T.apply(self._points), self._weights)

    def split(self, t: float) -> tuple["BezierCurve", "BezierCurve"]:
        """Exact de Casteljau subdivision at parameter t."""
        t = self._check_param(t)
        if self._weights is None:
            net = self._points
        else:
            net = np.concatenate([self._points * self._weights[:, None], self._weights[:, None]], axis=1)
        left = [net[0]]
        right = [net[-1]]
        b = net
        while b.shape[0] > 1:
            b = (1.0 - t) * b[:-1] + t * b[1:]
            left.append(b[0])
            right.append(b[-1])
        left = np.array(left)
        right = np.array(right[::-1])
        if self._weights is None:
            return BezierCurve(left), BezierCurve(right)
        lw, rw = left[:, -1], right[:, -1]
        return (
            BezierCurve(left[:, :-1] / lw[:, None], lw),
            BezierCurve(right[:, :-1] / rw[:, None], rw),
        )

    def scale_hint(self) -> float:
        span = self._points.max(axis=0) - self._points.min(axis=0)
        return float(max(np.linalg.norm(span), 1e-300))


def _power_to_bernstein(coeffs: np.ndarray) -> np.ndarray:
    """Convert power-basis coefficients a_j (ascending, per column) on [0,1]
    to Bernstein control values of the same degree."""
    n = coeffs.shape[0] - 1
    out = np.zeros_like(coeffs)
    for i in range(n + 1):
        for j in range(i + 1):
            out[i] += _binom(i, j) / _binom(n, j) * coeffs[j]
    return out


class BSplineCurve(Curve):
    """Non-rational B-spline curve backed by scipy's de Boor evaluation."""

    kind = "bspline"

    def __init__(self, degree: int, knots, points):
        if not isinstance(degree, int) or degree < 1:
            raise DegenerateControlData(f"degree must be an integer >= 1, got {degree}")
        knots = np.asarray(knots, dtype=float)
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise DegenerateControlData(f"control points must be (n, 2|3), got {pts.shape}")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(knots)):
            raise DegenerateControlData("control data contains non-finite values")
        if np.any(np.diff(knots) < 0):
            raise InvalidKnots(f"knot vector must be non-decreasing: {knots.tolist()}")
        if knots.size != pts.shape[0] + degree + 1:
            raise InvalidKnots(
                f"need len(knots) == n_points + degree + 1, got {knots.size} != {pts.shape[0]} + {degree} + 1"
            )
        # multiplicity check
        _, counts = np.unique(knots, return_counts=True)
        if np.any(counts > degree + 1):
            raise InvalidKnots("knot multiplicity exceeds degree + 1")
        lo, hi = knots[degree], knots[-degree - 1]
        if not lo < hi:
            raise InvalidKnots("empty parameter domain")
        self._degree = degree
        self._knots = knots
        self._points = pts
        self._spline = BSpline(knots, pts, degree, extrapolate=False)
        self._dsplines = [self._spline]
        for _ in range(degree):
            self._dsplines.append(self._dsplines[-1].derivative())

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def knots(self) -> np.ndarray:
        return self._knots

    @property
    def control_points(self) -> np.ndarray:
        return self._points

    @property
    def dimension(self) -> int:
        return self._points.shape[1]

    @property
    def domain(self) -> tuple[float, float]:
        return (float(self._knots[self._degree]), float(self._knots[-self._degree - 1]))

    def point_many(self, ts):
        ts = self._check_params(ts)
        return np.atleast_2d(self._spline(ts))

    def derivatives_many(self, ts, max_order):
        ts = self._check_params(ts)
        _check_order(max_order)
        out = []
        for k in range(max_order + 1):
            if k <= self._degree:
                out.append(np.atleast_2d(self._dsplines[k](ts)))
            else:
                out.append(np.zeros((ts.shape[0], self.dimension)))
        return out

    def transformed(self, T: SimilarityTransform) -> "BSplineCurve":
        if T.dimension != self.dimension:
            raise DimensionMismatch("transform dimension does not match curve")
        return BSplineCurve(self._degree, self._knots, T.apply(self._points))

    def segments(self):
        """Exact Bezier pieces, one per non-empty knot span in the domain."""
        lo, hi = self.domain
        breaks = np.unique(self._knots)
        breaks = breaks[(breaks >= lo - 1e-14) & (breaks <= hi + 1e-14)]
        pieces = []
        k = self._degree
        for a, b in zip(breaks[:-1], breaks[1:]):
            h = b - a
            mid = 0.5 * (a + b)
            # the restriction to [a, b] is a polynomial: Taylor at the midpoint is exact
            taylor = [self._dsplines[j](np.array([mid]))[0] / math.factorial(j) for j in range(k + 1)]
            # q(u) = p(a + u h), u in [0,1]; expand sum a_j (h u - h/2)^j into powers of u
            coeffs = np.zeros((k + 1, self.dimension))
            for j, aj in enumerate(taylor):
                # (h u - h/2)^j = sum_i C(j,i) (h u)^i (-h/2)^(j-i)
                for i in range(j + 1):
                    coeffs[i] += _binom(j, i) * (h ** i) * ((-0.5 * h) ** (j - i)) * aj
            ctrl = _power_to_bernstein(coeffs)
            pieces.append((BezierCurve(ctrl), (float(a), float(b))))
        return pieces

    def scale_hint(self) -> float:
        span = self._points.max(axis=0) - self._points.min(axis=0)
        return float(max(np.linalg.norm(span), 1e-300))


class PiecewiseCurve(Curve):
    """Sequential composition of curves; block i occupies global [i, i+1]."""

    kind = "piecewise"

    def __init__(self, pieces: Sequence[Curve], join_tol: float = DEFAULT_JOIN_TOL):
        if not pieces:
            raise DegenerateControlData("piecewise curve needs at least one piece")
        dims = {p.dimension for p in pieces}
        if len(dims) != 1:
            raise DimensionMismatch(f"pieces have mixed dimensions: {sorted(dims)}")
        for prev, nxt in zip(pieces[:-1], pieces[1:]):
            gap = float(np.linalg.norm(prev.point(prev.domain[1]) - nxt.point(nxt.domain[0])))
            if gap > join_tol:
                raise InvalidJoint(f"segment endpoint gap {gap:.3e} exceeds tolerance {join_tol:.3e}")
        self._pieces = list(pieces)

    @property
    def pieces(self) -> list[Curve]:
        return self._pieces

    @property
    def dimension(self) -> int:
        return self._pieces[0].dimension

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, float(len(self._pieces)))

    def _locate(self, t: float) -> tuple[int, float, float]:
        n = len(self._pieces)
        i = min(int(math.floor(t)), n - 1)
        i = max(i, 0)
        a, b = self._pieces[i].domain
        return i, a + (t - i) * (b - a), b - a

    def point_many(self, ts):
        ts = self._check_params(ts)
        out = np.empty((ts.shape[0], self.dimension))
        idx = np.clip(np.floor(ts).astype(int), 0, len(self._pieces) - 1)
        for i in np.unique(idx):
            mask = idx == i
            a, b = self._pieces[i].domain
            out[mask] = self._pieces[i].point_many(a + (ts[mask] - i) * (b - a))
        return out

    def derivatives_many(self, ts, max_order):
        ts = self._check_params(ts)
        _check_order(max_order)
        out = [np.empty((ts.shape[0], self.dimension)) for _ in range(max_order + 1)]
        idx = np.clip(np.floor(ts).astype(int), 0, len(self._pieces) - 1)
        for i in np.unique(idx):
            mask = idx == i
            a, b = self._pieces[i].domain
            w = b - a
            local = self._pieces[i].derivatives_many(a + (ts[mask] - i) * w, max_order)
            for k in range(max_order + 1):
                out[k][mask] = local[k] * w**k
        return out

    def transformed(self, T: SimilarityTransform) -> "PiecewiseCurve":
        new = PiecewiseCurve.__new__(type(self))
        new._pieces = [p.transformed(T) for p in self._pieces]
        return new

    def segments(self):
        segs = []
        for i, piece in enumerate(self._pieces):
            a, b = piece.domain
            w = b - a
            for sub, (sa, sb) in piece.segments():
                segs.append((sub, (i + (sa - a) / w, i + (sb - a) / w)))
        return segs

    def scale_hint(self) -> float:
        return float(max(p.scale_hint() for p in self._pieces))


class Polyline(PiecewiseCurve):
    """Piecewise-linear curve through a vertex list."""

    kind = "polyline"

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise DegenerateControlData("polyline needs at least two vertices")
        edges = [BezierCurve(pts[i : i + 2]) for i in range(pts.shape[0] - 1)]
        super().__init__(edges, join_tol=np.inf)
        self._vertices = pts

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    def transformed(self, T: SimilarityTransform) -> "Polyline":
        return Polyline(T.apply(self._vertices))


def _check_order(max_order: int):
    if not 1 <= max_order <= MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order must be in 1..{MAX_DERIVATIVE_ORDER}, got {max_order}")


# --- module-level operations ------------------------------------------------

def construct_curve(spec: Mapping) -> Curve:
    """Build a validated curve from a plain-dict description."""
    kind = spec.get("kind")
    if kind == "bezier":
        return BezierCurve(spec["points"], spec.get("weights"))
    if kind == "bspline":
        return BSplineCurve(int(spec["degree"]), spec["knots"], spec["points"])
    if kind == "polyline":
        return Polyline(spec["points"])
    if kind == "piecewise":
        pieces = [construct_curve(sub) for sub in spec["segments"]]
        return PiecewiseCurve(pieces, join_tol=float(spec.get("join_tol", DEFAULT_JOIN_TOL)))
    if kind in ("spiral", "analytic-spiral"):
        from .spirals import SpiralSpec, generate_spiral

        return generate_spiral(SpiralSpec.from_mapping(spec))
    raise UnknownEntityKind(f"unknown curve kind {kind!r}")


def evaluate(curve: Curve, t: float) -> np.ndarray:
    """Point on the curve at parameter t."""
    curve._check_param(t)
    return curve.point(t)


def derivatives(curve: Curve, t: float, max_order: int) -> list[np.ndarray]:
    """Parametric derivative vectors of orders 1..max_order at t."""
    curve._check_param(t)
    return curve.derivatives(t, max_order)


def transform(curve: Curve, T: SimilarityTransform) -> Curve:
    """The curve mapped through a similarity transform."""
    return curve.transformed(T)
