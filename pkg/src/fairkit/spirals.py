"""Spiral generators and their numerical engine.

Holds the adaptive Gauss-Kronrod integrator, Fresnel integrals, the real
Gauss hypergeometric function, and generators for three spiral families
defined by closed-form curvature in arclength:

    clothoid        kappa(s) = s / A^2
    log-aesthetic   kappa(s) = (c0 + c1 s)^(-1/alpha),  alpha != 0
                    kappa(s) = c0 * exp(-c1 s),          alpha == 0
    superspiral     kappa(s) = kappa0 * 2F1(a, b; c; -s)

Generated curves carry a dense arclength grid of pose samples; evaluation
between nodes uses a fifth-order local expansion driven by the exact
curvature derivatives, so no quadrature runs during downstream analysis.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from mpmath import mp, mpf

from .errors import (
    DegenerateControlData,
    DimensionMismatch,
    DomainError,
    KappaSingular,
    NoConvergence,
    PoleError,
    QuadratureFailure,
    ReversedInterval,
)
from .geomcore import Curve, SimilarityTransform

# --- adaptive Gauss-Kronrod quadrature --------------------------------------

# 15-point Kronrod nodes (positive half) and weights, with the embedded
# 7-point Gauss weights, to 20+ significant digits (classical constants).
_XGK = np.array([
    0.99145537112081263920685469752632852,
    0.94910791234275852452618968404785126,
    0.86486442335976907278971278864092620,
    0.74153118559939443986386477328078840,
    0.58608723546769113029414483825872959,
    0.40584515137739716690660641207696146,
    0.20778495500789846760068940377324491,
    0.0,
])
_WGK = np.array([
    0.02293532201052922496373200805896959,
    0.06309209262997855329070066318920429,
    0.10479001032225018383987632254151801,
    0.14065325971552591874518959051023792,
    0.16900472663926790282658342659855028,
    0.19035057806478540991325640242101368,
    0.20443294007529889241416199923464908,
    0.20948214108472782801299917489171426,
])
_WG = np.array([
    0.12948496616886969327061143267908202,
    0.27970539148927666790146777142377958,
    0.38183005050511894495036977548897513,
    0.41795918367346938775510204081632653,
])

_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])  # 15 ascending nodes
_KW = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of an adaptive integration."""

    value: float
    error_estimate: float
    subdivisions: int
    converged: bool


def _call_integrand(f: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of nodes, falling back to scalar calls."""
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape == xs.shape:
            return ys
    except (TypeError, ValueError):
        pass
    return np.array([float(f(x)) for x in xs])


def _kronrod_panel(f, a, b):
    """One G7/K15 panel: (K15 value, |G7-K15| error with roundoff floor)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    ys = _call_integrand(f, mid + half * _NODES)
    k15 = half * float(_KW @ ys)
    g7 = half * float(_GW @ ys)
    resabs = half * float(_KW @ np.abs(ys))
    err = max(abs(k15 - g7), 50.0 * _EPS * resabs)
    return k15, err


def _batch_panels(f, a: np.ndarray, b: np.ndarray):
    """K15 values and error estimates for many intervals in one call.

    f must broadcast over a (m, 15) node matrix.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    xs = mid[:, None] + half[:, None] * _NODES[None, :]
    ys = np.asarray(f(xs), dtype=float)
    k15 = half * (ys @ _KW)
    g7 = half * (ys @ _GW)
    resabs = half * (np.abs(ys) @ _KW)
    err = np.maximum(np.abs(k15 - g7), 50.0 * _EPS * resabs)
    return k15, err


def gauss_kronrod(f, a, b, tol=1e-10, max_intervals=10_000) -> QuadratureResult:
    """Adaptive bisection with an embedded 7/15 Gauss-Kronrod pair.

    The interval error is |G7 - K15| (floored by an accumulated-roundoff
    term); the worst interval is split until the summed estimate meets
    max(tol, tol * |value|) or the interval budget runs out. f must accept
    a numpy array of nodes (scalar-only callables are handled via a
    per-node fallback). Endpoints are never sampled.
    """
    if a > b:
        raise ReversedInterval(f"integration bounds reversed: [{a}, {b}]")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, True)
    val, err = _kronrod_panel(f, a, b)
    heap = [(-err, 0, a, b, val, err)]
    counter = 1
    total_val, total_err = val, err
    while total_err > max(tol, tol * abs(total_val)) and len(heap) < max_intervals:
        _, _, ia, ib, ival, ierr = heapq.heappop(heap)
        im = 0.5 * (ia + ib)
        lval, lerr = _kronrod_panel(f, ia, im)
        rval, rerr = _kronrod_panel(f, im, ib)
        total_val += lval + rval - ival
        total_err += lerr + rerr - ierr
        heapq.heappush(heap, (-lerr, counter, ia, im, lval, lerr))
        heapq.heappush(heap, (-rerr, counter + 1, im, ib, rval, rerr))
        counter += 2
    converged = total_err <= max(tol, tol * abs(total_val))
    return QuadratureResult(total_val, total_err, len(heap), converged)


# --- Fresnel integrals -------------------------------------------------------

_SERIES_CUT = 1.6     # plain double series below this
_ASYMPT_CUT = 5.0     # auxiliary-function asymptotics above this


def _fresnel_series(x: float) -> tuple[float, float]:
    """Maclaurin series for C and S; accurate in double up to ~2."""
    q = (0.5 * math.pi) ** 2 * x**4
    c_term, c_sum = x, x
    s_term = 0.5 * math.pi * x**3 / 3.0
    s_sum = s_term
    for n in range(60):
        c_term *= -q * (4 * n + 1) / ((2 * n + 1) * (2 * n + 2) * (4 * n + 5))
        s_term *= -q * (4 * n + 3) / ((2 * n + 2) * (2 * n + 3) * (4 * n + 7))
        c_sum += c_term
        s_sum += s_term
        if abs(c_term) < 1e-18 * abs(c_sum) and abs(s_term) < 1e-18 * max(abs(s_sum), 1e-300):
            break
    return c_sum, s_sum


def _fresnel_series_mp(x: float) -> tuple[float, float]:
    """Same series in 45-digit arithmetic; bridges the cancellation band."""
    with mp.workdps(45):
        xx = mpf(x)
        q = (mpf(math.pi) / 2) ** 2 * xx**4
        c_term = c_sum = xx
        s_term = s_sum = mpf(math.pi) / 2 * xx**3 / 3
        for n in range(400):
            c_term *= -q * (4 * n + 1) / ((2 * n + 1) * (2 * n + 2) * (4 * n + 5))
            s_term *= -q * (4 * n + 3) / ((2 * n + 2) * (2 * n + 3) * (4 * n + 7))
            c_sum += c_term
            s_sum += s_term
            if abs(c_term) < mpf(10) ** -40 * abs(c_sum):
                break
        return float(c_sum), float(s_sum)


def _fresnel_asymptotic(x: float) -> tuple[float, float]:
    """DLMF auxiliary-function expansion, reliable for x >= ~5."""
    u = 0.5 * math.pi * x * x
    # f ~ (pi x)^-1 sum (-1)^m (1/2)_{2m} / u^{2m};  g gets the odd Pochhammers
    f_sum, g_sum = 0.0, 0.0
    poch = 1.0  # (1/2)_k
    k = 0
    f_prev = g_prev = math.inf
    for m in range(30):
        f_term = poch / u ** (2 * m) if m else 1.0
        poch *= 0.5 + k
        k += 1
        g_term = poch / u ** (2 * m + 1)
        poch *= 0.5 + k
        k += 1
        if abs(f_term) > abs(f_prev) or abs(g_term) > abs(g_prev):
            break  # optimal truncation reached
        f_sum += (-1) ** m * f_term
        g_sum += (-1) ** m * g_term
        f_prev, g_prev = f_term, g_term
    f_val = f_sum / (math.pi * x)
    g_val = g_sum / (math.pi * x)
    su, cu = math.sin(u), math.cos(u)
    return 0.5 + f_val * su - g_val * cu, 0.5 - f_val * cu - g_val * su


def fresnel(x: float) -> tuple[float, float]:
    """Fresnel integrals (C(x), S(x)) with the pi/2 u^2 normalization.

    C(x) = int_0^x cos(pi u^2 / 2) du, S(x) likewise with sin.
    """
    if not math.isfinite(x):
        raise DomainError(f"fresnel argument must be finite, got {x}")
    ax = abs(x)
    if ax <= _SERIES_CUT:
        c, s = _fresnel_series(ax)
    elif ax < _ASYMPT_CUT:
        c, s = _fresnel_series_mp(ax)
    else:
        c, s = _fresnel_asymptotic(ax)
    return (math.copysign(c, x), math.copysign(s, x)) if x != 0 else (0.0, 0.0)


# --- Gauss hypergeometric function -------------------------------------------

_MAX_SERIES_TERMS = 200_000


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and abs(x - round(x)) < 1e-12


def _hyp2f1_series(a, b, c, z, max_terms=_MAX_SERIES_TERMS):
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if term == 0.0 or abs(term) <= 1e-17 * abs(total):
            return total
    raise NoConvergence(f"2F1 series did not converge at z={z}")


def _rgamma(x: float) -> float:
    """1/Gamma(x); zero at the poles."""
    if _is_nonpositive_int(x):
        return 0.0
    return 1.0 / math.gamma(x)


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Real-branch Gauss hypergeometric function 2F1(a, b; c; z), z < 1.

    Strategy: direct Gauss series near the origin; Pfaff transformation
    for z <= -0.6 (maps into [0, 1)); the 1-z connection formula for
    0.6 < z < 1 when c-a-b is not an integer, else the direct series.
    """
    if _is_nonpositive_int(c):
        raise PoleError(f"c={c} is a non-positive integer")
    if z >= 1.0:
        raise DomainError(f"real branch requires z < 1, got z={z}")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        # terminating polynomial; stable for any admissible z
        n_stop = int(round(-min(
            a if _is_nonpositive_int(a) else math.inf,
            b if _is_nonpositive_int(b) else math.inf,
        )))
        return _hyp2f1_series(a, b, c, z, max_terms=n_stop + 2)
    if abs(z) <= 0.6:
        return _hyp2f1_series(a, b, c, z)
    if z < 0.0:
        w = z / (z - 1.0)
        if abs(a) <= abs(b):
            return (1.0 - z) ** (-a) * _hyp2f1_series(a, c - b, c, w)
        return (1.0 - z) ** (-b) * _hyp2f1_series(c - a, b, c, w)
    # 0.6 < z < 1
    cab = c - a - b
    if abs(cab - round(cab)) > 1e-8:
        g_c = math.gamma(c)
        coef1 = g_c * math.gamma(cab) * _rgamma(c - a) * _rgamma(c - b)
        coef2 = g_c * math.gamma(-cab) * _rgamma(a) * _rgamma(b)
        return coef1 * _hyp2f1_series(a, b, a + b - c + 1.0, 1.0 - z) + coef2 * (
            1.0 - z
        ) ** cab * _hyp2f1_series(c - a, c - b, cab + 1.0, 1.0 - z)
    return _hyp2f1_series(a, b, c, z)


def _hyp2f1_neg_array(a: float, b: float, c: float, zs: np.ndarray) -> np.ndarray:
    """Vectorized 2F1 over an array of arguments zs <= 0 (Pfaff + series)."""
    zs = np.asarray(zs, dtype=float)
    if zs.size and zs.max() > 1e-14:
        raise DomainError("vectorized path requires z <= 0")
    if _is_nonpositive_int(c):
        raise PoleError(f"c={c} is a non-positive integer")
    w = zs / (zs - 1.0)
    if abs(a) <= abs(b):
        pref = (1.0 - zs) ** (-a)
        aa, bb = a, c - b
    else:
        pref = (1.0 - zs) ** (-b)
        aa, bb = c - a, b
    term = np.ones_like(w)
    total = np.ones_like(w)
    for n in range(_MAX_SERIES_TERMS):
        term = term * ((aa + n) * (bb + n) / ((c + n) * (n + 1.0))) * w
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    else:
        raise NoConvergence("vectorized 2F1 series did not converge")
    return pref * total


# --- spiral curvature models ---------------------------------------------------


class _CurvatureModel:
    """Closed-form kappa(s) with derivatives up to order 4."""

    def kappa(self, s):
        raise NotImplementedError

    def dkappa(self, s, order: int):
        raise NotImplementedError

    def theta_primitive(self, s):
        """Antiderivative of kappa, or None when only quadrature works."""
        return None


class _ClothoidModel(_CurvatureModel):
    def __init__(self, scale: float):
        self.scale = scale

    def kappa(self, s):
        return np.asarray(s, dtype=float) / self.scale**2

    def dkappa(self, s, order):
        s = np.asarray(s, dtype=float)
        if order == 1:
            return np.full_like(s, 1.0 / self.scale**2)
        return np.zeros_like(s)

    def theta_primitive(self, s):
        return np.asarray(s, dtype=float) ** 2 / (2.0 * self.scale**2)


class _LogAestheticModel(_CurvatureModel):
    def __init__(self, alpha: float, c0: float, c1: float):
        self.alpha, self.c0, self.c1 = alpha, c0, c1

    def kappa(self, s):
        s = np.asarray(s, dtype=float)
        if self.alpha == 0.0:
            return self.c0 * np.exp(-self.c1 * s)
        return (self.c0 + self.c1 * s) ** (-1.0 / self.alpha)

    def dkappa(self, s, order):
        s = np.asarray(s, dtype=float)
        if self.alpha == 0.0:
            return (-self.c1) ** order * self.kappa(s)
        p = -1.0 / self.alpha
        coef = self.c1**order * math.prod(p - j for j in range(order))
        return coef * (self.c0 + self.c1 * s) ** (p - order)

    def theta_primitive(self, s):
        s = np.asarray(s, dtype=float)
        if self.c1 == 0.0:
            return self.kappa(0.0) * s
        if self.alpha == 0.0:
            return -(self.c0 / self.c1) * np.exp(-self.c1 * s)
        if self.alpha == 1.0:
            return np.log(self.c0 + self.c1 * s) / self.c1
        p = 1.0 - 1.0 / self.alpha
        return (self.c0 + self.c1 * s) ** p / (self.c1 * p)


class _SuperspiralModel(_CurvatureModel):
    def __init__(self, a: float, b: float, c: float, kappa0: float):
        self.a, self.b, self.c, self.kappa0 = a, b, c, kappa0

    def _shift(self, n: int) -> float:
        # d^n/dz^n 2F1 = (a)_n (b)_n / (c)_n * 2F1(a+n, b+n; c+n; z)
        num = math.prod((self.a + j) * (self.b + j) for j in range(n))
        den = math.prod(self.c + j for j in range(n))
        return num / den

    def kappa(self, s):
        return self.kappa0 * _hyp2f1_neg_array(self.a, self.b, self.c, -np.asarray(s, dtype=float))

    def dkappa(self, s, order):
        s = np.asarray(s, dtype=float)
        coef = self.kappa0 * (-1.0) ** order * self._shift(order)
        return coef * _hyp2f1_neg_array(self.a + order, self.b + order, self.c + order, -s)


class _ScaledModel(_CurvatureModel):
    """Model under uniform spatial scale lam: kappa'(s) = kappa(s/lam)/lam."""

    def __init__(self, base: _CurvatureModel, lam: float):
        self.base, self.lam = base, lam

    def kappa(self, s):
        return self.base.kappa(np.asarray(s, dtype=float) / self.lam) / self.lam

    def dkappa(self, s, order):
        return self.base.dkappa(np.asarray(s, dtype=float) / self.lam, order) / self.lam ** (order + 1)

    def theta_primitive(self, s):
        p = self.base.theta_primitive(np.asarray(s, dtype=float) / self.lam)
        return None if p is None else p


# --- spiral spec and curve ------------------------------------------------------


@dataclass(frozen=True)
class SpiralSpec:
    """Parameters of one spiral family over an arclength range."""

    family: str
    s_range: tuple[float, float]
    origin: tuple[float, float] = (0.0, 0.0)
    theta0: float = 0.0
    scale: float | None = None        # clothoid
    alpha: float | None = None        # log-aesthetic
    c0: float | None = None
    c1: float | None = None
    a: float | None = None            # superspiral
    b: float | None = None
    c: float | None = None
    kappa0: float | None = None

    def __post_init__(self):
        s0, s1 = self.s_range
        if not (np.isfinite(s0) and np.isfinite(s1) and s0 < s1):
            raise DegenerateControlData(f"need s0 < s1, got {self.s_range}")
        if self.family == "clothoid":
            if self.scale is None or not (self.scale > 0):
                raise KappaSingular("clothoid needs scale A > 0")
        elif self.family == "log_aesthetic":
            if self.alpha is None or self.c0 is None or self.c1 is None:
                raise DegenerateControlData("log_aesthetic needs alpha, c0, c1")
            if not self.c0 > 0:
                raise KappaSingular("log_aesthetic needs c0 > 0")
            if self.alpha != 0.0:
                base = np.array([self.c0 + self.c1 * s0, self.c0 + self.c1 * s1])
                if np.any(base <= 0):
                    raise KappaSingular("c0 + c1*s must stay positive over the range")
        elif self.family == "superspiral":
            if None in (self.a, self.b, self.c, self.kappa0):
                raise DegenerateControlData("superspiral needs a, b, c, kappa0")
            if not self.kappa0 > 0:
                raise KappaSingular("superspiral needs kappa0 > 0")
            if s0 < 0:
                raise KappaSingular("superspiral range must satisfy s >= 0")
        else:
            raise DegenerateControlData(f"unknown spiral family {self.family!r}")

    @classmethod
    def from_mapping(cls, m: Mapping) -> "SpiralSpec":
        keys = ("scale", "alpha", "c0", "c1", "a", "b", "c", "kappa0")
        kw = {k: float(m[k]) for k in keys if m.get(k) is not None}
        return cls(
            family=m["family"],
            s_range=(float(m["s_range"][0]), float(m["s_range"][1])),
            origin=tuple(float(v) for v in m.get("origin", (0.0, 0.0))),
            theta0=float(m.get("theta0", 0.0)),
            **kw,
        )

    def model(self) -> _CurvatureModel:
        if self.family == "clothoid":
            return _ClothoidModel(self.scale)
        if self.family == "log_aesthetic":
            return _LogAestheticModel(self.alpha, self.c0, self.c1)
        return _SuperspiralModel(self.a, self.b, self.c, self.kappa0)


class SpiralCurve(Curve):
    """Planar curve parameterized by arclength with closed-form curvature.

    Carries node arrays (s, theta, position, kappa derivatives); between
    nodes a fifth-order Frenet expansion from the nearest node supplies
    points and derivatives without any quadrature.
    """

    kind = "analytic-spiral"

    def __init__(self, family, model, s_nodes, theta_nodes, pos_nodes, spec=None):
        self.family = family
        self._model = model
        self._s = s_nodes
        self._theta = theta_nodes
        self._pos = pos_nodes
        self._kap = [model.kappa(s_nodes)] + [model.dkappa(s_nodes, k) for k in range(1, 5)]
        self.spec = spec

    @property
    def dimension(self) -> int:
        return 2

    @property
    def domain(self) -> tuple[float, float]:
        return (float(self._s[0]), float(self._s[-1]))

    # -- local expansion helpers ------------------------------------------

    def _nearest_nodes(self, ts: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._s, ts, side="left")
        idx = np.clip(idx, 0, len(self._s) - 1)
        left = np.clip(idx - 1, 0, len(self._s) - 1)
        use_left = np.abs(ts - self._s[left]) <= np.abs(self._s[idx] - ts)
        return np.where(use_left, left, idx)

    def _theta_at(self, ts: np.ndarray) -> np.ndarray:
        prim = self._model.theta_primitive(ts)
        if prim is not None:
            prim0 = self._model.theta_primitive(np.array([self._s[0]]))[0]
            return self._theta[0] + (prim - prim0)
        i = self._nearest_nodes(ts)
        h = ts - self._s[i]
        k0, k1, k2, k3, k4 = (k[i] for k in self._kap)
        return self._theta[i] + h * (k0 + h * (k1 / 2 + h * (k2 / 6 + h * (k3 / 24 + h * k4 / 120))))

    def point_many(self, ts):
        ts = self._check_params(np.asarray(ts, dtype=float))
        i = self._nearest_nodes(ts)
        h = (ts - self._s[i])[:, None]
        th = self._theta[i]
        T = np.stack([np.cos(th), np.sin(th)], axis=1)
        N = np.stack([-np.sin(th), np.cos(th)], axis=1)
        k0, k1, k2, k3 = (k[i][:, None] for k in self._kap[:4])
        r = self._pos[i]
        r = r + h * T
        r = r + h**2 / 2 * (k0 * N)
        r = r + h**3 / 6 * (k1 * N - k0**2 * T)
        r = r + h**4 / 24 * ((k2 - k0**3) * N - 3 * k0 * k1 * T)
        r = r + h**5 / 120 * ((k3 - 6 * k0**2 * k1) * N + (k0**4 - 4 * k0 * k2 - 3 * k1**2) * T)
        return r

    def derivatives_many(self, ts, max_order):
        ts = self._check_params(np.asarray(ts, dtype=float))
        th = self._theta_at(ts)
        T = np.stack([np.cos(th), np.sin(th)], axis=1)
        N = np.stack([-np.sin(th), np.cos(th)], axis=1)
        k0 = np.asarray(self._model.kappa(ts))[:, None]
        out = [self.point_many(ts), T]
        if max_order >= 2:
            out.append(k0 * N)
        if max_order >= 3:
            k1 = np.asarray(self._model.dkappa(ts, 1))[:, None]
            out.append(k1 * N - k0**2 * T)
        if max_order >= 4:
            k2 = np.asarray(self._model.dkappa(ts, 2))[:, None]
            out.append((k2 - k0**3) * N - 3 * k0 * k1 * T)
        if max_order >= 5:
            k3 = np.asarray(self._model.dkappa(ts, 3))[:, None]
            out.append((k3 - 6 * k0**2 * k1) * N + (k0**4 - 4 * k0 * k2 - 3 * k1**2) * T)
        return out[: max_order + 1]

    # -- exact differential shortcuts used by diffgeom ----------------------

    def curvature_exact_many(self, ts: np.ndarray) -> np.ndarray:
        return np.asarray(self._model.kappa(self._check_params(ts)), dtype=float)

    def curvature_rate_exact_many(self, ts: np.ndarray) -> np.ndarray:
        return np.asarray(self._model.dkappa(self._check_params(ts), 1), dtype=float)

    def curvature_second_rate_exact_many(self, ts: np.ndarray) -> np.ndarray:
        return np.asarray(self._model.dkappa(self._check_params(ts), 2), dtype=float)

    def arc_length_exact(self, t0: float, t1: float) -> float:
        return t1 - t0

    def transformed(self, T: SimilarityTransform) -> "SpiralCurve":
        if T.dimension != 2:
            raise DimensionMismatch("spiral curves are planar")
        lam = T.scale
        phi = T.rotation_angle
        new = SpiralCurve.__new__(SpiralCurve)
        new.family = self.family
        base = self._model.base if isinstance(self._model, _ScaledModel) else self._model
        total = lam * (self._model.lam if isinstance(self._model, _ScaledModel) else 1.0)
        new._model = _ScaledModel(base, total) if total != 1.0 else base
        new._s = self._s * lam
        new._theta = self._theta + phi
        new._pos = T.apply(self._pos)
        new._kap = [self._kap[k] / lam ** (k + 1) for k in range(5)]
        new.spec = None
        return new

    def scale_hint(self) -> float:
        span = self._pos.max(axis=0) - self._pos.min(axis=0)
        return float(max(np.linalg.norm(span), self._s[-1] - self._s[0], 1e-300))


def _grid_size(model: _CurvatureModel, s0: float, s1: float) -> int:
    probe = np.linspace(s0, s1, 65)
    kmax = float(np.max(np.abs(model.kappa(probe))))
    n = max(1024, int(math.ceil(50.0 * (s1 - s0) * kmax)))
    return min(n, 16384)


def generate_spiral(spec: SpiralSpec, tol: float = 1e-12) -> SpiralCurve:
    """Build a spiral curve from its family parameters.

    The tangent angle is integrated from the closed-form curvature
    (analytically where a primitive exists, by Gauss-Kronrod otherwise)
    and positions accumulate per grid interval via Gauss-Kronrod.
    """
    model = spec.model()
    s0, s1 = spec.s_range
    probe = np.linspace(s0, s1, 257)
    kap = np.asarray(model.kappa(probe), dtype=float)
    if not np.all(np.isfinite(kap)):
        raise KappaSingular("curvature non-finite over the requested range")
    if spec.family in ("log_aesthetic", "superspiral") and np.any(kap <= 0):
        raise KappaSingular("curvature must stay positive for this family")

    n = _grid_size(model, s0, s1)
    s = np.linspace(s0, s1, n + 1)
    kap_nodes = [np.asarray(model.kappa(s)), *(np.asarray(model.dkappa(s, k)) for k in range(1, 5))]

    prim = model.theta_primitive(s)
    if prim is not None:
        theta = spec.theta0 + prim - prim[0]
    else:
        # per-interval Gauss-Kronrod panels, refined adaptively where needed
        vals, errs = _batch_panels(model.kappa, s[:-1], s[1:])
        for i in np.nonzero(errs > max(tol, 1e-13))[0]:
            res = gauss_kronrod(model.kappa, s[i], s[i + 1], tol=max(tol, 1e-14))
            if not res.converged:
                raise QuadratureFailure("tangent-angle integration did not converge")
            vals[i] = res.value
        theta = spec.theta0 + np.concatenate([[0.0], np.cumsum(vals)])

    pos = np.empty((n + 1, 2))
    pos[0] = spec.origin
    if isinstance(model, _ClothoidModel):
        # exact positions through the Fresnel integrals
        A = model.scale
        r = A * math.sqrt(math.pi)
        phase = spec.theta0 - s0**2 / (2.0 * A**2)
        cph, sph = math.cos(phase), math.sin(phase)
        c0f, s0f = fresnel(s0 / r)
        for i in range(1, n + 1):
            cf, sf = fresnel(s[i] / r)
            ic = r * (cf - c0f)
            isn = r * (sf - s0f)
            pos[i, 0] = spec.origin[0] + cph * ic - sph * isn
            pos[i, 1] = spec.origin[1] + sph * ic + cph * isn
    else:
        if prim is not None:
            prim0 = model.theta_primitive(np.array([s0]))[0]

            def theta_at(xs):
                return spec.theta0 + model.theta_primitive(xs) - prim0

        else:
            def theta_at(xs):
                # fifth-order local expansion from each interval's left node
                h = xs - s[:-1, None]
                k0, k1, k2, k3, k4 = (k[:-1, None] for k in kap_nodes)
                return theta[:-1, None] + h * (
                    k0 + h * (k1 / 2 + h * (k2 / 6 + h * (k3 / 24 + h * k4 / 120)))
                )

        dx, ex = _batch_panels(lambda xs: np.cos(theta_at(xs)), s[:-1], s[1:])
        dy, ey = _batch_panels(lambda xs: np.sin(theta_at(xs)), s[:-1], s[1:])
        if float(ex.sum() + ey.sum()) > max(tol * max(s1 - s0, 1.0), 1e-11):
            raise QuadratureFailure("position integration did not converge")
        pos[1:, 0] = spec.origin[0] + np.cumsum(dx)
        pos[1:, 1] = spec.origin[1] + np.cumsum(dy)

    return SpiralCurve(spec.family, model, s, theta, pos, spec=spec)
