"""Candidate curves from shared Hermite data, and a discrete elastica fit.

Candidate builders produce a cubic (position + tangent), a quintic
(position + tangent + optional end curvature, with the remaining freedom
spent on minimizing the integral of |r''|^2), and the unique parabola on
the end tangent lines. The elastica fit minimizes the turning-angle
discrete bending energy by gradient descent with backtracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateControlData, DimensionMismatch, InfeasibleQuadratic
from .geomcore import BezierCurve, Curve, SimilarityTransform, as_point


@dataclass(frozen=True)
class HermiteData:
    """Shared boundary data: endpoints, unit tangent directions, optional
    signed end curvatures."""

    p0: np.ndarray
    p1: np.ndarray
    d0: np.ndarray
    d1: np.ndarray
    k0: float | None = None
    k1: float | None = None

    def __post_init__(self):
        p0 = as_point(self.p0)
        p1 = as_point(self.p1, dim=p0.size)
        d0 = as_point(self.d0, dim=p0.size)
        d1 = as_point(self.d1, dim=p0.size)
        for name, d in (("d0", d0), ("d1", d1)):
            if abs(np.linalg.norm(d) - 1.0) > 1e-12:
                raise DegenerateControlData(f"{name} must be a unit vector, |{name}| = {np.linalg.norm(d)}")
        if np.linalg.norm(p1 - p0) == 0.0:
            raise DegenerateControlData("p0 and p1 must differ")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "d0", d0)
        object.__setattr__(self, "d1", d1)

    @property
    def dimension(self) -> int:
        return self.p0.size

    @property
    def chord(self) -> float:
        return float(np.linalg.norm(self.p1 - self.p0))

    @property
    def has_curvatures(self) -> bool:
        return self.k0 is not None and self.k1 is not None

    def transformed(self, T: SimilarityTransform) -> "HermiteData":
        if T.dimension != self.dimension:
            raise DimensionMismatch("transform dimension does not match data")
        rot = self.d0 @ T.rotation.T, self.d1 @ T.rotation.T
        return HermiteData(
            p0=T.apply(self.p0),
            p1=T.apply(self.p1),
            d0=rot[0],
            d1=rot[1],
            k0=None if self.k0 is None else self.k0 / T.scale,
            k1=None if self.k1 is None else self.k1 / T.scale,
        )


@dataclass
class CandidateSet:
    """Named candidate curves plus construction notes (e.g. fallbacks)."""

    curves: dict[str, Curve]
    notes: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Curve:
        return self.curves[key]

    def __iter__(self):
        return iter(self.curves)

    def items(self):
        return self.curves.items()


def _rot90(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _cubic_candidate(h: HermiteData) -> BezierCurve:
    c = h.chord
    return BezierCurve([h.p0, h.p0 + (c / 3.0) * h.d0, h.p1 - (c / 3.0) * h.d1, h.p1])


def _end_normal(h: HermiteData, d: np.ndarray):
    """Bending direction for a 3D end: chord component orthogonal to the tangent."""
    chord = h.p1 - h.p0
    perp = chord - (chord @ d) * d
    norm = np.linalg.norm(perp)
    if norm < 1e-12 * h.chord:
        return None
    return perp / norm


# Gram matrix of the cubic Bernstein basis: int B_i^3 B_j^3 dt
_GRAM3 = np.array(
    [[math.comb(3, i) * math.comb(3, j) / (math.comb(6, i + j) * 7.0) for j in range(4)] for i in range(4)]
)


def _quintic_candidate(h: HermiteData):
    """Degree-5 candidate matching p, d and (when present) end curvatures.

    End curvature translates to the normal component of r'' at each end;
    the two free tangential components minimize int |r''|^2 dt.
    """
    c = h.chord
    note = None
    k0, k1 = h.k0, h.k1
    if k0 is None or k1 is None:
        k0 = 0.0 if k0 is None else k0
        k1 = 0.0 if k1 is None else k1
        note = "end curvature data missing; built with kappa = 0 at the open ends"
    if h.dimension == 2:
        n0, n1 = _rot90(h.d0), _rot90(h.d1)
    else:
        n0, n1 = _end_normal(h, h.d0), _end_normal(h, h.d1)
        if n0 is None or n1 is None:
            n0 = np.zeros(3) if n0 is None else n0
            n1 = np.zeros(3) if n1 is None else n1
            k0 = k1 = 0.0
            note = "chord parallel to a tangent; end curvatures dropped"
    q0, q5 = h.p0, h.p1
    q1 = h.p0 + (c / 5.0) * h.d0
    q4 = h.p1 - (c / 5.0) * h.d1
    # r'' control values R_i = U_i + a0 V_i + a1 W_i (degree-3 Bezier)
    zero = np.zeros(h.dimension)
    q2_base = (k0 * c**2 / 20.0) * n0 + 2.0 * q1 - q0
    q3_base = (k1 * c**2 / 20.0) * n1 + 2.0 * q4 - q5
    U = [
        k0 * c**2 * n0,
        20.0 * (q3_base - 2.0 * q2_base + q1),
        20.0 * (q4 - 2.0 * q3_base + q2_base),
        k1 * c**2 * n1,
    ]
    V = [h.d0, -2.0 * h.d0, h.d0, zero]
    W = [zero, h.d1, -2.0 * h.d1, h.d1]

    def quad(A, B):
        return sum(_GRAM3[i, j] * float(A[i] @ B[j]) for i in range(4) for j in range(4))

    M = np.array([[quad(V, V), 0.5 * (quad(V, W) + quad(W, V))],
                  [0.5 * (quad(V, W) + quad(W, V)), quad(W, W)]])
    rhs = -np.array([0.5 * (quad(V, U) + quad(U, V)), 0.5 * (quad(W, U) + quad(U, W))])
    a0, a1 = np.linalg.solve(M, rhs)
    q2 = q2_base + (a0 / 20.0) * h.d0
    q3 = q3_base + (a1 / 20.0) * h.d1
    return BezierCurve([q0, q1, q2, q3, q4, q5]), note


def _quadratic_candidate(h: HermiteData) -> BezierCurve:
    """The parabola whose end tangent lines meet at the control apex."""
    chord = h.p1 - h.p0
    if h.dimension == 2:
        det = h.d0[0] * h.d1[1] - h.d0[1] * h.d1[0]
        if abs(det) < 1e-12:
            raise InfeasibleQuadratic("end tangent lines are parallel")
        # p0 + u d0 = p1 - v d1
        u = (chord[0] * h.d1[1] - chord[1] * h.d1[0]) / det
        v = (h.d0[0] * chord[1] - h.d0[1] * chord[0]) / det
    else:
        A = np.column_stack([h.d0, h.d1])
        sol, res, *_ = np.linalg.lstsq(A, chord, rcond=None)
        u, v = float(sol[0]), float(sol[1])
        gap = np.linalg.norm(h.d0 * u + h.d1 * v - chord)
        if gap > 1e-9 * h.chord:
            raise InfeasibleQuadratic("end tangent lines are skew")
    if u <= 0 or v <= 0:
        raise InfeasibleQuadratic("tangent lines meet on the wrong side")
    apex = h.p0 + u * h.d0
    return BezierCurve([h.p0, apex, h.p1])


def hermite_candidates(h: HermiteData, kinds=("cubic", "quintic", "quadratic_bezier")) -> CandidateSet:
    """Build the requested candidate curves on the shared data."""
    allowed = {"cubic", "quintic", "quadratic_bezier"}
    bad = set(kinds) - allowed
    if bad:
        raise ValueError(f"unknown candidate kinds: {sorted(bad)}")
    curves: dict[str, Curve] = {}
    notes: dict[str, str] = {}
    if "cubic" in kinds:
        curves["cubic"] = _cubic_candidate(h)
    if "quintic" in kinds:
        curve, note = _quintic_candidate(h)
        curves["quintic"] = curve
        if note:
            notes["quintic"] = note
    if "quadratic_bezier" in kinds:
        curves["quadratic_bezier"] = _quadratic_candidate(h)
    return CandidateSet(curves=curves, notes=notes)


# --- discrete minimum-energy curve -------------------------------------------


@dataclass(frozen=True)
class ElasticaFit:
    """Result of the discrete bending-energy minimization."""

    polyline: np.ndarray
    energy: float
    iterations: int
    converged: bool
    energy_trace: np.ndarray


def _discrete_energy_grad(X: np.ndarray):
    """Energy sum(2 theta_i^2 / (l_{i-1}+l_i)) and its node gradient."""
    e = np.diff(X, axis=0)
    l = np.linalg.norm(e, axis=1)
    u = e / l[:, None]
    dim = X.shape[1]
    ua, ub = u[:-1], u[1:]
    dots = np.clip(np.einsum("ij,ij->i", ua, ub), -1.0, 1.0)
    if dim == 2:
        crosses = ua[:, 0] * ub[:, 1] - ua[:, 1] * ub[:, 0]
        theta = np.arctan2(crosses, dots)
        rot_a = np.column_stack([-ua[:, 1], ua[:, 0]])
        rot_b = np.column_stack([-ub[:, 1], ub[:, 0]])
        # theta * dtheta/d(edge) with dtheta/db = rot90(u_b)/|b|, dtheta/da = -rot90(u_a)/|a|
        tgrad_a = -theta[:, None] * rot_a / l[:-1, None]
        tgrad_b = theta[:, None] * rot_b / l[1:, None]
    else:
        sins = np.linalg.norm(np.cross(ua, ub), axis=1)
        theta = np.arctan2(sins, dots)
        # theta * dtheta is finite at theta=0: theta/sin(theta) -> 1
        fac = np.where(sins > 1e-12, theta / np.maximum(sins, 1e-300), 1.0)
        pa = ub - dots[:, None] * ua  # component of u_b orthogonal to edge a
        pb = ua - dots[:, None] * ub
        tgrad_a = -fac[:, None] * pa / l[:-1, None]
        tgrad_b = -fac[:, None] * pb / l[1:, None]
    L = l[:-1] + l[1:]
    energy = float(np.sum(2.0 * theta**2 / L))
    grad = np.zeros_like(X)
    wa = 4.0 / L[:, None]
    # d(theta^2)/dedge terms
    ga = wa * tgrad_a
    gb = wa * tgrad_b
    np.add.at(grad, np.arange(0, X.shape[0] - 2), -ga)
    np.add.at(grad, np.arange(1, X.shape[0] - 1), ga - gb)
    np.add.at(grad, np.arange(2, X.shape[0]), gb)
    # length terms: -2 theta^2 / L^2 * dL/dX
    wl = -2.0 * theta**2 / L**2
    np.add.at(grad, np.arange(0, X.shape[0] - 2), -wl[:, None] * ua)
    np.add.at(grad, np.arange(1, X.shape[0] - 1), wl[:, None] * ua - wl[:, None] * ub)
    np.add.at(grad, np.arange(2, X.shape[0]), wl[:, None] * ub)
    return energy, grad


def _assemble(v: np.ndarray, h: HermiteData, n: int) -> np.ndarray:
    dim = h.dimension
    X = np.empty((n, dim))
    X[0] = h.p0
    X[1] = h.p0 + v[0] * h.d0
    X[-2] = h.p1 - v[1] * h.d1
    X[-1] = h.p1
    X[2:-2] = v[2:].reshape(n - 4, dim)
    return X


def fit_minimum_energy_curve(
    h: HermiteData, n: int = 64, max_iters: int = 2000, tol: float = 1e-9
) -> ElasticaFit:
    """Clamped discrete elastica: gradient descent with backtracking.

    Endpoints are pinned and the first/last edge stay on the end tangent
    rays; a step is accepted only if energy decreases; convergence is a
    relative energy change below tol.
    """
    if n < 8:
        raise ValueError(f"need n >= 8 nodes, got {n}")
    from . import diffgeom

    cubic = _cubic_candidate(h)
    # arclength-uniform sampling keeps the turning-angle curvature accurate
    total = diffgeom.arc_length(cubic, 0.0, 1.0)
    params = diffgeom.param_at_arclength(cubic, np.linspace(0.0, total, n))
    init = cubic.point_many(params)
    l0 = max(float((init[1] - h.p0) @ h.d0), 1e-3 * h.chord)
    l1 = max(float((h.p1 - init[-2]) @ h.d1), 1e-3 * h.chord)
    v = np.concatenate([[l0, l1], init[2:-2].ravel()])
    l_min = 1e-6 * h.chord

    def eval_energy(vv):
        return _discrete_energy_grad(_assemble(vv, h, n))

    energy, grad = eval_energy(v)
    trace = [energy]
    if max_iters == 0:
        return ElasticaFit(_assemble(v, h, n), energy, 0, False, np.array(trace))

    def project_grad(g_nodes):
        g = np.empty_like(v)
        g[0] = float(g_nodes[1] @ h.d0)
        g[1] = float(-g_nodes[-2] @ h.d1)
        g[2:] = g_nodes[2:-2].ravel()
        return g

    g = project_grad(grad)
    step = 0.1 * h.chord / max(float(np.linalg.norm(g)), 1e-300)
    converged = False
    iterations = 0
    prev_v = prev_g = None
    slow_steps = 0
    for iterations in range(1, max_iters + 1):
        gnorm = float(np.linalg.norm(g))
        if gnorm <= 1e-300 or energy <= 1e-16:
            converged = True
            break
        if prev_v is not None:
            # Barzilai-Borwein step guess, safeguarded by the backtracking below
            dv = v - prev_v
            dg = g - prev_g
            denom = float(dv @ dg)
            if denom > 0:
                step = float(dv @ dv) / denom
        accepted = False
        for _ in range(60):
            cand = v - step * g
            if cand[0] <= l_min or cand[1] <= l_min:
                step *= 0.5
                continue
            e_new, grad_new = eval_energy(cand)
            if e_new < energy:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        rel_drop = (energy - e_new) / max(energy, 1e-300)
        prev_v, prev_g = v, g
        v, energy = cand, e_new
        g = project_grad(grad_new)
        trace.append(energy)
        # BB steps vary in size; require a run of small drops before stopping
        slow_steps = slow_steps + 1 if rel_drop < tol else 0
        if slow_steps >= 5:
            converged = True
            break
    return ElasticaFit(
        polyline=_assemble(v, h, n),
        energy=energy,
        iterations=iterations,
        converged=converged,
        energy_trace=np.array(trace),
    )
