"""Curvature, torsion, arc length, curvature rate, profiles."""

import math

import numpy as np
import pytest

from fairkit import diffgeom, geomcore, spirals
from fairkit.errors import CuspError, InflectionError, PlanarCurve, ReversedInterval
from fairkit.geomcore import _power_to_bernstein

from conftest import make_clothoid, make_full_circle, make_quarter_arc


def polynomial_fit_curve(func, span, degree=10):
    """Bezier approximation of an analytic space curve over a short span."""
    u = (1.0 - np.cos(np.linspace(0.0, math.pi, 200))) / 2.0  # Chebyshev-ish in [0,1]
    samples = np.array([func(span[0] + (span[1] - span[0]) * ui) for ui in u])
    coeffs = np.array([np.polyfit(u, samples[:, k], degree)[::-1] for k in range(samples.shape[1])]).T
    return geomcore.BezierCurve(_power_to_bernstein(coeffs))


def helix_segment(radius=1.0, pitch=1.0, phi1=0.5):
    return polynomial_fit_curve(
        lambda phi: np.array([radius * math.cos(phi), radius * math.sin(phi), pitch * phi]),
        (0.0, phi1),
    )


def test_unit_circle_curvature(full_circle):
    ts = np.linspace(*full_circle.domain, 41)
    kappa = diffgeom.curvature_many(full_circle, ts)
    assert np.abs(kappa - 1.0).max() < 1e-9


def test_line_curvature_zero():
    line = geomcore.BezierCurve([[0, 0], [3, 4]])
    assert abs(diffgeom.curvature(line, 0.4)) < 1e-15


def test_symmetric_quadratic_curvature_vs_tangent_angle_oracle(sym_quadratic):
    # kappa = d(phi)/ds with phi the tangent angle
    t, h = 0.5, 1e-6

    def phi(tt):
        d1 = sym_quadratic.derivatives(tt, 1)[0]
        return math.atan2(d1[1], d1[0])

    speed = float(np.linalg.norm(sym_quadratic.derivatives(t, 1)[0]))
    oracle = (phi(t + h) - phi(t - h)) / (2.0 * h) / speed
    got = diffgeom.curvature(sym_quadratic, t)
    assert abs(got - oracle) < 1e-8
    assert abs(got - (-1.0)) < 1e-12


def test_torsion_planar_embedded_zero():
    c = geomcore.BezierCurve([[0, 0, 0], [1, 1, 0], [2, 0, 0], [3, 1, 0]])
    assert abs(diffgeom.torsion(c, 0.4)) < 1e-10


def test_torsion_helix_closed_form():
    helix = helix_segment(radius=1.0, pitch=1.0)
    for t in (0.3, 0.5, 0.7):
        assert abs(diffgeom.torsion(helix, t) - 0.5) < 1e-6


def test_torsion_errors():
    with pytest.raises(PlanarCurve):
        diffgeom.torsion(geomcore.BezierCurve([[0, 0], [1, 1]]), 0.5)
    line3 = geomcore.BezierCurve([[0, 0, 0], [1, 1, 1]])
    with pytest.raises(InflectionError):
        diffgeom.torsion(line3, 0.5)


def test_arc_length_line_and_quarter_circle(quarter_arc):
    line = geomcore.BezierCurve([[0, 0], [3, 4]])
    assert abs(diffgeom.arc_length(line, 0.0, 1.0) - 5.0) < 1e-12
    assert abs(diffgeom.arc_length(quarter_arc, 0.0, 1.0) - math.pi / 2.0) < 1e-9


def test_arc_length_reversed_interval(quarter_arc):
    with pytest.raises(ReversedInterval):
        diffgeom.arc_length(quarter_arc, 0.5, 0.5)


def test_arc_length_additivity():
    rng = np.random.default_rng(2)
    c = geomcore.BezierCurve(rng.normal(size=(5, 2)))
    l01 = diffgeom.arc_length(c, 0.0, 0.37)
    l12 = diffgeom.arc_length(c, 0.37, 1.0)
    l02 = diffgeom.arc_length(c, 0.0, 1.0)
    assert abs(l01 + l12 - l02) < 1e-8 * l02


def test_curvature_rate_clothoid_circle_line():
    clo = make_clothoid(scale=1.5, s1=2.0)
    ss = np.linspace(0.0, 2.0, 33)
    assert np.abs(diffgeom.curvature_rate_many(clo, ss) - 1.0 / 1.5**2).max() < 1e-12
    arc = make_quarter_arc()
    assert abs(diffgeom.curvature_rate(arc, 0.4)) < 1e-9
    line = geomcore.BezierCurve([[0, 0], [2, 1]])
    assert abs(diffgeom.curvature_rate(line, 0.4)) < 1e-15


def test_sample_profile_circle_and_clothoid():
    circle = make_full_circle()
    prof = diffgeom.sample_profile(circle, 10)
    assert len(prof) == 10
    assert np.abs(prof.kappa - prof.kappa[0]).max() < 1e-9
    assert prof.tau is None

    clo = make_clothoid(s1=1.0)
    prof = diffgeom.sample_profile(clo, 100)
    # kappa is linear in s: residual from the least-squares line is tiny
    A = np.column_stack([prof.s, np.ones_like(prof.s)])
    coef, *_ = np.linalg.lstsq(A, prof.kappa, rcond=None)
    assert np.abs(prof.kappa - A @ coef).max() < 1e-6
    assert np.all(np.diff(prof.s) > 0)


def test_sample_profile_needs_two_samples(quarter_arc):
    with pytest.raises(ValueError):
        diffgeom.sample_profile(quarter_arc, 1)


def test_profile_arclength_spacing_uniform():
    rng = np.random.default_rng(4)
    c = geomcore.BezierCurve(rng.normal(size=(4, 2)) * 2.0)
    prof = diffgeom.sample_profile(c, 64)
    gaps = np.diff(prof.s)
    assert np.abs(gaps - gaps[0]).max() < 1e-9
    # the parameters really do land at those arclengths
    for i in (7, 31, 55):
        measured = diffgeom.arc_length(c, c.domain[0], float(prof.t[i]))
        assert abs(measured - prof.s[i]) < 1e-6 * prof.s[-1]


def test_similarity_covariance_of_curvature_and_torsion():
    lam = 2.5
    clo = make_clothoid(s1=2.0)
    T2 = geomcore.SimilarityTransform.planar(angle=0.3, translation=(1, 2), scale=lam)
    scaled = clo.transformed(T2)
    ss = np.linspace(0.0, 2.0, 21)
    k1 = diffgeom.curvature_many(clo, ss)
    k2 = diffgeom.curvature_many(scaled, ss * lam)
    mask = np.abs(k1) > 1e-12
    assert np.abs(k2[mask] * lam / k1[mask] - 1.0).max() < 1e-8

    helix = helix_segment()
    R = np.eye(3)
    T3 = geomcore.SimilarityTransform(R, np.zeros(3), lam)
    sc = helix.transformed(T3)
    for t in (0.3, 0.6):
        assert abs(diffgeom.torsion(sc, t) * lam / diffgeom.torsion(helix, t) - 1.0) < 1e-8
        assert abs(diffgeom.curvature(sc, t) * lam / diffgeom.curvature(helix, t) - 1.0) < 1e-8


def test_reversed_parameter_profile_matches():
    rng = np.random.default_rng(9)
    pts = rng.normal(size=(4, 2)) * 2.0
    c = geomcore.BezierCurve(pts)
    r = geomcore.BezierCurve(pts[::-1])
    pc = diffgeom.sample_profile(c, 50)
    pr = diffgeom.sample_profile(r, 50)
    # planar signed curvature flips sign and s reverses
    assert np.abs(pc.kappa - (-pr.kappa[::-1])).max() < 1e-8 * max(1.0, np.abs(pc.kappa).max())


def test_cusp_detection():
    cusp = geomcore.BezierCurve([[0, 0], [1, 0], [0, 0]])  # r'(0.5) = 0
    with pytest.raises(CuspError):
        diffgeom.curvature(cusp, 0.5)
