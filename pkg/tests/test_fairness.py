"""Fairness metrics: extrema, monotonicity, energy, continuity, LCG."""

import math

import numpy as np
import pytest

from fairkit import diffgeom, fairness, geomcore, spirals
from fairkit.errors import NonMonotoneCurvature, NonPositiveCurvature

from conftest import (
    extremum_count_oracle,
    make_clothoid,
    make_full_circle,
    make_quarter_arc,
    random_similarity,
)


def test_symmetric_quadratic_has_one_extremum(sym_quadratic):
    ext = fairness.find_curvature_extrema(sym_quadratic)
    assert len(ext) == 1
    assert abs(ext[0].t - 0.5) < 1e-9
    assert ext[0].kind == "min"  # signed curvature is most negative there
    assert len(ext) == extremum_count_oracle(sym_quadratic)


def test_arc_and_clothoid_have_no_extrema(quarter_arc):
    assert fairness.find_curvature_extrema(quarter_arc) == []
    assert fairness.find_curvature_extrema(make_clothoid(s1=2.0)) == []


def test_extrema_match_oracle_on_random_beziers():
    rng = np.random.default_rng(31)
    for _ in range(15):
        deg = int(rng.integers(3, 6))
        curve = geomcore.BezierCurve(rng.normal(size=(deg + 1, 2)) * 2.0)
        assert len(fairness.find_curvature_extrema(curve)) == extremum_count_oracle(curve, n=50_000)


def test_monotonicity():
    assert fairness.is_curvature_monotone(make_clothoid(s1=2.0))
    assert fairness.is_curvature_monotone(make_quarter_arc())  # constant counts
    assert not fairness.is_curvature_monotone(geomcore.BezierCurve([[0, 0], [1, 1], [2, 0]]))


def test_monotone_implies_no_extrema():
    rng = np.random.default_rng(13)
    for _ in range(20):
        curve = geomcore.BezierCurve(rng.normal(size=(4, 2)) * 2.0)
        if fairness.is_curvature_monotone(curve):
            assert fairness.find_curvature_extrema(curve) == []


def test_bending_energy_oracles(full_circle, line_045):
    assert abs(fairness.bending_energy(full_circle) - 2.0 * math.pi) < 1e-8 * 2.0 * math.pi
    assert fairness.bending_energy(line_045) < 1e-12
    assert abs(fairness.bending_energy(make_clothoid(s1=1.0)) - 1.0 / 3.0) < 1e-8 / 3.0


def test_energy_zero_iff_straight():
    rng = np.random.default_rng(41)
    line = geomcore.BezierCurve([[0, 0], [1, 0.5], [2, 1.0]])  # straight via collinear points
    assert fairness.bending_energy(line) < 1e-12
    prof = diffgeom.sample_profile(line, 32)
    assert np.abs(prof.kappa).max() < 1e-10
    curved = geomcore.BezierCurve(rng.normal(size=(4, 2)))
    energy = fairness.bending_energy(curved)
    assert energy > 1e-10
    assert np.abs(diffgeom.sample_profile(curved, 32).kappa).max() > 1e-10


def test_continuity_split_line_full_order():
    full = geomcore.BezierCurve([[0, 0], [2, 2]])
    l1, l2 = full.split(0.5)
    cc = fairness.continuity_at_joint(l1, l2, max_k=4)
    assert cc.parametric_order == 4
    assert cc.geometric_order == 4


def test_continuity_arcs_with_different_radii():
    w = math.sqrt(0.5)
    a1 = geomcore.BezierCurve([[1, 0], [1, 1], [0, 1]], weights=[1, w, 1])
    a2 = geomcore.BezierCurve([[0, 1], [-2, 1], [-2, -1]], weights=[1, w, 1])  # radius 2
    cc = fairness.continuity_at_joint(a1, a2, max_k=4)
    assert cc.geometric_order == 1
    assert abs(cc.diagnostics["curvature_gap"] - 1.0) < 1e-9


def test_continuity_gap_gives_minus_one():
    a = geomcore.BezierCurve([[0, 0], [2, 2]])
    b = geomcore.BezierCurve([[2.1, 2], [3, 3]])
    cc = fairness.continuity_at_joint(a, b)
    assert cc.parametric_order == -1 and cc.geometric_order == -1


def test_order_ladder_invariant_on_fixtures():
    # order-k pass implies order-(k-1) pass; diagnostics present at all levels
    w = math.sqrt(0.5)
    fixtures = []
    full = geomcore.BezierCurve([[0, 0], [1, 2], [3, 1], [4, 4]])
    fixtures.append(full.split(0.3))
    fixtures.append((geomcore.BezierCurve([[1, 0], [1, 1], [0, 1]], weights=[1, w, 1]),
                     geomcore.BezierCurve([[0, 1], [-2, 1], [-2, -1]], weights=[1, w, 1])))
    for a, b in fixtures:
        cc = fairness.continuity_at_joint(a, b, max_k=4)
        assert cc.geometric_order >= cc.parametric_order
        for key in ("position_gap", "tangent_angle_gap", "curvature_gap"):
            assert key in cc.diagnostics


def test_smoothness_orders():
    assert fairness.smoothness_order(geomcore.BezierCurve([[0, 0], [1, 1], [2, 0]])) == "analytic"
    rng = np.random.default_rng(7)
    cubic = geomcore.BSplineCurve(3, [0, 0, 0, 0, 1 / 3, 2 / 3, 1, 1, 1, 1], rng.normal(size=(6, 2)))
    assert fairness.smoothness_order(cubic) == 2
    quintic = geomcore.BSplineCurve(5, [0, 0, 0, 0, 0, 0, 0.5, 1, 1, 1, 1, 1, 1], rng.normal(size=(7, 2)))
    assert fairness.smoothness_order(quintic) == 4


def test_lcg_circle_rejected():
    arc = spirals.generate_spiral(
        spirals.SpiralSpec(family="log_aesthetic", alpha=2.0, c0=1.0, c1=0.0, s_range=(0.0, 2.0))
    )
    with pytest.raises(NonMonotoneCurvature):
        fairness.lcg(arc)


def test_lcg_negative_curvature_rejected():
    # clockwise quadratic has kappa < 0 everywhere
    c = geomcore.BezierCurve([[0, 0], [1, 1], [2, 0]])
    with pytest.raises((NonPositiveCurvature, NonMonotoneCurvature)):
        fairness.lcg(c)


def test_lcg_clothoid_slope():
    clo = make_clothoid(scale=1.0, s0=0.5, s1=2.0)
    fit = fairness.lcg(clo, 200)
    assert fit.r_squared > 0.999
    # under this convention the clothoid's LCG slope is exactly -1
    assert abs(fit.slope - (-1.0)) < 1e-9


def test_lcg_log_spiral():
    spiral = spirals.generate_spiral(
        spirals.SpiralSpec(family="log_aesthetic", alpha=1.0, c0=0.5, c1=1.0, s_range=(0.0, 2.0))
    )
    fit = fairness.lcg(spiral, 200)
    assert fit.r_squared > 0.999
    assert abs(fit.slope - 1.0) < 1e-9


def test_fairness_report_line_clothoid_quadratic(line_045, sym_quadratic):
    rep = fairness.fairness_report(line_045)
    assert rep.extrema_count == 0
    assert rep.energy < 1e-12
    assert rep.kappa_max < 1e-10
    assert rep.monotone_curvature
    assert rep.lcg_fit is None

    clo = make_clothoid(scale=1.4, s1=2.0)
    rep = fairness.fairness_report(clo)
    assert rep.extrema_count == 0
    assert rep.monotone_curvature
    assert abs(rep.kappa_rate_max - 1.0 / 1.4**2) < 1e-9

    rep = fairness.fairness_report(sym_quadratic)
    assert rep.extrema_count == 1
    assert not rep.monotone_curvature
    assert rep.extrema_count == len(rep.extrema)


def test_similarity_behavior_of_metrics(sym_quadratic):
    rng = np.random.default_rng(3)
    lam = 2.0
    T = geomcore.SimilarityTransform.planar(angle=1.1, translation=(0.5, -0.25), scale=lam)
    moved = sym_quadratic.transformed(T)
    r0 = fairness.fairness_report(sym_quadratic)
    r1 = fairness.fairness_report(moved)
    assert r0.extrema_count == r1.extrema_count
    assert r0.smoothness_order == r1.smoothness_order
    assert abs(r1.energy - r0.energy / lam) < 1e-6 * r0.energy
    assert abs(r1.kappa_max - r0.kappa_max / lam) < 1e-6 * r0.kappa_max
    assert abs(r1.kappa_rate_max - r0.kappa_rate_max / lam**2) < 1e-6 * r0.kappa_rate_max
