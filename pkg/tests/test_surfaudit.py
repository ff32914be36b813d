"""Patch evaluation, zebra values, and G2 joint audits."""

import math

import numpy as np
import pytest

from fairkit import geomcore, surfaudit
from fairkit.errors import DegenerateNormal


def graph_patch(z_values, extent=3.0):
    """Bezier patch over a regular xy net with prescribed z control values."""
    m, n = np.asarray(z_values).shape
    xs, ys = np.meshgrid(np.linspace(0, extent, m), np.linspace(0, extent, n), indexing="ij")
    return surfaudit.SurfacePatch(np.stack([xs, ys, np.asarray(z_values, dtype=float)], axis=2))


def random_bicubic(rng, extent=3.0):
    return graph_patch(rng.normal(scale=0.5, size=(4, 4)), extent)


def g1_only_pair(rng):
    """Split a random bicubic, then double b's cross-boundary second
    difference: C1 joint, G2 broken."""
    parent = random_bicubic(rng)
    a, b = parent.split_u(float(rng.uniform(0.3, 0.7)))
    net = b.control_net.copy()
    net[2] = net[2] + (net[2] - 2.0 * net[1] + net[0])
    return a, surfaudit.SurfacePatch(net)


def test_planar_patch_normal_everywhere():
    p = graph_patch(np.zeros((3, 3)))
    for u, v in ((0.1, 0.2), (0.5, 0.5), (0.9, 0.8)):
        assert np.allclose(surfaudit.patch_normal(p, u, v), [0, 0, 1], atol=1e-14)


def test_bilinear_corners_interpolate():
    net = np.array([[[0, 0, 0], [0, 1, 1]], [[1, 0, 2], [1, 1, 3]]], dtype=float)
    p = surfaudit.SurfacePatch(net)
    assert np.allclose(surfaudit.patch_eval(p, 0, 0), net[0, 0])
    assert np.allclose(surfaudit.patch_eval(p, 1, 0), net[1, 0])
    assert np.allclose(surfaudit.patch_eval(p, 1, 1), net[1, 1])


def test_collapsed_corner_degenerate_normal():
    net = np.array(
        [[[0, 0, 0], [0, 0, 0]], [[1, 0, 0], [1, 1, 0]]], dtype=float
    )  # v-edge at u=0 collapsed to a point
    p = surfaudit.SurfacePatch(net)
    with pytest.raises(DegenerateNormal):
        surfaudit.patch_normal(p, 0.0, 0.5)


def test_zebra_values_and_bands():
    p = graph_patch(np.zeros((3, 3)))
    s, band = surfaudit.zebra_value(p, 0.5, 0.5, (0, 0, 1), bands=20)
    assert s == pytest.approx(1.0) and band == 19
    s, band = surfaudit.zebra_value(p, 0.5, 0.5, (1, 0, 0), bands=20)
    assert s == pytest.approx(0.0) and band == 10
    # s = -0.5 with two bands lands in band 0
    view = (0.0, math.sqrt(3) / 2, -0.5)
    s, band = surfaudit.zebra_value(p, 0.5, 0.5, view, bands=2)
    assert s == pytest.approx(-0.5) and band == 0
    with pytest.raises(ValueError):
        surfaudit.zebra_value(p, 0.5, 0.5, (0, 0, 1), bands=1)


def test_exact_subdivision_audits_g2():
    rng = np.random.default_rng(100)
    for _ in range(5):
        parent = random_bicubic(rng)
        a, b = parent.split_u(float(rng.uniform(0.25, 0.75)))
        audit = surfaudit.audit_joint(a, b)
        assert audit.verdict == 2
        assert audit.max_kink < 1e-6
        assert max(s.position_gap for s in audit.stations) < 1e-12


def test_g1_only_fixture_detected():
    rng = np.random.default_rng(200)
    a, b = g1_only_pair(rng)
    audit = surfaudit.audit_joint(a, b)
    assert audit.verdict == 1
    # doubling the cross second derivative puts the cross-direction
    # curvature gap near 1/2 under the min/max convention
    cross_gaps = [s.curvature_gaps[1] for s in audit.stations]
    assert max(cross_gaps) > 0.2
    assert audit.max_kink > 1e-3


def test_translated_patches_mismatch():
    rng = np.random.default_rng(5)
    parent = random_bicubic(rng)
    a, b = parent.split_u(0.5)
    moved = surfaudit.SurfacePatch(b.control_net + np.array([0.1, 0.0, 0.0]))
    audit = surfaudit.audit_joint(a, moved)
    assert audit.verdict == -1
    assert audit.label == "mismatch"


def test_verdict_ladder():
    # G1 verdict requires all G0 conditions to have passed as well
    rng = np.random.default_rng(300)
    a, b = g1_only_pair(rng)
    audit = surfaudit.audit_joint(a, b)
    scale = max(a.scale_hint(), b.scale_hint())
    assert all(s.position_gap <= 1e-8 * scale for s in audit.stations)
    assert all(s.normal_angle_gap <= 1e-8 for s in audit.stations)


def test_rigid_motion_invariance_of_zebra_values():
    rng = np.random.default_rng(77)
    p = random_bicubic(rng)
    th, ph = 0.7, 0.4
    R = (
        np.array([[math.cos(th), -math.sin(th), 0], [math.sin(th), math.cos(th), 0], [0, 0, 1.0]])
        @ np.array([[1, 0, 0], [0, math.cos(ph), -math.sin(ph)], [0, math.sin(ph), math.cos(ph)]])
    )
    T = geomcore.SimilarityTransform(R, np.array([1.0, -2.0, 0.5]), 1.0)
    view = np.array([0.1, 0.2, 0.97])
    view = view / np.linalg.norm(view)
    moved = p.transformed(T)
    for u, v in ((0.2, 0.3), (0.5, 0.5), (0.8, 0.6)):
        s1, _ = surfaudit.zebra_value(p, u, v, view)
        s2, _ = surfaudit.zebra_value(moved, u, v, R @ view)
        assert abs(s1 - s2) < 1e-12


def test_rational_patch_evaluation():
    # constant weights must match the polynomial patch exactly
    rng = np.random.default_rng(9)
    net = rng.normal(size=(4, 4, 3))
    plain = surfaudit.SurfacePatch(net)
    rational = surfaudit.SurfacePatch(net, weights=np.full((4, 4), 2.0))
    for u, v in ((0.2, 0.7), (0.6, 0.1)):
        assert np.allclose(surfaudit.patch_eval(plain, u, v), surfaudit.patch_eval(rational, u, v), atol=1e-13)
        assert np.allclose(
            plain.derivative(u, v, 1, 1), rational.derivative(u, v, 1, 1), atol=1e-11
        )


def test_station_parameters_strictly_increasing():
    rng = np.random.default_rng(3)
    parent = random_bicubic(rng)
    a, b = parent.split_u(0.5)
    audit = surfaudit.audit_joint(a, b, stations=17)
    xs = [s.x for s in audit.stations]
    assert all(x2 > x1 for x1, x2 in zip(xs[:-1], xs[1:]))
    assert len(xs) == 17
