"""Shared fixtures and independent oracles for the test suite."""

import math

import numpy as np
import pytest

from fairkit import geomcore, spirals


RT_HALF = math.sqrt(0.5)


def make_quarter_arc():
    """Exact rational-quadratic quarter unit circle, (1,0) -> (0,1), CCW."""
    return geomcore.BezierCurve([[1, 0], [1, 1], [0, 1]], weights=[1, RT_HALF, 1])


def make_full_circle():
    """Unit circle as four exact rational arcs."""
    arcs = [
        geomcore.BezierCurve([[1, 0], [1, 1], [0, 1]], weights=[1, RT_HALF, 1]),
        geomcore.BezierCurve([[0, 1], [-1, 1], [-1, 0]], weights=[1, RT_HALF, 1]),
        geomcore.BezierCurve([[-1, 0], [-1, -1], [0, -1]], weights=[1, RT_HALF, 1]),
        geomcore.BezierCurve([[0, -1], [1, -1], [1, 0]], weights=[1, RT_HALF, 1]),
    ]
    return geomcore.PiecewiseCurve(arcs)


def make_clothoid(scale=1.0, s0=0.0, s1=1.0):
    return spirals.generate_spiral(
        spirals.SpiralSpec(family="clothoid", scale=scale, s_range=(s0, s1))
    )


@pytest.fixture
def quarter_arc():
    return make_quarter_arc()


@pytest.fixture
def full_circle():
    return make_full_circle()


@pytest.fixture
def sym_quadratic():
    return geomcore.BezierCurve([[0, 0], [1, 1], [2, 0]])


@pytest.fixture
def line_045():
    return geomcore.BezierCurve([[0, 0], [3, 4]])


def extremum_count_oracle(curve, n=100_000):
    """Brute-force extremum count: dense uniform samples, plateau-merged,
    endpoints excluded. Independent of the root-finding implementation."""
    from fairkit import diffgeom

    ts = np.linspace(*curve.domain, n)
    kappa = diffgeom.curvature_many(curve, ts)
    d = np.sign(np.diff(kappa))
    d = d[d != 0]
    return int(np.sum(d[1:] != d[:-1]))


def hyp2f1_series_oracle(a, b, c, z, dps=160):
    """Extended-precision Gauss series (Pfaff-transformed for z < 0)."""
    from mpmath import mp, mpf

    with mp.workdps(dps):
        aa, bb, cc, zz = mpf(a), mpf(b), mpf(c), mpf(z)
        pref = mpf(1)
        if zz < 0:
            pref = (1 - zz) ** (-aa)
            bb = cc - bb
            zz = zz / (zz - 1)
        term = mpf(1)
        total = mpf(1)
        for n in range(200_000):
            term *= (aa + n) * (bb + n) / ((cc + n) * (n + 1)) * zz
            total += term
            if abs(term) < mpf(10) ** (-dps) * abs(total):
                break
        return float(pref * total)


def random_similarity(rng, dim=2):
    if dim == 2:
        return geomcore.SimilarityTransform.planar(
            angle=rng.uniform(-math.pi, math.pi),
            translation=rng.normal(size=2) * 3.0,
            scale=float(rng.uniform(0.3, 3.0)),
        )
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = rng.uniform(-math.pi, math.pi)
    K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    R = np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)
    return geomcore.SimilarityTransform(R, rng.normal(size=3) * 3.0, float(rng.uniform(0.3, 3.0)))
