"""Quadrature engine, special functions, spiral generators."""

import math

import numpy as np
import pytest

from fairkit import diffgeom, fairness, spirals
from fairkit.errors import DomainError, KappaSingular, PoleError, ReversedInterval

from conftest import hyp2f1_series_oracle


# --- gauss_kronrod -----------------------------------------------------------


def test_polynomial_exactness():
    res = spirals.gauss_kronrod(lambda x: x**2, 0.0, 1.0, tol=1e-12)
    assert res.converged
    assert abs(res.value - 1.0 / 3.0) < 1e-15


def test_degenerate_interval():
    res = spirals.gauss_kronrod(np.sin, 2.0, 2.0)
    assert res.value == 0.0 and res.error_estimate == 0.0 and res.converged


def test_reversed_bounds():
    with pytest.raises(ReversedInterval):
        spirals.gauss_kronrod(np.sin, 1.0, 0.0)


def test_endpoint_singularity():
    res = spirals.gauss_kronrod(lambda x: x**-0.5, 0.0, 1.0, tol=1e-8)
    assert res.converged
    assert abs(res.value - 2.0) < 1e-8 * 2.0
    assert res.error_estimate >= abs(res.value - 2.0)


def test_budget_exhaustion_flag():
    res = spirals.gauss_kronrod(lambda x: x**-0.5, 0.0, 1.0, tol=1e-13, max_intervals=8)
    assert not res.converged
    assert abs(res.value - 2.0) < 1e-2  # best estimate still returned


def test_error_estimate_conservative_on_fixture_family():
    rng = np.random.default_rng(17)
    fixtures = []
    for deg in range(14):
        coeffs = rng.normal(size=deg + 1)
        exact = sum(c / (k + 1) for k, c in enumerate(coeffs))
        fixtures.append((lambda x, c=coeffs: sum(ck * x**k for k, ck in enumerate(c)), exact))
    fixtures.append((np.exp, math.e - 1.0))
    fixtures.append((lambda x: x**-0.5, 2.0))
    for f, exact in fixtures:
        res = spirals.gauss_kronrod(f, 0.0, 1.0, tol=1e-10)
        if res.converged:
            assert res.error_estimate >= abs(res.value - exact)
            assert res.error_estimate <= max(1e-10, 1e-10 * abs(res.value))


# --- fresnel -------------------------------------------------------------------


def test_fresnel_zero_and_odd_symmetry():
    assert spirals.fresnel(0.0) == (0.0, 0.0)
    for x in (0.4, 1.2, 2.7, 6.0):
        c, s = spirals.fresnel(x)
        cm, sm = spirals.fresnel(-x)
        assert cm == -c and sm == -s


def test_fresnel_against_quadrature_oracle():
    # the defining integrals, integrated independently
    for x in (0.1, 0.7, 1.6, 2.4, 3.3, 4.2, 5.5, 10.0):
        c_ref = spirals.gauss_kronrod(lambda u: np.cos(0.5 * math.pi * u**2), 0.0, x, tol=1e-12).value
        s_ref = spirals.gauss_kronrod(lambda u: np.sin(0.5 * math.pi * u**2), 0.0, x, tol=1e-12).value
        c, s = spirals.fresnel(x)
        assert abs(c - c_ref) < 1e-9
        assert abs(s - s_ref) < 1e-9


def test_fresnel_rejects_non_finite():
    with pytest.raises(DomainError):
        spirals.fresnel(float("nan"))


# --- hyp2f1 ---------------------------------------------------------------------


def test_hyp2f1_at_zero_is_one():
    assert spirals.hyp2f1(0.37, -1.2, 2.5, 0.0) == 1.0


def test_hyp2f1_log_identity():
    # 2F1(1,1;2;z) = -ln(1-z)/z
    assert abs(spirals.hyp2f1(1.0, 1.0, 2.0, 0.5) - 2.0 * math.log(2.0)) < 1e-10


def test_hyp2f1_pfaff_against_series_oracle():
    val = spirals.hyp2f1(0.5, 1.0, 1.5, -4.0)
    assert abs(val - hyp2f1_series_oracle(0.5, 1.0, 1.5, -4.0)) < 1e-10
    # closed form: 2F1(1/2,1;3/2;-x^2) = atan(x)/x
    assert abs(val - math.atan(2.0) / 2.0) < 1e-10


def test_hyp2f1_grid_against_series_oracle():
    rng = np.random.default_rng(23)
    for _ in range(40):
        a = rng.uniform(-2.0, 3.0)
        b = rng.uniform(0.1, 3.0)
        c = rng.uniform(0.3, 4.0)
        z = rng.uniform(-8.0, 0.95)
        ref = hyp2f1_series_oracle(a, b, c, z)
        got = spirals.hyp2f1(a, b, c, z)
        assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref)), (a, b, c, z)


def test_hyp2f1_domain_and_pole_errors():
    with pytest.raises(DomainError):
        spirals.hyp2f1(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(PoleError):
        spirals.hyp2f1(1.0, 1.0, 0.0, 0.5)
    with pytest.raises(PoleError):
        spirals.hyp2f1(1.0, 1.0, -2.0, 0.5)


def test_hyp2f1_terminating_polynomial():
    # a = -2: 1 - 2*(b/c) z + (b)(b+1)/(c(c+1)) z^2
    b, c, z = 1.5, 2.5, -3.0
    expected = 1.0 - 2.0 * b / c * z + b * (b + 1.0) / (c * (c + 1.0)) * z**2
    assert abs(spirals.hyp2f1(-2.0, b, c, z) - expected) < 1e-12


# --- spiral generation ------------------------------------------------------------


def test_clothoid_constant_curvature_rate():
    cur = spirals.generate_spiral(spirals.SpiralSpec(family="clothoid", scale=1.0, s_range=(0.0, 2.0)))
    ss = np.linspace(0.0, 2.0, 101)
    rates = diffgeom.curvature_rate_many(cur, ss)
    assert np.abs(rates - 1.0).max() < 1e-12


def test_superspiral_a_zero_is_circular_arc():
    cur = spirals.generate_spiral(
        spirals.SpiralSpec(family="superspiral", a=0.0, b=1.0, c=2.0, kappa0=0.8, s_range=(0.0, 3.0))
    )
    kappa = cur.curvature_exact_many(np.linspace(0.0, 3.0, 51))
    assert np.abs(kappa - 0.8).max() < 1e-14


def test_log_aesthetic_alpha_minus_one_matches_shifted_clothoid():
    # alpha = -1 gives kappa = c0 + c1 s, the clothoid's law shifted by c0
    cur = spirals.generate_spiral(
        spirals.SpiralSpec(family="log_aesthetic", alpha=-1.0, c0=0.5, c1=1.0, s_range=(0.0, 2.0))
    )
    ss = np.linspace(0.0, 2.0, 101)
    kappa = cur.curvature_exact_many(ss)
    clo = spirals.generate_spiral(spirals.SpiralSpec(family="clothoid", scale=1.0, s_range=(0.5, 2.5)))
    kappa_ref = clo.curvature_exact_many(ss + 0.5)
    assert np.abs(kappa - kappa_ref).max() < 1e-8


def test_spiral_families_have_no_extrema():
    specs = [
        spirals.SpiralSpec(family="clothoid", scale=1.3, s_range=(0.2, 2.0)),
        spirals.SpiralSpec(family="log_aesthetic", alpha=2.0, c0=1.0, c1=0.7, s_range=(0.0, 2.5)),
        spirals.SpiralSpec(family="superspiral", a=0.7, b=1.1, c=2.2, kappa0=1.2, s_range=(0.0, 2.0)),
    ]
    for spec in specs:
        cur = spirals.generate_spiral(spec)
        assert fairness.find_curvature_extrema(cur) == []


def test_kappa_singular_validation():
    with pytest.raises(KappaSingular):
        spirals.SpiralSpec(family="log_aesthetic", alpha=2.0, c0=-1.0, c1=0.5, s_range=(0.0, 1.0))
    with pytest.raises(KappaSingular):
        spirals.SpiralSpec(family="log_aesthetic", alpha=2.0, c0=1.0, c1=-2.0, s_range=(0.0, 1.0))
    with pytest.raises(KappaSingular):
        spirals.SpiralSpec(family="superspiral", a=1.0, b=1.0, c=2.0, kappa0=0.0, s_range=(0.0, 1.0))
    with pytest.raises(KappaSingular):
        spirals.SpiralSpec(family="clothoid", scale=-1.0, s_range=(0.0, 1.0))


def test_spiral_positions_against_independent_integration():
    from scipy.integrate import quad

    spec = spirals.SpiralSpec(family="log_aesthetic", alpha=2.0, c0=1.0, c1=0.5, s_range=(0.0, 3.0))
    cur = spirals.generate_spiral(spec)

    def theta(s):
        return quad(lambda u: (1.0 + 0.5 * u) ** -0.5, 0.0, s, epsabs=1e-13)[0]

    x = quad(lambda u: math.cos(theta(u)), 0.0, 3.0, epsabs=1e-12)[0]
    y = quad(lambda u: math.sin(theta(u)), 0.0, 3.0, epsabs=1e-12)[0]
    assert np.abs(cur.point(3.0) - [x, y]).max() < 1e-9


def test_spiral_transform_scales_curvature():
    from fairkit import geomcore

    cur = spirals.generate_spiral(
        spirals.SpiralSpec(family="superspiral", a=0.9, b=1.0, c=2.0, kappa0=1.0, s_range=(0.0, 2.0))
    )
    T = geomcore.SimilarityTransform.planar(angle=0.6, translation=(1.0, -2.0), scale=2.0)
    moved = cur.transformed(T)
    ss = np.linspace(*cur.domain, 21)
    k_orig = cur.curvature_exact_many(ss)
    k_new = moved.curvature_exact_many(ss * 2.0)
    assert np.abs(k_new - k_orig / 2.0).max() < 1e-12
    # positions commute as well
    assert np.abs(moved.point_many(ss * 2.0) - T.apply(cur.point_many(ss))).max() < 1e-9
