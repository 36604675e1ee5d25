import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starsections.bodies import (
    AngularProfile,
    AngularRegion,
    ArcsBase,
    BandsBase,
    GridProfile,
    StarBody,
    bands_to_arcs,
    body_from_json_dict,
    cap_base,
    double_cap_base,
    equality_cone_base,
    inverse_angular_area,
    is_convex_spherical,
    make_ball,
    make_bumpy_ball,
    make_cone,
    make_ellipsoid,
    make_lune,
    make_perturbed_ball,
    make_striped_cone,
    make_symmetric_polygon_body,
    make_vanishing_body,
    perturbation_norms,
    region_over_arc,
    section_bound_margin,
    sphere_band_measure,
    spherical_cap_measure,
    striped_cap_subset,
)
from starsections.errors import DomainError, NonInjectiveRegionError
from starsections.functionals import busemann_functional, volume
from starsections.quadrature import integrate_radial
from starsections.spaces import SpaceSpec, phi, sphere_surface_area

S2 = SpaceSpec(1, 2)
S3 = SpaceSpec(1, 3)
E3 = SpaceSpec(0, 3)
H3 = SpaceSpec(-1, 3)
TWO_PI = 2 * math.pi


class TestBandMeasures:
    def test_cap_formula_n3(self):
        # |S^1| integral over [alpha, 1] of (1 - t^2)^0 = 2 pi (1 - alpha)
        assert spherical_cap_measure(2, 0.5) == pytest.approx(math.pi, rel=1e-14)

    def test_circle_band(self):
        # band on S^1 has measure 2 (arcsin hi - arcsin lo)
        assert sphere_band_measure(1, -0.3, 0.4) == pytest.approx(
            2 * (math.asin(0.4) - math.asin(-0.3)), rel=1e-14
        )

    def test_band_vs_monte_carlo(self):
        # declared measures against a Monte Carlo oracle (indicator functions
        # defeat polynomial rules, so sampling is the honest cross-check)
        rng = np.random.default_rng(0)
        n_samples = 1_000_000
        for m in (2, 3):
            pts = rng.normal(size=(n_samples, m + 1))
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
            area = sphere_surface_area(m)
            for _ in range(3):
                lo, hi = np.sort(rng.uniform(-0.9, 0.9, size=2))
                exact = sphere_band_measure(m, lo, hi)
                frac = np.mean((pts[:, 0] >= lo) & (pts[:, 0] <= hi))
                assert abs(exact - frac * area) <= 2e-3 * area


class TestBalls:
    def test_hemisphere(self):
        body = make_ball(S2, math.pi / 2)
        assert volume(body) == pytest.approx(2 * math.pi, rel=1e-12)

    def test_euclidean_unit_ball(self):
        body = make_ball(E3, 1.0)
        assert volume(body) == pytest.approx(4 * math.pi / 3, rel=1e-12)

    def test_hyperbolic_radial_formula(self):
        body = make_ball(H3, 1.0)
        assert volume(body) == pytest.approx(4 * math.pi * phi(H3, 3, 1.0), rel=1e-12)

    def test_invalid(self):
        with pytest.raises(DomainError):
            make_ball(S2, 2.0)
        with pytest.raises(DomainError):
            make_ball(E3, 0.0)

    def test_symmetry_claim(self):
        assert make_ball(E3, 1.0).check_symmetry()


class TestEllipsoids:
    def test_unit(self):
        body = make_ellipsoid([1.0, 1.0, 1.0])
        assert volume(body) == pytest.approx(4 * math.pi / 3, rel=1e-12)

    def test_axis_evaluation(self):
        body = make_ellipsoid([2.0, 0.5, 1.3])
        for i, a in enumerate([2.0, 0.5, 1.3]):
            e = np.zeros((1, 3))
            e[0, i] = 1.0
            assert body.rho(e)[0] == pytest.approx(a, rel=1e-14)

    def test_plane_area(self):
        body = make_ellipsoid([2.0, 1.0])
        assert volume(body) == pytest.approx(2 * math.pi, abs=1e-9)

    def test_invalid(self):
        with pytest.raises(DomainError):
            make_ellipsoid([1.0, -2.0])


class TestCones:
    def test_volume_identity_plane(self):
        base = ArcsBase(((0.3, 1.0), (0.3 + math.pi, 1.0 + math.pi)))
        body = make_cone(S2, base)
        # vol(C) = |A| in the plane hemisphere
        assert volume(body) == pytest.approx(base.measure, rel=1e-14)
        assert body.symmetric

    def test_section_functional_identity(self):
        base = ArcsBase(((0.1, 0.8), (0.1 + math.pi, 0.8 + math.pi)))
        body = make_cone(S2, base)
        assert busemann_functional(body) == pytest.approx(math.pi ** 2 * volume(body), rel=1e-13)

    def test_hemisphere_base(self):
        body = make_cone(S3, BandsBase(np.array([1.0, 0, 0]), np.array([-1.0]), np.array([1.0])))
        assert volume(body) == pytest.approx(phi(S3, 3, math.pi / 2) * 4 * math.pi, rel=1e-13)

    def test_bands_to_arcs(self):
        base = cap_base(np.array([0.0, 1.0]), 0.2)
        arcs = bands_to_arcs(base)
        assert arcs.measure == pytest.approx(2 * math.acos(0.2), rel=1e-12)

    def test_equality_base_sections_constant(self):
        base = equality_cone_base(3, 0.35)
        rng = np.random.default_rng(1)
        xis = rng.normal(size=(50, 3))
        xis /= np.linalg.norm(xis, axis=1, keepdims=True)
        secs = base.section_measures(xis)
        assert np.max(np.abs(secs - math.pi)) < 1e-12  # |S^1| / 2

    def test_double_cap_sections_vary(self):
        base = double_cap_base(3, 0.5)
        xis = np.array([[1.0, 0, 0], [0, 1.0, 0]])
        secs = base.section_measures(xis)
        assert abs(secs[0] - secs[1]) > 0.1


class TestLunes:
    def test_radial_values(self):
        body = make_lune(0.3)
        axis = np.array([[1.0, 0.0]])
        perp = np.array([[0.0, 1.0]])
        assert body.rho(axis)[0] == pytest.approx(0.3, abs=1e-14)
        assert body.rho(-axis)[0] == pytest.approx(0.3, abs=1e-14)
        assert body.rho(perp)[0] == pytest.approx(math.pi / 2, abs=1e-14)

    def test_volume(self):
        body = make_lune(0.3)
        assert volume(body) == pytest.approx(1.2, abs=1e-6)

    def test_convex(self):
        assert is_convex_spherical(make_lune(0.7))

    def test_invalid(self):
        with pytest.raises(DomainError):
            make_lune(math.pi / 2)


class TestPerturbedBalls:
    def test_beta_zero(self):
        body = make_perturbed_ball(S3, 0.7, 0.0, 2)
        assert body.profile.alpha == 0.0
        assert volume(body) == pytest.approx(volume(make_ball(S3, 0.7)), rel=1e-12)

    def test_volume_matched_and_alpha_negative(self):
        r = math.pi / 4
        body = make_perturbed_ball(S3, r, 0.05, 2)
        ball = make_ball(S3, r)
        assert abs(volume(body) - volume(ball)) <= 1e-10 * volume(ball)
        assert body.profile.alpha < 0.0

    def test_alpha_first_order(self):
        # alpha ~ -c0 delta^2 / |S^{n-1}| with c0 = (n-1) / (2 tan r)
        r, n = math.pi / 4, 3
        body = make_perturbed_ball(SpaceSpec(1, n), r, 0.05, 2)
        delta_norm, eps_norm = perturbation_norms(body)
        c0 = (n - 1) / (2 * math.tan(r))
        predicted = -c0 * delta_norm ** 2 / (4 * math.pi)
        assert body.profile.alpha == pytest.approx(predicted, rel=0.1)
        assert eps_norm >= delta_norm / math.sqrt(4 * math.pi)

    def test_symmetry(self):
        body = make_perturbed_ball(S3, 0.7, 0.04, 4)
        assert body.symmetric and body.check_symmetry()

    def test_range_error(self):
        with pytest.raises(DomainError):
            make_perturbed_ball(S3, 1.5, 0.5, 2)


class TestStripedConstruction:
    def test_cap_measure_example(self):
        assert spherical_cap_measure(2, 0.5) == pytest.approx(2 * math.pi * (1 - 0.5), rel=1e-14)

    def test_measure_fraction(self):
        axis = np.array([1.0, 0.0, 0.0])
        base = striped_cap_subset(0.3, axis, 0.5, 0.05)
        cap = spherical_cap_measure(2, 0.3)
        assert base.measure == pytest.approx(0.5 * cap, rel=1e-8)

    def test_lambda_near_one(self):
        axis = np.array([1.0, 0.0, 0.0])
        base = striped_cap_subset(0.4, axis, 0.995, 0.2)
        cap = spherical_cap_measure(2, 0.4)
        assert base.measure == pytest.approx(0.995 * cap, rel=1e-8)

    def test_section_bound_on_random_grid(self):
        axis = np.array([1.0, 0.0, 0.0])
        base = striped_cap_subset(0.3, axis, 0.5, 0.05)
        rng = np.random.default_rng(42)
        xis = rng.normal(size=(10_000, 3))
        xis /= np.linalg.norm(xis, axis=1, keepdims=True)
        assert section_bound_margin(base, xis) <= 0.05

    def test_section_bound_dim4(self):
        axis = np.array([1.0, 0.0, 0.0, 0.0])
        base = striped_cap_subset(0.4, axis, 0.6, 0.1)
        rng = np.random.default_rng(3)
        xis = rng.normal(size=(2000, 4))
        xis /= np.linalg.norm(xis, axis=1, keepdims=True)
        assert section_bound_margin(base, xis) <= 0.1

    def test_striped_cone_volume(self):
        body = make_striped_cone(S3, 0.3, 0.1, 0.05)
        assert volume(body) == pytest.approx(0.3 * math.pi ** 2, rel=1e-8)
        assert body.symmetric

    def test_striped_cone_precondition(self):
        with pytest.raises(DomainError):
            make_striped_cone(S3, 0.9, 0.5, 0.05)


class TestVanishingBody:
    def test_construction_identities(self):
        body = make_vanishing_body(E3, 1.0, 0.01)
        base = body.profile.indicator_base
        r = body.profile.indicator_height
        # vol = 2 phi_n(r) |A| with the stored base already symmetrized
        assert volume(body) == pytest.approx(phi(E3, 3, r) * base.measure, rel=1e-12)
        assert volume(body) == pytest.approx(1.0, rel=1e-8)
        assert busemann_functional(body) <= 0.01
        # indicator profile: rho equals r on the base and 0 elsewhere
        rng = np.random.default_rng(0)
        dirs = rng.normal(size=(200, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        rho = body.rho(dirs)
        inside = base.contains(dirs)
        assert np.all(rho[inside] == r) and np.all(rho[~inside] == 0.0)


class TestConvexity:
    def test_ball(self):
        assert is_convex_spherical(make_ball(S2, 0.8))

    def test_polygon(self):
        assert is_convex_spherical(make_symmetric_polygon_body([0.9, 1.2], [0.2, 1.7]))

    def test_disconnected_cone_base(self):
        body = make_cone(S2, ArcsBase(((1.0, 1.3), (1.0 + math.pi, 1.3 + math.pi))))
        assert not is_convex_spherical(body)

    def test_bumpy_nonconvex(self):
        body = make_bumpy_ball(S2, 0.7, [[1.0, 0.0], [0.0, 1.0]], [0.35, -0.3], [8.0, 8.0],
                               symmetric=True)
        assert not is_convex_spherical(body)


class TestInverseAngularArea:
    def test_cone_over_arc_is_linear(self):
        inv = inverse_angular_area(region_over_arc(0.5, 1.7))
        ts = np.linspace(0.0, 1.0, 33)
        assert np.max(np.abs(inv(ts) - (0.5 + 1.2 * ts))) < 1e-9

    def test_boundary_normalization(self):
        inv = inverse_angular_area(region_over_arc(1.0, 2.5))
        assert inv(0.0) == pytest.approx(1.0, abs=1e-9)
        assert inv(1.0) == pytest.approx(2.5, abs=1e-9)

    def test_closed_form_sqrt_inverse(self):
        # density proportional to arc position: inverse is a + sqrt(t) (b - a)
        a, b, r1, c = 0.3, 1.9, 0.4, 0.3

        def outer(theta):
            theta = np.asarray(theta, dtype=float) % TWO_PI
            inside = (theta >= a) & (theta <= b)
            return np.where(inside, np.arccos(np.clip(np.cos(r1) - c * (theta - a), -1, 1)), r1)

        region = AngularRegion(outer, lambda th: np.full_like(np.asarray(th, dtype=float), r1))
        inv = inverse_angular_area(region)
        ts = np.linspace(0.0, 1.0, 21)
        assert np.max(np.abs(inv(ts) - (a + np.sqrt(ts) * (b - a)))) < 1e-8

    def test_true_forward_roundtrip(self):
        region = region_over_arc(0.5, 1.7)
        inv = inverse_angular_area(region)
        total, _ = integrate_radial(lambda th: float(region.density(np.array([th]))[0]),
                                    0.5, 1.7, 1e-12)
        for t in np.linspace(0.05, 0.95, 7):
            x = inv(float(t))
            f_true, _ = integrate_radial(lambda th: float(region.density(np.array([th]))[0]),
                                         0.5, x, 1e-12)
            assert abs(f_true / total - t) < 1e-8

    def test_non_injective(self):
        def outer(theta):
            theta = np.asarray(theta, dtype=float) % TWO_PI
            inside = ((theta >= 0.5) & (theta <= 1.0)) | ((theta >= 2.0) & (theta <= 2.5))
            return np.where(inside, 1.0, 0.2)

        region = AngularRegion(outer, lambda th: np.full_like(np.asarray(th, dtype=float), 0.2))
        with pytest.raises(NonInjectiveRegionError):
            inverse_angular_area(region)

    def test_x0_inside_support_rejected(self):
        with pytest.raises(DomainError):
            inverse_angular_area(region_over_arc(0.5, 1.7), x0=1.0)


def lemma_comparison_pair(rng):
    """K plus a matched exchanged-volume pair, with the added piece sitting at
    larger base radii than the removed piece."""
    r0 = rng.uniform(0.5, 0.9)
    amp = rng.uniform(0.05, 0.15)
    base = lambda th: r0 + amp * np.cos(np.asarray(th, dtype=float))  # noqa: E731

    width = rng.uniform(0.25, 0.5)
    add_amp = rng.uniform(0.05, 0.12)

    def bump(theta, center, w, a):
        theta = np.asarray(theta, dtype=float)
        d = np.angle(np.exp(1j * (theta - center)))
        return np.where(np.abs(d) < w, a * np.cos(math.pi * d / (2 * w)) ** 2, 0.0)

    # added volume near theta = 0 (large rho_K), removed near pi (small rho_K)
    def added_density(a):
        f = lambda th: np.maximum(np.cos(base(th)) - np.cos(base(th) + bump(th, 0.0, width, a)), 0)  # noqa: E731
        return integrate_radial(lambda th: float(f(np.array([th]))[0]), -width, width, 1e-11)[0]

    vol_add = added_density(add_amp)

    from scipy.optimize import brentq

    def removed_volume(a):
        f = lambda th: np.maximum(np.cos(base(th) - bump(th, math.pi, width, a)) - np.cos(base(th)), 0)  # noqa: E731
        return integrate_radial(lambda th: float(f(np.array([th]))[0]),
                                math.pi - width, math.pi + width, 1e-11)[0]

    rem_amp = brentq(lambda a: removed_volume(a) - vol_add, 1e-6, 0.45, xtol=1e-13)

    rho_k = base
    rho_kt = lambda th: base(th) + bump(th, 0.0, width, add_amp) - bump(th, math.pi, width, rem_amp)  # noqa: E731
    return rho_k, rho_kt, vol_add


class TestComparisonLemma:
    def test_twenty_random_pairs(self):
        rng = np.random.default_rng(12)
        f_cmp = lambda x: 2 * x / np.sin(x)  # noqa: E731
        for _ in range(20):
            rho_k, rho_kt, vol_exchanged = lemma_comparison_pair(rng)
            added = AngularRegion(rho_kt, rho_k)
            removed = AngularRegion(rho_k, rho_kt)
            zeta_plus = inverse_angular_area(added)
            zeta_minus = inverse_angular_area(removed)
            ts = np.linspace(0.0, 1.0, 101)
            rk_plus = rho_k(zeta_plus(ts))
            rk_minus = rho_k(zeta_minus(ts))
            assert np.all(rk_plus >= rk_minus - 1e-9)

            sq = lambda fn: integrate_radial(lambda th: float(fn(np.array([th]))[0]) ** 2,  # noqa: E731
                                             0.0, TWO_PI, 1e-8)[0]
            lhs = sq(rho_kt) - sq(rho_k)
            assert lhs > 0.0
            # quantitative form with the comparison weight 2x / sin x
            rhs = vol_exchanged * np.trapezoid(f_cmp(rk_plus) - f_cmp(rk_minus), ts)
            assert lhs > rhs - 1e-7


class TestScalarInequality:
    def test_grid(self):
        # x^2 - r^2 >= (2r / sin r)(cos r - cos x) on (0, pi/2]^2
        rng = np.random.default_rng(5)
        x = rng.uniform(1e-6, math.pi / 2, size=10_000)
        r = rng.uniform(1e-6, math.pi / 2, size=10_000)
        lhs = x ** 2 - r ** 2
        rhs = 2 * r / np.sin(r) * (np.cos(r) - np.cos(x))
        assert np.all(lhs - rhs >= -1e-12)

    @given(
        st.floats(min_value=1e-3, max_value=math.pi / 2),
        st.floats(min_value=1e-3, max_value=math.pi / 2),
    )
    @settings(max_examples=300, deadline=None)
    def test_pointwise_with_equality_only_on_diagonal(self, x, r):
        gap = x ** 2 - r ** 2 - 2 * r / math.sin(r) * (math.cos(r) - math.cos(x))
        assert gap >= -1e-12
        if abs(x - r) > 1e-2:
            assert gap > 0.0


class TestGridProfile:
    def test_plane_interpolation(self):
        values = np.array([1.0, 2.0, 1.0, 2.0])
        profile = GridProfile(values)
        body = StarBody(SpaceSpec(0, 2), profile)
        quarter = np.array([[math.cos(math.pi / 4), math.sin(math.pi / 4)]])
        assert body.rho(quarter)[0] == pytest.approx(1.5, abs=1e-12)

    def test_sphere_interpolation_constant(self):
        values = np.full((7, 8), 1.3)
        body = StarBody(S3, GridProfile(values))
        rng = np.random.default_rng(0)
        dirs = rng.normal(size=(50, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        assert np.max(np.abs(body.rho(dirs) - 1.3)) < 1e-12


class TestSerialization:
    @pytest.mark.parametrize("builder", [
        lambda: make_ball(H3, 0.8),
        lambda: make_ellipsoid([1.2, 0.8, 1.0]),
        lambda: make_lune(0.4),
        lambda: make_cone(S3, equality_cone_base(3, 0.3)),
        lambda: make_perturbed_ball(S3, 0.7, 0.03, 2),
        lambda: make_bumpy_ball(E3, 1.0, [[0, 0, 1.0]], [0.2], [4.0], symmetric=True),
        lambda: make_symmetric_polygon_body([1.0, 0.8], [0.4, 1.5]),
    ])
    def test_round_trip(self, builder):
        body = builder()
        doc = body.to_json_dict()
        assert doc["format_version"] == "1"
        clone = body_from_json_dict(doc)
        rng = np.random.default_rng(9)
        dirs = rng.normal(size=(40, body.space.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        assert np.max(np.abs(clone.rho(dirs) - body.rho(dirs))) < 1e-12

    def test_callable_profile_not_serializable(self):
        profile = AngularProfile(lambda th: np.full_like(th, 0.7))
        body = StarBody(S2, profile)
        with pytest.raises(Exception):
            body.to_json_dict()
