import math

import numpy as np
import pytest

from starsections.errors import ConvergenceError, DomainError, ResourceLimitError
from starsections.harmonics import zonal_harmonic
from starsections.quadrature import (
    build_sphere_rule,
    householder_frame,
    integrate_radial,
    subsphere_rule,
)
from starsections.spaces import sphere_surface_area


def random_rotation(n, rng):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q


class TestSphereRules:
    def test_circle_rule(self):
        rule = build_sphere_rule(1, 7)
        assert len(rule) == 8
        assert np.allclose(rule.weights, math.pi / 4)

    @pytest.mark.parametrize("m,degree", [(1, 47), (2, 11), (2, 23), (3, 23)])
    def test_weight_sum_and_nodes(self, m, degree):
        rule = build_sphere_rule(m, degree)
        assert abs(np.sum(rule.weights) - sphere_surface_area(m)) < 1e-10
        assert np.max(np.abs(np.linalg.norm(rule.nodes, axis=1) - 1.0)) < 1e-12
        assert np.all(rule.weights > 0)

    def test_harmonic_orthogonality(self):
        # degree-4 zonal harmonic integrates to zero on S^2
        rule = build_sphere_rule(2, 11)
        h4 = zonal_harmonic(3, 4, np.array([0.0, 0.0, 1.0]))
        assert abs(rule.integrate(h4)) < 1e-9
        for k in (1, 2, 3, 5, 6):
            hk = zonal_harmonic(3, k, np.array([0.0, 0.0, 1.0]))
            rule_hi = build_sphere_rule(2, 2 * k + 3)
            assert abs(rule_hi.integrate(hk)) < 1e-9

    def test_refinement_convergence(self):
        # exact: integral of exp(a . u) over S^2 is 4 pi sinh|a| / |a|
        a = np.array([0.4, -0.3, 0.55])
        na = np.linalg.norm(a)
        exact = 4 * math.pi * math.sinh(na) / na
        errors = []
        for degree in (5, 11, 23):
            rule = build_sphere_rule(2, degree)
            errors.append(abs(rule.integrate(lambda u: np.exp(u @ a)) - exact))
        for coarse, fine in zip(errors, errors[1:]):
            assert fine < coarse / 10 or fine < 1e-12

    def test_rotational_invariance(self):
        rng = np.random.default_rng(1)
        a = np.array([0.8, 0.1, -0.2])
        rule = build_sphere_rule(2, 23)
        rule_hi = build_sphere_rule(2, 31)
        base = rule.integrate(lambda u: np.cosh(u @ a))
        declared = abs(base - rule_hi.integrate(lambda u: np.cosh(u @ a))) + 1e-13
        for _ in range(5):
            q = random_rotation(3, rng)
            rotated = rule.integrate(lambda u: np.cosh((u @ q.T) @ a))
            assert abs(rotated - base) <= 10 * declared

    def test_node_cap(self):
        with pytest.raises(ResourceLimitError):
            build_sphere_rule(3, 201, node_cap=1000)

    def test_point_pair(self):
        rule = build_sphere_rule(0, 1)
        assert len(rule) == 2
        assert np.sum(rule.weights) == pytest.approx(sphere_surface_area(0))


class TestSubsphereRule:
    def test_identity_frame(self):
        n = 4
        xi = np.zeros(n)
        xi[-1] = 1.0
        frame = householder_frame(xi)
        assert np.allclose(frame, np.eye(n)[:, : n - 1])

    def test_invariants(self):
        rng = np.random.default_rng(3)
        base = build_sphere_rule(1, 15)
        for _ in range(10):
            xi = rng.normal(size=3)
            xi /= np.linalg.norm(xi)
            sub = subsphere_rule(base, xi)
            f = sub.frame
            assert np.max(np.abs(f.T @ f - np.eye(2))) < 1e-12
            assert np.max(np.abs(f.T @ xi)) < 1e-12
            nodes = sub.embedded_nodes
            assert np.max(np.abs(np.linalg.norm(nodes, axis=1) - 1.0)) < 1e-12
            assert np.max(np.abs(nodes @ xi)) < 1e-12
            assert np.sum(sub.weights) == pytest.approx(sphere_surface_area(1))

    def test_e1_axis_circle(self):
        base = build_sphere_rule(1, 7)
        sub = subsphere_rule(base, np.array([1.0, 0.0, 0.0]))
        assert np.max(np.abs(sub.embedded_nodes @ np.array([1.0, 0.0, 0.0]))) < 1e-12

    def test_dimension_mismatch(self):
        base = build_sphere_rule(2, 5)
        with pytest.raises(DomainError):
            subsphere_rule(base, np.array([1.0, 0.0, 0.0]))


class TestSelfAdjointness:
    @pytest.mark.parametrize("n", [3, 4])
    def test_average_of_subsphere_integrals(self, n):
        # integral over xi of Rg equals |S^{n-2}| times the integral of g
        rng = np.random.default_rng(n)
        outer = build_sphere_rule(n - 1, 23)
        inner = build_sphere_rule(n - 2, 23)
        s = sphere_surface_area(n - 2)
        for _ in range(20):
            a = rng.normal(size=n) * 0.7
            b = rng.normal(size=n)
            g = lambda u: np.exp(u @ a) + (u @ b) ** 2  # noqa: E731
            from starsections.harmonics import radon_quadrature

            lhs = float(np.dot(outer.weights,
                               [radon_quadrature(g, inner, xi) for xi in outer.nodes]))
            rhs = s * outer.integrate(g)
            gmax = float(np.max(np.abs(g(outer.nodes))))
            assert abs(lhs - rhs) <= 1e-6 * s * gmax


class TestIntegrateRadial:
    def test_polynomial(self):
        val, err = integrate_radial(lambda t: t ** 2, 0.0, 1.0, 1e-12)
        assert val == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert err <= 1e-10

    def test_sine(self):
        val, _ = integrate_radial(math.sin, 0.0, math.pi / 2)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_blowup_near_one(self):
        # closed form: 1 / (2 (1 - r^2)) - 1/2
        val, _ = integrate_radial(lambda r: r / (1 - r ** 2) ** 2, 0.0, 0.9, 1e-12)
        assert val == pytest.approx(0.5 * (1 / (1 - 0.81) - 1), rel=1e-10)

    def test_integrable_endpoint_singularity(self):
        val, _ = integrate_radial(lambda t: 1.0 / math.sqrt(t), 0.0, 1.0, 1e-10)
        assert val == pytest.approx(2.0, rel=1e-8)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            integrate_radial(math.sin, 1.0, 0.0)

    def test_convergence_error(self):
        # a genuinely divergent integrand stalls the error estimate
        with pytest.raises((ConvergenceError, Exception)):
            integrate_radial(lambda t: 1.0 / t, 0.0, 1.0, 1e-12)
