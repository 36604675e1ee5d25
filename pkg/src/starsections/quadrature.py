"""Quadrature on unit spheres, on great subspheres, and on radial intervals.

Sphere rules are products of Gauss-Jacobi rules in the polar coordinate with
a recursive lower-dimensional rule, bottoming out at a uniform rule on the
circle.  Exactness is by construction: a rule of declared degree d integrates
every polynomial of total degree <= d restricted to the sphere.

Rules are immutable after construction.  Summation over nodes goes through
``numpy`` dot/sum reductions, which use pairwise summation over the fixed
node ordering, so repeated evaluations are bit-reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_jacobi

from .errors import ConvergenceError, DomainError, ResourceLimitError
from .spaces import as_direction, sphere_surface_area

DEFAULT_NODE_CAP = 4_000_000

# Default polynomial degrees: high on the circle where nodes are cheap,
# moderate on S^2 and S^3 to keep nested outer/inner loops fast.
DEFAULT_DEGREES = {1: 47}
DEFAULT_DEGREE_HIGHER = 23


def default_degree(m: int) -> int:
    return DEFAULT_DEGREES.get(m, DEFAULT_DEGREE_HIGHER)


@dataclass(frozen=True)
class SphereRule:
    """Nodes and positive weights on S^dim with declared polynomial exactness."""

    dim: int
    nodes: np.ndarray      # (N, dim + 1), unit rows
    weights: np.ndarray    # (N,)
    exactness: int

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def integrate(self, f) -> float:
        """Integrate a vectorized function of node coordinates over the sphere."""
        vals = np.asarray(f(self.nodes), dtype=float)
        return float(np.dot(self.weights, vals))

    def integrate_values(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def _circle_rule(degree: int) -> SphereRule:
    n = max(degree + 1, 4)
    angles = 2 * math.pi * np.arange(n) / n
    nodes = np.column_stack([np.cos(angles), np.sin(angles)])
    weights = np.full(n, 2 * math.pi / n)
    return SphereRule(1, nodes, weights, degree)


_POINT_PAIR = SphereRule(0, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), 10 ** 9)


@lru_cache(maxsize=None)
def build_sphere_rule(m: int, degree: int, node_cap: int = DEFAULT_NODE_CAP) -> SphereRule:
    """Construct a quadrature rule on S^m exact for polynomials of degree <= degree.

    m = 0 is the two-point sphere (needed for sections in the plane),
    m = 1 the uniform circle rule, and m >= 2 a polar Gauss-Jacobi rule of
    weight (1 - t^2)^{(m-2)/2} producted with a recursive S^{m-1} rule.
    """
    if m < 0:
        raise DomainError("sphere dimension must be >= 0")
    if m == 0:
        return _POINT_PAIR
    if degree < 1:
        raise DomainError("degree must be >= 1")
    if m == 1:
        rule = _circle_rule(degree)
        if len(rule) > node_cap:
            raise ResourceLimitError(f"rule would need {len(rule)} nodes, cap is {node_cap}")
        return rule

    npolar = (degree + 2) // 2
    t, wt = roots_jacobi(npolar, (m - 2) / 2.0, (m - 2) / 2.0)
    sub = build_sphere_rule(m - 1, degree, node_cap)
    count = npolar * len(sub)
    if count > node_cap:
        raise ResourceLimitError(f"rule would need {count} nodes, cap is {node_cap}")

    s = np.sqrt(1.0 - t ** 2)
    nodes = np.empty((count, m + 1))
    nodes[:, 0] = np.repeat(t, len(sub))
    nodes[:, 1:] = np.repeat(s, len(sub))[:, None] * np.tile(sub.nodes, (npolar, 1))
    weights = np.repeat(wt, len(sub)) * np.tile(sub.weights, npolar)
    return SphereRule(m, nodes, weights, degree)


def householder_frame(xi: np.ndarray) -> np.ndarray:
    """Orthonormal basis of xi-perp, columns of the reflection sending e_n to xi.

    Deterministic completion: for xi = e_n it returns (e_1, ..., e_{n-1}).
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[0]
    v = xi.copy()
    v[-1] -= 1.0
    norm2 = float(np.dot(v, v))
    if norm2 < 1e-28:
        return np.eye(n)[:, : n - 1]
    house = np.eye(n) - 2.0 * np.outer(v, v) / norm2
    return house[:, : n - 1]


@dataclass(frozen=True)
class SubsphereRule:
    """A rule on the great subsphere S^{n-1} intersected with xi-perp."""

    direction: np.ndarray   # xi, unit vector in R^n
    frame: np.ndarray       # (n, n-1), orthonormal columns spanning xi-perp
    base: SphereRule        # rule on S^{n-2}

    def __post_init__(self):
        self.direction.setflags(write=False)
        self.frame.setflags(write=False)

    @property
    def embedded_nodes(self) -> np.ndarray:
        """Base nodes mapped onto S^{n-1} in xi-perp, shape (N, n)."""
        return self.base.nodes @ self.frame.T

    @property
    def weights(self) -> np.ndarray:
        return self.base.weights

    def integrate(self, f) -> float:
        vals = np.asarray(f(self.embedded_nodes), dtype=float)
        return float(np.dot(self.base.weights, vals))


def subsphere_rule(rule: SphereRule, xi) -> SubsphereRule:
    """Embed a rule on S^{n-2} into the subsphere orthogonal to xi."""
    xi = as_direction(xi)
    n = xi.shape[0]
    if rule.dim != n - 2:
        raise DomainError(f"base rule must have dimension {n - 2}, got {rule.dim}")
    return SubsphereRule(xi.copy(), householder_frame(xi), rule)


def integrate_radial(f, a: float, b: float, tol: float = 1e-12):
    """Adaptive integral of f over [a, b].

    Returns ``(value, error_estimate)``.  Integrable endpoint singularities
    are allowed.  Raises :class:`ConvergenceError` when the error estimate
    stalls well above ``tol``; on corner integrands the attainable estimate
    is roundoff-limited near 1e-9 relative, which is accepted.
    """
    if a > b:
        raise DomainError("integration requires a <= b")
    if a == b:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err = quad(f, a, b, epsabs=tol, epsrel=max(tol, 1e-13), limit=500)
    if err > max(50 * tol, 1e-9 * abs(value)):
        raise ConvergenceError(
            f"adaptive quadrature stalled: estimated error {err:.3e} > tol {tol:.3e}"
        )
    return value, err
