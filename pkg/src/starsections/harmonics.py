"""Zonal spherical harmonics and the great-subsphere (Funk) Radon transform.

The transform R maps a function f on S^{n-1} to its integrals over great
subspheres, Rf(xi) = integral of f over S^{n-1} cut by xi-perp.  On spherical
harmonics of even degree k it acts as multiplication by an eigenvalue
lambda_k; odd degrees are annihilated.  Only zonal harmonics are provided:
zonality is preserved by R and suffices for every check in this library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnsupportedDimensionError
from .quadrature import SphereRule, build_sphere_rule, subsphere_rule
from .spaces import as_direction, sphere_surface_area


def gegenbauer(k: int, lam: float, t):
    """Gegenbauer polynomial C_k^lam(t) by upward recurrence (stable for small k)."""
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if k == 0:
        return prev
    cur = 2.0 * lam * t
    for j in range(2, k + 1):
        prev, cur = cur, (2.0 * t * (j + lam - 1.0) * cur - (j + 2.0 * lam - 2.0) * prev) / j
    return cur


_NORMALIZATION_CACHE: dict[tuple[int, int], float] = {}


def _zonal_scale(n: int, k: int) -> float:
    """1 / L2-norm of the raw zonal polynomial on S^{n-1}, computed by quadrature.

    Quadrature (degree >= 2k + 2 rule) rather than a closed form: the scale is
    then self-consistent with the rules used downstream, and a whole class of
    constant-factor bugs disappears.
    """
    key = (n, k)
    if key not in _NORMALIZATION_CACHE:
        rule = build_sphere_rule(n - 1, max(2 * k + 2, 8))
        axis = np.zeros(n)
        axis[-1] = 1.0
        vals = gegenbauer(k, (n - 2) / 2.0, rule.nodes @ axis)
        norm_sq = float(np.dot(rule.weights, vals ** 2))
        _NORMALIZATION_CACHE[key] = 1.0 / math.sqrt(norm_sq)
    return _NORMALIZATION_CACHE[key]


@dataclass(frozen=True)
class ZonalHarmonic:
    """Degree-k zonal harmonic on S^{n-1} about ``axis``, unit L2 norm."""

    ambient_dim: int
    degree: int
    axis: np.ndarray
    _scale: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.ambient_dim < 3:
            raise UnsupportedDimensionError("zonal harmonics require ambient dimension >= 3")
        if self.degree < 0:
            raise DomainError("degree must be >= 0")
        object.__setattr__(self, "axis", as_direction(self.axis, self.ambient_dim).copy())
        self.axis.setflags(write=False)
        object.__setattr__(self, "_scale", _zonal_scale(self.ambient_dim, self.degree))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        t = u @ self.axis
        return self._scale * gegenbauer(self.degree, (self.ambient_dim - 2) / 2.0, t)


def zonal_harmonic(n: int, k: int, axis) -> ZonalHarmonic:
    return ZonalHarmonic(n, k, np.asarray(axis, dtype=float))


def eval_zonal(h: ZonalHarmonic, u):
    """Evaluate a zonal harmonic at one or many unit vectors."""
    out = h(np.atleast_2d(np.asarray(u, dtype=float)))
    return float(out[0]) if np.asarray(u).ndim == 1 else out


def radon_multiplier(n: int, k: int) -> float:
    """Eigenvalue lambda_k of the transform R on degree-k harmonics on S^{n-1}.

    lambda_k = (-1)^{k/2} 2 pi^{(n-2)/2} Gamma((k+1)/2) / Gamma((n+k-1)/2)
    for even k, and 0 for odd k.  The normalization (integration against raw
    subsphere arclength) is anchored by lambda_0 = |S^{n-2}|.
    """
    if n == 2:
        raise UnsupportedDimensionError(
            "n = 2 sections are two-point evaluations, not integrals; multipliers undefined"
        )
    if n < 3:
        raise UnsupportedDimensionError("ambient dimension must be >= 3")
    if k < 0:
        raise DomainError("degree must be >= 0")
    if k % 2 == 1:
        return 0.0
    log_mag = (
        math.log(2.0)
        + (n - 2) / 2.0 * math.log(math.pi)
        + gammaln((k + 1) / 2.0)
        - gammaln((n + k - 1) / 2.0)
    )
    sign = -1.0 if (k // 2) % 2 else 1.0
    return sign * math.exp(log_mag)


@dataclass(frozen=True)
class MultiplierTable:
    """lambda_k for k = 0..max_degree on S^{n-1} (zero at odd k)."""

    ambient_dim: int
    values: dict[int, float]

    def __getitem__(self, k: int) -> float:
        return self.values[k]


def multiplier_table(n: int, max_degree: int) -> MultiplierTable:
    return MultiplierTable(n, {k: radon_multiplier(n, k) for k in range(max_degree + 1)})


def radon_quadrature(f, rule: SphereRule, xi) -> float:
    """Quadrature estimate of Rf(xi) using a rule on S^{n-2}."""
    sub = subsphere_rule(rule, xi)
    vals = np.asarray(f(sub.embedded_nodes), dtype=float)
    return float(np.dot(sub.weights, vals))


def radon_l2_bound_check(f, outer_rule: SphereRule, inner_rule: SphereRule):
    """Both sides of ||Rf||_{L2} <= |S^{n-2}| ||f||_{L2}, by quadrature.

    Returns ``(lhs, rhs)``.  Constants saturate the bound; for other f the
    left side falls short by the multiplier decay.
    """
    n = outer_rule.dim + 1
    rf = np.array([radon_quadrature(f, inner_rule, xi) for xi in outer_rule.nodes])
    lhs = math.sqrt(float(np.dot(outer_rule.weights, rf ** 2)))
    fv = np.asarray(f(outer_rule.nodes), dtype=float)
    rhs = sphere_surface_area(n - 2) * math.sqrt(float(np.dot(outer_rule.weights, fv ** 2)))
    return lhs, rhs
