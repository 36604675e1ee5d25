"""Constant-curvature model spaces and their elementary metric functions.

The three spaces are encoded by the curvature sign ``delta``:
``-1`` the hyperbolic space, ``0`` the Euclidean space, ``+1`` the closed
hemisphere.  Geodesic radii live in ``[0, pi/2]`` on the hemisphere and in
``[0, inf)`` otherwise.  Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from .errors import DomainError, InversionRangeError, ResourceLimitError

HEMISPHERE_MAX_RADIUS = math.pi / 2

# sinh overflows near 710; keep a wide safety margin for phi/phi_inverse.
RADIUS_SAFETY_CAP = 350.0


@dataclass(frozen=True)
class SpaceSpec:
    """Curvature sign ``delta`` in {-1, 0, +1} plus dimension ``dim >= 2``."""

    delta: int
    dim: int

    def __post_init__(self):
        if self.delta not in (-1, 0, 1):
            raise DomainError(f"delta must be -1, 0 or +1, got {self.delta}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"dim must be an integer >= 2, got {self.dim}")

    @property
    def max_radius(self) -> float:
        return HEMISPHERE_MAX_RADIUS if self.delta == 1 else math.inf

    def check_radius(self, r, *, name: str = "r"):
        """Validate geodesic radii (scalar or array), returning them as ndarray."""
        arr = np.asarray(r, dtype=float)
        if np.any(arr < 0):
            raise DomainError(f"{name} must be nonnegative")
        if self.delta == 1 and np.any(arr > HEMISPHERE_MAX_RADIUS + 1e-12):
            raise DomainError(f"{name} exceeds pi/2 on the hemisphere")
        if self.delta != 1 and np.any(arr > RADIUS_SAFETY_CAP):
            raise ResourceLimitError(f"{name} exceeds the float-safety radius cap")
        return arr


def hyperbolic_space(dim: int) -> SpaceSpec:
    return SpaceSpec(-1, dim)


def euclidean_space(dim: int) -> SpaceSpec:
    return SpaceSpec(0, dim)


def hemisphere_space(dim: int) -> SpaceSpec:
    return SpaceSpec(1, dim)


def as_direction(v, dim: int | None = None) -> np.ndarray:
    """Validate a unit vector (a point of the direction sphere S^{n-1})."""
    u = np.asarray(v, dtype=float)
    if u.ndim != 1:
        raise DomainError("direction must be a 1-d vector")
    if dim is not None and u.shape[0] != dim:
        raise DomainError(f"direction must have {dim} components, got {u.shape[0]}")
    norm = float(np.linalg.norm(u))
    if abs(norm - 1.0) > 1e-12:
        raise DomainError(f"direction must be unit length, |v| = {norm!r}")
    return u


def sphere_surface_area(m: int) -> float:
    """Surface measure of the unit sphere S^m in R^{m+1}."""
    if m < 0:
        raise DomainError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((m + 1) / 2) / math.gamma((m + 1) / 2)


def unit_ball_volume(n: int) -> float:
    """Volume of the unit Euclidean ball in R^n."""
    if n < 0:
        raise DomainError("dimension must be >= 0")
    return math.pi ** (n / 2) / math.exp(gammaln(n / 2 + 1))


def metric_sine(space: SpaceSpec, r):
    """The metric coefficient s_delta(r): sin r, r or sinh r."""
    arr = space.check_radius(r)
    if space.delta == 1:
        out = np.sin(arr)
    elif space.delta == 0:
        out = arr.copy()
    else:
        out = np.sinh(arr)
    return out if out.ndim else float(out)


def _sin_power_primitive(m: int, x):
    """Antiderivative of sin^{m-1} on [0, pi], vanishing at 0, by power reduction."""
    x = np.asarray(x, dtype=float)
    if m == 1:
        return x.copy()
    if m == 2:
        return 1.0 - np.cos(x)
    return (-np.sin(x) ** (m - 2) * np.cos(x) + (m - 2) * _sin_power_primitive(m - 2, x)) / (m - 1)


def _sinh_power_primitive(m: int, x):
    x = np.asarray(x, dtype=float)
    if m == 1:
        return x.copy()
    if m == 2:
        return np.cosh(x) - 1.0
    return (np.sinh(x) ** (m - 2) * np.cosh(x) - (m - 2) * _sinh_power_primitive(m - 2, x)) / (m - 1)


def phi(space: SpaceSpec, m: int, x):
    """Radial volume primitive: the integral of s_delta(t)^{m-1} for t in [0, x].

    Strictly increasing in ``x`` with ``phi(space, m, 0) == 0``.  Exact
    closed forms (power-reduction recursion) are used for every ``m``.
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    arr = space.check_radius(x, name="x")
    if space.delta == 0:
        out = arr ** m / m
    elif space.delta == 1:
        out = _sin_power_primitive(m, arr)
    else:
        out = _sinh_power_primitive(m, arr)
    return out if out.ndim else float(out)


def sin_power_primitive_full(m: int, x):
    """phi for the sphere on the extended domain [0, pi].

    Needed by the gnomonic-coordinate special functions, which integrate past
    the hemisphere rim; not subject to the pi/2 radius check.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -1e-15) or np.any(arr > math.pi + 1e-12):
        raise DomainError("x must lie in [0, pi]")
    out = _sin_power_primitive(m, arr)
    return out if out.ndim else float(out)


def phi_inverse(space: SpaceSpec, m: int, y):
    """Inverse of ``phi`` in its first radial argument, by bracketed root solve."""
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0):
        raise DomainError("phi values are nonnegative")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if space.delta == 1 and np.any(arr > phi(space, m, HEMISPHERE_MAX_RADIUS) * (1 + 1e-12)):
        raise InversionRangeError("value exceeds phi at the hemisphere rim")

    # Closed-form inverses for the hot m = 2 case.
    if m == 2 and space.delta == 1:
        out = np.arccos(np.clip(1.0 - arr, -1.0, 1.0))
    elif m == 2 and space.delta == -1:
        out = np.arccosh(1.0 + arr)
    elif space.delta == 0:
        out = (m * arr) ** (1.0 / m)
    else:
        out = np.empty_like(arr)
        hi0 = HEMISPHERE_MAX_RADIUS if space.delta == 1 else 1.0
        for i, yi in enumerate(arr):
            if yi == 0.0:
                out[i] = 0.0
                continue
            hi = hi0
            while space.delta != 1 and phi(space, m, hi) < yi:
                hi *= 2.0
                if hi > RADIUS_SAFETY_CAP:
                    raise ResourceLimitError("phi inverse exceeds the radius cap")
            out[i] = brentq(lambda t: phi(space, m, t) - yi, 0.0, hi, xtol=1e-14, rtol=1e-15)
    return float(out[0]) if scalar else out


def ball_model_radius(space: SpaceSpec, r):
    """Geodesic radius -> radial coordinate of the unit-ball model.

    The model metric is 4|dx|^2 / (1 + delta |x|^2)^2, so
    t = tanh(r/2) for delta = -1, t = tan(r/2) for delta = +1, t = r/2 for
    delta = 0.
    """
    arr = space.check_radius(r)
    if space.delta == 1:
        out = np.tan(arr / 2)
    elif space.delta == -1:
        out = np.tanh(arr / 2)
    else:
        out = arr / 2
    return out if out.ndim else float(out)


def geodesic_radius(space: SpaceSpec, t):
    """Inverse of :func:`ball_model_radius`."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError("model radius must be nonnegative")
    if space.delta == 1:
        if np.any(arr > 1 + 1e-12):
            raise DomainError("model radius exceeds the closed hemisphere boundary t = 1")
        out = 2 * np.arctan(arr)
    elif space.delta == -1:
        if np.any(arr >= 1):
            raise DomainError("model radius must be < 1 in the hyperbolic ball model")
        out = 2 * np.arctanh(arr)
    else:
        out = 2 * arr
    return out if out.ndim else float(out)


def gnomonic_radial(rho):
    """Central (gnomonic) projection of a spherical radius: rho -> tan(rho).

    rho = pi/2 maps to +inf.  Convexity of a hemisphere body is equivalent to
    Euclidean convexity of its gnomonic image.
    """
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0) or np.any(arr > HEMISPHERE_MAX_RADIUS + 1e-12):
        raise DomainError("rho must lie in [0, pi/2]")
    out = np.where(arr >= HEMISPHERE_MAX_RADIUS, np.inf, np.tan(np.minimum(arr, HEMISPHERE_MAX_RADIUS)))
    return out if out.ndim else float(out)
