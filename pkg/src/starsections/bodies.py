"""Star bodies and star-shaped sets in the three model spaces.

A body is a space plus a radial profile on the direction sphere.  Profiles
are immutable; bodies are safe to share between workers.  Indicator-type
profiles (cones, radial steps) carry an analytic base so that their volumes
and great-subsphere sections are computed exactly, never by smoothing a
discontinuous integrand through a polynomial quadrature rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ApplicabilityError,
    DomainError,
    NonInjectiveRegionError,
    PitchSelectionError,
    ResourceLimitError,
    SolverError,
)
from .harmonics import ZonalHarmonic, zonal_harmonic
from .quadrature import SphereRule, build_sphere_rule, default_degree
from .spaces import (
    HEMISPHERE_MAX_RADIUS,
    SpaceSpec,
    as_direction,
    phi,
    sphere_surface_area,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# analytic band measures on spheres


def _band_primitive(q: float, t):
    """Antiderivative of (1 - u^2)^q vanishing at 0, for q in {-1/2, 0, 1/2, 1, ...}."""
    t = np.asarray(t, dtype=float)
    if q == -0.5:
        return np.arcsin(np.clip(t, -1.0, 1.0))
    if q == 0.0:
        return t.copy()
    return (t * (1.0 - t ** 2) ** q + 2.0 * q * _band_primitive(q - 1.0, t)) / (2.0 * q + 1.0)


def sphere_band_measure(m: int, lo, hi):
    """Measure of the band {x in S^m : lo <= <x, u> <= hi} for any unit u.

    Exact in closed form.  ``lo``/``hi`` may be arrays (broadcast together).
    m = 0 is the two-point sphere with counting measure.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if m == 0:
        inside = lambda t: (lo <= t) & (t <= hi)  # noqa: E731
        out = inside(1.0) * 1.0 + inside(-1.0) * 1.0
        return out if out.ndim else float(out)
    lo_c = np.clip(lo, -1.0, 1.0)
    hi_c = np.clip(hi, -1.0, 1.0)
    q = (m - 2) / 2.0
    out = sphere_surface_area(m - 1) * np.maximum(
        _band_primitive(q, hi_c) - _band_primitive(q, lo_c), 0.0
    )
    return out if out.ndim else float(out)


def spherical_cap_measure(sphere_dim: int, height: float) -> float:
    """Measure of the cap {x in S^m : <x, u> >= height}."""
    return float(sphere_band_measure(sphere_dim, height, 1.0))


# ---------------------------------------------------------------------------
# cone bases: measurable subsets of S^{n-1} with analytic section measures


class ConeBase:
    """Subset A of the direction sphere with exact measures.

    Implementations provide membership, the total measure |A| and the exact
    subsphere measure |A cut by xi-perp|, per band or per arc.
    """

    ambient_dim: int
    measure: float

    def contains(self, dirs) -> np.ndarray:
        raise NotImplementedError

    def section_measure(self, xi) -> float:
        raise NotImplementedError

    def section_measures(self, xis) -> np.ndarray:
        xis = np.atleast_2d(np.asarray(xis, dtype=float))
        return np.array([self.section_measure(x) for x in xis])

    def descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class BandsBase(ConeBase):
    """Disjoint union of bands {lo_k <= <x, axis> <= hi_k} on S^{n-1}."""

    axis: np.ndarray
    los: np.ndarray
    his: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        axis = as_direction(self.axis)
        object.__setattr__(self, "axis", axis.copy())
        los = np.asarray(self.los, dtype=float)
        his = np.asarray(self.his, dtype=float)
        if los.shape != his.shape or los.ndim != 1:
            raise DomainError("band bounds must be matching 1-d arrays")
        if np.any(his < los):
            raise DomainError("band upper bounds must dominate lower bounds")
        order = np.argsort(los)
        los, his = los[order], his[order]
        if np.any(los[1:] < his[:-1] - 1e-15):
            raise DomainError("bands must be disjoint")
        object.__setattr__(self, "los", los)
        object.__setattr__(self, "his", his)
        for arr in (self.axis, self.los, self.his):
            arr.setflags(write=False)

    @property
    def ambient_dim(self) -> int:
        return self.axis.shape[0]

    @property
    def measure(self) -> float:
        m = self.ambient_dim - 1
        return float(np.sum(sphere_band_measure(m, self.los, self.his)))

    def contains(self, dirs) -> np.ndarray:
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        t = dirs @ self.axis
        edges = np.empty(2 * len(self.los))
        edges[0::2] = self.los
        edges[1::2] = self.his
        idx = np.searchsorted(edges, t, side="right")
        return idx % 2 == 1

    def _section_bands(self, xi):
        xi = np.asarray(xi, dtype=float)
        c = float(np.dot(xi, self.axis))
        s = math.sqrt(max(0.0, 1.0 - c * c))
        return s

    def section_measure(self, xi) -> float:
        s = self._section_bands(xi)
        m_sub = self.ambient_dim - 2
        if s < 1e-15:
            hit = np.any((self.los <= 0.0) & (0.0 <= self.his))
            return sphere_surface_area(m_sub) if hit else 0.0
        return float(np.sum(sphere_band_measure(m_sub, self.los / s, self.his / s)))

    def section_measures(self, xis) -> np.ndarray:
        xis = np.atleast_2d(np.asarray(xis, dtype=float))
        m_sub = self.ambient_dim - 2
        c = xis @ self.axis
        s = np.sqrt(np.maximum(0.0, 1.0 - c ** 2))
        out = np.empty(len(xis))
        degenerate = s < 1e-15
        if np.any(degenerate):
            hit = np.any((self.los <= 0.0) & (0.0 <= self.his))
            out[degenerate] = sphere_surface_area(m_sub) if hit else 0.0
        todo = np.nonzero(~degenerate)[0]
        # chunk so each (xi, band) temporary stays near 16 MB
        k = max(1, len(self.los))
        block = max(1, int(2e6 // k))
        for start in range(0, len(todo), block):
            sel = todo[start : start + block]
            sv = s[sel][:, None]
            vals = sphere_band_measure(m_sub, self.los[None, :] / sv, self.his[None, :] / sv)
            out[sel] = np.sum(vals, axis=1)
        return out

    def reflected(self) -> "BandsBase":
        """The antipodal image -A (same axis, negated bands)."""
        return BandsBase(self.axis, -self.his[::-1], -self.los[::-1])

    def union_disjoint(self, other: "BandsBase") -> "BandsBase":
        if not np.allclose(other.axis, self.axis, atol=1e-14):
            raise DomainError("band unions require a common axis")
        return BandsBase(
            self.axis,
            np.concatenate([self.los, other.los]),
            np.concatenate([self.his, other.his]),
            meta={**self.meta},
        )

    def descriptor(self) -> dict:
        return {
            "kind": "bands",
            "axis": self.axis.tolist(),
            "los": self.los.tolist(),
            "his": self.his.tolist(),
        }


def cap_base(axis, height: float) -> BandsBase:
    """The spherical cap {<x, axis> >= height} as a one-band base."""
    if not -1.0 < height < 1.0:
        raise DomainError("cap height must lie in (-1, 1)")
    return BandsBase(np.asarray(axis, dtype=float), np.array([height]), np.array([1.0]))


def full_sphere_base(n: int) -> BandsBase:
    axis = np.zeros(n)
    axis[0] = 1.0
    return BandsBase(axis, np.array([-1.0]), np.array([1.0]))


def equality_cone_base(n: int, height: float, axis=None) -> BandsBase:
    """Base realizing the sharp-minimum equality type in dimension n >= 3.

    Takes the cap {t >= height} together with the reflection of its
    complement within the upper half {0 < t < height}, i.e. the band
    {-height < t < 0}.  For almost every direction exactly one of u, -u
    belongs to the base, so all its great-subsphere sections have measure
    |S^{n-2}| / 2.
    """
    if not 0.0 < height < 1.0:
        raise DomainError("height must lie in (0, 1)")
    if axis is None:
        axis = np.zeros(n)
        axis[0] = 1.0
    return BandsBase(np.asarray(axis, dtype=float), np.array([-height, height]), np.array([0.0, 1.0]))


def double_cap_base(n: int, height: float, axis=None) -> BandsBase:
    """Symmetric pair of antipodal caps; violates both equality-type conditions."""
    if not 0.0 < height < 1.0:
        raise DomainError("height must lie in (0, 1)")
    if axis is None:
        axis = np.zeros(n)
        axis[0] = 1.0
    return BandsBase(np.asarray(axis, dtype=float), np.array([-1.0, height]), np.array([-height, 1.0]))


def _normalize_arcs(arcs) -> list[tuple[float, float]]:
    out = []
    for a, b in arcs:
        a = float(a)
        b = float(b)
        if b <= a:
            raise DomainError("arc endpoints must satisfy a < b")
        if b - a > TWO_PI + 1e-12:
            raise DomainError("arc longer than the whole circle")
        a_mod = a % TWO_PI
        shift = a_mod - a
        b_mod = b + shift
        if b_mod <= TWO_PI:
            out.append((a_mod, b_mod))
        else:
            out.append((a_mod, TWO_PI))
            out.append((0.0, b_mod - TWO_PI))
    out.sort()
    for (a1, b1), (a2, _) in zip(out, out[1:]):
        if a2 < b1 - 1e-12:
            raise DomainError("arcs must be disjoint")
    return out


@dataclass(frozen=True)
class ArcsBase(ConeBase):
    """Union of disjoint arcs of S^1, given as angle intervals in [0, 2pi)."""

    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(_normalize_arcs(self.arcs)))

    ambient_dim = 2

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.arcs))

    def _contains_angle(self, theta):
        theta = np.asarray(theta, dtype=float) % TWO_PI
        hit = np.zeros(theta.shape, dtype=bool)
        for a, b in self.arcs:
            hit |= (theta >= a - 1e-14) & (theta <= b + 1e-14)
        return hit

    def contains(self, dirs) -> np.ndarray:
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        return self._contains_angle(np.arctan2(dirs[:, 1], dirs[:, 0]))

    def section_measure(self, xi) -> float:
        xi = np.asarray(xi, dtype=float)
        theta = math.atan2(xi[1], xi[0])
        hits = self._contains_angle(np.array([theta + math.pi / 2, theta - math.pi / 2]))
        return float(np.sum(hits))

    def reflected(self) -> "ArcsBase":
        return ArcsBase(tuple((a + math.pi, b + math.pi) for a, b in self.arcs))

    def intersection_measure(self, other: "ArcsBase") -> float:
        total = 0.0
        for a1, b1 in self.arcs:
            for a2, b2 in other.arcs:
                total += max(0.0, min(b1, b2) - max(a1, a2))
        return total

    def is_origin_symmetric(self, tol: float = 1e-10) -> bool:
        return abs(self.intersection_measure(self.reflected()) - self.measure) <= tol

    def descriptor(self) -> dict:
        return {"kind": "arcs", "arcs": [list(ab) for ab in self.arcs]}


def base_from_descriptor(d: dict) -> ConeBase:
    if d["kind"] == "bands":
        return BandsBase(np.array(d["axis"]), np.array(d["los"]), np.array(d["his"]))
    if d["kind"] == "arcs":
        return ArcsBase(tuple(tuple(ab) for ab in d["arcs"]))
    raise DomainError(f"unknown base kind {d['kind']!r}")


# ---------------------------------------------------------------------------
# radial profiles


class RadialProfile:
    """Radial function rho on the direction sphere; vectorized evaluation."""

    kind: str = "abstract"

    def rho(self, dirs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    # indicator-type profiles carry an analytic base and bypass smooth quadrature
    indicator_base: ConeBase | None = None
    indicator_height: float | None = None


@dataclass(frozen=True)
class ConstantProfile(RadialProfile):
    r: float
    kind = "ball"

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        return np.full(dirs.shape[0], self.r)

    def descriptor(self):
        return {"kind": "ball", "r": self.r}


@dataclass(frozen=True)
class EllipsoidProfile(RadialProfile):
    semiaxes: np.ndarray
    kind = "ellipsoid"

    def __post_init__(self):
        ax = np.asarray(self.semiaxes, dtype=float)
        object.__setattr__(self, "semiaxes", ax)
        ax.setflags(write=False)

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        return 1.0 / np.sqrt((dirs ** 2) @ (1.0 / self.semiaxes ** 2))

    def descriptor(self):
        return {"kind": "ellipsoid", "semiaxes": self.semiaxes.tolist()}


@dataclass(frozen=True)
class LuneProfile(RadialProfile):
    """Origin-symmetric lune of half-width w: tan(rho) = tan(w) / |<u, axis>|."""

    w: float
    axis: np.ndarray
    kind = "lune"

    def __post_init__(self):
        object.__setattr__(self, "axis", as_direction(self.axis, 2).copy())
        self.axis.setflags(write=False)

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        c = np.abs(dirs @ self.axis)
        out = np.full(dirs.shape[0], HEMISPHERE_MAX_RADIUS)
        pos = c > 1e-300
        # arctan(tan w / c) written pole-safe
        out[pos] = HEMISPHERE_MAX_RADIUS - np.arctan(c[pos] / math.tan(self.w))
        return out

    def descriptor(self):
        return {"kind": "lune", "w": self.w, "axis": self.axis.tolist()}


@dataclass(frozen=True)
class HarmonicPerturbedProfile(RadialProfile):
    """rho = r + alpha + beta * H_k with H_k a unit-norm zonal harmonic."""

    r: float
    alpha: float
    beta: float
    harmonic: ZonalHarmonic
    kind = "perturbed_ball"

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        return self.r + self.alpha + self.beta * self.harmonic(dirs)

    def perturbation(self, dirs):
        dirs = np.atleast_2d(dirs)
        return self.alpha + self.beta * self.harmonic(dirs)

    def descriptor(self):
        return {
            "kind": "perturbed_ball",
            "r": self.r,
            "alpha": self.alpha,
            "beta": self.beta,
            "degree": self.harmonic.degree,
            "axis": self.harmonic.axis.tolist(),
        }


@dataclass(frozen=True)
class IndicatorProfile(RadialProfile):
    """rho = height on the base set, 0 elsewhere (cones and radial steps).

    These are star-shaped sets, not star bodies: rho vanishes off the base.
    """

    base: ConeBase
    height: float
    kind = "cone"

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        return self.height * self.base.contains(dirs).astype(float)

    @property
    def indicator_base(self):
        return self.base

    @property
    def indicator_height(self):
        return self.height

    def descriptor(self):
        return {"kind": "cone", "height": self.height, "base": self.base.descriptor()}


@dataclass(frozen=True)
class BumpyProfile(RadialProfile):
    """Ball radius plus smooth zonal bumps: r0 + sum a_j exp(s_j (<u, c_j> - 1))."""

    r0: float
    centers: np.ndarray      # (k, n)
    amplitudes: np.ndarray   # (k,)
    sharpness: np.ndarray    # (k,)
    lo: float = 0.0
    hi: float = math.inf
    kind = "bumpy"

    def __post_init__(self):
        for name in ("centers", "amplitudes", "sharpness"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        vals = np.full(dirs.shape[0], self.r0)
        for c, a, s in zip(self.centers, self.amplitudes, self.sharpness):
            vals = vals + a * np.exp(s * (dirs @ c - 1.0))
        return np.clip(vals, self.lo, self.hi)

    def descriptor(self):
        return {
            "kind": "bumpy",
            "r0": self.r0,
            "centers": self.centers.tolist(),
            "amplitudes": self.amplitudes.tolist(),
            "sharpness": self.sharpness.tolist(),
            "lo": self.lo,
            "hi": None if math.isinf(self.hi) else self.hi,
        }


@dataclass(frozen=True)
class PolygonProfile(RadialProfile):
    """Symmetric convex hemisphere body: gnomonic image is a strip intersection.

    tan(rho(u)) = min_i c_i / |<u, w_i>| over unit normals w_i with offsets
    c_i > 0.  Always origin-symmetric and convex.
    """

    normals: np.ndarray   # (k, 2)
    offsets: np.ndarray   # (k,)
    kind = "polygon"

    def __post_init__(self):
        for name in ("normals", "offsets"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        denom = np.abs(dirs @ self.normals.T)
        with np.errstate(divide="ignore"):
            gnomonic = np.min(self.offsets[None, :] / np.maximum(denom, 1e-300), axis=1)
        return np.arctan(gnomonic)

    def descriptor(self):
        return {
            "kind": "polygon",
            "normals": self.normals.tolist(),
            "offsets": self.offsets.tolist(),
        }


@dataclass(frozen=True)
class AngularProfile(RadialProfile):
    """Plane-specific profile given by a callable of the polar angle (n = 2)."""

    fn: object
    params: dict = field(default_factory=dict)
    kind = "angular"

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        return np.asarray(self.fn(np.arctan2(dirs[:, 1], dirs[:, 0])), dtype=float)

    def rho_angle(self, theta):
        return np.asarray(self.fn(np.asarray(theta, dtype=float)), dtype=float)

    def descriptor(self):
        if not self.params:
            raise ApplicabilityError("callable angular profiles are not serializable")
        return {"kind": "angular", **self.params}


@dataclass(frozen=True)
class GridProfile(RadialProfile):
    """Order-1 interpolation of rho over a hyperspherical angle grid.

    Polar angles use clamped linear interpolation on uniform [0, pi] grids;
    the azimuth is periodic.  Order 1 preserves star-shapedness and min/max
    bounds, which is what the shape search needs.
    """

    values: np.ndarray   # shape (N_1, ..., N_{n-1})
    kind = "grid"

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", arr)
        arr.setflags(write=False)

    @property
    def ambient_dim(self) -> int:
        return self.values.ndim + 1

    def _angles(self, dirs):
        dirs = np.atleast_2d(dirs)
        n = dirs.shape[1]
        angs = []
        rem = np.ones(dirs.shape[0])
        for i in range(n - 2):
            c = np.clip(dirs[:, i] / np.maximum(rem, 1e-300), -1.0, 1.0)
            angs.append(np.arccos(c))
            rem = rem * np.sqrt(np.maximum(0.0, 1.0 - c ** 2))
        angs.append(np.arctan2(dirs[:, -1], dirs[:, -2]) % TWO_PI)
        return angs

    def rho(self, dirs):
        dirs = np.atleast_2d(dirs)
        if dirs.shape[1] != self.ambient_dim:
            raise DomainError("direction dimension does not match the grid")
        angs = self._angles(dirs)
        shape = self.values.shape
        idx_lo, idx_hi, fracs = [], [], []
        for axis, theta in enumerate(angs):
            ncells = shape[axis]
            periodic = axis == len(shape) - 1
            if periodic:
                pos = theta / TWO_PI * ncells
                i0 = np.floor(pos).astype(int) % ncells
                i1 = (i0 + 1) % ncells
                frac = pos - np.floor(pos)
            else:
                pos = theta / math.pi * (ncells - 1)
                i0 = np.clip(np.floor(pos).astype(int), 0, ncells - 2)
                i1 = i0 + 1
                frac = np.clip(pos - i0, 0.0, 1.0)
            idx_lo.append(i0)
            idx_hi.append(i1)
            fracs.append(frac)
        out = np.zeros(dirs.shape[0])
        ndim = len(shape)
        for corner in range(2 ** ndim):
            weight = np.ones(dirs.shape[0])
            sel = []
            for axis in range(ndim):
                if corner >> axis & 1:
                    weight = weight * fracs[axis]
                    sel.append(idx_hi[axis])
                else:
                    weight = weight * (1.0 - fracs[axis])
                    sel.append(idx_lo[axis])
            out += weight * self.values[tuple(sel)]
        return out

    def descriptor(self):
        return {"kind": "grid", "shape": list(self.values.shape), "values": self.values.ravel().tolist()}


# ---------------------------------------------------------------------------
# star bodies


@dataclass(frozen=True)
class StarBody:
    """A space, a radial profile and an origin-symmetry claim."""

    space: SpaceSpec
    profile: RadialProfile
    symmetric: bool = False

    def rho(self, dirs) -> np.ndarray:
        return self.profile.rho(dirs)

    @property
    def is_indicator(self) -> bool:
        return self.profile.indicator_base is not None

    def check_symmetry(self, rule: SphereRule | None = None, tol: float = 1e-10) -> bool:
        """Verify the symmetry claim at rule nodes: rho(u) = rho(-u)."""
        if rule is None:
            rule = build_sphere_rule(self.space.dim - 1, 11)
        r1 = self.rho(rule.nodes)
        r2 = self.rho(-rule.nodes)
        return bool(np.max(np.abs(r1 - r2)) <= tol)

    def to_json_dict(self) -> dict:
        return {
            "format_version": "1",
            "space": {"delta": self.space.delta, "dim": self.space.dim},
            "profile": self.profile.descriptor(),
            "symmetric": self.symmetric,
        }


def body_from_json_dict(doc: dict) -> StarBody:
    space = SpaceSpec(int(doc["space"]["delta"]), int(doc["space"]["dim"]))
    p = doc["profile"]
    kind = p["kind"]
    if kind == "ball":
        return make_ball(space, float(p["r"]))
    if kind == "ellipsoid":
        return make_ellipsoid(np.array(p["semiaxes"], dtype=float))
    if kind == "lune":
        return make_lune(float(p["w"]), np.array(p["axis"], dtype=float))
    if kind == "cone":
        base = base_from_descriptor(p["base"])
        profile = IndicatorProfile(base, float(p["height"]))
        return StarBody(space, profile, symmetric=bool(doc.get("symmetric", False)))
    if kind == "perturbed_ball":
        h = zonal_harmonic(space.dim, int(p["degree"]), np.array(p["axis"], dtype=float))
        profile = HarmonicPerturbedProfile(float(p["r"]), float(p["alpha"]), float(p["beta"]), h)
        return StarBody(space, profile, symmetric=p["degree"] % 2 == 0)
    if kind == "bumpy":
        profile = BumpyProfile(
            float(p["r0"]),
            np.array(p["centers"], dtype=float),
            np.array(p["amplitudes"], dtype=float),
            np.array(p["sharpness"], dtype=float),
            lo=float(p.get("lo", 0.0)),
            hi=math.inf if p.get("hi") is None else float(p["hi"]),
        )
        return StarBody(space, profile, symmetric=bool(doc.get("symmetric", False)))
    if kind == "polygon":
        profile = PolygonProfile(np.array(p["normals"], dtype=float), np.array(p["offsets"], dtype=float))
        return StarBody(space, profile, symmetric=True)
    if kind == "grid":
        values = np.array(p["values"], dtype=float).reshape(p["shape"])
        return StarBody(space, GridProfile(values), symmetric=bool(doc.get("symmetric", False)))
    raise DomainError(f"unknown profile kind {kind!r}")


# ---------------------------------------------------------------------------
# constructors


def make_ball(space: SpaceSpec, r: float) -> StarBody:
    space.check_radius(r)
    if r <= 0:
        raise DomainError("ball radius must be positive")
    return StarBody(space, ConstantProfile(float(r)), symmetric=True)


def make_ellipsoid(semiaxes) -> StarBody:
    ax = np.asarray(semiaxes, dtype=float)
    if np.any(ax <= 0):
        raise DomainError("all semiaxes must be positive")
    space = SpaceSpec(0, ax.shape[0])
    return StarBody(space, EllipsoidProfile(ax), symmetric=True)


def bands_to_arcs(base: BandsBase) -> ArcsBase:
    """Rewrite a circle band base as explicit arcs (exact plane functionals)."""
    if base.ambient_dim != 2:
        raise DomainError("arc conversion applies to circle bases")
    phi0 = math.atan2(base.axis[1], base.axis[0])
    arcs = []
    for lo, hi in zip(base.los, base.his):
        a_hi = math.acos(max(-1.0, min(1.0, hi)))
        a_lo = math.acos(max(-1.0, min(1.0, lo)))
        if a_lo > a_hi:
            arcs.append((phi0 + a_hi, phi0 + a_lo))
            arcs.append((phi0 - a_lo, phi0 - a_hi))
    return ArcsBase(tuple(arcs))


def make_cone(space: SpaceSpec, base: ConeBase) -> StarBody:
    """Spherical cone: rho = pi/2 on the base, 0 elsewhere (star-shaped set)."""
    if space.delta != 1:
        raise DomainError("cones live on the hemisphere (delta = +1)")
    if base.ambient_dim != space.dim:
        raise DomainError("base dimension does not match the space")
    if space.dim == 2 and isinstance(base, BandsBase):
        base = bands_to_arcs(base)
    symmetric = False
    if isinstance(base, ArcsBase):
        symmetric = base.is_origin_symmetric()
    elif isinstance(base, BandsBase):
        refl = base.reflected()
        symmetric = np.array_equal(refl.los, base.los) and np.array_equal(refl.his, base.his)
    return StarBody(space, IndicatorProfile(base, HEMISPHERE_MAX_RADIUS), symmetric=symmetric)


def make_lune(w: float, axis=(1.0, 0.0)) -> StarBody:
    if not 0.0 < w < HEMISPHERE_MAX_RADIUS:
        raise DomainError("lune half-width must lie in (0, pi/2)")
    space = SpaceSpec(1, 2)
    return StarBody(space, LuneProfile(float(w), np.asarray(axis, dtype=float)), symmetric=True)


def make_bumpy_ball(space: SpaceSpec, r0: float, centers, amplitudes, sharpness,
                    symmetric: bool = False, margin: float = 0.05) -> StarBody:
    """Ball plus smooth zonal bumps, clipped to the valid radius range."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    amplitudes = np.asarray(amplitudes, dtype=float)
    sharpness = np.asarray(sharpness, dtype=float)
    if symmetric:
        centers = np.vstack([centers, -centers])
        amplitudes = np.concatenate([amplitudes, amplitudes])
        sharpness = np.concatenate([sharpness, sharpness])
    hi = HEMISPHERE_MAX_RADIUS - margin if space.delta == 1 else math.inf
    profile = BumpyProfile(float(r0), centers, amplitudes, sharpness, lo=margin, hi=hi)
    return StarBody(space, profile, symmetric=symmetric)


def make_symmetric_polygon_body(offsets, angles) -> StarBody:
    """Origin-symmetric convex body in the 2-hemisphere from gnomonic strips."""
    offsets = np.asarray(offsets, dtype=float)
    angles = np.asarray(angles, dtype=float)
    if np.any(offsets <= 0):
        raise DomainError("strip offsets must be positive")
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    return StarBody(SpaceSpec(1, 2), PolygonProfile(normals, offsets), symmetric=True)


def make_perturbed_ball(space: SpaceSpec, r: float, beta: float, k: int, axis=None,
                        rule: SphereRule | None = None) -> StarBody:
    """Volume-matched harmonic perturbation of a centered hemisphere ball.

    rho = r + alpha + beta * H_k with alpha solved so that the quadrature
    volume equals the ball volume to 1e-10 relative.  The exact root solve is
    used rather than the first-order expansion of alpha: the sign experiment
    downstream needs the volumes matched to machine precision.
    """
    if space.delta != 1:
        raise DomainError("perturbed balls are hemisphere constructions")
    if k < 2 or k % 2 != 0:
        raise DomainError("the harmonic degree must be even and >= 2")
    space.check_radius(r)
    n = space.dim
    if axis is None:
        axis = np.zeros(n)
        axis[-1] = 1.0
    if rule is None:
        rule = build_sphere_rule(n - 1, max(default_degree(n - 1), 2 * k + 12))
    harmonic = zonal_harmonic(n, k, axis)

    hvals = harmonic(rule.nodes)
    ball_vol = float(np.dot(rule.weights, phi(space, n, np.full(len(rule), r))))
    span = abs(beta) * float(np.max(np.abs(hvals))) + 1e-9
    if r - 2 * span <= 0 or r + 2 * span >= HEMISPHERE_MAX_RADIUS:
        raise DomainError("perturbation leaves the open radius range (0, pi/2)")

    def vol_gap(alpha):
        rho = r + alpha + beta * hvals
        if np.any(rho <= 0) or np.any(rho >= HEMISPHERE_MAX_RADIUS):
            raise DomainError("perturbation leaves the open radius range (0, pi/2)")
        return float(np.dot(rule.weights, phi(space, n, rho))) - ball_vol

    if beta == 0.0:
        alpha = 0.0
    else:
        try:
            alpha = brentq(vol_gap, -span, span, xtol=1e-15, rtol=1e-15)
        except DomainError:
            raise
        except ValueError as exc:
            raise SolverError(f"volume-matching alpha not bracketed: {exc}") from exc
    body = StarBody(space, HarmonicPerturbedProfile(float(r), float(alpha), float(beta), harmonic),
                    symmetric=True)
    gap = abs(vol_gap(alpha))
    if gap > 1e-10 * ball_vol:
        raise SolverError(f"volume matching achieved only {gap:.2e}")
    return body


def perturbation_norms(body: StarBody, rule: SphereRule | None = None):
    """(L2, sup) norms of the radial perturbation f = rho - r over rule nodes."""
    profile = body.profile
    if not isinstance(profile, HarmonicPerturbedProfile):
        raise ApplicabilityError("norms are defined for perturbed-ball bodies")
    if rule is None:
        rule = build_sphere_rule(body.space.dim - 1, max(default_degree(body.space.dim - 1),
                                                         2 * profile.harmonic.degree + 12))
    f = profile.perturbation(rule.nodes)
    l2 = math.sqrt(float(np.dot(rule.weights, f ** 2)))
    return l2, float(np.max(np.abs(f)))


# ---------------------------------------------------------------------------
# the alternating-strip subset of a cap


def _strip_bounds(alpha: float, delta: float, gamma: float, nstrips: int):
    k = np.arange(1, nstrips + 1)
    los = alpha + (k - gamma) * delta
    his = np.minimum(alpha + k * delta, 1.0)
    keep = los < 1.0
    return los[keep], his[keep]


def _striped_base(axis, alpha: float, delta: float, lam: float, cap_measure: float) -> BandsBase:
    """Strips of pitch delta inside the cap, with the keep fraction gamma tuned
    so that the total measure is lam * cap_measure."""
    n = len(axis)
    nstrips = int(math.floor((1.0 - alpha) / delta)) + 1

    def measure_gap(gamma):
        los, his = _strip_bounds(alpha, delta, gamma, nstrips)
        return float(np.sum(sphere_band_measure(n - 1, los, his))) - lam * cap_measure

    gamma = brentq(measure_gap, 0.0, 1.0, xtol=1e-15, rtol=1e-15)
    los, his = _strip_bounds(alpha, delta, gamma, nstrips)
    return BandsBase(np.asarray(axis, dtype=float), los, his,
                     meta={"alpha": alpha, "delta": delta, "gamma": gamma, "lam": lam,
                           "cap_measure": cap_measure})


def striped_cap_subset(alpha: float, axis, lam: float, eps: float) -> BandsBase:
    """Subset A of the cap C = {<x, u> >= alpha} with |A| = lam |C| whose
    great-subsphere sections satisfy |A cut xi| <= lam |C cut xi| + eps.

    The construction partitions the cap into narrow strips of pitch delta and
    keeps a tuned fraction of each.  The pitch is chosen from the explicit
    error budget: c2 * delta (+ an arcsine edge term when n = 3) <= eps.
    """
    axis = as_direction(np.asarray(axis, dtype=float))
    n = len(axis)
    if n < 3:
        raise DomainError("strip subsets require ambient dimension >= 3")
    if not 0.0 < alpha < 1.0:
        raise DomainError("cap height must lie in (0, 1)")
    if not 0.0 < lam < 1.0:
        raise DomainError("the fraction lam must lie in (0, 1)")
    if eps <= 0.0:
        raise DomainError("eps must be positive")

    cap = spherical_cap_measure(n - 1, alpha)
    f_alpha = sphere_surface_area(n - 2) * (1.0 - alpha ** 2) ** ((n - 3) / 2.0)
    c2 = 2.0 * lam * f_alpha / cap * sphere_surface_area(n - 2)

    def budget_ok(delta):
        extra = 2.0 * math.acos(max(-1.0, 1.0 - delta / alpha)) if n == 3 else 0.0
        return c2 * delta + extra <= eps

    delta = min((1.0 - alpha) / 4.0, alpha / 2.0, cap / (2.0 * f_alpha), eps / (2.0 * c2))
    while not budget_ok(delta):
        delta /= 2.0
        if delta < 1e-12:
            raise PitchSelectionError("eps is below float-resolvable strip pitch")
    return _striped_base(axis, alpha, delta, lam, cap)


def section_bound_margin(base: BandsBase, xis) -> float:
    """max over xis of |A cut xi| - lam |C cut xi|; <= eps by construction."""
    meta = base.meta
    cap = cap_base(base.axis, meta["alpha"])
    a_sec = base.section_measures(xis)
    c_sec = cap.section_measures(xis)
    return float(np.max(a_sec - meta["lam"] * c_sec))


def make_striped_cone(space: SpaceSpec, t: float, alpha: float, eps: float) -> StarBody:
    """Origin-symmetric cone over A union -A, A an alternating-strip cap subset,
    of volume t * vol(hemisphere)."""
    if space.delta != 1:
        raise DomainError("striped cones live on the hemisphere")
    if not 0.0 < t < 1.0:
        raise DomainError("the volume fraction t must lie in (0, 1)")
    n = space.dim
    sphere = sphere_surface_area(n - 1)
    cap = spherical_cap_measure(n - 1, alpha)
    if cap <= t / 2.0 * sphere:
        raise DomainError("cap too small: need |C_alpha| > (t/2) |S^{n-1}|")
    lam = t * sphere / (2.0 * cap)
    axis = np.zeros(n)
    axis[0] = 1.0
    a_part = striped_cap_subset(alpha, axis, lam, eps)
    base = a_part.union_disjoint(a_part.reflected())
    base.meta.update(a_part.meta)
    body = make_cone(space, base)
    return body


def make_vanishing_body(space: SpaceSpec, volume: float, eta: float,
                        cap_height: float = 0.6, pitch: float = 1e-4) -> StarBody:
    """Origin-symmetric star-shaped set of the given volume in R^n or H^n whose
    section functional is at most eta.

    rho = r on A union -A and 0 otherwise, with A an alternating-strip subset
    of a fixed cap; r grows until the exactly-computed functional drops below
    eta (the section-to-volume primitive ratio decays to 0 in r).
    """
    if space.delta not in (0, -1):
        raise DomainError("the vanishing construction lives in R^n or H^n")
    if space.dim < 3:
        raise DomainError("dimension must be >= 3")
    if volume <= 0 or eta <= 0:
        raise DomainError("volume and eta must be positive")
    n = space.dim
    sphere = sphere_surface_area(n - 1)
    cap = spherical_cap_measure(n - 1, cap_height)
    axis = np.zeros(n)
    axis[0] = 1.0
    outer = build_sphere_rule(n - 1, default_degree(n - 1))

    r = 1.0
    while True:
        if phi(space, n, r) > volume / (2.0 * cap):
            lam = volume / (2.0 * phi(space, n, r) * cap)
            a_part = _striped_base(axis, cap_height, pitch, lam, cap)
            base = a_part.union_disjoint(a_part.reflected())
            # the base already contains the reflection, so no extra factor of 2
            sections = phi(space, n - 1, r) * base.section_measures(outer.nodes)
            functional = float(np.dot(outer.weights, sections ** n))
            if functional <= eta:
                body = StarBody(space, IndicatorProfile(base, float(r)), symmetric=True)
                return body
        r *= 1.6
        if r > 320.0:
            raise ResourceLimitError("radius cap reached before the functional fell below eta")


# ---------------------------------------------------------------------------
# spherical convexity (numerical verdict)


def is_convex_spherical(body: StarBody, samples: int = 800, seed: int = 0,
                        tol: float = 1e-9) -> bool:
    """Midpoint-convexity verdict for a hemisphere body.

    Boundary points are embedded in the unit sphere of R^{n+1}; for random
    pairs the chord midpoint must again lie inside the body's cone.  This is
    the gnomonic-image convexity test written pole-safe, so profiles touching
    rho = pi/2 (cones, lunes) are handled by the same predicate.
    """
    if body.space.delta != 1:
        raise DomainError("spherical convexity applies to hemisphere bodies")
    n = body.space.dim
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(samples, n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = rng.normal(size=(samples, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)

    def embed(dirs):
        r = np.clip(body.rho(dirs), 0.0, HEMISPHERE_MAX_RADIUS)
        return np.column_stack([np.sin(r)[:, None] * dirs, np.cos(r)])

    p = embed(u)
    q = embed(v)
    mid = 0.5 * (p + q)
    norms = np.linalg.norm(mid, axis=1)
    ok = norms > 1e-12
    mid = mid[ok] / norms[ok, None]
    psi = np.arccos(np.clip(mid[:, -1], -1.0, 1.0))
    horiz = np.linalg.norm(mid[:, :-1], axis=1)
    nontrivial = horiz > 1e-12
    w = mid[nontrivial, :-1] / horiz[nontrivial, None]
    allowed = body.rho(w)
    return bool(np.all(psi[nontrivial] <= allowed + tol))


# ---------------------------------------------------------------------------
# inverse angular area (plane-hemisphere regions)


@dataclass(frozen=True)
class AngularRegion:
    """Connected difference-of-star-bodies region in the 2-hemisphere.

    Described by inner and outer radial callables of the polar angle; the
    angular volume density is cos(rho_inner) - cos(rho_outer), clipped at 0.
    """

    outer: object
    inner: object

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.maximum(np.cos(self.inner(theta)) - np.cos(self.outer(theta)), 0.0)


def region_between(rho_inner, rho_outer) -> AngularRegion:
    return AngularRegion(rho_outer, rho_inner)


def region_over_arc(a: float, b: float, height: float = HEMISPHERE_MAX_RADIUS) -> AngularRegion:
    """The cone-type region over the arc [a, b] (uniform angular density)."""

    def outer(theta):
        theta = np.asarray(theta, dtype=float) % TWO_PI
        inside = (theta >= a % TWO_PI) & (theta <= (a % TWO_PI) + (b - a))
        return np.where(inside, height, 0.0)

    return AngularRegion(outer, lambda theta: np.zeros_like(np.asarray(theta, dtype=float)))


class InverseAngularArea:
    """Monotone counterclockwise map [0, 1] -> S^1 inverting normalized angular volume."""

    def __init__(self, thetas: np.ndarray, cumulative: np.ndarray, x0: float):
        self._thetas = thetas
        self._cum = cumulative
        self.x0 = x0
        self.support = (float(thetas[0]), float(thetas[-1]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t < -1e-12) | (t > 1 + 1e-12)):
            raise DomainError("the parameter must lie in [0, 1]")
        out = np.interp(np.clip(t, 0.0, 1.0), self._cum, self._thetas)
        return out if out.ndim else float(out)

    def forward(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.interp(theta, self._thetas, self._cum)
        return out if out.ndim else float(out)


def _bisect_support_edge(density, inside: float, outside: float, tol: float) -> float:
    """Angle where the density first exceeds tol between outside and inside."""
    for _ in range(60):
        mid = 0.5 * (inside + outside)
        if float(density(np.array([mid]))[0]) > tol:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def inverse_angular_area(region: AngularRegion, x0=None, grid: int = 1 << 14,
                         fine: int = 1 << 17) -> InverseAngularArea:
    """Inverse of f(x) = vol(region cut by cone(x0, x)) / vol(region).

    ``x0`` (an angle or unit 2-vector) must avoid the angular support; when
    omitted it is placed in the complementary gap automatically.  Support
    endpoints are refined by bisection, and the cumulative volume is
    accumulated on a fine grid aligned with the support, so the forward map
    composed with the inverse is the identity to well below 1e-8.
    """
    thetas = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    dens = region.density(thetas)
    total_vol = float(np.sum(dens)) * (TWO_PI / grid)
    if total_vol <= 0:
        raise DomainError("region must have positive volume")
    tol = 1e-12 * float(np.max(dens))
    occupied = dens > tol

    if x0 is None:
        if np.all(occupied):
            start_idx = 0
        else:
            # start inside the longest empty run (wrap-aware)
            empty = ~occupied
            idx = np.nonzero(empty)[0]
            runs = np.split(idx, np.nonzero(np.diff(idx) > 1)[0] + 1)
            if empty[0] and empty[-1] and len(runs) > 1:
                runs[0] = np.concatenate([runs[-1] - grid, runs[0]])
                runs = runs[:-1]
            longest = max(runs, key=len)
            start_idx = int(longest[len(longest) // 2]) % grid
    else:
        angle = float(np.arctan2(x0[1], x0[0]) % TWO_PI) if np.ndim(x0) else float(x0) % TWO_PI
        start_idx = int(round(angle / TWO_PI * grid)) % grid
        if occupied[start_idx]:
            raise DomainError("x0 must lie outside the angular support of the region")

    origin = start_idx * TWO_PI / grid
    dens = np.roll(dens, -start_idx)
    occupied = dens > tol
    support = np.nonzero(occupied)[0]
    lo, hi = support[0], support[-1]
    if np.any(~occupied[lo : hi + 1]):
        raise NonInjectiveRegionError(
            "angular density vanishes on an interior interval; the cumulative "
            "volume is not injective"
        )

    def shifted_density(theta):
        return region.density(np.asarray(theta) + origin)

    h = TWO_PI / grid
    theta_lo = lo * h
    theta_hi = hi * h
    if lo > 0:
        theta_lo = _bisect_support_edge(shifted_density, lo * h, (lo - 1) * h, tol)
    if hi < grid - 1:
        theta_hi = _bisect_support_edge(shifted_density, hi * h, (hi + 1) * h, tol)

    fine_theta = np.linspace(theta_lo, theta_hi, fine + 1)
    step = (theta_hi - theta_lo) / fine
    # midpoint-rule accumulation: exact for indicator densities (no half-cell
    # loss at the jump edges), O(step^2) for smooth ones
    mid_dens = shifted_density(fine_theta[:-1] + step / 2.0)
    cum = np.concatenate([[0.0], np.cumsum(mid_dens * step)])
    cum /= cum[-1]
    cum = np.maximum.accumulate(cum)
    # canonical angles: support start in [0, 2 pi), map stays monotone (it may
    # pass 2 pi when the support wraps the zero direction)
    out_theta = fine_theta + origin
    out_theta -= TWO_PI * math.floor(out_theta[0] / TWO_PI)
    return InverseAngularArea(out_theta, cum, origin % TWO_PI)
