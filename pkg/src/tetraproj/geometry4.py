"""Foundational 4-D linear algebra: points, hyperplanes, and sphere types.

Coordinates live in an orthogonal (x, y, z, w) system.  Points are plain
numpy arrays of shape (4,) (or (3,) in the modeling 3-space); the richer
objects below are small immutable dataclasses built on top of them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

# Geometric predicates absorb only rounding noise (all constructions are
# closed-form), normalization checks are held tighter.
EPS_GEOM = 1e-9
EPS_NORM = 1e-12
# Four points are rejected as "cospatial" when the difference-vector system
# is conditioned worse than this.
COND_MAX = 1e8

AXES = ("x", "y", "z", "w")


class DegenerateInput(ValueError):
    """Points span an affine subspace of too small a dimension."""


class PointAtInfinity:
    """The symbolic point at infinity of the extended modeling space."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = PointAtInfinity()

#: A point of the extended modeling space: a finite (3,) array or INFINITY.
ExtendedPoint3 = Union[np.ndarray, PointAtInfinity]


def is_infinite(p) -> bool:
    return isinstance(p, PointAtInfinity)


def as_point4(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (4,):
        raise ValueError(f"expected a 4-D point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("4-D point has non-finite coordinates")
    return a


def as_point3(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-D point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("3-D point has non-finite coordinates")
    return a


def _canonical_normal(normal: np.ndarray, offset: float):
    """Flip sign so the first nonzero normal component is positive."""
    for c in normal:
        if abs(c) > EPS_NORM:
            if c < 0.0:
                return -normal, -offset
            break
    return normal, offset


@dataclass(frozen=True)
class Hyperplane3:
    """A 3-space in 4-space: { X : normal . X = offset }, |normal| = 1."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_point4(self.normal)
        norm = float(np.linalg.norm(n))
        if norm < EPS_NORM:
            raise ValueError("hyperplane normal must be nonzero")
        off = float(self.offset) / norm
        n = n / norm
        n, off = _canonical_normal(n, off)
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", off)

    def signed_distance(self, p) -> float:
        return float(self.normal @ as_point4(p) - self.offset)

    def contains(self, p, tol: float = EPS_GEOM) -> bool:
        return abs(self.signed_distance(p)) <= tol

    def basis(self) -> np.ndarray:
        """Orthonormal in-plane basis (3, 4), axis-aligned where possible."""
        return axis_aligned_basis(self.normal)


@dataclass(frozen=True)
class Sphere3:
    """A 3-sphere: points at distance radius from center in 4-space."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point4(self.center)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0.0:
            raise ValueError("3-sphere radius must be positive")

    def contains(self, p, tol: float = EPS_GEOM) -> bool:
        return abs(np.linalg.norm(as_point4(p) - self.center) - self.radius) <= tol


@dataclass(frozen=True)
class Sphere2in4:
    """A 2-sphere embedded in a hyperplane (its carrier) of 4-space."""

    center: np.ndarray
    radius: float
    carrier: Hyperplane3

    def __post_init__(self):
        c = as_point4(self.center)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius < 0.0:
            raise ValueError("2-sphere radius must be nonnegative")
        if not self.carrier.contains(c):
            raise ValueError("carrier hyperplane does not contain the center")

    def sample_points(self, count: int) -> np.ndarray:
        """Quasi-uniform samples, shape (count, 4), via a Fibonacci spiral."""
        i = np.arange(count, dtype=float)
        if count > 1:
            cos_t = 1.0 - 2.0 * (i + 0.5) / count
        else:
            cos_t = np.zeros(1)
        sin_t = np.sqrt(np.clip(1.0 - cos_t**2, 0.0, None))
        golden = np.pi * (3.0 - np.sqrt(5.0))
        ang = golden * i
        unit3 = np.stack([sin_t * np.cos(ang), sin_t * np.sin(ang), cos_t], axis=1)
        b = self.carrier.basis()
        return self.center + self.radius * unit3 @ b

    def grid_points(self, n_lon: int, n_lat: int) -> np.ndarray:
        """Latitude/longitude grid of shape (n_lat + 1, n_lon, 4)."""
        theta = np.linspace(0.0, np.pi, n_lat + 1)
        phi = np.linspace(0.0, 2.0 * np.pi, n_lon, endpoint=False)
        st, ct = np.sin(theta), np.cos(theta)
        unit3 = np.empty((n_lat + 1, n_lon, 3))
        unit3[..., 0] = st[:, None] * np.cos(phi)[None, :]
        unit3[..., 1] = st[:, None] * np.sin(phi)[None, :]
        unit3[..., 2] = ct[:, None]
        b = self.carrier.basis()
        return self.center + self.radius * unit3 @ b


def axis_aligned_basis(direction) -> np.ndarray:
    """Orthonormal basis of the 3-space orthogonal to `direction`.

    Rows are produced by Gram-Schmidt over the standard axes in (x, y, z, w)
    order, so for an axis-aligned direction the basis is exactly the three
    remaining coordinate axes.
    """
    u = as_point4(direction)
    u = u / np.linalg.norm(u)
    rows = []
    for i in range(4):
        v = np.zeros(4)
        v[i] = 1.0
        v -= (v @ u) * u
        for r in rows:
            v -= (v @ r) * r
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            rows.append(v / norm)
        if len(rows) == 3:
            break
    return np.array(rows)


def hyperplane_through(a, b, c, d) -> Hyperplane3:
    """The unique hyperplane through four affinely independent points."""
    a = as_point4(a)
    m = np.stack([as_point4(b) - a, as_point4(c) - a, as_point4(d) - a])
    _, s, vt = np.linalg.svd(m)
    if s[0] < EPS_NORM or s[2] < s[0] / COND_MAX:
        raise DegenerateInput(
            "points span an affine subspace of dimension < 3 "
            f"(singular values {s})"
        )
    normal = vt[3]
    return Hyperplane3(normal, float(normal @ a))


def ray_sphere_intersect(origin, direction, sphere: Sphere3):
    """Real intersections of the line origin + t*direction with a 3-sphere.

    Returns a list of (t, point) sorted by t: empty for a miss, one entry
    for a tangency, two for a proper intersection.
    """
    o = as_point4(origin)
    d = as_point4(direction)
    if abs(np.linalg.norm(d) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    oc = o - sphere.center
    b = float(d @ oc)
    c = float(oc @ oc) - sphere.radius**2
    disc = b * b - c
    scale = max(sphere.radius**2, 1.0)
    if disc < -EPS_GEOM * scale:
        return []
    if disc <= EPS_GEOM * scale:
        t = -b
        return [(t, o + t * d)]
    sq = np.sqrt(disc)
    out = []
    for t in sorted((-b - sq, -b + sq)):
        out.append((t, o + t * d))
    return out


def section_sphere(sphere: Sphere3, cut: Hyperplane3):
    """Section of a 3-sphere by a hyperplane.

    Returns a Sphere2in4 (radius 0 for a tangency) or None when the cut
    misses the sphere.
    """
    h = cut.offset - float(cut.normal @ sphere.center)
    d = abs(h)
    r = sphere.radius
    if d > r + EPS_NORM:
        return None
    rad_sq = r * r - d * d
    radius = np.sqrt(rad_sq) if rad_sq > 0.0 else 0.0
    if abs(d - r) <= EPS_NORM:
        radius = 0.0
    center = sphere.center + h * cut.normal
    return Sphere2in4(center, radius, cut)
