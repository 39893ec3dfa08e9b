"""Intrinsic geometry on the 3-sphere.

Great-circle arcs, hyperspherical coordinates, hyperspherical tetrahedra
and hexahedra, circumscribed 2-spheres, and the spherical inversion of
the equatorial 3-space realized as two stereographic projections from
antipodal poles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .geometry4 import (
    AXES,
    EPS_GEOM,
    INFINITY,
    DegenerateInput,
    ExtendedPoint3,
    Hyperplane3,
    Sphere2in4,
    Sphere3,
    as_point4,
    axis_aligned_basis,
    hyperplane_through,
    is_infinite,
    ray_sphere_intersect,
    section_sphere,
)
from .projections import ON_SPHERE_TOL, NotOnSphere, ProjectionFrame


class AntipodalPair(ValueError):
    """Two antipodal points admit no unique great circle."""


class CoincidentPoints(ValueError):
    """Two points expected distinct coincide."""


class EmptyRange(ValueError):
    """A coordinate range with empty interior."""


def _require_on_sphere(sphere: Sphere3, p: np.ndarray):
    dev = abs(np.linalg.norm(p - sphere.center) - sphere.radius)
    if dev > ON_SPHERE_TOL:
        raise NotOnSphere(f"point deviates from the sphere by {dev:.3e}")


def antipode(sphere: Sphere3, a) -> np.ndarray:
    """Mirror image of a sphere point about the center."""
    p = as_point4(a)
    _require_on_sphere(sphere, p)
    return 2.0 * sphere.center - p


@dataclass(frozen=True)
class HypersphericalCoords:
    """Angles (psi, theta, phi) of the hyperspherical chart, in radians."""

    psi: float
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.psi <= np.pi:
            raise ValueError("psi must lie in [0, pi]")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("theta must lie in [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError("phi must lie in [0, 2*pi)")


def hyperspherical_point(sphere: Sphere3, c: HypersphericalCoords) -> np.ndarray:
    """Chart point; the pole (psi = 0) sits at maximal w."""
    return _chart(sphere, c.psi, c.theta, c.phi)


def _chart(sphere: Sphere3, psi, theta, phi) -> np.ndarray:
    psi, theta, phi = np.broadcast_arrays(
        np.asarray(psi, float), np.asarray(theta, float), np.asarray(phi, float)
    )
    sp = np.sin(psi)
    unit = np.stack(
        [
            sp * np.sin(theta) * np.cos(phi),
            sp * np.sin(theta) * np.sin(phi),
            sp * np.cos(theta),
            np.cos(psi),
        ],
        axis=-1,
    )
    return sphere.center + sphere.radius * unit


@dataclass(frozen=True)
class GreatCircleArc:
    """Minor arc of a great circle, parameterized by angle from `start`.

    `basis` spans the circle's plane through the center: row 0 points to
    `start`, row 1 is the in-plane normal toward `end`.
    """

    sphere: Sphere3
    start: np.ndarray
    end: np.ndarray
    basis: np.ndarray
    sweep: float

    def point_at(self, angle) -> np.ndarray:
        angle = np.asarray(angle, dtype=float)
        unit = np.cos(angle)[..., None] * self.basis[0] + np.sin(angle)[..., None] * self.basis[1]
        return self.sphere.center + self.sphere.radius * unit

    def sample(self, n: int) -> np.ndarray:
        """n + 1 uniform-angle samples with exact endpoints, shape (n+1, 4)."""
        pts = self.point_at(np.linspace(0.0, self.sweep, n + 1))
        pts[0] = self.start
        pts[-1] = self.end
        return pts


def great_arc(sphere: Sphere3, a, b) -> GreatCircleArc:
    """The minor great-circle arc between two sphere points."""
    a = as_point4(a)
    b = as_point4(b)
    _require_on_sphere(sphere, a)
    _require_on_sphere(sphere, b)
    u = (a - sphere.center) / sphere.radius
    v = (b - sphere.center) / sphere.radius
    if np.linalg.norm(a - b) <= EPS_GEOM * max(sphere.radius, 1.0):
        raise CoincidentPoints("arc endpoints coincide")
    w = v - float(u @ v) * u
    norm = np.linalg.norm(w)
    if norm <= EPS_GEOM:
        raise AntipodalPair("antipodal points admit no unique great circle")
    w = w / norm
    sweep = float(np.arctan2(norm, float(u @ v)))
    return GreatCircleArc(sphere, a, b, np.stack([u, w]), sweep)


@dataclass(frozen=True)
class SphericalTetrahedron:
    """Four sphere points joined by the six minor arcs between them."""

    sphere: Sphere3
    vertices: tuple
    edges: tuple  # six (i, j, GreatCircleArc) in lexicographic vertex order


def tetrahedron(sphere: Sphere3, a, b, c, d) -> SphericalTetrahedron:
    verts = tuple(as_point4(p) for p in (a, b, c, d))
    hyperplane_through(*verts)  # raises DegenerateInput when cospatial
    edges = []
    for i in range(4):
        for j in range(i + 1, 4):
            edges.append((i, j, great_arc(sphere, verts[i], verts[j])))
    return SphericalTetrahedron(sphere, verts, tuple(edges))


def circumsphere2(sphere: Sphere3, a, b, c, d) -> Sphere2in4:
    """The 2-sphere through four noncospatial sphere points."""
    for p in (a, b, c, d):
        _require_on_sphere(sphere, as_point4(p))
    return section_sphere(sphere, hyperplane_through(a, b, c, d))


@dataclass(frozen=True)
class HexaEdge:
    """A hexahedron edge: one chart coordinate varies, two are fixed."""

    varying: str  # "psi" | "theta" | "phi"
    interval: tuple
    fixed: dict

    def sample(self, sphere: Sphere3, n: int) -> np.ndarray:
        t = np.linspace(self.interval[0], self.interval[1], n + 1)
        coords = {self.varying: t, **self.fixed}
        return _chart(sphere, coords["psi"], coords["theta"], coords["phi"])


@dataclass(frozen=True)
class HexaFace:
    """A hexahedron face: one chart coordinate fixed, two range freely."""

    fixed_name: str
    fixed_value: float
    free: dict  # name -> (lo, hi)

    def sample(self, sphere: Sphere3, m: int, n: int) -> np.ndarray:
        names = list(self.free)
        u = np.linspace(*self.free[names[0]], m + 1)
        v = np.linspace(*self.free[names[1]], n + 1)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        coords = {self.fixed_name: self.fixed_value, names[0]: uu, names[1]: vv}
        return _chart(sphere, coords["psi"], coords["theta"], coords["phi"])


@dataclass(frozen=True)
class Hexahedron:
    sphere: Sphere3
    corners: np.ndarray  # (8, 4)
    edges: tuple  # 12 HexaEdge
    faces: tuple  # 6 HexaFace


_HEXA_DOMAIN = {"psi": (0.0, np.pi), "theta": (0.0, np.pi), "phi": (0.0, 2.0 * np.pi)}


def hexahedron(sphere: Sphere3, psi_range, theta_range, phi_range) -> Hexahedron:
    """Hyperspherical hexahedron spanned by three coordinate intervals."""
    ranges = {"psi": tuple(map(float, psi_range)),
              "theta": tuple(map(float, theta_range)),
              "phi": tuple(map(float, phi_range))}
    for name, (lo, hi) in ranges.items():
        dlo, dhi = _HEXA_DOMAIN[name]
        if hi <= lo or lo < dlo or hi > dhi:
            raise EmptyRange(f"{name} range [{lo}, {hi}] has empty interior")
    names = ("psi", "theta", "phi")
    corners = []
    for i in range(2):
        for j in range(2):
            for k in range(2):
                c = {"psi": ranges["psi"][i], "theta": ranges["theta"][j],
                     "phi": ranges["phi"][k]}
                corners.append(_chart(sphere, c["psi"], c["theta"], c["phi"]))
    edges = []
    for varying in names:
        others = [n for n in names if n != varying]
        for i in range(2):
            for j in range(2):
                edges.append(HexaEdge(
                    varying, ranges[varying],
                    {others[0]: ranges[others[0]][i],
                     others[1]: ranges[others[1]][j]}))
    faces = []
    for fixed in names:
        others = [n for n in names if n != fixed]
        for i in range(2):
            faces.append(HexaFace(fixed, ranges[fixed][i],
                                  {n: ranges[n] for n in others}))
    return Hexahedron(sphere, np.array(corners), tuple(edges), tuple(faces))


# --- Spherical inversion -------------------------------------------------

def inversion_axis(frame: ProjectionFrame) -> int:
    """Coordinate index of the pole axis (the Omega non-shared axis)."""
    return AXES.index(frame.omega_fold)


def sigma_hyperplane(sphere: Sphere3, frame: ProjectionFrame) -> Hyperplane3:
    """The equatorial 3-space through the center, perpendicular to the pole."""
    idx = inversion_axis(frame)
    normal = np.zeros(4)
    normal[idx] = 1.0
    return Hyperplane3(normal, float(sphere.center[idx]))


def spherical_inversion(sphere: Sphere3, frame: ProjectionFrame, a):
    """Inversion of the equatorial 3-space about the great 2-sphere gamma.

    Composition of a stereographic projection from the pole N onto the
    sphere and a projection from the antipodal pole S back into the
    equatorial 3-space.  Satisfies |AZ| |A'Z| = r^2 with the image on the
    ray from the center through A; the center and INFINITY swap.
    """
    idx = inversion_axis(frame)
    z = sphere.center
    r = sphere.radius
    if is_infinite(a):
        return z.copy()
    p = as_point4(a)
    if abs(p[idx] - z[idx]) > ON_SPHERE_TOL * max(r, 1.0):
        raise ValueError("point does not lie in the equatorial 3-space")
    if np.linalg.norm(p - z) <= EPS_GEOM * max(r, 1.0):
        return INFINITY
    e = np.zeros(4)
    e[idx] = 1.0
    n = z + r * e
    s = z - r * e
    # Leg 1: line N -> A meets the sphere again in the lifted point.
    d = p - n
    d = d / np.linalg.norm(d)
    hits = ray_sphere_intersect(n, d, sphere)
    _, lifted = max(hits, key=lambda h: abs(h[0]))
    # Leg 2: line S -> lifted point meets the equatorial 3-space.
    denom = lifted[idx] - s[idx]
    t = (z[idx] - s[idx]) / denom
    return s + t * (lifted - s)


@dataclass(frozen=True)
class CurveImage:
    """Pointwise image of a sampled curve, split where it passes INFINITY."""

    pieces: tuple  # tuple of (n, 4) arrays
    split_at_infinity: bool


def _invert_samples(sphere, frame, samples) -> CurveImage:
    pieces: List[np.ndarray] = []
    current: List[np.ndarray] = []
    split = False
    for p in samples:
        img = spherical_inversion(sphere, frame, p)
        if is_infinite(img):
            split = True
            if len(current) >= 2:
                pieces.append(np.array(current))
            current = []
        else:
            current.append(img)
    if len(current) >= 2:
        pieces.append(np.array(current))
    return CurveImage(tuple(pieces), split)


def euclidean_circumsphere(frame: ProjectionFrame, points) -> Tuple[np.ndarray, float]:
    """Circumsphere of four points of the equatorial 3-space.

    Returns (center in 4-space, radius); the points must not be coplanar
    within the 3-space.
    """
    pts = np.array([as_point4(p) for p in points])
    if pts.shape != (4, 4):
        raise ValueError("exactly four points required")
    idx = inversion_axis(frame)
    cols = [i for i in range(4) if i != idx]
    q = pts[:, cols]
    a = 2.0 * (q[1:] - q[0])
    b = (q[1:] ** 2).sum(axis=1) - (q[0] ** 2).sum()
    if np.linalg.cond(a) > 1e8:
        raise DegenerateInput("circumsphere of coplanar points is undefined")
    c3 = np.linalg.solve(a, b)
    center = np.zeros(4)
    center[cols] = c3
    center[idx] = pts[0, idx]
    radius = float(np.linalg.norm(pts[0] - center))
    return center, radius


@dataclass(frozen=True)
class InversionDemo:
    """Scene-ready data for the inversion of a tetrahedron in Sigma."""

    vertices: tuple  # four 4-D points
    vertex_images: tuple  # four ExtendedPoint3 (4-D points or INFINITY)
    edges: tuple  # six ((i, j), sampled segment (n, 4))
    edge_images: tuple  # six ((i, j), CurveImage)
    circumsphere_center: np.ndarray
    circumsphere_radius: float
    circumsphere_grid: np.ndarray  # (n_lat + 1, n_lon, 4) samples
    circumsphere_image_grid: np.ndarray  # same shape, inverted pointwise


def invert_tetrahedron_demo(
    sphere: Sphere3, frame: ProjectionFrame, a, b, c, d,
    edge_samples: int = 64, sphere_grid: tuple = (32, 16),
) -> InversionDemo:
    """Invert a Euclidean tetrahedron of the equatorial 3-space pointwise."""
    verts = tuple(as_point4(p) for p in (a, b, c, d))
    z = sphere.center
    for v in verts:
        if np.linalg.norm(v - z) <= EPS_GEOM:
            raise ValueError("vertices must differ from the center")
    images = tuple(spherical_inversion(sphere, frame, v) for v in verts)
    edges = []
    edge_images = []
    for i in range(4):
        for j in range(i + 1, 4):
            t = np.linspace(0.0, 1.0, edge_samples + 1)[:, None]
            seg = verts[i] * (1.0 - t) + verts[j] * t
            edges.append(((i, j), seg))
            edge_images.append(((i, j), _invert_samples(sphere, frame, seg)))
    center, radius = euclidean_circumsphere(frame, verts)
    idx = inversion_axis(frame)
    normal = np.zeros(4)
    normal[idx] = 1.0
    carrier = Hyperplane3(normal, float(center[idx]))
    circ = Sphere2in4(center, radius, carrier)
    grid = circ.grid_points(*sphere_grid)
    image_grid = np.empty_like(grid)
    for i in range(grid.shape[0]):
        for j in range(grid.shape[1]):
            img = spherical_inversion(sphere, frame, grid[i, j])
            # A circumsphere through the center is excluded by the vertex
            # precondition only up to sampling; guard regardless.
            image_grid[i, j] = img if not is_infinite(img) else np.nan
    return InversionDemo(verts, images, tuple(edges), tuple(edge_images),
                         center, radius, grid, image_grid)
