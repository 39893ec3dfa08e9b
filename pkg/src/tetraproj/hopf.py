"""The Hopf map, fibers, Clelia curves, and Hopf tori.

All computation happens on the canonical unit 3-sphere at the origin; the
display placement (axis relabeling plus a translation of the center to
(0, 1, 0, 1)) is applied last.  The third component of the Hopf map is
x^2 + y^2 - z^2 - w^2, the unique sign choice consistent with the fiber
parametrization (cos psi = cos^2(psi/2) - sin^2(psi/2)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import cKDTree


class NotUnit(ValueError):
    """A vector expected on the unit sphere is not unit length."""


#: Center of the translated base 2-sphere carrying the Clelia curves.
CLELIA_CENTER = np.array([0.0, 1.0, 0.0])


def _require_unit(v: np.ndarray, tol: float = 1e-9):
    dev = np.abs(np.linalg.norm(v, axis=-1) - 1.0)
    worst = float(np.max(dev))
    if worst > tol:
        raise NotUnit(f"vector deviates from unit norm by {worst:.3e}")


def hopf_map(p) -> np.ndarray:
    """Base 2-sphere point of a unit 3-sphere point.  Accepts (..., 4)."""
    p = np.asarray(p, dtype=float)
    _require_unit(p)
    x, y, z, w = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    return np.stack(
        [2.0 * (x * z + y * w), 2.0 * (-x * w + y * z), x * x + y * y - z * z - w * w],
        axis=-1,
    )


@dataclass(frozen=True)
class BasePoint:
    """Spherical coordinates (psi, phi) of a point on the unit 2-sphere."""

    psi: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.psi <= np.pi:
            raise ValueError("psi must lie in [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError("phi must lie in [0, 2*pi)")

    def point(self) -> np.ndarray:
        sp = np.sin(self.psi)
        return np.array([sp * np.cos(self.phi), sp * np.sin(self.phi), np.cos(self.psi)])


@dataclass(frozen=True)
class FiberPoint:
    base: BasePoint
    beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 2.0 * np.pi:
            raise ValueError("beta must lie in [0, 2*pi)")


def hopf_fiber(psi, phi, beta) -> np.ndarray:
    """Point of the fiber over base (psi, phi) at fiber parameter beta.

    Arguments broadcast; the result has shape (..., 4) and unit norm.
    """
    psi, phi, beta = np.broadcast_arrays(
        np.asarray(psi, float), np.asarray(phi, float), np.asarray(beta, float)
    )
    ch = np.cos(psi / 2.0)
    sh = np.sin(psi / 2.0)
    return np.stack(
        [ch * np.cos(phi + beta), ch * np.sin(phi + beta),
         sh * np.cos(beta), sh * np.sin(beta)],
        axis=-1,
    )


def fiber_point(fp: FiberPoint) -> np.ndarray:
    return hopf_fiber(fp.base.psi, fp.base.phi, fp.beta)


def fiber_circle(base: BasePoint, n: int) -> np.ndarray:
    """n samples of the fiber over `base`, shape (n, 4)."""
    beta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return hopf_fiber(base.psi, base.phi, beta)


def base_to_angles(p) -> BasePoint:
    """Angles of a unit 2-sphere point; phi := 0 at the poles."""
    p = np.asarray(p, dtype=float)
    _require_unit(p)
    psi = float(np.arccos(np.clip(p[2], -1.0, 1.0)))
    if np.hypot(p[0], p[1]) < 1e-12:
        return BasePoint(psi, 0.0)
    phi = float(np.arctan2(p[1], p[0])) % (2.0 * np.pi)
    return BasePoint(psi, phi)


def _angles_many(pts: np.ndarray):
    psi = np.arccos(np.clip(pts[..., 2], -1.0, 1.0))
    phi = np.arctan2(pts[..., 1], pts[..., 0]) % (2.0 * np.pi)
    phi = np.where(np.hypot(pts[..., 0], pts[..., 1]) < 1e-12, 0.0, phi)
    return psi, phi


@dataclass(frozen=True)
class CleliaSpec:
    """A Clelia curve: longitude psi, colatitude s*psi, over psi in I."""

    s: float
    interval: Tuple[float, float]
    resolution: int = 256

    def __post_init__(self):
        lo, hi = self.interval
        if hi < lo:
            raise ValueError("interval must be nonempty")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")


def clelia(s: float, psi) -> np.ndarray:
    """Curve point on the translated base sphere (center (0, 1, 0))."""
    psi = np.asarray(psi, dtype=float)
    return np.stack(
        [np.sin(s * psi) * np.cos(psi),
         np.sin(s * psi) * np.sin(psi) + 1.0,
         np.cos(s * psi)],
        axis=-1,
    )


@dataclass(frozen=True)
class HopfTorus:
    """Quad grid of fiber points over a Clelia curve, canonical frame.

    vertices[i, j] is the fiber point at curve parameter psi_values[i] and
    fiber parameter beta_values[j].  The grid always wraps in beta and
    wraps in psi exactly when the curve closes over its interval.
    """

    spec: CleliaSpec
    psi_values: np.ndarray
    beta_values: np.ndarray
    vertices: np.ndarray  # (n_psi, n_beta, 4)
    closed_psi: bool

    def triangles(self) -> np.ndarray:
        """Flat (m, 3) triangle indices into the row-major vertex grid."""
        n_i, n_j = self.vertices.shape[:2]
        rows = n_i - (0 if self.closed_psi else 1)
        tris = []
        for i in range(rows):
            i1 = (i + 1) % n_i
            for j in range(n_j):
                j1 = (j + 1) % n_j
                a, b = i * n_j + j, i * n_j + j1
                c, d = i1 * n_j + j, i1 * n_j + j1
                tris.append((a, b, d))
                tris.append((a, d, c))
        return np.array(tris, dtype=int)


def hopf_torus(spec: CleliaSpec, beta_resolution: int) -> HopfTorus:
    """Torus of fibers over the Clelia curve of `spec`."""
    if beta_resolution < 2:
        raise ValueError("beta resolution must be at least 2")
    lo, hi = spec.interval
    psi_values = np.linspace(lo, hi, spec.resolution)
    curve = clelia(spec.s, psi_values) - CLELIA_CENTER
    psi_b, phi_b = _angles_many(curve)
    beta_values = np.linspace(0.0, 2.0 * np.pi, beta_resolution, endpoint=False)
    vertices = hopf_fiber(psi_b[:, None], phi_b[:, None], beta_values[None, :])
    closed = bool(np.linalg.norm(curve[0] - curve[-1]) < 1e-9)
    return HopfTorus(spec, psi_values, beta_values, vertices, closed)


@dataclass(frozen=True)
class HopfPlacement:
    """Display placement: relabel axes (swap y and z) then translate."""

    permutation: Tuple[int, int, int, int] = (0, 2, 1, 3)
    translation: Tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)

    def __post_init__(self):
        if sorted(self.permutation) != [0, 1, 2, 3]:
            raise ValueError("permutation must reorder the four axes")


def place_display(placement: HopfPlacement, p) -> np.ndarray:
    """Map canonical-frame points into the display frame.  Accepts (..., 4)."""
    p = np.asarray(p, dtype=float)
    return p[..., list(placement.permutation)] + np.asarray(placement.translation)


def self_intersection_fibers(
    spec: CleliaSpec, samples: int = 4096, min_separation: float = 1e-3
) -> List[Tuple[float, float]]:
    """Parameter pairs (psi1 < psi2) where the Clelia curve meets itself.

    Candidate pairs come from a dense sampling; each is polished by
    least-squares root finding on k(psi1) - k(psi2) and kept when the
    curve points coincide within 1e-9.  The fibers over a reported pair
    coincide as point sets because the base points coincide.
    """
    lo, hi = spec.interval
    if hi - lo <= 0.0:
        return []
    psi = np.linspace(lo, hi, samples)
    pts = clelia(spec.s, psi)
    step = (hi - lo) / (samples - 1)
    # Coarse radius: the curve's speed is bounded by |s| + 1 on the unit
    # sphere, so neighbors within 2 steps of arc length are candidates.
    radius = 2.0 * step * (abs(spec.s) + 1.0)
    tree = cKDTree(pts)
    found: List[Tuple[float, float]] = []

    def gap(a, b):
        return float(np.linalg.norm(clelia(spec.s, a) - clelia(spec.s, b)))

    # A closed interval makes the endpoints land on the same curve point;
    # that seam is not a self-intersection and must not be reported.
    closed = gap(lo, hi) < 1e-9

    for i, j in sorted(tree.query_pairs(radius)):
        if psi[j] - psi[i] < min_separation:
            continue
        if closed and psi[i] - lo < min_separation and hi - psi[j] < min_separation:
            continue
        res = least_squares(
            lambda q: clelia(spec.s, q[0]) - clelia(spec.s, q[1]),
            x0=[psi[i], psi[j]],
            bounds=([lo, lo], [hi, hi]),
            xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        a, b = sorted(res.x)
        if b - a < min_separation or gap(a, b) >= 1e-9:
            continue
        if closed and a - lo < min_separation and hi - b < min_separation:
            continue
        if any(abs(a - fa) < min_separation and abs(b - fb) < min_separation
               for fa, fb in found):
            continue
        found.append((a, b))
    return sorted(found)


def fiber_set_distance(base1: BasePoint, base2: BasePoint, n: int = 256) -> float:
    """Symmetric nearest-neighbor (Hausdorff) distance of two fiber circles."""
    p1 = fiber_circle(base1, n)
    p2 = fiber_circle(base2, n)
    d12, _ = cKDTree(p2).query(p1)
    d21, _ = cKDTree(p1).query(p2)
    return float(max(d12.max(), d21.max()))
