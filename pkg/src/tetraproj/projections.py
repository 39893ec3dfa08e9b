"""The two projection systems: double orthogonal and stereographic.

The double orthogonal projection folds two mutually perpendicular
projection 3-spaces (sharing a plane pi) into one modeling 3-space; every
4-D point gets a pair of conjugated images there.  The stereographic
projection maps a 3-sphere from a pole N onto the tangent hyperplane at
the antipode S, extended with a point at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry4 import (
    AXES,
    EPS_GEOM,
    INFINITY,
    ExtendedPoint3,
    Hyperplane3,
    Sphere2in4,
    Sphere3,
    as_point4,
    axis_aligned_basis,
    is_infinite,
    ray_sphere_intersect,
    section_sphere,
)

# A point deviating from the sphere by more than this is rejected outright.
ON_SPHERE_TOL = 1e-6


class NotOnSphere(ValueError):
    """A point expected on the sphere deviates from it too much."""


@dataclass(frozen=True)
class ProjectionFrame:
    """Axis conventions of a double orthogonal projection.

    The two projection 3-spaces share exactly two axes (the plane pi); the
    modeling coordinates are (pi1, pi2, fold), where the fold axis carries
    the non-shared axis of either image.  The Xi image negates its
    non-shared axis, the Omega image keeps its own positive ("w up, z
    down" in the default frame).
    """

    xi_axes: tuple
    omega_axes: tuple

    def __post_init__(self):
        for axes in (self.xi_axes, self.omega_axes):
            if len(axes) != 3 or any(a not in AXES for a in axes):
                raise ValueError(f"invalid axis triple {axes}")
        shared = [a for a in AXES if a in self.xi_axes and a in self.omega_axes]
        if len(shared) != 2:
            raise ValueError("projection 3-spaces must share exactly two axes")
        if self.xi_fold == self.omega_fold:
            raise ValueError("non-shared axes must be distinct")

    @property
    def pi_axes(self) -> tuple:
        return tuple(a for a in AXES if a in self.xi_axes and a in self.omega_axes)

    @property
    def xi_fold(self) -> str:
        return next(a for a in self.xi_axes if a not in self.omega_axes)

    @property
    def omega_fold(self) -> str:
        return next(a for a in self.omega_axes if a not in self.xi_axes)

    @property
    def pi_indices(self) -> tuple:
        return tuple(AXES.index(a) for a in self.pi_axes)

    def descriptor(self) -> dict:
        return {
            "xi": list(self.xi_axes),
            "omega": list(self.omega_axes),
            "pi": list(self.pi_axes),
            "negated": self.xi_fold,
        }


def standard_frame() -> ProjectionFrame:
    """Xi(x,y,z) upper, Omega(x,y,w) lower, pi(x,y), z folded down."""
    return ProjectionFrame(("x", "y", "z"), ("x", "y", "w"))


def hopf_frame() -> ProjectionFrame:
    """Xi(x,y,z) upper, Omega(x,z,w) lower, pi(x,z), y folded down."""
    return ProjectionFrame(("x", "y", "z"), ("x", "z", "w"))


@dataclass(frozen=True)
class ConjugatedImages:
    """The pair of images of a 4-D point in the modeling 3-space."""

    xi_image: np.ndarray
    omega_image: np.ndarray


def project_double(frame: ProjectionFrame, a) -> ConjugatedImages:
    """Conjugated images of a point; both share the pi coordinates."""
    p = as_point4(a)
    i1, i2 = frame.pi_indices
    xi = np.array([p[i1], p[i2], -p[AXES.index(frame.xi_fold)]])
    omega = np.array([p[i1], p[i2], p[AXES.index(frame.omega_fold)]])
    return ConjugatedImages(xi, omega)


def project_double_many(frame: ProjectionFrame, pts: np.ndarray):
    """Vectorized conjugated images for an (..., 4) array of points."""
    pts = np.asarray(pts, dtype=float)
    i1, i2 = frame.pi_indices
    xi = np.stack(
        [pts[..., i1], pts[..., i2], -pts[..., AXES.index(frame.xi_fold)]], axis=-1
    )
    omega = np.stack(
        [pts[..., i1], pts[..., i2], pts[..., AXES.index(frame.omega_fold)]], axis=-1
    )
    return xi, omega


@dataclass(frozen=True)
class StereoConfig:
    """A stereographic projection of a 3-sphere.

    Projects from the pole N on the sphere onto the hyperplane tangent at
    the antipode S.  Image coordinates are intrinsic to the target: origin
    at S, axes an orthonormal basis aligned with the coordinate axes.  If
    a frame is given, the basis vector seeded by the frame's folded axis
    is negated so images land in modeling-space orientation.
    """

    sphere: Sphere3
    pole: np.ndarray
    frame: Optional[ProjectionFrame] = None

    def __post_init__(self):
        n = as_point4(self.pole)
        n.setflags(write=False)
        object.__setattr__(self, "pole", n)
        if abs(np.linalg.norm(n - self.sphere.center) - self.sphere.radius) > EPS_GEOM:
            raise ValueError("pole must lie on the sphere")

    @property
    def antipode(self) -> np.ndarray:
        return 2.0 * self.sphere.center - self.pole

    @property
    def axis(self) -> np.ndarray:
        """Unit vector from the center toward the pole."""
        return (self.pole - self.sphere.center) / self.sphere.radius

    @property
    def target(self) -> Hyperplane3:
        u = self.axis
        return Hyperplane3(u, float(u @ self.antipode))

    @property
    def basis(self) -> np.ndarray:
        b = axis_aligned_basis(self.axis)
        if self.frame is not None:
            fold = AXES.index(self.frame.xi_fold)
            for k in range(3):
                if abs(abs(b[k, fold]) - 1.0) < 1e-9:
                    b = b.copy()
                    b[k] = -b[k]
                    break
        return b

    def to_target(self, p4) -> np.ndarray:
        """Intrinsic target coordinates of a 4-D point of the target."""
        return self.basis @ (as_point4(p4) - self.antipode)

    def from_target(self, q3) -> np.ndarray:
        """4-D point of the target hyperplane from intrinsic coordinates."""
        q = np.asarray(q3, dtype=float)
        return self.antipode + q @ self.basis


def _check_on_sphere(cfg: StereoConfig, p: np.ndarray):
    dev = abs(np.linalg.norm(p - cfg.sphere.center) - cfg.sphere.radius)
    if dev > ON_SPHERE_TOL:
        raise NotOnSphere(f"point deviates from the sphere by {dev:.3e}")


def stereo_project(cfg: StereoConfig, p) -> ExtendedPoint3:
    """Stereographic image of a sphere point; the pole maps to INFINITY."""
    p = as_point4(p)
    _check_on_sphere(cfg, p)
    d = p - cfg.pole
    if np.linalg.norm(d) < EPS_GEOM:
        return INFINITY
    plane = cfg.target
    t = (plane.offset - float(plane.normal @ cfg.pole)) / float(plane.normal @ d)
    return cfg.to_target(cfg.pole + t * d)


def stereo_unproject(cfg: StereoConfig, q) -> np.ndarray:
    """Sphere point whose stereographic image is q; INFINITY maps to N."""
    if is_infinite(q):
        return cfg.pole.copy()
    q4 = cfg.from_target(q)
    d = q4 - cfg.pole
    d = d / np.linalg.norm(d)
    hits = ray_sphere_intersect(cfg.pole, d, cfg.sphere)
    # t = 0 is the pole itself; the line to any finite target point re-meets
    # the sphere in exactly one more point.
    t, point = max(hits, key=lambda h: abs(h[0]))
    return point


@dataclass(frozen=True)
class StereoPointTrace:
    """Synthetic construction data for the stereographic image of a point."""

    a3: np.ndarray
    a4: np.ndarray
    a0: Optional[np.ndarray]
    a_s: ExtendedPoint3
    at_pole: bool


def stereo_point_construction(
    frame: ProjectionFrame, cfg: StereoConfig, a
) -> StereoPointTrace:
    """Full construction trace {A3, A4, A0, As} for a point on the sphere.

    A0 is the pi-plane foot found by intersecting the Omega-image line
    N4 A4 with the Omega-image of the target hyperplane; the perpendicular
    to pi through A0 carries As, which also lies on the line N3 A3.
    """
    a = as_point4(a)
    u = cfg.axis
    fold_idx = AXES.index(frame.omega_fold)
    if abs(abs(u[fold_idx]) - 1.0) > EPS_GEOM:
        raise ValueError("pole axis must be the frame's Omega fold axis")
    imgs = project_double(frame, a)
    a_s = stereo_project(cfg, a)
    if is_infinite(a_s):
        return StereoPointTrace(imgs.xi_image, imgs.omega_image, None, a_s, True)
    n4 = project_double(frame, cfg.pole).omega_image
    a4 = imgs.omega_image
    level = cfg.antipode[fold_idx]
    t = (level - n4[2]) / (a4[2] - n4[2])
    a0 = n4[:2] + t * (a4[:2] - n4[:2])
    return StereoPointTrace(imgs.xi_image, imgs.omega_image, a0, a_s, False)


def concentric_sections_demo(cfg: StereoConfig, count: int):
    """Parallel sections of the S-side hemisphere with stereographic images.

    Sections are cut by hyperplanes perpendicular to the pole axis, evenly
    spaced in the pole coordinate from the equator down to S.  Each image
    is a 2-sphere concentric about the image of S (the target origin).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    u = cfg.axis
    z = cfg.sphere.center
    r = cfg.sphere.radius
    levels = [0.0] if count == 1 else np.linspace(0.0, -r, count)
    pairs = []
    for c in levels:
        cut = Hyperplane3(u, float(u @ z) + float(c))
        sec = section_sphere(cfg.sphere, cut)
        if sec.radius > 0.0:
            sample = sec.center + sec.radius * cfg.basis[0]
            img_radius = float(np.linalg.norm(stereo_project(cfg, sample)))
        else:
            img_radius = 0.0
        image = Sphere2in4(cfg.antipode, img_radius, cfg.target)
        pairs.append((sec, image))
    return pairs
