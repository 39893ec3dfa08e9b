"""Least-squares fits used to validate projected curves and surfaces.

All fits report a worst-case residual so callers can assert tightness;
the inputs here come from exact analytic constructions, so residuals at
rounding-noise level are the expected outcome.
"""
from __future__ import annotations

import numpy as np


def fit_plane(points: np.ndarray):
    """Best plane through 3-D points: (centroid, unit normal, max residual)."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    normal = vt[-1]
    residual = float(np.max(np.abs((pts - centroid) @ normal)))
    return centroid, normal, residual


def fit_line(points: np.ndarray):
    """Best line through 3-D points: (point, unit direction, max residual)."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    direction = vt[0]
    rel = pts - centroid
    off = rel - np.outer(rel @ direction, direction)
    residual = float(np.max(np.linalg.norm(off, axis=1)))
    return centroid, direction, residual


def fit_circle(points: np.ndarray):
    """Best circle through 3-D points: (center, radius, max residual).

    Fits the carrier plane first, then an algebraic (Kasa) circle in plane
    coordinates.  The residual combines out-of-plane and radial deviation.
    """
    pts = np.asarray(points, dtype=float)
    centroid, normal, plane_res = fit_plane(pts)
    # In-plane orthonormal axes.
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(normal)))] = 1.0
    e1 = seed - (seed @ normal) * normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    rel = pts - centroid
    xy = np.stack([rel @ e1, rel @ e2], axis=1)
    a = np.column_stack([2.0 * xy, np.ones(len(xy))])
    b = (xy**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    cx, cy, c0 = sol
    radius = float(np.sqrt(max(c0 + cx * cx + cy * cy, 0.0)))
    center = centroid + cx * e1 + cy * e2
    radial = np.abs(np.linalg.norm(xy - [cx, cy], axis=1) - radius)
    residual = float(max(np.max(radial), plane_res))
    return center, radius, residual


def fit_sphere(points: np.ndarray):
    """Best sphere through 3-D points: (center, radius, max residual)."""
    pts = np.asarray(points, dtype=float)
    a = np.column_stack([2.0 * pts, np.ones(len(pts))])
    b = (pts**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    center = sol[:3]
    radius = float(np.sqrt(max(sol[3] + center @ center, 0.0)))
    residual = float(np.max(np.abs(np.linalg.norm(pts - center, axis=1) - radius)))
    return center, radius, residual
