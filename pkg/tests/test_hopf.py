import numpy as np
import pytest

from tetraproj.fitting import fit_circle, fit_line
from tetraproj.geometry4 import Sphere3, is_infinite
from tetraproj.hopf import (
    CLELIA_CENTER,
    BasePoint,
    CleliaSpec,
    FiberPoint,
    HopfPlacement,
    NotUnit,
    base_to_angles,
    clelia,
    fiber_circle,
    fiber_point,
    fiber_set_distance,
    hopf_fiber,
    hopf_map,
    hopf_torus,
    place_display,
    self_intersection_fibers,
)
from tetraproj.projections import StereoConfig, hopf_frame, stereo_project


class TestHopfMap:
    def test_x_axis(self):
        assert np.allclose(hopf_map([1, 0, 0, 0]), [0, 0, 1])

    def test_z_axis(self):
        assert np.allclose(hopf_map([0, 0, 1, 0]), [0, 0, -1])

    def test_diagonal_fiber_point(self):
        # The psi = 0 fiber must land on the north pole of the base sphere;
        # this pins the sign of the third component.
        r = np.sqrt(0.5)
        assert np.allclose(hopf_map([r, r, 0, 0]), [0, 0, 1])

    def test_not_unit(self):
        with pytest.raises(NotUnit):
            hopf_map([2, 0, 0, 0])

    def test_image_is_unit(self):
        rng = np.random.default_rng(0)
        v = rng.normal(size=(500, 4))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        assert np.max(np.abs(np.linalg.norm(hopf_map(v), axis=1) - 1)) < 1e-9


class TestHopfFiber:
    def test_direct_substitutions(self):
        assert np.allclose(hopf_fiber(0, 0, 0), [1, 0, 0, 0])
        assert np.allclose(hopf_fiber(np.pi, 0, np.pi / 2), [0, 0, 0, 1],
                           atol=1e-15)
        r = np.sqrt(0.5)
        assert np.allclose(hopf_fiber(np.pi / 2, 0, 0), [r, 0, r, 0])

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        psi = rng.uniform(0, np.pi, 1000)
        phi = rng.uniform(0, 2 * np.pi, 1000)
        beta = rng.uniform(0, 2 * np.pi, 1000)
        base = hopf_map(hopf_fiber(psi, phi, beta))
        expect = np.stack([np.sin(psi) * np.cos(phi),
                           np.sin(psi) * np.sin(phi), np.cos(psi)], axis=1)
        assert np.max(np.linalg.norm(base - expect, axis=1)) < 1e-12

    def test_fibers_are_great_circles(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            pts = fiber_circle(BasePoint(rng.uniform(0, np.pi),
                                         rng.uniform(0, 2 * np.pi)), 64)
            assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1)) < 1e-12
            _, s, _ = np.linalg.svd(pts)
            assert s[2] < 1e-9

    def test_distinct_bases_disjoint_fibers(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            b1 = BasePoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            b2 = BasePoint(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            if np.linalg.norm(b1.point() - b2.point()) < 1e-3:
                continue
            assert _min_inter_fiber_distance(b1, b2) > 0

    def test_fiber_point_dataclass(self):
        fp = FiberPoint(BasePoint(np.pi / 2, 0.0), 0.0)
        assert np.allclose(fiber_point(fp), hopf_fiber(np.pi / 2, 0, 0))


def _min_inter_fiber_distance(b1, b2, n=128):
    p1 = fiber_circle(b1, n)
    p2 = fiber_circle(b2, n)
    d = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=-1)
    return float(d.min())


class TestClelia:
    def test_examples(self):
        assert np.allclose(clelia(1.0, 0.0), [0, 1, 1])
        assert np.allclose(clelia(2.0, np.pi / 2), [0, 1, -1], atol=1e-15)

    def test_on_translated_sphere(self):
        psi = np.linspace(0, 4 * np.pi, 200)
        for s in (0.5, 1.0, 2.0, 3.7):
            pts = clelia(s, psi)
            d = np.linalg.norm(pts - CLELIA_CENTER, axis=1)
            assert np.max(np.abs(d - 1)) < 1e-12


class TestBaseToAngles:
    def test_pole_convention(self):
        b = base_to_angles([0, 0, 1])
        assert b.psi == 0.0 and b.phi == 0.0

    def test_equator(self):
        b = base_to_angles([1, 0, 0])
        assert b.psi == pytest.approx(np.pi / 2)
        assert b.phi == 0.0

    def test_negative_y(self):
        b = base_to_angles([0, -1, 0])
        assert b.psi == pytest.approx(np.pi / 2)
        assert b.phi == pytest.approx(3 * np.pi / 2)

    def test_not_unit(self):
        with pytest.raises(NotUnit):
            base_to_angles([0, 0, 2])


class TestHopfTorus:
    def test_round_trip_residual(self):
        spec = CleliaSpec(1.0, (0.0, 2 * np.pi), 64)
        torus = hopf_torus(spec, 32)
        base = hopf_map(torus.vertices)
        curve = clelia(1.0, torus.psi_values) - CLELIA_CENTER
        err = np.linalg.norm(base - curve[:, None, :], axis=-1)
        assert err.max() < 1e-6

    def test_degenerate_interval_single_fiber(self):
        spec = CleliaSpec(1.0, (0.7, 0.7), 8)
        torus = hopf_torus(spec, 16)
        first = torus.vertices[0]
        for row in torus.vertices:
            assert np.allclose(row, first, atol=1e-12)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_high_resolution_generation(self, s):
        interval = (0.0, 4 * np.pi if s == 0.5 else 2 * np.pi)
        torus = hopf_torus(CleliaSpec(s, interval, 256), 64)
        assert torus.vertices.shape == (256, 64, 4)
        assert np.max(np.abs(np.linalg.norm(torus.vertices, axis=-1) - 1)) < 1e-9

    def test_closure_flag(self):
        assert hopf_torus(CleliaSpec(1.0, (0.0, 2 * np.pi), 32), 8).closed_psi
        assert not hopf_torus(CleliaSpec(1.0, (0.0, 1.0), 32), 8).closed_psi


class TestPlaceDisplay:
    def test_center_and_pole(self):
        placement = HopfPlacement()
        assert np.allclose(place_display(placement, np.zeros(4)), [0, 1, 0, 1])
        assert np.allclose(place_display(placement, [0, 0, 1, 0]), [0, 2, 0, 1])

    def test_isometry(self):
        rng = np.random.default_rng(4)
        placement = HopfPlacement()
        a, b = rng.normal(size=(2, 4))
        da = place_display(placement, a) - place_display(placement, b)
        assert np.linalg.norm(da) == pytest.approx(np.linalg.norm(a - b), abs=1e-12)


class TestFiberStereoImages:
    def test_fiber_images_are_circles_or_lines(self):
        sphere = Sphere3(np.array([0.0, 1.0, 0.0, 1.0]), 1.0)
        cfg = StereoConfig(sphere, np.array([0.0, 2.0, 0.0, 1.0]), hopf_frame())
        placement = HopfPlacement()
        rng = np.random.default_rng(5)
        for _ in range(20):
            base = BasePoint(rng.uniform(0.05, np.pi - 0.05),
                             rng.uniform(0, 2 * np.pi))
            pts = place_display(placement, fiber_circle(base, 64))
            imgs = [stereo_project(cfg, p) for p in pts]
            finite = np.array([q for q in imgs if not is_infinite(q)])
            _, _, res = fit_circle(finite)
            assert res < 1e-6

    def test_pole_fiber_maps_to_line(self):
        # The display pole (0,2,0,1) is the canonical point (0,0,1,0), whose
        # base point is the south pole of the base sphere.
        sphere = Sphere3(np.array([0.0, 1.0, 0.0, 1.0]), 1.0)
        cfg = StereoConfig(sphere, np.array([0.0, 2.0, 0.0, 1.0]), hopf_frame())
        placement = HopfPlacement()
        pts = place_display(placement, fiber_circle(BasePoint(np.pi, 0.0), 64))
        imgs = []
        for p in pts:
            if np.linalg.norm(p - cfg.pole) < 1e-9:
                continue
            imgs.append(stereo_project(cfg, p))
        _, _, res = fit_line(np.array(imgs))
        assert res < 1e-6


class TestSelfIntersections:
    def test_viviani_has_intersections(self):
        pairs = self_intersection_fibers(CleliaSpec(1.0, (0.0, 2 * np.pi)))
        assert pairs
        # The transversal crossing at (pi/2, 3pi/2) is among them.
        assert any(abs(a - np.pi / 2) < 1e-6 and abs(b - 3 * np.pi / 2) < 1e-6
                   for a, b in pairs)

    def test_fibers_coincide_at_intersections(self):
        spec = CleliaSpec(1.0, (0.0, 2 * np.pi))
        for a, b in self_intersection_fibers(spec):
            b1 = base_to_angles(clelia(1.0, a) - CLELIA_CENTER)
            b2 = base_to_angles(clelia(1.0, b) - CLELIA_CENTER)
            assert fiber_set_distance(b1, b2) < 1e-6

    def test_short_interval_empty(self):
        assert self_intersection_fibers(CleliaSpec(1.0, (0.1, 0.9))) == []
