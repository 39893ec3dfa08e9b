import numpy as np
import pytest

from tetraproj.geometry4 import Sphere3
from tetraproj.projections import StereoConfig, standard_frame
from tetraproj.scene import (
    MeshGeom,
    ParseError,
    PointGeom,
    Polyline4,
    PolylineGeom,
    SceneDocument,
    SceneEntity,
    SphereGeom,
    Style,
    clip_radius,
    export_obj,
    parse,
    project_entity,
    serialize,
    tessellate_arc,
)
from tetraproj.spherical import great_arc

UNIT = Sphere3(np.zeros(4), 1.0)
FRAME = standard_frame()
CFG = StereoConfig(UNIT, np.array([0.0, 0.0, 0.0, 1.0]), FRAME)


def empty_doc():
    return SceneDocument(frame=FRAME.descriptor())


class TestTessellateArc:
    def test_quarter_arc_midpoint(self):
        arc = great_arc(UNIT, [1, 0, 0, 0], [0, 1, 0, 0])
        pts = tessellate_arc(arc, 2)
        assert pts.shape == (3, 4)
        assert np.allclose(pts[1], [np.sqrt(0.5), np.sqrt(0.5), 0, 0])

    def test_chord_only(self):
        arc = great_arc(UNIT, [1, 0, 0, 0], [0, 1, 0, 0])
        pts = tessellate_arc(arc, 1)
        assert np.allclose(pts, [[1, 0, 0, 0], [0, 1, 0, 0]])

    def test_on_sphere(self):
        arc = great_arc(UNIT, [1, 0, 0, 0], [0, 0, 0.6, 0.8])
        pts = tessellate_arc(arc, 33)
        assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1)) < 1e-9

    def test_refinement_converges(self):
        arc = great_arc(UNIT, [1, 0, 0, 0], [0, 1, 0, 0])

        def chord_error(n):
            pts = tessellate_arc(arc, n)
            mids = 0.5 * (pts[:-1] + pts[1:])
            return np.max(np.abs(np.linalg.norm(mids, axis=1) - 1))

        for n in (4, 8, 16, 32):
            assert chord_error(2 * n) * 3 <= chord_error(n)


class TestProjectEntity:
    def test_polyline_through_pole_splits(self):
        t = np.linspace(-2.0, 2.0, 33)  # passes through the pole at t = 0
        pts = np.stack([np.sin(t), np.zeros_like(t), np.zeros_like(t),
                        np.cos(t)], axis=1)
        e = project_entity(FRAME, CFG, Polyline4(pts), "stereo", "curve")
        assert e.flags.get("splitAtInfinity")
        assert len(e.geometry.pieces) >= 2

    def test_point_shares_pi_coordinates(self):
        p = np.array([0.3, -0.4, 0.5, np.sqrt(1 - 0.5)])
        xi = project_entity(FRAME, CFG, p, "xi", "a")
        om = project_entity(FRAME, CFG, p, "omega", "b")
        assert xi.geometry.position[0] == om.geometry.position[0]
        assert xi.geometry.position[1] == om.geometry.position[1]

    def test_fiber_polyline_single_closed_piece(self):
        t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        circle = np.stack([np.cos(t), np.sin(t), np.zeros_like(t),
                           np.zeros_like(t)], axis=1)
        e = project_entity(FRAME, CFG, Polyline4(circle, closed=True),
                           "stereo", "fiber")
        assert len(e.geometry.pieces) == 1
        assert e.geometry.closed
        assert not e.flags

    def test_pole_point_becomes_label(self):
        e = project_entity(FRAME, CFG, np.array([0, 0, 0, 1.0]), "stereo", "n")
        assert e.kind == "label"
        assert e.flags.get("atInfinity")

    def test_no_nonfinite_output(self):
        arc = great_arc(UNIT, [0, 0, 0, 1], [0, 1, 0, 0])
        e = project_entity(FRAME, CFG, Polyline4(tessellate_arc(arc, 32)),
                           "stereo", "c")
        for piece in e.geometry.pieces:
            assert np.all(np.isfinite(piece))


class TestClipRadius:
    def test_inside_unchanged(self):
        e = SceneEntity("p", "stereo", PolylineGeom(
            (np.array([[0, 0, 0], [1, 1, 1]], dtype=float),)))
        assert clip_radius(e, 50.0) is e

    def test_line_clipped(self):
        t = np.linspace(-200, 200, 401)
        line = np.stack([t, np.zeros_like(t), np.zeros_like(t)], axis=1)
        e = SceneEntity("l", "stereo", PolylineGeom((line,)))
        c = clip_radius(e, 50.0)
        assert c.flags.get("clipped")
        for piece in c.geometry.pieces:
            assert np.max(np.linalg.norm(piece, axis=1)) <= 50.0

    def test_tiny_radius_empties(self):
        e = SceneEntity("l", "stereo", PolylineGeom(
            (np.array([[1, 0, 0], [2, 0, 0]], dtype=float),)))
        c = clip_radius(e, 1e-9)
        assert c.flags.get("clipped")
        assert c.geometry.pieces == ()


class TestSerialization:
    def test_empty_document(self):
        data = serialize(empty_doc())
        assert b'"version":"tetraproj-scene/1"' in data
        parse(data)

    def test_polyline_round_trip(self):
        doc = empty_doc()
        doc.add(SceneEntity("line", "xi", PolylineGeom(
            (np.array([[0.1, 0.2, 0.3], [1 / 3, 2 / 7, -0.5]]),), closed=False),
            Style("#ff0000", 0.5, 2.0), {"splitAtInfinity": True}))
        doc.add(SceneEntity("ball", "omega", SphereGeom(np.array([0.0, 1.0, 2.0]), 0.75)))
        data = serialize(doc)
        back = parse(data)
        assert serialize(back) == data
        e = back.find("line")
        assert e.style.color == "#ff0000"
        assert e.flags["splitAtInfinity"] is True
        assert np.array_equal(e.geometry.pieces[0],
                              doc.find("line").geometry.pieces[0])

    def test_unknown_version(self):
        with pytest.raises(ParseError):
            parse(b'{"version":"nope","frame":{},"entities":[]}')

    def test_malformed_json(self):
        with pytest.raises(ParseError, match="line"):
            parse(b'{"version":')

    def test_duplicate_ids_rejected(self):
        doc = empty_doc()
        doc.add(SceneEntity("a", "xi", PointGeom(np.zeros(3))))
        with pytest.raises(ValueError):
            doc.add(SceneEntity("a", "xi", PointGeom(np.zeros(3))))

    def test_bad_mesh_indices_rejected(self):
        with pytest.raises(ValueError):
            SceneEntity("m", "xi", MeshGeom(np.zeros((3, 3)), np.array([0, 1, 5])))


class TestExportObj:
    def test_single_triangle(self):
        doc = empty_doc()
        doc.add(SceneEntity("tri", "xi", MeshGeom(
            np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0]]), np.array([0, 1, 2]))))
        text = export_obj(doc).decode()
        assert sum(1 for l in text.splitlines() if l.startswith("v ")) == 3
        assert sum(1 for l in text.splitlines() if l.startswith("f ")) == 1

    def test_polyline_record(self):
        doc = empty_doc()
        doc.add(SceneEntity("pl", "xi", PolylineGeom(
            (np.array([[0.0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]),))))
        text = export_obj(doc).decode()
        lines = [l for l in text.splitlines() if l.startswith("l ")]
        assert lines == ["l 1 2 3 4"]

    def test_group_filter(self):
        doc = empty_doc()
        doc.add(SceneEntity("pl", "xi", PolylineGeom(
            (np.array([[0.0, 0, 0], [1, 0, 0]]),))))
        text = export_obj(doc, groups=["omega"]).decode()
        assert "v " not in text
        assert text.startswith("# tetraproj")

    def test_sphere_is_tessellated(self):
        doc = empty_doc()
        doc.add(SceneEntity("ball", "xi", SphereGeom(np.zeros(3), 1.0)))
        text = export_obj(doc).decode()
        assert sum(1 for l in text.splitlines() if l.startswith("v ")) == 17 * 32
        assert any(l.startswith("f ") for l in text.splitlines())
