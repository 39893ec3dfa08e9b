import json

import numpy as np
import pytest

from tetraproj.cli import main
from tetraproj.scene import parse


def run(tmp_path, *argv):
    return main(list(argv))


def load_scene(path):
    return parse(path.read_bytes())


class TestPoint:
    def test_equator_point(self, tmp_path):
        out = tmp_path / "point.json"
        assert run(tmp_path, "point", "--coords", "1,0,0,0", "--out", str(out)) == 0
        doc = load_scene(out)
        a_s = doc.find("point-as")
        assert np.allclose(a_s.geometry.position, [2, 0, 0])

    def test_pole_flags_infinity(self, tmp_path):
        out = tmp_path / "pole.json"
        assert run(tmp_path, "point", "--coords", "0,0,0,1", "--out", str(out)) == 0
        doc = load_scene(out)
        assert doc.find("point-as").flags.get("atInfinity")

    def test_off_sphere_exit_2(self, tmp_path):
        out = tmp_path / "bad.json"
        assert run(tmp_path, "point", "--coords", "2,0,0,0", "--out", str(out)) == 2

    def test_unwritable_output_exit_3(self, tmp_path):
        assert run(tmp_path, "point", "--coords", "1,0,0,0",
                   "--out", str(tmp_path / "nodir" / "x.json")) == 3


REGULAR = ["1,0,0,0", "0,1,0,0", "0,0,1,0", "0,0,0,-1"]


class TestTetra:
    def test_six_edges_per_group(self, tmp_path):
        out = tmp_path / "tetra.json"
        assert run(tmp_path, "tetra", "--vertices", *REGULAR, "--out", str(out)) == 0
        doc = load_scene(out)
        for group in ("xi", "omega", "stereo"):
            edges = [e for e in doc.entities
                     if e.id.startswith("edge-") and e.group == group]
            assert len(edges) == 6

    def test_circumsphere_adds_three_entities(self, tmp_path):
        plain = tmp_path / "plain.json"
        withcs = tmp_path / "cs.json"
        run(tmp_path, "tetra", "--vertices", *REGULAR, "--out", str(plain))
        run(tmp_path, "tetra", "--vertices", *REGULAR, "--circumsphere",
            "--out", str(withcs))
        n0 = len(load_scene(plain).entities)
        n1 = len(load_scene(withcs).entities)
        assert n1 - n0 == 3

    def test_antipodal_pair_exit_2(self, tmp_path):
        out = tmp_path / "bad.json"
        assert run(tmp_path, "tetra", "--vertices", "1,0,0,0", "-1,0,0,0",
                   "0,1,0,0", "0,0,1,0", "--out", str(out)) == 2


class TestInvert:
    def test_example_image_present(self, tmp_path):
        src = tmp_path / "pts.json"
        src.write_text(json.dumps([[2, 0, 0], [1, 0, 0], [0.3, 0.4, 0.1],
                                   [0.2, -0.5, 0.8]]))
        out = tmp_path / "inv.json"
        assert run(tmp_path, "invert", "--points", str(src), "--out", str(out)) == 0
        doc = load_scene(out)
        assert np.allclose(doc.find("image-0").geometry.position, [0.5, 0, 0],
                           atol=1e-9)
        # A point on gamma is fixed.
        assert np.allclose(doc.find("image-1").geometry.position,
                           doc.find("point-1").geometry.position, atol=1e-9)

    def test_empty_file_exit_2(self, tmp_path):
        src = tmp_path / "pts.json"
        src.write_text("[]")
        assert run(tmp_path, "invert", "--points", str(src),
                   "--out", str(tmp_path / "o.json")) == 2

    def test_malformed_exit_2(self, tmp_path):
        src = tmp_path / "pts.json"
        src.write_text("not json")
        assert run(tmp_path, "invert", "--points", str(src),
                   "--out", str(tmp_path / "o.json")) == 2


class TestHopf:
    @pytest.mark.parametrize("s", ["0.5", "1", "2"])
    def test_generates(self, tmp_path, s):
        out = tmp_path / f"hopf{s}.json"
        assert run(tmp_path, "hopf", "--s", s, "--res", "48x16",
                   "--out", str(out)) == 0
        doc = load_scene(out)
        for group in ("xi", "omega", "stereo"):
            assert doc.find(f"torus-{group}").kind == "mesh"
            assert doc.find(f"fiber-{group}").kind == "polyline"
        assert doc.find("base-sphere").kind == "analytic-sphere"
        assert doc.find("clelia").kind == "polyline"

    def test_bad_resolution_exit_2(self, tmp_path):
        assert run(tmp_path, "hopf", "--s", "1", "--res", "1x1",
                   "--out", str(tmp_path / "o.json")) == 2


class TestLift:
    def test_square_round_trip(self, tmp_path):
        square = [[1, 0, 0], [1, 1, 0], [0, 1, 0.5], [0, 0, 0], [1, 0, 0]]
        src = tmp_path / "curve.json"
        src.write_text(json.dumps(square))
        out = tmp_path / "lift.json"
        assert run(tmp_path, "lift", "--curve", str(src), "--out", str(out)) == 0
        doc = load_scene(out)
        assert doc.find("stroke").geometry.closed
        lifted = doc.find("lifted-xi")
        assert lifted.geometry.closed

    def test_single_vertex_exit_2(self, tmp_path):
        src = tmp_path / "curve.json"
        src.write_text(json.dumps([[1, 0, 0]]))
        assert run(tmp_path, "lift", "--curve", str(src),
                   "--out", str(tmp_path / "o.json")) == 2

    def test_origin_lifts_to_south_pole(self, tmp_path):
        src = tmp_path / "curve.json"
        src.write_text(json.dumps([[0, 0, 0], [1, 0, 0]]))
        out = tmp_path / "lift.json"
        assert run(tmp_path, "lift", "--curve", str(src), "--out", str(out)) == 0
        doc = load_scene(out)
        # South pole S has Omega-image (0, 0, -1).
        first = doc.find("lifted-omega").geometry.pieces[0][0]
        assert np.allclose(first, [0, 0, -1], atol=1e-9)


class TestHexaConcentric:
    def test_hexa_edges(self, tmp_path):
        out = tmp_path / "hexa.json"
        assert run(tmp_path, "hexa", "--out", str(out)) == 0
        doc = load_scene(out)
        for group in ("xi", "omega", "stereo"):
            edges = [e for e in doc.entities
                     if e.id.startswith("edge-") and e.group == group]
            assert len(edges) == 12

    def test_hexa_bad_range_exit_2(self, tmp_path):
        assert run(tmp_path, "hexa", "--ranges", "1,1:0.1,0.2:0.1,0.2",
                   "--out", str(tmp_path / "o.json")) == 2

    def test_concentric_pairs(self, tmp_path):
        out = tmp_path / "conc.json"
        assert run(tmp_path, "concentric", "--count", "5", "--out", str(out)) == 0
        doc = load_scene(out)
        assert len([e for e in doc.entities if e.id.startswith("section-")]) == 10
        assert len([e for e in doc.entities if e.id.startswith("image-")]) == 5

    def test_concentric_bad_count_exit_2(self, tmp_path):
        assert run(tmp_path, "concentric", "--count", "0",
                   "--out", str(tmp_path / "o.json")) == 2


class TestExportObj:
    def test_scene_to_obj(self, tmp_path):
        scene = tmp_path / "tetra.json"
        run(tmp_path, "tetra", "--vertices", *REGULAR, "--circumsphere",
            "--out", str(scene))
        out = tmp_path / "tetra.obj"
        assert run(tmp_path, "export-obj", "--in", str(scene),
                   "--out", str(out)) == 0
        text = out.read_text()
        assert any(l.startswith("f ") for l in text.splitlines())

    def test_missing_input_exit_3(self, tmp_path):
        assert run(tmp_path, "export-obj", "--in", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "o.obj")) == 3


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for out in (a, b):
            run(tmp_path, "hopf", "--s", "1", "--res", "32x12", "--out", str(out))
        assert a.read_bytes() == b.read_bytes()
