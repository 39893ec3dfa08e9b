"""Command-line entry point: figure-class scenes and batch computations.

Exit codes: 0 success, 2 input error, 3 I/O error.  Identical invocations
produce byte-identical scene files.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import hopf as hopf_mod
from . import scene as scene_mod
from . import spherical
from .geometry4 import (
    DegenerateInput,
    Sphere3,
    axis_aligned_basis,
    is_infinite,
)
from .projections import (
    NotOnSphere,
    StereoConfig,
    concentric_sections_demo,
    hopf_frame,
    project_double,
    project_double_many,
    standard_frame,
    stereo_point_construction,
    stereo_unproject,
)
from .scene import (
    LabelGeom,
    Mesh4,
    PointGeom,
    Polyline4,
    PolylineGeom,
    SceneDocument,
    SceneEntity,
    SphereGeom,
    Style,
    grid_triangles,
    parse,
    project_entity,
    serialize,
    tessellate_arc,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3

IMAGE_GROUPS = ("xi", "omega", "stereo")

STYLES = {
    "sphere": Style("#9ecae1", 0.25, 1.0),
    "edge": Style("#d62728", 1.0, 2.0),
    "vertex": Style("#1f77b4", 1.0, 1.0),
    "helper": Style("#7f7f7f", 0.8, 1.0),
    "curve": Style("#2ca02c", 1.0, 2.0),
    "mesh": Style("#2ca02c", 0.6, 1.0),
    "fiber": Style("#d62728", 1.0, 2.0),
}


class InputError(Exception):
    """Invalid user input; maps to exit code 2."""


def _frame_setup(name: str):
    if name == "standard":
        frame = standard_frame()
        sphere = Sphere3(np.zeros(4), 1.0)
        pole = np.array([0.0, 0.0, 0.0, 1.0])
    elif name == "hopf":
        frame = hopf_frame()
        sphere = Sphere3(np.array([0.0, 1.0, 0.0, 1.0]), 1.0)
        pole = np.array([0.0, 2.0, 0.0, 1.0])
    else:
        raise InputError(f"unknown frame {name!r}")
    return frame, sphere, StereoConfig(sphere, pole, frame)


def _parse_floats(text: str, count: int, what: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != count:
        raise InputError(f"{what}: expected {count} comma-separated numbers")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from exc


def _write_scene(doc: SceneDocument, path: str):
    data = serialize(doc)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        raise


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON: {exc}") from exc


def _new_doc(frame) -> SceneDocument:
    return SceneDocument(frame=frame.descriptor())


def _add_sphere_images(doc, frame, sphere):
    imgs = project_double(frame, sphere.center)
    doc.add(SceneEntity("sphere-xi", "xi",
                        SphereGeom(imgs.xi_image, sphere.radius), STYLES["sphere"]))
    doc.add(SceneEntity("sphere-omega", "omega",
                        SphereGeom(imgs.omega_image, sphere.radius), STYLES["sphere"]))


# --- point ---------------------------------------------------------------

def cmd_point(args) -> int:
    frame, sphere, cfg = _frame_setup(args.frame)
    a = _parse_floats(args.coords, 4, "--coords")
    if abs(np.linalg.norm(a - sphere.center) - sphere.radius) > 1e-6:
        raise InputError("point does not lie on the configured sphere")
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    trace = stereo_point_construction(frame, cfg, a)
    doc.add(SceneEntity("point-a3", "xi", PointGeom(trace.a3), STYLES["vertex"]))
    doc.add(SceneEntity("point-a4", "omega", PointGeom(trace.a4), STYLES["vertex"]))
    if trace.at_pole:
        doc.add(SceneEntity("point-as", "stereo",
                            LabelGeom(np.zeros(3), "∞"),
                            STYLES["vertex"], {"atInfinity": True}))
    else:
        doc.add(SceneEntity("point-as", "stereo", PointGeom(np.asarray(trace.a_s)),
                            STYLES["vertex"]))
        a0 = np.array([trace.a0[0], trace.a0[1], 0.0])
        doc.add(SceneEntity("point-a0", "source3d", PointGeom(a0), STYLES["helper"]))
        n_imgs = project_double(frame, cfg.pole)
        doc.add(SceneEntity(
            "ray-xi", "source3d",
            PolylineGeom((np.stack([n_imgs.xi_image, np.asarray(trace.a_s)]),)),
            STYLES["helper"]))
        doc.add(SceneEntity(
            "ray-omega", "source3d",
            PolylineGeom((np.stack(
                [n_imgs.omega_image,
                 np.array([trace.a0[0], trace.a0[1],
                           cfg.antipode[3 if args.frame == "standard" else 1]])]),)),
            STYLES["helper"]))
    doc.add(SceneEntity("ordinal-a", "source3d",
                        PolylineGeom((np.stack([trace.a3, trace.a4]),)),
                        STYLES["helper"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- tetra ---------------------------------------------------------------

def cmd_tetra(args) -> int:
    frame, sphere, cfg = _frame_setup(args.frame)
    verts = [_parse_floats(v, 4, "--vertices") for v in args.vertices]
    names = "ABCD"
    try:
        tet = spherical.tetrahedron(sphere, *verts)
    except (NotOnSphere, spherical.AntipodalPair, spherical.CoincidentPoints,
            DegenerateInput) as exc:
        raise InputError(str(exc)) from exc
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    for group in IMAGE_GROUPS:
        for i, j, arc in tet.edges:
            pts = tessellate_arc(arc, 64)
            doc.add(project_entity(frame, cfg, Polyline4(pts),
                                   group, f"edge-{names[i]}{names[j]}-{group}",
                                   STYLES["edge"]))
        for i, v in enumerate(tet.vertices):
            doc.add(project_entity(frame, cfg, v, group,
                                   f"vertex-{names[i]}-{group}", STYLES["vertex"]))
            anti = spherical.antipode(sphere, v)
            doc.add(project_entity(frame, cfg, anti, group,
                                   f"antipode-{names[i]}-{group}", STYLES["helper"]))
    if args.circumsphere:
        try:
            s2 = spherical.circumsphere2(sphere, *verts)
        except DegenerateInput as exc:
            raise InputError(str(exc)) from exc
        for group in IMAGE_GROUPS:
            doc.add(project_entity(frame, cfg, s2, group,
                                   f"circumsphere-{group}", STYLES["mesh"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- invert --------------------------------------------------------------

def cmd_invert(args) -> int:
    frame, sphere, cfg = _frame_setup("standard")
    if args.points is None:
        raw = [[2.0, 0.0, 0.0], [1.0, 0.0, 0.0],
               [0.3, 0.4, 0.1], [0.2, -0.5, 0.8]]
    else:
        raw = _read_json(args.points)
    if not isinstance(raw, list) or not raw:
        raise InputError("input must be a nonempty JSON array of 3-D points")
    try:
        coords = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad point data: {exc}") from exc
    if coords.ndim != 2 or coords.shape[1] != 3 or not np.all(np.isfinite(coords)):
        raise InputError("input must be an array of finite [u, v, t] triples")
    pole_axis = np.zeros(4)
    pole_axis[3] = 1.0
    basis = axis_aligned_basis(pole_axis)
    pts4 = sphere.center + coords @ basis
    if np.any(np.linalg.norm(pts4 - sphere.center, axis=1) < 1e-12):
        raise InputError("points must differ from the inversion center")
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    z_xi = project_double(frame, sphere.center).xi_image
    doc.add(SceneEntity("gamma", "xi", SphereGeom(z_xi, sphere.radius),
                        STYLES["sphere"]))
    xi_pts, _ = project_double_many(frame, pts4)
    images = [spherical.spherical_inversion(sphere, frame, p) for p in pts4]
    for k, (p_xi, img) in enumerate(zip(xi_pts, images)):
        doc.add(SceneEntity(f"point-{k}", "xi", PointGeom(p_xi), STYLES["vertex"]))
        if is_infinite(img):
            doc.add(SceneEntity(f"image-{k}", "xi", LabelGeom(np.zeros(3), "∞"),
                                STYLES["vertex"], {"atInfinity": True}))
        else:
            img_xi = project_double(frame, img).xi_image
            doc.add(SceneEntity(f"image-{k}", "xi", PointGeom(img_xi),
                                STYLES["edge"]))
    # Both stereographic legs, drawn for the first point.
    sel = pts4[0]
    d = sel - cfg.pole
    d = d / np.linalg.norm(d)
    from .geometry4 import ray_sphere_intersect
    _, lifted = max(ray_sphere_intersect(cfg.pole, d, sphere), key=lambda h: abs(h[0]))
    for name, a, b in (("leg-n", cfg.pole, sel), ("leg-s", cfg.antipode, lifted)):
        seg = np.stack([a, b] if name == "leg-n" else
                       [a, images[0] if not is_infinite(images[0]) else lifted])
        seg_xi, _ = project_double_many(frame, seg)
        doc.add(SceneEntity(name, "source3d", PolylineGeom((seg_xi,)),
                            STYLES["helper"]))
    lifted_xi = project_double(frame, lifted).xi_image
    doc.add(SceneEntity("lifted-0", "source3d", PointGeom(lifted_xi),
                        STYLES["helper"]))
    if len(pts4) == 4:
        try:
            demo = spherical.invert_tetrahedron_demo(sphere, frame, *pts4)
        except (DegenerateInput, ValueError):
            demo = None
        if demo is not None:
            names = "0123"
            for (i, j), seg in demo.edges:
                seg_xi, _ = project_double_many(frame, seg)
                doc.add(SceneEntity(f"edge-{names[i]}{names[j]}", "xi",
                                    PolylineGeom((seg_xi,)), STYLES["helper"]))
            for (i, j), img in demo.edge_images:
                pieces = tuple(project_double_many(frame, p)[0] for p in img.pieces)
                flags = {"splitAtInfinity": True} if img.split_at_infinity else {}
                doc.add(SceneEntity(f"edge-image-{names[i]}{names[j]}", "xi",
                                    PolylineGeom(pieces), STYLES["edge"], flags))
            for tag, grid in (("circumsphere", demo.circumsphere_grid),
                              ("circumsphere-image", demo.circumsphere_image_grid)):
                n_i, n_j = grid.shape[:2]
                mesh = Mesh4(grid.reshape(-1, 4),
                             grid_triangles(n_i, n_j, False, True))
                doc.add(project_entity(frame, cfg, mesh, "xi", tag, STYLES["mesh"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- hopf ----------------------------------------------------------------

def _default_interval(s: float):
    frac = Fraction(s).limit_denominator(64)
    if abs(float(frac) - s) > 1e-12 or frac.denominator > 16:
        return (0.0, 2.0 * np.pi)
    return (0.0, 2.0 * np.pi * frac.denominator)


def cmd_hopf(args) -> int:
    frame, sphere, cfg = _frame_setup("hopf")
    if args.psi_range is not None:
        lo, hi = _parse_floats(args.psi_range, 2, "--psi-range")
        if hi <= lo:
            raise InputError("--psi-range must have positive length")
        interval = (float(lo), float(hi))
    else:
        interval = _default_interval(args.s)
    try:
        res_psi, res_beta = (int(p) for p in args.res.split("x"))
    except ValueError as exc:
        raise InputError(f"--res: expected RxB integers: {exc}") from exc
    if res_psi < 2 or res_beta < 2:
        raise InputError("--res: both resolutions must be at least 2")
    try:
        spec = hopf_mod.CleliaSpec(args.s, interval, res_psi)
        torus = hopf_mod.hopf_torus(spec, res_beta)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    placement = hopf_mod.HopfPlacement()
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    doc.add(SceneEntity("base-sphere", "source3d",
                        SphereGeom(hopf_mod.CLELIA_CENTER, 1.0), STYLES["sphere"]))
    psi_curve = np.linspace(interval[0], interval[1], 512)
    curve = hopf_mod.clelia(args.s, psi_curve)
    doc.add(SceneEntity("clelia", "source3d",
                        PolylineGeom((curve,), closed=torus.closed_psi),
                        STYLES["curve"]))
    disp = hopf_mod.place_display(placement, torus.vertices)
    mesh = Mesh4(disp.reshape(-1, 4), torus.triangles().reshape(-1))
    for group in IMAGE_GROUPS:
        doc.add(project_entity(frame, cfg, mesh, group, f"torus-{group}",
                               STYLES["mesh"]))
    psi_sel = args.psi if args.psi is not None else 0.5 * (interval[0] + interval[1])
    base_pt = hopf_mod.clelia(args.s, psi_sel)
    doc.add(SceneEntity("base-point", "source3d", PointGeom(base_pt),
                        STYLES["vertex"]))
    base = hopf_mod.base_to_angles(base_pt - hopf_mod.CLELIA_CENTER)
    fiber = hopf_mod.place_display(placement, hopf_mod.fiber_circle(base, 256))
    for group in IMAGE_GROUPS:
        doc.add(project_entity(frame, cfg, Polyline4(fiber, closed=True), group,
                               f"fiber-{group}", STYLES["fiber"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- lift ----------------------------------------------------------------

def cmd_lift(args) -> int:
    frame, sphere, cfg = _frame_setup(args.frame)
    raw = _read_json(args.curve)
    if not isinstance(raw, list) or len(raw) < 2:
        raise InputError("curve must be a JSON array of at least 2 points")
    try:
        coords = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad curve data: {exc}") from exc
    if coords.ndim != 2 or coords.shape[1] != 3 or not np.all(np.isfinite(coords)):
        raise InputError("curve must be an array of finite [u, v, t] triples")
    lifted = np.array([stereo_unproject(cfg, q) for q in coords])
    closed = bool(np.linalg.norm(coords[0] - coords[-1]) < 1e-12)
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    doc.add(SceneEntity("stroke", "stereo", PolylineGeom((coords,), closed),
                        STYLES["curve"]))
    for group in ("xi", "omega"):
        doc.add(project_entity(frame, cfg, Polyline4(lifted, closed), group,
                               f"lifted-{group}", STYLES["edge"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- hexa ----------------------------------------------------------------

DEFAULT_HEXA_RANGES = "{:.17g},{:.17g}:{:.17g},{:.17g}:{:.17g},{:.17g}".format(
    np.pi / 6, np.pi / 2, np.pi / 4, np.pi / 2, 0.0, np.pi / 2
)


def cmd_hexa(args) -> int:
    frame, sphere, cfg = _frame_setup(args.frame)
    parts = args.ranges.split(":")
    if len(parts) != 3:
        raise InputError("--ranges: expected three colon-separated intervals")
    ranges = [_parse_floats(p, 2, "--ranges") for p in parts]
    try:
        hexa = spherical.hexahedron(sphere, *ranges)
    except spherical.EmptyRange as exc:
        raise InputError(str(exc)) from exc
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    for group in IMAGE_GROUPS:
        for k, edge in enumerate(hexa.edges):
            pts = edge.sample(sphere, 48)
            doc.add(project_entity(frame, cfg, Polyline4(pts), group,
                                   f"edge-{k}-{group}", STYLES["edge"]))
        for k, corner in enumerate(hexa.corners):
            doc.add(project_entity(frame, cfg, corner, group,
                                   f"corner-{k}-{group}", STYLES["vertex"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- concentric ----------------------------------------------------------

def cmd_concentric(args) -> int:
    frame, sphere, cfg = _frame_setup("standard")
    if args.count < 1:
        raise InputError("--count must be at least 1")
    pairs = concentric_sections_demo(cfg, args.count)
    doc = _new_doc(frame)
    _add_sphere_images(doc, frame, sphere)
    for i, (sec, img) in enumerate(pairs):
        imgs = project_double(frame, sec.center)
        doc.add(SceneEntity(f"section-{i}-xi", "xi",
                            SphereGeom(imgs.xi_image, sec.radius),
                            STYLES["sphere"]))
        theta = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
        ring = imgs.omega_image + sec.radius * np.stack(
            [np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=1)
        doc.add(SceneEntity(f"section-{i}-omega", "omega",
                            PolylineGeom((ring,), closed=True), STYLES["helper"]))
        doc.add(SceneEntity(f"image-{i}-stereo", "stereo",
                            SphereGeom(np.zeros(3), img.radius), STYLES["sphere"]))
    _write_scene(doc, args.out)
    return EXIT_OK


# --- export-obj ----------------------------------------------------------

def cmd_export_obj(args) -> int:
    try:
        with open(args.infile, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.infile}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        doc = parse(data)
    except scene_mod.ParseError as exc:
        raise InputError(f"{args.infile}: {exc}") from exc
    groups = args.groups.split(",") if args.groups else None
    obj = scene_mod.export_obj(doc, groups)
    try:
        with open(args.out, "wb") as fh:
            fh.write(obj)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# --- serve ---------------------------------------------------------------

def cmd_serve(args) -> int:
    from .server import run_server

    run_server(host=args.host, port=args.port, static_dir=args.static)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tetraproj",
        description="Double orthogonal and stereographic images of objects "
                    "on a 3-sphere.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("point", help="stereographic point construction")
    sp.add_argument("--coords", default="1,0,0,0", help="x,y,z,w on the sphere")
    sp.add_argument("--frame", choices=("standard", "hopf"), default="standard")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("tetra", help="hyperspherical tetrahedron")
    sp.add_argument("--vertices", nargs=4, metavar="x,y,z,w",
                default=["1,0,0,0", "0,1,0,0", "0,0,1,0", "0,0,0,-1"])
    sp.add_argument("--circumsphere", action="store_true")
    sp.add_argument("--frame", choices=("standard", "hopf"), default="standard")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_tetra)

    sp = sub.add_parser("invert", help="spherical inversion of input points")
    sp.add_argument("--points", default=None,
                help="JSON file of [u,v,t] points (default: demo quadruple)")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("hopf", help="Hopf torus of a Clelia curve")
    sp.add_argument("--s", required=True, type=float)
    sp.add_argument("--psi-range", default=None, help="a,b interval")
    sp.add_argument("--psi", default=None, type=float,
                    help="highlighted fiber parameter")
    sp.add_argument("--res", default="96x32", help="psi x beta grid resolution")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_hopf)

    sp = sub.add_parser("lift", help="lift a stereographic curve to the sphere")
    sp.add_argument("--curve", required=True, help="JSON file of [u,v,t] points")
    sp.add_argument("--frame", choices=("standard", "hopf"), default="standard")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("hexa", help="hyperspherical hexahedron")
    sp.add_argument("--ranges", default=DEFAULT_HEXA_RANGES,
                    help="psi_a,psi_b:theta_a,theta_b:phi_a,phi_b")
    sp.add_argument("--frame", choices=("standard", "hopf"), default="standard")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_hexa)

    sp = sub.add_parser("concentric", help="concentric stereographic sections")
    sp.add_argument("--count", default=5, type=int)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_concentric)

    sp = sub.add_parser("export-obj", help="convert a scene file to OBJ")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--groups", default=None, help="comma-separated group filter")
    sp.set_defaults(func=cmd_export_obj)

    sp = sub.add_parser("serve", help="serve the compute boundary and viewer")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", default=8099, type=int)
    sp.add_argument("--static", default=None, help="directory of viewer assets")
    sp.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
