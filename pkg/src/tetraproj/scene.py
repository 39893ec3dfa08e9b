"""Scene documents: render-ready primitives, projection, serialization.

A SceneDocument collects styled entities grouped by image kind (Xi-image,
Omega-image, stereographic image, and a source3d overlay group).  The
wire format is UTF-8 JSON with floats emitted at 17 significant digits,
so serialize/parse round-trips are bit-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from .geometry4 import (
    INFINITY,
    Sphere2in4,
    as_point4,
    is_infinite,
)
from .projections import (
    ProjectionFrame,
    StereoConfig,
    project_double_many,
    stereo_project,
)
from .spherical import GreatCircleArc

FORMAT_VERSION = "tetraproj-scene/1"
GROUPS = ("xi", "omega", "stereo", "source3d")
KINDS = ("point", "polyline", "mesh", "analytic-sphere", "label")

# A 4-D vertex this close to the pole is treated as a pole hit; beyond it
# the image coordinates exceed ~1e7 and degrade rendering.
POLE_TOL = 1e-7
# Default clip radius, in sphere radii.
DEFAULT_CLIP_RADIUS = 100.0


class ParseError(ValueError):
    """A scene document failed to parse or validate."""


@dataclass(frozen=True)
class Style:
    color: str = "#303030"
    opacity: float = 1.0
    line_width: float = 1.0

    def to_json(self) -> dict:
        return {"color": self.color, "opacity": self.opacity,
                "lineWidth": self.line_width}

    @staticmethod
    def from_json(obj) -> "Style":
        return Style(str(obj.get("color", "#303030")),
                     float(obj.get("opacity", 1.0)),
                     float(obj.get("lineWidth", 1.0)))


@dataclass(frozen=True)
class PointGeom:
    position: np.ndarray  # (3,)

    kind = "point"


@dataclass(frozen=True)
class PolylineGeom:
    pieces: tuple  # of (n, 3) arrays, each with >= 2 vertices
    closed: bool = False

    kind = "polyline"


@dataclass(frozen=True)
class MeshGeom:
    vertices: np.ndarray  # (n, 3)
    indices: np.ndarray  # flat, length divisible by 3
    rows: Optional[int] = None
    cols: Optional[int] = None

    kind = "mesh"


@dataclass(frozen=True)
class SphereGeom:
    center: np.ndarray  # (3,)
    radius: float

    kind = "analytic-sphere"


@dataclass(frozen=True)
class LabelGeom:
    position: np.ndarray  # (3,)
    text: str

    kind = "label"


Geometry = Union[PointGeom, PolylineGeom, MeshGeom, SphereGeom, LabelGeom]


@dataclass(frozen=True)
class SceneEntity:
    id: str
    group: str
    geometry: Geometry
    style: Style = Style()
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")
        if isinstance(self.geometry, PolylineGeom):
            for piece in self.geometry.pieces:
                if len(piece) < 2:
                    raise ValueError("polyline pieces need at least 2 vertices")
        if isinstance(self.geometry, MeshGeom):
            idx = np.asarray(self.geometry.indices)
            if idx.size and (idx.min() < 0 or idx.max() >= len(self.geometry.vertices)):
                raise ValueError("mesh indices out of bounds")

    @property
    def kind(self) -> str:
        return self.geometry.kind


@dataclass
class SceneDocument:
    frame: dict
    entities: List[SceneEntity] = field(default_factory=list)
    camera: Optional[dict] = None
    version: str = FORMAT_VERSION

    def add(self, entity: SceneEntity):
        if any(e.id == entity.id for e in self.entities):
            raise ValueError(f"duplicate entity id {entity.id!r}")
        self.entities.append(entity)

    def find(self, entity_id: str) -> SceneEntity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(entity_id)


# --- 4-D source geometry -------------------------------------------------

@dataclass(frozen=True)
class Polyline4:
    vertices: np.ndarray  # (n, 4)
    closed: bool = False


@dataclass(frozen=True)
class Mesh4:
    vertices: np.ndarray  # (n, 4)
    indices: np.ndarray  # flat triangle indices


def tessellate_arc(arc: GreatCircleArc, n: int) -> np.ndarray:
    """Uniform-angle polyline of n + 1 points along a great-circle arc."""
    if n < 1:
        raise ValueError("need at least one segment")
    return arc.sample(n)


def sphere_triangulation(center, radius: float, n_lon: int = 32, n_lat: int = 16):
    """UV-sphere mesh of a 3-D sphere: (vertices (m, 3), flat indices)."""
    center = np.asarray(center, dtype=float)
    theta = np.linspace(0.0, np.pi, n_lat + 1)
    phi = np.linspace(0.0, 2.0 * np.pi, n_lon, endpoint=False)
    st, ct = np.sin(theta), np.cos(theta)
    verts = np.empty(((n_lat + 1) * n_lon, 3))
    for i in range(n_lat + 1):
        for j in range(n_lon):
            verts[i * n_lon + j] = center + radius * np.array(
                [st[i] * np.cos(phi[j]), st[i] * np.sin(phi[j]), ct[i]]
            )
    tris = []
    for i in range(n_lat):
        for j in range(n_lon):
            j1 = (j + 1) % n_lon
            a, b = i * n_lon + j, i * n_lon + j1
            c, d = (i + 1) * n_lon + j, (i + 1) * n_lon + j1
            if i > 0:
                tris.append((a, b, d))
            if i < n_lat - 1:
                tris.append((a, d, c))
    return verts, np.array(tris, dtype=int).reshape(-1)


def grid_triangles(n_i: int, n_j: int, wrap_i: bool, wrap_j: bool) -> np.ndarray:
    """Flat triangle indices of an (n_i, n_j) row-major vertex grid."""
    tris = []
    rows = n_i if wrap_i else n_i - 1
    cols = n_j if wrap_j else n_j - 1
    for i in range(rows):
        i1 = (i + 1) % n_i
        for j in range(cols):
            j1 = (j + 1) % n_j
            a, b = i * n_j + j, i * n_j + j1
            c, d = i1 * n_j + j, i1 * n_j + j1
            tris.append((a, b, d))
            tris.append((a, d, c))
    return np.array(tris, dtype=int).reshape(-1)


# --- Projection into image groups ---------------------------------------

def _map_vertices(frame, cfg, pts: np.ndarray, group: str):
    """Per-vertex images; stereo pole hits become None entries."""
    if group == "xi":
        return list(project_double_many(frame, pts)[0])
    if group == "omega":
        return list(project_double_many(frame, pts)[1])
    if group == "stereo":
        out = []
        for p in pts:
            if np.linalg.norm(p - cfg.pole) <= POLE_TOL:
                out.append(None)
            else:
                out.append(np.asarray(stereo_project(cfg, p)))
        return out
    raise ValueError(f"cannot project into group {group!r}")


def _split_runs(images, closed: bool):
    """Consecutive finite runs; wrap-around runs merge for closed inputs."""
    runs: List[List[np.ndarray]] = []
    current: List[np.ndarray] = []
    had_split = False
    for img in images:
        if img is None:
            had_split = True
            if current:
                runs.append(current)
            current = []
        else:
            current.append(img)
    if current:
        runs.append(current)
    if closed and had_split and len(runs) > 1 and images[0] is not None and images[-1] is not None:
        runs[0] = runs.pop() + runs[0]
    return runs, had_split


def project_entity(
    frame: ProjectionFrame,
    cfg: Optional[StereoConfig],
    source,
    group: str,
    entity_id: str,
    style: Style = Style(),
) -> SceneEntity:
    """Project a 4-D source object into one image group.

    Sources: a 4-D point, a Polyline4, a Mesh4, or a Sphere2in4 (meshed at
    32x16 before projection).  Stereographic pole hits split polylines and
    drop incident mesh faces; they never produce non-finite coordinates.
    """
    if isinstance(source, Sphere2in4):
        grid = source.grid_points(32, 16)
        n_i, n_j = grid.shape[:2]
        source = Mesh4(grid.reshape(-1, 4),
                       grid_triangles(n_i, n_j, False, True))
    if isinstance(source, Polyline4):
        images = _map_vertices(frame, cfg, np.asarray(source.vertices, float), group)
        runs, had_split = _split_runs(images, source.closed)
        pieces = tuple(np.array(r) for r in runs if len(r) >= 2)
        closed = source.closed and not had_split
        flags = {"splitAtInfinity": True} if had_split else {}
        return SceneEntity(entity_id, group, PolylineGeom(pieces, closed),
                           style, flags)
    if isinstance(source, Mesh4):
        images = _map_vertices(frame, cfg, np.asarray(source.vertices, float), group)
        bad = {i for i, img in enumerate(images)
               if img is None or not np.all(np.isfinite(img))}
        verts = np.array([img if i not in bad else np.zeros(3)
                          for i, img in enumerate(images)])
        tris = np.asarray(source.indices, dtype=int).reshape(-1, 3)
        keep = [t for t in tris if not (set(t) & bad)]
        flags = {"splitAtInfinity": True} if bad else {}
        idx = np.array(keep, dtype=int).reshape(-1)
        return SceneEntity(entity_id, group, MeshGeom(verts, idx), style, flags)
    p = as_point4(source)
    img = _map_vertices(frame, cfg, p[None, :], group)[0]
    if img is None:
        return SceneEntity(entity_id, group,
                           LabelGeom(np.zeros(3), "∞"),
                           style, {"atInfinity": True})
    return SceneEntity(entity_id, group, PointGeom(img), style)


def clip_radius(entity: SceneEntity, r_max: float) -> SceneEntity:
    """Drop geometry farther than r_max from the stereographic origin."""
    if r_max <= 0.0:
        raise ValueError("clip radius must be positive")
    geom = entity.geometry
    if isinstance(geom, PointGeom):
        if np.linalg.norm(geom.position) <= r_max:
            return entity
        return SceneEntity(entity.id, entity.group, PolylineGeom((), False),
                           entity.style, {**entity.flags, "clipped": True})
    if isinstance(geom, PolylineGeom):
        pieces = []
        clipped = False
        for piece in geom.pieces:
            images = [v if np.linalg.norm(v) <= r_max else None for v in piece]
            runs, had = _split_runs(images, False)
            clipped = clipped or had
            pieces.extend(np.array(r) for r in runs if len(r) >= 2)
        if not clipped:
            return entity
        return SceneEntity(entity.id, entity.group,
                           PolylineGeom(tuple(pieces), False),
                           entity.style, {**entity.flags, "clipped": True})
    if isinstance(geom, MeshGeom):
        far = {i for i, v in enumerate(geom.vertices) if np.linalg.norm(v) > r_max}
        if not far:
            return entity
        tris = np.asarray(geom.indices, dtype=int).reshape(-1, 3)
        keep = [t for t in tris if not (set(t) & far)]
        verts = np.array([v if i not in far else np.zeros(3)
                          for i, v in enumerate(geom.vertices)])
        return SceneEntity(entity.id, entity.group,
                           MeshGeom(verts, np.array(keep, dtype=int).reshape(-1)),
                           entity.style, {**entity.flags, "clipped": True})
    return entity


# --- Serialization -------------------------------------------------------

def _fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if not np.isfinite(v):
        raise ValueError("cannot serialize non-finite number")
    if v == 0.0:
        v = 0.0  # canonicalize -0.0 so parse/serialize round-trips
    return format(v, ".17g")


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return _fmt_number(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _geometry_to_json(geom: Geometry) -> dict:
    if isinstance(geom, PointGeom):
        return {"point": list(geom.position)}
    if isinstance(geom, PolylineGeom):
        return {"polyline": {
            "closed": geom.closed,
            "pieces": [[list(v) for v in piece] for piece in geom.pieces],
        }}
    if isinstance(geom, MeshGeom):
        payload = {
            "vertices": list(np.asarray(geom.vertices, float).reshape(-1)),
            "indices": [int(i) for i in np.asarray(geom.indices).reshape(-1)],
        }
        if geom.rows is not None:
            payload["rows"] = int(geom.rows)
        if geom.cols is not None:
            payload["cols"] = int(geom.cols)
        return {"mesh": payload}
    if isinstance(geom, SphereGeom):
        return {"analytic-sphere": {"center": list(geom.center),
                                    "radius": geom.radius}}
    if isinstance(geom, LabelGeom):
        return {"label": {"position": list(geom.position), "text": geom.text}}
    raise TypeError(f"unknown geometry {type(geom)!r}")


def _entity_to_json(e: SceneEntity) -> dict:
    obj = {
        "id": e.id,
        "kind": e.kind,
        "group": e.group,
        "style": e.style.to_json(),
    }
    if e.flags:
        obj["flags"] = {k: e.flags[k] for k in sorted(e.flags)}
    obj["geometry"] = _geometry_to_json(e.geometry)
    return obj


def document_to_json(doc: SceneDocument) -> dict:
    obj = {"version": doc.version, "frame": doc.frame}
    if doc.camera is not None:
        obj["camera"] = doc.camera
    obj["entities"] = [_entity_to_json(e) for e in doc.entities]
    return obj


def serialize(doc: SceneDocument) -> bytes:
    """UTF-8 JSON bytes; floats carry 17 significant digits."""
    return _emit(document_to_json(doc)).encode("utf-8")


def _parse_geometry(kind: str, obj: dict, where: str) -> Geometry:
    try:
        if kind == "point":
            return PointGeom(np.asarray(obj["point"], dtype=float))
        if kind == "polyline":
            payload = obj["polyline"]
            pieces = tuple(np.asarray(p, dtype=float).reshape(-1, 3)
                           for p in payload["pieces"])
            return PolylineGeom(pieces, bool(payload.get("closed", False)))
        if kind == "mesh":
            payload = obj["mesh"]
            return MeshGeom(
                np.asarray(payload["vertices"], dtype=float).reshape(-1, 3),
                np.asarray(payload["indices"], dtype=int).reshape(-1),
                payload.get("rows"), payload.get("cols"),
            )
        if kind == "analytic-sphere":
            payload = obj["analytic-sphere"]
            return SphereGeom(np.asarray(payload["center"], dtype=float),
                              float(payload["radius"]))
        if kind == "label":
            payload = obj["label"]
            return LabelGeom(np.asarray(payload["position"], dtype=float),
                             str(payload["text"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{where}: bad {kind} geometry: {exc}") from exc
    raise ParseError(f"{where}: unknown entity kind {kind!r}")


def parse(data) -> SceneDocument:
    """Parse scene JSON bytes/text; raises ParseError with diagnostics."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    version = obj.get("version")
    if version != FORMAT_VERSION:
        raise ParseError(f"field 'version': unknown version {version!r}")
    frame = obj.get("frame")
    if not isinstance(frame, dict):
        raise ParseError("field 'frame': missing or not an object")
    doc = SceneDocument(frame=frame, camera=obj.get("camera"))
    entities = obj.get("entities", [])
    if not isinstance(entities, list):
        raise ParseError("field 'entities': must be an array")
    for i, ent in enumerate(entities):
        where = f"entities[{i}]"
        if not isinstance(ent, dict):
            raise ParseError(f"{where}: must be an object")
        for key in ("id", "kind", "group", "geometry"):
            if key not in ent:
                raise ParseError(f"{where}: missing field {key!r}")
        if ent["group"] not in GROUPS:
            raise ParseError(f"{where}: unknown group {ent['group']!r}")
        geom = _parse_geometry(ent["kind"], ent["geometry"], where)
        try:
            doc.add(SceneEntity(str(ent["id"]), ent["group"], geom,
                                Style.from_json(ent.get("style", {})),
                                dict(ent.get("flags", {}))))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from exc
    return doc


# --- OBJ export ----------------------------------------------------------

def export_obj(doc: SceneDocument, groups: Optional[Sequence[str]] = None) -> bytes:
    """Wavefront OBJ text of the document's meshes and polylines.

    Analytic spheres are tessellated at 32x16; points and labels are
    skipped.  An optional group filter keeps only the listed groups.
    """
    lines = ["# tetraproj scene export"]
    offset = 0
    for e in doc.entities:
        if groups is not None and e.group not in groups:
            continue
        geom = e.geometry
        if isinstance(geom, SphereGeom):
            verts, idx = sphere_triangulation(geom.center, geom.radius)
            geom = MeshGeom(verts, idx)
        if isinstance(geom, MeshGeom):
            lines.append(f"o {e.id}")
            for v in geom.vertices:
                lines.append("v " + " ".join(format(c, ".17g") for c in v))
            tris = np.asarray(geom.indices, dtype=int).reshape(-1, 3)
            for t in tris:
                lines.append("f " + " ".join(str(offset + i + 1) for i in t))
            offset += len(geom.vertices)
        elif isinstance(geom, PolylineGeom):
            lines.append(f"o {e.id}")
            for piece in geom.pieces:
                base = offset
                for v in piece:
                    lines.append("v " + " ".join(format(c, ".17g") for c in v))
                offset += len(piece)
                idx = [str(base + i + 1) for i in range(len(piece))]
                if geom.closed and len(geom.pieces) == 1:
                    idx.append(str(base + 1))
                lines.append("l " + " ".join(idx))
    return ("\n".join(lines) + "\n").encode("utf-8")
