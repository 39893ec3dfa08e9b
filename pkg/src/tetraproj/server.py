"""Compute boundary: pure request/response calls over HTTP.

Messages are JSON objects {"op": ..., "params": {...}} -> {"result": ...},
with the same numeric conventions as the scene format.  The viewer stays
math-free by routing every displayed coordinate through this boundary.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from . import hopf as hopf_mod
from .geometry4 import Sphere3, is_infinite
from .projections import (
    StereoConfig,
    hopf_frame,
    project_double,
    standard_frame,
    stereo_project,
    stereo_unproject,
)


def _setup(frame_name: str):
    if frame_name == "hopf":
        frame = hopf_frame()
        sphere = Sphere3(np.array([0.0, 1.0, 0.0, 1.0]), 1.0)
        pole = np.array([0.0, 2.0, 0.0, 1.0])
    else:
        frame = standard_frame()
        sphere = Sphere3(np.zeros(4), 1.0)
        pole = np.array([0.0, 0.0, 0.0, 1.0])
    return frame, sphere, StereoConfig(sphere, pole, frame)


def handle_compute(op: str, params: dict):
    """Dispatch one compute-boundary request; returns a JSON-able result."""
    frame_name = params.get("frame", "standard")
    frame, sphere, cfg = _setup(frame_name)
    if op == "unproject":
        p = stereo_unproject(cfg, np.asarray(params["point"], dtype=float))
        return {"point4": list(p)}
    if op == "project":
        q = stereo_project(cfg, np.asarray(params["point4"], dtype=float))
        if is_infinite(q):
            return {"atInfinity": True}
        return {"point": list(q)}
    if op == "project_double":
        imgs = project_double(frame, np.asarray(params["point4"], dtype=float))
        return {"xi": list(imgs.xi_image), "omega": list(imgs.omega_image)}
    if op == "construction":
        from .projections import stereo_point_construction

        trace = stereo_point_construction(
            frame, cfg, np.asarray(params["point4"], dtype=float))
        out = {"a3": list(trace.a3), "a4": list(trace.a4),
               "atPole": trace.at_pole}
        if not trace.at_pole:
            out["a0"] = list(trace.a0)
            out["as"] = list(np.asarray(trace.a_s))
        return out
    if op == "fiber":
        base = hopf_mod.base_to_angles(np.asarray(params["base"], dtype=float))
        n = int(params.get("samples", 256))
        pts = hopf_mod.fiber_circle(base, n)
        disp = hopf_mod.place_display(hopf_mod.HopfPlacement(), pts)
        return {"points4": disp.tolist(),
                "base": {"psi": base.psi, "phi": base.phi}}
    if op == "clelia":
        s = float(params["s"])
        psi = np.asarray(params["psi"], dtype=float)
        return {"points": hopf_mod.clelia(s, psi).tolist()}
    if op == "torus":
        spec = hopf_mod.CleliaSpec(
            float(params["s"]),
            tuple(params.get("interval", (0.0, 2.0 * np.pi))),
            int(params.get("psiResolution", 96)),
        )
        torus = hopf_mod.hopf_torus(spec, int(params.get("betaResolution", 32)))
        disp = hopf_mod.place_display(hopf_mod.HopfPlacement(), torus.vertices)
        return {
            "vertices4": disp.reshape(-1, 4).tolist(),
            "triangles": torus.triangles().reshape(-1).tolist(),
            "rows": int(disp.shape[0]),
            "cols": int(disp.shape[1]),
            "closedPsi": torus.closed_psi,
        }
    if op == "hopf_map":
        p = hopf_mod.hopf_map(np.asarray(params["point4"], dtype=float))
        return {"point": list(p)}
    raise ValueError(f"unknown op {op!r}")


def create_app(static_dir=None):
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware

    app = FastAPI(title="tetraproj compute boundary")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.post("/api/compute")
    def compute(message: dict):
        op = message.get("op")
        params = message.get("params", {})
        try:
            return {"result": handle_compute(op, params)}
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True))
    return app


def run_server(host="127.0.0.1", port=8099, static_dir=None):
    import uvicorn

    uvicorn.run(create_app(static_dir), host=host, port=port, log_level="warning")
