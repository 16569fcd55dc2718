"""HTTP+JSON service consumed by the operator UI.

Stateless planning endpoints plus in-memory replan sessions (TTL-expired,
one lock per session).  All geometry is local planar meters.
"""
from __future__ import annotations

import math
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .aero import Wind, load_bundled_aircraft
from .cli import contours_feature_collection, plan_scenario, trajectory_json
from .geometry import ObstacleField, find_ftps, point_in_obstacle_interior
from .manifold import build_manifold
from .planner import ReplanSession, reachability
from .scenario import ScenarioError, scenario_from_dict
from .terrain import build_local_obstacle_map

SESSION_TTL_S = 3600.0


class _Session:
    def __init__(self, replan: ReplanSession):
        self.replan = replan
        self.lock = threading.Lock()
        self.touched = time.monotonic()

    def touch(self):
        self.touched = time.monotonic()


def create_app(scenario_dir=None) -> FastAPI:
    app = FastAPI(title="glideplan")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, _Session] = {}
    base_dir = Path(scenario_dir) if scenario_dir else Path(".")

    def parse_scenario(doc: dict):
        try:
            return scenario_from_dict(doc, base_dir)
        except ScenarioError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    def prune_sessions():
        now = time.monotonic()
        for sid in [sid for sid, s in sessions.items()
                    if now - s.touched > SESSION_TTL_S]:
            sessions.pop(sid, None)

    def get_session(session_id: str) -> _Session:
        prune_sessions()
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id}")
        sess.touch()
        return sess

    @app.post("/plan")
    def plan(doc: dict):
        scn = parse_scenario(doc)
        result, report = plan_scenario(scn, with_turns=bool(
            doc.get("options", {}).get("apply_turns", False)))
        if result is None:
            raise HTTPException(status_code=422, detail={
                "failure": "unreachable",
                "sites": report.to_dict()["sites"]})
        return trajectory_json(scn, result["site_id"], result["trajectory"])

    @app.post("/reach")
    def reach(doc: dict):
        scn = parse_scenario(doc)
        manifold = build_manifold(scn.aircraft, scn.wind,
                                  scn.manifold_resolution_rad)
        report = reachability(scn.cutoff, scn.cutoff_altitude, scn.sites,
                              scn.aircraft, scn.wind, scn.grid,
                              manifold=manifold)
        return report.to_dict()

    @app.get("/manifold")
    def manifold_contours(wx: float = 0.0, wy: float = 0.0,
                          levels: str = "100,200,500",
                          aircraft: str = "cessna172"):
        try:
            model = load_bundled_aircraft(aircraft)
            level_values = [float(v) for v in levels.split(",")]
        except (OSError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        m = build_manifold(model, Wind(wx, wy))
        return contours_feature_collection(m, level_values)

    @app.post("/obstacles")
    def obstacles(doc: dict):
        """Obstacle polygons and tangent points as seen from the cutoff."""
        scn = parse_scenario(doc)
        manifold = build_manifold(scn.aircraft, scn.wind,
                                  scn.manifold_resolution_rad)
        lomap = build_local_obstacle_map(scn.grid, manifold, scn.cutoff,
                                         scn.cutoff_altitude)
        field = ObstacleField.build(lomap)
        ftps = [] if point_in_obstacle_interior(lomap, *scn.cutoff) else \
            find_ftps(scn.cutoff, lomap, polygons=field.polygons)
        return {
            "polygons": [{
                "component_id": int(poly.component_id),
                "hole": bool(poly.hole),
                "vertices_m": [[float(x), float(y)]
                               for (x, y) in poly.vertices],
            } for poly in field.polygons],
            "ftps": [{"position_m": [float(f.position[0]),
                                     float(f.position[1])],
                      "obstacle_id": int(f.obstacle_id),
                      "tangent_side": f.tangent_side} for f in ftps],
        }

    @app.post("/terrain")
    def terrain_summary(doc: dict):
        """Downsampled elevation raster for rendering (hillshade client-side)."""
        scn = parse_scenario(doc)
        g = scn.grid
        m, n = g.shape
        stride = max(1, max(m, n) // 256)
        e = g.elevations[::stride, ::stride]
        return {
            "x0_m": g.x0, "y0_m": g.y0,
            "dx_m": g.dx * stride, "dy_m": g.dy * stride,
            "rows": e.shape[0], "cols": e.shape[1],
            "elevations_m": [[float(v) for v in row] for row in e],
            "clearance_m": g.clearance,
        }

    @app.post("/session")
    def create_session(doc: dict):
        scn = parse_scenario(doc)
        replan = ReplanSession(
            scn.aircraft, scn.grid, scn.wind, scn.cutoff,
            scn.cutoff_altitude, scn.sites,
            replan_interval=scn.options.replan_interval_m,
            manifold_resolution=scn.manifold_resolution_rad,
            apply_turns=bool(doc.get("options", {}).get("apply_turns", False)),
            bank_limit=scn.bank_limit_rad)
        if replan.current is None:
            raise HTTPException(status_code=422,
                                detail={"failure": "unreachable"})
        sid = uuid.uuid4().hex
        sessions[sid] = _Session(replan)
        prune_sessions()
        return {"session_id": sid, "state": replan.state()}

    @app.post("/session/{session_id}/wind")
    def push_wind(session_id: str, doc: dict):
        sess = get_session(session_id)
        try:
            wind = Wind(float(doc["w_north_mps"]), float(doc["w_east_mps"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400,
                                detail=f"invalid wind update: {exc}") from exc
        with sess.lock:
            sess.replan.update_wind(wind)
            return sess.replan.state()

    @app.post("/session/{session_id}/advance")
    def advance(session_id: str, doc: dict):
        sess = get_session(session_id)
        drop = float(doc.get("altitude_drop_m", sess.replan.replan_interval))
        if not (math.isfinite(drop) and drop >= 0):
            raise HTTPException(status_code=400,
                                detail="altitude_drop_m must be >= 0")
        with sess.lock:
            sess.replan.advance(drop)
            return sess.replan.state()

    @app.get("/session/{session_id}/state")
    def session_state(session_id: str):
        sess = get_session(session_id)
        with sess.lock:
            return sess.replan.state()

    return app
