"""Command-line entry points: plan, reach, manifold, oracle-compare, serve."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .aero import Wind
from .manifold import build_manifold, iso_loss_contours
from .oracle import dense_dijkstra
from .planner import (PlanFailure, apply_turn_corrections, reachability,
                      select_site)
from .scenario import Scenario, ScenarioError, load_scenario

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNREACHABLE = 2


def plan_scenario(scn: Scenario, with_turns: bool = False):
    """Single code path behind both the CLI and the HTTP service."""
    manifold = build_manifold(scn.aircraft, scn.wind,
                              scn.manifold_resolution_rad)
    report = reachability(scn.cutoff, scn.cutoff_altitude, scn.sites,
                          scn.aircraft, scn.wind, scn.grid, manifold=manifold)
    best = select_site(report, scn.sites)
    if best is None:
        return None, report
    traj = best.trajectory
    if with_turns:
        traj = apply_turn_corrections(traj, scn.aircraft, scn.wind, scn.grid,
                                      bank_limit=scn.bank_limit_rad)
    return {"site_id": best.site_id, "trajectory": traj}, report


def trajectory_json(scn: Scenario, site_id: str, traj) -> dict:
    return {
        "site_id": site_id,
        "wind": {"w_north_mps": scn.wind.w_north,
                 "w_east_mps": scn.wind.w_east},
        "cutoff": {"x_m": scn.cutoff[0], "y_m": scn.cutoff[1],
                   "altitude_m": scn.cutoff_altitude},
        **traj.to_dict(),
    }


def write_waypoint_csv(path, traj):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x_m", "y_m", "altitude_m", "heading_deg", "v_air_mps"])
        alt = traj.start_altitude
        drop = {tuple(c.at_waypoint): c.total for c in traj.turn_corrections}
        for seg in traj.segments:
            w.writerow([f"{seg.start[0]:.3f}", f"{seg.start[1]:.3f}",
                        f"{alt:.3f}", f"{math.degrees(seg.heading_g):.3f}",
                        f"{seg.v_air:.3f}"])
            alt -= seg.segment_loss + drop.get(tuple(seg.end), 0.0)
        last = traj.segments[-1]
        w.writerow([f"{last.end[0]:.3f}", f"{last.end[1]:.3f}",
                    f"{alt:.3f}", f"{math.degrees(last.heading_g):.3f}",
                    f"{last.v_air:.3f}"])


def contours_feature_collection(manifold, levels, origin=(0.0, 0.0)) -> dict:
    ox, oy = origin
    features = []
    for rec in iso_loss_contours(manifold, levels):
        for ring in rec["rings"]:
            features.append({
                "type": "Feature",
                "properties": {"loss_m": rec["level"]},
                "geometry": {
                    "type": "LineString",
                    # GeoJSON-style [east, north] pairs in local meters
                    "coordinates": [[oy + y, ox + x] for (x, y) in ring],
                },
            })
    return {"type": "FeatureCollection", "features": features}


def _cmd_plan(args) -> int:
    scn = load_scenario(args.scenario)
    result, report = plan_scenario(scn, with_turns=args.turns)
    if result is None:
        print(json.dumps({"failure": "unreachable",
                          "sites": report.to_dict()["sites"]}, indent=2))
        return EXIT_UNREACHABLE
    doc = trajectory_json(scn, result["site_id"], result["trajectory"])
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if args.csv:
        write_waypoint_csv(args.csv, result["trajectory"])
    if args.feet or args.knots:
        # display-only summary; the JSON above stays SI
        traj = result["trajectory"]
        alt = f"{traj.end_altitude * 3.28084:.0f} ft" if args.feet \
            else f"{traj.end_altitude:.1f} m"
        loss = f"{traj.total_loss * 3.28084:.0f} ft" if args.feet \
            else f"{traj.total_loss:.1f} m"
        v = traj.segments[0].v_air
        spd = f"{v * 1.943844:.1f} kt" if args.knots else f"{v:.1f} m/s"
        print(f"site {result['site_id']}: lose {loss}, arrive {alt}, "
              f"initial speed-to-fly {spd}", file=sys.stderr)
    return EXIT_OK


def _cmd_reach(args) -> int:
    scn = load_scenario(args.scenario)
    manifold = build_manifold(scn.aircraft, scn.wind,
                              scn.manifold_resolution_rad)
    report = reachability(scn.cutoff, scn.cutoff_altitude, scn.sites,
                          scn.aircraft, scn.wind, scn.grid, manifold=manifold)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def _cmd_manifold(args) -> int:
    scn = load_scenario(args.scenario)
    levels = [float(v) for v in args.levels.split(",")]
    manifold = build_manifold(scn.aircraft, scn.wind,
                              scn.manifold_resolution_rad)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["loss_m", "x_m", "y_m"])
            for rec in iso_loss_contours(manifold, levels):
                for ring in rec["rings"]:
                    for (x, y) in ring:
                        w.writerow([rec["level"], f"{scn.cutoff[0] + x:.3f}",
                                    f"{scn.cutoff[1] + y:.3f}"])
    print(json.dumps(contours_feature_collection(manifold, levels,
                                                 scn.cutoff), indent=2))
    return EXIT_OK


def _cmd_oracle_compare(args) -> int:
    scn = load_scenario(args.scenario)
    manifold = build_manifold(scn.aircraft, scn.wind,
                              scn.manifold_resolution_rad)
    report = reachability(scn.cutoff, scn.cutoff_altitude, scn.sites,
                          scn.aircraft, scn.wind, scn.grid, manifold=manifold)
    violated = False
    for res in report.sites:
        site = next(s for s in scn.sites if s["id"] == res.site_id)
        oracle = dense_dijkstra(scn.cutoff, scn.cutoff_altitude,
                                (site["x_m"], site["y_m"]), scn.aircraft,
                                scn.wind, scn.grid, manifold=manifold)
        planner_loss = res.trajectory.total_loss if res.trajectory else None
        oracle_loss = oracle.loss if oracle else None
        line = {"site_id": res.site_id, "planner_loss_m": planner_loss,
                "oracle_loss_m": oracle_loss,
                "bound_m": oracle.discretization_bound if oracle else None}
        if planner_loss is not None and oracle_loss is not None:
            gap = oracle_loss - planner_loss
            line["gap_m"] = gap
            if gap < -1e-6 or gap > oracle.discretization_bound:
                line["bound_violated"] = True
                violated = True
        print(json.dumps(line))
    return 1 if violated else EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app
    app = create_app(scenario_dir=args.scenario_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glideplan",
                                 description="Altitude-loss-optimal glide "
                                             "planning for engine-out descents")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan to the best reachable site")
    p.add_argument("scenario")
    p.add_argument("--out", help="write trajectory JSON here")
    p.add_argument("--csv", help="write waypoint CSV here")
    p.add_argument("--turns", action="store_true",
                   help="apply turn altitude-loss corrections")
    p.add_argument("--feet", action="store_true",
                   help="display altitudes in feet (JSON output stays SI)")
    p.add_argument("--knots", action="store_true",
                   help="display speeds in knots (JSON output stays SI)")
    p.set_defaults(fn=_cmd_plan)

    p = sub.add_parser("reach", help="reachability report for every site")
    p.add_argument("scenario")
    p.set_defaults(fn=_cmd_reach)

    p = sub.add_parser("manifold", help="iso-loss contours around the cutoff")
    p.add_argument("scenario")
    p.add_argument("--levels", default="100,200,500")
    p.add_argument("--csv", help="also write contour CSV here")
    p.set_defaults(fn=_cmd_manifold)

    p = sub.add_parser("oracle-compare",
                       help="planner vs dense-grid Dijkstra losses")
    p.add_argument("scenario")
    p.set_defaults(fn=_cmd_oracle_compare)

    p = sub.add_parser("serve", help="HTTP service for the operator UI")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--scenario-dir", default=None)
    p.set_defaults(fn=_cmd_serve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        print(json.dumps({"failure": "input-error", "detail": str(exc)}))
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
