"""Altitude-loss-optimal glide planning for engine-out descents."""
from .aero import (AircraftModel, Wind, WindComponents, GlideSolution,
                   DegenerateWindTriangleError, wind_components, ground_speed,
                   sink_rate, glide_slope, speed_to_fly, optimal_glide,
                   airmass_heading, load_bundled_aircraft)
from .manifold import AloManifold, build_manifold, manifold_loss, \
    iso_loss_contours
from .terrain import (DtmGrid, DtmFormatError, AircraftBelowTerrainError,
                      LocalObstacleMap, build_local_obstacle_map, load_dtm,
                      load_esri_ascii, load_srtm_hgt, synthetic_grid)
from .geometry import (ObstaclePolygon, ObstacleField, Ftp, find_ftps,
                       essential_ftps, directly_reachable)
from .turns import TurnCorrection, turn_loss, optimal_bank, OPTIMAL_BANK
from .planner import (Segment, Trajectory, PlanFailure, SiteResult,
                      ReachabilityReport, HeuristicViolationError,
                      alo_search, reachability, select_site,
                      apply_turn_corrections, ReplanSession, replan_session)
from .oracle import OracleResult, dense_dijkstra, verify_feasibility
from .scenario import Scenario, ScenarioError, load_scenario, \
    scenario_from_dict

__all__ = [
    "AircraftModel", "Wind", "WindComponents", "GlideSolution",
    "DegenerateWindTriangleError", "wind_components", "ground_speed",
    "sink_rate", "glide_slope", "speed_to_fly", "optimal_glide",
    "airmass_heading", "load_bundled_aircraft",
    "AloManifold", "build_manifold", "manifold_loss", "iso_loss_contours",
    "DtmGrid", "DtmFormatError", "AircraftBelowTerrainError",
    "LocalObstacleMap", "build_local_obstacle_map", "load_dtm",
    "load_esri_ascii", "load_srtm_hgt", "synthetic_grid",
    "ObstaclePolygon", "ObstacleField", "Ftp", "find_ftps",
    "essential_ftps", "directly_reachable",
    "TurnCorrection", "turn_loss", "optimal_bank", "OPTIMAL_BANK",
    "Segment", "Trajectory", "PlanFailure", "SiteResult",
    "ReachabilityReport", "HeuristicViolationError", "alo_search",
    "reachability", "select_site", "apply_turn_corrections",
    "ReplanSession", "replan_session",
    "OracleResult", "dense_dijkstra", "verify_feasibility",
    "Scenario", "ScenarioError", "load_scenario", "scenario_from_dict",
]

__version__ = "0.1.0"
