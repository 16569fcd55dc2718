/** JSON shapes exchanged with the planning service. Field names mirror the
 * server exactly; the UI renders these values verbatim and never derives
 * physics from them. */

export interface WindJson {
  w_north_mps: number;
  w_east_mps: number;
}

export interface CutoffJson {
  x_m: number;
  y_m: number;
  altitude_m: number;
}

export interface SiteJson {
  id: string;
  x_m: number;
  y_m: number;
  weight?: number;
}

export interface HillJson {
  cx: number;
  cy: number;
  height: number;
  sigma: number;
}

export interface SyntheticRecipeJson {
  nx: number;
  ny: number;
  dx: number;
  dy: number;
  base: number;
  hills: HillJson[];
}

export interface DtmJson {
  format: string;
  recipe?: SyntheticRecipeJson;
  path?: string;
}

export interface ScenarioJson {
  aircraft: string;
  wind: WindJson;
  cutoff: CutoffJson;
  sites: SiteJson[];
  dtm: DtmJson;
  options?: Record<string, unknown>;
}

export interface SegmentJson {
  start_m: [number, number];
  end_m: [number, number];
  heading_rad: number;
  v_air_mps: number;
  v_ground_mps: number;
  loss_m: number;
}

export interface TurnCorrectionJson {
  at_waypoint_m: [number, number];
  delta_psi_air_rad: number;
  bank_rad: number;
  arc_loss_m: number;
  energy_term_m: number;
  total_m: number;
  radius_m: number;
}

export interface ProfilePointJson {
  s_m: number;
  altitude_m: number;
}

/** Trajectory body as nested inside reachability results. */
export interface TrajectoryCoreJson {
  start_altitude_m: number;
  total_loss_m: number;
  end_altitude_m: number;
  feasible_after_turns: boolean | null;
  segments: SegmentJson[];
  turn_corrections: TurnCorrectionJson[];
  profile: ProfilePointJson[];
}

/** Top-level /plan response: core trajectory plus scenario echo. */
export interface TrajectoryJson extends TrajectoryCoreJson {
  site_id: string;
  wind: WindJson;
  cutoff: CutoffJson;
}

export interface PlanFailureJson {
  failure: string;
  detail?: string;
}

export interface SiteResultJson {
  site_id: string;
  reachable: boolean;
  arrival_margin_m: number | null;
  trajectory: TrajectoryCoreJson | null;
  failure: PlanFailureJson | null;
}

export interface ReachReportJson {
  sites: SiteResultJson[];
}

export interface UnreachableJson {
  failure: "unreachable";
  sites: SiteResultJson[];
}

export interface ObstaclePolygonJson {
  component_id: number;
  hole: boolean;
  vertices_m: [number, number][];
}

export interface FtpJson {
  position_m: [number, number];
  obstacle_id: number;
  tangent_side: string;
}

export interface ObstaclesJson {
  polygons: ObstaclePolygonJson[];
  ftps: FtpJson[];
}

export interface TerrainJson {
  x0_m: number;
  y0_m: number;
  dx_m: number;
  dy_m: number;
  rows: number;
  cols: number;
  elevations_m: number[][];
  clearance_m: number;
}

export interface ContourFeatureJson {
  type: "Feature";
  properties: { loss_m: number };
  geometry: { type: "LineString"; coordinates: [number, number][] };
}

export interface FeatureCollectionJson {
  type: "FeatureCollection";
  features: ContourFeatureJson[];
}

export interface SessionStateJson {
  position_m: [number, number];
  altitude_m: number;
  wind: WindJson;
  site_id: string | null;
  done: boolean;
  plan: TrajectoryCoreJson | null;
  n_replans: number;
}

export interface SessionCreatedJson {
  session_id: string;
  state: SessionStateJson;
}
