import type {
  FeatureCollectionJson,
  ObstaclesJson,
  ReachReportJson,
  TerrainJson,
  TrajectoryJson,
} from "../src/types.js";

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function trajectoryDoc(lossM: number, segments = 1): TrajectoryJson {
  const segs = [];
  for (let i = 0; i < segments; i++) {
    segs.push({
      start_m: [i * 100, 0] as [number, number],
      end_m: [(i + 1) * 100, 0] as [number, number],
      heading_rad: 0,
      v_air_mps: 35,
      v_ground_mps: 35,
      loss_m: lossM / segments,
    });
  }
  return {
    site_id: "strip",
    wind: { w_north_mps: 0, w_east_mps: 0 },
    cutoff: { x_m: 0, y_m: 0, altitude_m: 500 },
    start_altitude_m: 500,
    total_loss_m: lossM,
    end_altitude_m: 500 - lossM,
    feasible_after_turns: null,
    segments: segs,
    turn_corrections: [],
    profile: [
      { s_m: 0, altitude_m: 500 },
      { s_m: 100 * segments, altitude_m: 500 - lossM },
    ],
  };
}

export function reachDoc(lossM: number, reachable = true): ReachReportJson {
  return {
    sites: [
      {
        site_id: "strip",
        reachable,
        arrival_margin_m: reachable ? 500 - lossM : null,
        trajectory: reachable ? trajectoryDoc(lossM) : null,
        failure: reachable ? null : { failure: "insufficient-altitude" },
      },
    ],
  };
}

export const emptyObstacles: ObstaclesJson = { polygons: [], ftps: [] };

export const flatTerrain: TerrainJson = {
  x0_m: 0,
  y0_m: 0,
  dx_m: 50,
  dy_m: 50,
  rows: 2,
  cols: 2,
  elevations_m: [
    [0, 0],
    [0, 0],
  ],
  clearance_m: 50,
};

export const emptyContours: FeatureCollectionJson = {
  type: "FeatureCollection",
  features: [],
};

/** Stub service keyed by path suffix; per-path response factories can be
 * replaced mid-test to model slow or failing endpoints. */
export class StubService {
  calls: string[] = [];
  handlers = new Map<string, () => Promise<Response>>();

  constructor() {
    this.set("/plan", () => jsonResponse(trajectoryDoc(120)));
    this.set("/reach", () => jsonResponse(reachDoc(120)));
    this.set("/obstacles", () => jsonResponse(emptyObstacles));
    this.set("/terrain", () => jsonResponse(flatTerrain));
    this.set("/manifold", () => jsonResponse(emptyContours));
  }

  set(path: string, handler: () => Response | Promise<Response>): void {
    this.handlers.set(path, async () => handler());
  }

  fetch = (input: string): Promise<Response> => {
    const path = new URL(input, "http://stub").pathname;
    this.calls.push(path);
    for (const [suffix, handler] of this.handlers) {
      if (path === suffix || path.endsWith(suffix)) return handler();
    }
    return Promise.resolve(jsonResponse({ detail: "not found" }, 404));
  };

  countCalls(path: string): number {
    return this.calls.filter((c) => c === path).length;
  }
}
