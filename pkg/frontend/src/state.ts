import { ApiClient, ApiError, SequenceGate } from "./api.js";
import { debounce, type Debounced } from "./util.js";
import type {
  FeatureCollectionJson,
  ObstaclesJson,
  ScenarioJson,
  SiteResultJson,
  TerrainJson,
  TrajectoryJson,
  UnreachableJson,
} from "./types.js";

export type BadgeState = "reachable" | "unreachable" | "pending";

export interface SiteBadge {
  siteId: string;
  state: BadgeState;
  /** total loss of the per-site plan, straight from the service JSON */
  lossM: number | null;
  marginM: number | null;
  failure: string | null;
}

export interface Overlays {
  trajectory: TrajectoryJson | null;
  planFailure: string | null;
  badges: SiteBadge[];
  obstacles: ObstaclesJson | null;
  terrain: TerrainJson | null;
  contours: FeatureCollectionJson | null;
  /** wall-clock ms when the overlays were last rebuilt from a response */
  appliedAtMs: number;
  error: string | null;
}

function badgesFrom(sites: SiteResultJson[]): SiteBadge[] {
  return sites.map((s) => ({
    siteId: s.site_id,
    state: s.reachable ? "reachable" : "unreachable",
    lossM: s.trajectory ? s.trajectory.total_loss_m : null,
    marginM: s.arrival_margin_m,
    failure: s.failure ? s.failure.failure : null,
  }));
}

export interface PlanStoreOptions {
  debounceMs?: number;
  contourLevels?: number[];
  now?: () => number;
}

/** Holds the editable scenario draft plus the overlays derived from the last
 * accepted server responses. All overlay numbers come verbatim from the
 * service; the store only routes and sequences them. */
export class PlanStore {
  readonly draft: ScenarioJson;
  overlays: Overlays = {
    trajectory: null,
    planFailure: null,
    badges: [],
    obstacles: null,
    terrain: null,
    contours: null,
    appliedAtMs: 0,
    error: null,
  };

  private readonly gate = new SequenceGate();
  private readonly listeners: Array<() => void> = [];
  private readonly scheduleRefresh: Debounced<[]>;
  private readonly contourLevels: number[];
  private readonly now: () => number;
  private inflight: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: ApiClient,
    scenario: ScenarioJson,
    opts: PlanStoreOptions = {},
  ) {
    this.draft = structuredClone(scenario);
    this.contourLevels = opts.contourLevels ?? [100, 200, 400];
    this.now = opts.now ?? Date.now;
    this.scheduleRefresh = debounce(() => {
      this.inflight = this.refresh();
    }, opts.debounceMs ?? 150);
  }

  subscribe(fn: () => void): () => void {
    this.listeners.push(fn);
    return () => {
      const i = this.listeners.indexOf(fn);
      if (i >= 0) this.listeners.splice(i, 1);
    };
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  /** Awaitable barrier for tests: resolves once the pending refresh lands. */
  settled(): Promise<void> {
    return this.inflight;
  }

  setWind(wNorth: number, wEast: number): void {
    this.draft.wind = { w_north_mps: wNorth, w_east_mps: wEast };
    this.scheduleRefresh();
  }

  setCutoff(x: number, y: number): void {
    this.draft.cutoff.x_m = x;
    this.draft.cutoff.y_m = y;
    this.scheduleRefresh();
  }

  setAltitude(altitudeM: number): void {
    this.draft.cutoff.altitude_m = altitudeM;
    this.scheduleRefresh();
  }

  moveSite(siteId: string, x: number, y: number): void {
    const site = this.draft.sites.find((s) => s.id === siteId);
    if (!site) return;
    site.x_m = x;
    site.y_m = y;
    this.scheduleRefresh();
  }

  /** Re-plan against the current draft. Responses are gated by sequence
   * number, so out-of-order arrivals from superseded drafts are dropped. */
  async refresh(): Promise<void> {
    const seq = this.gate.next();
    const scenario = structuredClone(this.draft);
    const wind = scenario.wind;
    const [plan, reach, obstacles, terrain, contours] =
      await Promise.allSettled([
        this.api.plan(scenario),
        this.api.reach(scenario),
        this.api.obstacles(scenario),
        this.api.terrain(scenario),
        this.api.manifold(
          wind.w_north_mps,
          wind.w_east_mps,
          this.contourLevels,
          scenario.aircraft,
        ),
      ]);
    if (!this.gate.accept(seq)) return;

    const next: Overlays = {
      ...this.overlays,
      trajectory: null,
      planFailure: null,
      error: null,
      appliedAtMs: this.now(),
    };
    if (plan.status === "fulfilled") {
      next.trajectory = plan.value;
    } else if (
      plan.reason instanceof ApiError &&
      plan.reason.status === 422
    ) {
      const detail = plan.reason.detail as UnreachableJson;
      next.planFailure = detail.failure;
      next.badges = badgesFrom(detail.sites);
    } else {
      next.error = String(plan.reason);
    }
    if (reach.status === "fulfilled") {
      next.badges = badgesFrom(reach.value.sites);
    }
    if (obstacles.status === "fulfilled") next.obstacles = obstacles.value;
    if (terrain.status === "fulfilled") next.terrain = terrain.value;
    if (contours.status === "fulfilled") next.contours = contours.value;
    this.overlays = next;
    this.notify();
  }
}
