import type {
  FeatureCollectionJson,
  ObstaclesJson,
  ReachReportJson,
  ScenarioJson,
  SessionCreatedJson,
  SessionStateJson,
  TerrainJson,
  TrajectoryJson,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`service responded ${status}`);
  }
}

/** Monotone sequence gate. Each request takes a ticket with next(); a
 * response is applied only if accept() approves its ticket, so a slow old
 * response can never overwrite a newer one. */
export class SequenceGate {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  accept(seq: number): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    return true;
  }
}

/** Thin typed client over the planning service. Performs no computation on
 * the payloads beyond JSON decoding. */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...a) => fetch(...a),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await res.json().catch(() => null);
    if (!res.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(res.status, detail);
    }
    return payload as T;
  }

  plan(scenario: ScenarioJson): Promise<TrajectoryJson> {
    return this.request("POST", "/plan", scenario);
  }

  reach(scenario: ScenarioJson): Promise<ReachReportJson> {
    return this.request("POST", "/reach", scenario);
  }

  obstacles(scenario: ScenarioJson): Promise<ObstaclesJson> {
    return this.request("POST", "/obstacles", scenario);
  }

  terrain(scenario: ScenarioJson): Promise<TerrainJson> {
    return this.request("POST", "/terrain", scenario);
  }

  manifold(
    wNorth: number,
    wEast: number,
    levels: number[],
    aircraft = "cessna172",
  ): Promise<FeatureCollectionJson> {
    const q = new URLSearchParams({
      wx: String(wNorth),
      wy: String(wEast),
      levels: levels.join(","),
      aircraft,
    });
    return this.request("GET", `/manifold?${q.toString()}`);
  }

  createSession(scenario: ScenarioJson): Promise<SessionCreatedJson> {
    return this.request("POST", "/session", scenario);
  }

  sessionWind(
    id: string,
    wNorth: number,
    wEast: number,
  ): Promise<SessionStateJson> {
    return this.request("POST", `/session/${id}/wind`, {
      w_north_mps: wNorth,
      w_east_mps: wEast,
    });
  }

  sessionAdvance(id: string, dropM?: number): Promise<SessionStateJson> {
    const body = dropM === undefined ? {} : { altitude_drop_m: dropM };
    return this.request("POST", `/session/${id}/advance`, body);
  }

  sessionState(id: string): Promise<SessionStateJson> {
    return this.request("GET", `/session/${id}/state`);
  }
}
