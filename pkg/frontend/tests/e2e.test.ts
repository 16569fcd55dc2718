/** End-to-end against the real planning service: spawns `glideplan serve`
 * and drives the store the same way the canvas interactions do. Exercises
 * the ridge fixture's wind flip (easterly 20 m/s: direct track over the
 * ridge; calm: multi-segment circumvention). */
import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { formatLoss } from "../src/format.js";
import { ridgeScenario } from "../src/fixtures.js";
import { SessionConsole } from "../src/session.js";
import { PlanStore } from "../src/state.js";
import type { TrajectoryJson } from "../src/types.js";

const PORT = 8612;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 60000;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/manifold?levels=100`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  server = spawn("glideplan", ["serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForService();
});

afterAll(() => {
  server.kill();
});

describe("operator UI against the live service", () => {
  it("wind drag from east 20 m/s to calm flips direct to circumventing",
    async () => {
      const api = new ApiClient(BASE);
      const store = new PlanStore(api, ridgeScenario(), { debounceMs: 0 });

      await store.refresh();
      expect(store.overlays.trajectory).not.toBeNull();
      const tailwindLoss = store.overlays.trajectory!.total_loss_m;
      expect(store.overlays.trajectory!.segments).toHaveLength(1);
      expect(store.overlays.badges[0]).toMatchObject({
        siteId: "strip",
        state: "reachable",
      });
      const tailwindBadgeLoss = store.overlays.badges[0].lossM;

      store.setWind(0, 0); // the wind-arrow drag ends at the cutoff: calm
      await new Promise((r) => setTimeout(r, 5));
      await store.settled();

      const calm = store.overlays.trajectory!;
      expect(calm.segments.length).toBeGreaterThanOrEqual(2);
      expect(calm.total_loss_m).toBeGreaterThan(tailwindLoss);
      // overlays were rebuilt promptly once the response landed
      expect(Date.now() - store.overlays.appliedAtMs).toBeLessThan(1000);
      // reachability badge reflects the new wind, not the old response
      expect(store.overlays.badges[0].state).toBe("reachable");
      expect(store.overlays.badges[0].lossM).toBe(calm.total_loss_m);
      expect(store.overlays.badges[0].lossM).not.toBe(tailwindBadgeLoss);

      // displayed losses equal the wire JSON exactly: re-fetch the same
      // scenario out-of-band and compare the formatted strings
      const res = await fetch(`${BASE}/plan`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(store.draft),
      });
      const wire = (await res.json()) as TrajectoryJson;
      expect(formatLoss(calm.total_loss_m)).toBe(
        `${wire.total_loss_m} m`,
      );
      for (let i = 0; i < calm.segments.length; i++) {
        expect(formatLoss(calm.segments[i].loss_m)).toBe(
          `${wire.segments[i].loss_m} m`,
        );
      }
    });

  it("an out-of-range cutoff altitude shows an unreachable badge",
    async () => {
      const api = new ApiClient(BASE);
      const store = new PlanStore(api, ridgeScenario(), { debounceMs: 0 });
      store.setAltitude(60);
      await new Promise((r) => setTimeout(r, 5));
      await store.settled();
      expect(store.overlays.trajectory).toBeNull();
      expect(store.overlays.planFailure).toBe("unreachable");
      expect(store.overlays.badges[0].state).toBe("unreachable");
    });

  it("obstacle and terrain overlays arrive for the ridge fixture",
    async () => {
      const api = new ApiClient(BASE);
      const scenario = ridgeScenario();
      scenario.wind = { w_north_mps: 0, w_east_mps: 0 };
      const store = new PlanStore(api, scenario, { debounceMs: 0 });
      await store.refresh();
      // in calm air the ridge is an obstacle at 500 m cutoff altitude
      expect(store.overlays.obstacles!.polygons.length).toBeGreaterThan(0);
      expect(store.overlays.obstacles!.ftps.length).toBeGreaterThan(0);
      expect(store.overlays.terrain!.rows).toBe(64);
      expect(store.overlays.contours!.features.length).toBeGreaterThan(0);
    });

  it("session console: wind injection triggers a replan", async () => {
    const api = new ApiClient(BASE);
    const con = new SessionConsole(api);
    await con.start(ridgeScenario());
    expect(con.state!.plan!.segments).toHaveLength(1);
    const replansBefore = con.state!.n_replans;

    await con.injectWind(0, 0);
    expect(con.state!.n_replans).toBeGreaterThan(replansBefore);
    expect(con.state!.plan!.segments.length).toBeGreaterThanOrEqual(2);
    expect(con.state!.wind).toEqual({ w_north_mps: 0, w_east_mps: 0 });

    await con.advance(100);
    expect(con.state!.altitude_m).toBeCloseTo(400, 6);
    // profile is anchored at the most recent replan point, which trails the
    // scrubbed altitude by at most one replan interval
    const series = con.profileSeries();
    expect(series.length).toBeGreaterThan(1);
    expect(series[0].altitudeM).toBeGreaterThanOrEqual(con.state!.altitude_m);
    expect(series[0].altitudeM).toBeLessThan(500);
  });
});
