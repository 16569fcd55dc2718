import { describe, expect, it } from "vitest";

import {
  elevationRange,
  fitViewport,
  hillshade,
  screenToWorld,
  worldToScreen,
  type Viewport,
} from "../src/view.js";

const vp: Viewport = {
  worldX0: 0,
  worldY0: 0,
  metersPerPixel: 10,
  widthPx: 400,
  heightPx: 300,
};

describe("coordinate transforms", () => {
  it("maps world origin to the bottom-left pixel", () => {
    expect(worldToScreen(vp, 0, 0)).toEqual([0, 300]);
  });

  it("north goes up, east goes right", () => {
    const [px, py] = worldToScreen(vp, 1000, 2000);
    expect(px).toBe(200);
    expect(py).toBe(200);
  });

  it("round-trips through screenToWorld", () => {
    const [x, y] = screenToWorld(vp, ...worldToScreen(vp, 731.5, 1289.25));
    expect(x).toBeCloseTo(731.5, 9);
    expect(y).toBeCloseTo(1289.25, 9);
  });

  it("fitViewport contains the whole world rectangle", () => {
    const v = fitViewport(100, 2100, -500, 3500, 640, 480);
    const corners: Array<[number, number]> = [
      [100, -500],
      [100, 3500],
      [2100, -500],
      [2100, 3500],
    ];
    for (const [x, y] of corners) {
      const [px, py] = worldToScreen(v, x, y);
      expect(px).toBeGreaterThanOrEqual(-1e-6);
      expect(px).toBeLessThanOrEqual(640 + 1e-6);
      expect(py).toBeGreaterThanOrEqual(-1e-6);
      expect(py).toBeLessThanOrEqual(480 + 1e-6);
    }
  });
});

describe("hillshade", () => {
  it("is uniform over flat terrain and bounded in [0, 1]", () => {
    const flat = [
      [10, 10, 10],
      [10, 10, 10],
    ];
    const s = hillshade(flat, 50, 50);
    const first = s[0][0];
    for (const row of s) {
      for (const v of row) {
        expect(v).toBe(first);
        expect(v).toBeGreaterThanOrEqual(0);
        expect(v).toBeLessThanOrEqual(1);
      }
    }
  });

  it("shades a slope differently from flat ground", () => {
    const ramp = [
      [0, 0, 0],
      [100, 100, 100],
      [200, 200, 200],
    ];
    const s = hillshade(ramp, 50, 50);
    const flat = hillshade(
      [
        [0, 0, 0],
        [0, 0, 0],
        [0, 0, 0],
      ],
      50,
      50,
    );
    expect(s[1][1]).not.toBe(flat[1][1]);
  });

  it("elevationRange scans the raster", () => {
    expect(elevationRange([[3, -2], [7, 0]])).toEqual([-2, 7]);
  });
});
