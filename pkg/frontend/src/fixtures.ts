import type { ScenarioJson } from "./types.js";

/** Demo scenario: an east-west ridge of nine overlapping hills between the
 * cutoff and the landing strip. With a 20 m/s easterly tailwind the direct
 * track clears the ridge; in calm air the plan has to go around it. */
export function ridgeScenario(): ScenarioJson {
  const hills = [];
  for (let k = 0; k < 9; k++) {
    hills.push({ cx: 800 + 200 * k, cy: 1600, height: 150, sigma: 180 });
  }
  return {
    aircraft: "cessna172",
    wind: { w_north_mps: 0.0, w_east_mps: 20.0 },
    cutoff: { x_m: 1600.0, y_m: 300.0, altitude_m: 500.0 },
    sites: [{ id: "strip", x_m: 1600.0, y_m: 2900.0, weight: 1.0 }],
    dtm: {
      format: "synthetic-spec",
      recipe: {
        nx: 64,
        ny: 64,
        dx: 50.0,
        dy: 50.0,
        base: 0.0,
        hills,
      },
    },
  };
}
