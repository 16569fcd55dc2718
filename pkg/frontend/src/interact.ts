import { WIND_PX_PER_MPS } from "./render.js";
import type { PlanStore } from "./state.js";
import type { ScenarioJson } from "./types.js";
import { screenToWorld, worldToScreen, type Viewport } from "./view.js";

export type DragTarget =
  | { kind: "cutoff" }
  | { kind: "site"; siteId: string }
  | { kind: "wind" }
  | null;

const HIT_RADIUS_PX = 10;

function near(px: number, py: number, qx: number, qy: number): boolean {
  return Math.hypot(px - qx, py - qy) <= HIT_RADIUS_PX;
}

/** Which draggable marker sits under the pointer. The wind arrow tip wins
 * over the cutoff dot so a calm-wind arrow is still grabbable. */
export function hitTest(
  v: Viewport,
  draft: ScenarioJson,
  px: number,
  py: number,
): DragTarget {
  const [cx, cy] = worldToScreen(v, draft.cutoff.x_m, draft.cutoff.y_m);
  const tipX = cx + draft.wind.w_east_mps * WIND_PX_PER_MPS;
  const tipY = cy - draft.wind.w_north_mps * WIND_PX_PER_MPS;
  const windIsDistinct = Math.hypot(tipX - cx, tipY - cy) > HIT_RADIUS_PX;
  if (windIsDistinct && near(px, py, tipX, tipY)) return { kind: "wind" };
  if (near(px, py, cx, cy)) return { kind: "cutoff" };
  for (const site of draft.sites) {
    const [sx, sy] = worldToScreen(v, site.x_m, site.y_m);
    if (near(px, py, sx, sy)) return { kind: "site", siteId: site.id };
  }
  return null;
}

/** Apply a drag position to the store. Wind drags convert the arrow tip back
 * into a velocity; position drags go straight to world coordinates. */
export function applyDrag(
  store: PlanStore,
  v: Viewport,
  target: DragTarget,
  px: number,
  py: number,
): void {
  if (!target) return;
  if (target.kind === "wind") {
    const c = store.draft.cutoff;
    const [cx, cy] = worldToScreen(v, c.x_m, c.y_m);
    const wEast = (px - cx) / WIND_PX_PER_MPS;
    const wNorth = (cy - py) / WIND_PX_PER_MPS;
    store.setWind(wNorth, wEast);
    return;
  }
  const [x, y] = screenToWorld(v, px, py);
  if (target.kind === "cutoff") store.setCutoff(x, y);
  else store.moveSite(target.siteId, x, y);
}

export function attachInteractions(
  canvas: HTMLCanvasElement,
  store: PlanStore,
  viewport: () => Viewport,
): void {
  let target: DragTarget = null;
  const pos = (ev: PointerEvent): [number, number] => {
    const rect = canvas.getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
  };
  canvas.addEventListener("pointerdown", (ev) => {
    const [px, py] = pos(ev);
    target = hitTest(viewport(), store.draft, px, py);
    if (target) canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!target) return;
    const [px, py] = pos(ev);
    applyDrag(store, viewport(), target, px, py);
  });
  canvas.addEventListener("pointerup", () => {
    target = null;
  });
}
