import type { Overlays } from "./state.js";
import type { ScenarioJson } from "./types.js";
import {
  elevationRange,
  hillshade,
  worldToScreen,
  type Viewport,
} from "./view.js";

const COLORS = {
  obstacle: "rgba(200, 60, 40, 0.35)",
  obstacleEdge: "rgb(160, 40, 30)",
  hole: "rgba(255, 255, 255, 0.5)",
  ftp: "rgb(240, 140, 0)",
  path: "rgb(30, 90, 200)",
  contour: "rgba(60, 60, 60, 0.6)",
  cutoff: "rgb(20, 20, 20)",
  siteOk: "rgb(30, 140, 60)",
  siteBad: "rgb(190, 40, 40)",
  wind: "rgb(90, 60, 170)",
};

export function drawTerrain(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  overlays: Overlays,
): void {
  const t = overlays.terrain;
  ctx.fillStyle = "#e8e4da";
  ctx.fillRect(0, 0, v.widthPx, v.heightPx);
  if (!t) return;
  const shade = hillshade(t.elevations_m, t.dx_m, t.dy_m);
  const [lo, hi] = elevationRange(t.elevations_m);
  const span = Math.max(hi - lo, 1e-9);
  for (let i = 0; i < t.rows; i++) {
    for (let j = 0; j < t.cols; j++) {
      const x = t.x0_m + i * t.dx_m;
      const y = t.y0_m + j * t.dy_m;
      const [px, py] = worldToScreen(v, x, y + t.dy_m);
      const w = t.dx_m / v.metersPerPixel + 1;
      const h = t.dy_m / v.metersPerPixel + 1;
      const rel = (t.elevations_m[i][j] - lo) / span;
      const s = shade[i][j];
      const r = Math.round((120 + 100 * rel) * (0.4 + 0.6 * s));
      const g = Math.round((150 + 60 * rel) * (0.4 + 0.6 * s));
      const b = Math.round((110 + 40 * rel) * (0.4 + 0.6 * s));
      ctx.fillStyle = `rgb(${r}, ${g}, ${b})`;
      ctx.fillRect(px, py - h, w + 1, h + 1);
    }
  }
}

function tracePolyline(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  points: Array<[number, number]>,
  close = false,
): void {
  ctx.beginPath();
  points.forEach(([x, y], idx) => {
    const [px, py] = worldToScreen(v, x, y);
    if (idx === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  if (close) ctx.closePath();
}

export function drawObstacles(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  overlays: Overlays,
): void {
  if (!overlays.obstacles) return;
  for (const poly of overlays.obstacles.polygons) {
    tracePolyline(ctx, v, poly.vertices_m, true);
    ctx.fillStyle = poly.hole ? COLORS.hole : COLORS.obstacle;
    ctx.fill();
    ctx.strokeStyle = COLORS.obstacleEdge;
    ctx.lineWidth = 1;
    ctx.stroke();
  }
  for (const f of overlays.obstacles.ftps) {
    const [px, py] = worldToScreen(v, f.position_m[0], f.position_m[1]);
    ctx.fillStyle = COLORS.ftp;
    ctx.beginPath();
    ctx.arc(px, py, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

export function drawContours(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  overlays: Overlays,
  cutoff: { x_m: number; y_m: number },
): void {
  if (!overlays.contours) return;
  ctx.strokeStyle = COLORS.contour;
  ctx.lineWidth = 1;
  for (const feat of overlays.contours.features) {
    // server emits [east, north] pairs relative to the manifold origin
    const pts = feat.geometry.coordinates.map(
      ([e, n]) => [cutoff.x_m + n, cutoff.y_m + e] as [number, number],
    );
    tracePolyline(ctx, v, pts);
    ctx.stroke();
  }
}

export function drawTrajectory(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  overlays: Overlays,
): void {
  const traj = overlays.trajectory;
  if (!traj || traj.segments.length === 0) return;
  const pts: Array<[number, number]> = [traj.segments[0].start_m];
  for (const seg of traj.segments) pts.push(seg.end_m);
  tracePolyline(ctx, v, pts);
  ctx.strokeStyle = COLORS.path;
  ctx.lineWidth = 2.5;
  ctx.stroke();
  for (const p of pts) {
    const [px, py] = worldToScreen(v, p[0], p[1]);
    ctx.fillStyle = COLORS.path;
    ctx.beginPath();
    ctx.arc(px, py, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

export function drawScenarioMarkers(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  draft: ScenarioJson,
  overlays: Overlays,
): void {
  const badgeBySite = new Map(overlays.badges.map((b) => [b.siteId, b]));
  for (const site of draft.sites) {
    const [px, py] = worldToScreen(v, site.x_m, site.y_m);
    const badge = badgeBySite.get(site.id);
    ctx.fillStyle =
      badge && badge.state === "unreachable" ? COLORS.siteBad : COLORS.siteOk;
    ctx.beginPath();
    ctx.rect(px - 5, py - 5, 10, 10);
    ctx.fill();
    ctx.fillStyle = "#111";
    ctx.font = "12px sans-serif";
    ctx.fillText(site.id, px + 8, py - 8);
  }
  const c = draft.cutoff;
  const [cx, cy] = worldToScreen(v, c.x_m, c.y_m);
  ctx.fillStyle = COLORS.cutoff;
  ctx.beginPath();
  ctx.arc(cx, cy, 6, 0, 2 * Math.PI);
  ctx.fill();
  drawWindArrow(ctx, v, draft);
}

export const WIND_PX_PER_MPS = 4;

export function drawWindArrow(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  draft: ScenarioJson,
): void {
  const c = draft.cutoff;
  const [cx, cy] = worldToScreen(v, c.x_m, c.y_m);
  const dxPx = draft.wind.w_east_mps * WIND_PX_PER_MPS;
  const dyPx = -draft.wind.w_north_mps * WIND_PX_PER_MPS;
  ctx.strokeStyle = COLORS.wind;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(cx, cy);
  ctx.lineTo(cx + dxPx, cy + dyPx);
  ctx.stroke();
  ctx.fillStyle = COLORS.wind;
  ctx.beginPath();
  ctx.arc(cx + dxPx, cy + dyPx, 4, 0, 2 * Math.PI);
  ctx.fill();
}

export function drawAll(
  ctx: CanvasRenderingContext2D,
  v: Viewport,
  draft: ScenarioJson,
  overlays: Overlays,
): void {
  drawTerrain(ctx, v, overlays);
  drawContours(ctx, v, overlays, draft.cutoff);
  drawObstacles(ctx, v, overlays);
  drawTrajectory(ctx, v, overlays);
  drawScenarioMarkers(ctx, v, draft, overlays);
}
