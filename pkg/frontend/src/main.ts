import { ApiClient } from "./api.js";
import { ridgeScenario } from "./fixtures.js";
import { formatAltitude, formatLoss, formatWind } from "./format.js";
import { attachInteractions } from "./interact.js";
import { drawAll } from "./render.js";
import { SessionConsole } from "./session.js";
import { PlanStore } from "./state.js";
import { fitViewport, type Viewport } from "./view.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ??
  "http://127.0.0.1:8000";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function worldBounds(store: PlanStore): [number, number, number, number] {
  const t = store.overlays.terrain;
  if (t) {
    return [
      t.x0_m,
      t.x0_m + t.rows * t.dx_m,
      t.y0_m,
      t.y0_m + t.cols * t.dy_m,
    ];
  }
  const xs = [store.draft.cutoff.x_m, ...store.draft.sites.map((s) => s.x_m)];
  const ys = [store.draft.cutoff.y_m, ...store.draft.sites.map((s) => s.y_m)];
  return [
    Math.min(...xs) - 500,
    Math.max(...xs) + 500,
    Math.min(...ys) - 500,
    Math.max(...ys) + 500,
  ];
}

function renderPanel(store: PlanStore): void {
  const o = store.overlays;
  const lines: string[] = [];
  lines.push(
    `wind: ${formatWind(store.draft.wind.w_north_mps, store.draft.wind.w_east_mps)}`,
  );
  lines.push(`cutoff altitude: ${formatAltitude(store.draft.cutoff.altitude_m)}`);
  if (o.trajectory) {
    lines.push(`site: ${o.trajectory.site_id}`);
    lines.push(`total loss: ${formatLoss(o.trajectory.total_loss_m)}`);
    lines.push(`arrival altitude: ${formatAltitude(o.trajectory.end_altitude_m)}`);
    lines.push(`segments: ${o.trajectory.segments.length}`);
  } else if (o.planFailure) {
    lines.push(`plan failed: ${o.planFailure}`);
  }
  if (o.error) lines.push(`error: ${o.error}`);
  el("status").textContent = lines.join("\n");

  const badges = el("badges");
  badges.innerHTML = "";
  for (const b of o.badges) {
    const span = document.createElement("span");
    span.className = `badge badge-${b.state}`;
    span.textContent =
      b.state === "reachable" && b.lossM !== null
        ? `${b.siteId}: reachable, loss ${formatLoss(b.lossM)}`
        : `${b.siteId}: ${b.failure ?? b.state}`;
    badges.appendChild(span);
  }
}

function drawProfileChart(
  ctx: CanvasRenderingContext2D,
  series: Array<{ sM: number; altitudeM: number }>,
  w: number,
  h: number,
): void {
  ctx.clearRect(0, 0, w, h);
  if (series.length < 2) return;
  const sMax = series[series.length - 1].sM || 1;
  const alts = series.map((p) => p.altitudeM);
  const aMin = Math.min(...alts);
  const aMax = Math.max(...alts);
  const span = Math.max(aMax - aMin, 1e-9);
  ctx.strokeStyle = "rgb(30, 90, 200)";
  ctx.lineWidth = 2;
  ctx.beginPath();
  series.forEach((p, i) => {
    const px = (p.sM / sMax) * (w - 10) + 5;
    const py = h - 5 - ((p.altitudeM - aMin) / span) * (h - 10);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function main(): void {
  const api = new ApiClient(SERVICE_URL);
  const store = new PlanStore(api, ridgeScenario());
  const session = new SessionConsole(api);

  const canvas = el<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d")!;
  const chart = el<HTMLCanvasElement>("profile");
  const chartCtx = chart.getContext("2d")!;

  let viewport: Viewport = fitViewport(0, 3200, 0, 3200,
    canvas.width, canvas.height);

  const redraw = () => {
    const [xMin, xMax, yMin, yMax] = worldBounds(store);
    viewport = fitViewport(xMin, xMax, yMin, yMax,
      canvas.width, canvas.height);
    drawAll(ctx, viewport, store.draft, store.overlays);
    renderPanel(store);
  };
  store.subscribe(redraw);
  attachInteractions(canvas, store, () => viewport);

  el("altitude-input").addEventListener("change", (ev) => {
    store.setAltitude(Number((ev.target as HTMLInputElement).value));
  });
  el("calm-button").addEventListener("click", () => store.setWind(0, 0));

  session.subscribe(() => {
    const s = session.state;
    el("session-status").textContent = s
      ? `altitude ${formatAltitude(s.altitude_m)}, site ${s.site_id ?? "-"}, ` +
        `replans ${s.n_replans}${s.done ? ", done" : ""}`
      : "no session";
    drawProfileChart(chartCtx, session.profileSeries(),
      chart.width, chart.height);
  });
  el("session-start").addEventListener("click", () => {
    void session.start(store.draft).then(() => session.startPolling());
  });
  el("session-advance").addEventListener("click", () => {
    void session.advance();
  });
  el("session-wind").addEventListener("click", () => {
    void session.injectWind(
      store.draft.wind.w_north_mps,
      store.draft.wind.w_east_mps,
    );
  });

  void store.refresh().then(redraw);
}

main();
