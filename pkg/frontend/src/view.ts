/** Pure world/screen coordinate transforms and raster shading helpers.
 *
 * World axes follow the planner convention: x north, y east, in meters.
 * Screen axes: pixel x grows east (right), pixel y grows south (down).
 */

export interface Viewport {
  worldX0: number; // north coordinate at the bottom edge
  worldY0: number; // east coordinate at the left edge
  metersPerPixel: number;
  widthPx: number;
  heightPx: number;
}

export function worldToScreen(
  v: Viewport,
  x: number,
  y: number,
): [number, number] {
  const px = (y - v.worldY0) / v.metersPerPixel;
  const py = v.heightPx - (x - v.worldX0) / v.metersPerPixel;
  return [px, py];
}

export function screenToWorld(
  v: Viewport,
  px: number,
  py: number,
): [number, number] {
  const x = v.worldX0 + (v.heightPx - py) * v.metersPerPixel;
  const y = v.worldY0 + px * v.metersPerPixel;
  return [x, y];
}

/** Viewport that shows the whole world rectangle, centered, aspect kept. */
export function fitViewport(
  xMin: number,
  xMax: number,
  yMin: number,
  yMax: number,
  widthPx: number,
  heightPx: number,
): Viewport {
  const spanX = Math.max(xMax - xMin, 1e-9);
  const spanY = Math.max(yMax - yMin, 1e-9);
  const mpp = Math.max(spanX / heightPx, spanY / widthPx);
  const cx = (xMin + xMax) / 2;
  const cy = (yMin + yMax) / 2;
  return {
    worldX0: cx - (heightPx * mpp) / 2,
    worldY0: cy - (widthPx * mpp) / 2,
    metersPerPixel: mpp,
    widthPx,
    heightPx,
  };
}

/** Lambertian hillshade of an elevation raster, values in [0, 1].
 * Row index runs north (world x), column index runs east (world y). */
export function hillshade(
  elevations: number[][],
  dxM: number,
  dyM: number,
  azimuthRad = (315 * Math.PI) / 180,
  sunAltitudeRad = Math.PI / 4,
): number[][] {
  const rows = elevations.length;
  const cols = rows > 0 ? elevations[0].length : 0;
  const out: number[][] = [];
  const sz = Math.sin(sunAltitudeRad);
  const sh = Math.cos(sunAltitudeRad);
  // light direction in (north, east, up) components
  const lx = sh * Math.cos(azimuthRad);
  const ly = sh * Math.sin(azimuthRad);
  for (let i = 0; i < rows; i++) {
    const row: number[] = [];
    for (let j = 0; j < cols; j++) {
      const i0 = Math.max(i - 1, 0);
      const i1 = Math.min(i + 1, rows - 1);
      const j0 = Math.max(j - 1, 0);
      const j1 = Math.min(j + 1, cols - 1);
      const gx = (elevations[i1][j] - elevations[i0][j]) / ((i1 - i0) * dxM);
      const gy = (elevations[i][j1] - elevations[i][j0]) / ((j1 - j0) * dyM);
      const norm = Math.sqrt(1 + gx * gx + gy * gy);
      const shade = (sz - lx * gx - ly * gy) / norm;
      row.push(Math.min(1, Math.max(0, shade)));
    }
    out.push(row);
  }
  return out;
}

export function elevationRange(elevations: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of elevations) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  return [lo, hi];
}
