"""Elevation rasters and the altitude-dependent obstacle classification.

Coordinates are local planar meters: x north, y east.  A grid sample
[i, j] sits at (x0 + i*dx, y0 + j*dy).  Every query of the terrain adds
the configured clearance, so "DTM" below always means ground + clearance.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import distance_transform_edt

from .manifold import AloManifold

# fixed small-area conversion for .hgt tiles; documented as non-geodetic
METERS_PER_DEGREE = 111320.0
SRTM_VOID = -32768

DEFAULT_CLEARANCE = 50.0


class DtmFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DtmGrid:
    x0: float
    y0: float
    dx: float
    dy: float
    elevations: np.ndarray   # (M, N), meters ASL, north index first
    clearance: float = DEFAULT_CLEARANCE

    def __post_init__(self):
        e = self.elevations
        if e.ndim != 2 or e.shape[0] < 2 or e.shape[1] < 2:
            raise ValueError("elevation grid must be at least 2x2")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid spacing must be positive")
        if not np.isfinite(e).all():
            raise ValueError("elevations must be finite")

    @property
    def shape(self):
        return self.elevations.shape

    @property
    def x_max(self) -> float:
        return self.x0 + (self.shape[0] - 1) * self.dx

    @property
    def y_max(self) -> float:
        return self.y0 + (self.shape[1] - 1) * self.dy

    def contains(self, x, y) -> bool:
        return bool(np.all((x >= self.x0) & (x <= self.x_max)
                           & (y >= self.y0) & (y <= self.y_max)))

    def node_xy(self, i, j):
        return self.x0 + i * self.dx, self.y0 + j * self.dy

    def dtm_at(self, x, y):
        """Bilinear ground elevation plus clearance; errors outside the hull."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self.contains(x, y):
            raise ValueError("query outside the DTM hull")
        m, n = self.shape
        fi = np.clip((x - self.x0) / self.dx, 0, m - 1)
        fj = np.clip((y - self.y0) / self.dy, 0, n - 1)
        i0 = np.minimum(fi.astype(int), m - 2)
        j0 = np.minimum(fj.astype(int), n - 2)
        u = fi - i0
        v = fj - j0
        e = self.elevations
        val = (e[i0, j0] * (1 - u) * (1 - v) + e[i0 + 1, j0] * u * (1 - v)
               + e[i0, j0 + 1] * (1 - u) * v + e[i0 + 1, j0 + 1] * u * v)
        val = val + self.clearance
        return val if val.ndim else float(val)


def _fill_voids(e: np.ndarray) -> np.ndarray:
    void = e == SRTM_VOID
    if void.all():
        raise DtmFormatError("all-void elevation tile")
    if void.any():
        idx = distance_transform_edt(void, return_indices=True,
                                     return_distances=False)
        e = e[tuple(idx)]
    return e


def load_esri_ascii(path, clearance: float = DEFAULT_CLEARANCE) -> DtmGrid:
    """ESRI ASCII grid; rows run north to south, xllcorner is easting."""
    header = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            key = parts[0].lower()
            if key in ("ncols", "nrows", "xllcorner", "yllcorner",
                       "cellsize", "nodata_value"):
                header[key] = float(parts[1])
            else:
                rows.append([float(v) for v in parts])
    for req in ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize"):
        if req not in header:
            raise DtmFormatError(f"missing ESRI ASCII header field {req}")
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    data = np.array([v for row in rows for v in row], dtype=float)
    if data.size != ncols * nrows:
        raise DtmFormatError(
            f"expected {ncols * nrows} samples, found {data.size}")
    e = data.reshape(nrows, ncols)
    if "nodata_value" in header:
        e = np.where(e == header["nodata_value"], SRTM_VOID, e)
        e = _fill_voids(e)
    # file rows go N->S along northing; flip so index 0 is the south edge
    # (axis 0 then follows x north, axis 1 follows y east)
    e = e[::-1].copy()
    cell = header["cellsize"]
    return DtmGrid(x0=header["yllcorner"], y0=header["xllcorner"],
                   dx=cell, dy=cell, elevations=e, clearance=clearance)


def load_srtm_hgt(path, clearance: float = DEFAULT_CLEARANCE) -> DtmGrid:
    """SRTM .hgt tile: big-endian int16, row-major from the NW corner."""
    raw = Path(path).read_bytes()
    n_samples = len(raw) // 2
    side = int(math.isqrt(n_samples))
    if side * side * 2 != len(raw) or side not in (1201, 3601):
        raise DtmFormatError(
            f"unexpected .hgt size {len(raw)} bytes (want 1201^2 or 3601^2 int16)")
    e = np.frombuffer(raw, dtype=">i2").reshape(side, side).astype(float)
    e = _fill_voids(e)
    spacing = METERS_PER_DEGREE / (side - 1)
    e = e[::-1].copy()   # same reorientation as ESRI ASCII
    return DtmGrid(x0=0.0, y0=0.0, dx=spacing, dy=spacing,
                   elevations=e, clearance=clearance)


def synthetic_grid(recipe: dict, clearance: float | None = None) -> DtmGrid:
    """Build a grid from a synthetic-terrain recipe (flat/ramp/Gaussian hills).

    Recipe keys: nx, ny, dx, dy, optional x0/y0/base/ramp{gx,gy}/hills
    [{cx, cy, height, sigma}] and clearance_m (overridden by the argument).
    """
    nx, ny = int(recipe["nx"]), int(recipe["ny"])
    dx, dy = float(recipe["dx"]), float(recipe["dy"])
    x0, y0 = float(recipe.get("x0", 0.0)), float(recipe.get("y0", 0.0))
    x = x0 + np.arange(nx)[:, None] * dx
    y = y0 + np.arange(ny)[None, :] * dy
    e = np.full((nx, ny), float(recipe.get("base", 0.0)))
    ramp = recipe.get("ramp")
    if ramp:
        e = e + ramp.get("gx", 0.0) * (x - x0) + ramp.get("gy", 0.0) * (y - y0)
    for hill in recipe.get("hills", ()):
        r2 = (x - hill["cx"]) ** 2 + (y - hill["cy"]) ** 2
        e = e + hill["height"] * np.exp(-r2 / (2 * hill["sigma"] ** 2))
    if clearance is None:
        clearance = float(recipe.get("clearance_m", DEFAULT_CLEARANCE))
    return DtmGrid(x0=x0, y0=y0, dx=dx, dy=dy, elevations=e,
                   clearance=clearance)


def load_dtm(source, fmt: str, clearance: float = DEFAULT_CLEARANCE) -> DtmGrid:
    if fmt == "esri-ascii":
        return load_esri_ascii(source, clearance)
    if fmt == "srtm-hgt":
        return load_srtm_hgt(source, clearance)
    if fmt == "synthetic-spec":
        recipe = source if isinstance(source, dict) else json.loads(
            Path(source).read_text())
        return synthetic_grid(recipe, clearance)
    raise DtmFormatError(f"unknown DTM format {fmt!r}")


class AircraftBelowTerrainError(ValueError):
    pass


@dataclass(frozen=True)
class LocalObstacleMap:
    """FREE/UNSAFE square classification as seen from one (position, altitude).

    lo_values[i, j] is the margin of the best straight glide from the anchor
    to grid node (i, j) over the terrain there; a square is SAFE iff all
    four of its corner margins are >= 0.
    """

    grid: DtmGrid
    anchor: tuple[float, float]
    altitude: float
    lo_values: np.ndarray    # (M, N); -inf where unreachable
    unsafe: np.ndarray       # (M-1, N-1) bool

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        g = self.grid
        i = int((x - g.x0) / g.dx)
        j = int((y - g.y0) / g.dy)
        return (min(max(i, 0), g.shape[0] - 2), min(max(j, 0), g.shape[1] - 2))

    def point_in_obstacle_interior(self, x: float, y: float,
                                   tol: float = 1e-9) -> bool:
        """True iff every square whose closure contains (x, y) is UNSAFE."""
        g = self.grid
        fi = (x - g.x0) / g.dx
        fj = (y - g.y0) / g.dy
        m, n = self.unsafe.shape
        i0 = int(math.floor(fi + tol))
        j0 = int(math.floor(fj + tol))
        cand_i = {i0}
        cand_j = {j0}
        if abs(fi - round(fi)) <= tol:       # on a grid line in x
            cand_i = {int(round(fi)) - 1, int(round(fi))}
        if abs(fj - round(fj)) <= tol:
            cand_j = {int(round(fj)) - 1, int(round(fj))}
        for i in cand_i:
            for j in cand_j:
                if not (0 <= i < m and 0 <= j < n):
                    return False             # off the map: not inside OBST
                if not self.unsafe[i, j]:
                    return False
        return True


def build_local_obstacle_map(grid: DtmGrid, manifold: AloManifold,
                             p: tuple[float, float],
                             altitude: float) -> LocalObstacleMap:
    """Classify every grid square as SAFE/UNSAFE from anchor (p, altitude)."""
    px, py = p
    if altitude <= grid.dtm_at(px, py):
        raise AircraftBelowTerrainError(
            f"anchor altitude {altitude:.1f} not above DTM "
            f"{grid.dtm_at(px, py):.1f}")
    m, n = grid.shape
    xs = grid.x0 + np.arange(m)[:, None] * grid.dx
    ys = grid.y0 + np.arange(n)[None, :] * grid.dy
    ddx = xs - px
    ddy = ys - py
    r = np.hypot(ddx, ddy)
    dtm = grid.elevations + grid.clearance
    lo = np.full((m, n), -np.inf)
    # outside this radius every straight glide is below the terrain floor
    headroom = altitude - float(dtm.min())
    min_slope = manifold.min_slope
    if math.isfinite(min_slope) and min_slope > 0:
        reach = r <= headroom / min_slope
    else:
        reach = np.zeros((m, n), dtype=bool)
    if reach.any():
        loss = manifold.loss(np.broadcast_to(ddx, (m, n))[reach],
                             np.broadcast_to(ddy, (m, n))[reach])
        vals = altitude - loss - dtm[reach]
        lo[reach] = np.where(np.isinf(loss), -np.inf, vals)
    unsafe = ((lo[:-1, :-1] < 0) | (lo[1:, :-1] < 0)
              | (lo[:-1, 1:] < 0) | (lo[1:, 1:] < 0))
    return LocalObstacleMap(grid=grid, anchor=(px, py), altitude=altitude,
                            lo_values=lo, unsafe=unsafe)
