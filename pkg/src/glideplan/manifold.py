"""The minimal-altitude-loss cone over horizontal displacements.

For a fixed wind and aircraft, the best straight glide along heading psi
loses slope(psi) meters of altitude per ground meter.  The loss surface
over displacements is then ||d|| * slope(heading(d)): a cone, positively
homogeneous of degree 1.  Headings with no forward progress carry +inf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aero import AircraftModel, Wind, optimal_glide

DEFAULT_RESOLUTION = math.radians(0.25)


@dataclass(frozen=True)
class AloManifold:
    aircraft: AircraftModel
    wind: Wind
    resolution: float
    headings: np.ndarray    # shape (K,), uniform on [0, 2*pi)
    slopes: np.ndarray      # shape (K,), +inf where infeasible
    v_opts: np.ndarray
    v_grounds: np.ndarray
    feasible: np.ndarray    # bool

    @property
    def min_slope(self) -> float:
        s = self.slopes[self.feasible]
        return float(s.min()) if s.size else math.inf

    def slope_at(self, heading):
        """Slope linearly interpolated in heading (wrapping); scalar or array."""
        theta = np.asarray(heading, dtype=float) % (2 * math.pi)
        k = len(self.headings)
        pos = theta / self.resolution
        i = np.minimum(pos.astype(int), k - 1)
        frac = pos - i
        s0 = self.slopes[i]
        s1 = self.slopes[(i + 1) % k]
        # linear in slope; avoid 0*inf when frac lands exactly on a sample
        with np.errstate(invalid="ignore"):
            out = np.where(frac == 0.0, s0,
                           np.where(np.isinf(s0) | np.isinf(s1), np.inf,
                                    s0 * (1.0 - frac) + s1 * frac))
        return out if out.ndim else float(out)

    def loss(self, dx, dy):
        """Minimal straight-glide altitude loss to displacement (dx north, dy east)."""
        dx = np.asarray(dx, dtype=float)
        dy = np.asarray(dy, dtype=float)
        r = np.hypot(dx, dy)
        s = self.slope_at(np.arctan2(dy, dx))
        out = np.where(r == 0.0, 0.0, r * s)
        return out if out.ndim else float(out)


def build_manifold(model: AircraftModel, wind: Wind,
                   resolution: float = DEFAULT_RESOLUTION) -> AloManifold:
    if not 0 < resolution <= 0.05:
        raise ValueError("resolution must be in (0, 0.05] rad")
    k = int(round(2 * math.pi / resolution))
    resolution = 2 * math.pi / k
    headings = np.arange(k) * resolution
    slopes = np.empty(k)
    v_opts = np.empty(k)
    v_grounds = np.empty(k)
    feas = np.empty(k, dtype=bool)
    for i, psi in enumerate(headings):
        sol = optimal_glide(model, wind, psi)
        slopes[i] = sol.slope
        v_opts[i] = sol.v_air
        v_grounds[i] = sol.v_ground
        feas[i] = sol.feasible
    return AloManifold(model, wind, resolution, headings, slopes,
                       v_opts, v_grounds, feas)


def manifold_loss(m: AloManifold, dx, dy):
    return m.loss(dx, dy)


def iso_loss_contours(m: AloManifold, levels) -> list[dict]:
    """Closed iso-loss polylines (one ring per level; gaps at infeasible headings).

    Returns a list of {level, rings:[[(x, y), ...], ...]} records.
    """
    out = []
    theta = np.append(m.headings, 2 * math.pi)
    slopes = np.append(m.slopes, m.slopes[0])
    for level in levels:
        rings = []
        current: list[tuple[float, float]] = []
        for t, s in zip(theta, slopes):
            if math.isinf(s):
                if len(current) > 1:
                    rings.append(current)
                current = []
                continue
            r = level / s if level > 0 else 0.0
            current.append((r * math.cos(t), r * math.sin(t)))
        if len(current) > 1:
            rings.append(current)
        out.append({"level": float(level), "rings": rings})
    return out
