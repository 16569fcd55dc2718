"""Closed-form glide performance under constant wind.

All quantities are SI (m, m/s, rad). Headings are ground-frame, measured
from north toward east (atan2(east, north)).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from scipy.optimize import brentq, minimize_scalar


class DegenerateWindTriangleError(ValueError):
    """Air velocity implied by the wind triangle is (numerically) zero."""


@dataclass(frozen=True)
class AircraftModel:
    """Glide-polar constants and speed envelope for a fixed-wing aircraft."""

    mass: float            # kg
    wing_area: float       # m^2
    cd0: float
    k_induced: float
    cl_max: float
    v_max: float           # m/s
    air_density: float = 1.225   # kg/m^3
    g: float = 9.81        # m/s^2

    def __post_init__(self):
        for name in ("mass", "wing_area", "cd0", "k_induced", "cl_max",
                     "v_max", "air_density", "g"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.v_stall(1.0) >= self.v_max:
            raise ValueError(
                f"empty flight envelope: v_stall(1)={self.v_stall(1.0):.2f} "
                f">= v_max={self.v_max:.2f}")
        if self.v0 < self.v_stall(1.0):
            warnings.warn(
                "still-air optimal speed below 1-g stall speed; "
                "optimal glide will run clamped at the stall limit",
                stacklevel=2)

    @property
    def k_sr(self) -> float:
        """Sink-rate constant rho*S*cd0 / (2*m*g)."""
        return self.air_density * self.wing_area * self.cd0 / (2 * self.mass * self.g)

    @property
    def v0(self) -> float:
        """Still-air optimal glide speed."""
        return math.sqrt(2 * self.mass * self.g / (self.air_density * self.wing_area)
                         * math.sqrt(self.k_induced / self.cd0))

    def v_stall(self, load_factor: float) -> float:
        """Minimum flyable airspeed at the given load factor (n >= 1)."""
        if load_factor < 1.0:
            raise ValueError("load factor must be >= 1")
        return math.sqrt(2 * self.mass * self.g * load_factor
                         / (self.air_density * self.wing_area * self.cl_max))

    @classmethod
    def from_json(cls, path) -> "AircraftModel":
        doc = json.loads(Path(path).read_text())
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "AircraftModel":
        return cls(
            mass=doc["mass_kg"],
            wing_area=doc["wing_area_m2"],
            cd0=doc["cd0"],
            k_induced=doc["k_induced"],
            cl_max=doc["cl_max"],
            v_max=doc["v_max_mps"],
            air_density=doc.get("air_density_kgpm3", 1.225),
        )


def load_bundled_aircraft(name: str = "cessna172") -> AircraftModel:
    return AircraftModel.from_json(Path(__file__).parent / "data" / f"{name}.json")


@dataclass(frozen=True)
class Wind:
    """Constant wind vector in the ground frame (north, east components)."""

    w_north: float
    w_east: float

    def __post_init__(self):
        if not (math.isfinite(self.w_north) and math.isfinite(self.w_east)):
            raise ValueError("wind components must be finite")

    @property
    def speed(self) -> float:
        return math.hypot(self.w_north, self.w_east)


@dataclass(frozen=True)
class WindComponents:
    """Wind resolved along a ground track: parallel (tailwind > 0) and cross."""

    parallel: float
    cross: float


@dataclass(frozen=True)
class GlideSolution:
    """Optimal straight glide along one ground heading."""

    v_air: float
    v_ground: float
    slope: float      # altitude loss per ground meter; inf if infeasible
    feasible: bool


def wind_components(wind: Wind, heading_g: float) -> WindComponents:
    """Resolve the wind onto a ground heading (parallel tailwind-positive)."""
    c, s = math.cos(heading_g), math.sin(heading_g)
    return WindComponents(
        parallel=wind.w_north * c + wind.w_east * s,
        cross=-wind.w_north * s + wind.w_east * c,
    )


def ground_speed(v_air: float, wc: WindComponents) -> float | None:
    """Ground speed for an airspeed along the track; None when no forward progress."""
    if v_air <= abs(wc.cross):
        return None
    v_g = math.sqrt(v_air * v_air - wc.cross * wc.cross) + wc.parallel
    return v_g if v_g > 0 else None


def sink_rate(model: AircraftModel, v_air: float, bank: float = 0.0) -> float:
    """Sink rate k_sr*(V^4 + n^2*V0^4)/V at airspeed V and bank angle."""
    if abs(bank) >= math.pi / 2:
        raise ValueError("bank must satisfy |bank| < pi/2")
    n = 1.0 / math.cos(bank)
    if v_air < model.v_stall(n) - 1e-9:
        raise ValueError(f"airspeed {v_air:.2f} below stall at load factor {n:.3f}")
    v0 = model.v0
    return model.k_sr * (v_air ** 4 + n * n * v0 ** 4) / v_air


def glide_slope(model: AircraftModel, v_air: float, wc: WindComponents) -> float:
    """Altitude loss per ground meter at airspeed V; inf if no forward progress."""
    v_g = ground_speed(v_air, wc)
    if v_g is None:
        return math.inf
    v0 = model.v0
    return model.k_sr * (v_air ** 4 + v0 ** 4) / v_air / v_g


def _speed_to_fly_residual(u: float, wp: float, wx: float) -> float:
    # normalized (by V0) sixth-degree speed-to-fly equation
    return (u ** 6 - 1.5 * u ** 4 * wx * wx
            + 0.5 * wp * math.sqrt(max(u * u - wx * wx, 0.0)) * (3 * u ** 4 - 1.0)
            - u * u + 0.5 * wx * wx)


def speed_to_fly(model: AircraftModel, wc: WindComponents) -> float:
    """Airspeed minimizing altitude loss per ground meter (unclamped).

    Root of the sextic speed-to-fly equation on (V_b, inf); falls back to a
    bounded 1-D minimization of the glide slope if bracketing fails.
    """
    v0 = model.v0
    wp, wx = wc.parallel / v0, wc.cross / v0
    u_b = math.hypot(wx, max(0.0, -wp))
    w_mag = math.hypot(wc.parallel, wc.cross)
    u_hi = 3.0 * max(v0, w_mag, model.v_max) / v0
    u_lo = u_b + 1e-6
    if u_hi <= u_lo:
        raise ValueError("no airspeed below the search ceiling makes headway")
    f_lo = _speed_to_fly_residual(u_lo, wp, wx)
    f_hi = _speed_to_fly_residual(u_hi, wp, wx)
    if f_lo * f_hi < 0:
        u = brentq(_speed_to_fly_residual, u_lo, u_hi, args=(wp, wx),
                   xtol=1e-13, rtol=8.9e-16)
        return u * v0
    # bracketing failed (degenerate wind); minimize the slope directly
    res = minimize_scalar(lambda v: glide_slope(model, v, wc),
                          bounds=(u_lo * v0, u_hi * v0), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x)


def optimal_glide(model: AircraftModel, wind: Wind, heading_g: float) -> GlideSolution:
    """Clamped optimal glide along a ground heading; infeasibility is a value."""
    wc = wind_components(wind, heading_g)
    try:
        v_star = speed_to_fly(model, wc)
    except ValueError:
        return GlideSolution(math.nan, math.nan, math.inf, False)
    v = min(max(model.v_stall(1.0), v_star), model.v_max)
    v_g = ground_speed(v, wc)
    if v_g is None:
        return GlideSolution(v, math.nan, math.inf, False)
    return GlideSolution(v, v_g, sink_rate(model, v, 0.0) / v_g, True)


def airmass_heading(ground_heading: float, v_ground: float, wind: Wind) -> float:
    """Invert the wind triangle: heading of the air-relative velocity."""
    if not v_ground > 0:
        raise ValueError("v_ground must be positive")
    ax = v_ground * math.cos(ground_heading) - wind.w_north
    ay = v_ground * math.sin(ground_heading) - wind.w_east
    if math.hypot(ax, ay) < 1e-9:
        raise DegenerateWindTriangleError("air velocity is zero")
    return math.atan2(ay, ax)
