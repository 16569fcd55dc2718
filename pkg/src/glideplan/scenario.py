"""Scenario files: aircraft + wind + cutoff + candidate sites + terrain."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .aero import AircraftModel, Wind, load_bundled_aircraft
from .terrain import DtmGrid, load_dtm, DEFAULT_CLEARANCE


class ScenarioError(ValueError):
    """Invalid scenario document; the message names the offending field."""


@dataclass(frozen=True)
class Options:
    clearance_m: float = DEFAULT_CLEARANCE
    bank_limit_deg: float = 45.0
    replan_interval_m: float = 91.44
    manifold_resolution_deg: float = 0.25


@dataclass(frozen=True)
class Scenario:
    aircraft: AircraftModel
    wind: Wind
    cutoff: tuple          # (x, y)
    cutoff_altitude: float
    sites: list            # [{"id", "x_m", "y_m", "weight"}]
    grid: DtmGrid
    options: Options = field(default_factory=Options)

    @property
    def bank_limit_rad(self) -> float:
        return math.radians(self.options.bank_limit_deg)

    @property
    def manifold_resolution_rad(self) -> float:
        return math.radians(self.options.manifold_resolution_deg)


def _require(doc: dict, key: str, ctx: str = "scenario"):
    if key not in doc:
        raise ScenarioError(f"missing field {ctx}.{key}")
    return doc[key]


def load_scenario(source, base_dir=None) -> Scenario:
    if isinstance(source, (str, Path)):
        path = Path(source)
        base_dir = base_dir or path.parent
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"malformed scenario JSON: {exc}") from exc
    else:
        doc = source
        base_dir = Path(base_dir or ".")
    return scenario_from_dict(doc, base_dir)


def scenario_from_dict(doc: dict, base_dir=Path(".")) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    opts_doc = doc.get("options", {})
    opts = Options(
        clearance_m=float(opts_doc.get("clearance_m", DEFAULT_CLEARANCE)),
        bank_limit_deg=float(opts_doc.get("bank_limit_deg", 45.0)),
        replan_interval_m=float(opts_doc.get("replan_interval_m", 91.44)),
        manifold_resolution_deg=float(
            opts_doc.get("manifold_resolution_deg", 0.25)),
    )

    ac_doc = _require(doc, "aircraft")
    try:
        if isinstance(ac_doc, str):
            p = Path(ac_doc)
            if p.suffix == ".json":
                aircraft = AircraftModel.from_json(
                    p if p.is_absolute() else base_dir / p)
            else:
                aircraft = load_bundled_aircraft(ac_doc)
        else:
            aircraft = AircraftModel.from_dict(ac_doc)
    except (KeyError, ValueError, OSError) as exc:
        raise ScenarioError(f"invalid field aircraft: {exc}") from exc

    wind_doc = _require(doc, "wind")
    try:
        wind = Wind(float(_require(wind_doc, "w_north_mps", "wind")),
                    float(_require(wind_doc, "w_east_mps", "wind")))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid field wind: {exc}") from exc

    cut = _require(doc, "cutoff")
    for k in ("x_m", "y_m", "altitude_m"):
        _require(cut, k, "cutoff")
    cutoff = (float(cut["x_m"]), float(cut["y_m"]))
    cutoff_altitude = float(cut["altitude_m"])

    sites = []
    for i, s in enumerate(_require(doc, "sites")):
        for k in ("x_m", "y_m"):
            _require(s, k, f"sites[{i}]")
        sites.append({"id": str(s.get("id", i)), "x_m": float(s["x_m"]),
                      "y_m": float(s["y_m"]),
                      "weight": float(s.get("weight", 1.0))})
    if not sites:
        raise ScenarioError("field sites must list at least one landing site")

    dtm_doc = _require(doc, "dtm")
    fmt = _require(dtm_doc, "format", "dtm")
    try:
        if fmt == "synthetic-spec" and "recipe" in dtm_doc:
            grid = load_dtm(dtm_doc["recipe"], fmt, opts.clearance_m)
        else:
            p = Path(_require(dtm_doc, "path", "dtm"))
            grid = load_dtm(p if p.is_absolute() else base_dir / p, fmt,
                            opts.clearance_m)
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"invalid field dtm: {exc}") from exc

    if not grid.contains(*cutoff):
        raise ScenarioError("field cutoff lies outside the DTM hull")
    if cutoff_altitude <= grid.dtm_at(*cutoff):
        raise ScenarioError("field cutoff.altitude_m is not above the terrain")
    for s in sites:
        if not grid.contains(s["x_m"], s["y_m"]):
            raise ScenarioError(
                f"field sites[{s['id']}] lies outside the DTM hull")

    return Scenario(aircraft=aircraft, wind=wind, cutoff=cutoff,
                    cutoff_altitude=cutoff_altitude, sites=sites,
                    grid=grid, options=opts)
