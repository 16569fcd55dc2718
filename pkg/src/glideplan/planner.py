"""Iterative visibility-graph A* over free tangent points.

The search graph is built lazily: expanding a node rebuilds the obstacle
map at that node's remaining altitude, so obstacles grow as the aircraft
descends.  Edge costs and the heuristic both come from the altitude-loss
manifold, which makes the heuristic admissible and consistent.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace

from .aero import AircraftModel, Wind, optimal_glide
from .manifold import AloManifold, build_manifold, DEFAULT_RESOLUTION
from .terrain import DtmGrid, AircraftBelowTerrainError
from .geometry import expand
from . import turns as turns_mod

REPLAN_INTERVAL_M = 91.44   # 300 ft
_KEY_NDIGITS = 6


class HeuristicViolationError(RuntimeError):
    """The search heuristic over- or under-estimated beyond tolerance."""


@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple
    heading_g: float
    v_air: float
    v_ground: float
    segment_loss: float

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0],
                          self.end[1] - self.start[1])


@dataclass(frozen=True)
class Trajectory:
    segments: list
    start_altitude: float
    total_loss: float
    turn_corrections: list = field(default_factory=list)
    altitude_profile: list = field(default_factory=list)  # (arc_len, alt)
    feasible_after_turns: bool | None = None

    @property
    def start(self):
        return self.segments[0].start

    @property
    def end(self):
        return self.segments[-1].end

    @property
    def end_altitude(self) -> float:
        return self.start_altitude - self.total_loss

    def waypoints(self) -> list:
        return [self.segments[0].start] + [s.end for s in self.segments]

    def position_at_loss(self, d: float) -> tuple:
        """Horizontal position after d meters of altitude loss along the plan."""
        d = max(0.0, min(d, self.total_loss))
        by_waypoint = {}
        for c in self.turn_corrections:
            by_waypoint[tuple(c.at_waypoint)] = c.total
        acc = 0.0
        for seg in self.segments:
            if acc + seg.segment_loss >= d or seg is self.segments[-1]:
                frac = 0.0 if seg.segment_loss <= 0 else \
                    min(1.0, (d - acc) / seg.segment_loss)
                return (seg.start[0] + frac * (seg.end[0] - seg.start[0]),
                        seg.start[1] + frac * (seg.end[1] - seg.start[1]))
            acc += seg.segment_loss
            acc += by_waypoint.get(tuple(seg.end), 0.0)
            if acc >= d:
                return seg.end
        return self.end

    def to_dict(self) -> dict:
        return {
            "start_altitude_m": self.start_altitude,
            "total_loss_m": self.total_loss,
            "end_altitude_m": self.end_altitude,
            "feasible_after_turns": self.feasible_after_turns,
            "segments": [{
                "start_m": list(s.start), "end_m": list(s.end),
                "heading_rad": s.heading_g, "v_air_mps": s.v_air,
                "v_ground_mps": s.v_ground, "loss_m": s.segment_loss,
            } for s in self.segments],
            "turn_corrections": [{
                "at_waypoint_m": list(c.at_waypoint),
                "delta_psi_air_rad": c.delta_psi_air, "bank_rad": c.bank,
                "arc_loss_m": c.arc_loss, "energy_term_m": c.energy_term,
                "total_m": c.total, "radius_m": c.radius,
            } for c in self.turn_corrections],
            "profile": [{"s_m": s, "altitude_m": a}
                        for s, a in self.altitude_profile],
        }


@dataclass(frozen=True)
class PlanFailure:
    reason: str            # "no-path" | "insufficient-altitude"
    detail: str = ""

    def to_dict(self) -> dict:
        return {"failure": self.reason, "detail": self.detail}


@dataclass
class SearchStats:
    expansions: int = 0
    ftp_expansions: int = 0
    generated: int = 0


def _key(pos):
    return (round(pos[0], _KEY_NDIGITS), round(pos[1], _KEY_NDIGITS))


def alo_search(p_a, z_a, p_b, model: AircraftModel, wind: Wind,
               grid: DtmGrid, *, manifold: AloManifold | None = None,
               use_essential: bool = True, stats: SearchStats | None = None,
               check_heuristic: bool = True):
    """Minimum-altitude-loss obstacle-avoiding plan, or a PlanFailure."""
    if not (grid.contains(*p_a) and grid.contains(*p_b)):
        raise ValueError("endpoints must lie inside the DTM hull")
    if z_a <= grid.dtm_at(*p_a):
        raise AircraftBelowTerrainError("start altitude not above terrain")
    if manifold is None:
        manifold = build_manifold(model, wind)
    stats = stats if stats is not None else SearchStats()

    start, goal = _key(p_a), _key(p_b)
    h0 = manifold.loss(p_b[0] - p_a[0], p_b[1] - p_a[1])
    g_best = {start: 0.0}
    parent = {start: None}
    open_heap = [(h0, 0.0, 0, start)]
    closed = {}
    seq = 1
    dtm_b = grid.dtm_at(*p_b)
    expanded = []

    while open_heap:
        f, neg_g, _, pos = heapq.heappop(open_heap)
        g = -neg_g
        if pos in closed and closed[pos] <= g + 1e-9:
            continue
        if g > g_best.get(pos, math.inf) + 1e-9:
            continue
        closed[pos] = g
        if math.isinf(f) or z_a - f < dtm_b:
            return PlanFailure("insufficient-altitude",
                               f"best-case arrival below DTM({p_b})")
        if pos == goal:
            path = _trace_path(parent, start, goal)
            if check_heuristic:
                _check_admissibility(expanded, g)
            return _build_trajectory(path, z_a, model, wind, manifold, grid)
        expanded.append((pos, g, f - g))
        stats.expansions += 1
        if pos != start:
            stats.ftp_expansions += 1
        altitude = z_a - g
        if altitude <= grid.dtm_at(*pos):
            continue
        succs = expand(pos, altitude, p_b, grid, manifold,
                       use_essential=use_essential)
        h_here = f - g
        for s in succs:
            ks = _key(s)
            edge = manifold.loss(s[0] - pos[0], s[1] - pos[1])
            if math.isinf(edge):
                continue
            if check_heuristic:
                h_s = manifold.loss(p_b[0] - s[0], p_b[1] - s[1])
                if h_here > edge + h_s + 1e-6 * (1.0 + abs(h_here)):
                    raise HeuristicViolationError(
                        f"consistency violated at {pos}->{ks}: "
                        f"{h_here} > {edge} + {h_s}")
            g_new = g + edge
            if ks in closed and closed[ks] <= g_new + 1e-9:
                continue
            if g_new + 1e-12 < g_best.get(ks, math.inf):
                g_best[ks] = g_new
                parent[ks] = pos
                h_s = manifold.loss(p_b[0] - s[0], p_b[1] - s[1])
                heapq.heappush(open_heap, (g_new + h_s, -g_new, seq, ks))
                seq += 1
                stats.generated += 1
    return PlanFailure("no-path", "search frontier exhausted")


def _check_admissibility(expanded, optimal_cost):
    for pos, g, h in expanded:
        if g + h > optimal_cost + 1e-6 * (1.0 + optimal_cost):
            raise HeuristicViolationError(
                f"admissibility violated at {pos}: g+h={g + h} > {optimal_cost}")


def _trace_path(parent, start, goal) -> list:
    path = [goal]
    node = goal
    while node != start:
        node = parent[node]
        if node is None:
            raise RuntimeError("broken parent chain")
        path.append(node)
    path.reverse()
    return path


def trace_path(parent: dict, start, goal) -> list:
    return _trace_path(parent, _key(start), _key(goal))


def _build_trajectory(path, z_a, model, wind, manifold, grid) -> Trajectory:
    segments = []
    for a, b in zip(path, path[1:]):
        heading = math.atan2(b[1] - a[1], b[0] - a[0])
        sol = optimal_glide(model, wind, heading)
        loss = manifold.loss(b[0] - a[0], b[1] - a[1])
        segments.append(Segment(start=a, end=b, heading_g=heading,
                                v_air=sol.v_air, v_ground=sol.v_ground,
                                segment_loss=loss))
    total = sum(s.segment_loss for s in segments)
    traj = Trajectory(segments=segments, start_altitude=z_a, total_loss=total)
    return replace(traj, altitude_profile=sample_profile(traj, grid))


def sample_profile(traj: Trajectory, grid: DtmGrid) -> list:
    """Altitude vs arc length, sampled at one grid spacing per segment."""
    step = min(grid.dx, grid.dy)
    drop_at = {tuple(c.at_waypoint): c.total for c in traj.turn_corrections}
    profile = []
    s0 = 0.0
    alt = traj.start_altitude
    for seg in traj.segments:
        length = seg.length
        n = max(1, int(math.ceil(length / step)))
        slope = seg.segment_loss / length if length > 0 else 0.0
        for k in range(n + 1):
            if k == 0 and profile:
                continue
            s = min(k * step, length)
            profile.append((s0 + s, alt - slope * s))
        alt -= seg.segment_loss
        s0 += length
        alt -= drop_at.get(tuple(seg.end), 0.0)
    return profile


def apply_turn_corrections(traj: Trajectory, model: AircraftModel,
                           wind: Wind, grid: DtmGrid,
                           bank_limit: float = math.pi / 2 - 1e-9) -> Trajectory:
    """Insert turn losses at interior waypoints and re-verify ground clearance."""
    if not traj.segments:
        return traj
    bank = turns_mod.optimal_bank(bank_limit)
    corrections = turns_mod.segment_turn_corrections(
        model, wind, traj.segments, bank=bank)
    total = sum(s.segment_loss for s in traj.segments) \
        + sum(c.total for c in corrections)
    out = replace(traj, turn_corrections=corrections, total_loss=total)
    out = replace(out, altitude_profile=sample_profile(out, grid))
    ok = profile_clears_terrain(out, grid)
    return replace(out, feasible_after_turns=ok)


def profile_clears_terrain(traj: Trajectory, grid: DtmGrid) -> bool:
    for (s, alt) in traj.altitude_profile:
        pos = _position_at_arclength(traj, s)
        if grid.contains(*pos) and alt < grid.dtm_at(*pos) - 1e-6:
            return False
    return True


def _position_at_arclength(traj: Trajectory, s: float):
    acc = 0.0
    for seg in traj.segments:
        length = seg.length
        if s <= acc + length or seg is traj.segments[-1]:
            frac = 0.0 if length == 0 else min(1.0, max(0.0, (s - acc) / length))
            return (seg.start[0] + frac * (seg.end[0] - seg.start[0]),
                    seg.start[1] + frac * (seg.end[1] - seg.start[1]))
        acc += length
    return traj.end


@dataclass(frozen=True)
class SiteResult:
    site_id: str
    reachable: bool
    arrival_margin: float | None
    trajectory: Trajectory | None
    failure: PlanFailure | None

    def to_dict(self) -> dict:
        return {
            "site_id": self.site_id,
            "reachable": self.reachable,
            "arrival_margin_m": self.arrival_margin,
            "trajectory": self.trajectory.to_dict() if self.trajectory else None,
            "failure": self.failure.to_dict() if self.failure else None,
        }


@dataclass(frozen=True)
class ReachabilityReport:
    sites: list

    def to_dict(self) -> dict:
        return {"sites": [s.to_dict() for s in self.sites]}


def reachability(p_a, z_a, sites, model: AircraftModel, wind: Wind,
                 grid: DtmGrid, *, manifold: AloManifold | None = None,
                 use_essential: bool = True) -> ReachabilityReport:
    """One search per candidate site; margin is arrival height above its DTM."""
    if manifold is None:
        manifold = build_manifold(model, wind)
    results = []
    for site in sites:
        sid = site.get("id", str(len(results)))
        pos = (site["x_m"], site["y_m"])
        res = alo_search(p_a, z_a, pos, model, wind, grid,
                         manifold=manifold, use_essential=use_essential)
        if isinstance(res, PlanFailure):
            results.append(SiteResult(sid, False, None, None, res))
            continue
        margin = (z_a - res.total_loss) - grid.dtm_at(*pos)
        results.append(SiteResult(sid, margin >= 0,
                                  margin, res, None))
    return ReachabilityReport(results)


def select_site(report: ReachabilityReport, sites) -> SiteResult | None:
    """Best reachable site: highest weight, ties broken by smallest loss."""
    weights = {s.get("id", str(i)): s.get("weight", 1.0)
               for i, s in enumerate(sites)}
    reachable = [r for r in report.sites if r.reachable]
    if not reachable:
        return None
    return max(reachable,
               key=lambda r: (weights.get(r.site_id, 1.0),
                              -r.trajectory.total_loss))


class ReplanSession:
    """Descent simulation with altitude-triggered and wind-triggered replans."""

    def __init__(self, model, grid, wind, position, altitude, sites, *,
                 replan_interval: float = REPLAN_INTERVAL_M,
                 manifold_resolution: float = DEFAULT_RESOLUTION,
                 use_essential: bool = True, apply_turns: bool = False,
                 bank_limit: float = math.pi / 2 - 1e-9):
        self.model = model
        self.grid = grid
        self.wind = wind
        self.position = tuple(position)
        self.altitude = float(altitude)
        self.sites = list(sites)
        self.replan_interval = replan_interval
        self.manifold_resolution = manifold_resolution
        self.use_essential = use_essential
        self.apply_turns = apply_turns
        self.bank_limit = bank_limit
        self.loss_since_replan = 0.0
        self.plans: list = []
        self.failures: list = []
        self.current: Trajectory | None = None
        self.current_site: str | None = None
        self.done = False
        self._replan()

    def _manifold(self):
        return build_manifold(self.model, self.wind, self.manifold_resolution)

    def _replan(self):
        manifold = self._manifold()
        report = reachability(self.position, self.altitude, self.sites,
                              self.model, self.wind, self.grid,
                              manifold=manifold,
                              use_essential=self.use_essential)
        best = select_site(report, self.sites)
        if best is None:
            self.current = None
            self.current_site = None
            self.failures.append(report)
            self.done = True
            return None
        traj = best.trajectory
        if self.apply_turns:
            traj = apply_turn_corrections(traj, self.model, self.wind,
                                          self.grid,
                                          bank_limit=self.bank_limit)
        self.current = traj
        self.current_site = best.site_id
        self.loss_since_replan = 0.0
        self.plans.append(traj)
        return traj

    def update_wind(self, wind: Wind):
        self.wind = wind
        return self._replan()

    def advance(self, altitude_drop: float):
        """Descend along the current plan; replan at each interval boundary."""
        if self.done or self.current is None:
            return None
        remaining = self.current.total_loss - self.loss_since_replan
        drop = min(altitude_drop, remaining)
        until_replan = self.replan_interval - \
            (self.loss_since_replan % self.replan_interval or 0.0)
        new_plan = None
        while drop > 0:
            step = min(drop, until_replan)
            self.loss_since_replan += step
            self.altitude -= step
            self.position = self.current.position_at_loss(self.loss_since_replan)
            drop -= step
            if self.loss_since_replan >= self.current.total_loss - 1e-9:
                self.done = True
                break
            until_replan -= step
            if until_replan <= 1e-12:
                new_plan = self._replan()
                if self.done:
                    break
                until_replan = self.replan_interval
        return new_plan

    def state(self) -> dict:
        return {
            "position_m": list(self.position),
            "altitude_m": self.altitude,
            "wind": {"w_north_mps": self.wind.w_north,
                     "w_east_mps": self.wind.w_east},
            "site_id": self.current_site,
            "done": self.done,
            "plan": self.current.to_dict() if self.current else None,
            "n_replans": len(self.plans),
        }


def replan_session(model, grid, wind, position, altitude, sites,
                   wind_updates=(), **kwargs):
    """Run a full descent; yield every plan produced along the way.

    `wind_updates` is a sequence of {"at_altitude_m": a, "wind": Wind}
    applied once the descent passes the tagged altitude.
    """
    session = ReplanSession(model, grid, wind, position, altitude, sites,
                            **kwargs)
    if session.current is None:
        return
    yield session.current
    updates = sorted(wind_updates, key=lambda u: -u["at_altitude_m"])
    idx = 0
    guard = 0
    while not session.done and guard < 10000:
        guard += 1
        if idx < len(updates) and \
                session.altitude <= updates[idx]["at_altitude_m"]:
            plan = session.update_wind(updates[idx]["wind"])
            idx += 1
            if plan is not None:
                yield plan
            continue
        if idx < len(updates):
            to_update = session.altitude - updates[idx]["at_altitude_m"]
            step = max(min(session.replan_interval, to_update), 1e-6)
        else:
            step = session.replan_interval
        plan = session.advance(step)
        if plan is not None:
            yield plan
