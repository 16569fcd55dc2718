"""Brute-force validators for the visibility-graph planner.

A dense grid Dijkstra that re-derives obstacle status directly from the
loss cone and terrain (no shared tangent-point logic), and a trajectory
feasibility sampler.  Slow by design; used by tests and `oracle-compare`.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .manifold import AloManifold, build_manifold
from .terrain import DtmGrid


@dataclass(frozen=True)
class OracleResult:
    loss: float
    path: list                   # list of (x, y) grid nodes
    discretization_bound: float


_OFFSETS_8 = [(1, 0), (-1, 0), (0, 1), (0, -1),
              (1, 1), (1, -1), (-1, 1), (-1, -1)]
_OFFSETS_16 = _OFFSETS_8 + [(1, 2), (2, 1), (-1, 2), (-2, 1),
                            (1, -2), (2, -1), (-1, -2), (-2, -1)]


def _step_cell_groups(di: int, dj: int) -> list:
    """Cell sets the open unit-grid segment (0,0)->(di,dj) must not sink into.

    Each group is a list of relative cell indices; the step is blocked when
    every cell of some group is unsafe (a probe point interior to their union).
    """
    ts = {Fraction(0), Fraction(1)}
    if di:
        for i in range(min(0, di), max(0, di) + 1):
            t = Fraction(i, di)
            if 0 < t < 1:
                ts.add(t)
    if dj:
        for j in range(min(0, dj), max(0, dj) + 1):
            t = Fraction(j, dj)
            if 0 < t < 1:
                ts.add(t)
    order = sorted(ts)
    groups = []
    for t0, t1 in zip(order, order[1:]):
        tm = (t0 + t1) / 2
        x, y = tm * di, tm * dj
        ci = [int(x) - 1, int(x)] if x == int(x) else [math.floor(x)]
        cj = [int(y) - 1, int(y)] if y == int(y) else [math.floor(y)]
        groups.append([(i, j) for i in ci for j in cj])
    return groups


def dense_dijkstra(p_a, z_a, p_b, model, wind, grid: DtmGrid,
                   connectivity: int = 16,
                   manifold: AloManifold | None = None):
    """Shortest altitude-loss grid path, or None when no path exists."""
    if connectivity not in (8, 16):
        raise ValueError("connectivity must be 8 or 16")
    if manifold is None:
        manifold = build_manifold(model, wind)
    offsets = _OFFSETS_16 if connectivity == 16 else _OFFSETS_8

    m, n = grid.shape
    dtm = grid.elevations + grid.clearance

    def to_node(p):
        i = round((p[0] - grid.x0) / grid.dx)
        j = round((p[1] - grid.y0) / grid.dy)
        if not (0 <= i < m and 0 <= j < n):
            raise ValueError("endpoint off the grid")
        return (i, j)

    start, goal = to_node(p_a), to_node(p_b)

    edge_loss = {}
    groups = {}
    corner_offsets = set()
    for off in offsets:
        di, dj = off
        edge_loss[off] = manifold.loss(di * grid.dx, dj * grid.dy)
        assert edge_loss[off] >= 0 or math.isinf(edge_loss[off])
        groups[off] = _step_cell_groups(di, dj)
        for grp in groups[off]:
            for (ci, cj) in grp:
                for a in (0, 1):
                    for b in (0, 1):
                        corner_offsets.add((ci + a, cj + b))
    corner_loss = {c: manifold.loss(c[0] * grid.dx, c[1] * grid.dy)
                   for c in corner_offsets}

    def cell_unsafe(i, j, ci, cj, z):
        # cell (i+ci, j+cj): unsafe iff any corner margin below zero
        ii, jj = i + ci, j + cj
        if not (0 <= ii < m - 1 and 0 <= jj < n - 1):
            return False
        for a in (0, 1):
            for b in (0, 1):
                loss = corner_loss[(ci + a, cj + b)]
                if math.isinf(loss) or z - loss - dtm[ii + a, jj + b] < 0:
                    return True
        return False

    dist = {start: 0.0}
    parent = {start: None}
    heap = [(0.0, start)]
    done = set()
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == goal:
            break
        i, j = node
        z = z_a - d
        for off in offsets:
            w = edge_loss[off]
            if math.isinf(w):
                continue
            v = (i + off[0], j + off[1])
            if not (0 <= v[0] < m and 0 <= v[1] < n):
                continue
            if v in done:
                continue
            blocked = False
            for grp in groups[off]:
                if all(cell_unsafe(i, j, ci, cj, z) for (ci, cj) in grp):
                    blocked = True
                    break
            if blocked:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                parent[v] = node
                heapq.heappush(heap, (nd, v))
    if goal not in done:
        return None
    path_idx = [goal]
    while path_idx[-1] != start:
        path_idx.append(parent[path_idx[-1]])
    path_idx.reverse()
    path = [grid.node_xy(i, j) for (i, j) in path_idx]
    diag = math.hypot(grid.dx, grid.dy)
    max_slope = float(max(s for s in manifold.slopes if math.isfinite(s)))
    bound = diag * max_slope * len(path)
    return OracleResult(loss=dist[goal], path=path,
                        discretization_bound=bound)


def verify_feasibility(traj, grid: DtmGrid) -> dict:
    """Min ground clearance of the sampled altitude profile, with violations."""
    from .planner import _position_at_arclength
    min_clear = math.inf
    violation = None
    for (s, alt) in traj.altitude_profile:
        pos = _position_at_arclength(traj, s)
        if not grid.contains(*pos):
            continue
        clear = alt - grid.dtm_at(*pos)
        min_clear = min(min_clear, clear)
        if clear < 0 and violation is None:
            violation = {"s_m": s, "position_m": list(pos),
                         "clearance_m": clear}
    return {"min_clearance_m": min_clear, "violation": violation,
            "feasible": violation is None}
