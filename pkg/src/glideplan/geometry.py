"""Polygonal obstacle boundaries and free tangent points.

Obstacles are unions of UNSAFE grid squares; their boundaries are traced
as rings of grid nodes with the obstacle interior kept on the left, so
outer rings come out counterclockwise and hole rings clockwise.  Free
tangent points (FTPs) are the boundary vertices where a sight ray from
the current position grazes the obstacle and leaves it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .terrain import LocalObstacleMap

_4CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
_TOL = 1e-9


@dataclass(frozen=True)
class ObstaclePolygon:
    component_id: int
    vertices: list          # closed ring of (x, y) grid nodes, first != last
    hole: bool = False

    def signed_area(self) -> float:
        s = 0.0
        v = self.vertices
        for (x0, y0), (x1, y1) in zip(v, v[1:] + v[:1]):
            s += x0 * y1 - x1 * y0
        return 0.5 * s


@dataclass(frozen=True)
class Ftp:
    position: tuple
    obstacle_id: int
    tangent_side: str       # "plus" | "minus" | "on-boundary-start"


class PointInsideObstacleError(ValueError):
    pass


def _trace_rings(cells: list, in_comp) -> list:
    """Chain directed boundary edges (interior on the left) into rings.

    `cells` holds (i, j) squares of one component, `in_comp(i, j)` membership.
    Returns rings in grid-index space.
    """
    # directed edges along each member cell's CCW outline, kept where the
    # neighbor across the edge is not part of the component
    outgoing: dict = {}
    for (i, j) in cells:
        quad = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
        neighbors = [(i, j - 1), (i + 1, j), (i, j + 1), (i - 1, j)]
        for k in range(4):
            if not in_comp(*neighbors[k]):
                a, b = quad[k], quad[(k + 1) % 4]
                outgoing.setdefault(a, []).append(b)
    rings = []
    while outgoing:
        start = next(iter(outgoing))
        a = start
        b = outgoing[a].pop()
        if not outgoing[a]:
            del outgoing[a]
        ring = [a]
        while b != start:
            ring.append(b)
            options = outgoing[b]
            if len(options) == 1:
                nxt = options[0]
            else:
                # pinch vertex: take the rightmost turn to keep rings simple
                din = (b[0] - a[0], b[1] - a[1])
                nxt = min(options, key=lambda c: din[0] * (c[1] - b[1])
                          - din[1] * (c[0] - b[0]))
            options.remove(nxt)
            if not options:
                del outgoing[b]
            a, b = b, nxt
        rings.append(ring)
    return rings


def extract_obstacles(lomap: LocalObstacleMap) -> list:
    """Boundary rings of every 4-connected UNSAFE component."""
    field = ObstacleField.build(lomap)
    return field.polygons


@dataclass
class ObstacleField:
    lomap: LocalObstacleMap
    labels: np.ndarray        # (M-1, N-1) component id per square, 0 = safe
    n_components: int
    polygons: list = field(default_factory=list)

    @classmethod
    def build(cls, lomap: LocalObstacleMap) -> "ObstacleField":
        labels, n = ndimage.label(lomap.unsafe, structure=_4CONN)
        fld = cls(lomap=lomap, labels=labels, n_components=n)
        g = lomap.grid
        for comp in range(1, n + 1):
            mask = labels == comp
            cells = list(zip(*np.nonzero(mask)))
            m, nn = mask.shape

            def in_comp(i, j, mask=mask, m=m, nn=nn):
                return 0 <= i < m and 0 <= j < nn and mask[i, j]

            for ring in _trace_rings(cells, in_comp):
                verts = [g.node_xy(i, j) for (i, j) in ring]
                poly = ObstaclePolygon(component_id=comp, vertices=verts)
                hole = poly.signed_area() < 0
                fld.polygons.append(
                    ObstaclePolygon(comp, verts, hole=hole))
        return fld

    def blockers(self, p, q) -> set:
        """Component ids whose interior the open segment p->q passes through."""
        hit = set()
        for x, y in _segment_interior_probes(self.lomap, p, q):
            cells = _containing_cells(self.lomap, x, y)
            if cells and all(self.lomap.unsafe[c] for c in cells):
                hit.add(int(self.labels[cells[0]]))
        return hit


def _containing_cells(lomap: LocalObstacleMap, x: float, y: float) -> list:
    """In-bounds squares whose closure contains (x, y); [] if any side is off-map."""
    g = lomap.grid
    fi = (x - g.x0) / g.dx
    fj = (y - g.y0) / g.dy
    m, n = lomap.unsafe.shape
    tol = _TOL
    ci = ({int(round(fi)) - 1, int(round(fi))} if abs(fi - round(fi)) <= tol
          else {int(math.floor(fi))})
    cj = ({int(round(fj)) - 1, int(round(fj))} if abs(fj - round(fj)) <= tol
          else {int(math.floor(fj))})
    cells = []
    for i in ci:
        for j in cj:
            if not (0 <= i < m and 0 <= j < n):
                return []     # touches the outside world, never interior
            cells.append((i, j))
    return cells


def point_in_obstacle_interior(lomap: LocalObstacleMap, x: float, y: float) -> bool:
    cells = _containing_cells(lomap, x, y)
    return bool(cells) and all(lomap.unsafe[c] for c in cells)


def point_on_obstacle_boundary(lomap: LocalObstacleMap, x: float, y: float) -> bool:
    cells = _containing_cells(lomap, x, y)
    if not cells:
        # off-map edge: on the boundary iff hugging an unsafe square
        g = lomap.grid
        fi = (x - g.x0) / g.dx
        fj = (y - g.y0) / g.dy
        m, n = lomap.unsafe.shape
        near = []
        for i in ({int(round(fi)) - 1, int(round(fi))}
                  if abs(fi - round(fi)) <= _TOL else {int(math.floor(fi))}):
            for j in ({int(round(fj)) - 1, int(round(fj))}
                      if abs(fj - round(fj)) <= _TOL else {int(math.floor(fj))}):
                if 0 <= i < m and 0 <= j < n:
                    near.append(lomap.unsafe[i, j])
        return any(near)
    return any(lomap.unsafe[c] for c in cells) and \
        not all(lomap.unsafe[c] for c in cells)


def _segment_interior_probes(lomap: LocalObstacleMap, p, q):
    """One probe point per maximal grid-cell sub-interval of the open segment."""
    g = lomap.grid
    px, py = p
    qx, qy = q
    dx, dy = qx - px, qy - py
    length = math.hypot(dx, dy)
    if length < _TOL:
        return
    ts = {0.0, 1.0}
    if abs(dx) > _TOL * length:
        for i in range(int(math.floor((min(px, qx) - g.x0) / g.dx)),
                       int(math.ceil((max(px, qx) - g.x0) / g.dx)) + 1):
            t = (g.x0 + i * g.dx - px) / dx
            if 0.0 < t < 1.0:
                ts.add(t)
    if abs(dy) > _TOL * length:
        for j in range(int(math.floor((min(py, qy) - g.y0) / g.dy)),
                       int(math.ceil((max(py, qy) - g.y0) / g.dy)) + 1):
            t = (g.y0 + j * g.dy - py) / dy
            if 0.0 < t < 1.0:
                ts.add(t)
    order = sorted(ts)
    for t0, t1 in zip(order, order[1:]):
        if t1 - t0 > 1e-12:
            tm = 0.5 * (t0 + t1)
            yield px + tm * dx, py + tm * dy


def directly_reachable(p, q, lomap: LocalObstacleMap) -> bool:
    """True iff the open segment p->q avoids every UNSAFE square interior."""
    for x, y in _segment_interior_probes(lomap, p, q):
        if point_in_obstacle_interior(lomap, x, y):
            return False
    return True


def _silhouette_ok(p, v, prev_v, next_v):
    """Local tangency: both boundary neighbors on one strict side of ray p->v.

    Collinear neighbors follow the nearer-candidate tie-break: a collinear
    neighbor beyond v disqualifies v (the sight ray stays on the boundary);
    a collinear neighbor between p and v keeps v as the far end of the run.
    """
    dx, dy = v[0] - p[0], v[1] - p[1]
    if dx == 0 and dy == 0:
        return False
    sides = []
    for w in (prev_v, next_v):
        wx, wy = w[0] - v[0], w[1] - v[1]
        c = dx * wy - dy * wx
        if abs(c) <= _TOL * (abs(dx) + abs(dy)):
            if wx * dx + wy * dy > 0:
                return False          # boundary continues along the ray
            sides.append(0)           # collinear toward p: neutral
        else:
            sides.append(1 if c > 0 else -1)
    s0, s1 = sides
    if s0 == 0 or s1 == 0:
        return True
    return s0 == s1


def find_ftps(p, lomap: LocalObstacleMap, polygons=None,
              obstacle_ids=None) -> list:
    """Free tangent points of the obstacle map as seen from p.

    `polygons` may be passed to reuse an extraction; `obstacle_ids`
    restricts the scan to specific components.
    """
    if point_in_obstacle_interior(lomap, *p):
        raise PointInsideObstacleError(f"start point {p} is inside an obstacle")
    if polygons is None:
        polygons = extract_obstacles(lomap)
    g = lomap.grid
    eps = math.hypot(g.dx, g.dy)
    found = {}
    for poly in polygons:
        if obstacle_ids is not None and poly.component_id not in obstacle_ids:
            continue
        verts = poly.vertices
        n = len(verts)
        for k, v in enumerate(verts):
            if abs(v[0] - p[0]) < _TOL and abs(v[1] - p[1]) < _TOL:
                continue
            if not _silhouette_ok(p, v, verts[k - 1], verts[(k + 1) % n]):
                continue
            if not directly_reachable(p, v, lomap):
                continue
            dx, dy = v[0] - p[0], v[1] - p[1]
            r = math.hypot(dx, dy)
            probe = (v[0] + eps * dx / r, v[1] + eps * dy / r)
            if point_in_obstacle_interior(lomap, *probe):
                continue
            if point_on_obstacle_boundary(lomap, *probe):
                continue
            if not directly_reachable(p, probe, lomap):
                continue
            wx, wy = verts[(k + 1) % n][0] - v[0], verts[(k + 1) % n][1] - v[1]
            side = "plus" if dx * wy - dy * wx > 0 else "minus"
            found.setdefault((round(v[0], 6), round(v[1], 6)),
                             Ftp(v, poly.component_id, side))
    for ftp in _boundary_walk_ftps(p, lomap, polygons, obstacle_ids):
        found.setdefault((round(ftp.position[0], 6),
                          round(ftp.position[1], 6)), ftp)
    return list(found.values())


def _boundary_walk_ftps(p, lomap, polygons, obstacle_ids):
    """Extra FTPs when p itself sits on an obstacle boundary.

    Walk from p along each incident boundary direction to the far end of
    the collinear boundary run; that node is an FTP if the continuation
    just past it leaves the boundary into free space.
    """
    if not point_on_obstacle_boundary(lomap, *p):
        return
    g = lomap.grid
    vert_owner = {}
    for poly in polygons:
        if obstacle_ids is not None and poly.component_id not in obstacle_ids:
            continue
        for v in poly.vertices:
            vert_owner[(round(v[0], 6), round(v[1], 6))] = poly.component_id
    for ux, uy in ((g.dx, 0.0), (-g.dx, 0.0), (0.0, g.dy), (0.0, -g.dy)):
        mid = (p[0] + 0.5 * ux, p[1] + 0.5 * uy)
        if not point_on_obstacle_boundary(lomap, *mid):
            continue
        w = p
        while point_on_obstacle_boundary(lomap, w[0] + 0.5 * ux,
                                         w[1] + 0.5 * uy):
            nxt = (w[0] + ux, w[1] + uy)
            if not lomap.grid.contains(nxt[0], nxt[1]):
                break
            w = nxt
        if w == p:
            continue
        probe = (w[0] + 0.5 * ux, w[1] + 0.5 * uy)
        if point_in_obstacle_interior(lomap, *probe):
            continue
        if point_on_obstacle_boundary(lomap, *probe):
            continue
        owner = vert_owner.get((round(w[0], 6), round(w[1], 6)))
        if owner is None and obstacle_ids is not None:
            continue
        yield Ftp(w, owner if owner is not None else -1, "on-boundary-start")


def _convex_hull(points):
    """Andrew monotone chain; returns CCW hull vertices (may be < 3)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower = []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper = []
    for q in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return lower[:-1] + upper[:-1]


def _in_convex_hull(q, hull) -> bool:
    if len(hull) < 3:
        return False
    for a, b in zip(hull, hull[1:] + hull[:1]):
        if (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]) < -_TOL:
            return False
    return True


def _is_hull_tangent(p, q, vertices) -> bool:
    """Every obstacle vertex lies on one closed side of the line p->q."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    scale = _TOL * max(1.0, math.hypot(dx, dy))
    pos = neg = False
    for v in vertices:
        c = dx * (v[1] - p[1]) - dy * (v[0] - p[0])
        if c > scale:
            pos = True
        elif c < -scale:
            neg = True
        if pos and neg:
            return False
    return True


def essential_ftps(p, target, ftps: list, obstacle_id=None,
                   obstacle_vertices=None) -> list:
    """The at-most-two FTPs an optimal detour around one obstacle can use.

    A path that wraps the obstacle must first graze one of the two convex
    hull tangent vertices when the target sits outside the hull; otherwise
    the target lies in one of the boundary pockets and the pair bracketing
    its heading applies.
    """
    cand = [f for f in ftps
            if obstacle_id is None or f.obstacle_id == obstacle_id]
    if len(cand) <= 2:
        return cand
    def ang(pos):
        return math.atan2(pos[1] - p[1], pos[0] - p[0]) % (2 * math.pi)
    def dist(pos):
        return math.hypot(pos[0] - p[0], pos[1] - p[1])
    # identical headings: keep the nearer point only
    by_heading = {}
    for f in cand:
        a = round(ang(f.position), 12)
        cur = by_heading.get(a)
        if cur is None or dist(f.position) < dist(cur.position):
            by_heading[a] = f
    ordered = sorted(by_heading.values(), key=lambda f: ang(f.position))
    if len(ordered) <= 2:
        return ordered
    at = ang(target)
    if obstacle_vertices:
        hull = _convex_hull([(float(v[0]), float(v[1]))
                             for v in obstacle_vertices])
        if not _in_convex_hull(tuple(target), hull):
            tangents = [f for f in ordered
                        if _is_hull_tangent(p, f.position, obstacle_vertices)]
            if len(tangents) >= 2:
                # wrap-safe extremes: headings measured relative to the target
                def rel(f):
                    d = (ang(f.position) - at + math.pi) % (2 * math.pi) \
                        - math.pi
                    return d
                return [min(tangents, key=rel), max(tangents, key=rel)]
    n = len(ordered)
    for k in range(n):
        a0 = ang(ordered[k].position)
        a1 = ang(ordered[(k + 1) % n].position)
        span = (a1 - a0) % (2 * math.pi)
        if (at - a0) % (2 * math.pi) <= span + _TOL:
            return [ordered[k], ordered[(k + 1) % n]]
    return [ordered[0], ordered[-1]]


def expand(p, altitude, target, grid, manifold, *, lomap=None,
           use_essential=True) -> list:
    """Successor positions for the search: target if visible, else FTPs."""
    from .terrain import build_local_obstacle_map
    if lomap is None:
        lomap = build_local_obstacle_map(grid, manifold, p, altitude)
    if point_in_obstacle_interior(lomap, *p):
        return []
    field = ObstacleField.build(lomap)
    blocking = field.blockers(p, target)
    if not blocking:
        return [target]
    successors = []
    seen = set()
    for comp in sorted(blocking):
        ftps = find_ftps(p, lomap, polygons=field.polygons,
                         obstacle_ids={comp})
        verts = [v for poly in field.polygons
                 if poly.component_id == comp and not poly.hole
                 for v in poly.vertices]
        chosen = essential_ftps(p, target, ftps, comp,
                                obstacle_vertices=verts) \
            if use_essential else ftps
        for f in chosen:
            key = (round(f.position[0], 6), round(f.position[1], 6))
            if key not in seen:
                seen.add(key)
                successors.append(f.position)
    return successors
