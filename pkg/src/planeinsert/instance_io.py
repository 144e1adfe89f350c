"""Canonical file formats for instances and solutions, plus SVG rendering.

Instance file (JSON, one object)::

    {"k": 1, "n": 6,
     "rotation": [[1,2,3,4], ...],          # ccw neighbor lists
     "coords": [[x_num,x_den,y_num,y_den], ...] | null,
     "F": [[0,5], ...],                      # insertion pairs (non-edges)
     "f_structure": "none" | "path" | "matching"}

Solution file (JSON)::

    {"routes": [{"f_edge": 0, "events": [
        {"kind": "graph_edge", "u": 1, "v": 2},
        {"kind": "inserted", "index": 0}]}]}

Routes are listed in insertion order (f_edge 0, 1, ...) and an "inserted"
event may only reference a strictly smaller f_edge index.  Coordinates are
exact rationals so the straight-line non-crossing check never touches
floating point.  Serialization is canonical: re-serializing a parsed file
reproduces it byte for byte.

Seeded generators elsewhere in the package all derive randomness from the
64-bit linear congruential generator documented in planeinsert._rng, so
generated instances are reproducible across implementations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    FNotInComplement,
    InvalidRoute,
    MissingCoordinates,
    NonPlaneCoordinates,
    SchemaError,
    StructureMismatch,
)
from .plane_graph import PlaneGraph, build_from_rotation

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class CrossingEvent:
    """One crossing along a route: a graph edge (by endpoints) or an
    earlier inserted edge (by F index)."""

    kind: str  # "graph_edge" | "inserted"
    target: tuple[int, int] | int

    def __post_init__(self):
        if self.kind == "graph_edge":
            if not (isinstance(self.target, tuple) and len(self.target) == 2):
                raise SchemaError("graph_edge event needs endpoint pair")
        elif self.kind == "inserted":
            if not isinstance(self.target, int):
                raise SchemaError("inserted event needs an integer index")
        else:
            raise SchemaError(f"unknown event kind {self.kind!r}")


@dataclass(frozen=True)
class Route:
    f_edge: int
    events: tuple[CrossingEvent, ...]


@dataclass(frozen=True)
class Solution:
    routes: tuple[Route, ...]

    def __post_init__(self):
        for i, route in enumerate(self.routes):
            if route.f_edge != i:
                raise SchemaError(f"route {i} labeled f_edge={route.f_edge}")
            for ev in route.events:
                if ev.kind == "inserted" and not (0 <= ev.target < i):
                    raise SchemaError(
                        f"route {i} references inserted edge {ev.target}")


@dataclass(frozen=True)
class Instance:
    graph: PlaneGraph
    coords: tuple[Point, ...] | None
    F: tuple[tuple[int, int], ...]
    k: int
    f_structure: str = "none"

    def f_index(self) -> dict[tuple[int, int], int]:
        """Keyed lookup from normalized endpoint pair to F position."""
        return {_norm(p): i for i, p in enumerate(self.F)}


def _norm(pair) -> tuple[int, int]:
    u, v = pair
    return (u, v) if u < v else (v, u)


def make_instance(graph: PlaneGraph, F, k: int = 1, coords=None,
                  f_structure: str = "none",
                  check_geometry: bool = True) -> Instance:
    """Validate and freeze an instance built in memory."""
    n = graph.vertex_count
    if k < 1:
        raise SchemaError("k must be a positive integer")
    if f_structure not in ("none", "path", "matching"):
        raise SchemaError(f"bad f_structure {f_structure!r}")
    fpairs = []
    seen = set()
    for pair in F:
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise SchemaError(f"F pair {pair} out of range")
        if u == v:
            raise FNotInComplement(f"F pair {pair} has equal endpoints")
        if graph.has_edge(u, v):
            raise FNotInComplement(f"F pair {pair} is an edge of the graph")
        key = _norm(pair)
        if key in seen:
            raise SchemaError(f"duplicate F pair {pair}")
        seen.add(key)
        fpairs.append((u, v))
    _check_structure(fpairs, f_structure)
    pts = None
    if coords is not None:
        if len(coords) != n:
            raise SchemaError("coords length != vertex count")
        pts = tuple((Fraction(x), Fraction(y)) for x, y in coords)
        if check_geometry:
            _check_plane_coords(graph, pts)
    return Instance(graph, pts, tuple(fpairs), k, f_structure)


def _check_structure(fpairs, f_structure: str) -> None:
    if f_structure == "none" or not fpairs:
        return
    if f_structure == "matching":
        ends = [x for p in fpairs for x in p]
        if len(set(ends)) != 2 * len(fpairs):
            raise StructureMismatch("matching pairs share endpoints")
        return
    # path: consecutive pairs chain through shared endpoints, all vertices
    # distinct, so listing order is the walk order.
    if len(fpairs) == 1:
        return
    first_shared = set(fpairs[0]) & set(fpairs[1])
    if len(first_shared) != 1:
        raise StructureMismatch("F[0] and F[1] do not chain")
    walk = [(set(fpairs[0]) - first_shared).pop()]
    cur = first_shared.pop()
    walk.append(cur)
    for i in range(1, len(fpairs)):
        p = set(fpairs[i])
        if cur not in p or len(p) != 2:
            raise StructureMismatch(f"F[{i}] does not extend the path")
        cur = (p - {cur}).pop()
        walk.append(cur)
    if len(set(walk)) != len(walk):
        raise StructureMismatch("path revisits a vertex")


def _orient(a: Point, b: Point, c: Point) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _segments_conflict(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Exact test: do closed segments intersect anywhere besides a shared
    endpoint?"""
    shared = {p1, p2} & {q1, q2}
    if len(shared) == 2:
        return True  # identical segments
    if len(shared) == 1:
        s = shared.pop()
        a = p2 if p1 == s else p1
        b = q2 if q1 == s else q1
        # Overlap beyond the joint endpoint: collinear and same direction.
        if _orient(s, a, b) == 0:
            da = (a[0] - s[0], a[1] - s[1])
            db = (b[0] - s[0], b[1] - s[1])
            return da[0] * db[0] + da[1] * db[1] > 0
        return False
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4 and (o1 or o2) and (o3 or o4):
        return True
    # Collinear/touching cases: any endpoint inside the other segment.
    for (a, b, c) in ((p1, p2, q1), (p1, p2, q2), (q1, q2, p1), (q1, q2, p2)):
        if _orient(a, b, c) == 0 and _between(a, b, c):
            return True
    return False


def _between(a: Point, b: Point, c: Point) -> bool:
    return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
            and c != a and c != b)


def _check_plane_coords(graph: PlaneGraph, pts: tuple[Point, ...]) -> None:
    segs = []
    for e, u, v in graph.edges():
        x1, y1 = pts[u]
        x2, y2 = pts[v]
        bb = (min(x1, x2), max(x1, x2), min(y1, y2), max(y1, y2))
        segs.append((u, v, bb))
    for i in range(len(segs)):
        u1, v1, bb1 = segs[i]
        for j in range(i + 1, len(segs)):
            u2, v2, bb2 = segs[j]
            if bb1[1] < bb2[0] or bb2[1] < bb1[0]:
                continue
            if bb1[3] < bb2[2] or bb2[3] < bb1[2]:
                continue
            if _segments_conflict(pts[u1], pts[v1], pts[u2], pts[v2]):
                raise NonPlaneCoordinates(
                    f"edges ({u1},{v1}) and ({u2},{v2}) cross")
    # No vertex may sit in the interior of an edge segment.
    for e, u, v in graph.edges():
        a, b = pts[u], pts[v]
        for w in range(graph.vertex_count):
            if w in (u, v):
                continue
            c = pts[w]
            if _orient(a, b, c) == 0 and _between(a, b, c):
                raise NonPlaneCoordinates(f"vertex {w} lies on edge ({u},{v})")


# --- JSON ------------------------------------------------------------------


def parse_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("instance must be a JSON object")
    missing = {"k", "n", "rotation", "coords", "F", "f_structure"} - obj.keys()
    if missing:
        raise SchemaError(f"missing keys: {sorted(missing)}")
    n = obj["n"]
    rotation = obj["rotation"]
    if not isinstance(n, int) or not isinstance(rotation, list):
        raise SchemaError("n must be int, rotation a list")
    if not isinstance(obj["k"], int) or obj["k"] < 1:
        raise SchemaError("k must be a positive integer")
    graph = build_from_rotation(n, rotation)
    coords = obj["coords"]
    pts = None
    if coords is not None:
        if not isinstance(coords, list) or any(
                not isinstance(row, list) or len(row) != 4 for row in coords):
            raise SchemaError("coords must be rows of 4 integers")
        try:
            pts = [(Fraction(xn, xd), Fraction(yn, yd))
                   for xn, xd, yn, yd in coords]
        except ZeroDivisionError as exc:
            raise SchemaError("zero denominator in coords") from exc
    F = obj["F"]
    if not isinstance(F, list) or any(
            not isinstance(p, list) or len(p) != 2 for p in F):
        raise SchemaError("F must be a list of pairs")
    return make_instance(graph, [tuple(p) for p in F], k=obj["k"],
                         coords=pts, f_structure=obj["f_structure"])


def write_instance(inst: Instance) -> str:
    coords = None
    if inst.coords is not None:
        coords = [[p[0].numerator, p[0].denominator,
                   p[1].numerator, p[1].denominator] for p in inst.coords]
    obj = {
        "k": inst.k,
        "n": inst.graph.vertex_count,
        "rotation": inst.graph.rotation(),
        "coords": coords,
        "F": [list(p) for p in inst.F],
        "f_structure": inst.f_structure,
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def parse_solution(text: str) -> Solution:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad JSON: {exc}") from exc
    if not isinstance(obj, dict) or "routes" not in obj:
        raise SchemaError("solution must be an object with routes")
    routes = []
    if not isinstance(obj["routes"], list):
        raise SchemaError("routes must be a list")
    for i, r in enumerate(obj["routes"]):
        if not isinstance(r, dict) or r.get("f_edge") != i:
            raise SchemaError(f"route {i} must carry f_edge={i}")
        events = []
        for ev in r.get("events", ()):
            if not isinstance(ev, dict):
                raise SchemaError("event must be an object")
            kind = ev.get("kind")
            if kind == "graph_edge":
                if not (isinstance(ev.get("u"), int)
                        and isinstance(ev.get("v"), int)):
                    raise SchemaError("graph_edge event needs ints u, v")
                events.append(CrossingEvent("graph_edge",
                                            _norm((ev["u"], ev["v"]))))
            elif kind == "inserted":
                if not isinstance(ev.get("index"), int):
                    raise SchemaError("inserted event needs int index")
                events.append(CrossingEvent("inserted", ev["index"]))
            else:
                raise SchemaError(f"unknown event kind {kind!r}")
        routes.append(Route(i, tuple(events)))
    return Solution(tuple(routes))


def write_solution(sol: Solution) -> str:
    routes = []
    for r in sol.routes:
        events = []
        for ev in r.events:
            if ev.kind == "graph_edge":
                u, v = _norm(ev.target)
                events.append({"kind": "graph_edge", "u": u, "v": v})
            else:
                events.append({"kind": "inserted", "index": ev.target})
        routes.append({"f_edge": r.f_edge, "events": events})
    return json.dumps({"routes": routes}, separators=(",", ":")) + "\n"


# --- SVG rendering -----------------------------------------------------------


def render_svg(inst: Instance, sol: Solution | None = None) -> str:
    """Straight-line drawing: one <line> per graph edge (crossed edges drawn
    thicker), one red <polyline> per route, routed through deterministic
    points on the crossed edges.  Geometry of routes is approximate; their
    combinatorial validity is checked by the verifier first."""
    if inst.coords is None:
        raise MissingCoordinates("instance carries no coordinates")
    if sol is not None:
        from .verifier import verify

        result = verify(inst, sol)
        if not result.accepted:
            raise InvalidRoute(f"{result.reason} (f_edge {result.f_edge})")

    pts = inst.coords
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    spanx = maxx - minx or Fraction(1)
    spany = maxy - miny or Fraction(1)
    size = Fraction(760)
    scale = min(size / spanx, size / spany)

    def sx(x: Fraction) -> float:
        return float((x - minx) * scale + 20)

    def sy(y: Fraction) -> float:
        # SVG y axis points down.
        return float((maxy - y) * scale + 20)

    # Deterministic crossing points: the j-th crossing of an edge (over the
    # replay order of all routes) sits at fraction (j+1)/(c+1) along it.
    cross_total: dict[tuple[str, object], int] = {}
    cross_seen: dict[tuple[str, object], int] = {}
    routes = sol.routes if sol is not None else ()
    for r in routes:
        for ev in r.events:
            key = (ev.kind, ev.target)
            cross_total[key] = cross_total.get(key, 0) + 1

    def endpoint_pair(ev: CrossingEvent) -> tuple[Point, Point]:
        if ev.kind == "graph_edge":
            u, v = ev.target
        else:
            u, v = inst.F[ev.target]
        return pts[u], pts[v]

    crossed_graph_edges = {ev.target for r in routes for ev in r.events
                           if ev.kind == "graph_edge"}

    lines = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                 'width="800" height="800">')
    for e, u, v in inst.graph.edges():
        stroke_width = 3 if _norm((u, v)) in crossed_graph_edges else 1
        lines.append(
            f'<line x1="{sx(pts[u][0]):.3f}" y1="{sy(pts[u][1]):.3f}" '
            f'x2="{sx(pts[v][0]):.3f}" y2="{sy(pts[v][1]):.3f}" '
            f'stroke="black" stroke-width="{stroke_width}"/>')
    for r in routes:
        u, v = inst.F[r.f_edge]
        waypoints = [pts[u]]
        for ev in r.events:
            key = (ev.kind, ev.target)
            j = cross_seen.get(key, 0)
            cross_seen[key] = j + 1
            t = Fraction(j + 1, cross_total[key] + 1)
            a, b = endpoint_pair(ev)
            waypoints.append((a[0] + (b[0] - a[0]) * t,
                              a[1] + (b[1] - a[1]) * t))
        waypoints.append(pts[v])
        point_str = " ".join(f"{sx(p[0]):.3f},{sy(p[1]):.3f}"
                             for p in waypoints)
        lines.append(f'<polyline points="{point_str}" fill="none" '
                     'stroke="red" stroke-width="1.5"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
