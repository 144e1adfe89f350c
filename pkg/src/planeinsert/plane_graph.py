"""Index-based combinatorial plane embeddings.

A drawing is stored as a rotation system: for every vertex the cyclic,
counterclockwise list of its neighbors.  Each undirected edge contributes
two darts (directed edge sides).  Faces are the orbits of the successor
map ``succ(d) = next(twin(d))`` where ``next`` steps counterclockwise in
the rotation at the dart's tail.  For a connected rotation system the
Euler count ``V - E + F = 2`` holds exactly when the embedding has genus
zero, which is the planarity criterion used here.

Vertices, darts, edges and faces are dense integer indices.  Dart ``d``
of vertex ``v`` occupies slot ``d - offset(v)`` of ``v``'s rotation, so
rotation-next is index arithmetic and needs no stored pointer.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._rng import Lcg64
from .errors import (
    AsymmetricAdjacency,
    Disconnected,
    InsufficientComplementPairs,
    InvalidRotation,
    NotIncident,
    NotPlanarEmbedding,
    NotTriangle,
)

# A plane rotation of K4: faces (0,1,2), (0,2,3), (0,3,1) and outer (2,1,3).
K4_ROTATION: list[list[int]] = [[1, 3, 2], [0, 2, 3], [1, 0, 3], [2, 0, 1]]


@dataclass(frozen=True)
class Dart:
    """One directed side of an edge."""

    id: int
    tail: int
    head: int
    twin: int
    next: int  # next dart counterclockwise around the tail
    edge: int


@dataclass(frozen=True)
class FaceRecord:
    id: int
    boundary: tuple[int, ...]  # dart cycle under next(twin(.))
    degree: int


class PlaneGraph:
    """Immutable combinatorial embedding of a connected simple plane graph."""

    __slots__ = (
        "vertex_count",
        "edge_count",
        "face_count",
        "outer_face",
        "_offsets",
        "_head",
        "_tail",
        "_twin",
        "_edge",
        "_face",
        "_eu",
        "_ev",
        "_edge_dart",
        "_face_dart",
    )

    def __init__(self, offsets, head, tail, twin, edge, face, eu, ev,
                 edge_dart, face_dart, outer_face=0):
        self.vertex_count = len(offsets) - 1
        self.edge_count = len(eu)
        self.face_count = len(face_dart)
        self.outer_face = outer_face
        self._offsets = offsets
        self._head = head
        self._tail = tail
        self._twin = twin
        self._edge = edge
        self._face = face
        self._eu = eu
        self._ev = ev
        self._edge_dart = edge_dart
        self._face_dart = face_dart

    # -- dart primitives ---------------------------------------------------

    @property
    def dart_count(self) -> int:
        return len(self._head)

    def tail(self, d: int) -> int:
        return self._tail[d]

    def head(self, d: int) -> int:
        return self._head[d]

    def twin(self, d: int) -> int:
        return self._twin[d]

    def next(self, d: int) -> int:
        """Next dart counterclockwise around tail(d)."""
        t = self._tail[d]
        base = self._offsets[t]
        deg = self._offsets[t + 1] - base
        return base + (d - base + 1) % deg

    def succ(self, d: int) -> int:
        """Next dart along the face of d (next of twin)."""
        return self.next(self._twin[d])

    def edge_of(self, d: int) -> int:
        return self._edge[d]

    def face_of(self, d: int) -> int:
        return self._face[d]

    def dart(self, d: int) -> Dart:
        return Dart(d, self._tail[d], self._head[d], self._twin[d],
                    self.next(d), self._edge[d])

    # -- vertices ------------------------------------------------------------

    def degree(self, v: int) -> int:
        return self._offsets[v + 1] - self._offsets[v]

    def darts_at(self, v: int) -> range:
        return range(self._offsets[v], self._offsets[v + 1])

    def neighbors(self, v: int) -> list[int]:
        return [self._head[d] for d in self.darts_at(v)]

    def rotation(self) -> list[list[int]]:
        """Reconstruct the per-vertex counterclockwise neighbor lists."""
        return [self.neighbors(v) for v in range(self.vertex_count)]

    # -- edges ---------------------------------------------------------------

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        return self._eu[e], self._ev[e]

    def edge_darts(self, e: int) -> tuple[int, int]:
        d = self._edge_dart[e]
        return d, self._twin[d]

    def dart_between(self, u: int, v: int) -> int | None:
        """Dart from u to v, or None when (u, v) is not an edge."""
        for d in self.darts_at(u):
            if self._head[d] == v:
                return d
        return None

    def edge_between(self, u: int, v: int) -> int | None:
        d = self.dart_between(u, v)
        return None if d is None else self._edge[d]

    def has_edge(self, u: int, v: int) -> bool:
        return self.dart_between(u, v) is not None

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for e in range(self.edge_count):
            yield e, self._eu[e], self._ev[e]

    def faces_of_edge(self, e: int) -> tuple[int, int]:
        d = self._edge_dart[e]
        return self._face[d], self._face[self._twin[d]]

    # -- faces ---------------------------------------------------------------

    def face_boundary(self, f: int) -> list[int]:
        start = self._face_dart[f]
        out = [start]
        d = self.succ(start)
        while d != start:
            out.append(d)
            d = self.succ(d)
        return out

    def face_degree(self, f: int) -> int:
        return len(self.face_boundary(f))

    def face_vertices(self, f: int) -> list[int]:
        return [self._tail[d] for d in self.face_boundary(f)]

    def face(self, f: int) -> FaceRecord:
        b = tuple(self.face_boundary(f))
        return FaceRecord(f, b, len(b))

    def with_outer_face(self, f: int) -> "PlaneGraph":
        g = PlaneGraph(self._offsets, self._head, self._tail, self._twin,
                       self._edge, self._face, self._eu, self._ev,
                       self._edge_dart, self._face_dart, outer_face=f)
        return g


def build_from_rotation(vertex_count: int, rotation: Sequence[Sequence[int]]) -> PlaneGraph:
    """Build the embedding for counterclockwise neighbor lists.

    Raises InvalidRotation for malformed lists, AsymmetricAdjacency when the
    lists are not symmetric, Disconnected for a disconnected graph, and
    NotPlanarEmbedding when the face count violates Euler's formula.
    """
    n = vertex_count
    if n < 2:
        raise InvalidRotation("need at least 2 vertices")
    if len(rotation) != n:
        raise InvalidRotation(f"rotation has {len(rotation)} rows, expected {n}")

    offsets = array("q", bytes(8 * (n + 1)))
    for v, row in enumerate(rotation):
        seen: set[int] = set()
        for w in row:
            if not isinstance(w, int) or w < 0 or w >= n:
                raise InvalidRotation(f"vertex {v}: bad neighbor {w!r}")
            if w == v:
                raise InvalidRotation(f"vertex {v}: loop")
            if w in seen:
                raise InvalidRotation(f"vertex {v}: duplicate neighbor {w}")
            seen.add(w)
        offsets[v + 1] = offsets[v] + len(row)

    m2 = offsets[n]  # number of darts = 2E
    if m2 == 0:
        raise InvalidRotation("graph has no edges")
    if m2 % 2:
        raise AsymmetricAdjacency("odd number of darts")

    head = array("q", bytes(8 * m2))
    tail = array("q", bytes(8 * m2))
    for v, row in enumerate(rotation):
        base = offsets[v]
        for i, w in enumerate(row):
            head[base + i] = w
            tail[base + i] = v

    twin = array("q", bytes(8 * m2))
    edge = array("q", bytes(8 * m2))
    eu = array("q")
    ev = array("q")
    edge_dart = array("q")

    # Pair twins without a global hash map: for a dart u->v with u < v, scan
    # v's slots for the reverse dart.
    paired = 0
    for d in range(m2):
        u = tail[d]
        v = head[d]
        if u > v:
            continue
        partner = -1
        for d2 in range(offsets[v], offsets[v + 1]):
            if head[d2] == u:
                partner = d2
                break
        if partner < 0:
            raise AsymmetricAdjacency(f"{u} lists {v} but {v} does not list {u}")
        e = len(eu)
        eu.append(u)
        ev.append(v)
        edge_dart.append(d)
        twin[d] = partner
        twin[partner] = d
        edge[d] = e
        edge[partner] = e
        paired += 2
    if paired != m2:
        raise AsymmetricAdjacency("unpaired dart (asymmetric neighbor lists)")

    # Connectivity (BFS over vertices).
    seen_v = bytearray(n)
    seen_v[0] = 1
    queue = deque([0])
    reached = 1
    while queue:
        v = queue.popleft()
        for d in range(offsets[v], offsets[v + 1]):
            w = head[d]
            if not seen_v[w]:
                seen_v[w] = 1
                reached += 1
                queue.append(w)
    if reached != n:
        raise Disconnected(f"reached {reached} of {n} vertices")

    # Face orbits under next(twin(.)).
    face = array("q", bytes(8 * m2))
    visited = bytearray(m2)
    face_dart = array("q")
    for d0 in range(m2):
        if visited[d0]:
            continue
        f = len(face_dart)
        face_dart.append(d0)
        d = d0
        while True:
            face[d] = f
            visited[d] = 1
            t = twin[d]
            tt = tail[t]
            base = offsets[tt]
            deg = offsets[tt + 1] - base
            d = base + (t - base + 1) % deg
            if d == d0:
                break

    n_edges = m2 // 2
    n_faces = len(face_dart)
    if n - n_edges + n_faces != 2:
        raise NotPlanarEmbedding(
            f"V - E + F = {n} - {n_edges} + {n_faces} != 2")

    return PlaneGraph(offsets, head, tail, twin, edge, face, eu, ev,
                      edge_dart, face_dart)


def is_triangulation(g: PlaneGraph) -> bool:
    """True iff every face, outer included, is a triangle and V >= 4."""
    if g.vertex_count < 4:
        return False
    if g.edge_count != 3 * g.vertex_count - 6:
        return False
    # Cheap length-3 orbit test per face, without materializing boundaries.
    for f in range(g.face_count):
        d0 = g._face_dart[f]
        if g.succ(g.succ(g.succ(d0))) != d0 or g.succ(d0) == d0:
            return False
    return True


def apex(g: PlaneGraph, e: int, f: int) -> int:
    """The vertex of triangular face f opposite edge e."""
    if f not in g.faces_of_edge(e):
        raise NotIncident(f"edge {e} not on face {f}")
    verts = g.face_vertices(f)
    if len(verts) != 3:
        raise NotTriangle(f"face {f} has degree {len(verts)}")
    u, v = g.edge_endpoints(e)
    for w in verts:
        if w != u and w != v:
            return w
    raise NotTriangle(f"face {f} degenerate around edge {e}")


def apex_pair(g: PlaneGraph, e: int) -> tuple[int, int]:
    """Apexes of the two faces incident to edge e (triangulations only).

    Assumes both faces are triangles; callers on full triangulations get
    O(1) behavior without face lookups.
    """
    d, t = g.edge_darts(e)
    return g.head(g.succ(d)), g.head(g.succ(t))


def generate_stacked_triangulation(n: int, seed: int) -> PlaneGraph:
    """Random stacked triangulation: K4 plus repeated degree-3 insertions.

    Starting from K4, a uniformly random inner face (never the designated
    outer face) receives a new vertex joined to its three corners.  The
    result is deterministic for a given (n, seed).
    """
    if n < 4:
        raise ValueError("stacked triangulation needs n >= 4")
    rng = Lcg64(seed)
    rot: list[list[int]] = [list(row) for row in K4_ROTATION]
    # Inner faces in orbit order; the outer face (2,1,3) is never stacked.
    faces: list[tuple[int, int, int]] = [(0, 1, 2), (0, 2, 3), (0, 3, 1)]
    for x in range(4, n):
        a, b, c = faces[rng.below(len(faces))]
        rot[a].insert(rot[a].index(c) + 1, x)
        rot[b].insert(rot[b].index(a) + 1, x)
        rot[c].insert(rot[c].index(b) + 1, x)
        rot.append([c, b, a])
        faces[faces.index((a, b, c))] = (a, b, x)
        faces.append((b, c, x))
        faces.append((c, a, x))
    g = build_from_rotation(n, rot)
    d = g.dart_between(2, 1)
    assert d is not None
    return g.with_outer_face(g.face_of(d))


def complement_pairs(g: PlaneGraph) -> list[tuple[int, int]]:
    """All non-adjacent vertex pairs (u < v), lexicographically sorted."""
    out = []
    n = g.vertex_count
    adj: list[set[int]] = [set(g.neighbors(v)) for v in range(n)]
    for u in range(n):
        au = adj[u]
        for v in range(u + 1, n):
            if v not in au:
                out.append((u, v))
    return out


def sample_complement_edges(g: PlaneGraph, m: int, seed: int,
                            structure: str = "none") -> list[tuple[int, int]]:
    """Sample m distinct non-edges, optionally as a matching or a path.

    Deterministic for a given seed.  Raises InsufficientComplementPairs when
    the complement cannot supply the requested structure.
    """
    if structure not in ("none", "matching", "path"):
        raise ValueError(f"unknown structure {structure!r}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return []
    rng = Lcg64(seed)
    n = g.vertex_count

    if n <= 1024:
        pool = complement_pairs(g)
        rng.shuffle(pool)
        if structure == "none":
            if len(pool) < m:
                raise InsufficientComplementPairs(
                    f"complement has {len(pool)} pairs, need {m}")
            return pool[:m]
        if structure == "matching":
            result = _matching_backtrack(pool, m)
        else:
            result = _path_backtrack(pool, m, n)
        if result is None:
            raise InsufficientComplementPairs(
                f"no {structure} of size {m} in the complement")
        return result

    # Large graphs: rejection sampling; the complement is dense since
    # E <= 3V - 6.
    return _sample_large(g, m, rng, structure)


def _matching_backtrack(pool: list[tuple[int, int]],
                        m: int) -> list[tuple[int, int]] | None:
    chosen: list[tuple[int, int]] = []
    used: set[int] = set()

    def go(start: int) -> bool:
        if len(chosen) == m:
            return True
        if m - len(chosen) > len(pool) - start:
            return False
        for i in range(start, len(pool)):
            u, v = pool[i]
            if u in used or v in used:
                continue
            chosen.append((u, v))
            used.add(u)
            used.add(v)
            if go(i + 1):
                return True
            chosen.pop()
            used.discard(u)
            used.discard(v)
        return False

    return chosen if go(0) else None


def _path_backtrack(pool: list[tuple[int, int]], m: int,
                    n: int) -> list[tuple[int, int]] | None:
    # Adjacency of the complement restricted to the shuffled pool order.
    nbr: dict[int, list[int]] = {}
    starts: list[int] = []
    seen_start: set[int] = set()
    for u, v in pool:
        nbr.setdefault(u, []).append(v)
        nbr.setdefault(v, []).append(u)
        for w in (u, v):
            if w not in seen_start:
                seen_start.add(w)
                starts.append(w)

    path: list[int] = []
    on_path: set[int] = set()

    def extend() -> bool:
        if len(path) == m + 1:
            return True
        cur = path[-1]
        for w in nbr.get(cur, ()):
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            if extend():
                return True
            path.pop()
            on_path.discard(w)
        return False

    for s in starts:
        path = [s]
        on_path = {s}
        if extend():
            return [(path[i], path[i + 1]) for i in range(m)]
    return None


def _sample_large(g: PlaneGraph, m: int, rng: Lcg64,
                  structure: str) -> list[tuple[int, int]]:
    n = g.vertex_count
    cap = 200 * m + 10_000
    attempts = 0
    if structure == "none":
        seen: set[tuple[int, int]] = set()
        out: list[tuple[int, int]] = []
        while len(out) < m:
            attempts += 1
            if attempts > cap:
                raise InsufficientComplementPairs("rejection cap hit")
            u = rng.below(n)
            v = rng.below(n)
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen or g.has_edge(u, v):
                continue
            seen.add(key)
            out.append(key)
        return out
    if structure == "matching":
        used: set[int] = set()
        out = []
        while len(out) < m:
            attempts += 1
            if attempts > cap:
                raise InsufficientComplementPairs("rejection cap hit")
            u = rng.below(n)
            v = rng.below(n)
            if u == v or u in used or v in used or g.has_edge(u, v):
                continue
            out.append((u, v) if u < v else (v, u))
            used.add(u)
            used.add(v)
        return out
    # path
    on_path = set()
    cur = rng.below(n)
    on_path.add(cur)
    out = []
    while len(out) < m:
        attempts += 1
        if attempts > cap:
            raise InsufficientComplementPairs("rejection cap hit")
        w = rng.below(n)
        if w in on_path or g.has_edge(cur, w):
            continue
        out.append((cur, w))
        on_path.add(w)
        cur = w
    return out
