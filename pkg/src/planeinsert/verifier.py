"""Certificate checking by iterative planarization.

Routes name logical edges only; which segment of a crossed edge is used,
and through which faces the new edge travels, is found by search.  The
search is complete across routes (it backtracks through earlier routes'
realization choices), so the verdict cannot depend on exploration order.

Drawing conventions (simple curves): a route never crosses an edge that
shares one of its endpoints, and any two edges cross at most once.  Each
crossing becomes a degree-4 dummy vertex splitting both edges involved.

The working drawing is dart-based: working edge ``e`` owns darts ``2e``
(from end a) and ``2e+1`` (from end b); faces are the orbits of
``succ(d) = rotation-next(twin(d))`` exactly as in plane_graph, so no face
table is maintained, and every mutation is journaled for exact undo.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ._rng import Lcg64
from .errors import InvalidRealization, SearchBudgetExceeded
from .instance_io import Instance, Solution
from .plane_graph import PlaneGraph


@dataclass(frozen=True)
class VerifyResult:
    accepted: bool
    reason: str | None = None
    f_edge: int | None = None
    detail: str | None = None


@dataclass(frozen=True)
class Realization:
    """One way to draw a route: a start corner at its tail, the darts whose
    edges it crosses (one per face transition), and an end corner at its
    head.  Corners are rotation positions valid in the state the
    realization was enumerated in."""

    start_pos: int
    crossings: tuple[int, ...]
    end_pos: int


class PlanarizedDrawing:
    """Mutable planarization of an instance with journaled undo."""

    def __init__(self, inst: Instance):
        g: PlaneGraph = inst.graph
        self.base_vertices = g.vertex_count
        self.k = inst.k
        self.rot: list[list[int]] = []
        self.ends: list[tuple[int, int]] = []
        self.owner: list[int] = []
        # Logical edges: 0..E-1 are graph edges, E+i is inserted edge i.
        self.graph_edges = g.edge_count
        self.segments: list[list[int]] = []
        self.count: list[int] = []
        self.log_ends: list[tuple[int, int]] = []
        self.journal: list[tuple] = []

        for e in range(g.edge_count):
            a, b = g.edge_endpoints(e)
            self.ends.append((a, b))
            self.owner.append(e)
            self.segments.append([2 * e])
            self.count.append(0)
            self.log_ends.append((a, b))
        for v in range(g.vertex_count):
            row = []
            for d in g.darts_at(v):
                e = g.edge_of(d)
                a, _ = g.edge_endpoints(e)
                row.append(2 * e if v == a else 2 * e + 1)
            self.rot.append(row)

    # -- dart primitives ---------------------------------------------------

    def tail(self, d: int) -> int:
        return self.ends[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.ends[d >> 1][1 - (d & 1)]

    def succ(self, d: int) -> int:
        t = d ^ 1
        row = self.rot[self.ends[t >> 1][t & 1]]
        return row[(row.index(t) + 1) % len(row)]

    def face_cycle(self, c: int) -> list[int]:
        out = [c]
        d = self.succ(c)
        while d != c:
            out.append(d)
            d = self.succ(d)
        return out

    def vertex_count(self) -> int:
        return len(self.rot)

    def edge_count(self) -> int:
        return sum(len(r) for r in self.rot) // 2

    # -- journaled mutations -------------------------------------------------

    def _rot_insert(self, v: int, pos: int, d: int) -> None:
        self.rot[v].insert(pos, d)
        self.journal.append(("ri", v, pos))

    def _rot_set(self, v: int, pos: int, d: int) -> None:
        self.journal.append(("rs", v, pos, self.rot[v][pos]))
        self.rot[v][pos] = d

    def _new_vertex(self, row: list[int]) -> int:
        self.rot.append(row)
        self.journal.append(("vtx",))
        return len(self.rot) - 1

    def _new_edge(self, a: int, b: int, owner: int) -> int:
        self.ends.append((a, b))
        self.owner.append(owner)
        self.journal.append(("edge",))
        return len(self.ends) - 1

    def _bump(self, logical: int) -> None:
        self.count[logical] += 1
        self.journal.append(("cnt", logical))

    def _seg_splice(self, logical: int, idx: int, new: list[int]) -> None:
        old = self.segments[logical][idx:idx + 1]
        self.segments[logical][idx:idx + 1] = new
        self.journal.append(("seg", logical, idx, old, len(new)))

    def token(self) -> int:
        return len(self.journal)

    def undo(self, token: int) -> None:
        j = self.journal
        while len(j) > token:
            op = j.pop()
            tag = op[0]
            if tag == "ri":
                del self.rot[op[1]][op[2]]
            elif tag == "rs":
                self.rot[op[1]][op[2]] = op[3]
            elif tag == "vtx":
                self.rot.pop()
            elif tag == "edge":
                self.ends.pop()
                self.owner.pop()
            elif tag == "cnt":
                self.count[op[1]] -= 1
            elif tag == "seg":
                _, logical, idx, old, added = op
                self.segments[logical][idx:idx + added] = old
            elif tag == "lg":
                self.segments.pop()
                self.count.pop()
                self.log_ends.pop()
            else:  # pragma: no cover
                raise AssertionError(tag)

    # -- realization search ----------------------------------------------------

    def adjacent_logicals(self, u: int, v: int) -> set[int]:
        """Logical edges sharing an endpoint with (u, v): never crossable."""
        out = set()
        for L, (a, b) in enumerate(self.log_ends):
            if a in (u, v) or b in (u, v):
                out.add(L)
        return out

    def enumerate_realizations(self, u: int, v: int,
                               pinned: Sequence[int] | None,
                               max_crossings: int,
                               rng: Lcg64 | None = None) -> list[Realization]:
        """All ways to route u -> v; `pinned` fixes the crossed logical
        edges in order, otherwise anything within budgets goes."""
        forbidden = self.adjacent_logicals(u, v)
        results: list[Realization] = []
        owner = self.owner
        count = self.count
        k = self.k

        def stage(corner: int, depth: int, crossed: list[int],
                  used_logical: set[int]) -> None:
            cycle = self.face_cycle(corner)
            if pinned is not None:
                done = depth == len(pinned)
            else:
                done = True  # may stop in any face
            if done:
                for d in cycle:
                    if self.tail(d) == v:
                        results.append(Realization(
                            start_pos=-1, crossings=tuple(crossed),
                            end_pos=self.rot[v].index(d)))
            if pinned is None and depth == max_crossings:
                return
            if pinned is not None and depth == len(pinned):
                return
            want = pinned[depth] if pinned is not None else None
            cand = cycle if rng is None else _shuffled(cycle, rng)
            for d in cand:
                L = owner[d >> 1]
                if want is not None:
                    if L != want:
                        continue
                elif L in forbidden or L in used_logical or count[L] >= k:
                    continue
                if L in used_logical:
                    continue
                used_logical.add(L)
                crossed.append(d)
                stage(d ^ 1, depth + 1, crossed, used_logical)
                crossed.pop()
                used_logical.discard(L)

        start_positions = list(range(len(self.rot[u])))
        if rng is not None:
            _shuffle_inplace(start_positions, rng)
        for p in start_positions:
            before = len(results)
            stage(self.rot[u][p], 0, [], set())
            for i in range(before, len(results)):
                r = results[i]
                results[i] = Realization(p, r.crossings, r.end_pos)
        # Canonical order prefers fewer crossings; stable within a length.
        results.sort(key=lambda r: len(r.crossings))
        return results

    # -- surgery -----------------------------------------------------------------

    def insert(self, u: int, v: int, real: Realization) -> int:
        """Insert a new logical edge u->v along the realization; returns an
        undo token."""
        token = self.token()
        logical = len(self.segments)
        self.segments.append([])
        self.count.append(0)
        self.log_ends.append((u, v))
        self.journal.append(("lg",))

        entry_corner: list[int] = []
        exit_corner: list[int] = []
        for d in real.crossings:
            eid = d >> 1
            a, b = self.tail(d), self.head(d)
            owner_l = self.owner[eid]
            e1 = self._new_edge(a, -1, owner_l)  # (a, m); m patched below
            e2 = self._new_edge(-1, b, owner_l)  # (m, b)
            m = self._new_vertex([2 * e1 + 1, 2 * e2])
            self.ends[e1] = (a, m)
            self.ends[e2] = (m, b)
            pos_a = self.rot[a].index(d)
            self._rot_set(a, pos_a, 2 * e1)
            pos_b = self.rot[b].index(d ^ 1)
            self._rot_set(b, pos_b, 2 * e2 + 1)
            seg = self.segments[owner_l]
            if d in seg:
                self._seg_splice(owner_l, seg.index(d), [2 * e1, 2 * e2])
            else:
                idx = seg.index(d ^ 1)
                self._seg_splice(owner_l, idx, [2 * e2 + 1, 2 * e1 + 1])
            self._bump(owner_l)
            self._bump(logical)
            entry_corner.append(2 * e2)      # dart m->b, on the entry face
            exit_corner.append(2 * e1 + 1)   # dart m->a, on the exit face

        points = [u] + [self.tail(c) for c in entry_corner] + [v]
        for j in range(len(points) - 1):
            x, y = points[j], points[j + 1]
            if j == 0:
                pos_x = real.start_pos
            else:
                pos_x = self.rot[x].index(exit_corner[j - 1])
            if j == len(points) - 2:
                pos_y = real.end_pos
            else:
                pos_y = self.rot[y].index(entry_corner[j])
            e = self._new_edge(x, y, logical)
            self._rot_insert(x, pos_x, 2 * e)
            self._rot_insert(y, pos_y, 2 * e + 1)
            self.segments[logical].append(2 * e)
            self.journal.append(("seg", logical,
                                 len(self.segments[logical]) - 1, [], 1))
        return token

    # -- validation (tests) -------------------------------------------------------

    def validate(self) -> None:
        """Euler check and structural sanity of the working drawing."""
        all_darts = [d for row in self.rot for d in row]
        assert len(all_darts) == len(set(all_darts)), "duplicate dart"
        dart_set = set(all_darts)
        for d in dart_set:
            assert d ^ 1 in dart_set, f"missing twin of {d}"
            assert d in self.rot[self.tail(d)]
        n = len(self.rot)
        e = len(all_darts) // 2
        seen: set[int] = set()
        faces = 0
        for d in dart_set:
            if d in seen:
                continue
            faces += 1
            seen.update(self.face_cycle(d))
        assert n - e + faces == 2, f"Euler violated: {n}-{e}+{faces}"
        for m in range(self.base_vertices, len(self.rot)):
            assert len(self.rot[m]) in (2, 4), f"dummy {m} degree"
        for logical, segs in enumerate(self.segments):
            assert len(segs) == self.count[logical] + 1 or not segs


def _shuffled(items: list[int], rng: Lcg64) -> list[int]:
    out = list(items)
    _shuffle_inplace(out, rng)
    return out


def _shuffle_inplace(items: list[int], rng: Lcg64) -> None:
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]


def planarize_insert(pd: PlanarizedDrawing, f_edge: tuple[int, int],
                     real: Realization) -> int:
    """Spec-level wrapper: insert one edge along a realization.

    Raises InvalidRealization when the realization does not fit the current
    drawing (stale corners, reused segments, or a broken face walk)."""
    u, v = f_edge
    try:
        _check_realization(pd, u, v, real)
    except (IndexError, ValueError) as exc:
        raise InvalidRealization(str(exc)) from exc
    return pd.insert(u, v, real)


def _check_realization(pd: PlanarizedDrawing, u: int, v: int,
                       real: Realization) -> None:
    if not (0 <= real.start_pos < len(pd.rot[u])):
        raise InvalidRealization("start corner out of range")
    if len(set(d >> 1 for d in real.crossings)) != len(real.crossings):
        raise InvalidRealization("segment reused within route")
    corner = pd.rot[u][real.start_pos]
    for d in real.crossings:
        if d not in pd.face_cycle(corner):
            raise InvalidRealization("crossing dart not on current face")
        corner = d ^ 1
    final = pd.face_cycle(corner)
    ends = [d for d in final if pd.tail(d) == v]
    if not (0 <= real.end_pos < len(pd.rot[v])):
        raise InvalidRealization("end corner out of range")
    if pd.rot[v][real.end_pos] not in ends:
        raise InvalidRealization("end corner not on final face")


# --- verify -------------------------------------------------------------------


def verify(inst: Instance, sol: Solution, seed: int | None = None,
           node_budget: int = 2_000_000) -> VerifyResult:
    """Replay a solution; Accepted iff some joint realization of all routes
    exists and every edge ends with at most k crossings."""
    if len(sol.routes) != len(inst.F):
        return VerifyResult(False, "no_realization", None,
                            f"{len(sol.routes)} routes for {len(inst.F)} edges")
    g = inst.graph
    k = inst.k
    m = len(inst.F)

    # Resolve events to logical ids and run the static checks.
    pinned_all: list[list[int]] = []
    counts = [0] * (g.edge_count + m)
    for i, route in enumerate(sol.routes):
        u, v = inst.F[i]
        if len(route.events) > k:
            return VerifyResult(False, "crossing_budget_exceeded", i,
                                f"inserted edge {i} would cross "
                                f"{len(route.events)} times")
        named: set[int] = set()
        pinned: list[int] = []
        for ev in route.events:
            if ev.kind == "graph_edge":
                a, b = ev.target
                e = g.edge_between(a, b)
                if e is None:
                    return VerifyResult(False, "no_realization", i,
                                        f"({a},{b}) is not a graph edge")
                logical = e
                la, lb = a, b
            else:
                if not (0 <= ev.target < i):
                    return VerifyResult(False, "route_references_later_edge",
                                        i, f"references edge {ev.target}")
                logical = g.edge_count + ev.target
                la, lb = inst.F[ev.target]
            if logical in named:
                return VerifyResult(False, "no_realization", i,
                                    "route crosses one edge twice")
            if la in (u, v) or lb in (u, v):
                return VerifyResult(False, "no_realization", i,
                                    "route crosses an adjacent edge")
            named.add(logical)
            counts[logical] += 1
            pinned.append(logical)
        counts[g.edge_count + i] += len(route.events)
        pinned_all.append(pinned)
    for logical, c in enumerate(counts):
        if c > k:
            if logical < g.edge_count:
                detail = f"graph edge {g.edge_endpoints(logical)}"
            else:
                detail = f"inserted edge {logical - g.edge_count}"
            return VerifyResult(False, "crossing_budget_exceeded",
                                None, f"{detail} crossed {c} > {k} times")

    pd = PlanarizedDrawing(inst)
    rng = Lcg64(seed) if seed is not None else None
    nodes = 0
    deepest = 0

    def go(i: int) -> bool:
        nonlocal nodes, deepest
        if i == m:
            return True
        deepest = max(deepest, i)
        u, v = inst.F[i]
        reals = pd.enumerate_realizations(u, v, pinned_all[i],
                                          len(pinned_all[i]), rng=rng)
        for real in reals:
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"verify exceeded {node_budget}")
            tok = pd.insert(u, v, real)
            if go(i + 1):
                return True
            pd.undo(tok)
        return False

    if go(0):
        assert all(c <= k for c in pd.count)
        return VerifyResult(True)
    return VerifyResult(False, "no_realization", deepest,
                        "no joint realization of the routes")
