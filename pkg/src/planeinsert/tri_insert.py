"""Linear-time single-crossing insertion into triangulations.

In a triangulation every face is a triangle, so an insertion edge (u, v)
cannot be drawn crossing-free and a drawing with one crossing is the pair
of faces glued along the crossed edge whose apexes are u and v.  The
solver enumerates those options (at most one per graph edge), builds the
conflict relation between options of different insertion edges, shrinks
every insertion edge to at most two live options by committing forced or
safe options and deleting blocked ones, and decides the two-option residue
with a 2-SAT formula.

Option conflict rule: options sigma (quad u, x, v, w around crossed edge
(x, w)) and sigma' of another insertion edge clash exactly when sigma'
crosses one of the four quad boundary edges (u,x), (x,v), (v,w), (w,u);
the two drawn edges then share a face and are forced to cross each other,
which neither can afford.  Each quad edge hosts at most one option, so an
option clashes with at most four others.

Two options of the same insertion edge are consecutive exactly when their
crossed edges share a vertex; option sets therefore decompose into paths
and cycles, which drives the case analysis in reduce_instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .errors import KNotOne, NotTriangulation
from .instance_io import CrossingEvent, Instance, Route, Solution
from .plane_graph import PlaneGraph, is_triangulation
from .twosat import TwoSatFormula
from .twosat import solve as twosat_solve
from .verdicts import Verdict

TraceEvent = tuple  # ("delete", opt) | ("commit", f, opt) | ("infeasible", f)


@dataclass(frozen=True)
class Option:
    id: int
    f_edge: int
    crossed: int               # graph edge index
    quad: tuple[int, int, int, int]  # (u, x, v, w); crossed = (x, w)


class OptionCatalog:
    """Per-insertion-edge options with alive flags and commitments."""

    def __init__(self, inst: Instance):
        self.instance = inst
        self.options: list[Option] = []
        self.f_options: list[list[int]] = [[] for _ in inst.F]
        self.alive: bytearray = bytearray()
        self.live_count: list[int] = [0] * len(inst.F)
        self.committed: dict[int, int] = {}
        self.option_of_edge: dict[int, int] = {}

    def add(self, f_edge: int, crossed: int, quad) -> None:
        oid = len(self.options)
        self.options.append(Option(oid, f_edge, crossed, tuple(quad)))
        self.f_options[f_edge].append(oid)
        self.alive.append(1)
        self.live_count[f_edge] += 1
        assert crossed not in self.option_of_edge, \
            "graph edge serves two insertion edges"
        self.option_of_edge[crossed] = oid

    def alive_options(self, f_edge: int) -> list[int]:
        return [o for o in self.f_options[f_edge] if self.alive[o]]

    def total_alive(self) -> int:
        return sum(self.alive)


class ClashGraph:
    def __init__(self, n_options: int):
        self.adj: list[list[int]] = [[] for _ in range(n_options)]

    def add_pair(self, a: int, b: int) -> None:
        self.adj[a].append(b)
        self.adj[b].append(a)

    def degree(self, o: int) -> int:
        return len(self.adj[o])


@dataclass
class OptionClassification:
    label: str                      # two_isolated | two_consecutive |
    #                                 isolated_option | long_run | compact |
    #                                 scattered
    runs: list[list[int]] = field(default_factory=list)
    cycles: list[list[int]] = field(default_factory=list)


def _edge_id(g: PlaneGraph, u: int, v: int) -> int:
    e = g.edge_between(u, v)
    assert e is not None, f"quad edge ({u},{v}) missing"
    return e


def enumerate_options(inst: Instance) -> OptionCatalog:
    """All single-crossing drawings per insertion edge, O(V) total."""
    if inst.k != 1:
        raise KNotOne(f"k={inst.k}")
    g = inst.graph
    if not is_triangulation(g):
        raise NotTriangulation("instance graph is not a triangulation")
    catalog = OptionCatalog(inst)
    findex = inst.f_index()
    head = g.head
    succ = g.succ
    for e in range(g.edge_count):
        d, t = g.edge_darts(e)
        a1 = head(succ(d))
        a2 = head(succ(t))
        key = (a1, a2) if a1 < a2 else (a2, a1)
        f = findex.get(key)
        if f is None:
            continue
        x, w = g.edge_endpoints(e)
        catalog.add(f, e, (a1, x, a2, w))
    return catalog


def compute_clashes(catalog: OptionCatalog) -> ClashGraph:
    """Pairs of options of distinct insertion edges that cannot coexist."""
    g = catalog.instance.graph
    clashes = ClashGraph(len(catalog.options))
    for opt in catalog.options:
        u, x, v, w = opt.quad
        for (a, b) in ((u, x), (x, v), (v, w), (w, u)):
            other = catalog.option_of_edge.get(_edge_id(g, a, b))
            if other is None or other <= opt.id:
                continue  # pairs added once, from the smaller id
            if catalog.options[other].f_edge == opt.f_edge:
                continue
            clashes.add_pair(opt.id, other)
    for opt in catalog.options:
        assert clashes.degree(opt.id) <= 4, "clash degree exceeds 4"
    return clashes


def classify_options(catalog: OptionCatalog, f_edge: int) -> OptionClassification:
    """Structure of an edge's live option set: runs and cycles of
    consecutive options (crossed edges sharing a vertex)."""
    opts = catalog.alive_options(f_edge)
    assert len(opts) >= 2, "classification needs >= 2 live options"
    g = catalog.instance.graph
    at_vertex: dict[int, list[int]] = {}
    for o in opts:
        x, w = g.edge_endpoints(catalog.options[o].crossed)
        at_vertex.setdefault(x, []).append(o)
        at_vertex.setdefault(w, []).append(o)
    nbr: dict[int, list[int]] = {o: [] for o in opts}
    for v, group in at_vertex.items():
        assert len(group) <= 2, "three options share a crossed-edge vertex"
        if len(group) == 2:
            a, b = group
            nbr[a].append(b)
            nbr[b].append(a)

    runs: list[list[int]] = []
    cycles: list[list[int]] = []
    seen: set[int] = set()
    for o in sorted(opts):
        if o in seen:
            continue
        comp = {o}
        frontier = [o]
        while frontier:
            c = frontier.pop()
            for d in nbr[c]:
                if d not in comp:
                    comp.add(d)
                    frontier.append(d)
        seen |= comp
        ends = sorted(c for c in comp if len(nbr[c]) <= 1)
        if not ends:  # cycle
            start = min(comp)
            cyc = [start]
            prev, cur = start, min(nbr[start])
            while cur != start:
                cyc.append(cur)
                nxt = [d for d in nbr[cur] if d != prev]
                prev, cur = cur, nxt[0]
            cycles.append(cyc)
        else:
            start = ends[0]
            run = [start]
            prev, cur = start, (nbr[start][0] if nbr[start] else None)
            while cur is not None:
                run.append(cur)
                nxt = [d for d in nbr[cur] if d != prev]
                prev, cur = cur, (nxt[0] if nxt else None)
            runs.append(run)

    if len(opts) == 2:
        label = "two_consecutive" if len(runs) == 1 else "two_isolated"
        return OptionClassification(label, runs, cycles)
    if any(len(r) == 1 for r in runs):
        return OptionClassification("isolated_option", runs, cycles)
    if any(len(r) >= 4 for r in runs):
        return OptionClassification("long_run", runs, cycles)
    single_comp = (len(runs) + len(cycles)) == 1
    if single_comp and (
            (runs and len(runs[0]) == 3)
            or (cycles and len(cycles[0]) in (3, 4))):
        return OptionClassification("compact", runs, cycles)
    return OptionClassification("scattered", runs, cycles)


class _Reducer:
    def __init__(self, catalog: OptionCatalog, clashes: ClashGraph,
                 trace: list[TraceEvent] | None):
        self.cat = catalog
        self.clashes = clashes
        self.trace = trace
        m = len(catalog.f_options)
        self.drain_heap: list[int] = []
        self.case_heap: list[int] = []
        for f in range(m):
            self.push(f)
        self.vertex_to_f: dict[int, list[int]] = {}
        for f, (a, b) in enumerate(catalog.instance.F):
            self.vertex_to_f.setdefault(a, []).append(f)
            self.vertex_to_f.setdefault(b, []).append(f)

    def push(self, f: int) -> None:
        c = self.cat.live_count[f]
        if f in self.cat.committed:
            return
        if c <= 1:
            heappush(self.drain_heap, f)
        elif c >= 3:
            heappush(self.case_heap, f)

    def log(self, event: TraceEvent) -> None:
        if self.trace is not None:
            self.trace.append(event)

    def delete(self, o: int) -> None:
        cat = self.cat
        assert cat.alive[o]
        self.log(("delete", o))
        cat.alive[o] = 0
        f = cat.options[o].f_edge
        cat.live_count[f] -= 1
        self.push(f)

    def commit(self, f: int, o: int) -> None:
        cat = self.cat
        assert cat.alive[o] and f not in cat.committed
        self.log(("commit", f, o))
        cat.committed[f] = o
        for other in cat.f_options[f]:
            if cat.alive[other]:
                cat.alive[other] = 0
                cat.live_count[f] -= 1
        for partner in self.clashes.adj[o]:
            if cat.alive[partner]:
                self.delete(partner)

    def safe_or_never(self, f: int, o: int) -> None:
        if any(self.cat.alive[p] for p in self.clashes.adj[o]):
            self.delete(o)
        else:
            self.commit(f, o)

    def run(self) -> Verdict | None:
        cat = self.cat
        while True:
            while self.drain_heap:
                f = heappop(self.drain_heap)
                if f in cat.committed:
                    continue
                c = cat.live_count[f]
                if c == 0:
                    self.log(("infeasible", f))
                    return Verdict.INFEASIBLE
                if c == 1:
                    self.commit(f, cat.alive_options(f)[0])
            f = self._pop_case_edge()
            if f is None:
                return None
            verdict = self._process_case(f)
            if verdict is not None:
                return verdict

    def _pop_case_edge(self) -> int | None:
        while self.case_heap:
            f = heappop(self.case_heap)
            if f not in self.cat.committed and self.cat.live_count[f] >= 3:
                return f
        return None

    def _process_case(self, f: int) -> Verdict | None:
        cls = classify_options(self.cat, f)
        if cls.label == "isolated_option":
            target = min(r[0] for r in cls.runs if len(r) == 1)
            self.safe_or_never(f, target)
        elif cls.label == "long_run":
            run = min((r for r in cls.runs if len(r) >= 4),
                      key=lambda r: min(r))
            self.safe_or_never(f, min(run[1:-1]))
        elif cls.label == "compact":
            return self._resolve_compact(f)
        else:  # scattered: multiple small components or a cycle of length
            # >= 5; a vertex-disjoint sibling option always exists, so the
            # safe-or-never treatment applies to the least option.
            target = min(min(r) for r in cls.runs + cls.cycles)
            self.safe_or_never(f, target)
        self.push(f)
        return None

    def _resolve_compact(self, f: int) -> Verdict | None:
        """Exhaust the octahedron-like subinstance around edge f at once."""
        cat = self.cat
        u, v = cat.instance.F[f]
        core = {u, v}
        for o in cat.alive_options(f):
            x, w = cat.instance.graph.edge_endpoints(cat.options[o].crossed)
            core.add(x)
            core.add(w)
        inside = sorted({
            f2 for vx in core for f2 in self.vertex_to_f.get(vx, ())
            if f2 not in cat.committed
            and cat.instance.F[f2][0] in core and cat.instance.F[f2][1] in core
        })
        choice_lists = [cat.alive_options(f2) for f2 in inside]
        product = 1
        for lst in choice_lists:
            product *= max(len(lst), 1)
        assert product <= 1_000_000, "compact subinstance unexpectedly large"
        for assignment in itertools.product(*choice_lists):
            ok = True
            for i in range(len(assignment)):
                ai = assignment[i]
                partners = self.clashes.adj[ai]
                for j in range(i + 1, len(assignment)):
                    if assignment[j] in partners:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                self.log(("case_c", f, tuple(zip(inside, assignment))))
                for f2, o in zip(inside, assignment):
                    self.commit(f2, o)
                return None
        self.log(("infeasible", f))
        return Verdict.INFEASIBLE


def reduce_instance(catalog: OptionCatalog, clashes: ClashGraph,
                    trace: list[TraceEvent] | None = None
                    ) -> OptionCatalog | Verdict:
    """Shrink to at most two live options per uncommitted edge.

    Returns the mutated catalog, or Verdict.INFEASIBLE.  With `trace` a
    list, every delete/commit/case decision is appended for the oracle
    soundness tests.
    """
    verdict = _Reducer(catalog, clashes, trace).run()
    if verdict is not None:
        return verdict
    for f in range(len(catalog.f_options)):
        if f not in catalog.committed:
            assert catalog.live_count[f] == 2, "reduction left a big edge"
    return catalog


def solve(inst: Instance) -> Solution | Verdict:
    """Decide and construct a single-crossing insertion of all of F."""
    catalog = enumerate_options(inst)
    clashes = compute_clashes(catalog)
    reduced = reduce_instance(catalog, clashes)
    if isinstance(reduced, Verdict):
        return reduced

    live = [f for f in range(len(inst.F)) if f not in catalog.committed]
    var_of: dict[int, int] = {}
    formula = TwoSatFormula(0)
    for f in live:
        for o in catalog.alive_options(f):
            var_of[o] = formula.variable_count
            formula.variable_count += 1
    for f in live:
        a, b = catalog.alive_options(f)
        formula.add_clause((var_of[a], True), (var_of[b], True))
        formula.add_clause((var_of[a], False), (var_of[b], False))
    for o, var in var_of.items():
        for p in clashes.adj[o]:
            if p in var_of and p > o:
                formula.add_clause((var, False), (var_of[p], False))
    model = twosat_solve(formula)
    if model is None:
        return Verdict.INFEASIBLE

    chosen: dict[int, int] = dict(catalog.committed)
    for f in live:
        a, b = catalog.alive_options(f)
        chosen[f] = a if model[var_of[a]] else b
    g = inst.graph
    routes = []
    for f in range(len(inst.F)):
        e = catalog.options[chosen[f]].crossed
        x, w = g.edge_endpoints(e)
        pair = (x, w) if x < w else (w, x)
        routes.append(Route(f, (CrossingEvent("graph_edge", pair),)))
    return Solution(tuple(routes))
