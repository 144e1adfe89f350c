"""Solver tests: options, clashes, classification, reduction, oracle parity."""

from __future__ import annotations

from itertools import product

import pytest

from planeinsert.errors import KNotOne, NotTriangulation
from planeinsert.instance_io import Solution, make_instance
from planeinsert.oracle import exact_solve_triangulation
from planeinsert.plane_graph import build_from_rotation
from planeinsert.tri_insert import (
    classify_options,
    compute_clashes,
    enumerate_options,
    reduce_instance,
    solve,
)
from planeinsert.verdicts import Verdict
from planeinsert.verifier import verify

from fixtures import apollonian7, bipyramid5, cube, octahedron
from instance_gen import instance_stream


def octa_inst(F):
    return make_instance(octahedron(), F)


class TestEnumerate:
    def test_empty_catalog(self):
        cat = enumerate_options(octa_inst([]))
        assert cat.options == []

    def test_octahedron_antipodal_options(self):
        inst = octa_inst([(0, 5)])
        cat = enumerate_options(inst)
        crossed = {inst.graph.edge_endpoints(cat.options[o].crossed)
                   for o in cat.f_options[0]}
        assert crossed == {(1, 2), (2, 3), (3, 4), (1, 4)}

    def test_brute_force_parity(self):
        # Independent oracle: scan all edges, compare apex pairs directly.
        inst = octa_inst([(0, 5)])
        g = inst.graph
        from planeinsert.plane_graph import apex
        expected = set()
        for e in range(g.edge_count):
            f1, f2 = g.faces_of_edge(e)
            pair = {apex(g, e, f1), apex(g, e, f2)}
            if pair == {0, 5}:
                expected.add(e)
        cat = enumerate_options(inst)
        assert {cat.options[o].crossed for o in cat.f_options[0]} == expected

    def test_bipyramid_three_options(self):
        inst = make_instance(bipyramid5(), [(0, 4)])
        cat = enumerate_options(inst)
        crossed = {inst.graph.edge_endpoints(cat.options[o].crossed)
                   for o in cat.f_options[0]}
        assert crossed == {(1, 2), (2, 3), (1, 3)}

    def test_requires_triangulation(self):
        with pytest.raises(NotTriangulation):
            enumerate_options(make_instance(cube(), [(0, 2)]))

    def test_requires_k1(self):
        with pytest.raises(KNotOne):
            enumerate_options(make_instance(octahedron(), [(0, 5)], k=2))

    def test_option_uniqueness_on_random_instances(self):
        for inst in instance_stream(40):
            cat = enumerate_options(inst)
            crossed = [o.crossed for o in cat.options]
            assert len(crossed) == len(set(crossed))


class TestClashes:
    def test_octahedron_pairwise_clash_counts(self):
        inst = octa_inst([(0, 5), (1, 3)])
        cat = enumerate_options(inst)
        cl = compute_clashes(cat)
        for o in cat.f_options[0]:
            assert cl.degree(o) == 2
        for o in cat.f_options[1]:
            assert cl.degree(o) == 2

    def test_clash_rule_against_realizability(self):
        # Cross-check the quad rule on all 16 joint choices of two edges.
        inst = octa_inst([(0, 5), (1, 3)])
        cat = enumerate_options(inst)
        cl = compute_clashes(cat)
        exact_solve_triangulation(inst, validate_with_verifier=True)
        for a in cat.f_options[0]:
            for b in cat.f_options[1]:
                from planeinsert.oracle import _assignment_solution
                sol = _assignment_solution(inst, cat, (a, b))
                assert verify(inst, sol).accepted == (b not in cl.adj[a])

    def test_single_edge_no_clashes(self):
        cat = enumerate_options(octa_inst([(0, 5)]))
        cl = compute_clashes(cat)
        assert all(cl.degree(o.id) == 0 for o in cat.options)

    def test_max_degree_bound(self):
        for inst in instance_stream(60):
            cat = enumerate_options(inst)
            cl = compute_clashes(cat)
            assert all(cl.degree(o.id) <= 4 for o in cat.options)
            for o in cat.options:
                for p in cl.adj[o.id]:
                    assert o.id in cl.adj[p]


class TestClassify:
    def test_bipyramid_cycle(self):
        cat = enumerate_options(make_instance(bipyramid5(), [(0, 4)]))
        cls = classify_options(cat, 0)
        assert cls.label == "compact"
        assert len(cls.cycles) == 1 and len(cls.cycles[0]) == 3

    def test_octahedron_four_cycle(self):
        cat = enumerate_options(octa_inst([(0, 5)]))
        cls = classify_options(cat, 0)
        assert cls.label == "compact"
        assert len(cls.cycles) == 1 and len(cls.cycles[0]) == 4

    def test_two_isolated(self):
        # Stack into two opposite top faces of the octahedron: (0,5) keeps
        # two equator options that do not share a vertex.
        rot = [list(r) for r in octahedron().rotation()]

        def stack(face):
            a, b, c = face
            x = len(rot)
            rot[a].insert(rot[a].index(c) + 1, x)
            rot[b].insert(rot[b].index(a) + 1, x)
            rot[c].insert(rot[c].index(b) + 1, x)
            rot.append([c, b, a])

        stack((0, 1, 2))
        stack((0, 3, 4))
        g = build_from_rotation(8, rot)
        inst = make_instance(g, [(0, 5)])
        cat = enumerate_options(inst)
        assert len(cat.f_options[0]) == 2
        assert classify_options(cat, 0).label == "two_isolated"
        # Already at the 2-SAT stage: reduction is a fixed point.
        cl = compute_clashes(cat)
        before = cat.alive_options(0)
        out = reduce_instance(cat, cl)
        assert out is cat
        assert cat.alive_options(0) == before


class TestSolve:
    def test_octahedron_three_antipodal(self):
        inst = octa_inst([(0, 5), (1, 3), (2, 4)])
        sol = solve(inst)
        assert isinstance(sol, Solution)
        crossed = {r.events[0].target for r in sol.routes}
        assert len(crossed) == 3
        assert verify(inst, sol).accepted

    def test_apollonian_infeasible(self):
        inst = make_instance(apollonian7(), [(6, 2)])
        assert solve(inst) is Verdict.INFEASIBLE
        assert exact_solve_triangulation(inst) is Verdict.INFEASIBLE

    def test_empty_f(self):
        sol = solve(octa_inst([]))
        assert isinstance(sol, Solution) and sol.routes == ()

    def test_oracle_equivalence_sample(self):
        for inst in instance_stream(120):
            mine = solve(inst)
            ref = exact_solve_triangulation(inst)
            assert isinstance(mine, Solution) == isinstance(ref, Solution), \
                (inst.F, mine, ref)
            if isinstance(mine, Solution):
                assert verify(inst, mine).accepted


# --- reduction soundness against the brute-force oracle -----------------------


def _feasible(catalog, clashes, committed, alive):
    """Brute force: can every uncommitted edge pick an alive option so the
    union with committed choices is clash-free?"""
    m = len(catalog.f_options)
    live = [f for f in range(m) if f not in committed]
    lists = []
    for f in live:
        opts = [o for o in catalog.f_options[f] if o in alive]
        if not opts:
            return False
        lists.append(opts)
    base = list(committed.values())
    for pick in product(*lists):
        chosen = base + list(pick)
        ok = True
        for i in range(len(chosen)):
            adj = clashes.adj[chosen[i]]
            if any(chosen[j] in adj for j in range(i + 1, len(chosen))):
                ok = False
                break
        if ok:
            return True
    return False


def _uses_option(catalog, clashes, committed, alive, o):
    f = catalog.options[o].f_edge
    forced = dict(committed)
    forced[f] = o
    return _feasible(catalog, clashes, forced, alive)


def test_reduction_deletion_soundness_and_commit_safety():
    checked_deletes = checked_commits = 0
    for inst in instance_stream(80, n_lo=6, n_hi=12, f_hi=4):
        cat = enumerate_options(inst)
        cl = compute_clashes(cat)
        trace: list = []
        reduce_instance(cat, cl, trace=trace)

        # Replay on a fresh catalog.
        cat2 = enumerate_options(inst)
        cl2 = compute_clashes(cat2)
        alive = {o.id for o in cat2.options}
        committed: dict[int, int] = {}
        total_before = len(alive)
        for ev in trace:
            if ev[0] == "delete":
                o = ev[1]
                assert not _uses_option(cat2, cl2, committed, alive, o), ev
                alive.discard(o)
                checked_deletes += 1
            elif ev[0] == "commit":
                _, f, o = ev
                before = _feasible(cat2, cl2, committed, alive)
                forced = dict(committed)
                forced[f] = o
                after = _feasible(cat2, cl2, forced, alive)
                assert before == after, ev
                committed[f] = o
                alive -= set(cat2.f_options[f])
                checked_commits += 1
            elif ev[0] == "infeasible":
                assert not _feasible(cat2, cl2, committed, alive), ev
            elif ev[0] == "case_c":
                pass
            # Monotone progress: the alive set never grows.
            assert len(alive) <= total_before
    assert checked_deletes + checked_commits > 30
