"""Verifier and planarization engine tests."""

from __future__ import annotations

import pytest

from planeinsert.errors import InvalidRealization, SchemaError
from planeinsert.instance_io import (
    CrossingEvent,
    Route,
    Solution,
    make_instance,
    parse_solution,
)
from planeinsert.verifier import (
    PlanarizedDrawing,
    Realization,
    planarize_insert,
    verify,
)

from fixtures import cube, octahedron


def route(i, *pairs):
    events = []
    for p in pairs:
        if isinstance(p, int):
            events.append(CrossingEvent("inserted", p))
        else:
            events.append(CrossingEvent("graph_edge", tuple(sorted(p))))
    return Route(i, tuple(events))


OCTA_F = [(0, 5), (1, 3), (2, 4)]


def octa_instance(F=None, k=1):
    return make_instance(octahedron(), F if F is not None else OCTA_F, k=k)


class TestVerify:
    def test_empty_f_accepted(self):
        inst = make_instance(octahedron(), [], k=1)
        assert verify(inst, Solution(())).accepted

    def test_octahedron_certificate_accepted(self):
        inst = octa_instance()
        sol = Solution((route(0, (1, 2)), route(1, (0, 4)), route(2, (5, 3))))
        res = verify(inst, sol)
        assert res.accepted, res

    def test_wrong_assignment_rejected(self):
        # (0,5) via (1,2) clashes with (1,3) via (0,2).
        inst = octa_instance(F=[(0, 5), (1, 3)])
        sol = Solution((route(0, (1, 2)), route(1, (0, 2))))
        res = verify(inst, sol)
        assert not res.accepted
        assert res.reason == "no_realization"

    def test_double_crossing_same_edge_rejected(self):
        inst = octa_instance(F=[(0, 5)])
        sol = Solution((route(0, (1, 2), (1, 2)),))
        res = verify(inst, sol)
        assert not res.accepted
        assert res.reason in ("crossing_budget_exceeded", "no_realization")

    def test_budget_exceeded_across_routes(self):
        inst = make_instance(cube(), [(0, 2), (4, 6)], k=1)
        sol = Solution((route(0, (1, 5)), route(1, (1, 5))))
        res = verify(inst, sol)
        assert not res.accepted
        assert res.reason == "crossing_budget_exceeded"

    def test_own_budget_exceeded(self):
        inst = octa_instance(F=[(0, 5)])
        sol = Solution((route(0, (1, 2), (3, 4)),))
        res = verify(inst, sol)
        assert not res.accepted
        assert res.reason == "crossing_budget_exceeded"

    def test_unknown_graph_edge_rejected(self):
        inst = octa_instance(F=[(0, 5)])
        sol = Solution((route(0, (0, 5)),))
        res = verify(inst, sol)
        assert not res.accepted

    def test_adjacent_crossing_rejected(self):
        inst = octa_instance(F=[(0, 5)])
        sol = Solution((route(0, (0, 1)),))
        res = verify(inst, sol)
        assert not res.accepted
        assert res.reason == "no_realization"

    def test_route_count_mismatch(self):
        inst = octa_instance(F=[(0, 5)])
        assert not verify(inst, Solution(())).accepted

    def test_later_edge_reference_is_schema_error(self):
        with pytest.raises(SchemaError):
            parse_solution(
                '{"routes":[{"f_edge":0,"events":'
                '[{"kind":"inserted","index":0}]}]}')

    def test_chord_route_in_cube(self):
        inst = make_instance(cube(), [(0, 2)], k=1)
        res = verify(inst, Solution((route(0),)))
        assert res.accepted

    def test_chord_impossible_in_triangulation(self):
        inst = octa_instance(F=[(0, 5)])
        res = verify(inst, Solution((route(0),)))
        assert not res.accepted

    def test_order_robustness_seeds(self):
        inst = octa_instance()
        good = Solution((route(0, (1, 2)), route(1, (0, 4)), route(2, (5, 3))))
        bad = Solution((route(0, (1, 2)), route(1, (0, 2)), route(2, (5, 3))))
        for seed in range(10):
            assert verify(inst, good, seed=seed).accepted
            assert not verify(inst, bad, seed=seed).accepted

    def test_inserted_edge_crossing(self):
        # Cube with two crossing diagonals of one face needs k >= 1 on both;
        # the second route crosses the first inserted edge.
        inst = make_instance(cube(), [(0, 2), (1, 3)], k=1)
        sol = Solution((route(0), route(1, 0)))
        assert verify(inst, sol).accepted

    def test_inserted_crossing_budget(self):
        # Same but k=1 and a third diagonal is impossible.
        inst = make_instance(cube(), [(0, 2), (1, 3)], k=1)
        sol = Solution((route(0), route(1)))  # (1,3) must cross edge 0
        assert not verify(inst, sol).accepted


class TestEngine:
    def test_chord_insert_euler(self):
        inst = make_instance(cube(), [(0, 2)], k=1)
        pd = PlanarizedDrawing(inst)
        v0, e0 = pd.vertex_count(), pd.edge_count()
        reals = pd.enumerate_realizations(0, 2, [], 0)
        assert reals
        pd.insert(0, 2, reals[0])
        pd.validate()
        assert pd.vertex_count() == v0
        assert pd.edge_count() == e0 + 1

    def test_crossing_insert_euler(self):
        inst = octa_instance(F=[(0, 5)])
        pd = PlanarizedDrawing(inst)
        v0, e0 = pd.vertex_count(), pd.edge_count()
        e12 = inst.graph.edge_between(1, 2)
        reals = pd.enumerate_realizations(0, 5, [e12], 1)
        assert reals
        tok = pd.insert(0, 5, reals[0])
        pd.validate()
        assert pd.vertex_count() == v0 + 1
        assert pd.edge_count() == e0 + 3
        assert len(pd.rot[v0]) == 4  # dummy has degree 4
        pd.undo(tok)
        pd.validate()
        assert pd.vertex_count() == v0
        assert pd.edge_count() == e0

    def test_realization_reusing_segment_invalid(self):
        inst = octa_instance(F=[(0, 5)])
        pd = PlanarizedDrawing(inst)
        e12 = inst.graph.edge_between(1, 2)
        d = 2 * e12
        fake = Realization(0, (d, d), 0)
        with pytest.raises(InvalidRealization):
            planarize_insert(pd, (0, 5), fake)

    def test_stale_corner_invalid(self):
        inst = octa_instance(F=[(0, 5)])
        pd = PlanarizedDrawing(inst)
        fake = Realization(99, (), 0)
        with pytest.raises(InvalidRealization):
            planarize_insert(pd, (0, 5), fake)

    def test_undo_restores_exactly(self):
        inst = octa_instance()
        pd = PlanarizedDrawing(inst)
        snapshot = [list(r) for r in pd.rot]
        e12 = inst.graph.edge_between(1, 2)
        reals = pd.enumerate_realizations(0, 5, [e12], 1)
        tok = pd.insert(0, 5, reals[0])
        pd.undo(tok)
        assert [list(r) for r in pd.rot] == snapshot
        assert pd.count == [0] * len(pd.count)
