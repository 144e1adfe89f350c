"""Round-trip, validation, and rendering tests for the file formats."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planeinsert.errors import (
    FNotInComplement,
    InvalidRoute,
    MissingCoordinates,
    NonPlaneCoordinates,
    SchemaError,
    StructureMismatch,
)
from planeinsert.instance_io import (
    CrossingEvent,
    Route,
    Solution,
    make_instance,
    parse_instance,
    parse_solution,
    render_svg,
    write_instance,
    write_solution,
)
from planeinsert.plane_graph import (
    K4_ROTATION,
    build_from_rotation,
    generate_stacked_triangulation,
    sample_complement_edges,
)

from fixtures import OCTA_ROTATION, octahedron

K4_COORDS = [(0, 0), (4, 0), (2, 4), (2, 1)]


def k4():
    return build_from_rotation(4, K4_ROTATION)


class TestInstance:
    def test_minimal_k4(self):
        text = ('{"k":1,"n":4,"rotation":[[1,3,2],[0,2,3],[1,0,3],[2,0,1]],'
                '"coords":null,"F":[],"f_structure":"none"}')
        inst = parse_instance(text)
        assert inst.F == ()
        assert inst.graph.edge_count == 6

    def test_f_must_be_nonedge(self):
        inst_f = [(0, 5)]
        with pytest.raises(FNotInComplement):
            make_instance(octahedron(), [(0, 1)])
        make_instance(octahedron(), inst_f)  # fine

    def test_matching_mismatch(self):
        with pytest.raises(StructureMismatch):
            make_instance(generate_stacked_triangulation(8, 1),
                          [(0, 5), (0, 7)], f_structure="matching")

    def test_path_structure(self):
        g = generate_stacked_triangulation(10, 4)
        pairs = sample_complement_edges(g, 3, 7, structure="path")
        make_instance(g, pairs, f_structure="path")
        with pytest.raises(StructureMismatch):
            make_instance(g, [pairs[0], pairs[2]], f_structure="path")

    def test_duplicate_f_pair(self):
        with pytest.raises(SchemaError):
            make_instance(octahedron(), [(0, 5), (5, 0)])

    def test_coords_non_crossing_enforced(self):
        # Planar rotation of K4 but coordinates that force a crossing:
        # vertex 3 outside the triangle 0,1,2 makes (0,3)/(2,3)-style
        # segments cut through others.
        bad = [(0, 0), (4, 0), (2, 4), (6, 4)]
        with pytest.raises(NonPlaneCoordinates):
            make_instance(k4(), [], coords=bad)
        make_instance(k4(), [], coords=K4_COORDS)

    def test_vertex_on_edge_rejected(self):
        bad = [(0, 0), (4, 0), (2, 4), (2, 0)]  # vertex 3 on edge (0,1)
        with pytest.raises(NonPlaneCoordinates):
            make_instance(k4(), [], coords=bad)

    def test_roundtrip_bytes(self):
        g = generate_stacked_triangulation(9, 3)
        pairs = sample_complement_edges(g, 2, 5)
        inst = make_instance(g, pairs, k=2)
        text = write_instance(inst)
        assert write_instance(parse_instance(text)) == text

    @settings(max_examples=25, deadline=None)
    @given(st.integers(6, 14), st.integers(0, 999), st.integers(0, 3))
    def test_roundtrip_property(self, n, seed, m):
        g = generate_stacked_triangulation(n, seed)
        try:
            pairs = sample_complement_edges(g, m, seed)
        except Exception:
            return
        inst = make_instance(g, pairs)
        text = write_instance(inst)
        again = parse_instance(text)
        assert write_instance(again) == text
        assert again.F == inst.F


class TestSolution:
    def test_empty_routes(self):
        assert write_solution(Solution(())) == '{"routes":[]}\n'
        assert parse_solution('{"routes":[]}').routes == ()

    def test_roundtrip(self):
        sol = Solution((
            Route(0, (CrossingEvent("graph_edge", (1, 2)),)),
            Route(1, (CrossingEvent("inserted", 0),)),
        ))
        text = write_solution(sol)
        assert write_solution(parse_solution(text)) == text

    def test_forward_reference_rejected(self):
        with pytest.raises(SchemaError):
            Solution((Route(0, (CrossingEvent("inserted", 0),)),))

    def test_route_order_enforced(self):
        with pytest.raises(SchemaError):
            parse_solution('{"routes":[{"f_edge":1,"events":[]}]}')


# Straight-line placement with outer face (1, 4, 5).
OCTA_COORDS = [(10, 4), (0, 0), (7, 8), (13, 8), (20, 0), (10, 17)]


class TestRender:
    def _inst(self, F=(), k=1):
        return make_instance(octahedron(), list(F), k=k, coords=OCTA_COORDS)

    def test_requires_coords(self):
        inst = make_instance(octahedron(), [])
        with pytest.raises(MissingCoordinates):
            render_svg(inst)

    def test_edge_count(self):
        svg = render_svg(self._inst())
        assert svg.count("<line ") == 12
        assert svg.count("<polyline") == 0

    def test_three_routes(self):
        inst = self._inst(F=[(0, 5), (1, 3), (2, 4)])
        sol = Solution((
            Route(0, (CrossingEvent("graph_edge", (1, 2)),)),
            Route(1, (CrossingEvent("graph_edge", (0, 4)),)),
            Route(2, (CrossingEvent("graph_edge", (3, 5)),)),
        ))
        svg = render_svg(inst, sol)
        assert svg.count("<polyline") == 3
        assert svg.count("<line ") == 12

    def test_invalid_route_rejected(self):
        inst = self._inst(F=[(0, 5)])
        bad = Solution((Route(0, (CrossingEvent("graph_edge", (0, 1)),)),))
        with pytest.raises(InvalidRoute):
            render_svg(inst, bad)

    def test_deterministic(self):
        inst = self._inst(F=[(0, 5)])
        sol = Solution((Route(0, (CrossingEvent("graph_edge", (1, 2)),)),))
        assert render_svg(inst, sol) == render_svg(inst, sol)
