"""Shared hand-built embeddings used across the test suite."""

from __future__ import annotations

from planeinsert.plane_graph import PlaneGraph, build_from_rotation

# Octahedron: poles 0 and 5, equator cycle 1-2-3-4.  Antipodal (non-edge)
# pairs: (0,5), (1,3), (2,4).
OCTA_ROTATION = [
    [1, 4, 3, 2],
    [0, 2, 5, 4],
    [1, 0, 3, 5],
    [2, 0, 4, 5],
    [3, 0, 1, 5],
    [1, 2, 3, 4],
]

# 5-vertex bipyramid = K5 minus (0, 4): poles 0 and 4, triangle 1-2-3.
BIPYR5_ROTATION = [
    [1, 3, 2],
    [0, 2, 4, 3],
    [1, 0, 3, 4],
    [2, 0, 1, 4],
    [1, 2, 3],
]

# Cube graph (quadrilateral faces): bottom 0..3, top 4..7, vertical (i, i+4).
CUBE_ROTATION = [
    [1, 3, 4],
    [2, 0, 5],
    [3, 1, 6],
    [0, 2, 7],
    [0, 7, 5],
    [1, 4, 6],
    [2, 5, 7],
    [3, 6, 4],
]

# A rotation of K5 (not planar; Euler check must fail).
K5_ROTATION = [
    [1, 2, 3, 4],
    [2, 3, 4, 0],
    [3, 4, 0, 1],
    [4, 0, 1, 2],
    [0, 1, 2, 3],
]


def octahedron() -> PlaneGraph:
    return build_from_rotation(6, OCTA_ROTATION)


def bipyramid5() -> PlaneGraph:
    return build_from_rotation(5, BIPYR5_ROTATION)


def cube() -> PlaneGraph:
    return build_from_rotation(8, CUBE_ROTATION)


def apollonian7() -> PlaneGraph:
    """K4 with vertices 4, 5, 6 stacked doubly nested; (6, 2) has no option."""
    from planeinsert.plane_graph import K4_ROTATION

    rot = [list(r) for r in K4_ROTATION]

    def stack(rot, face):
        a, b, c = face
        x = len(rot)
        rot[a].insert(rot[a].index(c) + 1, x)
        rot[b].insert(rot[b].index(a) + 1, x)
        rot[c].insert(rot[c].index(b) + 1, x)
        rot.append([c, b, a])
        return x

    stack(rot, (0, 3, 1))   # vertex 4
    stack(rot, (3, 1, 4))   # vertex 5
    stack(rot, (1, 4, 5))   # vertex 6
    return build_from_rotation(7, rot)


def delete_edge_rotation(g: PlaneGraph, u: int, v: int) -> list[list[int]]:
    """Rotation of g with edge (u, v) removed (still a valid embedding)."""
    rot = g.rotation()
    rot[u].remove(v)
    rot[v].remove(u)
    return rot
