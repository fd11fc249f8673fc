import random

import pytest
from hypothesis import given, strategies as st

from atlab import families
from atlab.errors import (DisconnectedWhenPlanarOpsRequested, FaceIsOuter, MalformedGraph, MalformedRotation,
                          NonPlanarEmbedding, TooLarge)
from atlab.graph import (OUTER, Corner, DualPathRegistry, PlanarGraph, bits, build_graph, corner_positions,
                         cycle_parity, describe)
from atlab.io import graph_from_json, graph_to_json

from strategies import SMALL_PLANAR


def square():
    # 1-2-3-4 counterclockwise, edges a b c d
    edges = [("a", 1, 2), ("b", 2, 3), ("c", 3, 4), ("d", 4, 1)]
    rot = {1: ["a", "d"], 2: ["b", "a"], 3: ["c", "b"], 4: ["d", "c"]}
    return PlanarGraph([1, 2, 3, 4], edges, rot, outer_face=["a", "b", "c", "d"])


def test_four_cycle_faces_and_euler():
    g = square()
    assert g.num_faces == 2
    assert g.n - g.m + g.num_faces == 2


def test_single_edge_has_one_face():
    g = PlanarGraph(["u", "v"], [("e", "u", "v")], {"u": ["e"], "v": ["e"]})
    assert g.num_faces == 1
    assert g.n - g.m + g.num_faces == 2


def test_grid_face_count():
    g = families.grid(3, 3)
    assert (g.n, g.m, g.num_faces) == (9, 12, 5)


def test_boundary_orders():
    b = square().boundary_order()
    k = b.index(1)
    assert b[k:] + b[:k] == [1, 2, 3, 4]
    assert families.path(3).boundary_order() == [0, 1, 2]
    assert families.grid(3, 3).boundary_order() == [0, 3, 6, 7, 8, 5, 2, 1]


def test_grid_boundary_is_counterclockwise():
    g = families.grid(3, 3)
    # row r sits at height -r: 0 top-left, 6 bottom-left, 8 bottom-right
    pos = {v: (v % 3, -(v // 3)) for v in g.vertices}
    pts = [pos[v] for v in g.boundary_order()]
    area = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))
    assert area > 0


def test_dual_paths():
    g = square()
    p = g.dual_path(1)
    assert len(p.gamma) == 1 and p.faces == (1, OUTER)
    grid = families.grid(3, 3)
    for f in grid.inner_faces:
        assert len(grid.dual_path(f).gamma) == 1
    with pytest.raises(FaceIsOuter):
        grid.dual_path(OUTER)


def test_cycle_parity_examples():
    g = square()
    gamma = g.dual_path(1).mask
    assert cycle_parity(g, 0, gamma)
    assert not cycle_parity(g, g.full_mask, gamma)
    chord = families.cycle_with_chord()
    outer_cycle = chord.edge_mask([0, 1, 2, 3])
    reg = DualPathRegistry(chord)
    both = reg.gamma(chord.inner_faces)
    assert cycle_parity(chord, outer_cycle, both)
    assert not cycle_parity(chord, outer_cycle, reg.mask(1))


@given(st.sampled_from(SMALL_PLANAR), st.integers(0, 2 ** 12 - 1), st.integers(0, 2 ** 31))
def test_cycle_parity_independent_of_forest(name, raw, seed):
    g = families.by_name(name)
    omega = raw & g.full_mask
    reg = DualPathRegistry(g)
    faces = [f for f in g.inner_faces if (seed >> f) & 1]
    gamma = reg.gamma(faces)
    ref = cycle_parity(g, omega, gamma)
    assert cycle_parity(g, omega, gamma, random.Random(seed)) == ref


@pytest.mark.parametrize("name", SMALL_PLANAR + ("grid3x3",))
def test_cycle_parity_is_face_parity(name):
    # a cycle crosses Gamma_f oddly iff it encloses f; check on face boundaries
    g = families.by_name(name)
    reg = DualPathRegistry(g)
    for f in g.inner_faces:
        boundary = g.edge_mask(g.face_edges(f))
        for h in g.inner_faces:
            assert cycle_parity(g, boundary, reg.mask(h)) == (f != h)


def test_corner_order_outer_faces_matches_boundary():
    g = families.grid(3, 3)
    reg = DualPathRegistry(g)
    corners = [Corner(v, OUTER) for v in (6, 0, 8, 2)]
    pos = corner_positions(g, corners, reg)
    got = [c.vertex for c in sorted(corners, key=pos.__getitem__)]
    b = g.boundary_order()
    assert got == [v for v in b if v in {0, 2, 6, 8}]


def test_corner_on_inner_face_reaches_new_boundary():
    g = families.grid(3, 3)
    reg = DualPathRegistry(g)
    c = Corner(4, 1)
    pos = corner_positions(g, [c, Corner(0, OUTER)], reg)
    assert c in pos


def test_malformed_inputs():
    with pytest.raises(MalformedGraph):
        build_graph({"vertices": [0, 1], "edges": [{"id": 0, "ends": [0, 0]}]})
    with pytest.raises(MalformedGraph):
        build_graph({"vertices": [0, 1], "edges": [{"id": 0, "ends": [0, 1]}, {"id": 1, "ends": [1, 0]}]})
    with pytest.raises(MalformedRotation):
        build_graph({"vertices": [0, 1], "edges": [{"id": 0, "ends": [0, 1]}], "rotation": {"0": [0], "1": []}})


def test_non_planar_rotation_rejected():
    # K4 with a rotation that is not a plane embedding
    k4 = families.complete(4)
    desc = describe(k4)
    desc["rotation"]["0"] = list(reversed(desc["rotation"]["0"]))
    desc["rotation"]["1"] = list(reversed(desc["rotation"]["1"]))
    with pytest.raises((NonPlanarEmbedding, MalformedRotation)):
        build_graph(desc)


def test_disconnected_boundary_refused():
    edges = [(0, 0, 1), (1, 2, 3)]
    rot = {0: [0], 1: [0], 2: [1], 3: [1]}
    with pytest.raises((DisconnectedWhenPlanarOpsRequested, MalformedRotation)):
        PlanarGraph([0, 1, 2, 3], edges, rot).boundary_order()


def test_family_caps():
    with pytest.raises(TooLarge):
        families.grid(4, 4)
    with pytest.raises(TooLarge):
        families.complete(6)
    assert not families.complete(5).is_planar_embedded
    assert families.complete(4).is_planar_embedded


@pytest.mark.parametrize("name", SMALL_PLANAR + ("K4", "grid3x3"))
def test_json_round_trip(name):
    g = families.by_name(name)
    h, w = graph_from_json(graph_to_json(g))
    assert w is None
    assert h.key() == g.key()
    assert h.boundary_order() == g.boundary_order()


def test_string_labelled_vertices():
    desc = describe(families.cycle(4))
    names = {0: "a", 1: "b", 2: "c", 3: "d"}
    desc["vertices"] = [names[v] for v in desc["vertices"]]
    for e in desc["edges"]:
        e["ends"] = [names[v] for v in e["ends"]]
    desc["rotation"] = {names[int(k)]: v for k, v in desc["rotation"].items()}
    g = build_graph(desc)
    assert g.boundary_order() == ["a", "b", "c", "d"]


def test_bits():
    assert bits(0b101001) == [0, 3, 5]
