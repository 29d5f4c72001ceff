import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symbreak.core import (Colouring, Graph, Truncation, bfs_order, build_graph,
                           geodesic_ray, is_proper, ray_origins, spheres)
from symbreak.errors import ColouringError, GraphError
from symbreak.families import FamilySpec, instantiate
from symbreak.io import (colouring_from_dict, colouring_to_dict, graph_from_dict,
                         graph_to_dict, to_dot)

from conftest import complete_graph, cycle_graph, path_graph, star_graph


class TestBuildGraph:
    def test_path3(self):
        g = build_graph([(0, 1), (1, 2)])
        assert g.n == 3 and g.m == 2 and g.max_degree == 2

    def test_duplicate_rejected(self):
        with pytest.raises(GraphError, match=r"duplicate edge \(0, 1\)"):
            build_graph([(0, 1), (0, 1)])
        with pytest.raises(GraphError, match="duplicate"):
            build_graph([(0, 1), (1, 0)])

    def test_loop_rejected(self):
        with pytest.raises(GraphError, match=r"loop edge \(2, 2\)"):
            build_graph([(0, 1), (2, 2)])

    def test_k4(self):
        g = complete_graph(4)
        assert g.n == 4 and g.max_degree == 3 and g.m == 6

    def test_edge_ids_are_sorted_pairs(self):
        g = build_graph([(2, 0), (1, 0), (2, 1)])
        assert g.edge_pairs == [(0, 1), (0, 2), (1, 2)]
        assert g.edge_id(2, 0) == 1

    def test_isolated_vertices_allowed_with_explicit_n(self):
        g = build_graph([(0, 1)], n=4)
        assert g.n == 4 and g.degree(3) == 0
        assert not g.is_connected()

    @given(st.sets(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=20))
    @settings(max_examples=60, deadline=None)
    def test_builder_symmetry(self, pairs):
        edges = [(u, v) for u, v in pairs if u != v]
        dedup = {tuple(sorted(e)) for e in edges}
        if len(dedup) != len(edges):
            return
        g = build_graph(edges, n=9)
        for u, v in dedup:
            assert g.has_edge(u, v) and g.has_edge(v, u)
        assert g.m == len(dedup)


class TestBfsOrder:
    def test_p3_rooted_middle(self):
        g = path_graph(3)
        order, parent = bfs_order(g, 1)
        assert order == [1, 0, 2] and parent[0] == 1 and parent[2] == 1

    def test_k4_siblings(self):
        g = complete_graph(4)
        order, parent = bfs_order(g, 0)
        assert order == [0, 1, 2, 3]
        assert parent[1] == parent[2] == parent[3] == 0

    def test_star_rooted_at_leaf(self):
        g = star_graph(3)
        order, parent = bfs_order(g, 1)
        assert order[0] == 1 and order[1] == 0
        assert parent[2] == 0 and parent[3] == 0

    def test_disconnected_names_vertex(self):
        g = build_graph([(0, 1)], n=3)
        with pytest.raises(GraphError, match="vertex 2"):
            bfs_order(g, 0)


class TestTruncation:
    def test_depth_must_match_bfs(self):
        g = path_graph(4)
        with pytest.raises(GraphError, match="does not match BFS"):
            Truncation(g, 0, 3, depth=np.array([0, 1, 1, 2]))

    def test_deeper_than_radius_rejected(self):
        g = path_graph(5)
        with pytest.raises(GraphError, match="deeper than radius"):
            Truncation(g, 0, 3)

    def test_boundary_nonempty(self):
        t = Truncation(path_graph(4), 0, 3)
        assert list(t.boundary) == [3]

    def test_recomputed_depths_match(self):
        for spec in (FamilySpec("double_ray", (5,)), FamilySpec("regular_tree", (3, 4)),
                     FamilySpec("kdd_minus_edge_rays", (3, 6))):
            t = instantiate(spec)
            assert np.array_equal(t.depth, t.graph.bfs_depths(t.root))


class TestSpheres:
    def test_double_ray(self):
        t = instantiate(FamilySpec("double_ray", (3,)))
        assert [len(s) for s in spheres(t)] == [1, 2, 2, 2]

    def test_regular_tree(self):
        t = instantiate(FamilySpec("regular_tree", (3, 3)))
        assert [len(s) for s in spheres(t)] == [1, 3, 6, 12]

    def test_path_rooted_at_end(self):
        t = Truncation(path_graph(3), 0, 2)
        assert [len(s) for s in spheres(t)] == [1, 1, 1]


class TestRayOrigins:
    def test_regular_tree_all_extend(self):
        t = instantiate(FamilySpec("regular_tree", (3, 4)))
        for k in range(4):
            c, d = ray_origins(t, k)
            assert sorted(c) == spheres(t)[k] and d == []

    def test_pendant_leaf_excluded(self):
        # ray 0-1-2-3-4 with a pendant leaf at depth 2
        g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4), (1, 5)])
        t = Truncation(g, 0, 4)
        c, d = ray_origins(t, 2)
        assert c == [2] and d == [5]

    def test_last_interior_sphere(self):
        t = instantiate(FamilySpec("double_ray", (4,)))
        c, d = ray_origins(t, 3)
        assert len(c) == 2 and d == []

    def test_out_of_range(self):
        t = instantiate(FamilySpec("double_ray", (4,)))
        with pytest.raises(GraphError):
            ray_origins(t, 4)

    def test_subset_of_sphere(self):
        t = instantiate(FamilySpec("kdd_minus_edge_rays", (3, 6)))
        for k in range(t.radius):
            c, d = ray_origins(t, k)
            assert set(c) | set(d) == set(spheres(t)[k])
            assert not set(c) & set(d)


class TestGeodesicRay:
    def test_full_ray(self):
        t = instantiate(FamilySpec("ray", (19,)))
        assert geodesic_ray(t) == list(range(20))

    def test_double_ray_lex_least_arm(self):
        t = instantiate(FamilySpec("double_ray", (6,)))
        ray = geodesic_ray(t)
        assert ray[0] == t.root and len(ray) == 7
        assert ray[1] == min(int(w) for w in t.graph.neighbours(t.root))

    def test_too_short_rejected(self):
        k4 = complete_graph(4)
        with pytest.raises(GraphError, match="radius 1 < 6"):
            geodesic_ray(Truncation(k4, 0, 1))

    def test_all_pairs_distance_property(self):
        for spec in (FamilySpec("double_ray", (8,)), FamilySpec("regular_tree", (3, 7)),
                     FamilySpec("kdd_minus_edge_rays", (3, 6))):
            t = instantiate(spec)
            ray = geodesic_ray(t)
            for i, u in enumerate(ray):
                d = t.graph.bfs_depths(u)
                for j in range(i, len(ray)):
                    assert d[ray[j]] == j - i


class TestColouring:
    def test_palette_is_exact(self):
        c = Colouring("vertex", [1, 5, 1])
        assert c.palette == frozenset({1, 5})

    def test_kind_field_requirements(self):
        with pytest.raises(ColouringError):
            Colouring("vertex", None)
        with pytest.raises(ColouringError):
            Colouring("edge", vcolours=[1])
        with pytest.raises(ColouringError):
            Colouring("nope", [1])

    def test_domain_completeness(self):
        g = path_graph(3)
        with pytest.raises(ColouringError, match="2 of 3"):
            Colouring("vertex", [1, 2]).validate_for(g)

    def test_proper_vertex(self):
        g = cycle_graph(4)
        assert is_proper(g, Colouring("vertex", [1, 2, 1, 2]))
        assert not is_proper(g, Colouring("vertex", [1, 1, 2, 2]))

    def test_proper_edge(self):
        g = star_graph(3)
        assert is_proper(g, Colouring("edge", ecolours=[1, 2, 3]))
        assert not is_proper(g, Colouring("edge", ecolours=[1, 1, 2]))

    def test_proper_total_needs_incidence(self):
        g = path_graph(2)
        assert is_proper(g, Colouring("total", [1, 2], [3]))
        assert not is_proper(g, Colouring("total", [1, 2], [2]))


class TestSerialization:
    def test_graph_roundtrip(self):
        g = complete_graph(4)
        d = graph_to_dict(g)
        assert d == {"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}
        assert graph_from_dict(json.loads(json.dumps(d))) == g

    def test_truncation_roundtrip(self):
        t = instantiate(FamilySpec("double_ray", (4,)))
        d = graph_to_dict(t)
        assert d["root"] == 0 and d["radius"] == 4
        t2 = graph_from_dict(d)
        assert isinstance(t2, Truncation) and t2.graph == t.graph

    def test_colouring_roundtrip(self):
        g = path_graph(3)
        c = Colouring("total", [1, 2, 1], [3, 4], reserved=4)
        d = colouring_to_dict(c, g)
        c2 = colouring_from_dict(d, g)
        assert list(c2.vcolours) == [1, 2, 1]
        assert list(c2.ecolours) == [3, 4]
        assert c2.reserved == 4

    def test_colouring_missing_edge(self):
        g = path_graph(3)
        with pytest.raises(ColouringError, match="no colour"):
            colouring_from_dict({"kind": "edge", "edge_colours": [[0, 1, 1]]}, g)

    def test_dot_reserved_is_black(self):
        g = path_graph(3)
        dot = to_dot(g, Colouring("vertex", [1, 2, 2], reserved=2))
        assert dot.count('fillcolor="black"') == 2
        assert "0 -- 1;" in dot and "1 -- 2;" in dot

    def test_dot_edge_colours(self):
        g = path_graph(3)
        dot = to_dot(g, Colouring("edge", ecolours=[1, 2]))
        assert 'color="/set312/' in dot
