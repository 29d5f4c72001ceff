import random

import numpy as np
import pytest

from symbreak.automorphisms import (RIGID, aut_group, close_group, compose,
                                    group_order, identity_perm, inverse,
                                    is_automorphism, is_distinguishing, motion,
                                    perm_from_json, perm_to_json,
                                    truncation_distinguishing)
from symbreak.core import Colouring, Truncation, build_graph
from symbreak.errors import SizeBoundError
from symbreak.families import FamilySpec, instantiate

from conftest import (brute_automorphism_count, brute_automorphisms,
                      complete_bipartite, complete_graph, cycle_graph,
                      path_graph, star_graph)


class TestPermutations:
    def test_compose_inverse(self):
        p = (1, 2, 0, 3)
        assert compose(p, inverse(p)) == identity_perm(4)
        assert compose(inverse(p), p) == identity_perm(4)

    def test_json_roundtrip(self):
        p = (2, 0, 1)
        assert perm_from_json(perm_to_json(p)) == p

    def test_json_rejects_non_bijection(self):
        with pytest.raises(Exception):
            perm_from_json({"image": [0, 0, 1]})


class TestAutGroup:
    def test_k4_order(self):
        assert aut_group(complete_graph(4)).order == 24

    def test_c6_order(self):
        assert aut_group(cycle_graph(6)).order == 12

    def test_c6_with_alternating_colours(self):
        g = aut_group(cycle_graph(6), fixed_colours=[1, 2, 1, 2, 1, 2])
        assert g.order == 6

    def test_orbits(self):
        star = star_graph(4)
        group = aut_group(star)
        assert group.orbits == [[0], [1, 2, 3, 4]]

    def test_generators_are_automorphisms(self):
        g = complete_bipartite(3, 3)
        group = aut_group(g)
        for p in group.generators:
            assert is_automorphism(g, p)
        assert group.order == 72

    def test_brute_force_agreement_n_le_6(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.randint(2, 6)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.5]
            if not edges:
                continue
            g = build_graph(edges, n=n)
            assert aut_group(g).order == brute_automorphism_count(g)

    def test_pruning_on_off_agreement(self):
        rng = random.Random(5)
        done = 0
        while done < 50:
            n = rng.randint(3, 7)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.45]
            if not edges:
                continue
            g = build_graph(edges, n=n)
            a = aut_group(g, prune=True)
            b = aut_group(g, prune=False)
            assert a.order == b.order
            assert a.orbits == b.orbits
            done += 1

    def test_element_closure_matches_order(self):
        group = aut_group(cycle_graph(5))
        assert len(group.elements()) == group.order == 10

    def test_element_cap(self):
        group = aut_group(complete_graph(7))
        with pytest.raises(SizeBoundError):
            group.elements(cap=100)

    def test_schreier_sims_on_symmetric_group(self):
        n = 8
        gens = [tuple([1, 0] + list(range(2, n))),
                tuple(list(range(1, n)) + [0])]
        assert group_order(gens, n) == 40320

    def test_close_group(self):
        gens = [(1, 0, 2)]
        assert sorted(close_group(gens, 3)) == [(0, 1, 2), (1, 0, 2)]


class TestIsDistinguishing:
    def test_p3(self):
        assert is_distinguishing(path_graph(3), Colouring("vertex", [1, 2, 2]))[0]

    def test_c4_witness(self):
        ok, witness = is_distinguishing(cycle_graph(4), Colouring("vertex", [1, 1, 2, 2]))
        assert not ok
        assert witness in set(brute_automorphisms(cycle_graph(4)))
        col = [1, 1, 2, 2]
        assert all(col[witness[v]] == col[v] for v in range(4))

    def test_star_rainbow_edges(self):
        assert is_distinguishing(star_graph(3), Colouring("edge", ecolours=[1, 2, 3]))[0]

    def test_total_colouring(self):
        g = path_graph(2)
        assert is_distinguishing(g, Colouring("total", [1, 2], [3]))[0]
        assert not is_distinguishing(g, Colouring("total", [1, 1], [2]))[0]

    def test_brute_force_agreement(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(2, 5)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.5]
            if not edges:
                continue
            g = build_graph(edges, n=n)
            auts = brute_automorphisms(g)
            for _ in range(4):
                col = [rng.randint(1, 2) for _ in range(n)]
                expected = not any(
                    p != identity_perm(n) and all(col[p[v]] == col[v] for v in range(n))
                    for p in auts)
                assert is_distinguishing(g, Colouring("vertex", col))[0] == expected


class TestMotion:
    def test_k3(self):
        assert motion(complete_graph(3)) == 2

    def test_complete_graphs(self):
        for n in range(2, 8):
            assert motion(complete_graph(n)) == 2

    def test_c6(self):
        assert motion(cycle_graph(6)) == 4

    def test_rigid_spider(self):
        # legs of lengths 1, 2, 3 from a centre: the smallest asymmetric tree
        g = build_graph([(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])
        assert motion(g) is RIGID
        assert brute_automorphism_count(g) == 1

    def test_vertex_transitive_bound(self):
        for g in (cycle_graph(5), complete_graph(5), complete_bipartite(3, 3)):
            m = motion(g)
            assert m is not RIGID and m <= g.n


class TestTruncationDistinguishing:
    def test_p7_double_ray_proper_colouring(self):
        t = instantiate(FamilySpec("double_ray", (3,)))
        # proper 3-colouring: root 3split arms alternate
        col = np.zeros(7, dtype=int)
        col[0] = 3
        col[1], col[3], col[5] = 1, 2, 1
        col[2], col[4], col[6] = 2, 1, 2
        ok, _ = truncation_distinguishing(t, Colouring("vertex", col))
        assert ok

    def test_constant_colouring_with_boundary_fixing_symmetry(self):
        # two pendant branches on one attachment make a swappable pair
        g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (2, 6)])
        t = Truncation(g, 0, 4)
        ok, witness = truncation_distinguishing(t, Colouring("vertex", [1] * 7))
        assert not ok
        assert witness[5], witness[6] == (6, 5)

    def test_rainbow_always_distinguishing(self):
        t = instantiate(FamilySpec("ray", (7,)))
        for mode in ("boundary_pointwise", "boundary_setwise"):
            ok, _ = truncation_distinguishing(
                t, Colouring("vertex", list(range(1, 9))), mode)
            assert ok

    def test_setwise_stricter_than_pointwise(self):
        t = instantiate(FamilySpec("double_ray", (4,)))
        const = Colouring("vertex", [1] * 9)
        assert truncation_distinguishing(t, const, "boundary_pointwise")[0]
        ok, witness = truncation_distinguishing(t, const, "boundary_setwise")
        assert not ok and witness is not None

    def test_tree_fast_path_matches_search(self):
        rng = random.Random(17)
        for _ in range(20):
            t = instantiate(FamilySpec("random_tree_min3", (4, rng.randint(0, 10**6))))
            n = t.graph.n
            for _ in range(3):
                col = Colouring("vertex", [rng.randint(1, 3) for _ in range(n)])
                fast = truncation_distinguishing(t, col, allow_fast_path=True)
                slow = truncation_distinguishing(t, col, allow_fast_path=False)
                assert fast[0] == slow[0]

    def test_tree_fast_path_matches_search_with_pendants(self):
        # star-with-ray carries interior leaves, exercising the closure path
        rng = random.Random(23)
        t = instantiate(FamilySpec("star_one_ray", (4, 6)))
        n = t.graph.n
        for _ in range(30):
            col = Colouring("vertex", [rng.randint(1, 3) for _ in range(n)])
            fast = truncation_distinguishing(t, col, allow_fast_path=True)
            slow = truncation_distinguishing(t, col, allow_fast_path=False)
            assert fast[0] == slow[0]
            if not fast[0]:
                w = fast[1]
                assert is_automorphism(t.graph, w)
                assert all(int(col.vcolours[w[v]]) == int(col.vcolours[v])
                           for v in range(n))

    def test_edge_colouring_mode(self):
        t = instantiate(FamilySpec("star_one_ray", (3, 6)))
        m = t.graph.m
        e_const = Colouring("edge", ecolours=[1] * m)
        ok, witness = truncation_distinguishing(t, e_const)
        assert not ok and witness is not None
        rainbow = Colouring("edge", ecolours=list(range(1, m + 1)))
        assert truncation_distinguishing(t, rainbow)[0]
