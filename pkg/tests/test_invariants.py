import random

import pytest

from symbreak.automorphisms import RIGID, is_distinguishing
from symbreak.core import build_graph, is_proper
from symbreak.errors import GraphError, SizeBoundError
from symbreak.families import FamilySpec, instantiate
from symbreak.invariants import (SearchBounds, distinguishing_value,
                                 format_report_table, full_report,
                                 min_proper_distinguishing_truncation,
                                 proper_chromatic)

from conftest import (brute_min_colours, complete_bipartite,
                      complete_graph, cycle_graph, path_graph, star_graph)


class TestProperChromatic:
    def test_known_values(self):
        assert proper_chromatic(complete_graph(4), "vertex")[0] == 4
        assert proper_chromatic(star_graph(3), "edge")[0] == 3
        assert proper_chromatic(path_graph(7), "total")[0] == 3
        assert proper_chromatic(cycle_graph(5), "vertex")[0] == 3
        assert proper_chromatic(complete_bipartite(3, 3), "vertex")[0] == 2

    def test_certificates_proper(self):
        for kind in ("vertex", "edge", "total"):
            k, cert = proper_chromatic(cycle_graph(5), kind)
            assert is_proper(cycle_graph(5), cert)
            assert cert.colour_count() == k

    def test_disconnected_rejected(self):
        g = build_graph([(0, 1)], n=3)
        with pytest.raises(GraphError, match="disconnected"):
            proper_chromatic(g, "vertex")

    def test_size_bound(self):
        g = path_graph(13)
        with pytest.raises(SizeBoundError):
            proper_chromatic(g, "vertex")
        assert proper_chromatic(g, "vertex", bounds=SearchBounds(vertex_vertices=13))[0] == 2


class TestDistinguishingValue:
    @pytest.mark.parametrize("builder,kind,proper,expected", [
        (lambda: complete_graph(4), "vertex", False, 4),
        (lambda: cycle_graph(5), "vertex", False, 3),
        (lambda: cycle_graph(6), "vertex", False, 2),
        (lambda: complete_bipartite(3, 3), "vertex", False, 4),
        (lambda: star_graph(5), "edge", False, 5),
        (lambda: cycle_graph(4), "vertex", True, 4),
        (lambda: cycle_graph(6), "vertex", True, 4),
        (lambda: complete_bipartite(3, 2), "vertex", True, 5),
        (lambda: complete_bipartite(3, 3), "vertex", True, 6),
        (lambda: complete_bipartite(3, 3), "edge", True, 5),
        (lambda: path_graph(2), "total", True, 3),
    ])
    def test_known_values(self, builder, kind, proper, expected):
        g = builder()
        k, cert = distinguishing_value(g, kind, proper)
        assert k == expected
        assert is_distinguishing(g, cert)[0]
        if proper:
            assert is_proper(g, cert)

    def test_rigid_graph_conventions(self):
        spider = build_graph([(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])
        assert distinguishing_value(spider, "vertex", False)[0] == 1
        assert (distinguishing_value(spider, "vertex", True)[0]
                == proper_chromatic(spider, "vertex")[0])

    def test_k2_edge_impossible(self):
        with pytest.raises(GraphError, match="fixes every edge"):
            distinguishing_value(path_graph(2), "edge", False)

    def test_oracle_agreement_small_sample(self):
        rng = random.Random(29)
        cases = 0
        while cases < 12:
            n = rng.randint(3, 5)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.6]
            g = build_graph(edges, n=n)
            if not g.is_connected():
                continue
            for kind in ("vertex", "edge"):
                for proper in (False, True):
                    expected = brute_min_colours(g, kind, proper)
                    got = distinguishing_value(g, kind, proper)[0]
                    assert got == expected, (n, edges, kind, proper)
            cases += 1

    def test_proper_ge_free(self, small_connected_corpus):
        rng = random.Random(41)
        sample = rng.sample(small_connected_corpus, 40)
        for n, edges in sample:
            g = build_graph(edges, n=n)
            for kind in ("vertex", "edge", "total"):
                free = distinguishing_value(g, kind, False)[0]
                strict = distinguishing_value(g, kind, True)[0]
                assert strict >= free


class TestTruncationSearch:
    def test_kdd_exclusion_structure(self):
        t = instantiate(FamilySpec("kdd_minus_edge_rays", (3, 6)))
        bounds = SearchBounds(vertex_vertices=40)
        k, cert = min_proper_distinguishing_truncation(t, bounds=bounds)
        assert k == 4
        assert is_proper(t.graph, cert)
        from symbreak.automorphisms import truncation_distinguishing

        assert truncation_distinguishing(t, cert)[0]


class TestFullReport:
    def test_c6(self):
        r = full_report(cycle_graph(6), "C6")
        assert r.values["D"] == 2
        assert r.values["chi_D"] == 4
        assert r.values["motion"] == 4
        assert not r.missing

    def test_k33(self):
        r = full_report(complete_bipartite(3, 3), "K33")
        assert r.values["D"] == 4
        assert r.values["chi"] == 2
        assert r.values["D''"] <= max(r.values["D"], r.values["D'"])

    def test_p2(self):
        r = full_report(path_graph(2), "P2", bounds=SearchBounds())
        assert r.values["chi''"] == 3 and r.values["chi''_D"] == 3
        assert "D'" in r.missing or r.values.get("D'") is None

    def test_partial_on_bound(self):
        g = path_graph(11)
        r = full_report(g, "P11")
        assert "D'" in r.missing and r.values["D"] == 2

    def test_rigid_motion_sentinel(self):
        spider = build_graph([(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])
        r = full_report(spider, "spider")
        assert r.values["motion"] is RIGID
        assert r.to_dict()["values"]["motion"] == "rigid"

    def test_table_format(self):
        r = full_report(cycle_graph(5), "C5")
        table = format_report_table([r])
        lines = table.splitlines()
        assert lines[0].startswith("graph")
        assert "C5" in lines[1]

    def test_certificates_roundtrip(self):
        r = full_report(cycle_graph(5), "C5")
        g = cycle_graph(5)
        for name, cert in r.certificates.items():
            if name.startswith("chi"):
                assert is_proper(g, cert)
            if name.startswith("D") or name.endswith("_D"):
                assert is_distinguishing(g, cert)[0]
