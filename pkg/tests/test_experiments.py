import pytest

from symbreak.errors import GraphError
from symbreak.experiments import (CHECK_NAMES, ExperimentConfig, run_experiment,
                                  rows_to_csv, rows_to_markdown, summary_line)
from symbreak.invariants import SearchBounds


def test_all_checks_run_on_mixed_corpus():
    config = ExperimentConfig(
        corpus=["family:cycle(5)", "family:star(4)", "family:double_ray(6)"],
        checks=list(CHECK_NAMES),
        bounds=SearchBounds(vertex_vertices=16, edge_vertices=16, total_vertices=16,
                            total_edges=24),
    )
    rows, failures = run_experiment(config)
    assert len(rows) == 3 * len(CHECK_NAMES)
    by = {(r["graph"], r["check"]): r["verdict"] for r in rows}
    # the proved bounds hold on these graphs
    assert by[("family:cycle(5)", "dprime_le_d_plus1")] == "pass"
    assert by[("family:cycle(5)", "chiD_le_2delta_minus1")] == "pass"
    assert by[("family:star(4)", "chiD_le_2delta_minus1")] == "pass"
    assert by[("family:star(4)", "chi2primeD_le_chi2prime_plus1")] == "pass"
    # the degree-2 cycle violates the stronger exploratory probe
    assert by[("family:cycle(5)", "chiD_le_2delta_minus2")] == "fail"
    assert by[("family:star(4)", "chiD_le_2delta_minus2")] == "pass"
    # the motion probe only applies to truncations
    assert by[("family:cycle(5)", "chiD_le_delta_plus1_motion")] == "skipped"
    assert by[("family:double_ray(6)", "chiD_le_delta_plus1_motion")] == "pass"
    # a fail dumps the graph and the certificate that witnessed the value
    c5_fails = [f for f in failures if f["graph_source"] == "family:cycle(5)"]
    assert c5_fails and "certificate" in c5_fails[0]


def test_config_validation():
    with pytest.raises(GraphError, match="nonempty corpus"):
        ExperimentConfig.from_dict({"checks": ["dprime_le_d_plus1"]})
    with pytest.raises(GraphError, match="unknown check"):
        ExperimentConfig.from_dict({"corpus": ["family:cycle(5)"], "checks": ["x"]})


def test_row_formatting():
    rows = [{"graph": "g", "check": "c", "lhs": "D'=2", "rhs": "D+1=3",
             "verdict": "pass"}]
    assert rows_to_csv(rows).splitlines()[0] == "graph,check,lhs,rhs,verdict"
    assert rows_to_markdown(rows).startswith("| graph |")
    assert summary_line(rows) == "cells: 1 passed: 1 failed: 0 skipped: 0"
