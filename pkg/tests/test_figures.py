from symbreak.core import Colouring
from symbreak.families import FamilySpec, instantiate
from symbreak.figures import render_colouring, render_experiment_summary

from conftest import cycle_graph


def test_render_finite_graph(tmp_path):
    path = tmp_path / "c6.png"
    render_colouring(cycle_graph(6), Colouring("vertex", [1, 2, 1, 2, 1, 2]),
                     str(path), title="alternating")
    assert path.exists() and path.stat().st_size > 1000


def test_render_truncation_radial_layout(tmp_path):
    small = instantiate(FamilySpec("star_one_ray", (3, 7)))
    path = tmp_path / "tree.png"
    render_colouring(small, None, str(path))
    assert path.exists()
    # reserved colour renders for a coloured truncation too
    path2 = tmp_path / "red.png"
    dr = instantiate(FamilySpec("double_ray", (4,)))
    render_colouring(dr, Colouring("vertex", [3, 1, 2, 2, 1, 1, 2, 2, 1], reserved=3),
                     str(path2))
    assert path2.exists()


def test_render_edge_colours(tmp_path):
    g = cycle_graph(5)
    path = tmp_path / "edges.png"
    render_colouring(g, Colouring("edge", ecolours=[1, 2, 1, 2, 3], reserved=3), str(path))
    assert path.exists()


def test_summary_chart(tmp_path):
    rows = [
        {"check": "a", "verdict": "pass"},
        {"check": "a", "verdict": "fail"},
        {"check": "b", "verdict": "skipped"},
    ]
    path = tmp_path / "summary.png"
    render_experiment_summary(rows, str(path))
    assert path.exists() and path.stat().st_size > 1000
