"""Distinguishing-colouring invariants and symmetry-breaking constructions."""

from .core import (
    Colouring,
    Graph,
    Truncation,
    bfs_order,
    build_graph,
    geodesic_ray,
    is_proper,
    ray_origins,
    spheres,
)
from .automorphisms import (
    RIGID,
    AutGroup,
    aut_group,
    is_distinguishing,
    motion,
    truncation_distinguishing,
)
from .invariants import (
    InvariantReport,
    SearchBounds,
    distinguishing_value,
    format_report_table,
    full_report,
    min_proper_distinguishing_truncation,
    proper_chromatic,
)
from .constructions import (
    RedSchedule,
    SubcubicPlan,
    edge_dist_pin_ray,
    edge_from_vertex_colouring,
    proper_dist_2d1,
    subcubic_infmotion_4,
    total_dist_pin,
    tree_delta,
    tree_dplus1,
    tree_infmotion_3,
)
from .families import FamilySpec, instantiate, parse_family

__all__ = [
    "Colouring",
    "Graph",
    "Truncation",
    "bfs_order",
    "build_graph",
    "geodesic_ray",
    "is_proper",
    "ray_origins",
    "spheres",
    "RIGID",
    "AutGroup",
    "aut_group",
    "is_distinguishing",
    "motion",
    "truncation_distinguishing",
    "InvariantReport",
    "SearchBounds",
    "distinguishing_value",
    "format_report_table",
    "full_report",
    "min_proper_distinguishing_truncation",
    "proper_chromatic",
    "RedSchedule",
    "SubcubicPlan",
    "edge_dist_pin_ray",
    "edge_from_vertex_colouring",
    "proper_dist_2d1",
    "subcubic_infmotion_4",
    "total_dist_pin",
    "tree_delta",
    "tree_dplus1",
    "tree_infmotion_3",
    "FamilySpec",
    "instantiate",
    "parse_family",
]

__version__ = "0.1.0"
