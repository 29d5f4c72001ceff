"""Matplotlib rendering: coloured graphs and experiment summaries.

Layouts are deterministic (radial by depth for truncations, a circle
otherwise) so repeated runs produce identical files.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .core import Colouring, Graph, Truncation, spheres  # noqa: E402

GraphLike = Union[Graph, Truncation]

_PALETTE = ("#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4",
            "#8c613c", "#dc7ec0", "#797979", "#d5bb67", "#82c6e2")


def _positions(g: GraphLike) -> dict[int, tuple[float, float]]:
    if isinstance(g, Truncation):
        pos = {g.root: (0.0, 0.0)}
        for r, sphere in enumerate(spheres(g)):
            if r == 0:
                continue
            for i, v in enumerate(sphere):
                angle = 2 * math.pi * i / len(sphere)
                pos[v] = (r * math.cos(angle), r * math.sin(angle))
        return pos
    n = g.n
    return {v: (math.cos(2 * math.pi * v / n), math.sin(2 * math.pi * v / n))
            for v in range(n)}


def _colour_for(col: int, reserved: Optional[int], palette: list[int]) -> str:
    if reserved is not None and col == reserved:
        return "black"
    return _PALETTE[palette.index(col) % len(_PALETTE)]


def render_colouring(g: GraphLike, colouring: Optional[Colouring], path: str,
                     title: Optional[str] = None) -> None:
    """Draw the graph, filling vertices / tinting edges by their colours;
    the reserved colour renders black."""
    graph = g.graph if isinstance(g, Truncation) else g
    pos = _positions(g)
    palette = sorted(colouring.palette) if colouring is not None else []
    fig, ax = plt.subplots(figsize=(7, 7))
    for eid, (u, v) in enumerate(graph.edge_pairs):
        colour = "#bbbbbb"
        width = 1.0
        if colouring is not None and colouring.ecolours is not None:
            colour = _colour_for(int(colouring.ecolours[eid]), colouring.reserved, palette)
            width = 2.0
        ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]],
                color=colour, linewidth=width, zorder=1)
    xs = [pos[v][0] for v in range(graph.n)]
    ys = [pos[v][1] for v in range(graph.n)]
    if colouring is not None and colouring.vcolours is not None:
        fills = [_colour_for(int(colouring.vcolours[v]), colouring.reserved, palette)
                 for v in range(graph.n)]
    else:
        fills = ["white"] * graph.n
    ax.scatter(xs, ys, s=240, c=fills, edgecolors="black", zorder=2)
    if graph.n <= 60:
        for v in range(graph.n):
            dark = fills[v] == "black"
            ax.annotate(str(v), pos[v], ha="center", va="center", fontsize=7,
                        color="white" if dark else "black", zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_experiment_summary(rows: Sequence[dict], path: str) -> None:
    """Stacked pass/fail/skipped bars, one per check."""
    checks: dict[str, dict[str, int]] = {}
    for row in rows:
        bucket = checks.setdefault(row["check"], {"pass": 0, "fail": 0, "skipped": 0})
        bucket[row["verdict"]] += 1
    names = sorted(checks)
    fig, ax = plt.subplots(figsize=(max(6, 1.6 * len(names)), 4))
    xs = range(len(names))
    passes = [checks[c]["pass"] for c in names]
    fails = [checks[c]["fail"] for c in names]
    skips = [checks[c]["skipped"] for c in names]
    ax.bar(xs, passes, color="#6acc64", label="pass")
    ax.bar(xs, fails, bottom=passes, color="#d65f5f", label="fail")
    ax.bar(xs, skips, bottom=[p + f for p, f in zip(passes, fails)],
           color="#d5bb67", label="skipped")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("graphs")
    ax.legend()
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
