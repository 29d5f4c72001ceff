"""Finite simple graphs, truncations of infinite families, and colourings.

Graphs are immutable once built and store adjacency in CSR form (numpy
arrays), which keeps multi-million-vertex truncations affordable.  Vertex
ids are dense 0..n-1; edges get dense ids in lexicographic (u, v) order
with u < v.  Colourings are separate overlay objects so one graph can
carry many of them.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ColouringError, GraphError


class Graph:
    """Immutable finite simple undirected graph."""

    __slots__ = ("n", "_indptr", "_indices", "_edge_pairs", "_edge_ids")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, _validate: bool = True):
        self.n = int(len(indptr) - 1)
        self._indptr = indptr
        self._indices = indices
        self._edge_pairs: Optional[list[tuple[int, int]]] = None
        self._edge_ids: Optional[dict[tuple[int, int], int]] = None
        if _validate:
            self._validate()
        indptr.setflags(write=False)
        indices.setflags(write=False)

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: Optional[int] = None) -> "Graph":
        pairs = []
        seen = set()
        top = -1
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u < 0 or v < 0:
                raise GraphError(f"negative vertex id in edge ({u}, {v})")
            if u == v:
                raise GraphError(f"loop edge ({u}, {v}) rejected")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key} rejected")
            seen.add(key)
            pairs.append(key)
            top = max(top, u, v)
        count = top + 1
        if n is None:
            n = count
        elif n < count:
            raise GraphError(f"edge endpoint {top} exceeds declared vertex count {n}")
        degrees = np.zeros(n, dtype=np.int64)
        for u, v in pairs:
            degrees[u] += 1
            degrees[v] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        indices = np.zeros(int(indptr[-1]), dtype=np.int32)
        cursor = indptr[:-1].copy()
        for u, v in pairs:
            indices[cursor[u]] = v
            cursor[u] += 1
            indices[cursor[v]] = u
            cursor[v] += 1
        for v in range(n):
            seg = indices[indptr[v] : indptr[v + 1]]
            seg.sort()
        return cls(indptr, indices, _validate=False)

    @classmethod
    def from_csr(cls, indptr: np.ndarray, indices: np.ndarray, validate: bool = True) -> "Graph":
        """Adopt prebuilt CSR arrays (rows sorted, symmetric, no loops)."""
        return cls(np.ascontiguousarray(indptr, dtype=np.int64),
                   np.ascontiguousarray(indices, dtype=np.int32),
                   _validate=validate)

    def _validate(self) -> None:
        n = self.n
        idx = self._indices
        ptr = self._indptr
        if len(idx) and (idx.min() < 0 or idx.max() >= n):
            raise GraphError("adjacency index out of range")
        rows = np.repeat(np.arange(n, dtype=np.int32), np.diff(ptr))
        if np.any(rows == idx):
            raise GraphError("loop edge in adjacency")
        inner = np.ones(len(idx), dtype=bool)
        starts = ptr[1:-1]
        inner[starts[starts < len(idx)]] = False  # row starts exempt from the sortedness check
        if len(idx) > 1 and np.any((np.diff(idx) <= 0) & inner[1:]):
            raise GraphError("adjacency rows must be strictly sorted (no duplicate edges)")
        fwd = (np.minimum(rows, idx).astype(np.int64) * n + np.maximum(rows, idx)).astype(np.int64)
        fwd.sort()
        if np.any(fwd[::2] != fwd[1::2]):
            raise GraphError("adjacency not symmetric")

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._indices) // 2

    def degree(self, v: int) -> int:
        return int(self._indptr[v + 1] - self._indptr[v])

    @property
    def max_degree(self) -> int:
        if self.n == 0:
            return 0
        return int(np.max(np.diff(self._indptr)))

    def neighbours(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbours(u)
        i = int(np.searchsorted(row, v))
        return i < len(row) and row[i] == v

    @property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        return self._indptr, self._indices

    # -- edge indexing (lazy; never built for giant graphs) ---------------

    def _build_edge_index(self) -> None:
        pairs = []
        ptr, idx = self._indptr, self._indices
        for u in range(self.n):
            for v in idx[ptr[u] : ptr[u + 1]]:
                if u < v:
                    pairs.append((u, int(v)))
        pairs.sort()
        self._edge_pairs = pairs
        self._edge_ids = {p: i for i, p in enumerate(pairs)}

    @property
    def edge_pairs(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, sorted lexicographically; index = edge id."""
        if self._edge_pairs is None:
            self._build_edge_index()
        return self._edge_pairs

    def edge_id(self, u: int, v: int) -> int:
        if self._edge_ids is None:
            self._build_edge_index()
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_ids[key]
        except KeyError:
            raise GraphError(f"no edge {key} in graph") from None

    # -- traversals -------------------------------------------------------

    def bfs_depths(self, root: int) -> np.ndarray:
        """Distance from root for every vertex (-1 when unreachable)."""
        if not (0 <= root < self.n):
            raise GraphError(f"root {root} out of range")
        depth = np.full(self.n, -1, dtype=np.int32)
        depth[root] = 0
        frontier = [root]
        ptr, idx = self._indptr, self._indices
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in idx[ptr[u] : ptr[u + 1]]:
                    if depth[w] < 0:
                        depth[w] = d
                        nxt.append(int(w))
            frontier = nxt
        return depth

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return bool(np.all(self.bfs_depths(0) >= 0))

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def connected_or_raise(self) -> None:
        if self.n:
            depth = self.bfs_depths(0)
            bad = np.flatnonzero(depth < 0)
            if len(bad):
                raise GraphError(f"graph is disconnected: vertex {int(bad[0])} unreachable from 0")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self._indptr, other._indptr)
                and np.array_equal(self._indices, other._indices))

    def __hash__(self):
        return hash((self.n, self._indices.tobytes()))


def build_graph(edges: Iterable[Sequence[int]], n: Optional[int] = None) -> Graph:
    """Build a simple graph from an edge list, rejecting loops and duplicates."""
    return Graph.from_edges(edges, n=n)


def bfs_order(g: Graph, root: int) -> tuple[list[int], dict[int, int]]:
    """Layer-by-layer BFS enumeration with ascending-id tie-breaking.

    Returns the visit order and the parent map of the induced BFS tree
    (parent of v = its least-id neighbour in the previous layer).  Raises
    on disconnected input, naming an unreached vertex.
    """
    if not (0 <= root < g.n):
        raise GraphError(f"root {root} out of range")
    depth = g.bfs_depths(root)
    unreached = np.flatnonzero(depth < 0)
    if len(unreached):
        raise GraphError(f"graph is disconnected: vertex {int(unreached[0])} not reached from {root}")
    order = [root]
    parent: dict[int, int] = {root: -1}
    prev = {root}
    d = 0
    while len(order) < g.n:
        d += 1
        nxt = sorted(int(v) for v in np.flatnonzero(depth == d))
        if not nxt:
            break
        for v in nxt:
            parent[v] = min(int(w) for w in g.neighbours(v) if int(w) in prev)
        order.extend(nxt)
        prev = set(nxt)
    return order, parent


class Truncation:
    """The ball of radius r around a root vertex of an infinite family.

    The depth map must equal BFS distance from the root and never exceed
    the radius; the boundary sphere (depth == radius) must be nonempty.
    Fidelity to the generating infinite family (interior vertices keep
    their full neighbourhood) is the generator's responsibility.
    """

    __slots__ = ("graph", "root", "radius", "depth", "_extends", "_boundary")

    def __init__(self, graph: Graph, root: int, radius: int, depth: Optional[np.ndarray] = None,
                 validate: bool = True):
        self.graph = graph
        self.root = int(root)
        self.radius = int(radius)
        if depth is None:
            depth = graph.bfs_depths(root)
            validate_depth = False
        else:
            depth = np.asarray(depth)
            validate_depth = validate
        self.depth = depth
        self._extends: Optional[np.ndarray] = None
        self._boundary: Optional[np.ndarray] = None
        if validate:
            if self.radius < 1:
                raise GraphError("truncation radius must be >= 1")
            if validate_depth and not np.array_equal(depth, graph.bfs_depths(root)):
                raise GraphError("depth map does not match BFS distance from root")
            if np.any(self.depth < 0):
                raise GraphError("truncation graph must be connected")
            if int(self.depth.max()) > self.radius:
                raise GraphError("vertex deeper than radius")
            if not np.any(self.depth == self.radius):
                raise GraphError("boundary sphere is empty")
        self.depth.setflags(write=False)

    @property
    def boundary(self) -> np.ndarray:
        if self._boundary is None:
            self._boundary = np.flatnonzero(self.depth == self.radius).astype(np.int32)
        return self._boundary

    def extends_to_boundary(self) -> np.ndarray:
        """Flag per vertex: a strictly depth-increasing path reaches the boundary."""
        if self._extends is not None:
            return self._extends
        g = self.graph
        depth = self.depth
        flags = depth == self.radius
        ptr, idx = g.csr
        if g.n > 100_000:
            rows = np.repeat(np.arange(g.n, dtype=np.int32), np.diff(ptr))
            deeper = depth[idx] == depth[rows] + 1
            src, dst = rows[deeper], idx[deeper]
            del rows, deeper
            src_depth = depth[src]
            for d in range(self.radius - 1, -1, -1):
                sel = np.flatnonzero(src_depth == d)
                if len(sel):
                    good = sel[flags[dst[sel]]]
                    flags[src[good]] = True
        else:
            by_depth = np.argsort(depth, kind="stable")
            for v in by_depth[::-1]:
                if flags[v]:
                    continue
                dv = depth[v]
                for w in idx[ptr[v] : ptr[v + 1]]:
                    if depth[w] == dv + 1 and flags[w]:
                        flags[v] = True
                        break
        self._extends = flags
        return flags

    def __repr__(self) -> str:
        return f"Truncation(n={self.graph.n}, root={self.root}, radius={self.radius})"


def spheres(t: Truncation) -> list[list[int]]:
    """Vertex sets S_0..S_r partitioned by depth, each sorted ascending."""
    out: list[list[int]] = [[] for _ in range(t.radius + 1)]
    order = np.argsort(t.depth, kind="stable")
    for v in order:
        out[int(t.depth[v])].append(int(v))
    return out


def ray_origins(t: Truncation, k: int) -> tuple[list[int], list[int]]:
    """Split sphere S_k into ray origins C_k and the rest D_k.

    C_k collects the vertices of S_k from which some strictly
    depth-increasing path reaches the boundary sphere; D_k = S_k \\ C_k.
    """
    if not (0 <= k < t.radius):
        raise GraphError(f"sphere index {k} out of range [0, {t.radius})")
    flags = t.extends_to_boundary()
    sphere = np.flatnonzero(t.depth == k)
    c = [int(v) for v in sphere if flags[v]]
    d = [int(v) for v in sphere if not flags[v]]
    return c, d


def geodesic_ray(t: Truncation) -> list[int]:
    """Lexicographically least strictly depth-increasing root-to-boundary path.

    Depth increments of one per step make the path geodesic automatically
    (graph distance between two path vertices is at least their depth
    difference).  The pin construction downstream needs six edges, so
    truncations of radius < 6 are rejected.
    """
    if t.radius < 6:
        raise GraphError(
            f"no geodesic ray with at least 6 edges: radius {t.radius} < 6")
    flags = t.extends_to_boundary()
    depth = t.depth
    path = [t.root]
    v = t.root
    while depth[v] < t.radius:
        nxt = None
        for w in t.graph.neighbours(v):
            w = int(w)
            if depth[w] == depth[v] + 1 and flags[w]:
                nxt = w
                break
        if nxt is None:
            raise GraphError("root does not extend to the boundary")
        path.append(nxt)
        v = nxt
    return path


# -- colourings ------------------------------------------------------------

VERTEX = "vertex"
EDGE = "edge"
TOTAL = "total"
KINDS = (VERTEX, EDGE, TOTAL)


class Colouring:
    """A vertex, edge, or total colour assignment overlaying one graph.

    vcolours is indexed by vertex id, ecolours by edge id.  The reserved
    slot marks a distinguished extra colour (rendered black in DOT and
    figure output).
    """

    __slots__ = ("kind", "vcolours", "ecolours", "reserved")

    def __init__(self, kind: str, vcolours=None, ecolours=None, reserved: Optional[int] = None):
        if kind not in KINDS:
            raise ColouringError(f"unknown colouring kind {kind!r}")
        if kind in (VERTEX, TOTAL) and vcolours is None:
            raise ColouringError(f"{kind} colouring needs vertex colours")
        if kind in (EDGE, TOTAL) and ecolours is None:
            raise ColouringError(f"{kind} colouring needs edge colours")
        if kind == VERTEX and ecolours is not None:
            raise ColouringError("vertex colouring must not carry edge colours")
        if kind == EDGE and vcolours is not None:
            raise ColouringError("edge colouring must not carry vertex colours")
        self.kind = kind
        self.vcolours = None if vcolours is None else np.asarray(vcolours)
        self.ecolours = None if ecolours is None else np.asarray(ecolours)
        self.reserved = reserved

    @property
    def palette(self) -> frozenset[int]:
        cols: set[int] = set()
        if self.vcolours is not None:
            cols.update(int(c) for c in np.unique(self.vcolours))
        if self.ecolours is not None:
            cols.update(int(c) for c in np.unique(self.ecolours))
        return frozenset(cols)

    def validate_for(self, g: Graph) -> None:
        if self.vcolours is not None and len(self.vcolours) != g.n:
            raise ColouringError(
                f"vertex colour map covers {len(self.vcolours)} of {g.n} vertices")
        if self.ecolours is not None and len(self.ecolours) != g.m:
            raise ColouringError(
                f"edge colour map covers {len(self.ecolours)} of {g.m} edges")

    def colour_count(self) -> int:
        return len(self.palette)

    def __repr__(self) -> str:
        return f"Colouring(kind={self.kind}, colours={sorted(self.palette)}, reserved={self.reserved})"


def is_proper(g: Graph, c: Colouring) -> bool:
    """Properness for the colouring's kind: vertex/edge/total conflicts."""
    c.validate_for(g)
    if c.kind in (VERTEX, TOTAL):
        ptr, idx = g.csr
        vc = c.vcolours
        rows = np.repeat(np.arange(g.n, dtype=np.int32), np.diff(ptr))
        if np.any(vc[rows] == vc[idx]):
            return False
    if c.kind in (EDGE, TOTAL):
        ec = c.ecolours
        pairs = g.edge_pairs
        incident: list[list[int]] = [[] for _ in range(g.n)]
        for eid, (u, v) in enumerate(pairs):
            incident[u].append(eid)
            incident[v].append(eid)
        for eids in incident:
            seen = set()
            for eid in eids:
                col = int(ec[eid])
                if col in seen:
                    return False
                seen.add(col)
        if c.kind == TOTAL:
            vc = c.vcolours
            for eid, (u, v) in enumerate(pairs):
                if ec[eid] == vc[u] or ec[eid] == vc[v]:
                    return False
    return True
