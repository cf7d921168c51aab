"""Graph construction and measurement.

Provides the undirected simple graphs the toolkit operates on: standard
families (path, cycle, star, complete, grid, hypercube, ring of cliques),
an edge-list text format, and the structural measurements used by the
forcing process and the bound checks (BFS distances, eccentricity,
diameter, edge boundaries).

Graphs are stored in CSR form (indptr/indices) with sorted neighbor lists
and are immutable after construction, so they can be shared freely across
threads and worker processes.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

INFINITE = math.inf


class GraphError(ValueError):
    """Invalid graph construction parameters or malformed input."""


class Graph:
    """Undirected simple graph: vertex count plus sorted adjacency lists.

    Invariants enforced at construction: symmetry, no self-loops, no
    duplicate neighbors, all indices in ``[0, n)``. Duplicate edges in the
    input are collapsed.
    """

    __slots__ = ("n", "indptr", "indices", "degrees", "label", "family", "params")

    def __init__(self, n, edges, label=None, family=None, params=None):
        if n < 1:
            raise GraphError(f"graph needs at least one vertex, got n={n}")
        if not isinstance(edges, np.ndarray):
            edges = list(edges)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise GraphError("edge endpoint out of range [0, n)")
            if (edges[:, 0] == edges[:, 1]).any():
                raise GraphError("self-loops are not allowed")
            # canonical (min, max) pairs, duplicates collapsed
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            keys = np.unique(lo * n + hi)
            lo, hi = keys // n, keys % n
            heads = np.concatenate([lo, hi])
            tails = np.concatenate([hi, lo])
        else:
            heads = tails = np.empty(0, dtype=np.int64)

        deg = np.bincount(heads, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        order = np.lexsort((tails, heads))
        indices = tails[order].astype(np.int32)

        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.degrees = deg.astype(np.int64)
        self.label = label
        self.family = family
        self.params = tuple(params) if params is not None else None
        for arr in (self.indptr, self.indices, self.degrees):
            arr.setflags(write=False)

    def neighbors(self, v):
        """Sorted neighbor indices of ``v`` (read-only array view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self.degrees[v])

    @property
    def n_edges(self):
        return int(self.indices.size) // 2

    def adjacency(self):
        """Adjacency as a list of sorted Python lists."""
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def has_edge(self, u, v):
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def __repr__(self):
        tag = self.label or f"graph(n={self.n})"
        return f"Graph({tag}, n={self.n}, m={self.n_edges})"


# ---------------------------------------------------------------------------
# Family generators
# ---------------------------------------------------------------------------

FAMILIES = ("path", "cycle", "star", "complete", "grid", "hypercube",
            "cliquering", "file")

HYPERCUBE_DIM_CAP = 30  # memory guard


@dataclass(frozen=True)
class GraphFamilySpec:
    """Parsed `family:params` graph selector, e.g. grid:4,5 or file:edges.txt."""

    family: str
    params: tuple = ()
    path: str | None = None

    def canonical(self):
        if self.family == "file":
            return f"file:{self.path}"
        return f"{self.family}:{','.join(str(p) for p in self.params)}"


def parse_graph_spec(text):
    """Parse a `family:params` string into a validated GraphFamilySpec."""
    text = text.strip()
    name, sep, rest = text.partition(":")
    name = name.strip().lower().replace("_", "").replace("-", "")
    if name == "edgelistfile":
        name = "file"
    if name not in FAMILIES:
        raise GraphError(f"unknown graph family {name!r} (choose from {', '.join(FAMILIES)})")
    if name == "file":
        if not sep or not rest:
            raise GraphError("file family needs a path, e.g. file:edges.txt")
        return GraphFamilySpec("file", (), rest)
    try:
        params = tuple(int(p) for p in rest.split(",")) if rest else ()
    except ValueError:
        raise GraphError(f"non-integer parameter in graph spec {text!r}") from None
    spec = GraphFamilySpec(name, params)
    _validate_family_params(spec)
    return spec


_PARAM_COUNTS = {"path": 1, "cycle": 1, "star": 1, "complete": 1,
                 "grid": 2, "hypercube": 1, "cliquering": 2}


def _validate_family_params(spec):
    want = _PARAM_COUNTS[spec.family]
    if len(spec.params) != want:
        raise GraphError(f"{spec.family} takes {want} parameter(s), got {len(spec.params)}")
    p = spec.params
    if spec.family == "path" and p[0] < 1:
        raise GraphError("path needs at least 1 vertex")
    if spec.family == "cycle" and p[0] < 3:
        raise GraphError("cycle needs at least 3 vertices")
    if spec.family == "star" and p[0] < 1:
        raise GraphError("star needs at least 1 leaf")
    if spec.family == "complete" and p[0] < 1:
        raise GraphError("complete graph needs at least 1 vertex")
    if spec.family == "grid" and (p[0] < 1 or p[1] < 1):
        raise GraphError("grid dimensions must be >= 1")
    if spec.family == "hypercube":
        if p[0] < 1:
            raise GraphError("hypercube dimension must be >= 1")
        if p[0] > HYPERCUBE_DIM_CAP:
            raise GraphError(f"hypercube dimension {p[0]} exceeds cap {HYPERCUBE_DIM_CAP}")
    if spec.family == "cliquering":
        d, nv = p
        if d < 5:
            raise GraphError("clique ring needs d >= 5")
        if nv % (d + 1) != 0:
            raise GraphError(f"clique ring needs (d+1) | n; got d={d}, n={nv}")
        if nv // (d + 1) < 2:
            raise GraphError("clique ring needs at least 2 clique copies")
    return spec


def make_named_graph(spec):
    """Construct the graph described by a GraphFamilySpec (or spec string)."""
    if isinstance(spec, str):
        spec = parse_graph_spec(spec)
    elif spec.family != "file":
        _validate_family_params(spec)
    p = spec.params
    if spec.family == "path":
        return make_path(p[0])
    if spec.family == "cycle":
        return make_cycle(p[0])
    if spec.family == "star":
        return make_star(p[0])
    if spec.family == "complete":
        return make_complete(p[0])
    if spec.family == "grid":
        return make_grid(p[0], p[1])
    if spec.family == "hypercube":
        return make_hypercube(p[0])
    if spec.family == "cliquering":
        return make_clique_ring(p[0], p[1])
    if spec.family == "file":
        with open(spec.path, encoding="utf-8") as fh:
            g = parse_edge_list(fh.read())
        g.label = spec.canonical()
        return g
    raise GraphError(f"unhandled family {spec.family!r}")


def make_path(n):
    _validate_family_params(GraphFamilySpec("path", (n,)))
    edges = [(i, i + 1) for i in range(n - 1)]
    return Graph(n, edges, label=f"path:{n}", family="path", params=(n,))


def make_cycle(n):
    _validate_family_params(GraphFamilySpec("cycle", (n,)))
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph(n, edges, label=f"cycle:{n}", family="cycle", params=(n,))


def make_star(leaves):
    """Star with center vertex 0 and the given number of leaves."""
    _validate_family_params(GraphFamilySpec("star", (leaves,)))
    edges = [(0, i) for i in range(1, leaves + 1)]
    return Graph(leaves + 1, edges, label=f"star:{leaves}", family="star", params=(leaves,))


def make_complete(t):
    _validate_family_params(GraphFamilySpec("complete", (t,)))
    edges = [(i, j) for i in range(t) for j in range(i + 1, t)]
    return Graph(t, edges, label=f"complete:{t}", family="complete", params=(t,))


def make_grid(m, n):
    """m x n grid; vertex (i, j) has index i + m*j, edges at L1 distance 1."""
    _validate_family_params(GraphFamilySpec("grid", (m, n)))
    edges = []
    for j in range(n):
        for i in range(m):
            v = i + m * j
            if i + 1 < m:
                edges.append((v, v + 1))
            if j + 1 < n:
                edges.append((v, v + m))
    return Graph(m * n, edges, label=f"grid:{m},{n}", family="grid", params=(m, n))


def make_hypercube(dim):
    """Hypercube on 2^dim vertices; u ~ v iff u XOR v is a power of two."""
    _validate_family_params(GraphFamilySpec("hypercube", (dim,)))
    nv = 1 << dim
    v = np.arange(nv, dtype=np.int64)
    bits = (np.int64(1) << np.arange(dim, dtype=np.int64))[None, :]
    nbrs = np.sort(v[:, None] ^ bits, axis=1)
    g = Graph.__new__(Graph)
    g.n = nv
    g.indptr = np.arange(0, nv * dim + 1, dim, dtype=np.int64)
    g.indices = nbrs.ravel().astype(np.int32)
    g.degrees = np.full(nv, dim, dtype=np.int64)
    g.label = f"hypercube:{dim}"
    g.family = "hypercube"
    g.params = (dim,)
    for arr in (g.indptr, g.indices, g.degrees):
        arr.setflags(write=False)
    return g


def make_clique_ring(d, n):
    """d-regular ring of n/(d+1) cliques K_{d+1}.

    Within copy i (index block [i(d+1), (i+1)(d+1))) the edge between the
    two designated vertices -- local indices 0 and 1 -- is deleted, and a
    ring edge joins local 0 of copy i to local 1 of copy i+1 (mod copies).
    """
    _validate_family_params(GraphFamilySpec("cliquering", (d, n)))
    copies = n // (d + 1)
    edges = []
    for c in range(copies):
        base = c * (d + 1)
        for a in range(d + 1):
            for b in range(a + 1, d + 1):
                if a == 0 and b == 1:
                    continue
                edges.append((base + a, base + b))
        nxt = ((c + 1) % copies) * (d + 1)
        edges.append((base + 0, nxt + 1))
    return Graph(n, edges, label=f"cliquering:{d},{n}", family="cliquering", params=(d, n))


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text):
    """Parse "u v" pairs, one per line.

    An optional first non-comment line "n <count>" declares the vertex
    count; otherwise it is max index + 1. '#' starts a comment. Duplicate
    edges are collapsed; self-loops, negative indices, and malformed lines
    are rejected with the offending line number.
    """
    declared_n = None
    edges = []
    max_idx = -1
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n" and not saw_data:
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: malformed vertex-count header {raw!r}")
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: non-integer vertex count {parts[1]!r}") from None
            if declared_n < 1:
                raise GraphError(f"line {lineno}: vertex count must be >= 1")
            saw_data = True
            continue
        saw_data = True
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex index in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex index")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop {u}-{v} not allowed")
        edges.append((u, v))
        max_idx = max(max_idx, u, v)

    n = declared_n if declared_n is not None else max_idx + 1
    if n < 1:
        raise GraphError("edge list is empty and declares no vertex count")
    if max_idx >= n:
        raise GraphError(f"vertex index {max_idx} exceeds declared count {n}")
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------

def bfs_distances(g, source):
    """Hop distances from source; unreachable vertices get INFINITE."""
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range")
    dist = [INFINITE] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in g.neighbors(u):
            if dist[v] == INFINITE:
                dist[v] = du
                queue.append(int(v))
    return dist


def eccentricity(g, v):
    """Max hop distance from v; INFINITE on disconnected graphs."""
    return max(bfs_distances(g, v))


def diameter(g):
    """Max eccentricity; INFINITE if the graph is disconnected."""
    best = 0
    for v in range(g.n):
        ecc = eccentricity(g, v)
        if ecc is INFINITE:
            return INFINITE
        best = max(best, ecc)
    return best


def is_connected(g):
    return INFINITE not in bfs_distances(g, 0)


def edge_boundary(g, s):
    """Number of edges with exactly one endpoint in the vertex set s."""
    inside = set(s)
    for v in inside:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    count = 0
    for u in inside:
        for w in g.neighbors(u):
            if int(w) not in inside:
                count += 1
    return count
