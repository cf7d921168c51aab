"""Graph generators, parsing, and measurements."""

import math
import random

import pytest

from pzf.graphs import (INFINITE, Graph, GraphError, bfs_distances, diameter,
                        eccentricity, edge_boundary, is_connected,
                        make_clique_ring, make_complete, make_grid,
                        make_hypercube, make_named_graph, make_path,
                        parse_edge_list, parse_graph_spec)


def check_well_formed(g):
    seen_edges = set()
    for v in range(g.n):
        nbrs = g.neighbors(v).tolist()
        assert nbrs == sorted(nbrs)
        assert len(nbrs) == len(set(nbrs)), "duplicate neighbor"
        assert v not in nbrs, "self-loop"
        for w in nbrs:
            assert 0 <= w < g.n
            assert v in g.neighbors(w).tolist(), "asymmetric adjacency"
            seen_edges.add((min(v, w), max(v, w)))
    assert len(seen_edges) == g.n_edges


# -- named families ---------------------------------------------------------

def test_triangle():
    g = make_named_graph("complete:3")
    assert g.n == 3 and all(g.degree(v) == 2 for v in range(3))
    check_well_formed(g)


def test_star_four_leaves():
    g = make_named_graph("star:4")
    assert g.n == 5
    assert g.degree(0) == 4
    assert all(g.degree(v) == 1 for v in range(1, 5))


def test_path_two():
    g = make_named_graph("path:2")
    assert g.n == 2 and g.n_edges == 1
    assert [g.degree(v) for v in range(2)] == [1, 1]


@pytest.mark.parametrize("spec", ["cycle:2", "star:0", "path:0", "grid:0,3",
                                  "hypercube:0", "hypercube:31",
                                  "cliquering:4,10", "cliquering:5,13",
                                  "cliquering:5,6", "nosuch:3"])
def test_invalid_specs_rejected(spec):
    with pytest.raises(GraphError):
        make_named_graph(spec)


def test_spec_canonical_roundtrip():
    spec = parse_graph_spec("  Clique_Ring:5,12 ")
    assert spec.canonical() == "cliquering:5,12"
    assert parse_graph_spec(spec.canonical()) == spec
    assert parse_graph_spec("grid:4,5").canonical() == "grid:4,5"
    with pytest.raises(GraphError):
        parse_graph_spec("grid:4,x")
    with pytest.raises(GraphError):
        parse_graph_spec("file:")


# -- grid -------------------------------------------------------------------

def test_grid_2x2_is_four_cycle():
    g = make_grid(2, 2)
    assert g.n == 4 and g.n_edges == 4
    assert all(g.degree(v) == 2 for v in range(4))


def test_grid_2x3_edge_count_by_enumeration():
    # hand enumeration: edges between lattice points at L1 distance 1
    m, n = 2, 3
    expected = set()
    for j in range(n):
        for i in range(m):
            if i + 1 < m:
                expected.add((i + m * j, i + 1 + m * j))
            if j + 1 < n:
                expected.add((i + m * j, i + m * (j + 1)))
    g = make_grid(2, 3)
    assert g.n == 6 and g.n_edges == 7
    got = {(v, int(w)) for v in range(g.n) for w in g.neighbors(v) if v < w}
    assert got == expected


def test_degenerate_grid_is_path():
    g = make_grid(1, 5)
    p = make_path(5)
    assert g.n == p.n and g.adjacency() == p.adjacency()


def test_grid_vertex_numbering():
    g = make_grid(3, 4)
    # (i, j) -> i + m*j; (1, 2) has neighbors (0,2),(2,2),(1,1),(1,3)
    v = 1 + 3 * 2
    assert sorted(g.neighbors(v).tolist()) == sorted([0 + 3 * 2, 2 + 3 * 2,
                                                      1 + 3 * 1, 1 + 3 * 3])
    assert max(g.degrees) <= 4
    check_well_formed(g)


# -- hypercube --------------------------------------------------------------

def test_hypercube_small_cases():
    q1 = make_hypercube(1)
    assert q1.n == 2 and q1.n_edges == 1
    q2 = make_hypercube(2)
    assert q2.n == 4 and q2.n_edges == 4
    assert all(q2.degree(v) == 2 for v in range(4))


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 6])
def test_hypercube_structure(dim):
    g = make_hypercube(dim)
    assert g.n == 2 ** dim
    assert g.n_edges == 2 ** (dim - 1) * dim
    assert all(g.degree(v) == dim for v in range(g.n))
    check_well_formed(g)
    for v in range(g.n):
        for w in g.neighbors(v):
            assert bin(v ^ int(w)).count("1") == 1


def test_hypercube_bfs_is_hamming_distance():
    g = make_hypercube(6)
    rnd = random.Random(4)
    dists = {}
    for _ in range(20):
        a, b = rnd.randrange(g.n), rnd.randrange(g.n)
        if a not in dists:
            dists[a] = bfs_distances(g, a)
        assert dists[a][b] == bin(a ^ b).count("1")


# -- clique ring ------------------------------------------------------------

def test_clique_ring_regular_connected():
    g = make_clique_ring(5, 12)
    assert g.n == 12
    assert all(g.degree(v) == 5 for v in range(12))
    assert is_connected(g)
    check_well_formed(g)


def test_clique_ring_inter_block_edges():
    d, n = 5, 18
    g = make_clique_ring(d, n)
    copies = n // (d + 1)
    block = lambda v: v // (d + 1)
    inter = sorted((min(v, int(w)), max(v, int(w)))
                   for v in range(n) for w in g.neighbors(v)
                   if v < w and block(v) != block(int(w)))
    # ring edge i: local 0 of copy i to local 1 of copy i+1
    expected = sorted(
        (min(c * (d + 1), ((c + 1) % copies) * (d + 1) + 1),
         max(c * (d + 1), ((c + 1) % copies) * (d + 1) + 1))
        for c in range(copies))
    assert inter == expected
    # blocks linked in a single cycle
    linked = {frozenset((block(a), block(b))) for a, b in inter}
    assert len(linked) == copies


def test_clique_ring_missing_internal_edge():
    g = make_clique_ring(5, 12)
    assert not g.has_edge(0, 1)  # designated pair in copy 0
    assert g.has_edge(0, 2) and g.has_edge(1, 2)


# -- edge-list parsing ------------------------------------------------------

def test_parse_edge_list_path():
    g = parse_edge_list("0 1\n1 2")
    assert g.n == 3 and g.n_edges == 2
    assert g.adjacency() == [[1], [0, 2], [1]]


def test_parse_edge_list_declared_count():
    g = parse_edge_list("n 4\n0 1")
    assert g.n == 4 and g.n_edges == 1
    assert g.degree(2) == 0 and g.degree(3) == 0


def test_parse_edge_list_comments_and_duplicates():
    g = parse_edge_list("# header\n0 1\n1 0  # same edge\n\n1 2\n")
    assert g.n == 3 and g.n_edges == 2


@pytest.mark.parametrize("text,fragment", [
    ("0 0", "line 1"),
    ("0 1\n2 -1", "line 2"),
    ("0 1\nx y", "line 2"),
    ("0 1 2", "line 1"),
    ("n 2\n0 5", "exceeds"),
])
def test_parse_edge_list_rejections(text, fragment):
    with pytest.raises(GraphError) as err:
        parse_edge_list(text)
    assert fragment in str(err.value)


def test_named_graph_from_file(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("0 1\n1 2\n2 0\n")
    g = make_named_graph(f"file:{path}")
    assert g.n == 3 and g.n_edges == 3
    assert g.label == f"file:{path}"


# -- measurements -----------------------------------------------------------

def test_bfs_path_and_disconnected():
    assert bfs_distances(make_path(5), 0) == [0, 1, 2, 3, 4]
    g = Graph(2, [])
    assert bfs_distances(g, 0) == [0, INFINITE]
    assert diameter(g) == INFINITE
    assert not is_connected(g)


def test_bfs_hypercube_popcount_from_zero():
    g = make_hypercube(3)
    assert bfs_distances(g, 0) == [bin(v).count("1") for v in range(8)]


def test_diameter_examples():
    assert diameter(make_complete(6)) == 1
    assert diameter(make_grid(3, 7)) == (3 - 1) + (7 - 1)
    g = make_clique_ring(5, 30)
    assert diameter(g) <= 3 * 30 / 6


def test_eccentricity_grid_corner():
    g = make_grid(4, 5)
    assert eccentricity(g, 0) == 3 + 4


def test_edge_boundary_hypercube():
    g = make_hypercube(3)
    assert edge_boundary(g, {0}) == 3
    assert edge_boundary(g, set(range(8))) == 0
    assert edge_boundary(g, {0, 1}) == 4
    assert edge_boundary(g, {0, 1}) >= 2 * (3 - math.log2(2))


def test_edge_boundary_validates_range():
    with pytest.raises(GraphError):
        edge_boundary(make_path(3), {5})


@pytest.mark.parametrize("dim", [2, 3])
def test_isoperimetric_exhaustive_small(dim):
    g = make_hypercube(dim)
    n = g.n
    for mask in range(1, 1 << n):
        s = [v for v in range(n) if mask >> v & 1]
        bound = len(s) * (dim - math.log2(len(s)))
        assert edge_boundary(g, s) >= bound - 1e-9


def test_graphs_are_immutable():
    g = make_path(3)
    with pytest.raises(ValueError):
        g.indices[0] = 2
