import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus
import oracles
from nbwalk import graph as gr
from nbwalk.errors import (
    Asymmetric,
    DuplicateEdge,
    GenerationTimeout,
    InfeasibleDegree,
    NonRegular,
    SelfLoop,
)


def test_from_adjacency_k4():
    g = gr.from_adjacency(oracles.complete_lists(4))
    assert (g.n, g.d) == (4, 3)
    assert g.adjacency_lists() == [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]]


def test_from_adjacency_sorts_rows():
    g = gr.from_adjacency([[3, 1, 2], [2, 0, 3], [1, 3, 0], [0, 2, 1]])
    assert g.adjacency_lists() == oracles.complete_lists(4)


@pytest.mark.parametrize(
    "lists, error, vertex",
    [
        ([[1, 2, 3], [0, 2, 3], [0, 1], [0, 1, 2]], NonRegular, 2),
        ([[1, 2, 3], [2, 3, 2], [0, 1, 3], [0, 1, 2]], DuplicateEdge, 1),
        ([[1, 2, 2], [0, 2, 3], [0, 1, 3], [1, 2, 3]], DuplicateEdge, 0),
        ([[0, 1, 2], [0, 2, 3], [0, 1, 3], [1, 2, 3]], SelfLoop, 0),
    ],
)
def test_from_adjacency_rejects(lists, error, vertex):
    with pytest.raises(error) as info:
        gr.from_adjacency(lists)
    assert info.value.vertex == vertex


def test_from_adjacency_asymmetric():
    # vertex 0 lists 1, vertex 1 omits 0
    lists = [[1, 2], [2, 3], [0, 3], [1, 2]]
    with pytest.raises(Asymmetric):
        gr.from_adjacency(lists)


def test_complete_graph():
    k10 = gr.complete_graph(10)
    assert k10.d == 9 and k10.num_edges == 45
    assert gr.complete_graph(4).adjacency_lists() == oracles.complete_lists(4)
    with pytest.raises(InfeasibleDegree):
        gr.complete_graph(2)


def test_random_regular_basic():
    g = gr.random_regular(50, 3, 1, connected=True)
    assert (g.n, g.d) == (50, 3)
    assert gr.is_connected(g)
    # re-validate through the public constructor
    gr.from_adjacency(g.adjacency_lists())
    h = gr.random_regular(50, 3, 1, connected=True)
    assert np.array_equal(g.adj, h.adj)


@pytest.mark.parametrize("n, d", [(5, 3), (4, 4), (7, 5), (10, 2)])
def test_random_regular_infeasible(n, d):
    with pytest.raises(InfeasibleDegree):
        gr.random_regular(n, d, 0)


def test_random_regular_budget():
    with pytest.raises(GenerationTimeout):
        gr.random_regular(30, 9, 0, max_restarts=3)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(4, 40),
    d=st.integers(3, 5),
    seed=st.integers(0, 2**64 - 1),
)
def test_random_regular_invariants(n, d, seed):
    if (n * d) % 2 or d >= n:
        return
    g = gr.random_regular(n, d, seed)
    lists = g.adjacency_lists()
    assert all(len(r) == d and r == sorted(set(r)) and v not in r for v, r in enumerate(lists))
    assert all(v in lists[w] for v, r in enumerate(lists) for w in r)
    assert sum(len(r) for r in lists) == 2 * g.num_edges
    assert np.array_equal(g.adj, gr.random_regular(n, d, seed).adj)


def test_decorated_small():
    g = gr.cycle_decorated_expander(4, 4, 4, 7)
    assert (g.n, g.d) == (16, 4)
    assert gr.girth(g) <= 4


def test_decorated_six_vertices():
    # one 6-cycle plus a 2-regular layer avoiding it: the complement of a perfect matching
    g = gr.cycle_decorated_expander(1, 6, 4, 0)
    assert (g.n, g.d) == (6, 4)
    lists = g.adjacency_lists()
    missing = [sorted(set(range(6)) - set(r) - {v}) for v, r in enumerate(lists)]
    assert all(len(m) == 1 for m in missing)
    partner = [m[0] for m in missing]
    assert all(partner[partner[v]] == v for v in range(6))


@settings(max_examples=15, deadline=None)
@given(m=st.integers(2, 12), g=st.integers(3, 6), seed=st.integers(0, 2**32))
def test_decorated_cycles_present(m, g, seed):
    graph = gr.cycle_decorated_expander(m, g, 4, seed)
    assert graph.n == m * g
    for v in range(graph.n):
        nxt = graph.cycle_step(v, 1)
        assert nxt in graph.neighbors(v)
        assert graph.cycle_step(v, g) == v
        assert graph.cycle_id(nxt) == graph.cycle_id(v)


def test_decorated_infeasible():
    with pytest.raises(InfeasibleDegree):
        gr.cycle_decorated_expander(4, 4, 3, 0)


@pytest.mark.parametrize("name, expected", [("K4", 3), ("petersen", 5), ("C6", 6), ("cube", 4), ("K33", 4)])
def test_girth_known(name, expected):
    assert gr.girth(corpus.graph(name)) == expected


@pytest.mark.parametrize("name", corpus.SMALL)
def test_girth_matches_bruteforce(name):
    g = corpus.graph(name)
    assert gr.girth(g) == oracles.shortest_cycle_bruteforce(g.adjacency_lists())


@settings(max_examples=25, deadline=None)
@given(n=st.sampled_from([8, 10, 12]), seed=st.integers(0, 2**32))
def test_girth_random_vs_bruteforce(n, seed):
    g = gr.random_regular(n, 3, seed)
    assert gr.girth(g) == oracles.shortest_cycle_bruteforce(g.adjacency_lists())


def test_connectivity_and_bipartite():
    k4 = corpus.graph("K4")
    assert gr.is_connected(k4) and not gr.is_bipartite(k4)
    assert gr.is_bipartite(corpus.graph("C6"))
    assert not gr.is_connected(corpus.graph("2K3"))
    assert gr.component_count(corpus.graph("2K4")) == 2
    assert gr.is_bipartite(corpus.graph("cube")) and gr.is_bipartite(corpus.graph("K33"))
    assert not gr.is_bipartite(corpus.graph("petersen"))


def test_directed_edges(any_graph):
    g = any_graph
    e = np.arange(g.num_directed_edges)
    assert np.array_equal(g.reverse[g.reverse], e)
    assert np.array_equal(g.tails[g.reverse], g.heads)
    assert np.array_equal(g.heads[g.reverse], g.tails)
    for eid in (0, g.num_directed_edges - 1):
        t, h = g.edge_pair(eid)
        assert g.edge_id(t, h) == eid


def test_bfs_matches_oracle(any_graph):
    g = any_graph
    if g.n > 60:
        return
    dist = oracles.all_pairs_distances(g.adjacency_lists())
    for s in range(g.n):
        got = gr.bfs_distances(g, s)
        want = [-1 if math.isinf(x) else x for x in dist[s]]
        assert got.tolist() == want


def _check_spaced(g, spacing):
    s = gr.spaced_set(g, spacing)
    dist = oracles.all_pairs_distances(g.adjacency_lists())
    members = s.vertices
    assert all(dist[a][b] >= spacing for a in members for b in members if a != b)
    # maximal: every excluded vertex is within spacing - 1 of a member
    for v in set(range(g.n)) - set(members):
        assert min(dist[v][m] for m in members) <= spacing - 1
    bound = g.n / (1 + sum(g.d * (g.d - 1) ** i for i in range(spacing)))
    assert len(members) >= bound
    return members


def test_spaced_set_examples():
    assert _check_spaced(corpus.graph("petersen"), 1) == list(range(10))
    assert len(_check_spaced(corpus.graph("petersen"), 3)) >= 1
    assert _check_spaced(corpus.graph("K4"), 2) == [0]


@pytest.mark.parametrize("spacing", [1, 2, 3, 4])
@pytest.mark.parametrize("name", ["r50d3", "dec16", "cube", "r12d3"])
def test_spaced_set_properties(name, spacing):
    _check_spaced(corpus.graph(name), spacing)


def test_json_roundtrip(tmp_path, any_graph):
    path = tmp_path / "g.json"
    gr.write_graph(any_graph, path)
    text = path.read_text()
    back = gr.read_graph(path)
    assert np.array_equal(back.adj, any_graph.adj)
    assert gr.to_json(back) == text


def test_json_header_mismatch():
    with pytest.raises(NonRegular):
        gr.from_json('{"n": 5, "d": 3, "adj": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]]}')


def test_graph_is_read_only():
    g = corpus.graph("K4")
    with pytest.raises(ValueError):
        g.adj[0, 0] = 3


def test_relabel_preserves_structure():
    g = corpus.graph("r50d3")
    perm = np.random.default_rng(0).permutation(g.n)
    h = gr.relabeled(g, perm)
    assert gr.girth(h) == gr.girth(g)
    assert all(perm[w] in h.neighbors(perm[v]) for v in range(g.n) for w in g.neighbors(v))
