import networkx as nx
import pytest

from forestbound import exact
from forestbound.forest import SearchBudget
from forestbound.graph import Graph, complete, cycle, erdos_renyi, grid, ladder, path, star
from forestbound.homology import (
    CycleError,
    OrientedCycle,
    cycle_forest_bound,
    cycle_forest_value,
    cycle_from_walk,
    cycle_intersection_graph,
    fundamental_cycle_basis,
    homology_dims,
    in_kernel,
    incidence,
    is_edge_simple_cycle,
    search_cycle_forest,
)

from conftest import corpus_sources
from forestbound.graphio import parse_graph


def test_k2_incidence():
    assert incidence(path(2)).entries == ((-1,), (1,))


def test_incidence_ranks():
    assert incidence(cycle(3)).rank() == 2
    assert incidence(star(10)).rank() == 9


def test_incidence_columns():
    b = incidence(complete(5))
    for col in b.transpose():
        assert sorted(col) == [-1] + [0] * 3 + [1]


@pytest.mark.parametrize("g,dims", [(star(6), (1, 0)), (path(4), (1, 0)), (cycle(5), (1, 1)), (grid(2, 4), (1, 3))])
def test_homology_dims(g, dims):
    assert homology_dims(g) == dims


def test_disconnected_dims():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert homology_dims(g) == (3, 2)


def test_tree_has_no_cycles():
    assert fundamental_cycle_basis(star(7)) == []


@pytest.mark.parametrize("n", [3, 4, 7])
def test_cycle_graph_basis(n):
    (c,) = fundamental_cycle_basis(cycle(n))
    assert len(c) == n and in_kernel(cycle(n), c.vector)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_ladder_basis_is_squares(m):
    g = ladder(m)
    basis = fundamental_cycle_basis(g)
    assert len(basis) == m
    assert all(len(c) == 4 and in_kernel(g, c.vector) for c in basis)
    inter, counts = cycle_intersection_graph(basis)
    assert nx.is_isomorphic(nx.Graph(list(inter.edges)), nx.path_graph(m)) if m > 1 else inter.m == 0
    assert all(k in (0, 1) for k in counts.values())


def test_walk_is_closed_trail():
    g = grid(2, 4)
    for c in fundamental_cycle_basis(g):
        assert c.walk[0] == c.walk[-1]
        assert cycle_from_walk(g, c.walk).vector == c.vector


def test_cycle_from_walk_errors():
    with pytest.raises(CycleError):
        cycle_from_walk(path(3), [0, 2, 1])
    with pytest.raises(CycleError):
        cycle_from_walk(complete(3), [0, 1, 0, 1])


def test_orientation_sign():
    c = cycle_from_walk(cycle(3), [0, 1, 2])
    # edges (0,1), (0,2), (1,2): 0->1 forward, 2->0 backward, 1->2 forward
    assert c.vector == (1, -1, 1)


def test_edge_simple_predicate():
    g = complete(4)
    assert is_edge_simple_cycle(g, cycle_from_walk(g, [0, 1, 2]).vector)
    assert not is_edge_simple_cycle(g, (0,) * 6)
    assert not is_edge_simple_cycle(g, (1, 0, 0, 0, 0, 0))
    assert not is_edge_simple_cycle(g, (2, -2, 0, 2, 0, 0))


def test_disjoint_triangles_do_not_intersect():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    inter, counts = cycle_intersection_graph(fundamental_cycle_basis(g))
    assert inter.m == 0 and counts == {(0, 1): 0}


def test_two_shared_edges_rejected():
    g = complete(4)
    a = cycle_from_walk(g, [0, 1, 2, 3])
    b = cycle_from_walk(g, [0, 1, 2])
    _, counts = cycle_intersection_graph([a, b])
    assert counts[(0, 1)] == 2
    with pytest.raises(CycleError) as err:
        cycle_forest_bound(g, [a, b])
    assert err.value.pair == (0, 1)


def test_reversed_orientation_still_shares():
    g = grid(2, 3)
    a, b = fundamental_cycle_basis(g)
    rev = OrientedCycle(tuple(-x for x in b.vector))
    _, counts = cycle_intersection_graph([a, rev])
    assert counts[(0, 1)] == 1


def test_bound_arithmetic():
    assert cycle_forest_value(1, 12, 8, 2) == 7


@pytest.mark.parametrize("m", range(2, 7))
def test_ladder_bound(m):
    g = ladder(m)
    cert = cycle_forest_bound(g, fundamental_cycle_basis(g))
    assert (cert.h0, cert.h1) == (1, m)
    assert len(cert.leaf_selection) == 1
    assert cert.bound == 2


def test_single_cycle_rejected():
    with pytest.raises(CycleError, match="isolated vertex"):
        cycle_forest_bound(cycle(5), fundamental_cycle_basis(cycle(5)))


def test_cyclic_intersection_rejected():
    # three triangles around a common vertex pairwise share an edge in K_4
    g = complete(4)
    cycles = [cycle_from_walk(g, w) for w in ([0, 1, 2], [0, 2, 3], [0, 3, 1])]
    with pytest.raises(CycleError, match="contains a cycle"):
        cycle_forest_bound(g, cycles)


def test_search_ladder():
    cert = search_cycle_forest(ladder(4))
    assert cert is not None and cert.bound == 2


def test_search_none_without_cycles():
    assert search_cycle_forest(star(5)) is None
    assert search_cycle_forest(cycle(6)) is None


@pytest.mark.parametrize("seed", range(10))
def test_search_bound_below_homology(seed):
    g = erdos_renyi(10, 0.35, seed)
    h0, h1 = homology_dims(g)
    cert = search_cycle_forest(g, SearchBudget(node_limit=200_000))
    if cert is not None:
        assert cert.bound <= h0 + h1 - 1
        for c in cert.cycles:
            assert is_edge_simple_cycle(g, c.vector)


@pytest.mark.parametrize("src", corpus_sources())
def test_rank_nullity_on_corpus(src):
    g = parse_graph(src)
    h0, h1 = homology_dims(g)
    b = [list(r) for r in incidence(g).entries]
    r = exact.rank(b) if g.m else 0
    assert r + h1 == g.m
    assert r + h0 == g.n
    basis = fundamental_cycle_basis(g)
    assert len(basis) == h1
    assert all(in_kernel(g, c.vector) for c in basis)
