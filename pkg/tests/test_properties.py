"""Hypothesis properties across modules."""

import itertools

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from forestbound.determinacy import (
    FiniteRelationSet,
    TreeOrder,
    brute_force_completions,
    degree,
    tree_propagate,
)
from forestbound.forest import STRONG, WEAK, best_forest, revalidate
from forestbound.graph import Graph, components, induced, is_forest
from forestbound.graphio import parse_edge_list, to_edge_list
from forestbound.homology import fundamental_cycle_basis, homology_dims, in_kernel

SETTINGS = settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def relation_sets(draw, size=None):
    k = size if size is not None else draw(st.integers(1, 4))
    domains = [tuple(range(draw(st.integers(1, 3)))) for _ in range(k)]
    universe = list(itertools.product(*domains))
    pts = draw(st.lists(st.sampled_from(universe), max_size=len(universe), unique=True))
    return FiniteRelationSet.build(domains, pts)


@st.composite
def trees(draw, max_n=6):
    n = draw(st.integers(2, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return Graph.from_edges(n, [(p, v) for v, p in zip(range(1, n), parents)])


@SETTINGS
@given(graphs(), st.data())
def test_induced_has_no_outside_edges(g, data):
    s = data.draw(st.sets(st.integers(0, g.n - 1)))
    h = induced(g, s)
    assert all(u in s and v in s for u, v in h.edges)
    assert set(h.edges) == {(u, v) for u, v in g.edges if u in s and v in s}


@SETTINGS
@given(graphs())
def test_forest_iff_edge_count(g):
    c = len(components(g))
    assert is_forest(g).is_forest == (g.m == g.n - c)


@SETTINGS
@given(graphs())
def test_edge_list_round_trip(g):
    back = parse_edge_list(to_edge_list(g))
    assert back.n == g.n and back.edges == g.edges


@SETTINGS
@given(relation_sets(), st.data())
def test_enlarging_given_set_never_raises_degree(x, data):
    idx = st.sets(st.integers(0, x.size - 1))
    a, extra, c = data.draw(idx), data.draw(idx), data.draw(idx)
    assert degree(x, a | extra, c) <= degree(x, a, c)
    assert degree(x, a, c | extra) >= degree(x, a, c)


@SETTINGS
@given(trees(), st.data())
def test_tree_propagate_matches_brute_force(t, data):
    x = data.draw(relation_sets(size=t.n))
    root = data.draw(st.integers(0, t.n - 1))
    order = TreeOrder.rooted(t, range(t.n), root)
    if not x.points:
        return
    p = data.draw(st.sampled_from(sorted(x.points)))
    fixed = {v: p[v] for v in order.maximal}
    res = tree_propagate(x, order, fixed)
    assert res.completions == brute_force_completions(x, fixed, res.free)
    assert len(res.completions) <= res.enumerated <= res.bound


@SETTINGS
@given(graphs())
def test_certificates_revalidate_and_strong_not_worse(g):
    weak = best_forest(g, WEAK)
    strong = best_forest(g, STRONG)
    assert revalidate(g, weak) and revalidate(g, strong)
    assert strong.strong_bound <= weak.weak_bound


@SETTINGS
@given(graphs())
def test_basis_cycles_lie_in_kernel(g):
    basis = fundamental_cycle_basis(g)
    h0, h1 = homology_dims(g)
    assert len(basis) == h1
    assert all(in_kernel(g, c.vector) for c in basis)
