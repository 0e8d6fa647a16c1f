from fractions import Fraction

import numpy as np
import pytest

from forestbound import exact
from forestbound.graph import (
    Graph,
    complete,
    complete_bipartite,
    components,
    cycle,
    empty,
    erdos_renyi,
    path,
    petersen,
    star,
)
from forestbound.spectral import (
    KINDS,
    SpectralError,
    build_matrix,
    cluster,
    exact_eigenspace,
    exact_matrix,
    exact_multiplicity,
    free_coordinates,
    graph_spectrum,
    spectrum,
)


def clusters_of(g, kind, tau=1e-6):
    return [(round(v, 6), m) for v, m in spectrum(build_matrix(g, kind), tau).clusters]


def test_k2_laplacian():
    assert build_matrix(path(2), "laplacian").entries.tolist() == [[1, -1], [-1, 1]]


def test_star_laplacian_diagonal():
    d = np.diag(build_matrix(star(10), "laplacian").entries)
    assert d.tolist() == [9] + [1] * 9


def test_c3_adjacency():
    assert clusters_of(cycle(3), "adjacency") == [(-1.0, 2), (2.0, 1)]


def test_star_laplacian_clusters():
    assert clusters_of(star(10), "laplacian") == [(0.0, 1), (1.0, 8), (10.0, 1)]


def test_k4_laplacian_clusters():
    assert clusters_of(complete(4), "laplacian") == [(0.0, 1), (4.0, 3)]


def test_p2_adjacency_clusters():
    assert clusters_of(path(2), "adjacency") == [(-1.0, 1), (1.0, 1)]


def test_normalized_laplacian_rejects_isolated():
    with pytest.raises(SpectralError):
        build_matrix(Graph.from_edges(3, [(0, 1)]), "normalized-laplacian")


def test_unknown_kind():
    with pytest.raises(SpectralError):
        build_matrix(path(3), "signless")


def test_matrix_invariants():
    g = erdos_renyi(9, 0.5, 4)
    lap = build_matrix(g, "laplacian").entries
    assert np.allclose(lap.sum(axis=1), 0)
    adj = build_matrix(g, "adjacency").entries
    assert set(np.unique(adj)) <= {0.0, 1.0} and not np.diag(adj).any()
    nl = build_matrix(petersen(), "normalized-laplacian").entries
    assert np.allclose(np.diag(nl), 1) and np.allclose(nl, nl.T)


def test_exact_multiplicity_examples():
    assert exact_multiplicity(star(10), "laplacian", 1) == 8
    assert exact_multiplicity(complete(4), "adjacency", -1) == 3
    assert exact_multiplicity(star(10), "laplacian", Fraction(1, 2)) == 0


@pytest.mark.parametrize("g", [path(5), empty(4), Graph.from_edges(6, [(0, 1), (2, 3), (3, 4)]), petersen()])
def test_laplacian_kernel_counts_components(g):
    assert exact_multiplicity(g, "laplacian", 0) == len(components(g))


def test_normalized_exact_needs_rational_entries():
    # star(5): center degree 4, leaves 1, products 4 are squares
    assert exact_matrix(star(5), "normalized-laplacian")[0][1] == Fraction(-1, 2)
    assert exact_multiplicity(star(5), "normalized-laplacian", 1) == 3
    with pytest.raises(SpectralError):
        exact_matrix(star(4), "normalized-laplacian")


def test_tau_must_be_positive():
    with pytest.raises(SpectralError):
        spectrum(build_matrix(path(3), "laplacian"), 0.0)


def test_cluster_separation():
    groups = cluster([0.0, 1e-8, 0.5, 0.5 + 2e-7, 2.0], 1e-6)
    assert [m for _, m in groups] == [2, 2, 1]


@pytest.mark.parametrize(
    "g,lam",
    [(star(n), n) for n in (5, 17, 50)]
    + [(star(n), 1) for n in (5, 17, 50)]
    + [(complete(n), n) for n in (3, 11, 40)]
    + [(complete_bipartite(a, b), lam) for a, b in ((3, 4), (7, 2), (20, 25)) for lam in (a, b, a + b)],
)
def test_float_and_exact_multiplicities_agree(g, lam):
    rep = graph_spectrum(g, "laplacian")
    near = [m for v, m in rep.clusters if abs(v - lam) <= rep.tau]
    assert sum(near) == exact_multiplicity(g, "laplacian", lam)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("seed", range(6))
def test_spectrum_invariants(kind, seed):
    g = erdos_renyi(11, 0.45, seed)
    if kind == "normalized-laplacian" and 0 in g.degrees():
        pytest.skip("isolated vertex")
    m = build_matrix(g, kind)
    rep = spectrum(m)
    assert sum(k for _, k in rep.clusters) == g.n
    norm = m.norm()
    assert abs(sum(rep.eigenvalues) - np.trace(m.entries)) <= 1e-8 * g.n * max(norm, 1)
    reps = [v for v, _ in rep.clusters]
    assert all(b - a > rep.tau for a, b in zip(reps, reps[1:]))
    if kind != "adjacency":
        assert min(rep.eigenvalues) >= -1e-8 * max(norm, 1)


def test_exact_entries_recorded():
    rep = graph_spectrum(star(10), "laplacian")
    assert rep.exact_entries == [(0, 1), (1, 8), (10, 1)]


def test_free_coordinates_identity():
    assert free_coordinates([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (0, 1, 2)


def test_free_coordinates_lexicographic():
    assert free_coordinates([[1, 1, 0], [0, 0, 1]]) == (0, 2)


def test_free_coordinates_rejects_dependent_rows():
    with pytest.raises(SpectralError):
        free_coordinates([[1, 2], [2, 4]])


def test_free_coordinates_star_eigenspace():
    basis = exact_eigenspace(star(10), "laplacian", 1)
    a = free_coordinates(basis)
    assert len(a) == 8
    assert 0 not in a
    sub = [[row[c] for c in a] for row in basis]
    assert exact.rank(sub) == 8
