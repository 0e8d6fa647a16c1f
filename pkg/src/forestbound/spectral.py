"""Graph matrices, clustered spectra, and exact eigenvalue multiplicities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from . import exact
from .eigen import eigh_checked
from .graph import Graph, VertexSet

KINDS = ("laplacian", "normalized-laplacian", "adjacency")


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class GraphMatrix:
    kind: str
    entries: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2)) if self.n else 0.0


@dataclass
class SpectrumReport:
    kind: str
    eigenvalues: list[float]
    clusters: list[tuple[float, int]]
    tau: float
    exact_entries: list[tuple[Fraction, int]] = field(default_factory=list)

    @property
    def distinct(self) -> int:
        return len(self.clusters)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "tau": self.tau,
            "eigenvalues": self.eigenvalues,
            "clusters": [{"value": v, "multiplicity": m} for v, m in self.clusters],
            "exact": [{"value": str(v), "multiplicity": m} for v, m in self.exact_entries],
        }


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise SpectralError(f"unknown matrix kind {kind!r}; expected one of {KINDS}")


def build_matrix(g: Graph, kind: str) -> GraphMatrix:
    """``L = D - A``, ``I - D^-1/2 A D^-1/2`` or ``A``."""
    _check_kind(kind)
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1.0
    deg = a.sum(axis=1)
    if kind == "adjacency":
        return GraphMatrix(kind, a)
    if kind == "laplacian":
        return GraphMatrix(kind, np.diag(deg) - a)
    if np.any(deg == 0):
        iso = [int(v) for v in np.flatnonzero(deg == 0)]
        raise SpectralError(f"normalized Laplacian undefined on isolated vertices {iso}")
    s = 1.0 / np.sqrt(deg)
    return GraphMatrix(kind, np.eye(g.n) - s[:, None] * a * s[None, :])


def default_tau(m: GraphMatrix) -> float:
    return 1e-6 * max(1.0, m.norm())


def cluster(values: Sequence[float], tau: float) -> list[tuple[float, int]]:
    """Single-linkage grouping of sorted values with gap threshold ``tau``."""
    groups: list[list[float]] = []
    for x in sorted(values):
        if groups and x - groups[-1][-1] <= tau:
            groups[-1].append(x)
        else:
            groups.append([x])
    return [(float(np.mean(g)), len(g)) for g in groups]


def spectrum(m: GraphMatrix, tau: float | None = None) -> SpectrumReport:
    if tau is None:
        tau = default_tau(m)
    if tau <= 0:
        raise SpectralError("tau must be positive")
    w, _ = eigh_checked(m.entries)
    vals = [float(x) for x in w]
    return SpectrumReport(m.kind, vals, cluster(vals, tau), tau)


# --- exact arithmetic -----------------------------------------------------


def _exact_sqrt(q: int) -> int | None:
    r = isqrt(q)
    return r if r * r == q else None


def exact_matrix(g: Graph, kind: str) -> list[list[Fraction]]:
    """Rational entries of the requested matrix, or :class:`SpectralError`.

    The normalized Laplacian is rational only when ``deg u * deg v`` is a
    perfect square along every edge.
    """
    _check_kind(kind)
    n = g.n
    deg = g.degrees()
    m = [[Fraction(0)] * n for _ in range(n)]
    if kind == "adjacency":
        for u, v in g.edges:
            m[u][v] = m[v][u] = Fraction(1)
        return m
    if kind == "laplacian":
        for u, v in g.edges:
            m[u][v] = m[v][u] = Fraction(-1)
        for v in range(n):
            m[v][v] = Fraction(deg[v])
        return m
    if 0 in deg:
        raise SpectralError("normalized Laplacian undefined on isolated vertices")
    for v in range(n):
        m[v][v] = Fraction(1)
    for u, v in g.edges:
        root = _exact_sqrt(deg[u] * deg[v])
        if root is None:
            raise SpectralError(
                f"normalized Laplacian entry at ({u}, {v}) is irrational (deg product {deg[u] * deg[v]})"
            )
        m[u][v] = m[v][u] = Fraction(-1, root)
    return m


def has_rational_entries(g: Graph, kind: str) -> bool:
    try:
        exact_matrix(g, kind)
    except SpectralError:
        return False
    return True


def shifted(m: Sequence[Sequence[Fraction]], lam: Fraction) -> list[list[Fraction]]:
    return [[x - lam if i == j else x for j, x in enumerate(row)] for i, row in enumerate(m)]


def exact_multiplicity(g: Graph, kind: str, lam) -> int:
    """Nullity of ``M - lam*I`` over the rationals."""
    lam = Fraction(lam)
    return g.n - exact.rank(shifted(exact_matrix(g, kind), lam))


def exact_eigenspace(g: Graph, kind: str, lam) -> list[list[Fraction]]:
    return exact.nullspace(shifted(exact_matrix(g, kind), Fraction(lam)), g.n)


def rational_candidates(value: float, tau: float, max_denominator: int = 64) -> list[Fraction]:
    """Nearby small-denominator rationals worth testing exactly."""
    out = []
    near = Fraction(value).limit_denominator(max_denominator)
    if abs(float(near) - value) <= tau:
        out.append(near)
    k = Fraction(round(value))
    if k not in out and abs(float(k) - value) <= tau:
        out.append(k)
    return out


def exact_refinement(g: Graph, report: SpectrumReport) -> list[tuple[Fraction, int]]:
    """Exact multiplicities for every cluster that sits on a rational eigenvalue."""
    if not has_rational_entries(g, report.kind):
        return []
    mat = exact_matrix(g, report.kind)
    found = []
    for value, _ in report.clusters:
        for cand in rational_candidates(value, report.tau):
            mult = g.n - exact.rank(shifted(mat, cand))
            if mult > 0:
                found.append((cand, mult))
                break
    return found


def graph_spectrum(g: Graph, kind: str, tau: float | None = None, refine: bool = True) -> SpectrumReport:
    rep = spectrum(build_matrix(g, kind), tau)
    if refine:
        rep.exact_entries = exact_refinement(g, rep)
    return rep


def free_coordinates(basis: Sequence[Sequence]) -> VertexSet:
    """Lexicographically first coordinate set on which the span projects injectively.

    For a basis of a subspace ``X``, the returned index set ``A`` has
    ``|A| = dim X`` and fixing ``x_A`` pins down the whole vector.
    """
    rows = [[Fraction(x) for x in r] for r in basis]
    if not rows:
        return ()
    k = len(rows)
    if exact.rank(rows) != k:
        raise SpectralError("basis rows are linearly dependent")
    _, pivots = exact.rref(rows)
    cols = tuple(pivots)
    sub = [[r[c] for c in cols] for r in rows]
    if exact.rank(sub) != k:
        raise AssertionError("selected columns are not independent")
    return cols
