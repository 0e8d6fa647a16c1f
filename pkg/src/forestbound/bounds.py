"""Spectral corollaries of the forest bound, checked against actual spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .forest import (
    STRONG,
    WEAK,
    ForestCertificate,
    SearchBudget,
    best_forest,
    largest_induced_complete_binary_tree,
    longest_induced_path,
    max_independent_set,
)
from .graph import Graph, GraphError, is_forest
from .spectral import KINDS, SpectralError, SpectrumReport, exact_multiplicity, graph_spectrum


def eligibility(g: Graph, kind: str, lam, tau: float | None = None) -> bool:
    """Whether the strong (isolated-vertex) bound may be applied to ``lam``.

    Exact comparison for rationals; for floats, ``lam`` within ``tau`` of an
    excluded value counts as equal.
    """
    if kind == "laplacian":
        excluded = set(g.degrees())
    elif kind == "normalized-laplacian":
        excluded = {1}
    elif kind == "adjacency":
        excluded = {0}
    else:
        raise SpectralError(f"unknown kind {kind!r}")
    if isinstance(lam, (int, Fraction)):
        return Fraction(lam) not in {Fraction(e) for e in excluded}
    t = 0.0 if tau is None else tau
    return all(abs(float(lam) - e) > t for e in excluded)


@dataclass
class EigenRow:
    value: float
    exact: Fraction | None
    mult: int
    weak_bound: int
    strong_bound: int
    eligible_strong: bool
    float_mult: int

    @property
    def applicable_bound(self) -> int:
        return min(self.weak_bound, self.strong_bound) if self.eligible_strong else self.weak_bound

    @property
    def sound(self) -> bool:
        return self.mult <= self.applicable_bound

    @property
    def tight(self) -> bool:
        return self.applicable_bound - self.mult == 0

    def to_json(self) -> dict:
        return {
            "lambda": self.value,
            "exact": None if self.exact is None else str(self.exact),
            "mult": self.mult,
            "weak_bound": self.weak_bound,
            "strong_bound": self.strong_bound if self.eligible_strong else None,
            "strong_bound_computed": self.strong_bound,
            "eligible_strong": self.eligible_strong,
            "bound": self.applicable_bound,
            "tight": self.tight,
            "sound": self.sound,
        }


@dataclass
class BoundReport:
    graph_id: str
    kind: str
    n: int
    rows: list[EigenRow]
    weak: ForestCertificate
    strong: ForestCertificate
    spectrum: SpectrumReport
    mismatches: list[str] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return all(r.sound for r in self.rows) and not self.mismatches

    @property
    def distinct(self) -> int:
        return len(self.rows)

    def row(self, lam) -> EigenRow:
        lam = float(lam)
        return min(self.rows, key=lambda r: abs(r.value - lam))

    def to_json(self) -> dict:
        return {
            "graph": self.graph_id,
            "kind": self.kind,
            "n": self.n,
            "tau": self.spectrum.tau,
            "weak_certificate": self.weak.to_json(),
            "strong_certificate": self.strong.to_json(),
            "rows": [r.to_json() for r in self.rows],
            "sound": self.sound,
            "mismatches": self.mismatches,
        }


def multiplicity_bounds(
    g: Graph,
    kind: str,
    budget: SearchBudget | None = None,
    tau: float | None = None,
    graph_id: str = "",
    weak: ForestCertificate | None = None,
    strong: ForestCertificate | None = None,
) -> BoundReport:
    """Per-eigenvalue multiplicity against the weak and (eligible) strong bound.

    Multiplicities are exact whenever the eigenvalue is rational, otherwise
    they come from tau-clustering of the floating spectrum.  One weak and one
    strong certificate are shared by all eigenvalues.
    """
    rep = graph_spectrum(g, kind, tau)
    weak = weak or best_forest(g, WEAK, budget)
    strong = strong or best_forest(g, STRONG, budget)
    exact_by_cluster = {}
    for lam, mult in rep.exact_entries:
        exact_by_cluster[lam] = mult
    rows = []
    mismatches = []
    for value, fmult in rep.clusters:
        ex = next((lam for lam in exact_by_cluster if abs(float(lam) - value) <= rep.tau), None)
        mult = exact_by_cluster[ex] if ex is not None else fmult
        if ex is not None and mult != fmult:
            mismatches.append(f"lambda={ex}: clustered multiplicity {fmult} != exact {mult}")
        elig = eligibility(g, kind, ex) if ex is not None else eligibility(g, kind, value, rep.tau)
        rows.append(EigenRow(value, ex, mult, weak.weak_bound, strong.strong_bound, elig, fmult))
    return BoundReport(graph_id, kind, g.n, rows, weak, strong, rep, mismatches)


@dataclass
class DistinctCount:
    epsilon: Fraction
    lower_bound: int | None
    actual: int
    holds: bool
    vacuous: bool


def distinct_count_bound(g: Graph, kind: str, cert: ForestCertificate, tau: float | None = None) -> DistinctCount:
    """Lower bound ``ceil(1 / (1 - eps))`` on the number of distinct eigenvalues.

    ``eps = (|F| - l(F) + c(F)) / |G|`` for the non-isolated part of ``cert``.
    """
    eps = Fraction(cert.epsilon_numerator, g.n)
    actual = graph_spectrum(g, kind, tau, refine=False).distinct
    if not 0 < eps < 1:
        return DistinctCount(eps, None, actual, True, True)
    lb = math.ceil(1 / (1 - eps))
    return DistinctCount(eps, lb, actual, actual >= lb, False)


@dataclass
class StructuralRow:
    name: str
    lhs: int
    rhs: float
    holds: bool
    tight: bool
    applicable: bool = True
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "tight": self.tight,
            "applicable": self.applicable,
            **self.detail,
        }


def available_kinds(g: Graph) -> list[str]:
    """Matrix kinds defined on ``g``; the normalized Laplacian needs no isolated vertices."""
    return [k for k in KINDS if k != "normalized-laplacian" or min(g.degrees()) > 0]


def structural_bounds(g: Graph, budget: SearchBudget | None = None, tau: float | None = None) -> list[StructuralRow]:
    """Induced path, induced complete binary tree, and independence corollaries.

    The binary-tree inequality is derived from a forest without isolated
    vertices, so it is only applicable when the tree has depth at least 2.
    """
    max_mult = 0
    max_elig = 0
    elig_at = None
    for kind in available_kinds(g):
        rep = multiplicity_bounds(g, kind, budget, tau)
        for r in rep.rows:
            max_mult = max(max_mult, r.mult)
            if r.eligible_strong and r.mult > max_elig:
                max_elig, elig_at = r.mult, (kind, r.exact if r.exact is not None else r.value)
    n = g.n
    rows = []

    k_path = longest_induced_path(g, budget).value
    rhs = 1 + n - max_mult
    rows.append(StructuralRow("induced-path", k_path, rhs, k_path <= rhs, k_path == rhs,
                              detail={"max_mult": max_mult}))

    k_tree = largest_induced_complete_binary_tree(g, budget).value
    room = n - max_mult
    if k_tree >= 2:
        holds = 2 ** (k_tree - 1) <= room
        tight = 2 ** (k_tree - 1) == room
        rhs_tree = 1 + math.log2(room) if room > 0 else -math.inf
        rows.append(StructuralRow("induced-binary-tree", k_tree, rhs_tree, holds, tight,
                                  detail={"max_mult": max_mult}))
    else:
        rows.append(StructuralRow("induced-binary-tree", k_tree, math.nan, True, False, applicable=False,
                                  detail={"max_mult": max_mult}))

    alpha = max_independent_set(g, budget).value
    rhs_alpha = n - max_elig
    rows.append(StructuralRow("independent-set", alpha, rhs_alpha, alpha <= rhs_alpha, alpha == rhs_alpha,
                              applicable=elig_at is not None,
                              detail={"eligible_mult": max_elig,
                                      "at": None if elig_at is None else [elig_at[0], str(elig_at[1])]}))
    return rows


def star_counterexample(n: int, budget: SearchBudget | None = None) -> dict:
    """For the star, ``mult(1) + alpha = 2n - 3 > n``: the eligibility rule is needed."""
    from .graph import star

    g = star(n)
    mult1 = exact_multiplicity(g, "laplacian", 1)
    alpha = max_independent_set(g, budget).value
    rep = multiplicity_bounds(g, "laplacian", budget)
    row = rep.row(1)
    return {
        "n": n,
        "mult1": mult1,
        "alpha": alpha,
        "sum": mult1 + alpha,
        "exceeds_n": mult1 + alpha > n,
        "strong_skipped": not row.eligible_strong,
        "strong_bound": rep.strong.strong_bound,
    }


def tree_corollary_check(t: Graph, tau: float | None = None) -> dict:
    """Every eigenvalue of every matrix kind has multiplicity at most ``l(T) - 1``."""
    summary = is_forest(t)
    if t.n < 2 or not summary.is_forest or summary.n_components != 1:
        raise GraphError("tree corollary needs a tree with at least 2 vertices")
    limit = len(summary.leaves) - 1
    worst = {}
    for kind in KINDS:
        rep = graph_spectrum(t, kind, tau)
        exact = {float(lam): m for lam, m in rep.exact_entries}
        mults = []
        for value, fm in rep.clusters:
            m = next((em for ev, em in exact.items() if abs(ev - value) <= rep.tau), fm)
            mults.append(m)
        worst[kind] = max(mults)
    return {"leaves": len(summary.leaves), "limit": limit, "max_mult": worst,
            "passed": all(m <= limit for m in worst.values())}

