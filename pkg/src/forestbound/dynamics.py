"""Coupled-oscillator networks: vector field, equilibria, kernel dimensions.

The field is ``xdot_v = omega_v + sum_{w in N(v)} f_{vw}(x_w - x_v)``, with
``f`` odd.  Couplings come from a closed catalog so the fiber bound ``d``
(maximum preimage count) is known: ``K sin`` on the circle has ``d = 2``,
an odd polynomial of degree ``p`` on the line has ``d = p``.
"""

from __future__ import annotations

import math
import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .forest import SearchBudget, best_forest
from .graph import Graph, components
from .homology import incidence, search_cycle_forest

LINE, CIRCLE = "line", "circle"
TWO_PI = 2.0 * math.pi


class CouplingError(ValueError):
    pass


@dataclass(frozen=True)
class SinCoupling:
    gain: float = 1.0

    space = CIRCLE

    @property
    def fiber_bound(self) -> int:
        return 2

    def __call__(self, y):
        return self.gain * np.sin(y)

    def derivative(self, y):
        return self.gain * np.cos(y)

    def spec(self) -> str:
        return f"sin:K={self.gain:g}"


@dataclass(frozen=True)
class OddPolynomialCoupling:
    """``p(y) = c1*y + c2*y^2 + ...``; even-power coefficients must vanish."""

    coefficients: tuple[float, ...]

    space = LINE

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if not coeffs:
            raise CouplingError("polynomial coupling must be non-constant")
        if len(coeffs) > 9:
            raise CouplingError("polynomial degree above 9 is outside the catalog")
        if any(c != 0.0 for c in coeffs[1::2]):
            raise CouplingError("coupling polynomial must be odd (even powers zero)")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @property
    def fiber_bound(self) -> int:
        return self.degree

    def _poly(self) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial((0.0,) + self.coefficients)

    def __call__(self, y):
        return self._poly()(y)

    def derivative(self, y):
        return self._poly().deriv()(y)

    def spec(self) -> str:
        return "poly:" + ",".join(f"{c:g}" for c in self.coefficients)


Coupling = SinCoupling | OddPolynomialCoupling


def parse_coupling(text: str) -> Coupling:
    """``sin:K=1.5`` or ``poly:1,0,-1`` (coefficients of y, y^2, y^3, ...)."""
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    if name == "sin":
        gain = 1.0
        if rest:
            key, _, val = rest.partition("=")
            gain = float(val if val else key)
        if gain <= 0:
            raise CouplingError("sin gain must be positive")
        return SinCoupling(gain)
    if name in ("poly", "polynomial"):
        try:
            coeffs = tuple(float(c) for c in rest.split(","))
        except ValueError as exc:
            raise CouplingError(f"malformed polynomial {rest!r}") from exc
        return OddPolynomialCoupling(coeffs)
    if name == "cubic":
        return OddPolynomialCoupling((1.0, 0.0, float(rest) if rest else -1.0))
    raise CouplingError(f"unknown coupling {text!r}")


def check_odd(f: Coupling, samples: int = 64, seed: int = 0) -> bool:
    y = np.random.default_rng(seed).uniform(-3.0, 3.0, samples)
    return bool(np.allclose(f(-y), -f(y), rtol=0, atol=1e-12 * max(1.0, float(np.abs(f(y)).max()))))


@dataclass
class NetworkSystem:
    graph: Graph
    couplings: tuple[Coupling, ...]
    omega: np.ndarray
    space: str

    def __post_init__(self) -> None:
        if len(self.couplings) != self.graph.m:
            raise CouplingError(f"need one coupling per edge ({self.graph.m}), got {len(self.couplings)}")
        for f in self.couplings:
            if f.space != self.space:
                raise CouplingError(f"{f.spec()} is not admissible on the {self.space}")
            if not check_odd(f):
                raise CouplingError(f"{f.spec()} is not odd")
        self.omega = np.asarray(self.omega, dtype=float)
        if self.omega.shape != (self.graph.n,):
            raise CouplingError("omega must have one entry per vertex")
        self._b = np.array(incidence(self.graph).entries, dtype=float).reshape(self.graph.n, self.graph.m)
        self._tail = np.array([u for u, _ in self.graph.edges], dtype=int)
        self._head = np.array([v for _, v in self.graph.edges], dtype=int)

    @classmethod
    def uniform(cls, g: Graph, coupling: Coupling, omega: Sequence[float] | None = None) -> "NetworkSystem":
        om = np.zeros(g.n) if omega is None else np.asarray(omega, dtype=float)
        return cls(g, tuple(coupling for _ in g.edges), om, coupling.space)

    @property
    def fiber_bound(self) -> int:
        return max((f.fiber_bound for f in self.couplings), default=1)

    def edge_differences(self, x: np.ndarray) -> np.ndarray:
        """``B^t x``: head minus tail along every edge."""
        return x[self._head] - x[self._tail]

    def _apply(self, y: np.ndarray, deriv: bool = False) -> np.ndarray:
        if len(set(self.couplings)) <= 1 and self.couplings:
            f = self.couplings[0]
            return f.derivative(y) if deriv else f(y)
        return np.array([(f.derivative(t) if deriv else f(t)) for f, t in zip(self.couplings, y)])


def field_vertex_sum(sys: NetworkSystem, x: np.ndarray) -> np.ndarray:
    g = sys.graph
    out = sys.omega.copy()
    idx = g.edge_index()
    for v in range(g.n):
        for w in g.adjacency[v]:
            f = sys.couplings[idx[(min(v, w), max(v, w))]]
            out[v] += f(x[w] - x[v])
    return out


def field_incidence(sys: NetworkSystem, x: np.ndarray) -> np.ndarray:
    if sys.graph.m == 0:
        return sys.omega.copy()
    return sys.omega - sys._b @ sys._apply(sys.edge_differences(x))


def field(sys: NetworkSystem, x: Sequence[float], cross_check: bool = True) -> np.ndarray:
    """Velocity at ``x``; optionally checks the sum and matrix forms agree."""
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.graph.n,):
        raise ValueError(f"state must have {sys.graph.n} entries")
    fast = field_incidence(sys, x)
    if cross_check:
        slow = field_vertex_sum(sys, x)
        scale = max(1.0, float(np.abs(slow).max(initial=0.0)))
        if np.abs(fast - slow).max(initial=0.0) > 1e-12 * scale:
            raise AssertionError("vertex-sum and incidence forms of the field disagree")
    return fast


def jacobian(sys: NetworkSystem, x: Sequence[float]) -> np.ndarray:
    """``-B diag(f'(B^t x)) B^t``, a negated weighted Laplacian."""
    x = np.asarray(x, dtype=float)
    if sys.graph.m == 0:
        return np.zeros((sys.graph.n, sys.graph.n))
    w = sys._apply(sys.edge_differences(x), deriv=True)
    return -(sys._b * w) @ sys._b.T


def finite_difference_jacobian(sys: NetworkSystem, x: Sequence[float], step: float = 1e-5) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = step
        out[:, j] = (field(sys, x + e, False) - field(sys, x - e, False)) / (2 * step)
    return out


@dataclass
class KernelEstimate:
    dim: int
    gap_ratio: float
    singular_values: list[float]

    @property
    def clean(self) -> bool:
        return self.gap_ratio >= 1e3


def kernel_dimension(j: np.ndarray, rel_threshold: float = 1e-6, scale: float = 0.0) -> KernelEstimate:
    """Numerical nullity: singular values below ``rel_threshold * max(sigma_max, scale)``.

    ``scale`` is a reference magnitude for matrices that may vanish
    entirely.  The gap ratio is the smallest retained singular value over
    the largest discarded one (infinite when either side is empty or zero).
    """
    s = np.linalg.svd(j, compute_uv=False)
    ref = max(float(s.max(initial=0.0)), scale)
    if ref == 0.0:
        return KernelEstimate(len(s), math.inf, [float(v) for v in s])
    small = s < rel_threshold * ref
    dim = int(small.sum())
    kept = s[~small]
    dropped = s[small]
    if dim == 0 or dim == len(s) or float(dropped.max()) == 0.0:
        gap = math.inf
    else:
        gap = float(kept.min()) / float(dropped.max())
    return KernelEstimate(dim, gap, [float(v) for v in s])


def jacobian_scale(sys: NetworkSystem) -> float:
    """``||B||_2^2``: the Jacobian norm with unit coupling slopes."""
    if sys.graph.m == 0:
        return 0.0
    return float(np.linalg.norm(sys._b, 2) ** 2)


@dataclass
class EquilibriumPoint:
    state: list[float]
    residual: float
    kernel_dim: int
    gap_ratio: float
    clean: bool
    critical_edges: tuple[int, ...] = ()

    @property
    def regular(self) -> bool:
        """Clean gap and no edge sitting at a critical point of its coupling."""
        return self.clean and not self.critical_edges

    def to_json(self) -> dict:
        return {
            "state": self.state,
            "residual": self.residual,
            "kernel_dim": self.kernel_dim,
            "gap_ratio": self.gap_ratio if math.isfinite(self.gap_ratio) else "inf",
            "clean": self.clean,
            "critical_edges": list(self.critical_edges),
            "regular": self.regular,
        }


def critical_edges(sys: NetworkSystem, x: np.ndarray, rel: float = 1e-3) -> tuple[int, ...]:
    """Edges whose coupling derivative nearly vanishes at ``x``.

    There the coupling is not locally invertible and the Jacobian kernel can
    exceed the local dimension of the equilibrium set.
    """
    if sys.graph.m == 0:
        return ()
    w = np.abs(np.atleast_1d(sys._apply(sys.edge_differences(x), deriv=True)))
    cut = rel * max(1.0, float(w.max()))
    return tuple(int(i) for i in np.flatnonzero(w <= cut))


def newton(
    sys: NetworkSystem,
    x0: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 200,
    max_halvings: int = 40,
) -> tuple[np.ndarray, float]:
    """Damped minimum-norm Newton iteration.

    The Jacobian is singular along the global translation, so each step is
    the least-squares solution of ``J dx = -F``.  Steps are halved until the
    residual decreases.
    """
    x = np.array(x0, dtype=float)
    fx = field(sys, x, False)
    r = float(np.linalg.norm(fx))
    for _ in range(max_iter):
        if r <= tol:
            break
        j = jacobian(sys, x)
        dx = np.linalg.lstsq(j, -fx, rcond=None)[0]
        t = 1.0
        for _ in range(max_halvings + 1):
            xn = x + t * dx
            if sys.space == CIRCLE:
                xn = np.mod(xn, TWO_PI)
            fn = field(sys, xn, False)
            rn = float(np.linalg.norm(fn))
            if rn < r:
                break
            t *= 0.5
        else:
            break
        x, fx, r = xn, fn, rn
    return x, r


def canonical_state(sys: NetworkSystem, x: np.ndarray) -> np.ndarray:
    """Quotient the translation symmetry: shift each component so its first vertex is 0."""
    y = np.array(x, dtype=float)
    for comp in components(sys.graph):
        y[list(comp)] -= y[comp[0]]
    if sys.space == CIRCLE:
        y = np.mod(y, TWO_PI)
        y[np.isclose(y, TWO_PI, atol=1e-9)] = 0.0
    return y


def state_distance(sys: NetworkSystem, a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(a - b)
    if sys.space == CIRCLE:
        d = np.minimum(d, TWO_PI - d)
    return float(d.max(initial=0.0))


def find_equilibria(
    sys: NetworkSystem,
    starts: int = 64,
    seed: int = 0,
    box: float = 2.0,
    tol: float = 1e-9,
    kernel_threshold: float = 1e-6,
) -> list[EquilibriumPoint]:
    """Multistart damped Newton from seeded uniform starts.

    Circle starts are uniform on ``[0, 2pi)^n``; line starts uniform on
    ``[-box, box]^n``.  Converged points are deduplicated at distance 1e-6
    after quotienting the translation symmetry.
    """
    rng = np.random.default_rng(seed)
    n = sys.graph.n
    found: list[np.ndarray] = []
    for _ in range(starts):
        if sys.space == CIRCLE:
            x0 = rng.uniform(0.0, TWO_PI, n)
        else:
            x0 = rng.uniform(-box, box, n)
        x, r = newton(sys, x0, tol=tol)
        if r <= tol:
            found.append(canonical_state(sys, x))
    found.sort(key=lambda v: tuple(np.round(v, 9)))
    unique: list[np.ndarray] = []
    for x in found:
        if all(state_distance(sys, x, y) > 1e-6 for y in unique):
            unique.append(x)
    out = []
    scale = jacobian_scale(sys)
    for x in unique:
        k = kernel_dimension(jacobian(sys, x), kernel_threshold, scale)
        res = float(np.linalg.norm(field(sys, x)))
        out.append(EquilibriumPoint([float(v) for v in x], res, k.dim, k.gap_ratio, k.clean,
                                    critical_edges(sys, x)))
    return out


@dataclass
class DynamicsReport:
    forest_bound: int
    cycle_forest_bound: int | None
    equilibria: list[EquilibriumPoint]
    findings: list[str] = dataclasses.field(default_factory=list)
    nonregular: list[str] = dataclasses.field(default_factory=list)

    @property
    def bound(self) -> int:
        vals = [self.forest_bound] + ([self.cycle_forest_bound] if self.cycle_forest_bound is not None else [])
        return min(vals)

    def to_json(self) -> dict:
        return {
            "forest_bound": self.forest_bound,
            "cycle_forest_bound": self.cycle_forest_bound,
            "bound": self.bound,
            "equilibria": [e.to_json() for e in self.equilibria],
            "findings": self.findings,
            "nonregular": self.nonregular,
        }


def validate_dynamics_bounds(
    sys: NetworkSystem,
    budget: SearchBudget | None = None,
    starts: int = 64,
    seed: int = 0,
) -> DynamicsReport:
    """Compare Jacobian kernel dimensions of sampled equilibria with both bounds.

    Kernel dimension only equals the local dimension of the equilibrium set
    at regular points, so excesses are recorded as findings rather than
    raised.  Points without a clean singular-value gap are skipped; excesses
    at points with a critical edge go to ``nonregular`` instead of
    ``findings``.
    """
    fb = best_forest(sys.graph, "weak", budget).weak_bound
    cf = search_cycle_forest(sys.graph, budget)
    rep = DynamicsReport(fb, cf.bound if cf is not None else None, find_equilibria(sys, starts, seed))
    for i, e in enumerate(rep.equilibria):
        if not e.clean or e.kernel_dim <= rep.bound:
            continue
        msg = f"equilibrium {i}: kernel dimension {e.kernel_dim} exceeds bound {rep.bound}"
        if e.critical_edges:
            rep.nonregular.append(f"{msg} (critical edges {list(e.critical_edges)})")
        else:
            rep.findings.append(msg)
    return rep
