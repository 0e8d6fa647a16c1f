import math

import numpy as np
import pytest

from forestbound.dynamics import (
    CIRCLE,
    LINE,
    CouplingError,
    NetworkSystem,
    OddPolynomialCoupling,
    SinCoupling,
    critical_edges,
    field,
    find_equilibria,
    finite_difference_jacobian,
    jacobian,
    jacobian_scale,
    kernel_dimension,
    parse_coupling,
    validate_dynamics_bounds,
)
from forestbound.graph import cycle, complete_binary_tree, ladder, path, star


def sin_system(g, omega=None, gain=1.0):
    return NetworkSystem.uniform(g, SinCoupling(gain), omega)


def test_parse_couplings():
    assert parse_coupling("sin:K=1.5") == SinCoupling(1.5)
    assert parse_coupling("sin") == SinCoupling(1.0)
    assert parse_coupling("poly:1,0,-1").coefficients == (1.0, 0.0, -1.0)
    assert parse_coupling("cubic").fiber_bound == 3
    assert parse_coupling("sin:K=2").fiber_bound == 2
    assert parse_coupling("poly:2,0,0,0,1").fiber_bound == 5


@pytest.mark.parametrize("text", ["poly:1,1", "poly:1,0,0,0,0,0,0,0,0,0,1", "tanh", "sin:K=-1", "poly:a,b", "poly:0"])
def test_bad_couplings(text):
    with pytest.raises(CouplingError):
        parse_coupling(text)


def test_space_admissibility():
    g = path(3)
    with pytest.raises(CouplingError):
        NetworkSystem(g, (SinCoupling(),) * 2, np.zeros(3), LINE)
    with pytest.raises(CouplingError):
        NetworkSystem(g, (parse_coupling("cubic"),) * 2, np.zeros(3), CIRCLE)
    with pytest.raises(CouplingError):
        NetworkSystem(g, (SinCoupling(),), np.zeros(3), CIRCLE)
    with pytest.raises(CouplingError):
        NetworkSystem.uniform(g, SinCoupling(), [0.0, 1.0])


def test_constant_state_is_rest():
    s = sin_system(star(5))
    assert np.allclose(field(s, np.full(5, 0.7)), 0.0)


def test_c4_splay_state():
    s = sin_system(cycle(4))
    x = np.pi * np.arange(4) / 2
    assert np.allclose(field(s, x), 0.0, atol=1e-12)


def test_two_node_balance():
    s = sin_system(path(2), omega=[1.0, -1.0])
    v = field(s, [0.0, -np.pi / 2])
    assert np.allclose(v, [1 - math.sin(math.pi / 2), -1 + math.sin(math.pi / 2)], atol=1e-15)


def test_state_dimension_checked():
    with pytest.raises(ValueError):
        field(sin_system(path(3)), [0.0, 1.0])


def test_mixed_couplings():
    g = path(3)
    s = NetworkSystem(g, (parse_coupling("cubic"), parse_coupling("poly:2")), np.array([0.5, 0.0, -0.5]), LINE)
    x = np.array([0.3, -0.2, 0.9])
    assert s.fiber_bound == 3
    assert np.allclose(jacobian(s, x), finite_difference_jacobian(s, x), rtol=1e-6, atol=1e-8)


def test_kernel_dimension():
    k = kernel_dimension(np.diag([3.0, 1.0, 1e-12]))
    assert k.dim == 1 and k.clean and k.gap_ratio > 1e3
    k = kernel_dimension(np.diag([1.0, 1e-5, 1e-7]))
    assert k.dim == 1 and not k.clean
    assert kernel_dimension(np.eye(3)).dim == 0


def test_c3_equilibria():
    eqs = find_equilibria(sin_system(cycle(3)), starts=48, seed=1)
    states = [np.array(e.state) for e in eqs]
    in_phase = [e for e, x in zip(eqs, states) if np.allclose(x, 0, atol=1e-6)]
    assert len(in_phase) == 1 and in_phase[0].kernel_dim == 1
    splay = [x for x in states if np.allclose(np.sort(x), [0, 2 * np.pi / 3, 4 * np.pi / 3], atol=1e-6)]
    assert len(splay) == 2
    assert all(e.residual <= 1e-9 for e in eqs)


def test_no_equilibria_when_forcing_too_strong():
    s = sin_system(path(2), omega=[2.0, -2.0])
    assert find_equilibria(s, starts=16, seed=0) == []


def test_tree_in_phase():
    eqs = find_equilibria(sin_system(complete_binary_tree(3)), starts=32, seed=0)
    zero = [e for e in eqs if np.allclose(e.state, 0, atol=1e-6)]
    assert len(zero) == 1 and zero[0].kernel_dim == 1


def test_line_space_equilibria():
    s = NetworkSystem.uniform(path(3), parse_coupling("cubic"))
    eqs = find_equilibria(s, starts=32, seed=0)
    assert eqs
    for e in eqs:
        assert e.residual <= 1e-9
        assert e.state[0] == 0.0


def test_degenerate_splay_is_nonregular():
    s = sin_system(cycle(4))
    x = np.pi * np.arange(4) / 2
    assert critical_edges(s, x) == (0, 1, 2, 3)
    assert kernel_dimension(jacobian(s, x), scale=jacobian_scale(s)).dim == 4


@pytest.mark.parametrize("n", [3, 5, 6])
def test_validate_cycles(n):
    rep = validate_dynamics_bounds(sin_system(cycle(n)), starts=32, seed=0)
    assert rep.forest_bound == 2 and rep.cycle_forest_bound is None
    assert rep.findings == []
    assert {e.kernel_dim for e in rep.equilibria if e.regular} <= {1, 2}


def test_validate_ladder():
    rep = validate_dynamics_bounds(sin_system(ladder(2)), starts=32, seed=0)
    assert rep.cycle_forest_bound == 2 and rep.bound == 2
    zero = [e for e in rep.equilibria if np.allclose(e.state, 0, atol=1e-6)]
    assert zero and zero[0].kernel_dim == 1
    assert rep.findings == []


def test_validate_star():
    rep = validate_dynamics_bounds(sin_system(star(6)), starts=16, seed=0)
    assert rep.forest_bound == 4
    assert rep.findings == []


SYSTEMS = [
    (g, c)
    for g in (cycle(5), star(6), ladder(2))
    for c in ("sin:K=1", "cubic")
]


@pytest.mark.parametrize("g,spec", SYSTEMS)
def test_vector_field_properties(g, spec):
    coupling = parse_coupling(spec)
    s = NetworkSystem.uniform(g, coupling)
    rng = np.random.default_rng(7)
    omega = rng.normal(size=g.n)
    forced = NetworkSystem.uniform(g, coupling, omega)
    for _ in range(25):
        x = rng.uniform(-2, 2, g.n)
        v = field(s, x)
        assert abs(v.sum()) <= 1e-12 * max(1.0, np.abs(v).max())
        assert abs(field(forced, x).sum() - omega.sum()) <= 1e-12 * max(1.0, np.abs(omega).max()) * g.n
        if s.space == LINE:
            assert np.allclose(field(s, -x), -v, rtol=0, atol=1e-12)
        else:
            shift = rng.uniform(0, 2 * np.pi)
            assert np.allclose(field(s, x + shift), v, rtol=0, atol=1e-12)
        j = jacobian(s, x)
        fd = finite_difference_jacobian(s, x)
        assert np.linalg.norm(j - fd) <= 1e-6 * max(1.0, np.linalg.norm(j))
