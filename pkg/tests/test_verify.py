import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ostro.core import (
    GalileanTopography,
    Grid1D,
    PhysParams,
    PolyProfile,
    QuadraticTopography,
    SampledField,
    TimeFunction,
    X1Generator,
    X2Generator,
    apply_symmetry,
)
from ostro.errors import MissingTimeLevels, NonZeroMean, ShapeMismatch
from ostro.exact import FAMILIES, build, cubic_tw_solution, random_instance
from ostro.numerics import convergence_order
from ostro.solve import OdeState, ode_integrate
from ostro.verify import (
    continuity_check,
    conserved_integral,
    drift,
    energy_current,
    euler_lagrange_residual,
    evolution_rhs,
    first_integral,
    gateaux_check,
    hamiltonian_check,
    lagrangian_density,
    mass_balance,
    momentum_current,
    residual_reduction,
    residual_u,
    residual_u_field,
    residual_u_sampled,
    residual_v,
    sweep,
)

P11 = PhysParams(1, 1)
ZERO = TimeFunction.zero()
PERIOD = Grid1D(0, 2 * math.pi, 256, periodic=True)


def zero_solution():
    return build("frameshift", {"h2": 0, "h1": 0, "h0": 0}, P11)


def test_zero_solution_residuals():
    sol = zero_solution()
    g = Grid1D(-5, 5, 101)
    assert residual_u(sol, g, 0.4).rel_max == 0
    assert residual_u(sol, g, 0.4, mode="fd").rel_max == 0


def test_oscillatory_residual_analytic():
    sol = build("oscillatory")
    assert residual_u(sol, Grid1D(0, 2 * math.pi, 401), 0.0).rel_max <= 1e-10


def test_solitary_with_constant_speed():
    sol = build("solitary", {}, P11, TimeFunction.constant(1.0))
    assert residual_u(sol, Grid1D(-10, 10, 401), 0.7).rel_max <= 1e-9


def test_residual_v_examples():
    g = Grid1D(-5, 5, 201)
    assert residual_v(build("oscillatory"), g, 0.3).rel_max <= 1e-10
    assert residual_v(build("frameshift"), g, 0.3).rel_max <= 1e-10


def test_sampled_residual_needs_three_levels():
    sol = build("solitary")
    g = Grid1D(-10, 10, 201)
    levels = [sol.u.sample(g, t) for t in (0.0, 0.01)]
    with pytest.raises(MissingTimeLevels):
        residual_u_sampled(levels, sol.topo, sol.params)


def test_sampled_residual_on_exact_levels():
    sol = build("solitary", {}, P11, TimeFunction.constant(0.5))
    g = Grid1D(-10, 10, 801)
    levels = [sol.u.sample(g, t) for t in (0.29, 0.3, 0.31)]
    assert residual_u_sampled(levels, sol.topo, sol.params).rel_max <= 1e-3


def test_reduction_residual_examples():
    g = Grid1D(-5, 5, 201)
    zero = PolyProfile([0])
    assert residual_reduction(zero, zero, P11, g).max_abs == 0
    sol = build("fam2")
    assert residual_reduction(sol.V, sol.h1, sol.params, g).max_abs <= 1e-12
    cub = cubic_tw_solution(0, 0, ZERO, ZERO, PhysParams(1, 18))
    r = residual_reduction(cub.V, None, cub.params, g, "case2", mu=0)
    assert r.max_abs <= 1e-10
    assert np.allclose(cub.V(g.x), g.x**3, atol=1e-12)


def test_reduction_residual_fd_on_samples():
    sol = build("solitary")
    g = Grid1D(-10, 10, 801)
    samples = SampledField(g, 0.0, sol.V(g.x))
    r = residual_reduction(samples, sol.h1, sol.params, g)
    assert r.mode == "fd" and r.rel_max <= 1e-4


def test_energy_current_unforced_limit():
    topo = GalileanTopography(PolyProfile([0]), ZERO, ZERO, 1.0, unforced=True)
    cur = energy_current(topo, PhysParams(0.7, 1.3))
    sol = build("oscillatory")
    x = np.linspace(0, 6, 31)
    v = sol.v
    want = (0.5 * 0.7 * v.d(x, 0.0, 2) ** 2 - v.d(x, 0.0, 1) ** 3 / 6
            - 0.5 * 1.3 * v(x, 0.0) ** 2)
    assert np.max(np.abs(cur.density(v, x, 0.0) - want)) <= 1e-13


def test_momentum_current_unforced_limit():
    topo = QuadraticTopography(ZERO, ZERO, ZERO, unforced=True)
    cur = momentum_current(topo, P11)
    v = build("oscillatory").v
    x = np.linspace(0, 6, 31)
    assert np.max(np.abs(cur.density(v, x, 0.2) - 0.5 * v.d(x, 0.2, 1) ** 2)) <= 1e-14


def test_current_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        energy_current(build("frameshift").topo, P11)
    with pytest.raises(ShapeMismatch):
        momentum_current(build("oscillatory").topo, P11)


def test_continuity_on_zero_solution():
    sol = zero_solution()
    r = continuity_check(momentum_current(sol.topo, sol.params), sol.v, PERIOD, [0.0, 1.0])
    assert r.max_abs == 0


def test_energy_continuity_oscillatory():
    sol = build("oscillatory")
    cur = energy_current(sol.topo, sol.params)
    assert continuity_check(cur, sol.v, PERIOD, [0.0, 0.5, 1.0]).rel_max <= 1e-5


def test_momentum_continuity_frameshift():
    sol = build("frameshift")
    cur = momentum_current(sol.topo, sol.params)
    assert continuity_check(cur, sol.v, PERIOD, [0.0, 0.5, 1.0]).rel_max <= 1e-5


def test_continuity_time_dependent_forcing():
    sol = build("frameshift", {"h2": {"kind": "sinusoid", "c0": 0.5, "amp": 0.3, "omega": 1.3},
                               "h1": {"kind": "linear", "c0": 0.2, "c1": 0.4},
                               "h0": {"kind": "sinusoid", "amp": 0.5, "omega": 2}})
    cur = momentum_current(sol.topo, sol.params)
    rows = [(dt, continuity_check(cur, sol.v, PERIOD, [0.3], dt=dt).max_abs)
            for dt in (1e-2, 5e-3, 2.5e-3)]
    assert convergence_order(rows) >= 1.9


def test_static_energy_integral_constant():
    sol = build("oscillatory")
    cur = energy_current(sol.topo, sol.params)
    a = conserved_integral(cur, sol.v, PERIOD, 0.0)
    b = conserved_integral(cur, sol.v, PERIOD, 1.0)
    assert abs(a - b) <= 1e-12


def test_drift_definition():
    assert drift([0.0, 0.0]) == 0
    assert drift([1.0, 1.5, 0.0]) == pytest.approx(0.5)


def test_mass_balance_examples():
    assert mass_balance(zero_solution(), -5, 5, 0.3) == 0
    assert abs(mass_balance(build("solitary"), -20, 20, 0.0)) <= 1e-6
    assert abs(mass_balance(build("oscillatory"), 0, 2 * math.pi, 0.0)) <= 1e-8


@pytest.mark.parametrize("name", list(FAMILIES))
def test_mass_balance_every_family(name, rng):
    sol = random_instance(name, rng)
    umax = float(np.max(np.abs(sol.u(np.linspace(-20, 20, 2001), 0.4))))
    assert abs(mass_balance(sol, -20, 20, 0.4)) <= 1e-6 * (1 + umax) ** 2


def test_first_integral_zero_state():
    assert first_integral((0, 0, 0, 0), 1.3, P11) == 0


def test_first_integral_constant_on_cubic():
    params = PhysParams(1, 18)
    sol = cubic_tw_solution(0, 0, ZERO, ZERO, params)
    vals = [first_integral([sol.V.d(np.array(z), k) for k in range(4)], 0.0, params)
            for z in (-1.3, 0.4, 2.2)]
    assert max(vals) - min(vals) <= 1e-10


@pytest.mark.parametrize("alpha,beta", [(1, 1), (2, 0.5), (0.5, 3)])
def test_first_integral_conserved_along_rk4(alpha, beta):
    params = PhysParams(alpha, beta)
    tr = ode_integrate("case2", OdeState(0, (0.1, 0, 0.05, 0)), 1e-3, 10, params, mu=2)
    psi = first_integral(tr.y.T, 2, params)
    assert np.max(np.abs(psi - psi[0])) <= 1e-8


def test_printed_first_integral_fails_off_unit_coefficients():
    params = PhysParams(2, 0.5)
    tr = ode_integrate("case2", OdeState(0, (0.1, 0, 0.05, 0)), 1e-3, 10, params, mu=2)
    printed = first_integral(tr.y.T, 2, params, printed=True)
    assert np.max(np.abs(printed - printed[0])) > 1e-3


def test_hamiltonian_zero_state():
    sol = build("oscillatory")
    g = Grid1D(0, 2 * math.pi, 64, True)
    u = SampledField(g, 0.0, np.zeros(g.n))
    rep = hamiltonian_check(u, sol.topo, P11)
    assert rep.extra["structural"] <= 1e-12


def test_hamiltonian_static_oscillatory():
    sol = build("oscillatory")
    g = Grid1D(0, 2 * math.pi, 128, True)
    u = sol.u.sample(g, 0.0)
    assert hamiltonian_check(u, sol.topo, P11, u_t=np.zeros(g.n)).rel_max <= 1e-8


def test_hamiltonian_nonzero_mean():
    g = Grid1D(0, 2 * math.pi, 64, True)
    with pytest.raises(NonZeroMean):
        hamiltonian_check(SampledField(g, 0.0, 1 + np.sin(g.x)), None, P11)


band = st.lists(st.floats(-1, 1), min_size=6, max_size=6)


@settings(max_examples=30, deadline=None)
@given(band, band, st.floats(0.3, 3), st.floats(0.3, 3))
def test_hamiltonian_matches_evolution_form(a, b, alpha, beta):
    g = Grid1D(0, 2 * math.pi, 64, True)
    ks = np.arange(1, 7)[:, None]
    vals = (np.array(a)[:, None] * np.cos(ks * g.x) + np.array(b)[:, None] * np.sin(ks * g.x)).sum(0)
    u = SampledField(g, 0.0, vals)
    topo = build("oscillatory").topo
    params = PhysParams(alpha, beta)
    rep = hamiltonian_check(u, topo, params, u_t=evolution_rhs(u, topo, params))
    assert rep.max_abs <= 1e-8 * (1 + np.max(np.abs(vals))) ** 2


def test_gateaux_random_state():
    g = Grid1D(0, 2 * math.pi, 128, True)
    rng = np.random.default_rng(3)
    ks = np.arange(1, 6)[:, None]
    vals = (rng.normal(size=(5, 1)) * np.sin(ks * g.x) + rng.normal(size=(5, 1)) * np.cos(ks * g.x)).sum(0)
    assert gateaux_check(SampledField(g, 0.0, vals), build("oscillatory").topo, P11) <= 1e-5


def test_lagrangian_density_zero():
    sol = zero_solution()
    topo = QuadraticTopography(ZERO, ZERO, ZERO, unforced=True)
    assert np.all(lagrangian_density(sol.v, PERIOD, 0.2, P11, topo).values == 0)


@pytest.mark.parametrize("name", ["oscillatory", "frameshift"])
def test_euler_lagrange_matches_potential_equation(name):
    sol = build(name)
    rep = euler_lagrange_residual(sol.v, PERIOD, 0.3, sol.params, sol.topo)
    assert rep.rel_max <= 1e-4
    assert rep.extra["vs_residual_v"] <= 1e-4


def test_orbit_identity_at_zero():
    sol = build("solitary", {}, P11, TimeFunction.constant(2.0))
    g = Grid1D(-10, 10, 401)
    base = residual_u(sol, g, 0.3)
    rep = symmetry_orbit(sol, g, [0.0])[0]
    assert rep.max_abs == base.max_abs


def symmetry_orbit(sol, g, eps):
    from ostro.verify import symmetry_orbit_check
    return symmetry_orbit_check(X1Generator(sol.speed), eps, sol, g, 0.3)


def test_x1_orbits_on_solitary():
    sol = build("solitary", {}, P11, TimeFunction.constant(2.0))
    for rep in symmetry_orbit(sol, Grid1D(-10, 10, 401), [0.1, 0.5, 1.0]):
        assert rep.rel_max <= 1e-9


def test_x1_orbits_with_accelerating_speed(rng):
    speed = TimeFunction.sinusoid(0.3, 0.8, 1.7)
    sol = build("rational", {}, PhysParams(0.8, -1.2), speed)
    from ostro.verify import symmetry_orbit_check
    for rep in symmetry_orbit_check(X1Generator(speed), [0.2, 0.9], sol, Grid1D(-10, 10, 401), 0.4):
        assert rep.rel_max <= 1e-9


def test_x2_orbits_on_frameshift():
    h2 = TimeFunction.sinusoid(0.5, 0.3, 1.3)
    sol = build("frameshift", {"h2": h2.to_dict(), "h1": 0.3}, PhysParams(1, 2))
    from ostro.verify import symmetry_orbit_check
    reps = symmetry_orbit_check(X2Generator(h2, 2), [0.1, 0.5, 1.0], sol, Grid1D(-10, 10, 401), 0.3)
    assert all(r.rel_max <= 1e-9 for r in reps)


def test_orbit_shape_mismatch():
    from ostro.verify import symmetry_orbit_check
    with pytest.raises(ShapeMismatch):
        symmetry_orbit_check(X2Generator(ZERO, 1), [0.1], build("solitary"), Grid1D(-5, 5, 51), 0)
    with pytest.raises(ShapeMismatch):
        symmetry_orbit_check(X1Generator(ZERO), [0.1], build("frameshift"), Grid1D(-5, 5, 51), 0)


def test_translated_oscillatory_with_moved_topography():
    # an x-shift by eps moves the phase by -w eps; the topography must move with it
    sol = build("oscillatory")
    eps = 1.0
    moved = apply_symmetry(X2Generator(ZERO, 1), eps, sol.u)
    shifted = build("oscillatory", {"c0": 0, "c1": 1, "phi": -eps}, P11)
    g = Grid1D(0, 2 * math.pi, 401)
    assert np.max(np.abs(moved(g.x, 0.2) - shifted.u(g.x, 0.2))) <= 1e-13
    assert residual_u_field(moved, shifted.topo, P11, g, 0.2).rel_max <= 1e-9


@pytest.mark.parametrize("gen", [X1Generator(TimeFunction.sinusoid(0.2, 0.5, 1.1)),
                                 X2Generator(TimeFunction.linear(0.4, 0.3), 2.0)])
def test_orbit_composition(gen):
    u = build("solitary").u
    x = np.linspace(-5, 5, 41)
    a = apply_symmetry(gen, 0.3, apply_symmetry(gen, 0.5, u))
    b = apply_symmetry(gen, 0.8, u)
    for t in (0.0, 0.6):
        assert np.max(np.abs(a(x, t) - b(x, t))) <= 1e-10
        assert np.max(np.abs(a.d(x, t, 1, 1) - b.d(x, t, 1, 1))) <= 1e-10


def test_sweep_keeps_order_and_is_deterministic(monkeypatch):
    items = list(range(16))

    def work(i):
        return residual_u(random_instance("solitary", np.random.default_rng(i)),
                          Grid1D(-10, 10, 101), 0.1).max_abs

    monkeypatch.setenv("OSTRO_THREADS", "1")
    serial = sweep(work, items)
    monkeypatch.setenv("OSTRO_THREADS", "4")
    assert sweep(work, items) == serial
