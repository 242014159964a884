import math
from fractions import Fraction as F

import numpy as np
import pytest

from ostro.core import Grid1D, PhysParams, PolyProfile, QuadraticTopography, SymbolicProfile, TimeFunction
from ostro.errors import (
    DegenerateDenominator,
    NegativeDiscriminant,
    NonPositiveParameter,
    ShapeMismatch,
    SignMismatch,
    ZeroCoefficient,
)
from ostro.exact import (
    FAMILIES,
    PROFILE_KINDS,
    build,
    cubic_family_1,
    cubic_family_2,
    cubic_family_3,
    cubic_tw_solution,
    forcing_from_profile,
    frame_shift_solution,
    oscillatory_frequency,
    oscillatory_wave,
    potential_of,
    random_instance,
    rational_forcing_closed_form,
    rational_wave,
    solitary_forcing_closed_form,
    solitary_wave,
)
from ostro.polyexact import family_brute_check
from ostro.verify import residual_reduction, residual_u

ZERO = TimeFunction.zero()
P11 = PhysParams(1, 1)


def test_family_1_perfect_square():
    cc = cubic_family_1(F(8, 9), 0, 0, 0, PhysParams(1, 6), +1)
    assert cc.c3 == F(4, 9) and cc.c2 == cc.c1 == cc.c0 == 0
    assert isinstance(cc.c3, F)


def test_family_1_both_branches_certified():
    for branch in (+1, -1):
        cc = cubic_family_1(F(8, 9), F(1, 2), 3, -2, PhysParams(1, 6), branch)
        assert family_brute_check(cc, 1, 6)


def test_family_1_zero_solution():
    cc = cubic_family_1(0, 0, 0, 0, P11, -1)
    assert cc.as_dict() == {k: 0 for k in cc.as_dict()}


def test_family_1_errors():
    with pytest.raises(NegativeDiscriminant):
        cubic_family_1(-1, 0, 0, 0, PhysParams(1, 6), 1)
    # a3 = 0 on the + branch gives c3 = beta/18, the family-3 boundary
    with pytest.raises(DegenerateDenominator):
        cubic_family_1(0, 1, 0, 0, PhysParams(1, 6), +1)


def test_family_1_irrational_root_falls_back_to_float():
    cc = cubic_family_1(F(1), 0, 1, 0, PhysParams(1, 1), +1)
    assert isinstance(cc.c3, float)
    assert cc.c3 == pytest.approx((1 + math.sqrt(73)) / 36)


def test_family_2_examples():
    cc = cubic_family_2(12, 0, 0, PhysParams(1, 6))
    assert (cc.c3, cc.c2, cc.c1, cc.a3, cc.a1) == (1, 1, 0, 12, 4)
    with pytest.raises(ZeroCoefficient):
        cubic_family_2(0, 1, 1, P11)
    beta, c0 = F(3), F(5, 7)
    assert cubic_family_2(2 * beta**2, -c0 * beta, c0, PhysParams(1, beta)).c1 == 0


def test_family_3_examples():
    cc = cubic_family_3(1, 0, 0, PhysParams(1, 2))
    assert (cc.c3, cc.c2, cc.c1, cc.c0) == (F(1, 9), 1, 3, 3)
    assert cc.a3 == cc.a2 == 0
    cc = cubic_family_3(0, 0, 0, PhysParams(1, 18))
    assert (cc.c3, cc.c2, cc.c1, cc.c0) == (1, 0, 0, 0)
    assert cubic_family_3(0, 0, 0, PhysParams(1, 7)).c1 == 0


@pytest.mark.parametrize("name", ["fam1", "fam2", "fam3"])
def test_cubic_coefficients_float_residual(name):
    sol = build(name)
    g = Grid1D(-10, 10, 401)
    assert residual_reduction(sol.V, sol.h1, sol.params, g).max_abs <= 1e-10


def test_rational_wave_examples():
    sol = rational_wave(1.0, P11)
    assert sol.u(1.0, 3.0) == pytest.approx(0.0, abs=1e-13)
    assert sol.u(-1.0, 3.0) == pytest.approx(0.0, abs=1e-13)
    assert abs(sol.u(100.0, 0.0)) < 3e-3
    with pytest.raises(NonPositiveParameter):
        rational_wave(0.0, P11)


def test_rational_peak_value_literal():
    # the closed form 24 alpha beta (chi^2 - c0)/(chi^2 + c0)^2 gives -24 here, but it
    # is not V' of V = 24 alpha z/(c0 + z^2); this literal expectation stays red
    assert rational_wave(1.0, P11).u(0.0, 0.0) == pytest.approx(-24)


def test_rational_peak_is_derivative_of_profile():
    for c0, al in ((1.0, 1.0), (2.0, 0.5), (0.5, -1.5)):
        sol = rational_wave(c0, PhysParams(al, 1.0))
        assert sol.u(0.0, 0.0) == pytest.approx(24 * al / c0)


def test_rational_forcing_matches_synthesis():
    params = PhysParams(1.3, -0.7)
    sol = rational_wave(0.8, params)
    ref = rational_forcing_closed_form(0.8, params)
    syn = forcing_from_profile(sol.V, params)
    z = np.linspace(-10, 10, 401)
    for k in range(3):
        assert np.max(np.abs(ref.d(z, k) - syn.d(z, k))) <= 1e-9
    assert np.max(np.abs(ref.antiderivative(z) - syn.antiderivative(z))) <= 1e-9


def test_solitary_examples():
    assert solitary_wave(1.0, P11).u(0.0, 0.0) == pytest.approx(12)
    assert solitary_wave(2.0, PhysParams(0.5, 1)).u(0.0, 0.0) == pytest.approx(24)
    with pytest.raises(NonPositiveParameter):
        solitary_wave(-1.0, P11)


def test_solitary_tanh_cubed_case():
    params = PhysParams(1, -8)
    sol = solitary_wave(1.0, params)
    z = np.linspace(-4, 4, 81)
    assert np.max(np.abs(sol.h1(z) - 96 * np.tanh(z) ** 3)) <= 1e-10


def test_solitary_forcing_matches_closed_form():
    params = PhysParams(0.7, 1.9)
    sol = solitary_wave(0.9, params)
    ref = solitary_forcing_closed_form(0.9, params)
    z = np.linspace(-10, 10, 401)
    assert np.max(np.abs(sol.h1(z) - ref(z))) <= 1e-10
    assert np.max(np.abs(sol.h1.antiderivative(z) - ref.antiderivative(z))) <= 1e-9


def test_oscillatory_examples():
    sol = oscillatory_wave(0.0, 1.0, 0.0, P11)
    x = np.linspace(0, 2 * np.pi, 50)
    assert np.allclose(sol.u(x, 0.3), -np.sin(x), atol=1e-14)
    assert np.allclose(sol.topo.h(x, 0.3), 0.5 * np.sin(2 * x), atol=1e-14)
    # hand substitution: (u u_x + u_xxx)_x = cos 2x - sin x = beta u + h_x
    lhs = np.cos(2 * x) - np.sin(x)
    assert np.allclose(lhs, sol.u(x, 0) + sol.topo.h_x(x, 0), atol=1e-14)
    assert oscillatory_frequency(PhysParams(16, 1)) == pytest.approx(0.5)
    with pytest.raises(SignMismatch):
        oscillatory_frequency(PhysParams(1, -1))
    with pytest.raises(ZeroCoefficient):
        oscillatory_wave(0.0, 0.0, 0.0, P11)


def test_oscillatory_forcing_doubles_frequency():
    params = PhysParams(2.0, 0.5)
    c0, c1, phi = 0.4, 1.3, 0.7
    sol = oscillatory_wave(c0, c1, phi, params)
    w = oscillatory_frequency(params)
    z = np.linspace(-5, 5, 101)
    want = -0.5 * c0 + 0.5 * c1**2 * w**3 * np.sin(2 * w * z + 2 * phi)
    assert np.max(np.abs(sol.h1(z) - want)) <= 1e-12


def test_forcing_from_profile_examples():
    assert np.all(forcing_from_profile(PolyProfile([0]), P11)(np.linspace(-1, 1, 5)) == 0)
    z = np.linspace(-3, 3, 61)
    al, b = 0.6, 1.4
    h = forcing_from_profile(SymbolicProfile("tanh", c1=12 * al, k=1.0), PhysParams(al, b))
    sech2 = 1 / np.cosh(z) ** 2
    assert np.max(np.abs(h(z) + 12 * al * (b + 8 * al * sech2) * np.tanh(z))) <= 1e-10
    h = forcing_from_profile(SymbolicProfile("cosine", c0=0, c1=1, w=1, ph=0), P11)
    assert np.max(np.abs(h(z) - 0.5 * np.sin(2 * z))) <= 1e-14


def test_frame_shift_examples():
    zero_topo = QuadraticTopography(ZERO, ZERO, TimeFunction.constant(2), unforced=True)
    sol = frame_shift_solution(zero_topo, P11)
    assert np.all(sol.u(np.linspace(-1, 1, 5), 0.5) == 0)
    topo = QuadraticTopography(TimeFunction.constant(1), ZERO, ZERO)
    sol = frame_shift_solution(topo, PhysParams(1, 2))
    x = np.linspace(-3, 3, 7)
    assert np.allclose(sol.u(x, 0.4), -x + 0.5, atol=1e-15)
    lin = QuadraticTopography(TimeFunction.linear(0, 1), ZERO, ZERO)
    sol = frame_shift_solution(lin, P11)
    t = 0.8
    assert np.allclose(sol.u(x, t), -2 * t * x + 4 * t * t - 2, atol=1e-14)
    assert residual_u(sol, Grid1D(-5, 5, 41), t, mode="fd").max_abs <= 1e-10
    with pytest.raises(ShapeMismatch):
        frame_shift_solution(build("solitary").topo, P11)


def test_cubic_tw_examples():
    sol = cubic_tw_solution(0, 0, ZERO, ZERO, PhysParams(1, 6))
    x = np.linspace(-2, 2, 9)
    assert np.allclose(sol.u(x, 1.7), x * x, atol=1e-14)
    assert residual_u(sol, Grid1D(-5, 5, 101), 0.3).max_abs <= 1e-12
    sol = cubic_tw_solution(2, 0, ZERO, ZERO, P11)
    t = 0.6
    zeta = x - 2 * t
    assert np.allclose(sol.u(x, t), 2 + zeta**2 / 6 - 3, atol=1e-13)
    s = 0.3
    sol = cubic_tw_solution(1.5, 0.2, TimeFunction.constant(2.0 * s), ZERO, PhysParams(1, 2.0))
    assert sol.speed(0.0) == pytest.approx(1.5 - s)


def test_potential_examples():
    v = potential_of("x1", V=PolyProfile([0]), beta=1)
    assert np.all(v(np.linspace(-1, 1, 5), 2.0) == 0)
    v = potential_of("x1", V=PolyProfile([0, 0, 0, 1]), speed=TimeFunction.constant(1), beta=1)
    x, t = np.linspace(-2, 2, 9), 0.7
    z = x - t
    assert np.allclose(v(x, t), z**3 + z, atol=1e-13)
    topo = QuadraticTopography(TimeFunction.constant(1), ZERO, ZERO)
    v = potential_of("x2", topo=topo, params=P11, gauge="zero")
    assert np.allclose(v(x, 0.3), -x * x + 4 * x, atol=1e-14)
    with pytest.raises(KeyError):
        potential_of("x3")


@pytest.mark.parametrize("name", list(FAMILIES))
def test_u_is_x_derivative_of_v(name, rng):
    sol = random_instance(name, rng, "sinusoid")
    for x, t in rng.uniform(-5, 5, (100, 2)):
        assert abs(sol.u(x, t) - sol.v.d(x, t, 1)) <= 1e-10 * (1 + abs(sol.u(x, t)))


@pytest.mark.parametrize("name", ["fam1", "fam2", "fam3", "rational", "solitary", "oscillatory"])
def test_synthesized_forcing_has_zero_reduction_residual(name, rng):
    sol = random_instance(name, rng)
    V = sol.V
    h1 = forcing_from_profile(V, sol.params)
    r = residual_reduction(V, h1, sol.params, Grid1D(-10, 10, 401))
    assert r.max_abs <= 1e-12 * (1 + np.max(np.abs(V(Grid1D(-10, 10, 401).x))))


@pytest.mark.parametrize("name", ["fam1", "fam2", "fam3", "rational", "solitary", "oscillatory"])
def test_galilean_covariance(name, rng):
    base = random_instance(name, rng)
    values = dict(base.coeffs)
    s1 = TimeFunction.linear(0.3, 0.5)
    s2 = TimeFunction.sinusoid(-0.2, 0.6, 1.3)
    V, h1 = base.V, base.h1
    from ostro.exact import galilean_solution
    a = galilean_solution(V, h1, base.params, s1)
    b = galilean_solution(V, h1, base.params, s2)
    x = np.linspace(-5, 5, 41)
    for t in (0.0, 0.7, 1.9):
        shift = s2.primitive(t) - s1.primitive(t)
        diff = b.u(x + shift, t) - a.u(x, t)
        assert np.max(np.abs(diff - (s2(t) - s1(t)))) <= 1e-10
    assert values is not None


@pytest.mark.parametrize("name", ["fam1", "fam2", "fam3", "rational", "solitary", "oscillatory"])
def test_static_limit(name):
    sol = build(name)
    x = np.linspace(-10, 10, 201)
    for t in (0.0, 1.0, 4.0):
        assert np.max(np.abs(sol.u.dt(x, t))) <= 1e-12


def test_catalog_has_eight_families():
    assert list(FAMILIES) == ["fam1", "fam2", "fam3", "rational", "solitary", "oscillatory",
                              "frameshift", "cubictw"]
    for name in FAMILIES:
        assert build(name).family == name
    with pytest.raises(KeyError):
        build("kdv")


@pytest.mark.parametrize("kind", PROFILE_KINDS)
def test_random_instances_are_valid(kind, rng):
    g = Grid1D(-10, 10, 201)
    for name in FAMILIES:
        for _ in range(3):
            sol = random_instance(name, rng, kind)
            assert residual_u(sol, g, 0.5).rel_max <= 1e-9
