"""Residual and structure checks.

Every check returns plain numbers or a :class:`ResidualReport`; nothing here
mutates its inputs, so sweeps can fan out freely (see :func:`sweep`).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    ClosedFormField,
    GalileanTopography,
    Grid1D,
    PhysParams,
    QuadraticTopography,
    SampledField,
    Topography,
    X1Generator,
    X2Generator,
    apply_symmetry,
    chi,
)
from .errors import MissingTimeLevels, NonZeroMean, NotPeriodic, ShapeMismatch
from .numerics import (
    StencilSpec,
    antiderivative_apply,
    dft_apply,
    fd_apply,
    quadrature,
    simpson,
)


@dataclass
class ResidualReport:
    max_abs: float
    rel_max: float
    grid: Grid1D
    trimmed: int = 0
    mode: str = "analytic"
    values: np.ndarray = field(default=None, repr=False)
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "max_abs": float(self.max_abs),
            "rel_max": float(self.rel_max),
            "mode": self.mode,
            "trimmed": int(self.trimmed),
            "grid": {"a": self.grid.a, "b": self.grid.b, "n": self.grid.n,
                     "periodic": self.grid.periodic},
        }
        if self.extra:
            out["extra"] = {k: float(v) for k, v in self.extra.items()}
        return out


def _report(r, scale, grid, trimmed, mode, **extra):
    r = np.asarray(r, dtype=float)
    m = float(np.max(np.abs(r))) if r.size else 0.0
    return ResidualReport(m, m / (1.0 + float(scale)), grid, trimmed, mode, r, extra)


# ---------------------------------------------------------------------------
# derivative jets from closed forms or sampled time levels


def _analytic_jet(f: ClosedFormField, x, t, keys):
    return {k: f.d(x, t, *k) for k in keys}


def _sampled_jet(levels, grid: Grid1D, mode, accuracy, kxs, need_t):
    """x-derivatives of the middle level and (optionally) x-derivatives of the
    centered time difference, trimmed to a common interior."""
    f0 = levels[1]
    dt = 0.5 * (levels[2].t - levels[0].t)
    ft = (levels[2].values - levels[0].values) / (2 * dt)
    jet = {}
    if mode == "dft":
        if not grid.periodic:
            raise NotPeriodic("dft mode needs a periodic grid")
        for k in kxs:
            jet[(k, 0)] = f0.values if k == 0 else dft_apply(f0.values, grid, k)
        if need_t:
            jet[(1, 1)] = dft_apply(ft, grid, 1)
            jet[(0, 1)] = ft
        return jet, 0
    periodic = grid.periodic
    orders = [k for k in kxs if k] + ([1] if need_t else [])
    M = 0 if periodic else max(StencilSpec(k, accuracy).half_width for k in orders)

    def cut(arr, k):
        if periodic:
            return arr
        m = StencilSpec(k, accuracy).half_width if k else 0
        s = M - m
        return arr[s:len(arr) - s] if s else arr

    for k in kxs:
        raw = f0.values if k == 0 else fd_apply(f0.values, grid.dx, k, accuracy, periodic)
        jet[(k, 0)] = cut(raw, k)
    if need_t:
        jet[(1, 1)] = cut(fd_apply(ft, grid.dx, 1, accuracy, periodic), 1)
        jet[(0, 1)] = cut(ft, 0)
    return jet, M


def _levels(f: ClosedFormField, grid, t, dt):
    return [f.sample(grid, t + s * dt) for s in (-1, 0, 1)]


def _sub_grid(grid, M):
    return grid if M == 0 or grid.periodic else grid.trimmed(M)


# ---------------------------------------------------------------------------
# PDE residuals


def u_residual_from_jet(jet, hx, params):
    al, b = float(params.alpha), float(params.beta)
    u, ux = jet[(0, 0)], jet[(1, 0)]
    return jet[(1, 1)] + ux * ux + u * jet[(2, 0)] + al * jet[(4, 0)] - b * u - hx


def v_residual_from_jet(jet, h, params):
    al, b = float(params.alpha), float(params.beta)
    return jet[(1, 1)] + jet[(1, 0)] * jet[(2, 0)] + al * jet[(4, 0)] - b * jet[(0, 0)] - h


_U_KEYS = [(0, 0), (1, 0), (2, 0), (4, 0), (1, 1)]


def residual_u_field(u: ClosedFormField, topo: Topography, params, grid: Grid1D, t,
                     mode="analytic", dt=1e-3, accuracy=4) -> ResidualReport:
    if mode == "analytic":
        x = grid.x
        jet = _analytic_jet(u, x, t, _U_KEYS)
        r = u_residual_from_jet(jet, topo.h_x(x, t), params)
        return _report(r, np.max(np.abs(jet[(0, 0)])), grid, 0, mode)
    return residual_u_sampled(_levels(u, grid, t, dt), topo, params, mode, accuracy)


def residual_u(sol, grid: Grid1D, t, mode="analytic", dt=1e-3, accuracy=4) -> ResidualReport:
    """Pointwise u_tx + u_x^2 + u u_xx + alpha u_xxxx - beta u - h_x."""
    return residual_u_field(sol.u, sol.topo, sol.params, grid, t, mode, dt, accuracy)


def residual_u_sampled(levels: Sequence[SampledField], topo, params, mode="fd",
                       accuracy=4) -> ResidualReport:
    """Residual from three equally spaced time levels; the middle one is used."""
    if len(levels) < 3:
        raise MissingTimeLevels("sampled residual needs three time levels")
    levels = levels[-3:]
    grid, t = levels[1].grid, levels[1].t
    jet, M = _sampled_jet(levels, grid, mode, accuracy, (0, 1, 2, 4), True)
    sub = _sub_grid(grid, M)
    r = u_residual_from_jet(jet, topo.h_x(sub.x, t), params)
    return _report(r, np.max(np.abs(jet[(0, 0)])), sub, M, mode)


def residual_v(sol, grid: Grid1D, t, mode="analytic", dt=1e-3, accuracy=4) -> ResidualReport:
    """Pointwise v_tx + v_x v_xx + alpha v_xxxx - beta v - h."""
    if mode == "analytic":
        x = grid.x
        jet = _analytic_jet(sol.v, x, t, _U_KEYS)
        r = v_residual_from_jet(jet, sol.topo.h(x, t), sol.params)
        return _report(r, np.max(np.abs(jet[(0, 0)])), grid, 0, mode)
    return residual_v_sampled(_levels(sol.v, grid, t, dt), sol.topo, sol.params, mode, accuracy)


def residual_v_sampled(levels, topo, params, mode="fd", accuracy=4) -> ResidualReport:
    if len(levels) < 3:
        raise MissingTimeLevels("sampled residual needs three time levels")
    levels = levels[-3:]
    grid, t = levels[1].grid, levels[1].t
    jet, M = _sampled_jet(levels, grid, mode, accuracy, (0, 1, 2, 4), True)
    sub = _sub_grid(grid, M)
    r = v_residual_from_jet(jet, topo.h(sub.x, t), params)
    return _report(r, np.max(np.abs(jet[(0, 0)])), sub, M, mode)


def residual_reduction(V, h1, params: PhysParams, zgrid: Grid1D, variant="x1", mu=0.0,
                       h2=0.0, accuracy=4) -> ResidualReport:
    """Residual of a reduction ODE on a z-grid.

    variant ``x1``: alpha V'''' + V'V'' - beta V - h1
    variant ``case1``: same with h1 = h2 z^2
    variant ``case2``: alpha V'''' + (V' - mu) V'' - beta V
    ``V`` is a Profile (analytic) or a SampledField (finite differences).
    """
    al, b = float(params.alpha), float(params.beta)
    if isinstance(V, SampledField):
        M = StencilSpec(4, accuracy).half_width
        vals = V.values
        sub = zgrid.trimmed(M)
        d = {0: vals[M:len(vals) - M]}
        for k in (1, 2, 4):
            raw = fd_apply(vals, zgrid.dx, k, accuracy)
            s = M - StencilSpec(k, accuracy).half_width
            d[k] = raw[s:len(raw) - s] if s else raw
        z, mode = sub.x, "fd"
    else:
        M, sub, mode = 0, zgrid, "analytic"
        z = zgrid.x
        d = {k: V.d(z, k) for k in (0, 1, 2, 4)}
    if variant == "x1":
        forcing = h1(z) if h1 is not None else 0.0
        shift = 0.0
    elif variant == "case1":
        forcing, shift = h2 * z * z, 0.0
    elif variant == "case2":
        forcing, shift = 0.0, mu
    else:
        raise ValueError(f"unknown reduction variant {variant!r}")
    r = al * d[4] + (d[1] - shift) * d[2] - b * d[0] - forcing
    return _report(r, np.max(np.abs(d[0])), sub, M, mode)


# ---------------------------------------------------------------------------
# conserved currents


@dataclass(frozen=True)
class ConservedCurrent:
    """Density T and flux Phi as functions of a potential field v at (x, t)."""

    label: str
    density: Callable
    flux: Callable


def _vjet(v, x, t):
    return {k: v.d(x, t, *k) for k in [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1)]}


def energy_current(topo, params: PhysParams) -> ConservedCurrent:
    """Current of the Galilean-boost symmetry (energy), for h = h1(chi) - beta c chi + h0."""
    if not isinstance(topo, GalileanTopography):
        raise ShapeMismatch("energy current needs h = h1(chi) - beta c(t) chi + h0(t)")
    al, b = float(params.alpha), float(params.beta)
    c, h0, h1 = topo.speed, topo.h0, topo.h1

    def density(v, x, t):
        j = _vjet(v, x, t)
        z = chi(c, x, t)
        ct = c(t)
        return (0.5 * al * j[(2, 0)] ** 2 - j[(1, 0)] ** 3 / 6 + 0.5 * ct * j[(1, 0)] ** 2
                - 0.5 * b * j[(0, 0)] ** 2
                + (b * ct * z + c.d(t) - h1(z) - h0(t)) * j[(0, 0)])

    def flux(v, x, t):
        j = _vjet(v, x, t)
        z = chi(c, x, t)
        C = c.primitive(t)
        ct, c1, c2 = c(t), c.d(t), c.d(t, 2)
        g0, g1 = h0(t), h0.d(t)
        q = (c2 - g1) / b
        K = c1 * z + q
        v0, vx, vxx, vxxx, vt, vtx = (j[(0, 0)], j[(1, 0)], j[(2, 0)], j[(3, 0)],
                                      j[(0, 1)], j[(1, 1)])
        h1z = h1(z)
        return (
            al * (vt + ct * vx - K) * vxxx - 0.5 * al * ct * vxx**2 - al * (vtx - c1) * vxx
            + ct * vx**3 / 3 + 0.5 * (vt - K) * vx**2 + 0.5 * vt**2 - K * vt
            - 0.5 * b * ct * v0**2 + (b * ct * ct * z - ct * (h1z + g0)) * v0
            - b / 3 * ct * c1 * z**3 + 0.5 * (ct * g1 + c1 * g0 - ct * c2) * z**2
            + g0 * q * z + c1 * h1.moment(z) + q * h1.antiderivative(z)
            - b / 3 * c1 * ct * C**3 - 0.5 * (c1 * g0 + ct * g1 - ct * c2) * C**2 + g0 * q * C
        )

    return ConservedCurrent("energy-current", density, flux)


def momentum_current(topo, params: PhysParams) -> ConservedCurrent:
    """Current of the moving-frame symmetry (momentum), for h quadratic in x."""
    if not isinstance(topo, QuadraticTopography):
        raise ShapeMismatch("momentum current needs h = h2(t) x^2 + h1(t) x + h0(t)")
    al, b = float(params.alpha), float(params.beta)
    H2, H1, H0 = topo.h2, topo.h1, topo.h0

    def weight(t):
        return np.exp(-2.0 / b * H2.primitive(t))

    def density(v, x, t):
        return (0.5 * v.d(x, t, 1) ** 2 - 2.0 / b * H2(t) * v.d(x, t)) * weight(t)

    def flux(v, x, t):
        j = _vjet(v, x, t)
        x = np.asarray(x, dtype=float)
        h2, h1, h0, h2t = H2(t), H1(t), H0(t), H2.d(t)
        k0 = 4 * h2**2 / b**3 - 2 * h2t / b**2 - h1 / b
        K = k0 - 2 * h2 * x / b
        v0, vx, vxx, vxxx, vt = j[(0, 0)], j[(1, 0)], j[(2, 0)], j[(3, 0)], j[(0, 1)]
        h = h2 * x * x + h1 * x + h0
        return weight(t) * (
            al * (vx - K) * vxxx - 0.5 * al * vxx**2 - 2 * al / b * h2 * vxx + vx**3 / 3
            - 0.5 * K * vx**2 - K * vt - 0.5 * b * v0**2 - h * v0
            - h2**2 * x**4 / (2 * b) + (k0 * h2 / 3 - 2 * h2 * h1 / (3 * b)) * x**3
            + (0.5 * k0 * h1 - h2 * h0 / b) * x**2 + k0 * h0 * x
        )

    return ConservedCurrent("momentum-current", density, flux)


def continuity_check(current: ConservedCurrent, v: ClosedFormField, grid: Grid1D, times,
                     dt=1e-3, accuracy=4) -> ResidualReport:
    """D_t T + D_x Phi with centered differences (2nd order in t, ``accuracy`` in x)."""
    x = grid.x
    worst, scale, trim, keep = -1.0, 0.0, 0, None
    for t in np.atleast_1d(times):
        Tp, Tm = current.density(v, x, t + dt), current.density(v, x, t - dt)
        dT = (Tp - Tm) / (2 * dt)
        # fluxes carry polynomial-in-x terms, so never wrap around
        dPhi = fd_apply(current.flux(v, x, t), grid.dx, 1, accuracy)
        trim = StencilSpec(1, accuracy).half_width
        r = dT[trim:len(dT) - trim] + dPhi
        m = float(np.max(np.abs(r)))
        scale = max(scale, float(np.max(np.abs(current.density(v, x, t)))))
        if m > worst:
            worst, keep = m, r
    sub = Grid1D(grid.a + trim * grid.dx, grid.a + (grid.n - 1 - trim) * grid.dx, grid.n - 2 * trim)
    return ResidualReport(worst, worst / (1 + scale), sub, trim, "fd", keep)


def conserved_integral(current: ConservedCurrent, v: ClosedFormField, grid: Grid1D, t) -> float:
    return quadrature(SampledField(grid, float(t), current.density(v, grid.x, t)))


def drift(series) -> float:
    s = np.asarray(series, dtype=float)
    return float(np.max(np.abs(s - s[0])) / (1.0 + abs(s[0])))


def mass_balance(sol, a, b, t, dt=1e-4, n=2001) -> float:
    """[u_t + u u_x + alpha u_xxx] from a to b - beta int u - (h(b) - h(a)).

    u_t at the endpoints is a centered time difference; the integral is Simpson.
    """
    al, be = float(sol.params.alpha), float(sol.params.beta)
    u = sol.u
    ends = np.array([a, b], dtype=float)
    ut = (u(ends, t + dt) - u(ends, t - dt)) / (2 * dt)
    flux = ut + u(ends, t) * u.d(ends, t, 1) + al * u.d(ends, t, 3)
    xs = np.linspace(a, b, n)
    integral = simpson(u(xs, t), (b - a) / (n - 1))
    hb = sol.topo.h(ends, t)
    return float((flux[1] - flux[0]) - be * integral - (hb[1] - hb[0]))


def first_integral(state, mu, params: PhysParams, printed=False):
    """Conserved quantity of alpha V'''' + (V' - mu) V'' - beta V = 0.

    ``printed=True`` evaluates the alternative coefficient set
    (beta, beta/2, 1/(3 alpha), mu/(2 alpha), beta/2), kept for comparison;
    it is only conserved in special cases such as alpha = beta = 1.
    """
    V, V1, V2, V3 = (np.asarray(s, dtype=float) for s in state)
    al, b = float(params.alpha), float(params.beta)
    if printed:
        return (b * V1 * V3 - 0.5 * b * V2**2 + V1**3 / (3 * al)
                - mu / (2 * al) * V1**2 - 0.5 * b * V**2)
    return al * V1 * V3 - 0.5 * al * V2**2 + V1**3 / 3 - 0.5 * mu * V1**2 - 0.5 * b * V**2


# ---------------------------------------------------------------------------
# Hamiltonian and Lagrangian structure


def _periodic_H(topo, grid, t):
    """Split H = H_per + s x with H_per periodic; returns (H_per, s)."""
    if topo is None:
        return np.zeros(grid.n), 0.0
    x = grid.x
    s = float((topo.H(np.array([grid.b]), t) - topo.H(np.array([grid.a]), t))[0] / grid.length)
    return topo.H(x, t) - s * x, s


def _check_periodic_zero_mean(u: SampledField):
    if not u.grid.periodic:
        raise NotPeriodic("Hamiltonian check needs a periodic grid")
    scale = np.max(np.abs(u.values))
    if abs(np.mean(u.values)) > 1e-8 * max(scale, 1e-300):
        raise NonZeroMean(f"mean(u) = {np.mean(u.values):.3e}")


def variational_derivative(u: SampledField, topo, params: PhysParams):
    """-alpha u_xx - u^2/2 + beta (d^-1)^2 u + H, with the linear part of H removed."""
    g = u.grid
    al, b = float(params.alpha), float(params.beta)
    v = antiderivative_apply(u.values, g)
    w = antiderivative_apply(v, g)
    Hp, _ = _periodic_H(topo, g, u.t)
    return -al * dft_apply(u.values, g, 2) - 0.5 * u.values**2 + b * w + Hp


def evolution_rhs(u: SampledField, topo, params: PhysParams):
    """-u u_x - alpha u_xxx + beta d^-1 u + h, projected to zero mean."""
    g = u.grid
    al, b = float(params.alpha), float(params.beta)
    vals = u.values
    out = (-vals * dft_apply(vals, g, 1) - al * dft_apply(vals, g, 3)
           + b * antiderivative_apply(vals, g))
    if topo is not None:
        out = out + topo.h(g.x, u.t)
    return out - np.mean(out)


def hamiltonian_check(u: SampledField, topo, params: PhysParams, u_t=None) -> ResidualReport:
    """Compare D_x(dH/du) (spectral) with u_t, or with the evolution form when
    ``u_t`` is not supplied."""
    _check_periodic_zero_mean(u)
    g = u.grid
    dH = dft_apply(variational_derivative(u, topo, params), g, 1)
    rhs = evolution_rhs(u, topo, params)
    structural = float(np.max(np.abs(dH - rhs)))
    target = rhs if u_t is None else np.asarray(u_t, dtype=float)
    r = target - dH
    return _report(r, np.max(np.abs(u.values)), g, 0, "dft", structural=structural)


def hamiltonian_functional(u_vals, grid: Grid1D, topo, params: PhysParams, t=0.0) -> float:
    al, b = float(params.alpha), float(params.beta)
    ux = dft_apply(u_vals, grid, 1)
    v = antiderivative_apply(u_vals, grid)
    Hp, _ = _periodic_H(topo, grid, t)
    dens = 0.5 * al * ux**2 - u_vals**3 / 6 - 0.5 * b * v**2 + Hp * u_vals
    return float(np.sum(dens) * grid.dx)


def gateaux_check(u: SampledField, topo, params: PhysParams, n_dirs=20, eps=1e-4,
                  modes=8, seed=0) -> float:
    """Worst relative gap between a centered directional difference of the
    discrete functional and <dH/du, w> over random band-limited directions."""
    _check_periodic_zero_mean(u)
    g = u.grid
    rng = np.random.default_rng(seed)
    grad = variational_derivative(u, topo, params)
    worst = 0.0
    for _ in range(n_dirs):
        ks = np.arange(1, modes + 1)
        a, bb = rng.normal(size=modes), rng.normal(size=modes)
        w = (a[:, None] * np.cos(ks[:, None] * 2 * np.pi * (g.x - g.a) / g.length)
             + bb[:, None] * np.sin(ks[:, None] * 2 * np.pi * (g.x - g.a) / g.length)).sum(0)
        fp = hamiltonian_functional(u.values + eps * w, g, topo, params, u.t)
        fm = hamiltonian_functional(u.values - eps * w, g, topo, params, u.t)
        fd = (fp - fm) / (2 * eps)
        exact = float(np.sum(grad * w) * g.dx)
        # Cauchy-Schwarz scale keeps near-orthogonal directions meaningful
        scale = max(abs(exact), float(np.sqrt(np.sum(grad**2) * np.sum(w**2))) * g.dx)
        worst = max(worst, abs(fd - exact) / max(scale, 1e-300))
    return worst


def lagrangian_density(v: ClosedFormField, grid: Grid1D, t, params: PhysParams, topo) -> SampledField:
    """L = -v_t v_x/2 - v_x^3/6 + alpha v_xx^2/2 - beta v^2/2 + H v_x."""
    al, b = float(params.alpha), float(params.beta)
    x = grid.x
    j = _vjet(v, x, t)
    L = (-0.5 * j[(0, 1)] * j[(1, 0)] - j[(1, 0)] ** 3 / 6 + 0.5 * al * j[(2, 0)] ** 2
         - 0.5 * b * j[(0, 0)] ** 2 + topo.H(x, t) * j[(1, 0)])
    return SampledField(grid, float(t), L)


def euler_lagrange_residual(v: ClosedFormField, grid: Grid1D, t, params: PhysParams, topo,
                            dt=1e-3, accuracy=4) -> ResidualReport:
    """E_v(L) with the outer total derivatives taken by finite differences.

    The report's ``extra['vs_residual_v']`` is the largest gap to the
    analytic potential-equation residual on the same points.
    """
    al, b = float(params.alpha), float(params.beta)
    x = grid.x
    dLdvt = [-0.5 * v.d(x, t + s * dt, 1) for s in (-1, 1)]
    j = _vjet(v, x, t)
    dLdv = -b * j[(0, 0)]
    dLdvx = -0.5 * j[(0, 1)] - 0.5 * j[(1, 0)] ** 2 + topo.H(x, t)
    dLdvxx = al * j[(2, 0)]
    m1 = StencilSpec(1, accuracy).half_width
    m2 = StencilSpec(2, accuracy).half_width
    M = max(m1, m2)

    def cut(a, m):
        s = M - m
        return a[s:len(a) - s] if s else a

    E = (dLdv[M:len(x) - M]
         - (dLdvt[1] - dLdvt[0])[M:len(x) - M] / (2 * dt)
         - cut(fd_apply(dLdvx, grid.dx, 1, accuracy), m1)
         + cut(fd_apply(dLdvxx, grid.dx, 2, accuracy), m2))
    sub = grid.trimmed(M)
    jv = _analytic_jet(v, sub.x, t, _U_KEYS)
    rv = v_residual_from_jet(jv, topo.h(sub.x, t), params)
    return _report(E, np.max(np.abs(j[(0, 0)])), sub, M, "fd",
                   vs_residual_v=float(np.max(np.abs(E - rv))))


# ---------------------------------------------------------------------------
# symmetry orbits


def symmetry_orbit_check(gen, eps_list, sol, grid: Grid1D, t) -> list:
    """residual_u of each transformed solution against the unchanged topography."""
    if isinstance(gen, X1Generator) and not isinstance(sol.topo, GalileanTopography):
        raise ShapeMismatch("X1 orbits need a Galilean-compatible topography")
    if isinstance(gen, X2Generator) and not isinstance(sol.topo, QuadraticTopography):
        raise ShapeMismatch("X2 orbits need a quadratic-in-x topography")
    reports = []
    for eps in eps_list:
        ut = apply_symmetry(gen, eps, sol.u)
        reports.append(residual_u_field(ut, sol.topo, sol.params, grid, t))
    return reports


# ---------------------------------------------------------------------------
# sweeps


def worker_count():
    try:
        n = int(os.environ.get("OSTRO_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else min(8, os.cpu_count() or 1)


def sweep(fn, items):
    """Map ``fn`` over ``items`` with up to OSTRO_THREADS workers; results keep input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
