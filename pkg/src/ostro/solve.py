"""Integrators: a fourth-order reduction ODE as a first-order system, and a
Fourier method-of-lines solver for the periodic evolution form

    u_t = P0[-u u_x - alpha u_xxx + beta d^-1 u + h].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .core import Grid1D, PhysParams, SampledField, Topography
from .errors import (
    NonFiniteState,
    NonZeroMean,
    NotPeriodic,
    StabilityViolation,
    StepUnderflow,
)
from .numerics import antiderivative_apply, spectral_multiplier, wavenumbers


# ---------------------------------------------------------------------------
# reduction ODEs


@dataclass(frozen=True)
class OdeState:
    zeta: float
    y: tuple

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        if len(y) != 4:
            raise ValueError("state is (V, V', V'', V''')")
        if not np.all(np.isfinite(y)):
            raise NonFiniteState("initial state is not finite")
        object.__setattr__(self, "y", y)


@dataclass
class Trajectory:
    zeta: np.ndarray
    y: np.ndarray  # shape (n, 4)
    method: str
    complete: bool = True

    def to_rows(self):
        return [(z, *row) for z, row in zip(self.zeta, self.y)]


def reduction_rhs(params: PhysParams, variant="case2", mu=0.0, h1=None):
    """f(z, y) for y = (V, V', V'', V''') with
    alpha V'''' = h1 + beta V - (V' - mu) V''   (x1: mu = 0; case2: h1 = 0)."""
    al, b = float(params.alpha), float(params.beta)
    if variant == "x1":
        shift = 0.0
        forcing = h1
    elif variant == "case2":
        shift = float(mu)
        forcing = None
    else:
        raise ValueError(f"unknown reduction variant {variant!r}")

    def f(z, y):
        V, V1, V2, V3 = y
        g = b * V - (V1 - shift) * V2
        if forcing is not None:
            g = g + forcing(z)
        return np.array([V1, V2, V3, g / al], dtype=float)

    return f


def _rk4(f, z0, y0, step, n):
    zs = z0 + step * np.arange(n + 1)
    ys = np.empty((n + 1, 4))
    ys[0] = y0
    y = np.array(y0, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        return _rk4_loop(f, zs, ys, y, step, n)


def _rk4_loop(f, zs, ys, y, step, n):
    for i in range(n):
        z = zs[i]
        k1 = f(z, y)
        k2 = f(z + step / 2, y + step / 2 * k1)
        k3 = f(z + step / 2, y + step / 2 * k2)
        k4 = f(z + step, y + step * k3)
        y = y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            part = Trajectory(zs[: i + 1], ys[: i + 1].copy(), "rk4", complete=False)
            raise NonFiniteState(f"state blew up near zeta = {zs[i + 1]:.6g}", partial=part)
        ys[i + 1] = y
    return Trajectory(zs, ys, "rk4")


def ode_integrate(variant, initial: OdeState, step, span, params: PhysParams, method="rk4",
                  mu=0.0, h1=None, rtol=1e-9, atol=1e-12) -> Trajectory:
    """Integrate a reduction ODE from ``initial.zeta`` over ``span``, reporting the
    state at every multiple of ``step``."""
    if params.alpha == 0:
        raise ValueError("alpha must be nonzero")
    f = reduction_rhs(params, variant, mu, h1)
    n = int(round(abs(span) / step))
    step = float(np.copysign(step, span))
    z0 = float(initial.zeta)
    if method == "rk4":
        return _rk4(f, z0, initial.y, step, n)
    if method != "rk45":
        raise ValueError(f"unknown method {method!r}")
    zs = z0 + step * np.arange(n + 1)
    sol = solve_ivp(f, (z0, zs[-1]), initial.y, method="RK45", t_eval=zs, rtol=rtol, atol=atol)
    if sol.status == -1:
        part = Trajectory(sol.t, sol.y.T, "rk45", complete=False)
        if sol.y.size and not np.all(np.isfinite(sol.y)):
            raise NonFiniteState(sol.message, partial=part)
        raise StepUnderflow(f"adaptive step underflow: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteState("state blew up", partial=Trajectory(sol.t, sol.y.T, "rk45", False))
    return Trajectory(sol.t, sol.y.T, "rk45")


# ---------------------------------------------------------------------------
# periodic PDE


@dataclass
class PdeRun:
    grid: Grid1D
    dt: float
    t_end: float
    stepper: str
    times: np.ndarray
    states: np.ndarray = field(repr=False)
    monitors: dict = field(default_factory=dict)
    steps: int = 0
    complete: bool = True

    @property
    def final(self) -> SampledField:
        return SampledField(self.grid, float(self.times[-1]), self.states[-1])


def stability_bound(grid: Grid1D, params: PhysParams) -> float:
    """Largest explicit-RK4 step for the dispersive term."""
    kmax = np.pi / grid.dx
    return 2.8 / (abs(float(params.alpha)) * kmax**3)


def check_periodic_topography(topo, grid: Grid1D, t=0.0, tol=1e-9):
    """h must take equal values at both ends of the period (zero-mean h_x)."""
    if topo is None:
        return
    for tt in (t, t + 0.37, t + 1.0):
        ends = topo.h(np.array([grid.a, grid.b]), tt)
        scale = 1.0 + float(np.max(np.abs(topo.h(grid.x, tt))))
        if abs(ends[1] - ends[0]) > tol * scale:
            raise NotPeriodic("topography is not periodic on the grid (mean h_x != 0)")


def momentum(u, grid):
    return float(0.5 * np.sum(u * u) * grid.dx)


def energy(u, grid, params):
    al, b = float(params.alpha), float(params.beta)
    ux = np.fft.irfft(spectral_multiplier(grid, 1) * np.fft.rfft(u), n=grid.n)
    v = antiderivative_apply(u, grid)
    return float(np.sum(0.5 * al * ux**2 - u**3 / 6 - 0.5 * b * v**2) * grid.dx)


def _linear_symbol(grid, params):
    """Fourier symbol of -alpha d^3 + beta d^-1 (mean mode set to 0)."""
    kap = wavenumbers(grid)
    al, b = float(params.alpha), float(params.beta)
    L = np.zeros(kap.shape, dtype=complex)
    L[1:] = 1j * al * kap[1:] ** 3 - 1j * b / kap[1:]
    if grid.n % 2 == 0:
        L[-1] = 0.0
    return L


def pde_integrate(u0: SampledField, topo: Topography | None, params: PhysParams, dt, t_end,
                  monitors=("momentum", "energy", "mass", "mean"), stepper="rk4",
                  store_every=None) -> PdeRun:
    """Integrate from ``u0.t`` to ``t_end``.

    ``stepper="rk4"`` is classical RK4 on the full right side and enforces
    the dispersive bound.  ``stepper="ifrk4"`` treats the linear part exactly
    with an integrating factor (Lawson RK4) and only needs the advective
    bound dt (pi/dx) max|u| <= 2.8.
    """
    g = u0.grid
    if not g.periodic:
        raise NotPeriodic("the PDE solver needs a periodic grid")
    scale = float(np.max(np.abs(u0.values)))
    if abs(np.mean(u0.values)) > 1e-8 * scale or (scale == 0 and np.mean(u0.values) != 0):
        raise NonZeroMean(f"mean(u0) = {np.mean(u0.values):.3e}")
    check_periodic_topography(topo, g, u0.t)
    if stepper not in ("rk4", "ifrk4"):
        raise ValueError(f"unknown stepper {stepper!r}")
    if stepper == "rk4":
        bound = stability_bound(g, params)
        if dt > bound:
            raise StabilityViolation(f"dt = {dt:.3e} exceeds the RK4 bound {bound:.3e}", bound)

    x = g.x
    n_steps = int(round((t_end - u0.t) / dt))
    if store_every is None:
        store_every = max(1, n_steps // 200)
    D1 = spectral_multiplier(g, 1)
    L = _linear_symbol(g, params)
    unforced = topo is None or getattr(topo, "unforced", False)

    def forcing_hat(t):
        if topo is None:
            return 0.0
        hh = np.fft.rfft(topo.h(x, t))
        hh[0] = 0.0
        return hh

    def nonlinear_hat(uh, t):
        u = np.fft.irfft(uh, n=g.n)
        out = -0.5 * D1 * np.fft.rfft(u * u) + forcing_hat(t)
        out[0] = 0.0
        return out

    def full_hat(uh, t):
        return L * uh + nonlinear_hat(uh, t)

    times, states = [], []
    series = {m: [] for m in monitors if m != "energy" or unforced}

    def record(uh, t):
        u = np.fft.irfft(uh, n=g.n)
        times.append(t)
        states.append(u)
        for m in series:
            if m == "momentum":
                series[m].append(momentum(u, g))
            elif m == "energy":
                series[m].append(energy(u, g, params))
            elif m == "mass":
                series[m].append(float(np.sum(u) * g.dx))
            elif m == "mean":
                series[m].append(float(np.mean(u)))

    def finish(done, complete=True):
        return PdeRun(g, dt, t_end, stepper, np.array(times), np.array(states),
                      {k: np.array(v) for k, v in series.items()}, done, complete)

    uh = np.fft.rfft(u0.values)
    uh[0] = 0.0
    t = float(u0.t)
    record(uh, t)
    E = np.exp(L * dt / 2)
    E2 = E * E
    for i in range(n_steps):
        if stepper == "rk4":
            k1 = full_hat(uh, t)
            k2 = full_hat(uh + dt / 2 * k1, t + dt / 2)
            k3 = full_hat(uh + dt / 2 * k2, t + dt / 2)
            k4 = full_hat(uh + dt * k3, t + dt)
            uh = uh + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        else:
            umax = float(np.max(np.abs(np.fft.irfft(uh, n=g.n))))
            if dt * np.pi / g.dx * umax > 2.8:
                bound = 2.8 * g.dx / (np.pi * max(umax, 1e-300))
                raise StabilityViolation(
                    f"dt = {dt:.3e} exceeds the advective bound {bound:.3e}", bound)
            k1 = nonlinear_hat(uh, t)
            k2 = nonlinear_hat(E * (uh + dt / 2 * k1), t + dt / 2)
            k3 = nonlinear_hat(E * uh + dt / 2 * k2, t + dt / 2)
            k4 = nonlinear_hat(E2 * uh + dt * E * k3, t + dt)
            uh = E2 * uh + dt / 6 * (E2 * k1 + 2 * E * (k2 + k3) + k4)
        t = float(u0.t) + (i + 1) * dt
        if not np.all(np.isfinite(uh)):
            raise NonFiniteState(f"state blew up near t = {t:.6g}", partial=finish(i, False))
        if (i + 1) % store_every == 0 or i + 1 == n_steps:
            record(uh, t)
    return finish(n_steps)
