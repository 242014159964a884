"""Grid calculus: centered finite differences up to fifth derivatives, Fourier
differentiation and zero-mean antidifferentiation on periodic grids,
quadrature, and observed convergence orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .core import Grid1D, SampledField
from .errors import GridTooSmall, InsufficientSamples, NonZeroMean, NotPeriodic


@dataclass(frozen=True)
class StencilSpec:
    order: int
    accuracy: int = 4
    boundary: str = "interior"  # or "periodic"

    def __post_init__(self):
        if not 1 <= self.order <= 5:
            raise ValueError("derivative order must be in 1..5")
        if self.accuracy not in (2, 4):
            raise ValueError("accuracy must be 2 or 4")
        if self.boundary not in ("interior", "periodic"):
            raise ValueError("boundary must be 'interior' or 'periodic'")

    @property
    def half_width(self):
        return (self.order + 1) // 2 + self.accuracy // 2 - 1


@lru_cache(maxsize=None)
def stencil_weights(order: int, accuracy: int):
    """Exact centered weights on offsets -m..m, as Fractions.

    Solves the moment conditions sum_j w_j j^i = i! [i == order] for
    i = 0..2m by Gaussian elimination over the rationals.
    """
    m = StencilSpec(order, accuracy).half_width
    offs = list(range(-m, m + 1))
    n = len(offs)
    A = [[Fraction(j) ** i for j in offs] + [Fraction(_fact(order) if i == order else 0)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(offs), tuple(A[i][n] for i in range(n))


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def fd_apply(values, dx, order, accuracy=4, periodic=False):
    """Raw-array centered difference.  Interior output has length n - 2m."""
    offs, ws = stencil_weights(order, accuracy)
    m = offs[-1]
    v = np.asarray(values)
    n = v.shape[-1]
    if n < 2 * m + 1:
        raise GridTooSmall(f"{n} points; stencil needs {2 * m + 1}")
    w = [float(c) for c in ws]
    if periodic:
        out = sum(wj * np.roll(v, -j, axis=-1) for j, wj in zip(offs, w) if wj)
    else:
        out = sum(wj * v[..., m + j:n - m + j] for j, wj in zip(offs, w) if wj)
    return out / dx**order


def fd_derivative(f: SampledField, spec: StencilSpec) -> SampledField:
    """Centered derivative.  With the interior policy the result lives on the
    trimmed grid ``f.grid.trimmed(spec.half_width)``."""
    m = spec.half_width
    g = f.grid
    if g.n < 2 * m + 1:
        raise GridTooSmall(f"grid has {g.n} points; stencil needs {2 * m + 1}")
    if spec.boundary == "periodic":
        if not g.periodic:
            raise NotPeriodic("periodic stencil on a non-periodic grid")
        return SampledField(g, f.t, fd_apply(f.values, g.dx, spec.order, spec.accuracy, True))
    return SampledField(
        g.trimmed(m), f.t, fd_apply(f.values, g.dx, spec.order, spec.accuracy, False)
    )


def wavenumbers(grid: Grid1D):
    return 2 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)


def spectral_multiplier(grid: Grid1D, k: int):
    """(i kappa)^k on the rfft wavenumbers, Nyquist removed for odd k."""
    kap = wavenumbers(grid)
    mult = (1j * kap) ** k
    if k % 2 and grid.n % 2 == 0:
        mult[-1] = 0.0
    return mult


def dft_apply(values, grid: Grid1D, k: int):
    return np.fft.irfft(spectral_multiplier(grid, k) * np.fft.rfft(values), n=grid.n)


def antiderivative_apply(values, grid: Grid1D):
    """Zero-mean periodic primitive of the fluctuating part of ``values``."""
    kap = wavenumbers(grid)
    fh = np.fft.rfft(values)
    inv = np.zeros_like(fh)
    inv[1:] = fh[1:] / (1j * kap[1:])
    if grid.n % 2 == 0:
        inv[-1] = 0.0
    return np.fft.irfft(inv, n=grid.n)


def dft_derivative(f: SampledField, k: int = 1) -> SampledField:
    if not f.grid.periodic:
        raise NotPeriodic("spectral derivative needs a periodic grid")
    if not 1 <= k <= 5:
        raise ValueError("derivative order must be in 1..5")
    return SampledField(f.grid, f.t, dft_apply(f.values, f.grid, k))


def zero_mean_antiderivative(f: SampledField) -> SampledField:
    if not f.grid.periodic:
        raise NotPeriodic("antiderivative needs a periodic grid")
    scale = np.max(np.abs(f.values))
    if abs(np.mean(f.values)) > 1e-8 * scale or (scale == 0 and np.mean(f.values) != 0):
        raise NonZeroMean(f"field mean {np.mean(f.values):.3e} is not negligible")
    return SampledField(f.grid, f.t, antiderivative_apply(f.values, f.grid))


def quadrature(f: SampledField) -> float:
    """Trapezoid rule; on a periodic grid this is the rectangle sum."""
    g = f.grid
    if g.periodic:
        return float(np.sum(f.values) * g.dx)
    return float(integrate.trapezoid(f.values, dx=g.dx))


def simpson(values, dx) -> float:
    return float(integrate.simpson(values, dx=dx))


def convergence_order(samples) -> float:
    """Least-squares slope of log(err) against log(dx)."""
    samples = [(float(h), float(e)) for h, e in samples]
    if len(samples) < 3:
        raise InsufficientSamples(f"need at least 3 (dx, err) samples, got {len(samples)}")
    dxs = [h for h, _ in samples]
    if any(b >= a for a, b in zip(dxs, dxs[1:])):
        raise ValueError("dx must be strictly decreasing")
    lh = np.log(dxs)
    le = np.log([e for _, e in samples])
    return float(np.polyfit(lh, le, 1)[0])
