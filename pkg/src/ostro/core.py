"""Shared domain types: model constants, time functions, profiles, topographies,
grids, sampled and closed-form fields, and the two point-symmetry generators.

All objects here are immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp
from numpy.polynomial import Polynomial

from .errors import DegenerateTopography, PreconditionError


@dataclass(frozen=True)
class PhysParams:
    """Dispersion ``alpha`` and rotation ``beta``; both must be nonzero.

    Values may be ints or Fractions so exact coefficient formulas stay exact.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise PreconditionError("alpha and beta must both be nonzero")


# ---------------------------------------------------------------------------
# scalar functions of time


@dataclass(frozen=True)
class TimeFunction:
    """A cataloged scalar function of t with all derivatives and a primitive.

    kinds: ``zero``, ``constant`` (c0), ``linear`` (c0 + c1 t) and
    ``sinusoid`` (c0 + amp sin(omega t + phase)).  The primitive vanishes at t=0.
    """

    kind: str = "zero"
    c0: float = 0.0
    c1: float = 0.0
    amp: float = 0.0
    omega: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "linear", "sinusoid"):
            raise PreconditionError(f"unknown time-function kind {self.kind!r}")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, c0):
        return cls("constant", c0=c0)

    @classmethod
    def linear(cls, c0, c1):
        return cls("linear", c0=c0, c1=c1)

    @classmethod
    def sinusoid(cls, c0, amp, omega, phase=0.0):
        return cls("sinusoid", c0=c0, amp=amp, omega=omega, phase=phase)

    @property
    def is_zero(self):
        return self.kind == "zero" or (
            self.c0 == 0 and self.c1 == 0 and self.amp == 0
        )

    @property
    def is_constant(self):
        return self.kind in ("zero", "constant") or (
            self.c1 == 0 and self.amp == 0
        )

    def __call__(self, t):
        return self.d(t, 0)

    def d(self, t, k=1):
        t = np.asarray(t, dtype=float)
        kind = self.kind
        c0, c1 = float(self.c0), float(self.c1)
        if kind == "zero":
            return np.zeros_like(t)
        if kind == "constant":
            return np.full_like(t, c0 if k == 0 else 0.0)
        if kind == "linear":
            if k == 0:
                return c0 + c1 * t
            return np.full_like(t, c1 if k == 1 else 0.0)
        amp, om, ph = float(self.amp), float(self.omega), float(self.phase)
        val = amp * om**k * np.sin(om * t + ph + k * math.pi / 2)
        return val + c0 if k == 0 else val

    def primitive(self, t):
        t = np.asarray(t, dtype=float)
        c0, c1 = float(self.c0), float(self.c1)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return c0 * t
        if self.kind == "linear":
            return c0 * t + 0.5 * c1 * t * t
        amp, om, ph = float(self.amp), float(self.omega), float(self.phase)
        return c0 * t - amp / om * (np.cos(om * t + ph) - math.cos(ph))

    def to_dict(self):
        return {
            "kind": self.kind,
            "c0": float(self.c0),
            "c1": float(self.c1),
            "amp": float(self.amp),
            "omega": float(self.omega),
            "phase": float(self.phase),
        }


SpeedProfile = TimeFunction


def chi(profile: TimeFunction, x, t):
    """Moving coordinate x - C(t), with C the primitive of the speed."""
    return np.asarray(x, dtype=float) - profile.primitive(t)


# ---------------------------------------------------------------------------
# one-variable profiles with derivatives of any order

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class Profile:
    """A function f(z) with analytic derivatives ``d(z, k)`` for any k >= 0."""

    def __call__(self, z):
        return self.d(z, 0)

    def d(self, z, k=0):
        raise NotImplementedError

    def antiderivative(self, z):
        """Primitive normalized to vanish at z = 0."""
        raise NotImplementedError

    def moment(self, z):
        """Integral of s*f(s) from 0 to z, by composite Gauss-Legendre."""
        z = np.asarray(z, dtype=float)
        flat = z.reshape(-1)
        if flat.size == 0:
            return z.copy()
        panels = max(1, int(math.ceil(np.max(np.abs(flat)) / 0.5)))
        frac = (np.arange(panels)[:, None] + 0.5 * (_GL_NODES[None, :] + 1.0)) / panels
        s = flat[:, None, None] * frac[None, :, :]
        vals = (s * self.d(s, 0)) * (_GL_WEIGHTS / (2.0 * panels))
        return (flat * vals.sum(axis=(1, 2))).reshape(z.shape)


class PolyProfile(Profile):
    """Polynomial profile, coefficients in ascending degree."""

    def __init__(self, coeffs):
        self.coeffs = tuple(float(c) for c in coeffs)
        self._p = Polynomial(self.coeffs)

    def __repr__(self):
        return f"PolyProfile({self.coeffs})"

    def d(self, z, k=0):
        z = np.asarray(z, dtype=float)
        return self._p.deriv(k)(z) if k else self._p(z)

    def antiderivative(self, z):
        return self._p.integ(lbnd=0)(np.asarray(z, dtype=float))

    def moment(self, z):
        return (Polynomial([0.0, 1.0]) * self._p).integ(lbnd=0)(np.asarray(z, dtype=float))


def _logcosh(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


_Z = sp.Symbol("z")


def _tmpl(expr, names, anti):
    return {"expr": expr, "names": names, "anti": anti}


def _build_templates():
    z = _Z
    c0, c1, k, w, ph, a1, a3, A, B = sp.symbols("c0 c1 k w ph a1 a3 A B")
    return {
        # c1 z / (c0 + z^2)
        "rational": _tmpl(
            c1 * z / (c0 + z**2), (c1, c0),
            lambda z, c1, c0: 0.5 * c1 * np.log1p(z * z / c0),
        ),
        # c1 tanh(k z)
        "tanh": _tmpl(
            c1 * sp.tanh(k * z), (c1, k),
            lambda z, c1, k: c1 / k * _logcosh(k * z),
        ),
        # c0 + c1 cos(w z + ph)
        "cosine": _tmpl(
            c0 + c1 * sp.cos(w * z + ph), (c0, c1, w, ph),
            lambda z, c0, c1, w, ph: c0 * z + c1 / w * (np.sin(w * z + ph) - np.sin(ph)),
        ),
        # a1 z/(c0+z^2) + a3 z/(c0+z^2)^3
        "rational_forcing": _tmpl(
            a1 * z / (c0 + z**2) + a3 * z / (c0 + z**2) ** 3, (a1, a3, c0),
            lambda z, a1, a3, c0: 0.5 * a1 * np.log1p(z * z / c0)
            - 0.25 * a3 * ((c0 + z * z) ** -2 - c0**-2.0),
        ),
        # A tanh(kz) + B sech^2(kz) tanh(kz)
        "tanh_forcing": _tmpl(
            A * sp.tanh(k * z) + B * sp.tanh(k * z) / sp.cosh(k * z) ** 2, (A, B, k),
            lambda z, A, B, k: A / k * _logcosh(k * z) + B * np.tanh(k * z) ** 2 / (2 * k),
        ),
    }


_TEMPLATES = _build_templates()


@lru_cache(maxsize=None)
def _template_derivative(name: str, k: int) -> Callable:
    t = _TEMPLATES[name]
    expr = sp.diff(t["expr"], _Z, k) if k else t["expr"]
    return sp.lambdify((_Z, *t["names"]), expr, modules="numpy", cse=True)


class SymbolicProfile(Profile):
    """Profile from a fixed symbolic template; derivatives are compiled once
    per (template, order) and shared by all parameter values."""

    def __init__(self, template: str, **params):
        if template not in _TEMPLATES:
            raise KeyError(template)
        self.template = template
        names = [str(s) for s in _TEMPLATES[template]["names"]]
        self.args = tuple(float(params[n]) for n in names)

    def __repr__(self):
        return f"SymbolicProfile({self.template!r}, {self.args})"

    def d(self, z, k=0):
        z = np.asarray(z, dtype=float)
        out = _template_derivative(self.template, k)(z, *self.args)
        return np.broadcast_to(np.asarray(out, dtype=float), z.shape).copy()

    def antiderivative(self, z):
        z = np.asarray(z, dtype=float)
        return _TEMPLATES[self.template]["anti"](z, *self.args)


class ForcingProfile(Profile):
    """alpha V'''' + V' V'' - beta V for a given profile V.

    Derivatives follow from the Leibniz rule, so any order is available.
    """

    def __init__(self, V: Profile, alpha, beta):
        self.V = V
        self.alpha = float(alpha)
        self.beta = float(beta)

    def __repr__(self):
        return f"ForcingProfile({self.V!r}, alpha={self.alpha}, beta={self.beta})"

    def d(self, z, k=0):
        V = self.V
        out = self.alpha * V.d(z, 4 + k) - self.beta * V.d(z, k)
        for j in range(k + 1):
            out = out + math.comb(k, j) * V.d(z, 1 + j) * V.d(z, 2 + k - j)
        return out

    def antiderivative(self, z):
        V = self.V
        z = np.asarray(z, dtype=float)
        zero = np.zeros(1)
        base = self.alpha * V.d(zero, 3) + 0.5 * V.d(zero, 1) ** 2
        return (
            self.alpha * V.d(z, 3) + 0.5 * V.d(z, 1) ** 2 - base[0]
            - self.beta * V.antiderivative(z)
        )


# ---------------------------------------------------------------------------
# topography


_SAMPLE_X, _SAMPLE_T = np.meshgrid(np.linspace(-5, 5, 21), np.linspace(-5, 5, 21))


class Topography:
    """Base for forcing families.  Subclasses provide h, h_x, h_t and the
    x-primitive H normalized so that H(0, t) = 0."""

    unforced: bool

    def h(self, x, t):
        raise NotImplementedError

    def h_x(self, x, t, k=1):
        raise NotImplementedError

    def h_t(self, x, t):
        raise NotImplementedError

    def H(self, x, t):
        raise NotImplementedError

    def is_forced(self):
        hx = self.h_x(_SAMPLE_X, _SAMPLE_T)
        return bool(np.any(np.abs(hx) > 1e-12))

    def _validate(self):
        if not self.unforced and not self.is_forced():
            raise DegenerateTopography(
                "h_x vanishes on the sample grid; set unforced=True for an unforced run"
            )

    def as_field(self):
        return ClosedFormField(
            lambda x, t, kx, kt: self.h_t(x, t) if kt else (self.h(x, t) if kx == 0 else self.h_x(x, t, kx)),
            name="h",
        )

    def with_unforced_flag(self):
        """Copy with the unforced flag set exactly when h_x vanishes."""
        return replace(self, unforced=not self.is_forced())


@dataclass(frozen=True)
class GalileanTopography(Topography):
    """h = h1(chi) - beta c(t) chi + h0(t) with chi = x - C(t)."""

    h1: Profile
    speed: TimeFunction
    h0: TimeFunction
    beta: float
    unforced: bool = False

    def __post_init__(self):
        self._validate()

    def h(self, x, t):
        z = chi(self.speed, x, t)
        return self.h1(z) - float(self.beta) * self.speed(t) * z + self.h0(t)

    def h_x(self, x, t, k=1):
        z = chi(self.speed, x, t)
        out = self.h1.d(z, k)
        if k == 1:
            out = out - float(self.beta) * self.speed(t)
        return out

    def h_t(self, x, t):
        z = chi(self.speed, x, t)
        c = self.speed(t)
        b = float(self.beta)
        return -c * self.h1.d(z, 1) - b * self.speed.d(t) * z + b * c * c + self.h0.d(t)

    def H(self, x, t):
        x = np.asarray(x, dtype=float)
        C = self.speed.primitive(t)
        z = x - C
        return (
            self.h1.antiderivative(z) - self.h1.antiderivative(-C + 0 * z)
            - 0.5 * float(self.beta) * self.speed(t) * (z * z - C * C)
            + self.h0(t) * x
        )


@dataclass(frozen=True)
class QuadraticTopography(Topography):
    """h = h2(t) x^2 + h1(t) x + h0(t)."""

    h2: TimeFunction
    h1: TimeFunction
    h0: TimeFunction
    unforced: bool = False

    def __post_init__(self):
        self._validate()

    @property
    def constant_h2(self):
        return self.h2.is_constant

    def h(self, x, t):
        x = np.asarray(x, dtype=float)
        return self.h2(t) * x * x + self.h1(t) * x + self.h0(t)

    def h_x(self, x, t, k=1):
        x = np.asarray(x, dtype=float)
        if k == 1:
            return 2 * self.h2(t) * x + self.h1(t)
        if k == 2:
            return 2 * self.h2(t) + 0 * x
        return np.zeros(np.broadcast(x, t).shape)

    def h_t(self, x, t):
        x = np.asarray(x, dtype=float)
        return self.h2.d(t) * x * x + self.h1.d(t) * x + self.h0.d(t)

    def H(self, x, t):
        x = np.asarray(x, dtype=float)
        return self.h2(t) * x**3 / 3 + 0.5 * self.h1(t) * x * x + self.h0(t) * x


def topo_eval(topo: Topography, x, t):
    """(h, h_x, h_t, H) at (x, t)."""
    return topo.h(x, t), topo.h_x(x, t), topo.h_t(x, t), topo.H(x, t)


# ---------------------------------------------------------------------------
# grids and fields


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int
    periodic: bool = False

    def __post_init__(self):
        if not self.b > self.a:
            raise PreconditionError("grid needs b > a")
        if self.n < 8:
            raise PreconditionError("grid needs at least 8 points")

    @property
    def dx(self):
        return (self.b - self.a) / (self.n if self.periodic else self.n - 1)

    @property
    def x(self):
        return self.a + self.dx * np.arange(self.n)

    @property
    def length(self):
        return self.b - self.a

    def trimmed(self, m):
        """Interior sub-grid dropping m points at each end (non-periodic)."""
        dx = self.dx
        return Grid1D(self.a + m * dx, self.a + (self.n - 1 - m) * dx, self.n - 2 * m, False)


@dataclass(frozen=True)
class SampledField:
    grid: Grid1D
    t: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.n,):
            raise PreconditionError(
                f"field has {vals.shape} values for a grid of {self.grid.n} points"
            )
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("field contains non-finite entries")
        object.__setattr__(self, "values", vals)


class ClosedFormField:
    """Evaluator f(x, t) with analytic partials.

    ``fn(x, t, kx, kt)`` returns the kx-th x-derivative (kt in {0, 1} adds one
    t-derivative).  Orders kx <= 5 are always supported.
    """

    def __init__(self, fn, name=""):
        self._fn = fn
        self.name = name

    def d(self, x, t, kx=0, kt=0):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._fn(x, t, kx, kt), dtype=float)
        return np.broadcast_to(out, np.broadcast(x, t).shape).copy()

    def __call__(self, x, t):
        return self.d(x, t)

    def dx(self, x, t, k=1):
        return self.d(x, t, k, 0)

    def dt(self, x, t):
        return self.d(x, t, 0, 1)

    def dtx(self, x, t, k=1):
        return self.d(x, t, k, 1)

    def sample(self, grid: Grid1D, t, kx=0, kt=0):
        return SampledField(grid, float(t), self.d(grid.x, t, kx, kt))

    def __add__(self, other):
        return ClosedFormField(
            lambda x, t, kx, kt: self._fn(x, t, kx, kt) + other._fn(x, t, kx, kt),
            name=f"({self.name}+{other.name})",
        )


def zero_field():
    return ClosedFormField(lambda x, t, kx, kt: np.zeros(np.broadcast(x, t).shape), "0")


# ---------------------------------------------------------------------------
# point symmetries acting on u


@dataclass(frozen=True)
class X1Generator:
    """Accelerated Galilean boost with speed c(t).  ``h0`` only enters the
    potential-level action and is carried for completeness."""

    speed: TimeFunction
    h0: TimeFunction = TimeFunction()

    def point_map(self, t, x, u, eps):
        c, C = self.speed, self.speed.primitive
        return t + eps, x + C(t + eps) - C(t), u + c(t + eps) - c(t)

    def apply(self, eps, u: ClosedFormField) -> ClosedFormField:
        if eps == 0:
            return u
        c, C = self.speed, self.speed.primitive

        def fn(x, t, kx, kt):
            T = t - eps
            dc = c(t) - c(T)
            X = x - (C(t) - C(T))
            if kt == 0:
                return u.d(X, T, kx) + (dc if kx == 0 else 0.0)
            out = u.d(X, T, kx, 1) - dc * u.d(X, T, kx + 1)
            if kx == 0:
                out = out + c.d(t) - c.d(T)
            return out

        return ClosedFormField(fn, name=f"X1[{eps}]{u.name}")


@dataclass(frozen=True)
class X2Generator:
    """Shift to a moving frame; a pure translation when h2 vanishes."""

    h2: TimeFunction
    beta: float

    def E(self, t, k=0):
        b = float(self.beta)
        e = np.exp(-2.0 / b * self.h2.primitive(t))
        if k == 0:
            return e
        e1 = -2.0 / b * self.h2(t) * e
        if k == 1:
            return e1
        return -2.0 / b * (self.h2.d(t) * e + self.h2(t) * e1)

    def point_map(self, t, x, u, eps):
        return t, x + eps * self.E(t), u + eps * self.E(t, 1)

    def apply(self, eps, u: ClosedFormField) -> ClosedFormField:
        if eps == 0:
            return u

        def fn(x, t, kx, kt):
            X = x - eps * self.E(t)
            if kt == 0:
                return u.d(X, t, kx) + (eps * self.E(t, 1) if kx == 0 else 0.0)
            out = u.d(X, t, kx, 1) - eps * self.E(t, 1) * u.d(X, t, kx + 1)
            if kx == 0:
                out = out + eps * self.E(t, 2)
            return out

        return ClosedFormField(fn, name=f"X2[{eps}]{u.name}")


SymmetryGenerator = X1Generator | X2Generator


def apply_symmetry(gen, eps, u: ClosedFormField) -> ClosedFormField:
    """Transformed u-field under the one-parameter group of ``gen``."""
    return gen.apply(eps, u)
