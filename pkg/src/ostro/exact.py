"""Catalog of closed-form solutions of the forced Ostrovsky equation

    (u_t + u u_x + alpha u_xxx)_x = beta u + h_x

together with their potentials v (u = v_x) and topographies h.

Galilean-boost families share one assembly path: a profile V(z) and a
forcing profile h1(z) satisfying alpha V'''' + V'V'' - beta V = h1 give
u = V'(chi) + c(t) with chi = x - C(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .core import (
    ClosedFormField,
    ForcingProfile,
    GalileanTopography,
    PhysParams,
    PolyProfile,
    Profile,
    QuadraticTopography,
    SymbolicProfile,
    TimeFunction,
    Topography,
    chi,
)
from .errors import (
    DegenerateDenominator,
    NegativeDiscriminant,
    NonPositiveParameter,
    ShapeMismatch,
    SignMismatch,
    ZeroCoefficient,
)
from .polyexact import is_rational, rational_sqrt


@dataclass(frozen=True)
class CubicCoeffs:
    """V = c3 z^3 + c2 z^2 + c1 z + c0 and h1 = a3 z^3 + ... + a0."""

    c3: Any
    c2: Any
    c1: Any
    c0: Any
    a3: Any
    a2: Any
    a1: Any
    a0: Any
    family: str

    def as_dict(self):
        return {k: getattr(self, k) for k in ("c3", "c2", "c1", "c0", "a3", "a2", "a1", "a0")}

    def profiles(self):
        V = PolyProfile([self.c0, self.c1, self.c2, self.c3])
        h1 = PolyProfile([self.a0, self.a1, self.a2, self.a3])
        return V, h1


@dataclass(frozen=True)
class ExactSolution:
    family: str
    params: PhysParams
    u: ClosedFormField
    v: ClosedFormField
    topo: Topography
    speed: TimeFunction
    coeffs: dict = field(default_factory=dict)
    V: Profile | None = None
    h1: Profile | None = None
    mu: float = 0.0


def _exact_or_float(*vals):
    """All-Fraction if every value is rational, else all-float."""
    if all(is_rational(v) for v in vals):
        return [Fraction(v) for v in vals], True
    return [float(v) for v in vals], False


def _vanishes(d, exact, scale):
    return d == 0 if exact else abs(d) <= 1e-12 * max(1.0, abs(scale))


# ---------------------------------------------------------------------------
# polynomial families


def cubic_family_1(a3, a2, a1, a0, params: PhysParams, branch=+1) -> CubicCoeffs:
    """General cubic forcing; ``branch`` picks the sign of the square root."""
    (a3, a2, a1, a0, b), exact = _exact_or_float(a3, a2, a1, a0, params.beta)
    disc = 72 * a3 + b * b
    if disc < 0:
        raise NegativeDiscriminant(f"72*a3 + beta^2 = {disc} < 0")
    root = rational_sqrt(disc) if exact else None
    if root is None:
        if exact:
            (a3, a2, a1, a0, b), exact = [float(v) for v in (a3, a2, a1, a0, b)], False
        root = math.sqrt(float(disc))
    sgn = 1 if branch >= 0 else -1
    c3 = (b + sgn * root) / 36
    d2 = 18 * c3 - b
    if _vanishes(d2, exact, b):
        raise DegenerateDenominator("18 c3 - beta = 0 (boundary with the beta/18 family)")
    d1 = 18 * (6 * a3 + b * b) * c3 - (24 * a3 + b * b) * b
    if _vanishes(d1, exact, abs(b) ** 3 + abs(a3 * b)):
        raise DegenerateDenominator("c1 denominator vanishes (boundary with the beta/6 family)")
    c2 = a2 / d2
    c1 = (18 * a1 * a3 - 4 * a2 * a2 - 18 * b * a1 * c3 + b * b * a1) / d1
    # constant term of the split system: 2 c1 c2 - beta c0 - a0 = 0
    c0 = (2 * c1 * c2 - a0) / b
    return CubicCoeffs(c3, c2, c1, c0, a3, a2, a1, a0, "fam1")


def cubic_family_2(a2, a0, c0, params: PhysParams) -> CubicCoeffs:
    """c3 = beta/6 family, free constant c0."""
    (a2, a0, c0, b), _ = _exact_or_float(a2, a0, c0, params.beta)
    if a2 == 0:
        raise ZeroCoefficient("family 2 needs a2 != 0")
    return CubicCoeffs(
        c3=b / 6, c2=a2 / (2 * b), c1=(a0 + c0 * b) * b / a2, c0=c0,
        a3=b * b / 3, a2=a2, a1=a2 * a2 / (b * b), a0=a0, family="fam2",
    )


def cubic_family_3(c2, a1, a0, params: PhysParams) -> CubicCoeffs:
    """c3 = beta/18 family, free c2, quadratic and cubic forcing absent."""
    (c2, a1, a0, b), _ = _exact_or_float(c2, a1, a0, params.beta)
    return CubicCoeffs(
        c3=b / 18, c2=c2,
        c1=(12 * c2 * c2 - 3 * a1) / (2 * b),
        c0=(12 * c2**3 - 3 * a1 * c2 - b * a0) / (b * b),
        a3=0 * b, a2=0 * b, a1=a1, a0=a0, family="fam3",
    )


# ---------------------------------------------------------------------------
# Galilean-boost (X1) assembly


def forcing_from_profile(V: Profile, params: PhysParams) -> Profile:
    """h1 = alpha V'''' + V'V'' - beta V, so the reduction ODE holds exactly."""
    return ForcingProfile(V, params.alpha, params.beta)


def x1_potential(V: Profile, speed: TimeFunction, h0: TimeFunction, beta) -> ClosedFormField:
    """v = V(chi) + c chi + (c' - h0)/beta."""
    b = float(beta)
    c = speed

    def fn(x, t, kx, kt):
        z = chi(c, x, t)
        if kt == 0:
            if kx == 0:
                return V(z) + c(t) * z + (c.d(t) - h0(t)) / b
            if kx == 1:
                return V.d(z, 1) + c(t)
            return V.d(z, kx)
        if kx == 0:
            ct = c(t)
            return -ct * V.d(z, 1) + c.d(t) * z - ct * ct + (c.d(t, 2) - h0.d(t)) / b
        if kx == 1:
            return -c(t) * V.d(z, 2) + c.d(t)
        return -c(t) * V.d(z, kx + 1)

    return ClosedFormField(fn, name="v")


def _x1_u(V: Profile, speed: TimeFunction) -> ClosedFormField:
    c = speed

    def fn(x, t, kx, kt):
        z = chi(c, x, t)
        if kt == 0:
            out = V.d(z, kx + 1)
            return out + c(t) if kx == 0 else out
        out = -c(t) * V.d(z, kx + 2)
        return out + c.d(t) if kx == 0 else out

    return ClosedFormField(fn, name="u")


def galilean_solution(V, h1, params, speed=None, h0=None, family="x1", coeffs=None):
    speed = speed or TimeFunction.zero()
    h0 = h0 or TimeFunction.zero()
    topo = GalileanTopography(h1, speed, h0, params.beta, unforced=True).with_unforced_flag()
    return ExactSolution(
        family=family, params=params, u=_x1_u(V, speed),
        v=x1_potential(V, speed, h0, params.beta), topo=topo, speed=speed,
        coeffs=dict(coeffs or {}), V=V, h1=h1,
    )


def cubic_solution(coeffs: CubicCoeffs, params, speed=None, h0=None):
    V, h1 = coeffs.profiles()
    return galilean_solution(V, h1, params, speed, h0, coeffs.family, coeffs.as_dict())


def rational_forcing_closed_form(c0, params) -> Profile:
    """Transcribed forcing for the rational wave: a1 z/(c0+z^2) + a3 z/(c0+z^2)^3."""
    a1 = -24 * float(params.alpha) * float(params.beta)
    a3 = -((a1 / float(params.beta)) ** 2)
    return SymbolicProfile("rational_forcing", a1=a1, a3=a3, c0=c0)


def solitary_forcing_closed_form(k, params) -> Profile:
    al, b = float(params.alpha), float(params.beta)
    return SymbolicProfile("tanh_forcing", A=-12 * k * al * b, B=-96 * k**5 * al * al, k=k)


def rational_wave(c0, params: PhysParams, speed=None, h0=None) -> ExactSolution:
    """Heavy-tailed single hump from V = 24 alpha z/(c0 + z^2), so that
    u = c + 24 alpha (c0 - chi^2)/(chi^2 + c0)^2."""
    if not c0 > 0:
        raise NonPositiveParameter(f"rational wave needs c0 > 0, got {c0}")
    V = SymbolicProfile("rational", c1=24 * float(params.alpha), c0=c0)
    h1 = rational_forcing_closed_form(c0, params)
    return galilean_solution(V, h1, params, speed, h0, "rational", {"c0": c0})


def solitary_wave(k, params: PhysParams, speed=None, h0=None) -> ExactSolution:
    """u = c + 12 alpha k^2 sech^2(k chi)."""
    if not k > 0:
        raise NonPositiveParameter(f"solitary wave needs k > 0, got {k}")
    V = SymbolicProfile("tanh", c1=12 * float(params.alpha) * k, k=k)
    return galilean_solution(
        V, forcing_from_profile(V, params), params, speed, h0, "solitary", {"k": k}
    )


def oscillatory_frequency(params: PhysParams) -> float:
    ratio = float(params.beta) / float(params.alpha)
    if not ratio > 0:
        raise SignMismatch("oscillatory family needs beta/alpha > 0")
    return ratio**0.25


def oscillatory_wave(c0, c1, phi, params: PhysParams, speed=None, h0=None) -> ExactSolution:
    """u = c - c1 w sin(w chi + phi) with w^4 = beta/alpha."""
    w = oscillatory_frequency(params)
    if c1 == 0:
        raise ZeroCoefficient("oscillatory family needs c1 != 0")
    V = SymbolicProfile("cosine", c0=c0, c1=c1, w=w, ph=phi)
    return galilean_solution(
        V, forcing_from_profile(V, params), params, speed, h0, "oscillatory",
        {"c0": c0, "c1": c1, "phi": phi, "omega": w},
    )


# ---------------------------------------------------------------------------
# moving-frame (X2) family


def _frame_K(topo: QuadraticTopography, b, t, k=0):
    """K = h1/b + 2 h2'/b^2 - 4 h2^2/b^3 and its first t-derivative."""
    h2, h1 = topo.h2, topo.h1
    if k == 0:
        return h1(t) / b + 2 * h2.d(t) / b**2 - 4 * h2(t) ** 2 / b**3
    return h1.d(t) / b + 2 * h2.d(t, 2) / b**2 - 8 * h2(t) * h2.d(t) / b**3


def _frame_gauge(topo: QuadraticTopography, b, t, k=0):
    """Time-only part of v that makes the potential equation hold exactly."""
    h2, h1, h0 = topo.h2, topo.h1, topo.h0
    if k == 0:
        return (
            -b**4 * h0(t) - b**3 * h1.d(t) + 2 * b**2 * (h1(t) * h2(t) - h2.d(t, 2))
            + 12 * b * h2(t) * h2.d(t) - 8 * h2(t) ** 3
        ) / b**5
    return (
        -b**4 * h0.d(t) - b**3 * h1.d(t, 2)
        + 2 * b**2 * (h1.d(t) * h2(t) + h1(t) * h2.d(t) - h2.d(t, 3))
        + 12 * b * (h2.d(t) ** 2 + h2(t) * h2.d(t, 2)) - 24 * h2(t) ** 2 * h2.d(t)
    ) / b**5


def x2_potential(topo: QuadraticTopography, params: PhysParams, gauge="consistent"):
    """v = W(t) - h2 x^2/beta - K(t) x.

    ``gauge="zero"`` takes W = 0 (the bare invariant form); the default picks
    W so that v itself solves the potential equation, not just u = v_x.
    """
    b = float(params.beta)
    h2 = topo.h2
    use_w = gauge == "consistent"

    def fn(x, t, kx, kt):
        x = np.asarray(x, dtype=float)
        k = kt
        H2 = h2.d(t, k) if k else h2(t)
        K = _frame_K(topo, b, t, k)
        if kx == 0:
            W = _frame_gauge(topo, b, t, k) if use_w else 0.0
            return W - H2 * x * x / b - K * x
        if kx == 1:
            return -2 * H2 * x / b - K
        if kx == 2:
            return -2 * H2 / b + 0 * x
        return 0 * x

    return ClosedFormField(fn, name="v")


def frame_shift_solution(topo: QuadraticTopography, params: PhysParams, gauge="consistent"):
    """u = -(2/beta) h2 x - K(t), linear in x."""
    if not isinstance(topo, QuadraticTopography):
        raise ShapeMismatch("frame-shift solutions need a quadratic-in-x topography")
    b = float(params.beta)

    def fn(x, t, kx, kt):
        x = np.asarray(x, dtype=float)
        H2 = topo.h2.d(t, kt) if kt else topo.h2(t)
        if kx == 0:
            return -2 * H2 * x / b - _frame_K(topo, b, t, kt)
        if kx == 1:
            return -2 * H2 / b + 0 * x
        return 0 * x

    return ExactSolution(
        family="frameshift", params=params, u=ClosedFormField(fn, "u"),
        v=x2_potential(topo, params, gauge), topo=topo, speed=TimeFunction.zero(),
        coeffs={"h2": topo.h2.to_dict(), "h1": topo.h1.to_dict(), "h0": topo.h0.to_dict()},
    )


# ---------------------------------------------------------------------------
# travelling-wave (X1 + mu X2) family, topography linear in x


def affine_time_function(tf: TimeFunction, scale, shift) -> TimeFunction:
    """shift + scale * tf, kept within the cataloged kinds."""
    s = float(scale)
    kind = "constant" if tf.kind == "zero" else tf.kind
    return TimeFunction(
        kind, c0=float(shift) + s * float(tf.c0), c1=s * float(tf.c1),
        amp=s * float(tf.amp), omega=tf.omega, phase=tf.phase,
    )


def tw_profile(mu, c2, params) -> PolyProfile:
    b = float(params.beta)
    return PolyProfile([
        3 * c2 * (4 * c2 * c2 - b * mu) / b**2,
        (12 * c2 * c2 - b * mu) / (2 * b),
        c2,
        b / 18,
    ])


def tw_potential(mu, c2, h1_of_t, h0_of_t, params) -> ClosedFormField:
    """v = V(zeta) - (mu - ct) x + (ct' - h0)/beta, zeta = x - int ct."""
    b = float(params.beta)
    V = tw_profile(mu, c2, params)
    ct = affine_time_function(h1_of_t, -1.0 / b, mu)
    h0 = h0_of_t

    def fn(x, t, kx, kt):
        x = np.asarray(x, dtype=float)
        z = chi(ct, x, t)
        if kt == 0:
            if kx == 0:
                return V(z) - (mu - ct(t)) * x + (ct.d(t) - h0(t)) / b
            if kx == 1:
                return V.d(z, 1) - mu + ct(t)
            return V.d(z, kx)
        if kx == 0:
            return -ct(t) * V.d(z, 1) + ct.d(t) * x + (ct.d(t, 2) - h0.d(t)) / b
        if kx == 1:
            return -ct(t) * V.d(z, 2) + ct.d(t)
        return -ct(t) * V.d(z, kx + 1)

    return ClosedFormField(fn, name="v")


def cubic_tw_solution(mu, c2, h1_of_t=None, h0_of_t=None, params=None) -> ExactSolution:
    """Quadratic-in-zeta wave moving with speed mu - h1(t)/beta."""
    h1_of_t = h1_of_t or TimeFunction.zero()
    h0_of_t = h0_of_t or TimeFunction.zero()
    b = float(params.beta)
    V = tw_profile(mu, c2, params)
    ct = affine_time_function(h1_of_t, -1.0 / b, mu)

    def fn(x, t, kx, kt):
        z = chi(ct, x, t)
        if kt == 0:
            out = V.d(z, kx + 1)
            return out + ct(t) - mu if kx == 0 else out
        out = -ct(t) * V.d(z, kx + 2)
        return out + ct.d(t) if kx == 0 else out

    topo = QuadraticTopography(
        TimeFunction.zero(), h1_of_t, h0_of_t, unforced=True
    ).with_unforced_flag()
    return ExactSolution(
        family="cubictw", params=params, u=ClosedFormField(fn, "u"),
        v=tw_potential(mu, c2, h1_of_t, h0_of_t, params), topo=topo, speed=ct,
        coeffs={"mu": mu, "c2": c2}, V=V, mu=float(mu),
    )


def potential_of(kind: str, **inputs) -> ClosedFormField:
    """Dispatch to the potential for an invariant-solution family.

    kind ``x1``: V, speed, h0, beta.  ``x2``: topo, params, gauge.
    ``tw``: mu, c2, h1_of_t, h0_of_t, params.
    """
    if kind == "x1":
        return x1_potential(inputs["V"], inputs.get("speed") or TimeFunction.zero(),
                            inputs.get("h0") or TimeFunction.zero(), inputs["beta"])
    if kind == "x2":
        return x2_potential(inputs["topo"], inputs["params"], inputs.get("gauge", "consistent"))
    if kind == "tw":
        return tw_potential(inputs["mu"], inputs["c2"],
                            inputs.get("h1_of_t") or TimeFunction.zero(),
                            inputs.get("h0_of_t") or TimeFunction.zero(), inputs["params"])
    raise KeyError(kind)


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class FamilySpec:
    name: str
    summary: str
    signature: tuple
    defaults: dict
    alpha: Any = 1
    beta: Any = 1
    tag: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "summary": self.summary,
            "parameters": list(self.signature),
            "defaults": {k: (str(v) if isinstance(v, Fraction) else v)
                         for k, v in self.defaults.items()},
            "alpha": str(self.alpha) if isinstance(self.alpha, Fraction) else self.alpha,
            "beta": str(self.beta) if isinstance(self.beta, Fraction) else self.beta,
            "tag": self.tag,
        }


FAMILIES = {
    f.name: f
    for f in [
        FamilySpec("fam1", "cubic profile under general cubic forcing",
                   ("a3", "a2", "a1", "a0", "branch"),
                   {"a3": Fraction(8, 9), "a2": 0, "a1": 0, "a0": 0, "branch": 1},
                   1, 6, "cubic family, c3 = (beta +- sqrt(72 a3 + beta^2))/36"),
        FamilySpec("fam2", "cubic profile, c3 = beta/6, free c0",
                   ("a2", "a0", "c0"), {"a2": 12, "a0": 0, "c0": 0},
                   1, 6, "cubic family, c3 = beta/6"),
        FamilySpec("fam3", "cubic profile, c3 = beta/18, free c2",
                   ("c2", "a1", "a0"), {"c2": 1, "a1": 0, "a0": 0},
                   1, 2, "cubic family, c3 = beta/18"),
        FamilySpec("rational", "single-hump heavy-tail wave",
                   ("c0",), {"c0": 1.0}, 1, 1, "rational wave, u ~ (c0 - chi^2)/(chi^2 + c0)^2"),
        FamilySpec("solitary", "generalized solitary wave",
                   ("k",), {"k": 1.0}, 1, 1, "sech^2 wave, amplitude 12 alpha k^2"),
        FamilySpec("oscillatory", "oscillatory generalized travelling wave",
                   ("c0", "c1", "phi"), {"c0": 0.0, "c1": 1.0, "phi": 0.0},
                   1, 1, "sinusoidal wave, omega^4 = beta/alpha"),
        FamilySpec("frameshift", "linear-in-x state in a moving frame",
                   ("h2", "h1", "h0"),
                   {"h2": {"kind": "constant", "c0": 1.0}, "h1": {"kind": "zero"},
                    "h0": {"kind": "zero"}},
                   1, 2, "quadratic-in-x topography, V arbitrary"),
        FamilySpec("cubictw", "quadratic travelling wave under linear-in-x topography",
                   ("mu", "c2", "h1", "h0"),
                   {"mu": 2.0, "c2": 0.0, "h1": {"kind": "zero"}, "h0": {"kind": "zero"}},
                   1, 1, "travelling wave, speed mu - h1(t)/beta"),
    ]
}


def time_function(spec) -> TimeFunction:
    """TimeFunction from a TimeFunction, a number (constant) or a dict."""
    if spec is None:
        return TimeFunction.zero()
    if isinstance(spec, TimeFunction):
        return spec
    if isinstance(spec, (int, float, Fraction)):
        return TimeFunction.constant(float(spec))
    d = dict(spec)
    kind = d.pop("kind", "constant")
    return TimeFunction(kind, **{k: float(v) for k, v in d.items()})


def build(name: str, values: dict | None = None, params: PhysParams | None = None,
          speed=None, h0=None) -> ExactSolution:
    """Construct a catalog solution by family name; missing values take defaults."""
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}")
    spec = FAMILIES[name]
    vals = dict(spec.defaults)
    vals.update(values or {})
    params = params or PhysParams(spec.alpha, spec.beta)
    speed = time_function(speed)
    h0 = time_function(h0)
    if name == "fam1":
        cc = cubic_family_1(vals["a3"], vals["a2"], vals["a1"], vals["a0"], params,
                            int(vals["branch"]))
        return cubic_solution(cc, params, speed, h0)
    if name == "fam2":
        return cubic_solution(cubic_family_2(vals["a2"], vals["a0"], vals["c0"], params),
                              params, speed, h0)
    if name == "fam3":
        return cubic_solution(cubic_family_3(vals["c2"], vals["a1"], vals["a0"], params),
                              params, speed, h0)
    if name == "rational":
        return rational_wave(float(vals["c0"]), params, speed, h0)
    if name == "solitary":
        return solitary_wave(float(vals["k"]), params, speed, h0)
    if name == "oscillatory":
        return oscillatory_wave(float(vals["c0"]), float(vals["c1"]), float(vals["phi"]),
                                params, speed, h0)
    if name == "frameshift":
        topo = QuadraticTopography(time_function(vals["h2"]), time_function(vals["h1"]),
                                   time_function(vals["h0"]), unforced=True).with_unforced_flag()
        return frame_shift_solution(topo, params)
    return cubic_tw_solution(float(vals["mu"]), float(vals["c2"]), time_function(vals["h1"]),
                             time_function(vals["h0"]), params)


PROFILE_KINDS = ("constant", "linear", "sinusoid")


def random_time_function(rng, kind, scale=1.0) -> TimeFunction:
    c0 = scale * rng.uniform(-1, 1)
    if kind == "constant":
        return TimeFunction.constant(c0)
    if kind == "linear":
        return TimeFunction.linear(c0, scale * rng.uniform(-1, 1))
    return TimeFunction.sinusoid(c0, scale * rng.uniform(0.2, 1), rng.uniform(0.5, 2),
                                 rng.uniform(0, 2 * math.pi))


def _pm(rng, lo, hi):
    return rng.choice([-1.0, 1.0]) * rng.uniform(lo, hi)


def random_instance(name: str, rng, profile_kind="constant") -> ExactSolution:
    """A random valid member of family ``name`` with a random time profile of the
    given kind (speed for Galilean families, h2 or h1 otherwise)."""
    al = _pm(rng, 0.5, 2.0)
    b = _pm(rng, 0.5, 2.0)
    if name == "oscillatory":
        b = math.copysign(abs(b), al)
    params = PhysParams(al, b)
    speed = random_time_function(rng, profile_kind)
    h0 = random_time_function(rng, profile_kind)
    if name == "fam1":
        while True:
            vals = {"a3": rng.uniform(-b * b / 80, 1.0), "a2": rng.uniform(-1, 1),
                    "a1": rng.uniform(-1, 1), "a0": rng.uniform(-1, 1),
                    "branch": int(rng.choice([-1, 1]))}
            try:
                cc = cubic_family_1(vals["a3"], vals["a2"], vals["a1"], vals["a0"],
                                    params, vals["branch"])
            except DegenerateDenominator:
                continue
            if max(abs(cc.c2), abs(cc.c1), abs(cc.c0)) < 1e3:
                return cubic_solution(cc, params, speed, h0)
    if name == "fam2":
        vals = {"a2": _pm(rng, 0.5, 2.0), "a0": rng.uniform(-1, 1), "c0": rng.uniform(-1, 1)}
    elif name == "fam3":
        vals = {"c2": rng.uniform(-1, 1), "a1": rng.uniform(-1, 1), "a0": rng.uniform(-1, 1)}
    elif name == "rational":
        vals = {"c0": rng.uniform(0.5, 2.0)}
    elif name == "solitary":
        vals = {"k": rng.uniform(0.3, 1.2)}
    elif name == "oscillatory":
        vals = {"c0": rng.uniform(-1, 1), "c1": _pm(rng, 0.2, 1.5),
                "phi": rng.uniform(0, 2 * math.pi)}
    elif name == "frameshift":
        vals = {"h2": random_time_function(rng, profile_kind, 0.5),
                "h1": random_time_function(rng, profile_kind),
                "h0": random_time_function(rng, profile_kind)}
    elif name == "cubictw":
        vals = {"mu": rng.uniform(-2, 2), "c2": rng.uniform(-1, 1),
                "h1": random_time_function(rng, profile_kind),
                "h0": random_time_function(rng, profile_kind)}
    else:
        raise KeyError(name)
    return build(name, vals, params, speed, h0)
