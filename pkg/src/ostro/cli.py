"""``ostro`` command line.

    ostro <catalog|emit|verify|conserve|simulate|reduce|identity> --config PATH [--json] [--out PATH]

Exit codes: 0 success, 1 computational failure or violated precondition,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction

import jsonschema
import numpy as np

from . import exact, polyexact, solve, verify
from .core import Grid1D, PhysParams, SampledField
from .errors import NonFiniteState, OstroError, StabilityViolation
from .numerics import convergence_order

COMMANDS = ("catalog", "emit", "verify", "conserve", "simulate", "reduce", "identity")

_NUM = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"}]}
_TF = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "object",
            "properties": {
                "kind": {"enum": ["zero", "constant", "linear", "sinusoid"]},
                "c0": {"type": "number"}, "c1": {"type": "number"},
                "amp": {"type": "number"}, "omega": {"type": "number"},
                "phase": {"type": "number"},
            },
            "additionalProperties": False,
        },
    ]
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "family": {"enum": list(exact.FAMILIES)},
        "alpha": _NUM,
        "beta": _NUM,
        "params": {"type": "object", "additionalProperties": {"anyOf": [_NUM, _TF]}},
        "speed": _TF,
        "h0": _TF,
        "grid": {
            "type": "object",
            "properties": {
                "a": {"type": "number"}, "b": {"type": "number"},
                "n": {"type": "integer", "minimum": 8}, "periodic": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "times": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "t": {"type": "number"},
        "tolerances": {
            "type": "object",
            "properties": {k: {"type": "number", "exclusiveMinimum": 0}
                           for k in ("residual", "reduction", "mass", "continuity", "drift")},
            "additionalProperties": False,
        },
        "perturb": {
            "type": "object",
            "properties": {"coefficient": {"type": "string"}, "delta": _NUM},
            "required": ["coefficient", "delta"],
            "additionalProperties": False,
        },
        "current": {"enum": ["energy", "momentum"]},
        "dt": {"type": "number", "exclusiveMinimum": 0},
        "t_end": {"type": "number"},
        "stepper": {"enum": ["rk4", "ifrk4"]},
        "store_every": {"type": "integer", "minimum": 1},
        "initial": {
            "oneOf": [
                {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4},
                {
                    "type": "object",
                    "properties": {
                        "kind": {"enum": ["family", "sine", "zero"]},
                        "amplitude": {"type": "number"},
                        "mode": {"type": "integer", "minimum": 1},
                    },
                    "required": ["kind"],
                    "additionalProperties": False,
                },
            ]
        },
        "topography": {"enum": ["family", "none"]},
        "variant": {"enum": ["x1", "case2"]},
        "mu": {"type": "number"},
        "step": {"type": "number", "exclusiveMinimum": 0},
        "span": {"type": "number"},
        "method": {"enum": ["rk4", "rk45"]},
        "balance": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

DEFAULT_TOL = {"residual": 1e-9, "reduction": 1e-9, "mass": 1e-6, "continuity": 1e-5,
               "drift": 1e-8}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _num(v):
    if isinstance(v, str):
        return polyexact.to_rational(v)
    return v


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from exc
    if "params" in cfg and "family" in cfg:
        allowed = set(exact.FAMILIES[cfg["family"]].signature)
        unknown = sorted(set(cfg["params"]) - allowed)
        if unknown:
            raise ConfigError(f"unknown parameters for {cfg['family']}: {', '.join(unknown)}")
    return cfg


def _family(cfg, default=None):
    name = cfg.get("family", default)
    if name is None:
        raise ConfigError("config needs a 'family'")
    return name


def _phys(cfg, name):
    spec = exact.FAMILIES[name]
    return PhysParams(_num(cfg.get("alpha", spec.alpha)), _num(cfg.get("beta", spec.beta)))


def _values(cfg):
    return {k: (_num(v) if not isinstance(v, dict) else v)
            for k, v in cfg.get("params", {}).items()}


def build_solution(cfg, default=None):
    name = _family(cfg, default)
    return exact.build(name, _values(cfg), _phys(cfg, name), cfg.get("speed"), cfg.get("h0"))


def _grid(cfg, a=-10.0, b=10.0, n=401, periodic=False):
    g = cfg.get("grid", {})
    return Grid1D(float(g.get("a", a)), float(g.get("b", b)), int(g.get("n", n)),
                  bool(g.get("periodic", periodic)))


def _fmt(x):
    return "%.16e" % float(x)


def csv_text(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_text(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    return obj


def dumps(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(cfg, args):
    entries = [exact.FAMILIES[k].to_dict() for k in exact.FAMILIES]
    return {"families": entries}, 0, None


def catalog_text(report):
    return "".join(f"{e['name']}({', '.join(e['parameters'])})  {e['summary']}  [{e['tag']}]\n"
                   for e in report["families"])


def cmd_emit(cfg, args):
    sol = build_solution(cfg)
    g = _grid(cfg)
    times = cfg.get("times", [cfg.get("t", 0.0)])
    rows = []
    for t in times:
        x = g.x
        cols = (x, np.full_like(x, t), sol.u(x, t), sol.v(x, t), sol.topo.h(x, t))
        rows.extend(zip(*cols))
    text = csv_text(["x", "t", "u", "v", "h"], rows)
    write_text(text, args.out)
    return {"rows": len(rows), "family": sol.family}, 0, None


def _perturbed(cfg, sol):
    p = cfg.get("perturb")
    if not p:
        return sol
    name, delta = p["coefficient"], float(_num(p["delta"]))
    spec = exact.FAMILIES[sol.family]
    if name in spec.signature:
        vals = dict(spec.defaults)
        vals.update(_values(cfg))
        vals[name] = float(vals[name]) + delta
        moved = exact.build(sol.family, vals, sol.params, cfg.get("speed"), cfg.get("h0"))
        return replace(moved, topo=sol.topo)
    if sol.family in ("fam1", "fam2", "fam3") and name in ("c3", "c2", "c1", "c0"):
        cc = exact.CubicCoeffs(**{**sol.coeffs, name: float(sol.coeffs[name]) + delta,
                                  "family": sol.family})
        V, _ = cc.profiles()
        moved = exact.galilean_solution(V, sol.h1, sol.params, sol.speed, sol.topo.h0,
                                        sol.family, cc.as_dict())
        return replace(moved, topo=sol.topo)
    raise ConfigError(f"cannot perturb {name!r} for family {sol.family}")


def _reduction_report(sol, g):
    if sol.V is None:
        return None
    z = Grid1D(g.a, g.b, g.n)
    if sol.family == "cubictw":
        return verify.residual_reduction(sol.V, None, sol.params, z, "case2", mu=sol.mu)
    return verify.residual_reduction(sol.V, sol.h1, sol.params, z, "x1")


def cmd_verify(cfg, args):
    base = build_solution(cfg)
    sol = _perturbed(cfg, base)
    tol = {**DEFAULT_TOL, **cfg.get("tolerances", {})}
    g = _grid(cfg)
    times = cfg.get("times", [0.0, 0.5, 1.0])
    ru = max((verify.residual_u(sol, g, t) for t in times), key=lambda r: r.rel_max)
    rv = max((verify.residual_v(sol, g, t) for t in times), key=lambda r: r.rel_max)
    red = _reduction_report(sol, g) if not cfg.get("perturb") else _reduction_report(base, g)
    mb = max(abs(verify.mass_balance(sol, g.a, g.b, t)) for t in times)
    umax = max(float(np.max(np.abs(sol.u(g.x, t)))) for t in times)
    checks = [
        ("residual_u", ru.rel_max <= tol["residual"]),
        ("residual_v", rv.rel_max <= tol["residual"]),
        ("reduction_residual", red is None or red.rel_max <= tol["reduction"]),
        ("mass_balance", mb <= tol["mass"] * (1 + umax)),
    ]
    failed = [name for name, ok in checks if not ok]
    report = {
        "family": sol.family,
        "params": {"alpha": sol.params.alpha, "beta": sol.params.beta, **sol.coeffs},
        "residual_u": ru,
        "residual_v": rv,
        "reduction_residual": red,
        "mass_balance": mb,
        "pass": not failed,
    }
    if failed:
        report["failed"] = failed
    code = 0 if not failed else 1
    msg = None if not failed else f"verification failed: {failed[0]}"
    return report, code, msg


def _orders(samples):
    """Observed order, or 'exact' when every error sits at roundoff."""
    if all(e < 1e-12 for _, e in samples):
        return "exact"
    return convergence_order([(h, max(e, 1e-300)) for h, e in samples])


def cmd_conserve(cfg, args):
    sol = build_solution(cfg)
    kind = cfg.get("current")
    if kind is None:
        kind = "momentum" if sol.family in ("frameshift", "cubictw") else "energy"
    make = verify.energy_current if kind == "energy" else verify.momentum_current
    cur = make(sol.topo, sol.params)
    tol = {**DEFAULT_TOL, **cfg.get("tolerances", {})}
    g = _grid(cfg, 0.0, 2 * math.pi, 256, True)
    times = cfg.get("times", [0.0, 0.5, 1.0])
    dt = float(cfg.get("dt", 1e-3))
    rep = verify.continuity_check(cur, sol.v, g, times, dt)
    t_probe = times[len(times) // 2]
    dt_rows = [(d, verify.continuity_check(cur, sol.v, g, [t_probe], d).max_abs)
               for d in (8 * dt, 4 * dt, 2 * dt, dt)]
    dx_rows = []
    for n in (g.n // 4, g.n // 2, g.n):
        gg = Grid1D(g.a, g.b, n, g.periodic)
        dx_rows.append((gg.dx, verify.continuity_check(cur, sol.v, gg, [t_probe], dt / 8).max_abs))
    integrals = [verify.conserved_integral(cur, sol.v, g, t) for t in times]
    report = {
        "family": sol.family,
        "current": cur.label,
        "continuity": rep,
        "convergence": {
            "dt": {"samples": dt_rows, "order": _orders(dt_rows)},
            "dx": {"samples": dx_rows, "order": _orders(dx_rows)},
        },
        "integrals": integrals,
        "drift": verify.drift(integrals),
        "pass": rep.rel_max <= tol["continuity"],
    }
    code = 0 if report["pass"] else 1
    return report, code, None if code == 0 else "continuity residual above tolerance"


def cmd_simulate(cfg, args):
    name = cfg.get("family")
    init = cfg.get("initial", {"kind": "family" if name else "zero"})
    if isinstance(init, list):
        raise ConfigError("simulate needs an initial-state object")
    g = _grid(cfg, 0.0, 2 * math.pi, 128, True)
    sol = build_solution(cfg) if name else None
    params = sol.params if sol else PhysParams(_num(cfg.get("alpha", 1)), _num(cfg.get("beta", 1)))
    if init["kind"] == "family":
        if sol is None:
            raise ConfigError("initial kind 'family' needs a family")
        u0 = sol.u.sample(g, 0.0)
    elif init["kind"] == "sine":
        u0 = SampledField(g, 0.0, float(init.get("amplitude", 0.1))
                          * np.sin(int(init.get("mode", 1)) * (g.x - g.a) * 2 * math.pi / g.length))
    else:
        u0 = SampledField(g, 0.0, np.zeros(g.n))
    topo_choice = cfg.get("topography", "family" if sol else "none")
    topo = sol.topo if (topo_choice == "family" and sol) else None
    dt = float(cfg.get("dt", solve.stability_bound(g, params)))
    t_end = float(cfg.get("t_end", 1.0))
    run = solve.pde_integrate(u0, topo, params, dt, t_end, stepper=cfg.get("stepper", "rk4"),
                              store_every=cfg.get("store_every"))
    rows = [(t, x, u) for t, state in zip(run.times, run.states) for x, u in zip(g.x, state)]
    if args.out:
        write_text(csv_text(["t", "x", "u"], rows), args.out)
    drifts = {k: verify.drift(v) for k, v in run.monitors.items() if k in ("momentum", "energy")}
    report = {
        "steps": run.steps,
        "dt": dt,
        "t_end": t_end,
        "stepper": run.stepper,
        "stored": len(run.times),
        "monitors": {"t": run.times, **run.monitors},
        "drift": drifts,
        "max_abs_mean": float(np.max(np.abs(run.monitors.get("mean", [0.0])))),
        "deviation_from_initial": float(np.max(np.abs(run.states[-1] - u0.values))),
        "csv": args.out,
    }
    return report, 0, None


def cmd_reduce(cfg, args):
    variant = cfg.get("variant", "x1" if cfg.get("family") else "case2")
    step = float(cfg.get("step", 1e-3))
    method = cfg.get("method", "rk4")
    ref = None
    if variant == "x1":
        ref = build_solution(cfg, "fam2")
        if ref.V is None or ref.h1 is None:
            raise ConfigError("x1 reduction needs a Galilean family")
        params, V = ref.params, ref.V
        y0 = cfg.get("initial") or [float(V.d(np.array(0.0), k)) for k in range(4)]
        span = float(cfg.get("span", 5.0))
        mu = 0.0
    else:
        params = PhysParams(_num(cfg.get("alpha", 1)), _num(cfg.get("beta", 1)))
        y0 = cfg.get("initial", [0.1, 0.0, 0.05, 0.0])
        span = float(cfg.get("span", 10.0))
        mu = float(cfg.get("mu", 2.0))
    if isinstance(y0, dict):
        raise ConfigError("reduce needs initial as [V, V', V'', V''']")
    try:
        tr = solve.ode_integrate(variant, solve.OdeState(0.0, y0), step, span, params, method,
                                 mu=mu, h1=ref.h1 if ref else None)
    except NonFiniteState as exc:
        if exc.partial is not None and args.out:
            write_text(csv_text(["zeta", "V", "V1", "V2", "V3"], exc.partial.to_rows()), args.out)
        raise NonFiniteState(f"{exc} (partial trajectory: {args.out or 'not written'})",
                             exc.partial) from exc
    if args.out:
        write_text(csv_text(["zeta", "V", "V1", "V2", "V3"], tr.to_rows()), args.out)
    report = {"variant": variant, "method": method, "points": len(tr.zeta), "csv": args.out}
    tol = {**DEFAULT_TOL, **cfg.get("tolerances", {})}
    if variant == "case2":
        psi = verify.first_integral(tr.y.T, mu, params)
        printed = verify.first_integral(tr.y.T, mu, params, printed=True)
        report["psi"] = {"initial": psi[0], "drift": float(np.max(np.abs(psi - psi[0]))),
                         "printed_drift": float(np.max(np.abs(printed - printed[0])))}
        report["pass"] = report["psi"]["drift"] <= tol["drift"]
    else:
        dev = float(np.max(np.abs(tr.y[:, 0] - ref.V(tr.zeta))))
        report["family"] = ref.family
        report["max_deviation"] = dev
        report["pass"] = dev <= tol["drift"]
    return report, 0, None


def cmd_identity(cfg, args):
    if "balance" in cfg:
        found = sorted(polyexact.balance_exponents(int(cfg["balance"])))
        return {"balance_exponents": found}, 0, None
    name = _family(cfg, "fam2")
    if name not in ("fam1", "fam2", "fam3"):
        raise ConfigError("identity works on fam1, fam2 or fam3")
    spec = exact.FAMILIES[name]
    raw = {**spec.defaults, **cfg.get("params", {})}
    vals = {k: (int(v) if k == "branch" else polyexact.to_rational(v)) for k, v in raw.items()}
    alpha = polyexact.to_rational(cfg.get("alpha", spec.alpha))
    beta = polyexact.to_rational(cfg.get("beta", spec.beta))
    params = PhysParams(alpha, beta)
    if name == "fam1":
        cc = exact.cubic_family_1(vals["a3"], vals["a2"], vals["a1"], vals["a0"], params,
                                  vals["branch"])
    elif name == "fam2":
        cc = exact.cubic_family_2(vals["a2"], vals["a0"], vals["c0"], params)
    else:
        cc = exact.cubic_family_3(vals["c2"], vals["a1"], vals["a0"], params)
    p = cfg.get("perturb")
    if p:
        field_name = p["coefficient"]
        if field_name not in cc.as_dict():
            raise ConfigError(f"unknown coefficient {field_name!r}")
        cc = replace(cc, **{field_name: getattr(cc, field_name)
                            + polyexact.to_rational(p["delta"])})
    for v in cc.as_dict().values():
        if not polyexact.is_rational(v):
            raise polyexact.NonRationalInput(
                "coefficients are irrational for these inputs (non-square discriminant)")
    V, h1 = polyexact.cubic_polys(cc)
    res = polyexact.reduction_residual_poly(V, h1, alpha, beta)
    return {
        "family": name,
        "coefficients": {k: str(v) for k, v in cc.as_dict().items()},
        "residual_poly_zero": res.is_zero(),
        "residual_coefficients": [str(c) for c in res.coeffs],
    }, 0, None


HANDLERS = {
    "catalog": cmd_catalog, "emit": cmd_emit, "verify": cmd_verify, "conserve": cmd_conserve,
    "simulate": cmd_simulate, "reduce": cmd_reduce, "identity": cmd_identity,
}


def _summary(report):
    flat = []
    for k in sorted(report):
        v = report[k]
        if isinstance(v, verify.ResidualReport):
            flat.append(f"{k}: max_abs={v.max_abs:.3e} rel_max={v.rel_max:.3e}")
        elif isinstance(v, (dict, list, np.ndarray)):
            continue
        else:
            flat.append(f"{k}: {v}")
    return "\n".join(flat) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="ostro", description="Forced Ostrovsky equation laboratory")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    p.add_argument("--out", help="output path for CSV data")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command != "catalog" and args.config is None:
            raise ConfigError(f"{args.command} needs --config")
        report, code, text = HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"ostro: config error: {exc}", file=sys.stderr)
        return 2
    except StabilityViolation as exc:
        print(f"ostro: {type(exc).__name__}: {exc} (bound {exc.bound:.6e})", file=sys.stderr)
        return 1
    except OstroError as exc:
        print(f"ostro: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "emit":
        return code
    if args.json:
        sys.stdout.write(dumps(report))
    elif args.command == "catalog":
        sys.stdout.write(catalog_text(report))
    else:
        sys.stdout.write(_summary(report))
    if code:
        print(f"ostro: {text or 'failed'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
