"""Batch front-end: JSON config in, tables and machine-readable artifacts out.

    cavitas <command> --config run.json --out results/ [--format csv|json]
                      [--seed N]

Commands: validate-material, solve-cavity, sweep-lambda, energy-report,
fracture, slic-check, slic-energy.  Exit codes: 0 success, 1 config or
validation error, 2 no cavitating solution exists for the requested
stretch (a scientific negative, distinguishable from a crash).

Artifacts embed the sha256 of the canonical config and the library
version.  CSV files are comma-separated with a '.' decimal point, one
header row, and a leading '#' provenance line; JSON files have sorted
keys.  CAVITAS_THREADS caps the worker count of sweep and ladder loops.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cavity import (
    IntegrationControls,
    NoCavitatingSolution,
    ShootControls,
    shoot_cavity_solution,
)
from .constitutive import (
    ConstitutiveError,
    LinearLogEnergy,
    PowerLawEnergy,
    PurePowerStress,
    ShiftedInversePowerStress,
    growth,
    validate,
)
from .energy_audit import energy_report
from .fracture1d import build_fan, energy_production, eval_Y, eval_y, slic_classify_1d
from .mollify import RadialMotion, det_positivity
from .slic import (
    default_catalogue_1d,
    default_catalogue_3d,
    discrepancy_scaling,
    residual_ladder_1d,
    residual_ladder_3d,
    slic_energy_ladder,
)

__all__ = ["main", "ConfigError"]


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

_MATERIALS_3D = {
    "power_law": (PowerLawEnergy, {"A", "B", "gamma", "beta"}),
    "linear_log": (LinearLogEnergy, {"L0", "C", "D"}),
}
_MATERIALS_1D = {
    "shifted_inverse_power": (ShiftedInversePowerStress, {"tau_inf", "p"}),
    "pure_power": (PurePowerStress, {"k", "q"}),
}


def _fail(path: str, msg: str):
    raise ConfigError(f"{path}: {msg}")


def _need_number(cfg, key, path, positive=False, default=None):
    if key not in cfg:
        if default is not None:
            return default
        _fail(f"{path}.{key}", "missing required key")
    val = cfg[key]
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        _fail(f"{path}.{key}", f"expected a number, got {val!r}")
    if positive and val <= 0:
        _fail(f"{path}.{key}", f"must be positive, got {val}")
    return float(val)


def parse_material(cfg, path="material"):
    if not isinstance(cfg, dict):
        _fail(path, "expected an object")
    kind = cfg.get("kind")
    table = {**_MATERIALS_3D, **_MATERIALS_1D}
    if kind not in table:
        _fail(f"{path}.kind", f"unknown material kind {kind!r}; "
              f"one of {sorted(table)}")
    cls, keys = table[kind]
    extra = set(cfg) - keys - {"kind"}
    if extra:
        _fail(f"{path}.{sorted(extra)[0]}", "unknown key")
    params = {k: _need_number(cfg, k, path) for k in keys if k in cfg}
    missing = keys - set(params)
    if missing:
        _fail(f"{path}.{sorted(missing)[0]}", "missing required key")
    try:
        return cls(**params)
    except ConstitutiveError as exc:
        _fail(path, str(exc))


_COMMON_KEYS = {"material", "seed"}
_ALLOWED_KEYS = {
    "validate-material": set(),
    "solve-cavity": {"lambda", "v0", "rtol", "atol"},
    "sweep-lambda": {"lambdas", "rtol", "atol"},
    "energy-report": {"lambda", "t", "rho"},
    "fracture": {"lambda", "alpha", "profile_points", "spacetime_t"},
    "slic-check": {"lambda", "alpha", "n_ladder", "t0", "t1"},
    "slic-energy": {"lambda", "n_ladder", "t", "r_ball"},
}


def check_keys(cfg, command):
    allowed = _ALLOWED_KEYS[command] | _COMMON_KEYS
    for key in cfg:
        if key not in allowed:
            _fail(key, f"unknown key for command {command!r}")
    if "material" not in cfg:
        _fail("material", "missing required key")


def _ladder(cfg):
    ns = cfg.get("n_ladder", [8, 16, 32, 64])
    if (not isinstance(ns, list) or not ns
            or any((not isinstance(n, int)) or n <= 0 for n in ns)):
        _fail("n_ladder", f"expected a list of positive integers, got {ns!r}")
    return tuple(ns)


def _config_hash(cfg) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("CAVITAS_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------

class Writer:
    def __init__(self, out: Path, meta: dict, fmt: str):
        self.out = out
        self.meta = meta
        self.fmt = fmt
        out.mkdir(parents=True, exist_ok=True)

    def json(self, name: str, payload: dict):
        payload = {**payload, "provenance": self.meta}
        path = self.out / f"{name}.json"
        path.write_text(json.dumps(payload, sort_keys=True, indent=2,
                                   allow_nan=True) + "\n")
        return path

    def table(self, name: str, columns: list, rows):
        """CSV with a provenance comment line; fixed column order."""
        if self.fmt == "json":
            payload = {"columns": columns,
                       "rows": [[_jsonable(v) for v in r] for r in rows]}
            return self.json(name, payload)
        path = self.out / f"{name}.csv"
        lines = ["# " + " ".join(f"{k}={v}" for k, v in self.meta.items())]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        return path


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate_material(cfg, writer):
    fam = parse_material(cfg["material"])
    rep = validate(fam)
    gr = growth(fam)
    writer.json("validation", {
        "kind": fam.kind,
        "ok": rep.ok,
        "failures": rep.failures,
        "notes": rep.notes,
        "growth": {k: _inf_str(getattr(gr, k)) for k in
                   ("l_3d", "slic_indicator_3d", "l_1d", "tau_infinity")},
    })
    return 0


def _inf_str(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return x


def _shoot_from_cfg(cfg):
    fam = parse_material(cfg["material"])
    if fam.kind not in _MATERIALS_3D:
        _fail("material.kind", "a 3-d stored energy is required here")
    lam = _need_number(cfg, "lambda", "", positive=True)
    controls = ShootControls(integration=IntegrationControls(
        rtol=_need_number(cfg, "rtol", "", positive=True, default=1e-10),
        atol=_need_number(cfg, "atol", "", positive=True, default=1e-12)))
    condition = cfg.get("v0", "stress_free")
    return fam, lam, shoot_cavity_solution(fam, lam, cavity_condition=condition,
                                           controls=controls)


def _junction_payload(sol):
    j = sol.junction
    return {
        "lambda": sol.lam, "sigma": j.sigma, "a_minus": j.a_minus,
        "rh_residual": j.rh_residual, "lax_ok": j.lax_ok,
        "phi0": sol.phi0, "v0": sol.v0, "root_count": sol.root_count,
    }


def cmd_solve_cavity(cfg, writer):
    _, _, sol = _shoot_from_cfg(cfg)
    traj = sol.trajectory
    writer.table("solution", ["s", "phi", "v", "a", "b", "Q"],
                 zip(traj.s, traj.phi, traj.v, traj.a, traj.b, traj.Q))
    writer.json("junction", _junction_payload(sol))
    return 0


def cmd_sweep_lambda(cfg, writer):
    fam = parse_material(cfg["material"])
    lams = cfg.get("lambdas")
    if isinstance(lams, dict):
        start = _need_number(lams, "start", "lambdas", positive=True)
        stop = _need_number(lams, "stop", "lambdas", positive=True)
        count = int(_need_number(lams, "count", "lambdas", positive=True))
        lams = list(np.linspace(start, stop, count))
    if not isinstance(lams, list) or not lams:
        _fail("lambdas", "expected a list or {start, stop, count}")
    controls = ShootControls(integration=IntegrationControls(
        rtol=_need_number(cfg, "rtol", "", positive=True, default=1e-9),
        atol=_need_number(cfg, "atol", "", positive=True, default=1e-11)))

    def probe(lam):
        try:
            sol = shoot_cavity_solution(fam, float(lam), controls=controls)
            return (lam, True, sol.phi0, sol.sigma, sol.junction.a_minus)
        except NoCavitatingSolution:
            return (lam, False, math.nan, math.nan, math.nan)

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        rows = list(pool.map(probe, lams))
    writer.table("sweep", ["lambda", "solvable", "phi0", "sigma", "a_minus"],
                 rows)
    writer.json("sweep_summary", {
        "solvable": [r[0] for r in rows if r[1]],
        "unsolvable": [r[0] for r in rows if not r[1]],
    })
    return 0


def cmd_energy_report(cfg, writer):
    _, _, sol = _shoot_from_cfg(cfg)
    ts = cfg.get("t", 1.0)
    if isinstance(ts, (int, float)):
        ts = [float(ts)]
    rho = cfg.get("rho")
    rows = []
    for t in ts:
        rep = energy_report(sol, float(t), rho)
        rows.append((rep.t, rep.rho, rep.delta_closed, rep.delta_quadrature,
                     rep.shock_production, rep.entropy_sign_ok))
    writer.table("energy", ["t", "rho", "delta_closed", "delta_quadrature",
                            "shock_production", "entropy_sign_ok"], rows)
    writer.json("energy_summary",
                {**_junction_payload(sol),
                 "t_values": [r[0] for r in rows],
                 "delta_closed": [r[2] for r in rows]})
    return 0


def cmd_fracture(cfg, writer):
    fam = parse_material(cfg["material"])
    if fam.kind not in _MATERIALS_1D:
        _fail("material.kind", "a 1-d stress family is required here")
    lam = _need_number(cfg, "lambda", "", positive=True)
    alpha = _need_number(cfg, "alpha", "", positive=True)
    fan = build_fan(fam, lam, alpha)
    prod = energy_production(fan)
    writer.json("fan", {
        "lambda": fan.lam, "alpha": fan.alpha, "sigma": fan.sigma,
        "Y0": fan.Y0, "lax_ok": fan.lax_ok,
        "T": _inf_str(prod.T),
        "T_by_split": _inf_str(prod.by_split),
        "T_by_energy": _inf_str(prod.by_energy),
        "T_by_chord": _inf_str(prod.by_chord),
        "mu_shock": prod.mu_shock,
        "crack_work": _inf_str(prod.crack_work),
        "slic_class": slic_classify_1d(fam).value,
    })
    m = int(cfg.get("profile_points", 401))
    xi = np.linspace(-2.0 * fan.sigma, 2.0 * fan.sigma, m)
    Yp = np.where(np.abs(xi) < fan.sigma, fan.alpha, fan.lam)
    writer.table("fan_profile", ["xi", "Y", "Yprime"],
                 zip(xi, eval_Y(fan, xi), Yp))
    ts = cfg.get("spacetime_t")
    if ts:
        rows = []
        for t in ts:
            x = np.linspace(-2.0 * fan.sigma * max(t, 1.0),
                            2.0 * fan.sigma * max(t, 1.0), m)
            y = eval_y(fan, x, float(t))
            rows.extend(zip(x, [float(t)] * m, y))
        writer.table("fan_spacetime", ["x", "t", "y"], rows)
    return 0


def cmd_slic_check(cfg, writer):
    fam = parse_material(cfg["material"])
    ns = _ladder(cfg)
    if fam.kind in _MATERIALS_1D:
        lam = _need_number(cfg, "lambda", "", positive=True)
        alpha = _need_number(cfg, "alpha", "", positive=True)
        fan = build_fan(fam, lam, alpha)
        cat = default_catalogue_1d(fan.sigma)
        reports = [residual_ladder_1d(fan, tf, n_values=ns) for tf in cat]
        rows = [(tf.name, n, rep.actions[i], rep.predicted_limit)
                for tf, rep in zip(cat, reports)
                for i, n in enumerate(ns)]
        writer.table("slic_check", ["field", "n", "action", "predicted_limit"],
                     rows)
        writer.json("slic_check_summary", {
            "dimension": 1,
            "reports": [{
                "field": r.field, "n_values": list(r.n_values),
                "actions": list(r.actions),
                "predicted_limit": r.predicted_limit,
                "fitted_rate": r.fitted_rate, "final_gap": r.final_gap,
                "verdict": r.verdict, "theory_verdict": r.theory_verdict,
            } for r in reports],
        })
        return 0

    _, _, sol = _shoot_from_cfg(cfg)
    t0 = _need_number(cfg, "t0", "", positive=True, default=0.4)
    t1 = _need_number(cfg, "t1", "", positive=True, default=1.2)
    cat = default_catalogue_3d(sol.sigma, t0, t1, n_min=min(ns))
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        reports = list(pool.map(
            lambda tf: residual_ladder_3d(sol, tf, n_values=ns), cat))
    disc = discrepancy_scaling(sol, cat[0], n_values=ns)
    motion = RadialMotion.from_solution(sol)
    dets = [det_positivity(motion, n) for n in ns]
    rows = [(rep.field, n, rep.actions[i], det.min_det)
            for rep in reports
            for (i, n), det in zip(enumerate(ns), dets)]
    writer.table("slic_check", ["field", "n", "action", "det_min"], rows)
    writer.json("slic_check_summary", {
        "dimension": 3,
        "junction": _junction_payload(sol),
        "reports": [{
            "field": r.field, "n_values": list(r.n_values),
            "actions": list(r.actions), "fitted_rate": r.fitted_rate,
            "verdict": r.verdict, "theory_verdict": r.theory_verdict,
            "theory_exponent": r.theory_exponent,
        } for r in reports],
        "discrepancy": {
            "n_values": list(disc.n_values),
            "d_values": list(disc.d_values),
            "fitted_slope": disc.fitted_slope,
        },
        "det_min": {str(n): d.min_det for n, d in zip(ns, dets)},
    })
    return 0


def cmd_slic_energy(cfg, writer):
    _, _, sol = _shoot_from_cfg(cfg)
    ns = _ladder(cfg)
    t = _need_number(cfg, "t", "", positive=True, default=1.0)
    r_ball = cfg.get("r_ball")
    rep = slic_energy_ladder(sol, n_values=ns, t=t, r_ball=r_ball,
                             allow_divergent=True)
    writer.table("slic_energy", ["n", "excess_energy"],
                 zip(rep.n_values, rep.excess))
    writer.json("slic_energy_summary", {
        "t": rep.t, "r_ball": rep.r_ball,
        "n_values": list(rep.n_values), "excess": list(rep.excess),
        "extrapolated": _nan_str(rep.extrapolated),
        "weak_energy": rep.weak_energy,
        "surface_term": _inf_str(rep.surface_term),
        "p_wf": _inf_str(rep.p_wf),
        "rel_gap": _nan_str(rep.rel_gap),
        "divergence_rate": rep.divergence_rate,
    })
    return 0


def _nan_str(x):
    return "nan" if isinstance(x, float) and math.isnan(x) else x


_COMMANDS = {
    "validate-material": cmd_validate_material,
    "solve-cavity": cmd_solve_cavity,
    "sweep-lambda": cmd_sweep_lambda,
    "energy-report": cmd_energy_report,
    "fracture": cmd_fracture,
    "slic-check": cmd_slic_check,
    "slic-energy": cmd_slic_energy,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cavitas", description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, type=Path)
    parser.add_argument("--out", type=Path, default=Path("cavitas-out"))
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        try:
            cfg = json.loads(args.config.read_text())
        except FileNotFoundError:
            raise ConfigError(f"config: file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})")
        if not isinstance(cfg, dict):
            raise ConfigError("config: top level must be an object")
        check_keys(cfg, args.command)
        meta = {"config_hash": _config_hash(cfg), "version": __version__,
                "seed": args.seed}
        writer = Writer(args.out, meta, args.format)
        return _COMMANDS[args.command](cfg, writer)
    except ConfigError as exc:
        print(f"cavitas: config error: {exc}", file=sys.stderr)
        return 1
    except NoCavitatingSolution as exc:
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        (out / "no_solution.json").write_text(json.dumps({
            "error": "NoCavitatingSolution",
            "sonic_before_match_everywhere": exc.n_defined == 0,
            "lambda": exc.lam,
            "phi0_bracket": list(exc.bracket),
            "probes_defined": exc.n_defined,
            "probes_sonic_first": exc.n_sonic,
        }, sort_keys=True, indent=2) + "\n")
        print(f"cavitas: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
