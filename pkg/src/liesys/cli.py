"""Config-driven command-line front end.

Usage::

    liesys <command> --config run.json [--out DIR] [--seed N]

Commands: ``integrate``, ``invariants``, ``superpose-verify``,
``bracket-check``, ``action-check``. Exit status is 0 on success, 1 on an
input or domain error and 2 when the computation ran but a checked contract
(drift bound, verification tolerance, residual bound) failed.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import invariants as inv
from . import sl2, superposition
from .coefficients import profile_from_dict
from .errors import ConfigurationError, LiesysError
from .integrator import integrate
from .systems import (Prolongation, Riccati, coupling_from_dict, structure_tensor,
                      system_from_dict)

COMMANDS = ("integrate", "invariants", "superpose-verify", "bracket-check", "action-check")

DEFAULTS = {
    "t0": 0.0,
    "rel_tol": 1e-10,
    "abs_tol": 1e-12,
    "k": 1.0,
    "seed": 0,
}


@dataclass
class RunConfig:
    command: str
    raw: dict
    output_dir: str
    seed: int
    omega: object = None
    system: object = None
    t0: float = 0.0
    t1: float | None = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    k: float = 1.0
    rule: str | None = None
    initial_data: dict = field(default_factory=dict)


@dataclass
class RunResult:
    status: int
    summary: dict
    files: list


def _field(d, name, kind=float, default=None, required=False):
    if name not in d or d[name] is None:
        if required:
            raise ConfigurationError(f"missing required field '{name}'", "cli.run")
        return default
    try:
        return kind(d[name])
    except (TypeError, ValueError):
        raise ConfigurationError(f"field '{name}' has invalid value {d[name]!r}", "cli.run")


def parse_config(raw, command=None, output_dir=None, seed=None):
    """Validate a config document and resolve defaults; CLI arguments override the file."""
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object", "cli.parse_config")
    command = command or raw.get("command")
    if command not in COMMANDS:
        raise ConfigurationError(f"field 'command': expected one of {COMMANDS}, got {command!r}",
                                 "cli.parse_config")
    resolved = {**DEFAULTS, **raw, "command": command}
    if output_dir is not None:
        resolved["output_dir"] = output_dir
    if seed is not None:
        resolved["seed"] = seed
    out = resolved.get("output_dir")
    if not isinstance(out, str) or not out.strip():
        raise ConfigurationError("field 'output_dir': empty output directory", "cli.parse_config")

    cfg = RunConfig(command, resolved, out, _field(resolved, "seed", int, 0))
    if "omega" in resolved:
        cfg.omega = profile_from_dict(resolved["omega"])
    cfg.t0 = _field(resolved, "t0", float, 0.0)
    cfg.t1 = _field(resolved, "t1", float)
    cfg.rel_tol = _field(resolved, "rel_tol", float)
    cfg.abs_tol = _field(resolved, "abs_tol", float)
    cfg.k = _field(resolved, "k", float)
    cfg.rule = resolved.get("rule")
    cfg.initial_data = resolved.get("initial_data") or {}

    needs_omega = command in ("integrate", "invariants", "superpose-verify", "bracket-check")
    if needs_omega and cfg.omega is None:
        raise ConfigurationError("missing required field 'omega'", "cli.parse_config")
    if command in ("integrate", "invariants", "bracket-check"):
        if "system" not in resolved:
            raise ConfigurationError("missing required field 'system'", "cli.parse_config")
        cfg.system = system_from_dict(resolved["system"], cfg.omega)
    if command in ("integrate", "invariants", "superpose-verify") and cfg.t1 is None:
        raise ConfigurationError("missing required field 't1'", "cli.parse_config")
    if command == "superpose-verify" and cfg.rule not in superposition.RULES:
        raise ConfigurationError(f"field 'rule': expected one of {superposition.RULES}, got {cfg.rule!r}",
                                 "cli.parse_config")
    return cfg


def _state0(cfg):
    if "state" not in cfg.initial_data:
        raise ConfigurationError("missing required field 'initial_data.state'", "cli.run")
    return np.asarray(cfg.initial_data["state"], dtype=float)


def _invariant_params(spec):
    params = dict(spec.get("params") or {})
    for key in ("f", "g"):
        if isinstance(params.get(key), dict):
            params[key] = coupling_from_dict(params[key])
    return params


def _sample_points(system, n, rng):
    lo, hi = [], []
    members = system.members if isinstance(system, Prolongation) else (system,)
    for m in members:
        if isinstance(m, Riccati):
            lo += [-3.0]
            hi += [3.0]
        else:
            # (position, velocity) pairs
            for _ in range(m.dim // 2):
                lo += [0.5, -3.0]
                hi += [3.0, 3.0]
    return rng.uniform(lo, hi, size=(n, len(lo)))


def _run_integrate(cfg, files):
    traj = integrate(cfg.system, _state0(cfg), cfg.t0, cfg.t1, cfg.rel_tol, cfg.abs_tol)
    path = os.path.join(cfg.output_dir, "trajectory.csv")
    traj.to_csv(path)
    files.append(path)
    return traj, {
        "n_nodes": int(len(traj.times)),
        "t_end": traj.t_end,
        "final_state": [float(v) for v in traj.states[-1]],
        "terminated_early": list(traj.terminated_early) if traj.terminated_early else None,
    }, 0


def _run_invariants(cfg, files):
    traj, summary, _ = _run_integrate(cfg, files)
    specs = cfg.raw.get("invariants")
    if not specs:
        raise ConfigurationError("missing required field 'invariants'", "cli.run")
    bound = cfg.raw.get("max_rel_drift")
    reports = []
    status = 0
    for s in specs:
        if not isinstance(s, dict) or "name" not in s:
            raise ConfigurationError("each entry of 'invariants' needs a 'name'", "cli.run")
        label = s.get("label") or s["name"]
        rep = inv.invariant_drift(traj, s["name"], s.get("args", []), _invariant_params(s), label)
        path = os.path.join(cfg.output_dir, f"invariant_{label}.csv")
        rep.to_csv(path)
        files.append(path)
        entry = rep.summary()
        if bound is not None:
            entry["bound"] = float(bound)
            entry["passed"] = rep.max_rel_drift <= float(bound)
            if not entry["passed"]:
                status = 2
        reports.append(entry)
    summary["invariants"] = reports
    return summary, status


def _run_verify(cfg, files):
    data = cfg.initial_data
    for key in ("bases", "target"):
        if key not in data:
            raise ConfigurationError(f"missing required field 'initial_data.{key}'", "cli.run")
    rep = superposition.verify_superposition(
        cfg.rule, cfg.omega, data["bases"], data["target"], cfg.k, (cfg.t0, cfg.t1),
        cfg.rel_tol, cfg.abs_tol, int(cfg.raw.get("n_points", 200)))
    bound = float(cfg.raw.get("max_rel_error", 1e-6))
    out = rep.to_dict()
    out["bound"] = bound
    out["passed"] = rep.max_rel_error <= bound
    return {"report": out}, 0 if out["passed"] else 2


def _relations(raw):
    # structure relations with 1-based indices: [a, b, {"c": coeff}]
    try:
        return [(int(a) - 1, int(b) - 1, {int(c) - 1: float(v) for c, v in rhs.items()})
                for a, b, rhs in raw]
    except (TypeError, ValueError, AttributeError):
        raise ConfigurationError("field 'structure': expected [[a, b, {c: coeff}], ...]", "cli.run")


def _run_brackets(cfg, files):
    rng = np.random.default_rng(cfg.seed)
    mode = cfg.raw.get("mode", "analytic")
    h = float(cfg.raw.get("h", 1e-5))
    n = int(cfg.raw.get("n_points", 100))
    tol = float(cfg.raw.get("tolerance", 1e-12 if mode == "analytic" else 1e-6))
    structure = (structure_tensor(_relations(cfg.raw["structure"])) if "structure" in cfg.raw
                 else cfg.system.structure)
    pts = _sample_points(cfg.system, n, rng)
    res = sl2.bracket_residual(cfg.system.fundamental_fields(), structure, pts, mode, h)
    return {"residual": res, "mode": mode, "h": h, "n_points": n, "tolerance": tol,
            "passed": res <= tol}, 0 if res <= tol else 2


def _run_action(cfg, files):
    trials = int(cfg.raw.get("trials", 100))
    chk = sl2.action_consistency(cfg.k, trials, cfg.seed)
    comp_tol = float(cfg.raw.get("composition_tolerance", 1e-9))
    gen_tol = float(cfg.raw.get("generator_tolerance", 1e-5))
    passed = chk.composition <= comp_tol and chk.generator <= gen_tol
    return {"composition_residual": chk.composition, "generator_residual": chk.generator,
            "trials": trials, "composition_tolerance": comp_tol, "generator_tolerance": gen_tol,
            "passed": passed}, 0 if passed else 2


def emit_report(cfg, results, files):
    """Write ``summary.json`` with the tool version and the resolved config."""
    doc = {
        "tool": "liesys",
        "version": __version__,
        "command": cfg.command,
        "config": cfg.raw,
        "results": results,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    path = os.path.join(cfg.output_dir, "summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    files.append(path)
    return path


def run(config, command=None, output_dir=None, seed=None):
    """Execute one command from a parsed config dict; returns a :class:`RunResult`."""
    cfg = parse_config(config, command, output_dir, seed)
    os.makedirs(cfg.output_dir, exist_ok=True)
    files = []
    if cfg.command == "integrate":
        _, results, status = _run_integrate(cfg, files)
    elif cfg.command == "invariants":
        results, status = _run_invariants(cfg, files)
    elif cfg.command == "superpose-verify":
        results, status = _run_verify(cfg, files)
    elif cfg.command == "bracket-check":
        results, status = _run_brackets(cfg, files)
    else:
        results, status = _run_action(cfg, files)
    emit_report(cfg, results, files)
    return RunResult(status, results, files)


def _load(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
                                 "cli.parse_config")


def main(argv=None):
    ap = argparse.ArgumentParser(prog="liesys", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    ap.add_argument("--seed", type=int, default=None, help="seed for random-point checks")
    args = ap.parse_args(argv)
    try:
        raw = _load(args.config)
        result = run(raw, args.command, args.out, args.seed)
    except LiesysError as exc:
        print(f"liesys: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"liesys: error: {exc}", file=sys.stderr)
        return 1
    if result.status == 2:
        print("liesys: contract violated; see summary.json", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
