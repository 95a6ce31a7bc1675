"""Command line front end.

Two subcommands:

* ``fingabor run CONFIG.json`` runs one experiment described by a JSON
  config and writes deterministic JSON/CSV artifacts.
* ``fingabor list-identities`` prints the registry of verifiable
  identities with their default tolerances.

Exit codes: 0 on success, 1 on a configuration problem, 2 when the
experiment ran but at least one check exceeded its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .experiments import (
    IDENTITY_REGISTRY,
    identity_names,
    run_convrel,
    run_decay,
    run_frames,
    run_identities,
    run_locop,
    run_norms,
    run_young,
)
from .group import GroupError, make_group

__all__ = ["ConfigError", "main", "validate_config"]


class ConfigError(ValueError):
    """Raised when the run configuration is malformed."""


_EXPERIMENTS = ("identities", "frames", "norms", "young", "convrel", "locop", "decay")

_DEFAULT_TRIALS = {
    "identities": 50,
    "frames": 100,
    "norms": 100,
    "young": 200,
    "convrel": 200,
    "locop": 25,
    "decay": 500,
}

_EXTRA_KEYS = {
    "identities": {"identities", "tolerances"},
    "decay": {"gammas", "top_k", "control_seeds"},
}


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _int_list(value, what: str) -> list[int]:
    _expect(isinstance(value, list) and value, f"{what} must be a non-empty list")
    out = []
    for v in value:
        _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 1,
                f"{what} entries must be positive integers")
        out.append(v)
    return out


def validate_config(cfg) -> dict:
    """Check shape, types, and key names; returns a normalized config."""
    _expect(isinstance(cfg, dict), "config must be a JSON object")
    _expect("experiment" in cfg, "missing required key 'experiment'")
    exp = cfg["experiment"]
    _expect(isinstance(exp, str) and exp in _EXPERIMENTS,
            f"'experiment' must be one of {', '.join(_EXPERIMENTS)}")
    allowed = {"experiment", "group", "seed", "trials", "output_dir"}
    allowed |= _EXTRA_KEYS.get(exp, set())
    unknown = sorted(set(cfg) - allowed)
    _expect(not unknown, f"unknown config keys: {', '.join(unknown)}")

    _expect("group" in cfg, "missing required key 'group'")
    grp = cfg["group"]
    _expect(isinstance(grp, dict), "'group' must be an object")
    gunknown = sorted(set(grp) - {"factors", "subgroup_divisors"})
    _expect(not gunknown, f"unknown group keys: {', '.join(gunknown)}")
    _expect("factors" in grp and "subgroup_divisors" in grp,
            "'group' needs 'factors' and 'subgroup_divisors'")
    factors = _int_list(grp["factors"], "group.factors")
    divisors = _int_list(grp["subgroup_divisors"], "group.subgroup_divisors")
    _expect(len(factors) == len(divisors),
            "group.factors and group.subgroup_divisors must have equal length")

    seed = cfg.get("seed", 0)
    _expect(isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0,
            "'seed' must be a non-negative integer")
    trials = cfg.get("trials", _DEFAULT_TRIALS[exp])
    _expect(isinstance(trials, int) and not isinstance(trials, bool) and trials >= 1,
            "'trials' must be a positive integer")
    output_dir = cfg.get("output_dir", ".")
    _expect(isinstance(output_dir, str) and output_dir,
            "'output_dir' must be a non-empty string")

    norm = {
        "experiment": exp,
        "factors": factors,
        "subgroup_divisors": divisors,
        "seed": seed,
        "trials": trials,
        "output_dir": output_dir,
    }

    if exp == "identities":
        names = cfg.get("identities")
        if names is not None:
            _expect(isinstance(names, list) and names,
                    "'identities' must be a non-empty list of names")
            known = set(identity_names())
            for n in names:
                _expect(isinstance(n, str) and n in known, f"unknown identity: {n!r}")
            norm["identities"] = list(names)
        tols = cfg.get("tolerances")
        if tols is not None:
            _expect(isinstance(tols, dict), "'tolerances' must be an object")
            known = set(identity_names())
            for k, v in tols.items():
                _expect(k in known, f"tolerance for unknown identity: {k!r}")
                _expect(isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0,
                        f"tolerance for {k!r} must be a non-negative number")
            norm["tolerances"] = {k: float(v) for k, v in tols.items()}
    elif exp == "decay":
        gammas = cfg.get("gammas", [0.5, 1.0, 2.0])
        _expect(isinstance(gammas, list) and gammas, "'gammas' must be a non-empty list")
        for g in gammas:
            _expect(isinstance(g, (int, float)) and not isinstance(g, bool) and g > 0,
                    "'gammas' entries must be positive numbers")
        norm["gammas"] = [float(g) for g in gammas]
        top_k = cfg.get("top_k", 3)
        _expect(isinstance(top_k, int) and not isinstance(top_k, bool) and top_k >= 1,
                "'top_k' must be a positive integer")
        norm["top_k"] = top_k
        controls = cfg.get("control_seeds", list(range(10)))
        _expect(isinstance(controls, list), "'control_seeds' must be a list")
        for c in controls:
            _expect(isinstance(c, int) and not isinstance(c, bool) and c >= 0,
                    "'control_seeds' entries must be non-negative integers")
        norm["control_seeds"] = list(controls)
    return norm


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _write_artifacts(outdir: str, name: str, summary: dict, tables: dict) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    path = os.path.join(outdir, f"{name}_summary.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(summary), fh, sort_keys=True, indent=2)
        fh.write("\n")
    written.append(path)
    for tname, rows in tables.items():
        tpath = os.path.join(outdir, f"{tname}.csv")
        with open(tpath, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for row in rows:
                writer.writerow([str(c) for c in row])
        written.append(tpath)
    return written


def _dispatch(norm: dict) -> tuple[dict, list[str], dict]:
    spec = make_group(norm["factors"], norm["subgroup_divisors"])
    exp = norm["experiment"]
    seed = norm["seed"]
    trials = norm["trials"]
    tables: dict = {}
    if exp == "identities":
        summary, failures = run_identities(
            spec, seed, trials,
            names=norm.get("identities"),
            tolerances=norm.get("tolerances"),
        )
    elif exp == "frames":
        summary, failures = run_frames(spec, seed, trials)
    elif exp == "norms":
        summary, failures, tables = run_norms(spec, seed, trials)
    elif exp == "young":
        summary, failures, tables = run_young(spec, seed, trials)
    elif exp == "convrel":
        summary, failures, tables = run_convrel(spec, seed, trials)
    elif exp == "locop":
        summary, failures = run_locop(spec, seed, trials)
    else:
        summary, failures = run_decay(
            spec, seed, trials,
            gammas=norm["gammas"],
            top_k=norm["top_k"],
            control_seeds=norm["control_seeds"],
        )
    return summary, failures, tables


def _cmd_list_identities() -> int:
    width = max(len(c.name) for c in IDENTITY_REGISTRY)
    print(f"{'name':<{width}}  {'tolerance':>9}  summary")
    for c in IDENTITY_REGISTRY:
        tol = "exact" if c.tolerance == 0.0 else f"{c.tolerance:.0e}"
        print(f"{c.name:<{width}}  {tol:>9}  {c.summary}")
    return 0


def _cmd_run(config_path: str) -> int:
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 1
    try:
        norm = validate_config(cfg)
        summary, failures, tables = _dispatch(norm)
    except (ConfigError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    outdir = os.environ.get("FINGABOR_OUTPUT_DIR") or norm["output_dir"]
    written = _write_artifacts(outdir, norm["experiment"], summary, tables)
    for path in written:
        print(f"wrote {path}")
    if failures:
        for msg in failures:
            print(f"failure: {msg}")
        print(f"status: fail ({len(failures)} check(s) exceeded tolerance)")
        return 2
    print("status: ok")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fingabor",
        description="Time-frequency experiments on finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one experiment from a JSON config")
    run_p.add_argument("config", help="path to the JSON config file")
    sub.add_parser("list-identities", help="print the identity registry")
    args = parser.parse_args(argv)
    if args.command == "list-identities":
        return _cmd_list_identities()
    return _cmd_run(args.config)


if __name__ == "__main__":
    sys.exit(main())
