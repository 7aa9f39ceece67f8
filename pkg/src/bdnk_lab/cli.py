"""Command line front end: ``bdnk-lab <command> [--config PATH] [--out DIR] ...``.

Commands write CSV tables and one JSON report into ``--out``.  Exit codes:
0 every claim passed, 2 a claim failed, 64 usage or configuration error,
70 internal error.  ``BDNK_LAB_THREADS`` caps the number of worker processes.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    claim,
    eos_suite,
    eulerian_suite,
    explicit_shift_suite,
    identity_suite,
    lte_suite,
    slope_suite,
    symmetry_suite,
)
from .characteristics import (
    causal_region,
    causality_scan,
    profile_spectrum,
    unit_directions,
)
from .dissipation import DissipationCoeffs
from .fluid import make_eos, rest_state
from .shock import (
    ProfileOptions,
    ShockError,
    hausdorff_distance,
    hugoniot_continuation,
    profile_solve,
    profile_validate,
    sonic_base_state,
)
from .tensor_core import SingularPencilError

log = logging.getLogger("bdnk_lab")

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 64, 70

DEFAULTS = {
    "eos": {"name": "massless_ideal", "params": {"p0": 1.0}},
    "barotropic_eos": {"name": "barotropic_radiation", "params": {"a": 1.0}},
    "barotropic": False,
    "seed": 0,
    "coeffs": {"eta": 0.03, "zeta": 0.0, "kappa": 0.03, "lam": 0.3, "mu": 0.3, "nu": 0.3, "eps": 1.0},
    "samples": {"eos": 1000, "lte": 100, "eulerian": 100, "identity": 1000, "explicit_shift": 1000, "symmetry": 100},
    "eps_list": [1e-1, 1e-2, 1e-3, 1e-4],
    "tolerances": {
        "thermo": 1e-12, "jacobian_symmetry": 1e-10, "jacobian_fd": 1e-6, "lte": 1e-11,
        "q_eulerian": 1e-20, "db_eulerian": 1e-11, "identity": 1e-10, "explicit_shift": 1e-9,
        "symbol_symmetry": 1e-10, "slope": 0.05, "dpsi_slope": 0.02,
        "rh": 1e-10, "ode_residual": 1e-8,
    },
    "causality": {
        "state": {"theta": 1.0, "psi": 0.0, "velocity": [0.0, 0.0, 0.0]},
        "grid": {"lam": [0.1, 0.3, 0.5, 0.7, 0.9], "mu": [0.1, 0.3, 0.5, 0.7, 0.9],
                 "nu": [0.1, 0.3, 0.5, 0.7, 0.9]},
        "directions": 3,
    },
    "shock": {"theta": 1.0, "psi": 0.0, "family": -1, "max_alpha": 0.2,
              "alpha": 0.05, "alphas": [0.08, 0.04, 0.02]},
    "profile": {"delta0": 1e-4, "tol_end": 1e-6, "rtol": 1e-11, "atol": 1e-13, "trust_factor": 10.0},
}


class UsageError(Exception):
    """Bad command line or configuration (exit 64)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in base:
            raise UsageError(f"unknown configuration key {path + key!r}")
        if isinstance(base[key], dict) and key not in ("params",):
            if not isinstance(value, dict):
                raise UsageError(f"configuration key {path + key!r} must be a table")
            out[key] = _merge(base[key], value, f"{path}{key}.")
        else:
            out[key] = value
    return out


def load_config(path=None, overrides=None):
    """Defaults merged with a JSON or TOML file and command-line overrides."""
    user = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        try:
            if path.suffix.lower() == ".toml":
                user = _toml_loads(text)
            else:
                user = json.loads(text)
        except ValueError as exc:
            raise UsageError(f"malformed config {path}: {exc}") from None
        if not isinstance(user, dict):
            raise UsageError("config must be a table/object at top level")
    cfg = _merge(DEFAULTS, user)
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg[key] = value
    _validate(cfg)
    return cfg


def _toml_loads(text):
    try:
        import tomllib
    except ModuleNotFoundError:  # Python 3.10
        import tomli as tomllib
    return tomllib.loads(text)


def _validate(cfg):
    try:
        DissipationCoeffs(**cfg["coeffs"])
        if len(cfg["eps_list"]) < 4 or min(cfg["eps_list"]) <= 0:
            raise ValueError("eps_list needs at least four positive values")
        if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool) or cfg["seed"] < 0:
            raise ValueError("seed must be a non-negative integer")
        for a in list(cfg["shock"]["alphas"]) + [cfg["shock"]["alpha"]]:
            if not 0 <= a <= cfg["shock"]["max_alpha"]:
                raise ValueError(f"amplitude {a} outside [0, max_alpha]")
        ProfileOptions(**cfg["profile"])
        make_eos(**_eos_choice(cfg))
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def _eos_choice(cfg):
    choice = cfg["barotropic_eos"] if cfg["barotropic"] else cfg["eos"]
    return {"name": choice["name"], **choice.get("params", {})}


def config_hash(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------- output


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, header, rows):
    """CSV with a header row; floats in shortest round-trip form, so output is reproducible."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return None if not np.isfinite(obj) else float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_report(out, command, cfg, claims, started, extra=None):
    report = {
        "command": command,
        "version": __version__,
        "config_hash": config_hash(cfg),
        "seed": cfg["seed"],
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%S%z", time.localtime(started)),
        "wall_clock_s": time.time() - started,
        "passed": all(c.passed for c in claims),
        "claims": [c.as_dict() for c in claims],
    }
    if extra:
        report.update(extra)
    path = Path(out) / f"{command}_report.json"
    path.write_text(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    return report


def worker_count():
    cap = os.environ.get("BDNK_LAB_THREADS")
    n = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"BDNK_LAB_THREADS must be an integer, got {cap!r}") from None
    return n


@contextmanager
def _mapper(tasks):
    """``map`` or a process-pool map, order preserving either way."""
    n = min(worker_count(), tasks)
    if n <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        yield pool.map


# ---------------------------------------------------------------- commands


def _setup(cfg):
    return make_eos(**_eos_choice(cfg)), DissipationCoeffs(**cfg["coeffs"]), np.random.default_rng(cfg["seed"])


def cmd_eos_check(cfg, out):
    eos, _, rng = _setup(cfg)
    tol = cfg["tolerances"]
    claims = eos_suite(eos, rng, cfg["samples"]["eos"], tol["thermo"], tol["jacobian_symmetry"], tol["jacobian_fd"])
    return claims, {"eos": eos.name}


def cmd_verify(cfg, out):
    eos, _, rng = _setup(cfg)
    tol, n = cfg["tolerances"], cfg["samples"]
    claims = []
    claims += lte_suite(eos, rng, n["lte"], tol["lte"])
    claims += eulerian_suite(eos, rng, n["eulerian"], tol["q_eulerian"], tol["db_eulerian"])
    claims += identity_suite(eos, rng, n["identity"], tol["identity"])
    claims += explicit_shift_suite(eos, rng, n["explicit_shift"], tol["explicit_shift"])
    claims += symmetry_suite(eos, rng, n["symmetry"], tol["symbol_symmetry"])
    slopes, tables = slope_suite(eos, rng, cfg["eps_list"], tol["slope"], tol["dpsi_slope"])
    claims += slopes
    for name, table in tables.items():
        write_csv(Path(out) / f"scaling_{name}.csv", table.header, table.rows())
    return claims, {"eos": eos.name}


def _scan_state(cfg, eos):
    st = cfg["causality"]["state"]
    return rest_state(st["theta"], None if eos.barotropic else st["psi"], st["velocity"])


def cmd_causality_scan(cfg, out):
    eos, coeffs, rng = _setup(cfg)
    c = cfg["causality"]
    grid = [(lam, mu, nu) for lam in c["grid"]["lam"] for mu in c["grid"]["mu"] for nu in c["grid"]["nu"]]
    directions = unit_directions(c["directions"], rng)
    state = _scan_state(cfg, eos)
    with _mapper(len(grid)) as mapper:
        points = causality_scan(state, eos, coeffs, grid, directions, mapper=mapper)
    write_csv(
        Path(out) / "causality_scan.csv",
        ["lambda", "mu", "nu", "direction_id", "max_abs_speed", "all_real", "causal"],
        [(p.lam, p.mu, p.nu, p.direction_id, p.max_abs_speed, p.all_real, p.causal) for p in points],
    )
    per = {}
    for p in points:
        key = (p.lam, p.mu, p.nu)
        worst, ok = per.get(key, (0.0, True))
        per[key] = (max(worst, p.max_abs_speed) if np.isfinite(p.max_abs_speed) else np.inf, ok and p.causal)
    write_csv(
        Path(out) / "causality_region.csv",
        ["lambda", "mu", "nu", "max_abs_speed", "causal"],
        [(*k, v[0], v[1]) for k, v in per.items()],
    )
    region = causal_region(points)
    own = causality_scan(state, eos, coeffs, [coeffs.shift], directions)
    worst = max(p.max_abs_speed for p in own)
    claims = [claim("configured (lam, mu, nu): real roots with |tau| <= 1", worst, 1.0,
                    passed=all(p.causal for p in own), triple=list(coeffs.shift))]
    return claims, {"grid_points": len(grid), "causal_points": len(region)}


def _profile_options(cfg):
    return ProfileOptions(**cfg["profile"])


def _sonic(cfg, eos):
    s = cfg["shock"]
    return sonic_base_state(eos, s["theta"], s["psi"], s["family"])


def cmd_profile(cfg, out):
    eos, coeffs, _ = _setup(cfg)
    sonic = _sonic(cfg, eos)
    alpha = cfg["shock"]["alpha"]
    opts = _profile_options(cfg)
    shock = hugoniot_continuation(sonic, eos, alpha, cfg["shock"]["max_alpha"])
    spectrum = profile_spectrum(sonic.state, eos, coeffs, shock.xi)
    prof = profile_solve(shock, eos, coeffs, opts)
    landau = profile_solve(shock, eos, coeffs, opts, landau=True)
    rep = profile_validate(prof, shock, eos, coeffs, landau, opts)
    write_csv(Path(out) / "profile.csv", prof.header(), prof.rows())
    write_csv(Path(out) / "profile_landau.csv", landau.header(), landau.rows())
    tol = cfg["tolerances"]
    claims = [
        claim("Rankine-Hugoniot residual", shock.rh_residual, tol["rh"]),
        claim("Lax shock", 0.0, 1.0, passed=shock.lax, speeds=[shock.speed_minus, shock.speed_plus]),
        claim("B^-1 A at the sonic state: simple zero, real spectrum", 0.0, 1.0,
              passed=spectrum.zero_simple and spectrum.all_real, spectrum=spectrum.values),
        claim("profile endpoints within tol_end", max(prof.start_residual, prof.end_residual), opts.tol_end * 1.0001),
        claim("max ODE residual", prof.max_ode_residual, tol["ode_residual"]),
        claim("profile validation", float(len(rep.failures)), 0.5, failures=rep.failures),
        claim("acoustic coordinate monotone", 0.0, 1.0, passed=rep.monotone),
    ]
    return claims, {"alpha": alpha, "validation": rep.as_dict(), "diagnostics": prof.diagnostics}


def _sweep_task(task):
    cfg, alpha = task
    eos, coeffs, _ = _setup(cfg)
    sonic = _sonic(cfg, eos)
    opts = _profile_options(cfg)
    shock = hugoniot_continuation(sonic, eos, alpha, cfg["shock"]["max_alpha"])
    prof = profile_solve(shock, eos, coeffs, opts)
    landau = profile_solve(shock, eos, coeffs, opts, landau=True)
    rep = profile_validate(prof, shock, eos, coeffs, None, opts)
    return {
        "alpha": alpha,
        "rh_residual": shock.rh_residual,
        "distance": hausdorff_distance(prof, landau),
        "start_residual": prof.start_residual,
        "end_residual": prof.end_residual,
        "max_ode_residual": prof.max_ode_residual,
        "landau_max_ode_residual": landau.max_ode_residual,
        "oriented": rep.oriented,
        "validation_failures": rep.failures,
    }


def cmd_sweep(cfg, out):
    alphas = [float(a) for a in cfg["shock"]["alphas"]]
    with _mapper(len(alphas)) as mapper:
        results = list(mapper(_sweep_task, [(cfg, a) for a in alphas]))
    rows, prev = [], None
    for r in results:
        r["ratio"] = float("nan") if prev is None else r["distance"] / prev
        prev = r["distance"]
        rows.append((r["alpha"], r["distance"], r["ratio"], r["rh_residual"], r["max_ode_residual"],
                     r["start_residual"], r["end_residual"]))
    write_csv(
        Path(out) / "sweep.csv",
        ["alpha", "hausdorff", "ratio", "rh_residual", "max_ode_residual", "start_residual", "end_residual"],
        rows,
    )
    tol, tol_end = cfg["tolerances"], cfg["profile"]["tol_end"]
    claims = [
        claim("Rankine-Hugoniot residual", max(r["rh_residual"] for r in results), tol["rh"]),
        claim("profile endpoints within tol_end", max(max(r["start_residual"], r["end_residual"]) for r in results),
              tol_end * 1.0001),
        claim("max ODE residual", max(r["max_ode_residual"] for r in results), tol["ode_residual"]),
        claim("orientation: psi- is the alpha-limit", 0.0, 1.0, passed=all(r["oriented"] for r in results)),
        claim("Hausdorff distance to the Landau profile strictly decreasing", 0.0, 1.0,
              passed=all(r["ratio"] < 1.0 for r in results[1:]), distances=[r["distance"] for r in results]),
    ]
    return claims, {"results": results}


COMMANDS = {
    "eos-check": cmd_eos_check,
    "verify": cmd_verify,
    "causality-scan": cmd_causality_scan,
    "profile": cmd_profile,
    "sweep": cmd_sweep,
}


def build_parser():
    p = _Parser(prog="bdnk-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="JSON or TOML configuration file")
        s.add_argument("--out", type=Path, default=Path("bdnk_out"), help="output directory")
        s.add_argument("--seed", type=int, help="RNG seed (overrides the config)")
        s.add_argument("--barotropic", action="store_true", default=None, help="four-field barotropic mode")
        s.add_argument("--quiet", action="store_true", help="only print the verdict")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    started = time.time()
    try:
        if args.seed is not None and args.seed < 0:
            raise UsageError("--seed must be non-negative")
        cfg = load_config(args.config, {"seed": args.seed, "barotropic": args.barotropic})
        args.out.mkdir(parents=True, exist_ok=True)
        worker_count()
        claims, extra = COMMANDS[args.command](cfg, args.out)
    except UsageError as exc:
        print(f"bdnk-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ShockError, SingularPencilError) as exc:
        # a solver giving up, or an exceptional coefficient triple, is a failed claim, not a crash
        claims, extra = [claim(type(exc).__name__, 1.0, 0.0, passed=False, message=str(exc))], {}
    except Exception as exc:
        log.exception("internal error")
        print(f"bdnk-lab: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    report = write_report(args.out, args.command, cfg, claims, started, extra)
    if not args.quiet:
        for c in claims:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} (tol {c.tolerance:g})")
    print(f"{args.command}: {'pass' if report['passed'] else 'FAIL'} -> {args.out}")
    return EXIT_OK if report["passed"] else EXIT_CLAIM


if __name__ == "__main__":
    sys.exit(main())
