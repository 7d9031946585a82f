"""Command-line front end.

Subcommands ``flux``, ``sweep``, ``oracle``, ``wave`` and ``verify`` write
JSON or CSV plot data.  Every output embeds a run manifest (subcommand,
resolved parameters, output path, seed, tool version) and carries no
timestamps, so identical manifests give bit-identical files.

Exit codes: 0 success, 1 a requested check did not pass, 2 usage or invalid
configuration, 3 numerical failure, 4 resolution (wavefront) guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from scipy import linalg

from . import __version__, flux, lattice, oracle, scattering, verification
from .momentum import DEFAULT_GRID, momentum_grid

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC, EXIT_GUARD = 0, 1, 2, 3, 4
# quad_error value written for rows whose quadrature did not certify the tolerance
FAILED_ROW = -1.0


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return "nan"
    return format(float(x), ".17g")


def _manifest(args: argparse.Namespace, params: dict) -> dict:
    return {
        "subcommand": args.command,
        "parameters": params,
        "output": args.output,
        "seed": args.seed,
        "version": __version__,
    }


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _emit_json(payload: dict, output: str | None) -> None:
    # json writes floats with repr, the shortest string that round-trips exactly
    _emit(json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n", output)


def _emit_csv(header_lines: list[str], columns: list[str], rows, output: str | None) -> None:
    lines = [f"# {h}" for h in header_lines]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _emit("\n".join(lines) + "\n", output)


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _check_betas(beta_l: float, beta_r: float) -> None:
    if beta_l < 0 or beta_r < 0:
        raise UsageError("inverse temperatures must be non-negative")


def cmd_flux(args, params: dict) -> int:
    _require(params, "gamma", "beta_l", "beta_r")
    _check_betas(params["beta_l"], params["beta_r"])
    if not params["tol"] > 0:
        raise UsageError("--tol must be positive")
    res = flux.heat_flux(params["gamma"], params["beta_l"], params["beta_r"], params["tol"])
    payload = {
        "gamma": res.gamma, "beta_l": res.beta_l, "beta_r": res.beta_r,
        "J": res.J, "sigma": res.sigma, "lower_bound": res.lower_bound,
        "quad_error": res.quad_error, "manifest": _manifest(args, params),
    }
    _emit_json(payload, args.output)
    return EXIT_OK if res.converged and np.isfinite(res.J) else EXIT_NUMERIC


def _symmetric_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    # t is exactly antisymmetric under i -> steps-1-i, so a grid centred on 0 mirrors bitwise
    t = (2 * np.arange(steps) - (steps - 1)) / (steps - 1)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def cmd_sweep(args, params: dict) -> int:
    _require(params, "beta_l", "beta_r")
    _check_betas(params["beta_l"], params["beta_r"])
    lo, hi, steps = params["gamma_min"], params["gamma_max"], params["steps"]
    if steps < 2 or not hi > lo:
        raise UsageError("need --steps >= 2 and --gamma-max > --gamma-min")
    rows, failed = [], 0
    for r in flux.sweep(_symmetric_grid(lo, hi, steps), params["beta_l"], params["beta_r"], params["tol"]):
        ok = r.converged and np.isfinite(r.J)
        failed += not ok
        rows.append((r.gamma, r.J, r.sigma, r.lower_bound, r.quad_error if ok else FAILED_ROW))
    header = [
        "manifest: " + json.dumps(_manifest(args, params), sort_keys=True),
        f"quad_error = {FAILED_ROW:g} marks a row whose quadrature did not reach tol",
    ]
    _emit_csv(header, ["gamma", "J", "sigma", "lower_bound", "quad_error"], rows, args.output)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_oracle(args, params: dict) -> int:
    try:
        cfg = lattice.LatticeConfig(params["n"], params["a"], params["gamma"],
                                    params["beta_l"], params["beta_r"], params["lattice"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    T = params["t_max"]
    if not T > 0:
        raise UsageError("--t-max must be positive")
    try:
        oracle.check_horizon(cfg, T)
    except oracle.WavefrontError as exc:
        print(f"nessxy oracle: {exc}", file=sys.stderr)
        return EXIT_GUARD
    try:
        run = oracle.ergodic_flux(cfg, T)
    except (linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        print(f"nessxy oracle: eigensolve failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    closed = flux.heat_flux(cfg.gamma, cfg.beta_l, cfg.beta_r)
    abs_diff = abs(run.J_num - closed.J)
    passed = abs_diff < params["accept"]
    payload = {
        "config": {"n": cfg.n, "a": cfg.a, "gamma": cfg.gamma, "beta_l": cfg.beta_l,
                   "beta_r": cfg.beta_r, "trunc": cfg.trunc, "T": T},
        "J_num": run.J_num,
        "J_closed": closed.J,
        "abs_diff": abs_diff,
        "first_law_residual": run.first_law_residual,
        "bound_state_count": run.bound_state_count,
        "diagnostics": {
            "J_right": run.J_right, "window": list(run.window), "wavefront_reach": run.reach,
            "quad_error": closed.quad_error, "accept": params["accept"], "passed": passed,
        },
        "manifest": _manifest(args, params),
    }
    _emit_json(payload, args.output)
    return EXIT_OK if passed else EXIT_CHECK


def cmd_wave(args, params: dict) -> int:
    _require(params, "gamma", "x", "a")
    if params["grid"] < 4:
        raise UsageError("--grid must be at least 4")
    img = scattering.wave_apply(params["gamma"], params["x"], params["a"])
    k, p, h = img.on_grid(params["grid"])
    omitted = np.setdiff1d(momentum_grid(params["grid"]), k)
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(h))):
        return EXIT_NUMERIC
    header = [
        "manifest: " + json.dumps(_manifest(args, params), sort_keys=True),
        "omitted exceptional points: k = " + ", ".join(_fmt(v) for v in omitted),
    ]
    rows = zip(k, p.real, p.imag, h.real, h.imag)
    _emit_csv(header, ["k", "re_w1", "im_w1", "re_w2", "im_w2"], rows, args.output)
    return EXIT_OK


def cmd_verify(args, params: dict) -> int:
    results = verification.run_checks(fast=params["fast"], seed=args.seed)
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nessxy", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file of option values; command-line flags override it")
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    def betas(p, defaults=(None, None)):
        p.add_argument("--beta-l", type=float, default=defaults[0], help="left inverse temperature")
        p.add_argument("--beta-r", type=float, default=defaults[1], help="right inverse temperature")

    p = sub.add_parser("flux", help="heat flux at one parameter point (JSON)")
    common(p)
    p.add_argument("--gamma", type=float)
    betas(p)
    p.add_argument("--tol", type=float, default=flux.DEFAULT_TOL)
    p.set_defaults(func=cmd_flux)

    p = sub.add_parser("sweep", help="heat flux over an anisotropy grid (CSV)")
    common(p)
    p.add_argument("--gamma-min", type=float, default=-4.0)
    p.add_argument("--gamma-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=161)
    betas(p)
    p.add_argument("--tol", type=float, default=flux.DEFAULT_TOL)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="compare the closed form with the lattice ergodic mean (JSON)")
    common(p)
    p.add_argument("--gamma", type=float, default=1.0)
    betas(p, (1.0, 2.0))
    p.add_argument("--n", type=int, default=verification.REFERENCE["n"], help="sample half-width")
    p.add_argument("--a", type=int, default=verification.REFERENCE["a"], help="anisotropic bond (a, a+1)")
    p.add_argument("--lattice", type=int, default=600, help="truncation: sites -lattice..lattice")
    p.add_argument("--t-max", type=float, default=200.0)
    p.add_argument("--accept", type=float, default=1e-2)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("wave", help="momentum-space wave-operator image of a localized vector (CSV)")
    common(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--x", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.set_defaults(func=cmd_wave)

    p = sub.add_parser("verify", help="run the invariant and acceptance checks")
    common(p)
    p.add_argument("--fast", action="store_true", help="skip the large lattice eigensolves")
    p.set_defaults(func=cmd_verify)
    return parser


_META = {"command", "func", "config", "output", "seed"}


def _load_config(parser, sub, args, argv):
    """Re-parse with the config file values as defaults, so explicit flags win."""
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in {"config", "help"}:
            raise UsageError(f"unknown config key {key!r}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    args = parser.parse_args(argv)
    for action in sub._actions:
        # values from the file bypass argparse conversion
        if action.type is not None and getattr(args, action.dest, None) is not None:
            try:
                setattr(args, action.dest, action.type(getattr(args, action.dest)))
            except (TypeError, ValueError) as exc:
                raise UsageError(f"bad value for {action.dest}: {exc}") from exc
    return args


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    try:
        if args.config:
            sub = parser._subparsers._group_actions[0].choices[args.command]
            args = _load_config(parser, sub, args, argv)
        params = {k: v for k, v in sorted(vars(args).items()) if k not in _META}
        return args.func(args, params)
    except UsageError as exc:
        print(f"nessxy {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
