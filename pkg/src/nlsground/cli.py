"""Command-line front end.

Exit codes are part of the contract: 0 success, 1 configuration error,
2 numerical failure, 3 certification failure, 4 partial results (some
sweep rows failed).  All files are written atomically (temp + rename) so
a crashed run never leaves a half-written CSV behind.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .config import RunConfig, load_config
from .coupled import certify, solve_coupled
from .energy import EnergyParams, energy_report
from .errors import CertificationFailure, ConfigError, NumericalError
from .grid import (Profile, State, state_from_csv, write_profile_csv,
                   write_state_csv)
from .scalar import solve_scalar
from .threshold import SweepResult, sweep

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_CONFIG = 1
_EXIT_NUMERIC = 2
_EXIT_CERT = 3
_EXIT_PARTIAL = 4


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _atomic_csv(path: Path, writer) -> None:
    """Run `writer(tmp_path)` then rename the result into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_scalar(cfg: RunConfig) -> int:
    try:
        gs = solve_scalar(cfg.f, cfg.grid, cfg.shooting)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    out = cfg.output_dir
    _atomic_csv(out / "u0.csv", lambda p: write_profile_csv(gs.profile, p))
    params = EnergyParams(cfg.f, cfg.f, 0.0)
    state = State(gs.profile, Profile.zero(cfg.grid))
    rep = energy_report(state, params)
    body = "\n".join([rep.lines(),
                      f"center_value={_fmt(gs.center_value)}",
                      f"action={_fmt(gs.action)}"]) + "\n"
    _atomic_write(out / "u0.report", body)
    print(f"a={_fmt(gs.center_value)} action={_fmt(gs.action)} "
          f"residual={_fmt(gs.residual)}")
    return _EXIT_OK if gs.residual < 1e-6 else _EXIT_NUMERIC


def cmd_coupled(cfg: RunConfig) -> int:
    if cfg.beta is None:
        print("error: beta is required for the coupled command", file=sys.stderr)
        return _EXIT_CONFIG
    params = EnergyParams(cfg.f, cfg.g, cfg.beta)
    try:
        gs = solve_coupled(params, cfg.grid, cfg.solver, cfg.shooting)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    out = cfg.output_dir
    _atomic_csv(out / "state.csv", lambda p: write_state_csv(gs.state, p))
    try:
        rep = certify(gs, params)
    except CertificationFailure as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return _EXIT_CERT
    body = "\n".join([rep.lines(),
                      f"kind={gs.kind.value}",
                      f"m={_fmt(gs.m)}",
                      f"iterations={gs.iterations}"]) + "\n"
    _atomic_write(out / "state.report", body)
    print(f"kind={gs.kind.value} m={_fmt(gs.m)} beta={_fmt(cfg.beta)}")
    return _EXIT_OK


def _sweep_csv(res: SweepResult) -> str:
    lines = ["beta,m,kind,scalar_min,lhs_bound,beats"]
    for row in res.rows:
        kind = row.kind.value if row.kind is not None else "failed"
        lines.append(",".join([
            _fmt(row.beta), _fmt(row.m), kind, _fmt(row.scalar_min),
            _fmt(row.lhs_bound), str(row.vector_beats_scalar).lower(),
        ]))
    return "\n".join(lines) + "\n"


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.beta_list:
        print("error: a non-empty beta_list is required for sweep",
              file=sys.stderr)
        return _EXIT_CONFIG
    params = EnergyParams(cfg.f, cfg.g, cfg.beta_list[0])
    try:
        res = sweep(params, list(cfg.beta_list), cfg.grid, cfg.solver,
                    cfg.shooting)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    _atomic_write(cfg.output_dir / "sweep.csv", _sweep_csv(res))
    if res.beta0_bracket is not None:
        lo, hi = res.beta0_bracket
        print(f"bracket_lo={_fmt(lo)} bracket_hi={_fmt(hi)}")
    else:
        print("bracket=none")
    failed = [r for r in res.rows if r.kind is None]
    for r in failed:
        print(f"row beta={_fmt(r.beta)} failed: {r.error}", file=sys.stderr)
    return _EXIT_PARTIAL if failed else _EXIT_OK


def cmd_check(cfg: RunConfig, state_csv: str) -> int:
    try:
        state = state_from_csv(state_csv, cfg.grid)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    beta = cfg.beta if cfg.beta is not None else 0.0
    params = EnergyParams(cfg.f, cfg.g, beta)
    rep = energy_report(state, params)
    print(rep.lines())
    scale = 1e-6 * (1.0 + rep.K)
    ok = (abs(rep.J) <= scale
          and abs(rep.I - rep.K / 3.0) <= scale
          and rep.residual_u < 1e-5 and rep.residual_v < 1e-5)
    return _EXIT_OK if ok else _EXIT_CERT


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlsground",
        description="Radial ground states of a coupled nonlinear "
                    "Schrödinger system via Pohozaev-constrained "
                    "minimization.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("scalar", "solve the single-component equation"),
        ("coupled", "solve the coupled system at one beta"),
        ("sweep", "solve across beta_list and report the kind transition"),
        ("check", "re-certify a stored state CSV"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("config", help="path to a key = value config file")
        if name == "check":
            p.add_argument("state_csv", help="path to a stored state CSV")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    if args.command == "scalar":
        return cmd_scalar(cfg)
    if args.command == "coupled":
        return cmd_coupled(cfg)
    if args.command == "sweep":
        return cmd_sweep(cfg)
    return cmd_check(cfg, args.state_csv)


if __name__ == "__main__":
    sys.exit(main())
