"""Command-line front end: simulate | manifold | verify | classify | study.

Configs are JSON objects {"name", "F", "g", "eps"} with polynomial
coefficients ascending by degree; command parameters can ride along in
the same object and every one of them has a flag override.  Dense numeric
series go out as CSV, reports as JSON with a stable field order.  Output
files are written atomically (temp file + rename).

Exit codes: 0 success/verified, 1 verification false, 2 usage or config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from dataclasses import asdict, dataclass, field, fields

from .curvature import format_manifold_csv, slow_manifold_table
from .dynamics import IntegrationError, find_limit_cycle, format_trajectory_csv, integrate
from .energy import classify_case
from .system import State, check_assumptions, make_system
from .verify import convergence_study, minorsky_report


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    """System definition plus command parameters, all round-trippable."""

    name: str = ""
    F: list[float] = field(default_factory=list)
    g: list[float] = field(default_factory=list)
    eps: float = 0.05
    x0: float = 0.1
    y0: float = 0.1
    t_end: float = 20.0
    tol: float = 1e-9
    band: float = 1.0
    x_lo: float = 1.2
    x_hi: float = 2.0
    n: int = 100
    y_guess: float = 1.0
    x_max: float = 10.0
    x_min: float | None = None
    fold_tol: float = 1e-6
    eps_list: list[float] = field(default_factory=lambda: [0.1, 0.05, 0.025])
    probe_lo: float = 1.6
    probe_hi: float = 1.9

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def validate(self) -> None:
        if not isinstance(self.name, str):
            raise ConfigError("field 'name' must be a string")
        for key in ("F", "g"):
            coeffs = getattr(self, key)
            if (not isinstance(coeffs, list) or not coeffs
                    or not all(isinstance(v, (int, float)) for v in coeffs)):
                raise ConfigError(f"field '{key}' must be a non-empty array of numbers")
        if not (isinstance(self.eps, (int, float)) and self.eps > 0):
            raise ConfigError("field 'eps' must be positive")
        if not (1e-13 <= self.tol <= 1e-3):
            raise ConfigError("field 'tol' must lie in [1e-13, 1e-3]")
        if not self.t_end > 0:
            raise ConfigError("field 't_end' must be positive")
        if not self.band > 0:
            raise ConfigError("field 'band' must be positive")
        if not self.fold_tol > 0:
            raise ConfigError("field 'fold_tol' must be positive")
        if not self.x_lo < self.x_hi:
            raise ConfigError("fields 'x_lo'/'x_hi' must be an ordered range")
        if self.n < 2:
            raise ConfigError("field 'n' must be at least 2")
        if not self.y_guess > 0:
            raise ConfigError("field 'y_guess' must be positive")
        if not self.x_max > 0:
            raise ConfigError("field 'x_max' must be positive")
        if not self.eps_list or any(
            b >= a for a, b in zip(self.eps_list[:-1], self.eps_list[1:])
        ):
            raise ConfigError("field 'eps_list' must be strictly decreasing and non-empty")
        if not self.probe_lo < self.probe_hi:
            raise ConfigError("fields 'probe_lo'/'probe_hi' must be an ordered range")


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


_OVERRIDE_FLAGS: dict[str, type] = {
    "eps": float, "x0": float, "y0": float, "t_end": float, "tol": float,
    "band": float, "x_lo": float, "x_hi": float, "n": int, "y_guess": float,
    "x_max": float, "x_min": float, "probe_lo": float, "probe_hi": float,
    "fold_tol": float,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowcurv",
        description="Slow-manifold, curvature and energy analysis of planar "
                    "two-timescale Lienard systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "integrate a trajectory and export t,x,y,... CSV"),
        ("manifold", "export the slow-branch table over an x range"),
        ("verify", "limit cycle -> vicinity -> sign-check report"),
        ("classify", "sign-certify the case function H"),
        ("study", "fit the approximation order over an eps sweep"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="path to the system JSON config")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--dump-config", action="store_true",
                        help="print the merged config JSON and exit")
        for flag, typ in _OVERRIDE_FLAGS.items():
            sp.add_argument(f"--{flag.replace('_', '-')}", type=typ, default=None)
        if name == "study":
            sp.add_argument("--eps-list", default=None,
                            help="comma-separated decreasing eps values")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_dict(_load_config(args.config))
    for flag in _OVERRIDE_FLAGS:
        val = getattr(args, flag, None)
        if val is not None:
            setattr(cfg, flag, val)
    eps_list = getattr(args, "eps_list", None)
    if eps_list is not None:
        try:
            cfg.eps_list = [float(v) for v in eps_list.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"field 'eps_list' must be numbers: {exc}") from exc
    cfg.validate()
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out is None:
        _sys.stdout.write(text)
    else:
        _atomic_write(out, text)


def _assumptions_dict(rep) -> dict:
    def one(c):
        return {"holds": c.holds, "witness": c.witness, "detail": c.detail}

    return {
        "I": one(rep.assumption_I),
        "II": one(rep.assumption_II),
        "III": one(rep.assumption_III),
        "IV": one(rep.assumption_IV),
        "positive_zero_a": rep.positive_zero_a,
        "gprime_nonneg": one(rep.gprime_nonneg),
    }


def cmd_simulate(cfg: RunConfig, out: str | None) -> int:
    sys_ = make_system(cfg.F, cfg.g, cfg.eps)
    traj = integrate(sys_, State(0.0, cfg.x0, cfg.y0), cfg.t_end, cfg.tol)
    csv = format_trajectory_csv(sys_, traj)
    last = traj.samples[-1]
    summary = json.dumps({
        "accepted_steps": traj.accepted_steps,
        "rejected_steps": traj.rejected_steps,
        "final_state": {"t": last.t, "x": last.x, "y": last.y},
    })
    if out is None:
        _sys.stdout.write(csv)
        _sys.stderr.write(summary + "\n")
    else:
        _atomic_write(out, csv)
        _sys.stdout.write(summary + "\n")
    return 0


def cmd_manifold(cfg: RunConfig, out: str | None) -> int:
    sys_ = make_system(cfg.F, cfg.g, cfg.eps)
    rows = slow_manifold_table(sys_, cfg.x_lo, cfg.x_hi, cfg.n, fold_tol_scale=cfg.fold_tol)
    _emit(format_manifold_csv(rows), out)
    return 0


def cmd_verify(cfg: RunConfig, out: str | None) -> int:
    sys_ = make_system(cfg.F, cfg.g, cfg.eps)
    assumptions = check_assumptions(sys_, cfg.x_max)
    if not assumptions.all_hold:
        doc = {
            "system": cfg.name,
            "eps": cfg.eps,
            "band": cfg.band,
            "n_points": 0,
            "checks": {},
            "overall": False,
            "assumptions": _assumptions_dict(assumptions),
        }
        _emit(json.dumps(doc) + "\n", out)
        return 1
    cycle = find_limit_cycle(sys_, cfg.y_guess, cfg.tol, integ_tol=cfg.tol)
    if not cycle.converged:
        raise IntegrationError("limit cycle search did not converge")
    report = minorsky_report(sys_, cycle, cfg.band, system_name=cfg.name, x_min=cfg.x_min)
    doc = report.to_json_dict()
    doc["assumptions"] = _assumptions_dict(assumptions)
    _emit(json.dumps(doc) + "\n", out)
    return 0 if report.overall else 1


def cmd_classify(cfg: RunConfig, out: str | None) -> int:
    sys_ = make_system(cfg.F, cfg.g, cfg.eps)
    cls = classify_case(sys_, cfg.x_max)
    doc = {
        "case": cls.case_label,
        "H_coeffs": cls.H_poly.to_list(),
        "C1_witness": cls.c1_witness,
        "Gppp_sign": cls.Gppp_sign,
    }
    _emit(json.dumps(doc) + "\n", out)
    return 0


def cmd_study(cfg: RunConfig, out: str | None) -> int:
    sys_ = make_system(cfg.F, cfg.g, cfg.eps)
    study = convergence_study(
        sys_, cfg.eps_list, (cfg.probe_lo, cfg.probe_hi), y_guess=cfg.y_guess,
    )
    doc = {
        "eps_values": list(study.eps_values),
        "distances": list(study.distances),
        "fitted_order": study.fitted_order,
        "distances_critical": list(study.distances_critical),
        "fitted_order_critical": study.fitted_order_critical,
    }
    _emit(json.dumps(doc) + "\n", out)
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "manifold": cmd_manifold,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "study": cmd_study,
}


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
    except (ConfigError, ValueError) as exc:
        _sys.stderr.write(f"config error: {exc}\n")
        return 2
    if args.dump_config:
        _sys.stdout.write(cfg.to_json() + "\n")
        return 0
    try:
        return _COMMANDS[args.command](cfg, args.out)
    except IntegrationError as exc:
        _sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except ValueError as exc:
        _sys.stderr.write(f"config error: {exc}\n")
        return 2


def console_main() -> None:
    raise SystemExit(main())
