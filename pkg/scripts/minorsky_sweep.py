#!/usr/bin/env python3
"""Run the nine-point sign-check pipeline over both bundled systems and an
eps sweep; print one row per run plus the per-check failure breakdown."""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from flowcurv import find_limit_cycle, make_system
from flowcurv.verify import minorsky_report

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", default="0.1,0.05,0.02", help="comma-separated eps values")
    ap.add_argument("--band", type=float, default=1.0)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()
    eps_values = [float(v) for v in args.eps.split(",")]

    print(f"{'system':14s} {'eps':>6s} {'n':>5s} {'overall':>8s}  failing checks")
    for path in (CONFIGS / "vdp.json", CONFIGS / "llibre_mereu.json"):
        cfg = json.loads(path.read_text())
        for eps in eps_values:
            sys_ = make_system(cfg["F"], cfg["g"], eps)
            cycle = find_limit_cycle(sys_, 1.0, args.tol, integ_tol=args.tol)
            rep = minorsky_report(sys_, cycle, args.band, system_name=cfg["name"])
            fails = {c: r.fail_count for c, r in rep.checks.items() if r.fail_count}
            print(f"{cfg['name']:14s} {eps:6.3f} {rep.n_points:5d} {str(rep.overall):>8s}  "
                  f"{fails if fails else '-'}")


if __name__ == "__main__":
    main()
