#!/usr/bin/env python3
"""Fit the approximation order of the curvature zero-set branch against the
critical manifold over an eps sweep and print the distance table."""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from flowcurv import convergence_study, make_system

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", default=str(CONFIGS / "vdp.json"))
    ap.add_argument("--eps", default="0.1,0.05,0.025")
    ap.add_argument("--probe", default="1.6,1.9", help="x window probed on the descent")
    args = ap.parse_args()

    cfg = json.loads(pathlib.Path(args.config).read_text())
    sys_ = make_system(cfg["F"], cfg["g"], cfg["eps"])
    eps_values = [float(v) for v in args.eps.split(",")]
    lo, hi = (float(v) for v in args.probe.split(","))

    study = convergence_study(sys_, eps_values, (lo, hi))
    print(f"{'eps':>8s} {'d(branch)':>12s} {'d(critical)':>12s}")
    for e, d, dc in zip(study.eps_values, study.distances, study.distances_critical):
        print(f"{e:8.4f} {d:12.4e} {dc:12.4e}")
    print(f"fitted order, trajectory -> curvature branch : {study.fitted_order:.3f}")
    print(f"fitted order, trajectory -> critical manifold: {study.fitted_order_critical:.3f}")


if __name__ == "__main__":
    main()
