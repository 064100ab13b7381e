#!/usr/bin/env python3
"""Measure limit-cycle period and amplitude across eps and compare with the
classical relaxation asymptotics T -> 3 - 2 ln 2 and amplitude -> 2."""

import argparse
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from flowcurv import find_limit_cycle, make_system

T_LIMIT = 3.0 - 2.0 * math.log(2.0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", default="0.1,0.05,0.02,0.01")
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    print(f"{'eps':>7s} {'period':>10s} {'T-(3-2ln2)':>11s} {'~7.01*e^2/3':>11s} {'amp':>9s}")
    for eps in (float(v) for v in args.eps.split(",")):
        sys_ = make_system([0, -1, 0, 1 / 3], [0, 1], eps)
        cyc = find_limit_cycle(sys_, 1.0, args.tol, integ_tol=1e-9)
        excess = cyc.period - T_LIMIT
        predicted = 3 * 2.33811 * eps ** (2 / 3)
        print(f"{eps:7.3f} {cyc.period:10.6f} {excess:11.6f} {predicted:11.6f} "
              f"{cyc.amplitude_x:9.6f}")
    print(f"eps->0 period limit: {T_LIMIT:.6f}")


if __name__ == "__main__":
    main()
