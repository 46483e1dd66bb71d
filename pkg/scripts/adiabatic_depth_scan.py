"""Drift of the adiabatic invariant along single excursions, for a range of entry depths."""

import argparse

import numpy as np

from hornbilliard.continuum import shadow_compare
from hornbilliard.experiments import excursion, excursion_summary
from hornbilliard.geometry import build_horn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--psi0", type=float, default=0.5)
    ap.add_argument("--depths", default="0.4,0.2,0.1,0.05,0.025")
    args = ap.parse_args()

    g = build_horn(2.0, 1.0, 0.3)
    depths = [float(x) for x in args.depths.split(",")]
    print(f"{'s0':>7} {'bounces':>8} {'J drift':>10} {'depth/sqrtJ':>12} {'shadow dev':>11}")
    drifts = []
    for s0 in depths:
        ex = excursion_summary(g, s0, args.psi0)
        sh = shadow_compare(excursion(g, s0, args.psi0), dt=1e-4)
        drifts.append(ex.max_rel_J_drift)
        print(f"{s0:7.3f} {ex.n_collisions:8d} {ex.max_rel_J_drift:10.4f} {ex.depth_ratio:12.5f} {sh.max_deviation:11.4f}")
    slope = np.polyfit(np.log(depths), np.log(drifts), 1)[0]
    print(f"drift ~ s0^{slope:.2f}")


if __name__ == "__main__":
    main()
