"""Random cuspward launches on a horn: how deep they go and how many bounces before escape."""

import argparse

import numpy as np

from hornbilliard.dynamics import StopConditions, Termination
from hornbilliard.experiments import summarize, sweep_records
from hornbilliard.geometry import build_horn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-plus", type=float, default=2.0)
    ap.add_argument("--r-minus", type=float, default=1.0)
    ap.add_argument("--theta-max", type=float, default=0.3)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    g = build_horn(args.r_plus, args.r_minus, args.theta_max)
    stop = StopConditions(theta_max=g.theta_max, max_collisions=100_000)
    launches, recs = sweep_records(g, args.samples, args.seed, stop, args.workers)
    rows = [summarize(i, l, r) for i, (l, r) in enumerate(zip(launches, recs))]

    counts = {}
    for r in recs:
        counts[r.termination.value] = counts.get(r.termination.value, 0) + 1
    print("terminations:", counts)
    done = [r for r in rows if r.termination == Termination.escaped.value]
    if not done:
        return
    n = np.array([r.n_collisions for r in done])
    depth = np.array([r.min_theta for r in done])
    print(f"collisions  median {np.median(n):.0f}  p95 {np.percentile(n, 95):.0f}  max {n.max()}")
    print(f"min theta   median {np.median(depth):.4f}  min {depth.min():.4f}")
    # deeper entry means more bounces; a rough power law is visible in the log-log fit
    ok = depth > 0
    slope = np.polyfit(np.log(depth[ok]), np.log(n[ok]), 1)[0]
    print(f"log(collisions) vs log(min theta) slope {slope:.2f}")


if __name__ == "__main__":
    main()
