"""Measured angular-momentum gain per round trip against the leading-order rate law."""

import argparse

from hornbilliard.continuum import rate_formulas, round_trip_measure
from hornbilliard.experiments import excursion
from hornbilliard.geometry import build_horn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--psi0", type=float, default=0.5)
    ap.add_argument("--depths", default="0.2,0.1,0.05,0.02,0.01")
    args = ap.parse_args()

    g = build_horn(2.0, 1.0, 0.3)
    print(f"{'s0':>6} {'trips':>6} {'min ratio':>10} {'max ratio':>10} {'ratio at deepest':>17}")
    for s0 in (float(x) for x in args.depths.split(",")):
        trips = round_trip_measure(excursion(g, s0, args.psi0))
        if not trips:
            print(f"{s0:6.3f} {0:6d}")
            continue
        ratios = [t.measured_rate() / rate_formulas(g, t.s, t.L_before).total for t in trips]
        deepest = min(range(len(trips)), key=lambda k: trips[k].s)
        print(f"{s0:6.3f} {len(trips):6d} {min(ratios):10.4f} {max(ratios):10.4f} {ratios[deepest]:17.4f}")


if __name__ == "__main__":
    main()
