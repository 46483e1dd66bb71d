"""Reusable experiment drivers: random sweeps and single cuspward excursions."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import invariant_series
from .dynamics import StopConditions, TrajectoryRecord, launch_state, simulate
from .geometry import HornGeometry

PSI_RANGE = 0.3


def sample_launches(g: HornGeometry, n: int, seed: int, psi_range: float = PSI_RANGE) -> list[tuple[float, float]]:
    """theta0 uniform in [theta_max/2, theta_max], psi0 uniform in [-psi_range, psi_range]."""
    rng = np.random.default_rng(seed)
    th = rng.uniform(0.5 * g.theta_max, g.theta_max, size=n)
    psi = rng.uniform(-psi_range, psi_range, size=n)
    return [(float(a), float(b)) for a, b in zip(th, psi)]


def run_launch(g: HornGeometry, stop: StopConditions, theta0: float, psi0: float) -> TrajectoryRecord:
    return simulate(g, launch_state(g, theta0, psi0), stop)


def _run_packed(args):
    return run_launch(*args)


def sweep_records(
    g: HornGeometry, n: int, seed: int, stop: StopConditions | None = None, workers: int = 1
) -> tuple[list[tuple[float, float]], list[TrajectoryRecord]]:
    """Simulate n random launches; results keep sample order whatever the worker count."""
    stop = stop or StopConditions(theta_max=g.theta_max)
    launches = sample_launches(g, n, seed)
    jobs = [(g, stop, a, b) for a, b in launches]
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            recs = list(pool.map(_run_packed, jobs, chunksize=max(1, n // (4 * workers))))
    else:
        recs = [_run_packed(j) for j in jobs]
    return launches, recs


@dataclass
class SweepRow:
    index: int
    theta0: float
    psi0: float
    termination: str
    n_collisions: int
    min_theta: float
    max_rel_J_drift: float

    def as_row(self):
        return (self.index, self.theta0, self.psi0, self.termination, self.n_collisions,
                self.min_theta, self.max_rel_J_drift)


SWEEP_COLUMNS = ["i", "theta0", "psi0", "termination", "n_collisions", "min_theta", "max_rel_J_drift"]


def summarize(index: int, launch: tuple[float, float], rec: TrajectoryRecord) -> SweepRow:
    thetas = [e.theta for e in rec.events]
    try:
        drift = invariant_series(rec).max_relative_drift()
    except ValueError:
        drift = math.nan
    return SweepRow(index, launch[0], launch[1], rec.termination.value, len(rec.events),
                    min(thetas) if thetas else math.nan, drift)


def excursion(g: HornGeometry, s0: float, psi0: float, stop: StopConditions | None = None) -> TrajectoryRecord:
    """Launch on the middle circle at depth s0 and stop once back across the same radial line."""
    if not s0 > 0:
        raise ValueError("depth s0 must be positive")
    theta0 = s0 / g.r_mid
    base = stop or StopConditions()
    return simulate(g, launch_state(g, theta0, psi0), replace(base, theta_max=theta0))


@dataclass
class ExcursionSummary:
    s0: float
    psi0: float
    n_collisions: int
    J0: float
    max_rel_J_drift: float
    s_min: float

    @property
    def depth_ratio(self) -> float:
        return self.s_min / math.sqrt(self.J0)


def excursion_summary(g: HornGeometry, s0: float, psi0: float) -> ExcursionSummary:
    rec = excursion(g, s0, psi0)
    series = invariant_series(rec)
    return ExcursionSummary(s0, psi0, len(rec.events), float(series.J[0]),
                            series.max_relative_drift(), float(series.s_mid.min()))
