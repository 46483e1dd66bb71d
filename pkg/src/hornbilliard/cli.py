"""Command-line front end.

    hornbilliard simulate --r-plus 2 --r-minus 1 --theta0 0.3 --psi0 -0.05 --out t.csv --svg t.svg
    hornbilliard sweep --samples 1000 --seed 7 --out sweep.csv
    hornbilliard lemma-check --samples 200 --relax 0.9 --out margins.csv
    hornbilliard adiabatic --depths 0.2,0.1,0.05 --out drift.csv
    hornbilliard ode --s0 0.1 --sdot0 -0.5 --dt 1e-4 --out ode.csv

Exit codes: 0 success, 1 configuration error, 2 degenerate termination
(grazing or tip), 3 collision budget exhausted, 4 lemma violation.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

from .continuum import OdeError, OdeState, excursion_time, integrate, invariant
from .diagnostics import lemma_check
from .dynamics import ParticleState, StopConditions, Termination, launch_state, simulate
from .experiments import SWEEP_COLUMNS, excursion_summary, summarize, sweep_records
from .geometry import GeometryError, HornGeometry, Vec2, build_horn, contains, theta_of
from .output import EVENT_COLUMNS, event_rows, provenance, trajectory_svg, write_rows

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_BUDGET, EXIT_LEMMA = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value file; flags override it")
    p.add_argument("--r-plus", dest="r_plus", type=float, default=2.0)
    p.add_argument("--r-minus", dest="r_minus", type=float, default=1.0)
    p.add_argument("--theta-max", dest="theta_max", type=float, default=0.3)
    p.add_argument("--kappa-plus", dest="kappa_plus", type=float, default=0.0)
    p.add_argument("--kappa-minus", dest="kappa_minus", type=float, default=0.0)
    p.add_argument("--max-collisions", dest="max_collisions", type=int, default=1_000_000)
    p.add_argument("--eps-graze", dest="eps_graze", type=float, default=1e-9)
    p.add_argument("--s-tip", dest="s_tip", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="CSV output path (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hornbilliard", description="Billiard trajectories in a horn.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one trajectory, one CSV row per collision")
    _add_common(p)
    p.add_argument("--theta0", type=float, default=0.3)
    p.add_argument("--psi0", type=float, default=-0.05)
    p.add_argument("--x0", type=float)
    p.add_argument("--y0", type=float)
    p.add_argument("--vx0", type=float)
    p.add_argument("--vy0", type=float)
    p.add_argument("--svg", type=Path)

    p = sub.add_parser("sweep", help="random launches, one summary row per trajectory")
    _add_common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("lemma-check", help="sweep and check the repulsion inequalities")
    _add_common(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--relax", type=float, default=0.9)
    p.add_argument("--s-cut", dest="s_cut", type=float, help="bound enforced only for s <= s_cut")

    p = sub.add_parser("adiabatic", help="invariant drift versus entry depth")
    _add_common(p)
    p.add_argument("--depths", type=_float_list, default=[0.2, 0.1, 0.05])
    p.add_argument("--psi0", type=float, default=0.5)

    p = sub.add_parser("ode", help="integrate the continuum equation")
    _add_common(p)
    p.add_argument("--s0", type=float, default=0.1)
    p.add_argument("--sdot0", type=float, default=-0.5)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--t-end", dest="t_end", type=float,
                   help="end time; default is one full excursion when sdot0 < 0, else t=1")
    p.add_argument("--stride", type=int, default=1, help="write every n-th state")
    return parser


def _read_config(path: Path) -> dict[str, str]:
    values = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
    actions = {a.dest: a for a in sub._actions}
    file_values = _read_config(args.config)
    defaults = {}
    for key, raw in file_values.items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise ConfigError(f"config: unknown key {key!r}")
        try:
            defaults[key] = action.type(raw) if action.type else raw
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"config: bad value for {key}: {raw!r}") from exc
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _geometry(args) -> HornGeometry:
    return build_horn(args.r_plus, args.r_minus, args.theta_max, args.kappa_plus, args.kappa_minus)


def _stop(args) -> StopConditions:
    try:
        return StopConditions(args.theta_max, args.max_collisions, args.s_tip, args.eps_graze)
    except ValueError as exc:
        raise ConfigError("max_collisions, s_tip and eps_graze must be positive") from exc


@contextlib.contextmanager
def _sink(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _exit_for(terminations) -> int:
    terms = set(terminations)
    if terms & {Termination.grazing, Termination.tip_degenerate}:
        return EXIT_DEGENERATE
    if Termination.max_collisions in terms:
        return EXIT_BUDGET
    return EXIT_OK


def _report(args, line: str) -> None:
    # keep stdout clean for the CSV when no --out is given
    print(line, file=sys.stdout if args.out is not None else sys.stderr)


def cmd_simulate(args) -> int:
    g = _geometry(args)
    stop = _stop(args)
    explicit = [args.x0, args.y0, args.vx0, args.vy0]
    if any(v is not None for v in explicit):
        if any(v is None for v in explicit):
            raise ConfigError("x0, y0, vx0, vy0 must be given together")
        vel = Vec2(args.vx0, args.vy0)
        if vel.norm() == 0:
            raise ConfigError("vx0, vy0: velocity must be nonzero")
        state = ParticleState(Vec2(args.x0, args.y0), vel.unit())
        if not contains(g, state.position):
            raise ConfigError("x0, y0: initial position is outside the horn")
        if theta_of(g, state.position) > stop.theta_max:
            raise ConfigError("x0, y0: initial position lies beyond theta_max")
    else:
        if not 0 < args.theta0 <= args.theta_max:
            raise ConfigError("theta0 must lie in (0, theta_max]")
        if not abs(args.psi0) < math.pi / 2:
            raise ConfigError("psi0 must lie in (-pi/2, pi/2)")
        state = launch_state(g, args.theta0, args.psi0)
    rec = simulate(g, state, stop)
    with _sink(args.out) as fh:
        write_rows(fh, EVENT_COLUMNS, event_rows(rec), provenance(args.seed, g))
    if args.svg is not None:
        args.svg.write_text(trajectory_svg(rec))
    _report(args, f"termination={rec.termination.value} collisions={len(rec.events)}")
    return _exit_for([rec.termination])


def cmd_sweep(args) -> int:
    if args.samples < 0:
        raise ConfigError("samples must be non-negative")
    g = _geometry(args)
    launches, recs = sweep_records(g, args.samples, args.seed, _stop(args), args.workers)
    rows = [summarize(i, la, r) for i, (la, r) in enumerate(zip(launches, recs))]
    with _sink(args.out) as fh:
        write_rows(fh, SWEEP_COLUMNS, (r.as_row() for r in rows), provenance(args.seed, g))
    counts: dict[str, int] = {}
    for r in rows:
        counts[r.termination] = counts.get(r.termination, 0) + 1
    summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items())) or "no samples"
    _report(args, f"samples={len(rows)} {summary}")
    return _exit_for(r.termination for r in recs)


MARGIN_COLUMNS = ["i", "n", "wall", "s_wall", "theta", "v_dot_n", "delta_L", "bound", "margin"]


def cmd_lemma_check(args) -> int:
    if args.samples < 0:
        raise ConfigError("samples must be non-negative")
    if not args.relax > 0:
        raise ConfigError("relax must be positive")
    g = _geometry(args)
    _, recs = sweep_records(g, args.samples, args.seed, _stop(args), args.workers)
    rows = []
    n_viol = 0
    n_events = 0
    worst = math.inf
    min_vn = math.inf
    c_eff = args.relax * g.lemma_c
    for i, rec in enumerate(recs):
        rep = lemma_check(rec, args.relax, args.s_cut)
        n_viol += len(rep.violations)
        n_events += rep.n_events
        worst = min(worst, rep.min_margin)
        min_vn = min(min_vn, rep.min_v_dot_n)
        for e in rec.events:
            if not 0 < e.theta <= g.theta_max:
                continue
            bound = c_eff * e.arc_s * e.v_dot_n
            dl = e.L_plus - e.L_minus
            rows.append((i, e.index, e.wall, e.arc_s, e.theta, e.v_dot_n, dl, bound, dl - bound))
    with _sink(args.out) as fh:
        write_rows(fh, MARGIN_COLUMNS, rows, provenance(args.seed, g, relax=args.relax))
    _report(args, f"trajectories={len(recs)} events={n_events} c_eff={c_eff:.6g} "
                  f"min_margin={worst:.6g} min_v_dot_n={min_vn:.6g} violations={n_viol}")
    if n_viol:
        _report(args, "FAIL: lemma bound violated")
        return EXIT_LEMMA
    return _exit_for(r.termination for r in recs)


ADIABATIC_COLUMNS = ["s0", "psi0", "n_collisions", "J0", "max_rel_J_drift", "s_min", "sqrt_J0"]


def cmd_adiabatic(args) -> int:
    if not args.depths:
        raise ConfigError("depths must list at least one value")
    if any(not s > 0 for s in args.depths):
        raise ConfigError("depths must be positive")
    g = _geometry(args)
    rows = []
    for s0 in args.depths:
        ex = excursion_summary(g, s0, args.psi0)
        rows.append((ex.s0, ex.psi0, ex.n_collisions, ex.J0, ex.max_rel_J_drift, ex.s_min, math.sqrt(ex.J0)))
    with _sink(args.out) as fh:
        write_rows(fh, ADIABATIC_COLUMNS, rows, provenance(args.seed, g, psi0=args.psi0))
    drifts = [r[4] for r in rows]
    monotone = all(a > b for a, b in zip(drifts, drifts[1:]))
    _report(args, "drift by depth: " + ", ".join(f"{r[0]:g}:{r[4]:.4g}" for r in rows)
            + f" (decreasing={monotone})")
    return EXIT_OK


def cmd_ode(args) -> int:
    if not args.s0 > 0:
        raise ConfigError("s0 must be positive")
    if not abs(args.sdot0) <= 1:
        raise ConfigError("sdot0 must lie in [-1, 1]")
    if not args.dt > 0:
        raise ConfigError("dt must be positive")
    if args.stride < 1:
        raise ConfigError("stride must be >= 1")
    init = OdeState(args.s0, args.sdot0, 0.0)
    if args.t_end is not None:
        states = integrate(init, args.dt, args.t_end)
    elif args.sdot0 < 0:
        states = integrate(init, args.dt, 1.5 * excursion_time(args.s0, args.sdot0), stop_on_return=True)
    else:
        states = integrate(init, args.dt, 1.0)
    J0 = invariant(init)
    drift = max(abs(invariant(s) - J0) for s in states) / J0 if J0 > 0 else 0.0
    rows = ((s.t, s.s, s.s_dot, invariant(s)) for s in states[:: args.stride])
    with _sink(args.out) as fh:
        write_rows(fh, ["t", "s", "s_dot", "J"], rows,
                   f"# seed={args.seed} s0={args.s0!r} sdot0={args.sdot0!r} dt={args.dt!r}\n")
    _report(args, f"steps={len(states) - 1} s_min={min(s.s for s in states):.10g} "
                  f"J0={J0:.10g} max_rel_J_drift={drift:.3e}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "lemma-check": cmd_lemma_check,
    "adiabatic": cmd_adiabatic,
    "ode": cmd_ode,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (ConfigError, GeometryError, OdeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
