"""CSV and SVG writers for trajectories and experiment summaries."""

from __future__ import annotations

import math
from typing import Iterable, Sequence, TextIO

from .diagnostics import adiabatic_invariant
from .dynamics import TrajectoryRecord, _escape_time
from .geometry import HornGeometry, boundary_point, theta_of

EVENT_COLUMNS = (
    "n,t,wall,x,y,s_wall,s_mid,theta,vmx,vmy,vpx,vpy,v_dot_n,L_minus,L_plus,delta_L,J"
).split(",")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def provenance(seed: int, g: HornGeometry, **extra) -> str:
    parts = [f"seed={seed}", f"r_plus={fmt(g.r_plus)}", f"r_minus={fmt(g.r_minus)}"]
    parts += [f"theta_max={fmt(g.theta_max)}"]
    if not g.is_circular:
        parts += [f"kappa_plus={fmt(g.kappa_perturb_plus)}", f"kappa_minus={fmt(g.kappa_perturb_minus)}"]
    parts += [f"{k}={fmt(v)}" for k, v in extra.items()]
    return "# " + " ".join(parts) + "\n"


def write_rows(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence], comment: str = "") -> None:
    if comment:
        fh.write(comment)
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(x) for x in row) + "\n")


def event_rows(rec: TrajectoryRecord):
    r = rec.geometry.r_mid
    for e in rec.events:
        s_mid = r * e.theta
        sd = max(-1.0, min(1.0, e.L_plus / r))
        yield (
            e.index, e.time, e.wall, e.point.x, e.point.y, e.arc_s, s_mid, e.theta,
            e.v_minus.x, e.v_minus.y, e.v_plus.x, e.v_plus.y, e.v_dot_n,
            e.L_minus, e.L_plus, e.L_plus - e.L_minus, adiabatic_invariant(s_mid, sd),
        )


def _wall_polyline(g: HornGeometry, wall: str, theta_limit: float, n: int = 200) -> list[tuple[float, float]]:
    # walk out until the wall crosses the middle-circle angle theta_limit
    s_end = g.wall_extent(wall)
    lo, hi = 0.0, s_end
    if theta_of(g, boundary_point(g, wall, s_end).point) > theta_limit:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if theta_of(g, boundary_point(g, wall, mid).point) > theta_limit:
                hi = mid
            else:
                lo = mid
        s_end = hi
    return [tuple(boundary_point(g, wall, s_end * k / n).point) for k in range(n + 1)]


def trajectory_svg(rec: TrajectoryRecord, width_px: int = 800) -> str:
    g = rec.geometry
    limit = min(max(rec.stop.theta_max, g.theta_max) * 1.1, math.pi / 2)
    walls = {w: _wall_polyline(g, w, limit) for w in ("outer", "inner")}
    path = [tuple(rec.initial.position)] + [tuple(e.point) for e in rec.events]
    last = rec.final or rec.initial
    if rec.termination.value == "escaped":
        t = _escape_time(g, last.position, last.velocity, rec.stop.theta_max)
        if t is not None:
            p = last.position + last.velocity * t
            path.append((p.x, p.y))
    pts = [p for pl in walls.values() for p in pl] + path
    xmin = min(p[0] for p in pts)
    xmax = max(p[0] for p in pts)
    ymin = min(p[1] for p in pts)
    ymax = max(p[1] for p in pts)
    pad = 0.03 * max(xmax - xmin, ymax - ymin, 1e-9)
    xmin, ymin, xmax, ymax = xmin - pad, ymin - pad, xmax + pad, ymax + pad
    w, h = xmax - xmin, ymax - ymin
    height_px = max(int(round(width_px * h / w)), 1)
    stroke = 0.002 * max(w, h)

    def poly(pl):
        # y is flipped so that the horn opens upward as in the usual pictures
        return " ".join(f"{fmt(x)},{fmt(ymax + ymin - y)}" for x, y in pl)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width_px}" height="{height_px}" '
        f'viewBox="{fmt(xmin)} {fmt(ymin)} {fmt(w)} {fmt(h)}">',
        f'<polyline class="wall outer" fill="none" stroke="#1f4e9c" stroke-width="{fmt(2 * stroke)}" '
        f'points="{poly(walls["outer"])}"/>',
        f'<polyline class="wall inner" fill="none" stroke="#b03a2e" stroke-width="{fmt(2 * stroke)}" '
        f'points="{poly(walls["inner"])}"/>',
        f'<polyline class="trajectory" fill="none" stroke="#222222" stroke-width="{fmt(stroke)}" '
        f'points="{poly(path)}"/>',
    ]
    for e in rec.events:
        out.append(
            f'<circle class="collision" cx="{fmt(e.point.x)}" cy="{fmt(ymax + ymin - e.point.y)}" '
            f'r="{fmt(1.5 * stroke)}" fill="#222222"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
