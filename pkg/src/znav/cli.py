"""Command-line front end.

Subcommands:

    geodesic    one path: CSV, optional figure, summary line
    family      a fan of headings: per-member CSVs, combined figure,
                transpolar/circumpolar counts
    compare     h-, alpha- and F-geodesics from one heading: overlay
                figure, difference CSV, wind-drift residuals
    indicatrix  unit-time destination curves at a point
    report      control channel, speed-vs-heading curve, departure
                summary (course, drift, speed)

Angles are radians by default; pi-fraction literals like pi/3 are
accepted anywhere, --deg switches plain numbers to degrees.  A flat
key=value config file can be given with --config; explicit flags
override it.  Exit codes: 0 ok, 2 validation, 3 numeric failure, 4 IO.
"""
import argparse
import math
import os
import re
import sys
from dataclasses import dataclass, fields

import numpy as np

from znav import control
from znav.control import control_channel, wrap_signed
from znav.errors import EmptyData, NavigationError, NotMild
from znav.export import (
    PlotSpec,
    SeriesStyle,
    unwrap_angles,
    write_csv,
    write_svg,
)
from znav.integrate import (
    IntegratorConfig,
    Trajectory,
    classify_path,
    integrate,
    integrate_family,
)
from znav.randers import F_value, RandersData, alpha_term, indicatrix
from znav.spheroid import (
    NavState,
    POLE_GUARD,
    Spheroid,
    SurfacePoint,
    embed,
    h_norm,
)
from znav.spray import make_rhs
from znav.wind import WindField, rotation_wind


class ValidationError(Exception):
    """Bad flag or config value; reported before any computation."""


_PI_PATTERN = re.compile(r"([+-]?\d*\.?\d*)\s*pi\s*(?:/\s*(\d+\.?\d*))?")


def parse_angle(text: str, degrees: bool = False) -> float:
    """Parse an angle: plain number (radians, or degrees with --deg) or pi-fraction."""
    t = text.strip().lower()
    m = _PI_PATTERN.fullmatch(t)
    if m:
        num, den = m.group(1), m.group(2)
        if num in ("", "+"):
            factor = 1.0
        elif num == "-":
            factor = -1.0
        else:
            factor = float(num)
        return factor * math.pi / (float(den) if den else 1.0)
    try:
        value = float(t)
    except ValueError as exc:
        raise ValidationError(f"cannot parse angle {text!r}") from exc
    return math.radians(value) if degrees else value


def parse_wind(text: str) -> WindField | None:
    t = text.strip().lower()
    if t in ("none", "0", "zero"):
        return None
    if t.startswith("rotation:"):
        try:
            c = float(t.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad rotation rate in {text!r}") from exc
        try:
            return rotation_wind(c)
        except NotMild as exc:
            raise ValidationError(str(exc)) from exc
    raise ValidationError(f"wind spec must be 'rotation:C' or 'none', got {text!r}")


@dataclass
class RunConfig:
    """Validated inputs for one command invocation."""

    a: float = 0.75
    wind: str = "none"
    start: str = "0,pi/2"
    kind: str = "randers"
    heading: str | None = None
    heading_start: str | None = None
    heading_step: str | None = None
    heading_count: int | None = None
    n: int = 360
    multipliers: str = "1,2,3,4"
    t_end: float = 3.0
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = math.inf
    sample_dt: float = 0.01
    segments: str | None = None
    plot: str = "path3d"
    view: str = "z"
    deg: bool = False
    compass: bool = False
    csv: str | None = None
    svg: str | None = None
    speed_svg: str | None = None


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}
_FLOAT_KEYS = {"a", "t_end", "rel_tol", "abs_tol", "max_step", "sample_dt"}
_INT_KEYS = {"heading_count", "n"}
_BOOL_KEYS = {"deg", "compass"}


def load_config_file(path: str) -> dict[str, str]:
    """Read a flat key=value file; '#' starts a comment, unknown keys are rejected."""
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValidationError(f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                key = key.strip().replace("-", "_")
                if key not in _CONFIG_KEYS:
                    raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value.strip()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override")
    p.add_argument("--a", type=float, help="shape parameter of the spheroid (1,1,a)")
    p.add_argument("--wind", help="wind spec: rotation:C or none")
    p.add_argument("--start", help="start point as phi,theta")
    p.add_argument("--kind", choices=["h", "alpha", "randers"], help="metric kind")
    p.add_argument("--t-end", dest="t_end", type=float, help="integration horizon")
    p.add_argument("--rel-tol", dest="rel_tol", type=float, help="relative tolerance")
    p.add_argument("--abs-tol", dest="abs_tol", type=float, help="absolute tolerance")
    p.add_argument("--max-step", dest="max_step", type=float, help="step size cap")
    p.add_argument("--sample-dt", dest="sample_dt", type=float, help="output grid spacing")
    p.add_argument("--deg", action="store_true", default=None,
                   help="plain-number angles are degrees")
    p.add_argument("--compass", action="store_true", default=None,
                   help="print azimuths clockwise from north")
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--svg", help="SVG output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="znav",
        description="Time-optimal navigation on spheroids under mild stationary winds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geodesic", help="integrate one geodesic")
    _add_common(p)
    p.add_argument("--heading", help="initial heading angle")
    p.add_argument("--plot", choices=["path3d", "xy", "polar"],
                   help="figure kind for --svg")
    p.add_argument("--view", choices=["x", "y", "z"], help="projection axis")
    p.add_argument("--segments", help="time boundaries for color segmentation, e.g. 1,2,3")

    p = sub.add_parser("family", help="integrate a fan of headings")
    _add_common(p)
    p.add_argument("--heading-start", dest="heading_start", help="first heading")
    p.add_argument("--heading-step", dest="heading_step", help="heading increment")
    p.add_argument("--heading-count", dest="heading_count", type=int,
                   help="number of members")
    p.add_argument("--view", choices=["x", "y", "z"], help="projection axis")
    p.add_argument("--segments", help="time boundaries for color segmentation")

    p = sub.add_parser("compare", help="h vs alpha vs randers from one heading")
    _add_common(p)
    p.add_argument("--heading", help="initial heading angle")
    p.add_argument("--view", choices=["x", "y", "z"], help="projection axis")

    p = sub.add_parser("indicatrix", help="unit-time destination curves at a point")
    _add_common(p)
    p.add_argument("--n", type=int, help="samples per curve (>= 3)")
    p.add_argument("--multipliers", help="curve time multipliers, e.g. 1,2,3,4")

    p = sub.add_parser("report", help="control channel and departure summary")
    _add_common(p)
    p.add_argument("--heading", help="initial heading angle")
    p.add_argument("--speed-svg", dest="speed_svg",
                   help="SVG path for the speed-vs-heading curve")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            try:
                if key in _FLOAT_KEYS:
                    setattr(cfg, key, float(value))
                elif key in _INT_KEYS:
                    setattr(cfg, key, int(value))
                elif key in _BOOL_KEYS:
                    setattr(cfg, key, value.lower() in ("1", "true", "yes", "on"))
                else:
                    setattr(cfg, key, value)
            except ValueError as exc:
                raise ValidationError(f"bad value for {key}: {value!r}") from exc
    for f in fields(RunConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            setattr(cfg, f.name, val)
    return cfg


@dataclass
class Problem:
    """Validated and parsed navigation problem."""

    sph: Spheroid
    wind: WindField | None
    start: SurfacePoint
    kind: str
    icfg: IntegratorConfig
    cfg: RunConfig


def resolve_problem(cfg: RunConfig) -> Problem:
    if cfg.a <= 0:
        raise ValidationError(f"shape parameter must be positive, got {cfg.a}")
    wind = parse_wind(cfg.wind)
    parts = cfg.start.split(",")
    if len(parts) != 2:
        raise ValidationError(f"start must be 'phi,theta', got {cfg.start!r}")
    start = SurfacePoint(
        parse_angle(parts[0], cfg.deg), parse_angle(parts[1], cfg.deg)
    )
    if not (POLE_GUARD < start.theta < math.pi - POLE_GUARD):
        raise ValidationError(
            f"start colatitude {start.theta} inside the polar guard band"
        )
    if cfg.kind not in ("h", "alpha", "randers"):
        raise ValidationError(f"kind must be h, alpha or randers, got {cfg.kind!r}")
    if wind is not None:
        lam = 1.0 - sum(
            w * w * h
            for w, h in zip(
                wind.at(start),
                (math.sin(start.theta) ** 2,
                 math.cos(start.theta) ** 2 + cfg.a**2 * math.sin(start.theta) ** 2),
            )
        )
        if lam <= 0:
            raise ValidationError("wind not mild at the start point")
    try:
        icfg = IntegratorConfig(
            t_end=cfg.t_end,
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            max_step=cfg.max_step,
            sample_dt=cfg.sample_dt,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return Problem(Spheroid(cfg.a), wind, start, cfg.kind, icfg, cfg)


def _initial_state(prob: Problem, heading: float) -> NavState:
    if prob.kind == "h" or prob.wind is None:
        return control.initial_state_riemannian(prob.sph, prob.start, heading)
    if prob.kind == "alpha":
        return control.initial_state_alpha(prob.sph, prob.wind, prob.start, heading)
    return control.initial_state_randers(prob.sph, prob.wind, prob.start, heading)


def _conservation_drift(prob: Problem, traj: Trajectory) -> float:
    """Largest deviation of the conserved speed (h-, alpha- or F-norm) from 1."""
    rd = RandersData(prob.sph, prob.wind) if prob.wind is not None else None
    worst = 0.0
    for _, state in traj.samples:
        if prob.kind == "randers" and rd is not None:
            value = F_value(rd, state.point, state.vel)
        elif prob.kind == "alpha" and rd is not None:
            value = alpha_term(rd, state.point, state.vel)
        else:
            value = h_norm(prob.sph, state.point, state.vel)
        worst = max(worst, abs(value - 1.0))
    return worst


def _path3d_array(prob: Problem, traj: Trajectory) -> np.ndarray:
    rows = []
    for t, state in traj.samples:
        x, y, z = embed(prob.sph, state.point)
        rows.append((t, x, y, z))
    return np.asarray(rows)


def _parse_segments(text: str | None) -> tuple[float, ...] | None:
    if not text:
        return None
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad segment list {text!r}") from exc
    if list(vals) != sorted(set(vals)):
        raise ValidationError("segment boundaries must be strictly increasing")
    return vals


def _heading_deg(cfg: RunConfig, angle: float) -> float:
    """Angle for display: degrees, optionally converted to a compass azimuth."""
    deg = math.degrees(angle)
    return (90.0 - deg) % 360.0 if cfg.compass else deg


_PLOT_KIND = {"path3d": "path3d_projection", "xy": "xy_projection", "polar": "polar"}


def cmd_geodesic(prob: Problem) -> int:
    cfg = prob.cfg
    if cfg.heading is None:
        raise ValidationError("geodesic needs --heading")
    heading = parse_angle(cfg.heading, cfg.deg)
    segments = _parse_segments(cfg.segments)
    state0 = _initial_state(prob, heading)
    traj = integrate(make_rhs(prob.kind, prob.sph, prob.wind), state0, prob.icfg,
                     kind=prob.kind)
    channel = control_channel(prob.sph, prob.wind, traj)
    if cfg.csv:
        write_csv(prob.sph, traj, channel, cfg.csv)
    if cfg.svg:
        kind = _PLOT_KIND[cfg.plot]
        if kind == "path3d_projection":
            data = [_path3d_array(prob, traj)]
        elif kind == "xy_projection":
            data = [_path3d_array(prob, traj)[:, :3]]
        else:
            data = [np.asarray([(t, s.point.phi, s.point.theta)
                                for t, s in traj.samples])]
        spec = PlotSpec(kind=kind,
                        series=(SeriesStyle(label=prob.kind, color="#d62728"),),
                        segments=segments, view_axis=cfg.view)
        write_svg(spec, data, cfg.svg)
    final = traj.final_state()
    print(
        f"termination={traj.termination} classification={classify_path(traj)} "
        f"t_last={traj.samples[-1][0]:.6g} "
        f"final_phi={final.point.phi:.9g} final_theta={final.point.theta:.9g} "
        f"final_phi_dot={final.vel.u:.9g} final_theta_dot={final.vel.v:.9g} "
        f"conservation_drift={_conservation_drift(prob, traj):.3e}"
    )
    return 0


def _member_csv_path(base: str, index: int) -> str:
    stem, ext = os.path.splitext(base)
    return f"{stem}_{index:03d}{ext}"


def cmd_family(prob: Problem) -> int:
    cfg = prob.cfg
    if cfg.heading_start is None or cfg.heading_step is None or not cfg.heading_count:
        raise ValidationError(
            "family needs --heading-start, --heading-step and --heading-count"
        )
    if cfg.heading_count < 1:
        raise ValidationError("heading count must be >= 1")
    h0 = parse_angle(cfg.heading_start, cfg.deg)
    dh = parse_angle(cfg.heading_step, cfg.deg)
    headings = [h0 + k * dh for k in range(cfg.heading_count)]
    segments = _parse_segments(cfg.segments)

    members = integrate_family(prob.sph, prob.wind, prob.start, headings,
                               prob.kind, prob.icfg)
    counts = {"circumpolar": 0, "transpolar": 0, "failed": 0}
    data, styles = [], []
    for i, member in enumerate(members):
        if member.trajectory is None:
            counts["failed"] += 1
            print(f"member={i:02d} heading={member.heading:.6g} "
                  f"error={member.error}")
            continue
        label = classify_path(member.trajectory)
        counts[label] += 1
        print(f"member={i:02d} heading={member.heading:.6g} "
              f"termination={member.trajectory.termination} classification={label}")
        if cfg.csv:
            channel = control_channel(prob.sph, prob.wind, member.trajectory)
            write_csv(prob.sph, member.trajectory, channel,
                      _member_csv_path(cfg.csv, i))
        data.append(_path3d_array(prob, member.trajectory))
        styles.append(SeriesStyle(
            label=f"heading={member.heading:.4g}",
            color="#1f77b4" if label == "transpolar" else "#d62728",
        ))
    print(f"counts: circumpolar={counts['circumpolar']} "
          f"transpolar={counts['transpolar']} failed={counts['failed']}")
    if cfg.svg and data:
        spec = PlotSpec(kind="path3d_projection", series=tuple(styles),
                        segments=segments, view_axis=cfg.view)
        write_svg(spec, data, cfg.svg)
    return 0 if counts["circumpolar"] + counts["transpolar"] >= 1 else 3


def cmd_compare(prob: Problem) -> int:
    cfg = prob.cfg
    if cfg.heading is None:
        raise ValidationError("compare needs --heading")
    heading = parse_angle(cfg.heading, cfg.deg)

    trajs: dict[str, Trajectory] = {}
    for kind in ("h", "alpha", "randers"):
        sub = Problem(prob.sph, prob.wind, prob.start, kind, prob.icfg, cfg)
        state0 = _initial_state(sub, heading)
        trajs[kind] = integrate(make_rhs(kind, prob.sph, prob.wind), state0,
                                prob.icfg, kind=kind)

    n = min(len(t.samples) for t in trajs.values())
    t_grid = [t for t, _ in trajs["h"].samples[:n]]
    cols: dict[str, list[float]] = {"t": t_grid}
    for name in ("phi", "theta", "phi_dot", "theta_dot"):
        f_vals = trajs["randers"].channel(name)[:n]
        h_vals = trajs["h"].channel(name)[:n]
        cols[f"d_{name}"] = [fv - hv for fv, hv in zip(f_vals, h_vals)]
    ch_f = control_channel(prob.sph, prob.wind, trajs["randers"])
    ch_h = control_channel(prob.sph, None, trajs["h"])
    m = min(len(ch_f), len(ch_h), n)
    for name in ("heading", "course", "drift", "speed"):
        cols[f"d_{name}"] = [
            (getattr(rf, name) - getattr(rh, name))
            if name == "speed"
            else wrap_signed(getattr(rf, name) - getattr(rh, name))
            for rf, rh in zip(ch_f[:m], ch_h[:m])
        ]

    if cfg.csv:
        names = list(cols)
        lines = [",".join(names)]
        for i in range(n):
            lines.append(",".join(
                repr(cols[name][i]) if i < len(cols[name]) else ""
                for name in names
            ))
        with open(cfg.csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    if cfg.svg:
        palette = {"h": "#1f77b4", "alpha": "#2ca02c", "randers": "#d62728"}
        spec = PlotSpec(
            kind="path3d_projection",
            series=tuple(SeriesStyle(label=k, color=palette[k]) for k in trajs),
            view_axis=cfg.view,
        )
        write_svg(spec, [_path3d_array(prob, t) for t in trajs.values()], cfg.svg)

    max_dphi = max(abs(v) for v in cols["d_phi"])
    max_dtheta = max(abs(v) for v in cols["d_theta"])
    print(f"max_dphi={max_dphi:.3e} max_dtheta={max_dtheta:.3e}")
    if prob.wind is not None and prob.wind.kind == "rotation":
        c = prob.wind.c
        res_phi = max(
            abs(pf - (ph - c * t))
            for t, pf, ph in zip(t_grid, trajs["randers"].channel("phi")[:n],
                                 trajs["h"].channel("phi")[:n])
        )
        print(f"killing_residual_phi={res_phi:.3e} "
              f"killing_residual_theta={max_dtheta:.3e}")
    return 0


def cmd_indicatrix(prob: Problem) -> int:
    cfg = prob.cfg
    if cfg.n < 3:
        raise ValidationError(f"--n must be >= 3, got {cfg.n}")
    try:
        mults = tuple(float(x) for x in cfg.multipliers.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad multipliers {cfg.multipliers!r}") from exc
    if not mults or any(m <= 0 for m in mults):
        raise ValidationError("multipliers must be positive")
    wind = prob.wind if prob.wind is not None else rotation_wind(0.0)
    rd = RandersData(prob.sph, wind)
    vecs = indicatrix(rd, prob.start, cfg.n)
    residual = max(abs(F_value(rd, prob.start, y) - 1.0) for y in vecs)

    if cfg.csv:
        lines = ["mult,k,heading,u,v,F"]
        for mult in mults:
            for k, y in enumerate(vecs):
                hd = 2.0 * math.pi * k / cfg.n
                f_val = F_value(rd, prob.start, y)
                lines.append(
                    f"{repr(mult)},{k},{repr(hd)},{repr(mult * y.u)},"
                    f"{repr(mult * y.v)},{repr(f_val)}"
                )
        with open(cfg.csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    if cfg.svg:
        data = []
        for mult in mults:
            pts = [(mult * y.u, mult * y.v) for y in vecs]
            pts.append(pts[0])  # close the curve
            data.append(np.asarray(pts))
        palette = ("#1f77b4", "#d62728", "#9467bd", "#e377c2")
        spec = PlotSpec(
            kind="indicatrix",
            series=tuple(
                SeriesStyle(label=f"t={m:g}", color=palette[i % len(palette)])
                for i, m in enumerate(mults)
            ),
        )
        write_svg(spec, data, cfg.svg)
    print(f"indicatrix_residual={residual:.3e} n={cfg.n} "
          f"multipliers={','.join(f'{m:g}' for m in mults)}")
    return 0


def cmd_report(prob: Problem) -> int:
    cfg = prob.cfg
    if cfg.heading is None:
        raise ValidationError("report needs --heading")
    heading = parse_angle(cfg.heading, cfg.deg)
    state0 = _initial_state(prob, heading)
    traj = integrate(make_rhs(prob.kind, prob.sph, prob.wind), state0, prob.icfg,
                     kind=prob.kind)
    channel = control_channel(prob.sph, prob.wind, traj)
    if not channel:
        raise EmptyData("control channel is empty; no defined samples")
    if cfg.csv:
        write_csv(prob.sph, traj, channel, cfg.csv)
    if cfg.svg:
        t = np.asarray([r.t for r in channel])
        curves = {
            "heading": unwrap_angles([r.heading for r in channel]),
            "course": unwrap_angles([r.course for r in channel]),
            "drift": np.asarray([r.drift for r in channel]),
        }
        spec = PlotSpec(
            kind="channel_vs_time",
            series=(
                SeriesStyle(label="heading", color="#000000"),
                SeriesStyle(label="course", color="#d62728"),
                SeriesStyle(label="drift", color="#1f77b4", dash="6,3"),
            ),
        )
        data = [np.column_stack([t, curves[k]]) for k in ("heading", "course", "drift")]
        write_svg(spec, data, cfg.svg)
    if cfg.speed_svg:
        wind = prob.wind if prob.wind is not None else rotation_wind(0.0)
        hds = np.linspace(0.0, 2.0 * math.pi, 361)
        speeds = [
            control.initial_speed_vs_heading(prob.sph, wind, prob.start, float(hd))
            for hd in hds
        ]
        spec = PlotSpec(
            kind="speed_vs_heading",
            series=(SeriesStyle(label="initial speed", color="#000000"),),
        )
        write_svg(spec, [np.column_stack([hds, speeds])], cfg.speed_svg)

    rec0 = channel[0]
    conv = " (compass azimuth)" if cfg.compass else ""
    drift0 = -rec0.drift if cfg.compass else rec0.drift
    print(f"heading_0 = {_heading_deg(cfg, rec0.heading):.4g} deg{conv}")
    print(f"course_0 = {_heading_deg(cfg, rec0.course):.4g} deg{conv}")
    print(f"drift_0 = {math.degrees(drift0):.4g} deg")
    print(f"speed_0 = {rec0.speed:.4g}")
    return 0


_COMMANDS = {
    "geodesic": cmd_geodesic,
    "family": cmd_family,
    "compare": cmd_compare,
    "indicatrix": cmd_indicatrix,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        prob = resolve_problem(cfg)
        return _COMMANDS[args.command](prob)
    except ValidationError as exc:
        print(f"error[validation]: {exc}", file=sys.stderr)
        return 2
    except NavigationError as exc:
        # module preconditions are vetted in resolve_problem, so any
        # engine error past that point is a runtime/numeric failure
        print(f"error[numeric]: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
