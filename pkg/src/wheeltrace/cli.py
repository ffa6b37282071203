"""Command-line front end.

All angles are in radians. Exit codes: 0 success, 1 usage error, 2 numerical
or I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import fractal, roughness, sampling
from .export import export_csv, export_svg
from .wheel_model import SystemConfig, WheelError

log = logging.getLogger("wheeltrace")

SUBCOMMANDS = ("trace", "series", "phase", "roughness", "divergence", "entropy", "sweep", "dimension", "surface")
SVG_CAPABLE = {"trace", "series", "phase", "divergence"}
SWEEP_HEADER = ["q", "n", "bins", "horizon", "entropy_bits"]

# Figure-reproduction commands; the README lists the same set.
FIGURE_COMMANDS = {
    "fig2": "trace --q 2.5 --n 20 --t1 62.83185307179586 --steps 200000 --out fig2_trace.csv",
    "fig2-svg": "trace --q 2.5 --n 20 --t1 62.83185307179586 --steps 200000 --format svg --out fig2_trace.svg",
    "fig5": "series --kind radius --q 2.5 --n 20 --t1 62.83185307179586 --steps 200000 --out fig5_radius.csv",
    "fig6": "series --kind speed --q 2.5 --n 20 --t1 62.83185307179586 --steps 200000 --out fig6_speed.csv",
    "fig7": "phase --q 2.5 --n 20 --t1 62.83185307179586 --steps 200000 --out fig7_phase.csv",
    "fig8-thick": "trace --q 2.5 --n 2 --t1 628.3185307179587 --steps 200000 --out fig8_thick.csv",
    "fig8-thin": "trace --q-r 2.5 --q-phi 2.499 --n 2 --t1 628.3185307179587 --steps 200000 --out fig8_thin.csv",
    "fig8-divergence": "divergence --q 2.5 --q-phi-b 2.499 --n 2 --t1 628.3185307179587 --steps 200000 --out fig8_divergence.csv",
    "fig9": "trace --q 5 --n 20 --t1 6.283185307179586 --steps 200000 --no-velocity --out fig9_trace.csv",
    "fig12": "sweep --q-min 1.1 --q-max 5.0 --q-step 0.05 --n 20 --out fig12_entropy.csv",
    "fig13": "surface --q 2.5 --n 20 --n-min 1 --n-max 20 --t1 6.283185307179586 --steps 1000 --out fig13_surface.csv",
    "roughness": "roughness --q 2.5 --n 20 --out roughness_q2.5_n20.csv",
    "dimension": "dimension --q 2.5 --n 20 --t1 62.83185307179586 --steps 1000000 --out dimension_q2.5_n20.csv",
}


class UsageError(Exception):
    """Bad command line; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    out: Path
    fmt: str = "csv"
    system: SystemConfig | None = None
    system_b: SystemConfig | None = None
    t0: float | None = None
    t1: float | None = None
    steps: int | None = None
    kind: str | None = None
    no_velocity: bool = False
    horizon: int | None = None
    bins: int | None = None
    q_min: float | None = None
    q_max: float | None = None
    q_step: float | None = None
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    dt_max: float | None = None
    dt_min: float | None = None
    per_decade: int | None = None
    probes: int | None = None
    scale_count: int | None = None

    def to_argv(self) -> list[str]:
        """Render back to flags; ``parse_args(cfg.to_argv()) == cfg``."""
        argv = [self.subcommand]
        sys_ = self.system
        if sys_ is not None:
            if sys_.q_phi_rational is not None:
                a, b = sys_.q_phi_rational
                argv += ["--q-rational", f"{a}/{b}", "--q-r", repr(sys_.q_r)]
            else:
                argv += ["--q-r", repr(sys_.q_r), "--q-phi", repr(sys_.q_phi)]
            argv += ["--n", str(sys_.n), "--r0", repr(sys_.r0)]
        elif self.n is not None:
            argv += ["--n", str(self.n)]
        if self.system_b is not None:
            argv += ["--q-r-b", repr(self.system_b.q_r), "--q-phi-b", repr(self.system_b.q_phi)]
        for name in ("t0", "t1", "steps", "kind", "horizon", "bins", "q_min", "q_max", "q_step", "n_min",
                     "n_max", "dt_max", "dt_min", "per_decade", "probes", "scale_count"):
            value = getattr(self, name)
            if value is not None:
                flag = "--scales" if name == "scale_count" else "--" + name.replace("_", "-")
                argv += [flag, value if isinstance(value, str) else repr(value)]
        if self.no_velocity:
            argv.append("--no-velocity")
        argv += ["--format", self.fmt, "--out", str(self.out)]
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("/")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a/b with integers a, b, got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wheeltrace", description="Nested-wheel scriber trajectories and their analysis (angles in radians).")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, system=True, window=True):
        if system:
            g = p.add_argument_group("system")
            g.add_argument("--q", type=float, help="common ratio; sets both q_r and q_phi")
            g.add_argument("--q-r", type=float, help="radius ratio r_k / r_{k+1}")
            g.add_argument("--q-phi", type=float, help="angle ratio phi_{k+1} / phi_k")
            g.add_argument("--q-rational", type=_rational, help="exact angle ratio a/b")
            g.add_argument("--r0", type=float, default=1.0, help="largest radius; scales exported lengths")
        p.add_argument("--n", type=int, required=True, help="number of wheels")
        if window:
            p.add_argument("--t0", type=float, default=0.0)
            p.add_argument("--t1", type=float)
            p.add_argument("--steps", type=int)
        p.add_argument("--out", type=Path, required=True)
        p.add_argument("--format", dest="fmt", choices=("csv", "svg"), default="csv")

    p = sub.add_parser("trace", help="x, y, vx, vy along the trajectory")
    common(p)
    p.add_argument("--no-velocity", action="store_true", help="positions only (t,x,y)")
    p = sub.add_parser("series", help="|R| or |dR/dt| against t")
    common(p)
    p.add_argument("--kind", choices=("radius", "speed"), default="radius")
    common(sub.add_parser("phase", help="velocity phase plane (vx, vy)"))
    p = sub.add_parser("roughness", help="velocity increments across step sizes")
    common(p, window=False)
    p.add_argument("--dt-max", type=float)
    p.add_argument("--dt-min", type=float)
    p.add_argument("--per-decade", type=int)
    p.add_argument("--probes", type=int)
    p = sub.add_parser("divergence", help="distance between two systems' traces")
    common(p)
    for flag in ("--q-r-a", "--q-phi-a", "--q-r-b", "--q-phi-b"):
        p.add_argument(flag, type=float)
    p = sub.add_parser("entropy", help="entropy of |R| for one system")
    common(p)
    p.add_argument("--horizon", type=int)
    p.add_argument("--bins", type=int)
    p = sub.add_parser("sweep", help="entropy against q")
    common(p, system=False)
    p.add_argument("--q-min", type=float, required=True)
    p.add_argument("--q-max", type=float, required=True)
    p.add_argument("--q-step", type=float, required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--bins", type=int)
    p = sub.add_parser("dimension", help="box-counting dimension of a trace")
    common(p)
    p.add_argument("--scales", dest="scale_count", type=int)
    p = sub.add_parser("surface", help="|R| over (t, n) for 3-D plotting")
    common(p)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    return parser


def _system(ns, q_r=None, q_phi=None) -> SystemConfig:
    given = [f for f, v in (("--q", ns.q), ("--q-phi", ns.q_phi), ("--q-rational", ns.q_rational)) if v is not None]
    if ns.q is not None and len(given) > 1:
        raise UsageError(f"--q cannot be combined with {given[1]}")
    if ns.q_phi is not None and ns.q_rational is not None:
        raise UsageError("--q-phi cannot be combined with --q-rational")
    if ns.q is not None and ns.q_r is not None:
        raise UsageError("--q cannot be combined with --q-r")
    if ns.q is not None:
        if not ns.q > 1:
            raise UsageError(f"--q: q must exceed 1 (got {ns.q})")
        base_r, base_phi = ns.q, ns.q
    else:
        base_phi = ns.q_phi
        if ns.q_rational is not None:
            a, b = ns.q_rational
            base_phi = a / b if b else None
        base_r = ns.q_r if ns.q_r is not None else base_phi
    q_r = base_r if q_r is None else q_r
    q_phi = base_phi if q_phi is None else q_phi
    if q_r is None or q_phi is None:
        raise UsageError("one of --q, --q-phi or --q-rational is required")
    if ns.n < 1:
        raise UsageError(f"--n: n must be at least 1 (got {ns.n})")
    if not q_r > 1:
        raise UsageError(f"--q-r: q must exceed 1 (got {q_r})")
    if not q_phi > 1:
        raise UsageError(f"--q-phi: q must exceed 1 (got {q_phi})")
    if not ns.r0 > 0:
        raise UsageError(f"--r0: r0 must be positive (got {ns.r0})")
    rational = None
    if ns.q_rational is not None and q_phi == base_phi:
        rational = ns.q_rational
        a, b = rational
        if b < 1 or a <= b or math.gcd(a, b) != 1:
            raise UsageError(f"--q-rational: need coprime a/b with a > b >= 1 (got {a}/{b})")
    try:
        if rational is not None:
            return SystemConfig(n=ns.n, q_r=q_r, r0=ns.r0, q_phi_rational=rational)
        return SystemConfig(n=ns.n, q_r=q_r, q_phi=q_phi, r0=ns.r0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _positive(name, value, minimum=None):
    if value is None:
        return
    if minimum is not None and value < minimum:
        raise UsageError(f"--{name}: must be at least {minimum} (got {value})")
    if minimum is None and not value > 0:
        raise UsageError(f"--{name}: must be positive (got {value})")


def parse_args(argv) -> RunConfig:
    """Parse and validate ``argv`` into a RunConfig; raises UsageError naming the bad flag."""
    ns = _build_parser().parse_args(list(argv))
    cmd = ns.subcommand
    if ns.fmt == "svg" and cmd not in SVG_CAPABLE:
        raise UsageError(f"--format: svg is only available for {', '.join(sorted(SVG_CAPABLE))}")
    kw = dict(subcommand=cmd, out=ns.out, fmt=ns.fmt)

    if cmd == "sweep":
        if not ns.q_min > 1:
            raise UsageError(f"--q-min: q must exceed 1 (got {ns.q_min})")
        if not ns.q_max >= ns.q_min:
            raise UsageError("--q-max: must be at least --q-min")
        _positive("q-step", ns.q_step)
        _positive("n", ns.n, 1)
        horizon = ns.horizon or ent.DEFAULT_HORIZON
        bins = ns.bins or ent.DEFAULT_BINS
        _positive("bins", bins, 2)
        _positive("horizon", horizon, bins)
        t0 = ns.t0
        t1 = ns.t1 if ns.t1 is not None else ent.DEFAULT_WINDOW[1]
        if not t1 > t0:
            raise UsageError("--t1: must exceed --t0")
        return RunConfig(**kw, n=ns.n, q_min=ns.q_min, q_max=ns.q_max, q_step=ns.q_step, horizon=horizon,
                         bins=bins, t0=t0, t1=t1)

    if cmd == "divergence":
        if ns.q is None and ns.q_phi is None and ns.q_rational is None:
            # system A's angle ratio doubles as the shared base
            ns.q_phi = ns.q_phi_a
        system = _system(ns, q_r=ns.q_r_a, q_phi=ns.q_phi_a)
        system_b = _system(ns, q_r=ns.q_r_b, q_phi=ns.q_phi_b)
        kw.update(system=system, system_b=system_b)
    else:
        system = _system(ns)
        kw["system"] = system

    if cmd == "roughness":
        center = roughness.roughness_threshold(system)
        dt_max = ns.dt_max if ns.dt_max is not None else center * 1e3
        dt_min = ns.dt_min if ns.dt_min is not None else center * 1e-3
        _positive("dt-max", dt_max)
        _positive("dt-min", dt_min)
        if not dt_max > dt_min:
            raise UsageError("--dt-max: must exceed --dt-min")
        per_decade = ns.per_decade or 4
        probes = ns.probes or roughness.DEFAULT_PROBES
        _positive("per-decade", per_decade, 1)
        _positive("probes", probes, 1)
        return RunConfig(**kw, dt_max=dt_max, dt_min=dt_min, per_decade=per_decade, probes=probes)

    if cmd == "entropy":
        t0, t1 = ns.t0, ns.t1 if ns.t1 is not None else ent.DEFAULT_WINDOW[1]
        horizon = ns.horizon or ent.DEFAULT_HORIZON
        bins = ns.bins or ent.DEFAULT_BINS
    else:
        t0 = ns.t0
        if ns.t1 is not None:
            t1 = ns.t1
        else:
            t1 = sampling.default_window(system)[1]
            if cmd == "divergence":
                t1 = max(t1, sampling.default_window(kw["system_b"])[1])
        horizon = bins = None
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise UsageError("--t0/--t1: window bounds must be finite")
    if not t1 > t0:
        raise UsageError(f"--t1: must exceed --t0 (got t0={t0}, t1={t1})")
    kw.update(t0=t0, t1=t1)

    if cmd == "entropy":
        _positive("bins", bins, 2)
        _positive("horizon", horizon, bins)
        return RunConfig(**kw, horizon=horizon, bins=bins)

    default_steps = 1000 if cmd == "surface" else sampling.DEFAULT_STEPS
    steps = ns.steps if ns.steps is not None else default_steps
    _positive("steps", steps, 2)
    kw["steps"] = steps

    if cmd == "trace":
        return RunConfig(**kw, no_velocity=ns.no_velocity)
    if cmd == "series":
        return RunConfig(**kw, kind=ns.kind)
    if cmd == "dimension":
        count = ns.scale_count or 12
        _positive("scales", count, 4)
        return RunConfig(**kw, scale_count=count)
    if cmd == "surface":
        n_min = ns.n_min if ns.n_min is not None else 1
        n_max = ns.n_max if ns.n_max is not None else system.n
        if not 1 <= n_min <= n_max <= system.n:
            raise UsageError(f"--n-min/--n-max: need 1 <= n-min <= n-max <= n (got {n_min}, {n_max}, n={system.n})")
        return RunConfig(**kw, n_min=n_min, n_max=n_max)
    return RunConfig(**kw)


def _write_pairs(rc: RunConfig, header, pairs) -> None:
    if rc.fmt == "svg":
        export_svg(np.asarray(pairs, dtype=float), rc.out)
    else:
        export_csv(header, pairs, rc.out)


def run(rc: RunConfig) -> None:
    """Execute a validated RunConfig, writing its output file(s)."""
    cmd, cfg = rc.subcommand, rc.system
    r0 = cfg.r0 if cfg is not None else 1.0

    if cmd == "trace":
        traj = sampling.sample_trajectory(cfg, rc.t0, rc.t1, rc.steps, with_velocity=not rc.no_velocity)
        if rc.fmt == "svg":
            export_svg(traj.points * r0, rc.out)
        elif rc.no_velocity:
            export_csv(["t", "x", "y"], zip(traj.t.tolist(), (traj.x * r0).tolist(), (traj.y * r0).tolist()), rc.out)
        else:
            cols = [traj.t] + [c * r0 for c in (traj.x, traj.y, traj.vx, traj.vy)]
            export_csv(["t", "x", "y", "vx", "vy"], zip(*(c.tolist() for c in cols)), rc.out)
    elif cmd == "series":
        fn = sampling.radius_series if rc.kind == "radius" else sampling.speed_series
        _write_pairs(rc, ["t", "value"], [(t, v * r0) for t, v in fn(cfg, rc.t0, rc.t1, rc.steps)])
    elif cmd == "phase":
        _write_pairs(rc, ["vx", "vy"], [(a * r0, b * r0) for a, b in sampling.velocity_phase(cfg, rc.t0, rc.t1, rc.steps)])
    elif cmd == "divergence":
        curve = roughness.divergence(cfg, rc.system_b, rc.t0, rc.t1, rc.steps)
        _write_pairs(rc, ["t", "distance"], [(t, d * r0) for t, d in curve.rows])
    elif cmd == "roughness":
        decades = math.log10(rc.dt_max / rc.dt_min)
        count = max(2, int(round(decades * rc.per_decade)) + 1)
        scales = np.geomspace(rc.dt_max, rc.dt_min, count).tolist()
        scan = roughness.roughness_scan(cfg, roughness.default_probe_times(rc.probes), scales)
        export_csv(["delta_t", "mean_increment", "max_increment"], scan.rows, rc.out)
        try:
            log.info("crossover %.4g (threshold %.4g)", roughness.crossover_scale(scan), roughness.roughness_threshold(cfg))
        except WheelError as exc:
            log.info("no crossover: %s", exc)
    elif cmd == "entropy":
        hist = ent.radius_histogram(cfg, rc.horizon, rc.bins, (rc.t0, rc.t1))
        row = (cfg.q_phi, cfg.n, rc.bins, rc.horizon, ent.entropy_bits(hist))
        export_csv(SWEEP_HEADER, [row], rc.out)
    elif cmd == "sweep":
        estimates, argmax = ent.entropy_sweep(rc.q_min, rc.q_max, rc.q_step, rc.n, rc.horizon, rc.bins, (rc.t0, rc.t1))
        export_csv(SWEEP_HEADER, [(e.q, e.n, e.bins, e.horizon, e.entropy_bits) for e in estimates], rc.out)
        for e in estimates:
            if e.is_gap:
                log.warning("q=%s skipped: %s", e.q, e.error)
        log.info("entropy maximal at q=%s", argmax)
    elif cmd == "dimension":
        traj = sampling.sample_trajectory(cfg, rc.t0, rc.t1, rc.steps, with_velocity=False)
        pts = traj.points * r0
        scales = fractal.default_box_scales(pts, rc.scale_count)
        est = fractal.box_dimension(pts, scales)
        export_csv(["scale", "count"], zip(est.scales, est.counts), rc.out)
        export_csv(["dimension", "fit_r2"], [(est.dimension, est.fit_r2)], Path(rc.out).parent / "dimension_summary.csv")
    elif cmd == "surface":
        grid = sampling.surface_grid(cfg, rc.t0, rc.t1, rc.steps, rc.n_min, rc.n_max)
        header = ["n\\t"] + [repr(float(t)) for t in grid.t_values]
        rows = [[n] + (grid.magnitudes[:, j] * r0).tolist() for j, n in enumerate(grid.n_values)]
        export_csv(header, rows, rc.out)
    else:  # pragma: no cover
        raise UsageError(f"unknown subcommand {cmd}")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    argv = sys.argv[1:] if argv is None else argv
    try:
        rc = parse_args(argv)
    except UsageError as exc:
        print(f"wheeltrace: usage error: {exc}", file=sys.stderr)
        return 1
    try:
        run(rc)
    except (ValueError, OSError) as exc:
        print(f"wheeltrace: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
