"""Command-line front end.

Every subcommand writes one artifact to ``--out`` or stdout. Exit status is
0 on success, 2 for invalid input and 3 when the physics blocks the
construction; other package errors give 1.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from .contact import lift, propagate_front, tangency_certificate
from .curves import PlanarCurve, circle_curve, line_curve, parabola_curve, read_csv, to_csv_string
from .cycloid import Cycloid, FitTarget, fit
from .descent import DescentParams, descent_table, descent_table_csv
from .errors import CausticError, CycloidLabError, DomainError, PhysicalRegimeError
from .layered import convergence_csv, convergence_report, loglog_slope, shoot
from .optics import (
    Interface,
    fermat_certificate,
    huygens_reflection,
    huygens_refraction,
    reflect,
    refract,
    wavelet_tangency_mismatch,
)
from .svg import Figure

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DOMAIN = 2
EXIT_PHYSICAL = 3

DEFAULT_BERNOULLI_N = (100, 200, 400, 800, 1600)


@dataclass(frozen=True)
class RunConfig:
    g: float = 9.81
    format: str | None = None
    out: str | None = None
    samples: int = 201
    seed: int = 0

    def __post_init__(self):
        if not self.g > 0:
            raise DomainError("g must be positive")
        if self.samples < 2:
            raise DomainError("sample count must be at least 2")


def fmt(v: float) -> str:
    """Human-readable number: 9 significant digits."""
    return f"{v:.9g}"


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _format(cfg: RunConfig, default: str, allowed: Sequence[str]) -> str:
    f = cfg.format or default
    if f not in allowed:
        raise DomainError(f"format {f!r} is not available here; choose from {', '.join(allowed)}")
    return f


# --- fit -------------------------------------------------------------------

def cmd_fit(args, cfg: RunConfig) -> str:
    a, t_b = fit(FitTarget(args.b1, args.b2))
    f = _format(cfg, "text", ("text", "json", "csv", "svg"))
    if f == "text":
        return f"a = {fmt(a)}\nt_B = {fmt(t_b)}\n"
    if f == "json":
        return _dumps({"a": a, "t_B": t_b})
    curve = Cycloid(a, y_down=True).curve(0.0, t_b, cfg.samples)
    if f == "csv":
        return to_csv_string(curve)
    fig = Figure(y_up=False)
    fig.polyline(curve.points, stroke="black", label="cycloid")
    fig.marker((0.0, 0.0), "blue")
    fig.marker((args.b1, args.b2), "red")
    return fig.to_string()


# --- tautochrone -----------------------------------------------------------

def cmd_tautochrone(args, cfg: RunConfig) -> str:
    if not args.starts:
        raise DomainError("at least one start parameter is required")
    for t0 in args.starts:
        if not 0.0 <= t0 < math.pi:
            raise DomainError(f"start parameter {t0!r} must lie in [0, pi): the bottom is at pi")
    cyc = Cycloid(args.a, y_down=True)
    slide = cyc.curve(0.0, math.pi, cfg.samples)
    rows = descent_table(slide, args.starts, DescentParams(cfg.g))
    f = _format(cfg, "csv", ("csv", "json", "text", "svg"))
    if f == "csv":
        return descent_table_csv(rows)
    if f == "json":
        return _dumps([{"start_param": s, "descent_time": t} for s, t in rows])
    if f == "text":
        return "".join(f"{fmt(s)} {fmt(t)}\n" for s, t in rows)
    fig = Figure(y_up=False)
    fig.polyline(slide.points, label="cycloid")
    for s, _ in rows:
        fig.marker(cyc.point(s), "red")
    fig.marker(cyc.point(math.pi), "blue")
    return fig.to_string()


# --- bernoulli -------------------------------------------------------------

def cmd_bernoulli(args, cfg: RunConfig) -> str:
    target = FitTarget(args.b1, args.b2)
    ns = args.N or list(DEFAULT_BERNOULLI_N)
    if any(n < 1 for n in ns):
        raise DomainError("layer counts must be at least 1")
    report = convergence_report(target, ns, cfg.g)
    f = _format(cfg, "csv", ("csv", "json", "svg"))
    if f == "csv":
        return convergence_csv(report)
    a, t_b = fit(target)
    c, path = shoot(target, max(ns), cfg.g)
    if f == "json":
        out = {
            "a": a,
            "t_B": t_b,
            "snell_constant": c,
            "limit_radius": c * c / (4.0 * cfg.g),
            "report": [{"N": n, "sup_deviation": d} for n, d in report],
        }
        if len(report) >= 2:
            out["loglog_slope"] = loglog_slope(report)
        return _dumps(out)
    fig = Figure(y_up=False)
    fig.polyline(Cycloid(a, y_down=True).curve(0.0, t_b, cfg.samples).points, stroke="black", label="cycloid")
    fig.polyline(path.vertices, stroke="red", width=1.0, label=f"ray N={max(ns)}")
    fig.marker((args.b1, args.b2), "blue")
    return fig.to_string()


# --- wavefront -------------------------------------------------------------

def _cusp_curve(samples: int) -> PlanarCurve:
    """Semicubical parabola ``(s^2, s^3)``; the sample grid always contains the cusp."""
    half = max(samples // 2, 1)
    s = np.concatenate([np.linspace(-1.0, 0.0, half + 1)[:-1], np.linspace(0.0, 1.0, half + 1)])

    def position(s):
        s = np.asarray(s, dtype=float)
        return np.stack([s * s, s**3], axis=-1)

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        return np.stack([2 * s, 3 * s * s], axis=-1), np.stack([np.full_like(s, 2.0), 6 * s], axis=-1)

    return PlanarCurve.from_functions(s, position, derivatives)


def front_from_arg(name: str, samples: int) -> PlanarCurve:
    """``line``, ``circle`` (unit, clockwise so it grows outward), ``parabola``, ``cusp`` or a CSV path."""
    if name == "line":
        return line_curve((-1.0, 0.0), (1.0, 0.0), samples)
    if name == "circle":
        return circle_curve(1.0, samples=samples, clockwise=True)
    if name == "parabola":
        return parabola_curve(1.0, samples)
    if name == "cusp":
        return _cusp_curve(samples)
    try:
        return read_csv(name)
    except OSError as exc:
        raise DomainError(f"unknown front {name!r}: not a built-in name and not a readable file") from exc


def cmd_wavefront(args, cfg: RunConfig) -> str:
    front = front_from_arg(args.front, cfg.samples)
    lf = lift(front)
    times = args.t or [0.5]
    rng = np.random.default_rng(cfg.seed)
    s_cert = np.sort(rng.uniform(front.start, front.end, args.certificates))

    certs = []
    for t in times:
        for s0 in s_cert:
            try:
                certs.append(tangency_certificate(lf, float(s0), t).to_dict())
            except CausticError:
                if args.strict:
                    raise
                certs.append({"s0": float(s0), "t": t, "angle_error": None, "point_error": None,
                              "certified": False, "caustic": True})

    f = _format(cfg, "svg", ("svg", "csv", "json"))
    if f == "json":
        return _dumps({"front": args.front, "certificates": certs})
    fronts = [(t, propagate_front(lf, t)) for t in times]
    if f == "csv":
        lines = ["t,param,x,y"]
        for t, pf in [(0.0, front)] + fronts:
            lines += [f"{float(t)!r},{float(s)!r},{float(x)!r},{float(y)!r}" for s, (x, y) in zip(pf.params, pf.points)]
        return "\n".join(lines) + "\n"
    fig = Figure(y_up=True)
    fig.polyline(front.points, stroke="black", label="front")
    palette = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd")
    for k, (t, pf) in enumerate(fronts):
        fig.polyline(pf.points, stroke=palette[k % len(palette)], label=f"t={fmt(t)}")
        for s0 in s_cert:
            fig.circle(front.evaluate(float(s0)), t, stroke="#999999", width=0.5)
            fig.marker(pf.evaluate(float(s0)), "red", size=2.0)
    return fig.to_string()


# --- optics ----------------------------------------------------------------

def cmd_optics(args, cfg: RunConfig) -> str:
    _format(cfg, "json", ("json",))
    op = args.optics_cmd
    if op == "reflect":
        A, B = np.array([args.ax, args.ay]), np.array([args.bx, args.by])
        P = reflect(A, B, args.mirror_y)
        b_image = np.array([B[0], 2 * args.mirror_y - B[1]])
        report = {
            "P": [float(v) for v in P],
            "path_length": float(np.linalg.norm(P - A) + np.linalg.norm(B - P)),
            "unfolded_length": float(np.linalg.norm(b_image - A)),
        }
    elif op == "refract":
        alpha2 = refract(math.radians(args.alpha), args.v1, args.v2)
        report = {"alpha1_deg": args.alpha, "alpha2_deg": math.degrees(alpha2), "alpha2_rad": alpha2}
    elif op == "fermat":
        cert = fermat_certificate((args.ax, args.ay), (args.bx, args.by),
                                  Interface(args.interface_y, args.v1, args.v2), args.count)
        report = cert.to_dict()
    elif op == "huygens":
        iface = Interface(0.0, args.v1, args.v2)
        alpha = math.radians(args.alpha)
        angle = huygens_refraction(alpha, iface, args.dt)
        report = {
            "alpha1_deg": args.alpha,
            "huygens_deg": math.degrees(angle),
            "snell_deg": math.degrees(refract(alpha, args.v1, args.v2)),
            "wavelet_mismatch": wavelet_tangency_mismatch(alpha, iface, args.dt),
        }
    else:  # huygens-reflect
        angle = huygens_reflection(math.radians(args.alpha), args.v, args.dt)
        report = {"alpha1_deg": args.alpha, "reflected_deg": math.degrees(angle)}
    return _dumps(report)


# --- parser ----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--g", type=float, default=9.81, help="gravitational acceleration in m/s^2")
    p.add_argument("--format", choices=("svg", "csv", "json", "text"), default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--samples", type=int, default=201, help="curve sample count")
    p.add_argument("--seed", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cycloidlab", description="Cycloid, descent, ray and wavefront constructions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="cycloid through the origin and B=(b1, b2)")
    p.add_argument("b1", type=float)
    p.add_argument("b2", type=float)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tautochrone", parents=[common], help="descent times to the bottom from several starts")
    p.add_argument("--a", type=float, default=1.0, help="rolling-circle radius")
    p.add_argument("starts", type=float, nargs="*", help="start parameters in radians, each in [0, pi)")
    p.set_defaults(func=cmd_tautochrone)

    p = sub.add_parser("bernoulli", parents=[common], help="layered Snell ray versus the fitted cycloid")
    p.add_argument("b1", type=float)
    p.add_argument("b2", type=float)
    p.add_argument("N", type=int, nargs="*", help=f"layer counts (default {' '.join(map(str, DEFAULT_BERNOULLI_N))})")
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("wavefront", parents=[common], help="propagate a front and certify Huygens tangency")
    p.add_argument("front", help="line, circle, parabola, cusp, or a param,x,y CSV file")
    p.add_argument("t", type=float, nargs="*", help="propagation times (default 0.5)")
    p.add_argument("--certificates", type=int, default=9, help="sampled points per time")
    p.add_argument("--strict", action="store_true", help="exit 3 when a sampled point reaches its caustic")
    p.set_defaults(func=cmd_wavefront)

    p = sub.add_parser("optics", help="reflection and refraction at a horizontal interface")
    osub = p.add_subparsers(dest="optics_cmd", required=True)
    q = osub.add_parser("reflect", parents=[common])
    for name in ("ax", "ay", "bx", "by"):
        q.add_argument(name, type=float)
    q.add_argument("--mirror-y", type=float, default=0.0)
    q = osub.add_parser("refract", parents=[common])
    q.add_argument("alpha", type=float, help="incidence angle in degrees")
    q.add_argument("v1", type=float)
    q.add_argument("v2", type=float)
    q = osub.add_parser("fermat", parents=[common])
    for name in ("ax", "ay", "bx", "by", "v1", "v2"):
        q.add_argument(name, type=float)
    q.add_argument("--interface-y", type=float, default=0.0)
    q.add_argument("--count", type=int, default=1000, help="number of crossing points Q to test")
    q = osub.add_parser("huygens", parents=[common])
    q.add_argument("alpha", type=float, help="front inclination in degrees")
    q.add_argument("v1", type=float)
    q.add_argument("v2", type=float)
    q.add_argument("--dt", type=float, default=1.0)
    q = osub.add_parser("huygens-reflect", parents=[common])
    q.add_argument("alpha", type=float, help="front inclination in degrees")
    q.add_argument("v", type=float)
    q.add_argument("--dt", type=float, default=1.0)
    p.set_defaults(func=cmd_optics)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.g, args.format, args.out, args.samples, args.seed)
        _emit(cfg, args.func(args, cfg))
    except DomainError as exc:
        print(f"cycloidlab: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PhysicalRegimeError as exc:
        print(f"cycloidlab: error: {exc}", file=sys.stderr)
        return EXIT_PHYSICAL
    except CycloidLabError as exc:
        print(f"cycloidlab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
