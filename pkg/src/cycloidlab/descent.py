"""Frictionless gravity descent along arbitrary slides.

All slides use the downward y convention: ``y`` grows with depth and a mass
released at rest at height ``y0`` has speed ``sqrt(2 g (y - y0))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curves import PlanarCurve, REGULARITY_EPS, rot90
from .cycloid import FitTarget
from .errors import DomainError, EndpointError, NotDescendingError, PerturbationError, RegularityError
from .quadrature import integrate

ENDPOINT_TOL = 1e-9
MAX_RESAMPLES = 100


@dataclass(frozen=True)
class DescentParams:
    g: float = 9.81

    def __post_init__(self):
        if not self.g > 0:
            raise DomainError("g must be positive")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _drop_fn(slide: PlanarCurve, s0: float, y0: float):
    """Height gained below the start, ``y(s0 + ds) - y0``, as a function of ``ds``.

    Differencing two nearly equal heights loses most digits close to the
    start, so on analytic slides steps shorter than a tenth of the parameter
    span integrate ``y'`` over ``[s0, s0 + ds]`` instead.
    """
    near = 0.1 * (slide.end - slide.start)

    def drop(ds):
        out = slide.evaluate(s0 + ds)[:, 1] - y0
        if slide.has_analytic:
            m = ds < near
            if np.any(m):
                half = 0.5 * ds[m]
                nodes = s0 + half[:, None] * (1.0 + _GL_NODES[None, :])
                dy = slide.derivative(nodes.ravel())[:, 1].reshape(nodes.shape)
                out[m] = half * (dy @ _GL_WEIGHTS)
        return out

    return drop


def descent_time(
    slide: PlanarCurve,
    start_param: float | None = None,
    params: DescentParams | None = None,
    epsabs: float = 1e-11,
) -> float:
    """Time to slide from rest at ``start_param`` to the end of ``slide``.

    The integrand ``|C'(s)| / sqrt(2 g (y(s) - y(s0)))`` has an inverse square
    root singularity at the start. Substituting ``s = s0 + u^2`` removes it;
    the smooth integrand in ``u`` goes to adaptive Gauss-Kronrod quadrature.
    """
    params = params or DescentParams()
    s0 = slide.start if start_param is None else float(start_param)
    slide.check_param(s0, "start parameter")
    s1 = slide.end
    if s0 >= s1:
        return 0.0

    y0 = float(slide.evaluate(s0)[1])
    ahead = slide.params > s0 + 1e-9 * (s1 - s0)
    # Heights equal to rounding are left to the integrand's accurate drop.
    floor = y0 - 8 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(slide.points[:, 1]))))
    rises = slide.points[ahead, 1] < floor
    if np.any(rises):
        bad = slide.params[ahead][np.argmax(rises)]
        raise NotDescendingError(f"slide returns to its starting height at parameter {bad!r}")
    d1_samples, _ = slide.sample_derivatives()
    speeds = np.hypot(d1_samples[ahead, 0], d1_samples[ahead, 1])
    if np.any(speeds <= REGULARITY_EPS):
        raise RegularityError("slide is not regular past its starting point")

    drop = _drop_fn(slide, s0, y0)
    two_g = 2.0 * params.g
    # Integrand value at u = 0, reached only if u * u underflows against s0.
    d1_start = slide.derivative(s0)
    limit = 0.0
    if d1_start[1] > 0:
        limit = 2.0 * math.hypot(*d1_start) / math.sqrt(two_g * d1_start[1])

    def integrand(u):
        ds = np.minimum(u * u, s1 - s0)
        d1 = slide.derivative(s0 + ds)
        h = drop(ds)
        at_start = ds <= 0
        if np.any(h[~at_start] <= 0):
            raise NotDescendingError("slide rises to its starting height inside the interval")
        h = np.where(at_start, 1.0, h)
        value = 2.0 * u * np.hypot(d1[:, 0], d1[:, 1]) / np.sqrt(two_g * h)
        return np.where(at_start, limit, value)

    return integrate(integrand, 0.0, math.sqrt(s1 - s0), epsabs=epsabs, epsrel=1e-11)


def descent_table(slide: PlanarCurve, starts: Sequence[float], params: DescentParams | None = None):
    """``[(start_param, time), ...]`` for several release points."""
    return [(float(s), descent_time(slide, s, params)) for s in starts]


def descent_table_csv(rows) -> str:
    lines = ["start_param,descent_time"]
    lines += [f"{s!r},{t!r}" for s, t in rows]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RankedSlide:
    id: object
    time_seconds: float


def compare_slides(
    target: FitTarget,
    slides: Sequence[PlanarCurve],
    params: DescentParams | None = None,
    ids: Sequence | None = None,
) -> list[RankedSlide]:
    """Rank slides from the origin to ``B`` by descent time (stable on ties)."""
    ids = list(range(len(slides))) if ids is None else list(ids)
    if len(ids) != len(slides):
        raise DomainError("ids and slides differ in length")
    start = np.zeros(2)
    end = np.array([target.b1, target.b2])
    for slide_id, slide in zip(ids, slides):
        if np.max(np.abs(slide.points[0] - start)) > ENDPOINT_TOL:
            raise EndpointError(f"slide {slide_id!r} does not start at the origin")
        if np.max(np.abs(slide.points[-1] - end)) > ENDPOINT_TOL:
            raise EndpointError(f"slide {slide_id!r} does not end at ({target.b1}, {target.b2})")
    times = [descent_time(slide, slide.start, params) for slide in slides]
    order = sorted(range(len(slides)), key=lambda k: times[k])
    return [RankedSlide(ids[k], times[k]) for k in order]


def ranking_json(ranking: Sequence[RankedSlide]) -> str:
    return json.dumps([{"id": r.id, "time_seconds": r.time_seconds} for r in ranking])


def perturb_slide(base: PlanarCurve, amplitude: float, mode_count: int, seed: int) -> PlanarCurve:
    """Displace ``base`` along its normal by a random sine series.

    The displacement is ``d(s) R C'(s) / max|C'|`` with
    ``d = amplitude * sum_k c_k sin(k pi sigma) / mode_count``, ``c_k`` uniform
    in ``[-1, 1]`` and ``sigma`` the normalized parameter. Weighting by the
    parametric speed keeps a cusped start (the cycloid's) a cusp rather than
    turning it into a flat, never-departing start. Draws leaving the interior
    at or above the starting height are rejected and redrawn from the same
    generator.
    """
    if amplitude < 0:
        raise DomainError("amplitude must be non-negative")
    if mode_count < 1:
        raise DomainError("mode_count must be at least 1")
    if amplitude == 0:
        return base

    rng = np.random.default_rng(seed)
    s_a, s_b = base.start, base.end
    span = s_b - s_a
    d1_samples, _ = base.sample_derivatives()
    peak_speed = float(np.max(np.hypot(d1_samples[:, 0], d1_samples[:, 1])))
    if peak_speed <= REGULARITY_EPS:
        raise RegularityError("cannot perturb a curve with vanishing derivative everywhere")
    modes = np.arange(1, mode_count + 1)

    for _ in range(MAX_RESAMPLES):
        coeffs = rng.uniform(-1.0, 1.0, mode_count) * amplitude / mode_count / peak_speed
        candidate = _displaced(base, coeffs, modes, s_a, span)
        interior = candidate.points[1:-1, 1]
        if np.all(interior > candidate.points[0, 1]):
            return candidate
    raise PerturbationError(f"no admissible perturbation after {MAX_RESAMPLES} draws")


def _displaced(base: PlanarCurve, coeffs, modes, s_a: float, span: float) -> PlanarCurve:
    def series(s):
        arg = np.pi * np.outer((np.asarray(s) - s_a) / span, modes)
        k = np.pi * modes / span
        return (
            np.sin(arg) @ coeffs,
            (np.cos(arg) * k) @ coeffs,
            (-np.sin(arg) * k * k) @ coeffs,
        )

    d1_b, d2_b = base.sample_derivatives()
    d0, _, _ = series(base.params)
    points = base.points + d0[:, None] * rot90(d1_b)
    if not base.has_analytic:
        return PlanarCurve(base.params, points)

    step = 1e-6 * span

    def position(s):
        s = np.asarray(s, dtype=float)
        d, _, _ = series(s)
        return base.evaluate(s) + d[:, None] * rot90(base.derivative(s))

    def first(s):
        d, dd, _ = series(s)
        return base.derivative(s) + dd[:, None] * rot90(base.derivative(s)) + d[:, None] * rot90(base.second_derivative(s))

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        lo = np.clip(s - step, base.start, base.end)
        hi = np.clip(s + step, base.start, base.end)
        return first(s), (first(hi) - first(lo)) / (hi - lo)[:, None]

    return PlanarCurve(base.params, points, derivatives=derivatives, position=position)
