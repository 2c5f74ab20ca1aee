"""Sampled planar curves and their differential geometry.

A :class:`PlanarCurve` always carries samples. Curves built from closed forms
additionally carry vectorized callbacks for the first and second derivative
(and usually the position), so that geometric quantities are evaluated
exactly instead of by finite differences.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, TextIO

import numpy as np

from .errors import CurvatureSingularError, DomainError, RegularityError
from .quadrature import integrate_many

DerivativeFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
PositionFn = Callable[[np.ndarray], np.ndarray]

REGULARITY_EPS = 1e-12
FLATNESS_EPS = 1e-12

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def rot90(v: np.ndarray) -> np.ndarray:
    """Rotate vectors (last axis of length 2) by +90 degrees."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _as_params(s) -> tuple[np.ndarray, bool]:
    arr = np.asarray(s, dtype=float)
    return np.atleast_1d(arr).ravel(), arr.ndim == 0


def _shape_out(values: np.ndarray, scalar: bool) -> np.ndarray:
    return values[0] if scalar else values


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """Regularly sampled parametric curve in the plane.

    Args:
        params: strictly increasing parameter values, at least two.
        points: array of shape ``(len(params), 2)``.
        derivatives: optional vectorized callback ``s -> (c'(s), c''(s))``.
        position: optional vectorized callback ``s -> c(s)``.

    Without callbacks, derivatives fall back to centered finite differences on
    the samples (second order one-sided at the ends) and positions between
    samples are linearly interpolated.

    Regularity is checked by the operations that need it, not here, so that
    curves starting at a cusp (such as a cycloidal slide) can be represented.
    """

    params: np.ndarray
    points: np.ndarray
    derivatives: DerivativeFn | None = field(default=None, repr=False)
    position: PositionFn | None = field(default=None, repr=False)

    def __post_init__(self):
        params = np.array(self.params, dtype=float)
        points = np.array(self.points, dtype=float)
        if params.ndim != 1 or params.size < 2:
            raise DomainError("a curve needs at least 2 samples")
        if points.shape != (params.size, 2):
            raise DomainError(f"points must have shape ({params.size}, 2), got {points.shape}")
        if not np.all(np.diff(params) > 0):
            raise DomainError("curve parameters must be strictly increasing")
        if not (np.all(np.isfinite(params)) and np.all(np.isfinite(points))):
            raise DomainError("curve samples must be finite")
        params.flags.writeable = False
        points.flags.writeable = False
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "points", points)

    @classmethod
    def from_functions(
        cls,
        params,
        position: PositionFn,
        derivatives: DerivativeFn | None = None,
    ) -> "PlanarCurve":
        """Sample ``position`` on ``params`` and keep the callbacks."""
        params = np.asarray(params, dtype=float)
        return cls(params, position(params), derivatives=derivatives, position=position)

    @property
    def start(self) -> float:
        return float(self.params[0])

    @property
    def end(self) -> float:
        return float(self.params[-1])

    @property
    def has_analytic(self) -> bool:
        return self.derivatives is not None

    def __len__(self) -> int:
        return self.params.size

    def check_param(self, s, what: str = "parameter") -> None:
        arr = np.asarray(s, dtype=float)
        slack = 1e-12 * max(1.0, abs(self.start), abs(self.end))
        if np.any(arr < self.start - slack) or np.any(arr > self.end + slack):
            raise DomainError(f"{what} outside curve range [{self.start}, {self.end}]")

    @cached_property
    def _fd(self) -> tuple[np.ndarray, np.ndarray]:
        order = 2 if self.params.size >= 3 else 1
        d1 = np.gradient(self.points, self.params, axis=0, edge_order=order)
        d2 = np.gradient(d1, self.params, axis=0, edge_order=order)
        return d1, d2

    def _interp(self, table: np.ndarray, s: np.ndarray) -> np.ndarray:
        return np.stack([np.interp(s, self.params, table[:, k]) for k in range(2)], axis=-1)

    def evaluate(self, s) -> np.ndarray:
        """Point(s) on the curve at parameter ``s``."""
        arr, scalar = _as_params(s)
        self.check_param(arr)
        if self.position is not None:
            out = np.asarray(self.position(arr), dtype=float).reshape(-1, 2)
        elif self.derivatives is not None:
            out = self._integrate_from_samples(arr)
        else:
            out = self._interp(self.points, arr)
        return _shape_out(out, scalar)

    def _integrate_from_samples(self, s: np.ndarray) -> np.ndarray:
        # Gauss-Legendre from the nearest sample; exact for smooth curves at these spacings.
        idx = np.clip(np.searchsorted(self.params, s) - 1, 0, self.params.size - 1)
        nxt = np.clip(idx + 1, 0, self.params.size - 1)
        use_next = np.abs(self.params[nxt] - s) < np.abs(s - self.params[idx])
        idx = np.where(use_next, nxt, idx)
        base = self.params[idx]
        half = 0.5 * (s - base)
        nodes = (base + half)[:, None] + half[:, None] * _GL_NODES[None, :]
        d1, _ = self.derivatives(nodes.ravel())
        d1 = np.asarray(d1, dtype=float).reshape(nodes.shape + (2,))
        return self.points[idx] + half[:, None] * np.einsum("mkj,k->mj", d1, _GL_WEIGHTS)

    def derivative(self, s) -> np.ndarray:
        """First derivative with respect to the parameter."""
        arr, scalar = _as_params(s)
        self.check_param(arr)
        if self.derivatives is not None:
            d1 = np.asarray(self.derivatives(arr)[0], dtype=float).reshape(-1, 2)
        else:
            d1 = self._interp(self._fd[0], arr)
        return _shape_out(d1, scalar)

    def second_derivative(self, s) -> np.ndarray:
        arr, scalar = _as_params(s)
        self.check_param(arr)
        if self.derivatives is not None:
            d2 = np.asarray(self.derivatives(arr)[1], dtype=float).reshape(-1, 2)
        else:
            d2 = self._interp(self._fd[1], arr)
        return _shape_out(d2, scalar)

    def sample_derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        """First and second derivatives at every sample."""
        if self.derivatives is not None:
            d1, d2 = self.derivatives(self.params)
            return np.asarray(d1, dtype=float).reshape(-1, 2), np.asarray(d2, dtype=float).reshape(-1, 2)
        return self._fd

    def is_regular(self) -> bool:
        d1, _ = self.sample_derivatives()
        return bool(np.all(np.hypot(d1[:, 0], d1[:, 1]) > REGULARITY_EPS))

    def check_regular(self) -> None:
        d1, _ = self.sample_derivatives()
        speed = np.hypot(d1[:, 0], d1[:, 1])
        bad = np.flatnonzero(speed <= REGULARITY_EPS)
        if bad.size:
            raise RegularityError(f"curve is not regular at parameter {float(self.params[bad[0]])!r}")


def finite_difference_derivatives(position: PositionFn, step: float) -> DerivativeFn:
    """Central-difference derivative callback for a position callback."""

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        fp, f0, fm = position(s + step), position(s), position(s - step)
        return (fp - fm) / (2 * step), (fp - 2 * f0 + fm) / step**2

    return derivatives


# --- pointwise geometry -----------------------------------------------------

def _unit(d1: np.ndarray) -> np.ndarray:
    speed = np.hypot(d1[..., 0], d1[..., 1])
    if np.any(speed < REGULARITY_EPS):
        raise RegularityError("degenerate derivative: the curve is not regular here")
    return d1 / speed[..., None]


def tangent(c: PlanarCurve, s) -> np.ndarray:
    """Unit tangent at ``s``; raises :class:`RegularityError` at singular points."""
    return _unit(c.derivative(s))


def unit_normal(c: PlanarCurve, s) -> np.ndarray:
    """Unit tangent rotated by +90 degrees."""
    return rot90(tangent(c, s))


def signed_curvature(c: PlanarCurve, s) -> np.ndarray:
    d1, d2 = c.derivative(s), c.second_derivative(s)
    speed = np.hypot(d1[..., 0], d1[..., 1])
    if np.any(speed < REGULARITY_EPS):
        raise RegularityError("curvature undefined where the derivative vanishes")
    return cross(d1, d2) / speed**3


def curvature_radius(c: PlanarCurve, s) -> np.ndarray:
    """Radius of the osculating circle, ``|c'|^3 / |c' x c''|``."""
    kappa = signed_curvature(c, s)
    if np.any(np.abs(kappa) < FLATNESS_EPS):
        raise CurvatureSingularError("zero curvature: the osculating circle degenerates to a line")
    return 1.0 / np.abs(kappa)


def curvature_center(c: PlanarCurve, s) -> np.ndarray:
    kappa = signed_curvature(c, s)
    if np.any(np.abs(kappa) < FLATNESS_EPS):
        raise CurvatureSingularError("zero curvature: no center of curvature")
    return c.evaluate(s) + unit_normal(c, s) / np.asarray(kappa)[..., None]


# --- arc length ---------------------------------------------------------------

def _speed_fn(c: PlanarCurve) -> Callable[[np.ndarray], np.ndarray]:
    def speed(s):
        d1 = c.derivative(np.clip(s, c.start, c.end))
        return np.hypot(d1[..., 0], d1[..., 1])

    return speed


def _polyline_speed_integral(c: PlanarCurve, s1: float, s2: float) -> float:
    # Exact integral of the piecewise-linear interpolant of the sampled speed.
    d1 = c._fd[0]
    speed = np.hypot(d1[:, 0], d1[:, 1])
    inner = (c.params > s1) & (c.params < s2)
    knots = np.concatenate([[s1], c.params[inner], [s2]])
    values = np.interp(knots, c.params, speed)
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(knots)))


def arc_length(c: PlanarCurve, s1: float, s2: float) -> float:
    """Length of the curve between parameters ``s1 <= s2``."""
    c.check_param([s1, s2])
    if s1 > s2:
        raise DomainError("arc_length requires s1 <= s2")
    if s1 == s2:
        return 0.0
    if c.has_analytic:
        value, _ = integrate_many(_speed_fn(c), s1, s2)
        return float(value)
    return _polyline_speed_integral(c, s1, s2)


def cumulative_arc_length(c: PlanarCurve, s0: float) -> np.ndarray:
    """Signed arc length from ``s0`` to every sample (negative before ``s0``)."""
    c.check_param(s0)
    p = c.params
    if c.has_analytic:
        pieces, _ = integrate_many(_speed_fn(c), p[:-1], p[1:])
        from_start = np.concatenate([[0.0], np.cumsum(pieces)])
        k = int(np.clip(np.searchsorted(p, s0), 0, p.size - 1))
        offset, _ = integrate_many(_speed_fn(c), p[k], s0)
        return from_start - (from_start[k] + float(offset))
    d1 = c._fd[0]
    speed = np.hypot(d1[:, 0], d1[:, 1])
    from_start = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(p))])
    return from_start - _polyline_speed_integral(c, p[0], s0)


# --- involute and evolute -------------------------------------------------------

def involute(c: PlanarCurve, s0: float) -> PlanarCurve:
    """Curve traced by the end of a taut string unwound from ``c`` starting at ``s0``.

    ``I(s) = C(s) - l(s0, s) T(s)`` on the same parameter grid, where ``l`` is
    the signed arc length and ``T`` the unit tangent.
    """
    c.check_param(s0)
    c.check_regular()
    ell = cumulative_arc_length(c, s0)
    d1, _ = c.sample_derivatives()
    points = c.points - ell[:, None] * _unit(d1)
    if not c.has_analytic:
        return PlanarCurve(c.params, points)

    speed_fn = _speed_fn(c)

    def string_length(s):
        values, _ = integrate_many(speed_fn, np.full(np.shape(s), s0), s)
        return values

    def position(s):
        s = np.asarray(s, dtype=float)
        return c.evaluate(s) - string_length(s)[:, None] * tangent(c, s)

    def rate(s):
        # Scalar factor of I' along the unit normal: I' = -l * kappa * |C'| * N.
        d1 = c.derivative(s)
        return string_length(s) * signed_curvature(c, s) * np.hypot(d1[:, 0], d1[:, 1])

    step = 1e-6 * max(1.0, c.end - c.start)

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        d1 = c.derivative(s)
        speed = np.hypot(d1[:, 0], d1[:, 1])
        kappa = signed_curvature(c, s)
        t_hat = d1 / speed[:, None]
        n_hat = rot90(t_hat)
        ell_s = string_length(s)
        g = ell_s * kappa * speed
        lo, hi = np.clip(s - step, c.start, c.end), np.clip(s + step, c.start, c.end)
        g_rate = (rate(hi) - rate(lo)) / (hi - lo)
        first = -g[:, None] * n_hat
        second = -g_rate[:, None] * n_hat + (g * kappa * speed)[:, None] * t_hat
        return first, second

    return PlanarCurve(c.params, points, derivatives=derivatives, position=position)


def evolute(c: PlanarCurve) -> PlanarCurve:
    """Locus of the centers of curvature, ``E(s) = C(s) + N(s) / kappa(s)``."""
    points = curvature_center(c, c.params)
    if not c.has_analytic:
        return PlanarCurve(c.params, points)

    def position(s):
        return curvature_center(c, np.asarray(s, dtype=float))

    step = 1e-5 * (c.end - c.start)
    return PlanarCurve(
        c.params, points, derivatives=finite_difference_derivatives(position, step), position=position
    )


def scale_curve(c: PlanarCurve, factor: float, origin=(0.0, 0.0)) -> PlanarCurve:
    """Dilate ``c`` by ``factor`` about ``origin`` (parameters unchanged)."""
    origin = np.asarray(origin, dtype=float)
    points = origin + factor * (c.points - origin)
    if not c.has_analytic:
        return PlanarCurve(c.params, points)

    def derivatives(s):
        d1, d2 = c.derivatives(s)
        return factor * np.asarray(d1), factor * np.asarray(d2)

    def position(s):
        return origin + factor * (c.evaluate(np.asarray(s, dtype=float)) - origin)

    return PlanarCurve(c.params, points, derivatives=derivatives, position=position)


# --- constructors -----------------------------------------------------------------

def line_curve(p0, p1, samples: int = 101) -> PlanarCurve:
    """Straight segment from ``p0`` to ``p1`` with parameter in ``[0, 1]``."""
    p0 = np.asarray(p0, dtype=float)
    direction = np.asarray(p1, dtype=float) - p0

    def position(s):
        return p0 + np.asarray(s, dtype=float)[..., None] * direction

    def derivatives(s):
        n = np.size(s)
        return np.tile(direction, (n, 1)), np.zeros((n, 2))

    return PlanarCurve.from_functions(np.linspace(0.0, 1.0, samples), position, derivatives)


def circle_curve(
    radius: float = 1.0,
    center=(0.0, 0.0),
    samples: int = 201,
    span: tuple[float, float] = (0.0, 2 * np.pi),
    clockwise: bool = False,
) -> PlanarCurve:
    """Circle ``center + r (cos s, +-sin s)``; counterclockwise unless ``clockwise``."""
    if radius <= 0:
        raise DomainError("radius must be positive")
    center = np.asarray(center, dtype=float)
    sign = -1.0 if clockwise else 1.0

    def position(s):
        s = np.asarray(s, dtype=float)
        return center + radius * np.stack([np.cos(s), sign * np.sin(s)], axis=-1)

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        d1 = radius * np.stack([-np.sin(s), sign * np.cos(s)], axis=-1)
        d2 = radius * np.stack([-np.cos(s), -sign * np.sin(s)], axis=-1)
        return d1, d2

    return PlanarCurve.from_functions(np.linspace(span[0], span[1], samples), position, derivatives)


def parabola_curve(half_width: float = 1.0, samples: int = 201, focal: float = 0.5) -> PlanarCurve:
    """Graph ``y = focal * x^2`` parametrized by ``x`` on ``[-half_width, half_width]``."""

    def position(s):
        s = np.asarray(s, dtype=float)
        return np.stack([s, focal * s * s], axis=-1)

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        d1 = np.stack([np.ones_like(s), 2 * focal * s], axis=-1)
        d2 = np.stack([np.zeros_like(s), np.full_like(s, 2 * focal)], axis=-1)
        return d1, d2

    return PlanarCurve.from_functions(
        np.linspace(-half_width, half_width, samples), position, derivatives
    )


# --- the two-cycloid pendulum configuration --------------------------------------

@dataclass(frozen=True)
class CycloidPairWitness:
    """Labelled points of the cycloidal-pendulum construction at rolling angle ``t0``.

    The middle rolling line is ``y = 0`` with the lower cycloid's cusp ``A`` at
    the origin. The lower circle (center ``O``) rolls left below that line and
    carries ``M``; the upper circle rolls right along ``y = 2a`` and carries
    ``M'``. ``P'`` is where the circles touch and ``P`` the bottom of the lower
    circle.
    """

    a: float
    t0: float
    M: np.ndarray
    M_prime: np.ndarray
    P: np.ndarray
    P_prime: np.ndarray
    O: np.ndarray

    @classmethod
    def at(cls, a: float, t0: float) -> "CycloidPairWitness":
        if a <= 0:
            raise DomainError("a must be positive")
        if not 0.0 <= t0 <= np.pi:
            raise DomainError("t0 must lie in [0, pi]")
        s, c = np.sin(t0), np.cos(t0)
        return cls(
            a=a,
            t0=t0,
            M=np.array(lower_pendulum_cycloid(a).position(np.array([t0]))[0]),
            M_prime=np.array(upper_pendulum_cycloid(a).position(np.array([np.pi - t0]))[0]),
            P=np.array([-a * t0, -2 * a]),
            P_prime=np.array([-a * t0, 0.0]),
            O=np.array([-a * t0, -a]),
        )


def lower_pendulum_cycloid(a: float, samples: int = 201, t_max: float = np.pi) -> PlanarCurve:
    """Path of the pendulum bob: ``(-a(t - sin t), -2a sin^2(t/2))`` for ``t`` in ``[0, t_max]``."""

    def position(t):
        t = np.asarray(t, dtype=float)
        return np.stack([-a * (t - np.sin(t)), -2 * a * np.sin(t / 2) ** 2], axis=-1)

    def derivatives(t):
        t = np.asarray(t, dtype=float)
        d1 = np.stack([-2 * a * np.sin(t / 2) ** 2, -a * np.sin(t)], axis=-1)
        d2 = np.stack([-a * np.sin(t), -a * np.cos(t)], axis=-1)
        return d1, d2

    return PlanarCurve.from_functions(np.linspace(0.0, t_max, samples), position, derivatives)


def upper_pendulum_cycloid(a: float, samples: int = 201, u_min: float = 0.0, u_max: float = np.pi) -> PlanarCurve:
    """Cheek curve from ``B' = (-pi a, 2a)`` (``u = 0``) down to ``A`` (``u = pi``)."""

    def position(u):
        u = np.asarray(u, dtype=float)
        return np.stack([-np.pi * a + a * (u - np.sin(u)), 2 * a * np.cos(u / 2) ** 2], axis=-1)

    def derivatives(u):
        u = np.asarray(u, dtype=float)
        d1 = np.stack([2 * a * np.sin(u / 2) ** 2, -a * np.sin(u)], axis=-1)
        d2 = np.stack([a * np.sin(u), -a * np.cos(u)], axis=-1)
        return d1, d2

    return PlanarCurve.from_functions(np.linspace(u_min, u_max, samples), position, derivatives)


def cheek_from_vertex(a: float, samples: int = 201, sigma_max: float = np.pi - 1e-6) -> PlanarCurve:
    """The upper cycloid reparametrized by ``sigma = pi - u``, running from ``A`` towards ``B'``.

    Unwinding a string from this curve starting at ``sigma = 0`` traces the
    lower cycloid with ``t = sigma``.
    """

    def position(sig):
        sig = np.asarray(sig, dtype=float)
        return np.stack([-a * (sig + np.sin(sig)), 2 * a * np.sin(sig / 2) ** 2], axis=-1)

    def derivatives(sig):
        sig = np.asarray(sig, dtype=float)
        d1 = np.stack([-2 * a * np.cos(sig / 2) ** 2, a * np.sin(sig)], axis=-1)
        d2 = np.stack([a * np.sin(sig), a * np.cos(sig)], axis=-1)
        return d1, d2

    return PlanarCurve.from_functions(np.linspace(0.0, sigma_max, samples), position, derivatives)


# --- CSV ----------------------------------------------------------------------------

CSV_HEADER = ("param", "x", "y")


def write_csv(c: PlanarCurve, dest: str | Path | TextIO) -> None:
    """Write ``param,x,y`` rows with round-trip float precision."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            write_csv(c, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s, (x, y) in zip(c.params, c.points):
        writer.writerow([repr(float(s)), repr(float(x)), repr(float(y))])


def to_csv_string(c: PlanarCurve) -> str:
    buf = io.StringIO()
    write_csv(c, buf)
    return buf.getvalue()


def read_csv(src: str | Path | TextIO) -> PlanarCurve:
    """Read a ``param,x,y`` file into a sampled (derivative-free) curve."""
    if isinstance(src, (str, Path)):
        with open(src, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(src)
    header = next(reader)
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise DomainError(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
    rows = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise DomainError("a curve file needs at least 2 rows")
    return PlanarCurve(rows[:, 0], rows[:, 1:3])
