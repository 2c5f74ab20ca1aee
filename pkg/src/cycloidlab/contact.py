"""Contact elements of the plane, Legendrian lifts of fronts and the geodesic flow.

A contact element ``(x, y, theta)`` is a point with an oriented line through
it at angle ``theta``. The contact plane at that element is spanned by
``d/dtheta`` and ``cos(theta) d/dx + sin(theta) d/dy``; a tangent vector
``(u, v, w)`` lies in it exactly when ``sin(theta) u - cos(theta) v = 0``.

The geodesic flow moves every element a distance ``t`` along the normal
``(-sin theta, cos theta)`` to its line, keeping ``theta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curves import REGULARITY_EPS, PlanarCurve, cross, curvature_radius
from .errors import CausticError, CurvatureSingularError, DomainError, RegularityError

TWO_PI = 2.0 * math.pi


def wrap_angle(theta):
    """Reduce to ``[0, 2 pi)``."""
    return np.mod(theta, TWO_PI)


def angle_difference(a, b):
    """``a - b`` reduced to ``(-pi, pi]``."""
    d = np.mod(np.asarray(a, dtype=float) - b, TWO_PI)
    return np.where(d > math.pi, d - TWO_PI, d)


@dataclass(frozen=True)
class ContactElement:
    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(wrap_angle(self.theta)))

    @property
    def point(self) -> np.ndarray:
        return np.array([self.x, self.y])


def flow(e: ContactElement, t: float) -> ContactElement:
    """Geodesic flow ``(x - t sin theta, y + t cos theta, theta)``."""
    return ContactElement(e.x - t * math.sin(e.theta), e.y + t * math.cos(e.theta), e.theta)


def flow_arrays(x, y, theta, t):
    """Vectorized flow; also accepts complex arguments (used for pushforwards)."""
    return x - t * np.sin(theta), y + t * np.cos(theta), theta


def contact_residual(e: ContactElement, v) -> float:
    """``sin(theta) u - cos(theta) v``; zero iff ``v = (u, v, w)`` lies in the contact plane."""
    u, vv, _ = v
    return math.sin(e.theta) * u - math.cos(e.theta) * vv


def flow_pushforward(x, y, theta, tangent, t, step: float = 1e-30):
    """Image of the tangent vector ``tangent = (u, v, w)`` under the flow's differential.

    Computed by complex-step differentiation of :func:`flow_arrays`, so it does
    not rely on a hand-derived Jacobian.
    """
    u, v, w = (np.asarray(c, dtype=float) for c in tangent)
    fx, fy, ft = flow_arrays(x + 1j * step * u, y + 1j * step * v, theta + 1j * step * w, t)
    return np.imag(fx) / step, np.imag(fy) / step, np.imag(ft) / step


@dataclass(frozen=True, eq=False)
class LiftedFront:
    """A regular front together with its tangent angle at every sample."""

    base: PlanarCurve
    theta: np.ndarray = field(repr=False)

    def theta_at(self, s) -> np.ndarray:
        d1 = self.base.derivative(s)
        return wrap_angle(np.arctan2(d1[..., 1], d1[..., 0]))

    def theta_rate(self, s) -> np.ndarray:
        """``d theta / ds = (c' x c'') / |c'|^2``."""
        d1, d2 = self.base.derivative(s), self.base.second_derivative(s)
        return cross(d1, d2) / np.sum(d1 * d1, axis=-1)

    def legendrian_residual(self) -> float:
        """Largest sine of the angle between ``c'`` and ``(cos theta, sin theta)`` over the samples."""
        return float(np.max(np.abs(legendrian_defect(self.base, self.theta))))


def legendrian_defect(front: PlanarCurve, theta) -> np.ndarray:
    """Signed sine of the angle from ``(cos theta, sin theta)`` to ``c'``; NaN-free.

    An assignment is Legendrian with positive orientation when this vanishes
    and :func:`orientation_agrees` holds.
    """
    d1, _ = front.sample_derivatives()
    speed = np.hypot(d1[:, 0], d1[:, 1])
    return (np.cos(theta) * d1[:, 1] - np.sin(theta) * d1[:, 0]) / speed


def orientation_agrees(front: PlanarCurve, theta) -> np.ndarray:
    """True where ``c'`` is a positive multiple of ``(cos theta, sin theta)``."""
    d1, _ = front.sample_derivatives()
    return np.cos(theta) * d1[:, 0] + np.sin(theta) * d1[:, 1] > 0


def lift(front: PlanarCurve) -> LiftedFront:
    """Legendrian lift: ``theta(s) = atan2(y'(s), x'(s))``."""
    d1, _ = front.sample_derivatives()
    speed = np.hypot(d1[:, 0], d1[:, 1])
    bad = np.flatnonzero(speed <= REGULARITY_EPS)
    if bad.size:
        raise RegularityError(f"front is not regular at parameter {float(front.params[bad[0]])!r}")
    return LiftedFront(front, wrap_angle(np.arctan2(d1[:, 1], d1[:, 0])))


def propagate_front(lf: LiftedFront, t: float) -> PlanarCurve:
    """Front after time ``t``: every point moves ``t`` along ``(-sin theta, cos theta)``."""
    base = lf.base
    th = lf.theta
    points = base.points + t * np.stack([-np.sin(th), np.cos(th)], axis=-1)
    if not base.has_analytic:
        return PlanarCurve(base.params, points)

    def position(s):
        s = np.asarray(s, dtype=float)
        theta = lf.theta_at(s)
        return base.evaluate(s) + t * np.stack([-np.sin(theta), np.cos(theta)], axis=-1)

    def first(s):
        theta = lf.theta_at(s)
        rate = lf.theta_rate(s)
        return base.derivative(s) - (t * rate)[:, None] * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    step = 1e-6 * max(1.0, base.end - base.start)

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        lo = np.clip(s - step, base.start, base.end)
        hi = np.clip(s + step, base.start, base.end)
        return first(s), (first(hi) - first(lo)) / (hi - lo)[:, None]

    return PlanarCurve(base.params, points, derivatives=derivatives, position=position)


def elementary_wave(p, t: float, sample_count: int = 64) -> PlanarCurve:
    """Circle ``p + t (-sin theta, cos theta)``, ``theta`` uniform over one turn."""
    if sample_count < 3:
        raise DomainError("sample_count must be at least 3")
    p = np.asarray(p, dtype=float)

    def position(theta):
        theta = np.asarray(theta, dtype=float)
        return p + t * np.stack([-np.sin(theta), np.cos(theta)], axis=-1)

    def derivatives(theta):
        theta = np.asarray(theta, dtype=float)
        d1 = -t * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        d2 = -t * np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
        return d1, d2

    thetas = np.linspace(0.0, TWO_PI, sample_count, endpoint=False)
    return PlanarCurve(thetas, position(thetas), derivatives=derivatives, position=position)


@dataclass(frozen=True)
class TangencyCertificate:
    s0: float
    t: float
    angle_error: float
    point_error: float
    tol: float = 1e-8

    @property
    def certified(self) -> bool:
        return self.angle_error < self.tol and self.point_error < self.tol

    def to_dict(self) -> dict:
        return {
            "s0": self.s0,
            "t": self.t,
            "angle_error": self.angle_error,
            "point_error": self.point_error,
            "certified": self.certified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _line_angle(v: np.ndarray) -> float:
    """Angle between unoriented lines, folded to ``[0, pi/2]`` later."""
    return math.atan2(v[1], v[0])


def tangency_certificate(lf: LiftedFront, s0: float, t: float) -> TangencyCertificate:
    """Compare the propagated front with the elementary wave from ``base(s0)``.

    Refuses with :class:`CausticError` once ``|t|`` reaches the curvature
    radius of the front at ``s0``.
    """
    base = lf.base
    base.check_param(s0)
    if math.hypot(*base.derivative(s0)) <= REGULARITY_EPS:
        raise RegularityError("front is not regular at s0")
    try:
        radius = float(curvature_radius(base, s0))
    except CurvatureSingularError:
        radius = math.inf
    if abs(t) >= radius:
        raise CausticError(f"|t| = {abs(t):.9g} reaches the curvature radius {radius:.9g} at s0")

    theta0 = float(lf.theta_at(s0))
    propagated = propagate_front(lf, t)
    wave = elementary_wave(base.evaluate(s0), t, sample_count=8)

    # The wave is periodic in theta; use its closed form rather than the sampled range.
    at = np.array([theta0])
    front_point = propagated.evaluate(s0)
    wave_point = wave.position(at)[0]
    point_error = float(np.linalg.norm(front_point - wave_point))

    if t == 0:
        # The elementary wave is a single point; nothing to compare.
        return TangencyCertificate(float(s0), float(t), 0.0, point_error)
    front_dir = propagated.derivative(s0)
    # The tangent line of the circle at theta does not depend on its radius; the
    # unit wave avoids underflow for tiny t.
    wave_dir = elementary_wave(base.evaluate(s0), 1.0, sample_count=8).derivatives(at)[0][0]
    diff = float(abs(angle_difference(_line_angle(front_dir), _line_angle(wave_dir))))
    angle_error = min(diff, math.pi - diff)
    return TangencyCertificate(float(s0), float(t), angle_error, point_error)


def verify_contact_transformation(fronts: Sequence[LiftedFront], t: float) -> float:
    """Largest contact residual of flowed tangents over all samples of all fronts.

    For every sample the lifted tangent ``(x', y', theta')`` is pushed through
    the differential of the flow and tested against the contact plane at the
    image element.
    """
    worst = 0.0
    for lf in fronts:
        s = lf.base.params
        d1, _ = lf.base.sample_derivatives()
        theta = lf.theta
        rate = lf.theta_rate(s)
        pts = lf.base.points
        u, v, _ = flow_pushforward(pts[:, 0], pts[:, 1], theta, (d1[:, 0], d1[:, 1], rate), t)
        _, _, theta_img = flow_arrays(pts[:, 0], pts[:, 1], theta, t)
        residual = np.sin(theta_img) * u - np.cos(theta_img) * v
        speed = np.hypot(d1[:, 0], d1[:, 1])
        # Scale-free: a tangent of length |c'| gives residual of the same size.
        worst = max(worst, float(np.max(np.abs(residual) / np.maximum(speed, 1.0))))
    return worst


def random_legendrian_front(seed: int, samples: int = 201, modes: int = 3) -> PlanarCurve:
    """Front with a smooth random tangent angle ``theta(s)`` and speed ``rho(s) > 0``.

    ``c' = rho (cos theta, sin theta)`` is exact; positions come from
    integrating ``c'`` with 12-point Gauss-Legendre between samples.
    """
    rng = np.random.default_rng(seed)
    k = np.arange(1, modes + 1)
    th_amp = rng.normal(0.0, 1.0, modes) / k
    th_phase = rng.uniform(0.0, TWO_PI, modes)
    rho_amp = rng.normal(0.0, 0.3, modes) / k
    rho_phase = rng.uniform(0.0, TWO_PI, modes)
    theta0 = rng.uniform(0.0, TWO_PI)

    def parts(s):
        arg_t = np.outer(s, k) + th_phase
        arg_r = np.outer(s, k) + rho_phase
        theta = theta0 + np.sin(arg_t) @ th_amp
        dtheta = (np.cos(arg_t) * k) @ th_amp
        log_rho = np.sin(arg_r) @ rho_amp
        rho = np.exp(log_rho)
        drho = rho * ((np.cos(arg_r) * k) @ rho_amp)
        return theta, dtheta, rho, drho

    def derivatives(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        theta, dtheta, rho, drho = parts(s)
        c, sn = np.cos(theta), np.sin(theta)
        d1 = np.stack([rho * c, rho * sn], axis=-1)
        d2 = np.stack([drho * c - rho * dtheta * sn, drho * sn + rho * dtheta * c], axis=-1)
        return d1, d2

    params = np.linspace(0.0, TWO_PI, samples)
    nodes, weights = np.polynomial.legendre.leggauss(12)
    half = 0.5 * np.diff(params)
    mids = 0.5 * (params[1:] + params[:-1])
    quad_s = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    d1, _ = derivatives(quad_s)
    steps = half[:, None] * np.einsum("mkj,k->mj", d1.reshape(-1, 12, 2), weights)
    points = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)])
    return PlanarCurve(params, points, derivatives=derivatives)
