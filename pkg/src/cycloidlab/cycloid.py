"""The common cycloid: closed forms, two-point fitting, and descent times."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import PlanarCurve
from .errors import DomainError

CUSP_MARGIN = 1e-6
TWO_PI = 2.0 * math.pi


def t_minus_sin(t):
    """``t - sin t`` without cancellation for small ``|t|``."""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 0.1
    ts = np.where(small, t, 0.0)
    t2 = ts * ts
    # Taylor series; the first omitted term is t^13 / 13!.
    series = ts * t2 / 6.0 * (1 - t2 / 20.0 * (1 - t2 / 42.0 * (1 - t2 / 72.0 * (1 - t2 / 110.0))))
    return np.where(small, series, t - np.sin(t))


@dataclass(frozen=True)
class Cycloid:
    """Cycloid generated by a circle of radius ``a`` rolling along the x-axis.

    Points are ``(a(t - sin t), a(1 - cos t))``. With ``y_down`` the y-axis of
    that frame points downward, which turns the arch into a slide hanging below
    its starting cusp; the coordinates returned by :meth:`point` are the same
    and :meth:`point_upward` converts them to an upward-pointing frame.
    """

    a: float
    y_down: bool = False

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("cycloid radius a must be positive")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        x = self.a * t_minus_sin(t)
        y = 2.0 * self.a * np.sin(0.5 * t) ** 2
        return np.stack([x, y], axis=-1)

    def point_upward(self, t):
        """Point in a frame whose y-axis points up (sign of y flipped when ``y_down``)."""
        p = self.point(t)
        return p * np.array([1.0, -1.0]) if self.y_down else p

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([2.0 * self.a * np.sin(0.5 * t) ** 2, self.a * np.sin(t)], axis=-1)

    def acceleration(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.a * np.sin(t), self.a * np.cos(t)], axis=-1)

    def speed(self, t):
        """Parametric speed ``2a |sin(t/2)|``."""
        return 2.0 * self.a * np.abs(np.sin(0.5 * np.asarray(t, dtype=float)))

    def curve(self, t_min: float = 0.0, t_max: float = math.pi, samples: int = 201) -> PlanarCurve:
        """Analytic :class:`PlanarCurve` on a uniform grid in ``[t_min, t_max]``."""
        return PlanarCurve.from_functions(
            np.linspace(t_min, t_max, samples),
            self.point,
            lambda t: (self.velocity(t), self.acceleration(t)),
        )

    def interior_curve(self, samples: int = 201, margin: float = CUSP_MARGIN) -> PlanarCurve:
        """One arch with the cusps at ``0`` and ``2 pi`` cut off by ``margin``."""
        return self.curve(margin, TWO_PI - margin, samples)


def point(c: Cycloid, t):
    return c.point(t)


def speed(c: Cycloid, t):
    return c.speed(t)


@dataclass(frozen=True)
class FitTarget:
    """End point ``B = (b1, b2)`` of a slide starting at the origin (y downward)."""

    b1: float
    b2: float

    def __post_init__(self):
        if not self.b1 > 0:
            raise DomainError("b1 must be positive")
        if not self.b2 >= 0:
            raise DomainError("b2 must be non-negative")

    @property
    def monotone(self) -> bool:
        """True when the connecting arc has no upward slope (``t_B <= pi``)."""
        return self.b2 >= 2.0 * self.b1 / math.pi


def _psi(t: float) -> float:
    # (1 - cos t) / (t - sin t), strictly decreasing on (0, 2 pi].
    return float(2.0 * math.sin(0.5 * t) ** 2 / t_minus_sin(t))


def fit(target: FitTarget) -> tuple[float, float]:
    """Radius ``a`` and end angle ``t_B`` of the cycloid from the origin through ``B``.

    Solves ``(1 - cos t) / (t - sin t) = b2 / b1`` by bisection on
    ``[1e-9, 2 pi]`` and sets ``a = b1 / (t_B - sin t_B)``.
    """
    if not isinstance(target, FitTarget):
        target = FitTarget(*target)
    ratio = target.b2 / target.b1
    lo, hi = 1e-9, TWO_PI
    if ratio == 0.0:
        t_b = TWO_PI
    else:
        if _psi(lo) <= ratio:
            raise DomainError("target is too close to a vertical drop to be reached by a cycloid")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _psi(mid) > ratio:
                lo = mid
            else:
                hi = mid
        t_b = 0.5 * (lo + hi)
    a = target.b1 / float(t_minus_sin(t_b))
    return a, t_b


def descent_time_closed(c: Cycloid, t0: float, t1: float, g: float = 9.81) -> float:
    """Time to slide from rest at angle ``t0`` to angle ``t1`` (``t1 <= pi``).

    Integrating ``|C'| / sqrt(2 g (y(t) - y(t0)))`` with
    ``cos(t/2) = cos(t0/2) sin(phi)`` gives
    ``2 sqrt(a/g) arccos(cos(t1/2) / cos(t0/2))``, which equals ``pi sqrt(a/g)``
    for ``t1 = pi`` whatever the start.
    """
    if not g > 0:
        raise DomainError("g must be positive")
    if not c.y_down:
        raise DomainError("descent times need the slide orientation (y_down=True)")
    if not (0.0 <= t0 < math.pi or t0 == t1):
        raise DomainError("t0 must lie in [0, pi)")
    if not (t0 <= t1 <= math.pi):
        raise DomainError("t1 must lie in [t0, pi]")
    if t1 == t0:
        return 0.0
    # cos(t/2) written as sin((pi - t)/2) stays exact near the bottom.
    ratio = math.sin(0.5 * (math.pi - t1)) / math.sin(0.5 * (math.pi - t0))
    return 2.0 * math.sqrt(c.a / g) * math.acos(min(1.0, ratio))
