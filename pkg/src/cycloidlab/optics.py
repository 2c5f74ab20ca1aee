"""Reflection and refraction at a flat horizontal interface.

Angles are measured from the interface normal (the vertical).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TotalInternalReflectionError


@dataclass(frozen=True)
class Interface:
    """The line ``y = y0`` with speed ``v_above`` over it and ``v_below`` under it."""

    y0: float
    v_above: float
    v_below: float

    def __post_init__(self):
        if not (self.v_above > 0 and self.v_below > 0):
            raise DomainError("speeds must be positive")


def reflect(A, B, mirror_y: float) -> np.ndarray:
    """Point on the mirror ``y = mirror_y`` where the ray from ``A`` to ``B`` reflects.

    ``B`` is replaced by its mirror image ``B'``; the straight segment from
    ``A`` to ``B'`` crosses the mirror at the reflection point.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    ha, hb = A[1] - mirror_y, B[1] - mirror_y
    if ha * hb <= 0:
        raise DomainError("A and B must lie strictly on the same side of the mirror")
    b_image = np.array([B[0], mirror_y - hb])
    lam = ha / (ha + hb)
    p = A + lam * (b_image - A)
    p[1] = mirror_y
    return p


def mirror_image(B, mirror_y: float) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    return np.array([B[0], 2.0 * mirror_y - B[1]])


def refract(alpha1: float, v1: float, v2: float) -> float:
    """Refraction angle from ``sin(alpha1) / v1 = sin(alpha2) / v2``."""
    if not 0.0 <= alpha1 < math.pi / 2:
        raise DomainError("incidence angle must lie in [0, pi/2)")
    if not (v1 > 0 and v2 > 0):
        raise DomainError("speeds must be positive")
    sine = v2 * math.sin(alpha1) / v1
    if sine > 1.0:
        raise TotalInternalReflectionError(sine)
    return math.asin(sine)


def travel_time(A, B, x, interface: Interface) -> np.ndarray:
    """Time along the broken path ``A -> (x, y0) -> B``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    x = np.asarray(x, dtype=float)
    y0 = interface.y0
    return np.hypot(x - A[0], y0 - A[1]) / interface.v_above + np.hypot(B[0] - x, B[1] - y0) / interface.v_below


def snell_point(A, B, interface: Interface) -> np.ndarray:
    """Fastest crossing point, by bisection on the derivative of the (convex) travel time."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    y0 = interface.y0

    def slope(x: float) -> float:
        da = math.hypot(x - A[0], y0 - A[1])
        db = math.hypot(B[0] - x, B[1] - y0)
        return (x - A[0]) / (interface.v_above * da) - (B[0] - x) / (interface.v_below * db)

    lo, hi = min(A[0], B[0]), max(A[0], B[0])
    if lo == hi:
        return np.array([lo, y0])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if slope(mid) > 0:
            hi = mid
        else:
            lo = mid
    return np.array([0.5 * (lo + hi), y0])


@dataclass(frozen=True)
class FermatCertificate:
    P: np.ndarray
    min_time: float
    samples_checked: int
    max_violation: float
    sine_ratio_residual: float

    @property
    def holds(self) -> bool:
        return self.samples_checked > 0 and self.max_violation < 0

    def to_dict(self) -> dict:
        return {
            "P": [float(v) for v in self.P],
            "min_time": self.min_time,
            "samples_checked": self.samples_checked,
            "max_violation": self.max_violation,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def fermat_certificate(A, B, interface: Interface, sample_count: int = 1000) -> FermatCertificate:
    """Check that every other crossing point ``Q`` is slower than the Snell point ``P``.

    ``Q`` runs over ``sample_count`` points of a symmetric window around ``P``
    whose half-width is twice the configuration's extent; ``Q = P`` is never
    sampled. ``max_violation`` is ``max(t(P) - t(Q))`` and must be negative.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if not (A[1] > interface.y0 > B[1]):
        raise DomainError("A must lie above and B below the interface")
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    P = snell_point(A, B, interface)
    t_min = float(travel_time(A, B, P[0], interface))

    extent = max(abs(A[0] - B[0]), A[1] - interface.y0, interface.y0 - B[1])
    half = sample_count // 2
    # Offsets +-(k - 1/2) * h keep every sample at least h/2 away from P.
    h = 4.0 * extent / sample_count
    k = np.arange(1, sample_count - half + 1)
    offsets = np.concatenate([-(np.arange(1, half + 1) - 0.5) * h, (k - 0.5) * h])
    times = travel_time(A, B, P[0] + offsets, interface)

    sin1 = abs(P[0] - A[0]) / math.hypot(P[0] - A[0], A[1] - interface.y0)
    sin2 = abs(B[0] - P[0]) / math.hypot(B[0] - P[0], B[1] - interface.y0)
    residual = abs(sin1 / interface.v_above - sin2 / interface.v_below)
    return FermatCertificate(P, t_min, int(offsets.size), float(np.max(t_min - times)), residual)


def _common_tangent_angle(centers_x: np.ndarray, radii: np.ndarray) -> tuple[float, float]:
    """Inclination of the line tangent to the circles on the side away from the interface.

    The circles are centered on the interface. Returns the angle and the
    largest distance mismatch over all circles.
    """
    span = centers_x[-1] - centers_x[0]
    shrink = (radii[0] - radii[-1]) / span
    if shrink > 1.0:
        raise TotalInternalReflectionError(shrink)
    # Unit normal (n_x, n_y) of the line, pointing from the line toward the centers.
    n_x = -shrink
    n_y = math.sqrt(max(0.0, 1.0 - shrink * shrink))
    offset = n_x * centers_x[0] - radii[0]
    mismatch = np.max(np.abs(n_x * centers_x - offset - radii))
    return math.atan2(-n_x, n_y), float(mismatch)


def _wavelet_angle(front_angle: float, v_in: float, v_out: float, dt: float, seeds: int) -> tuple[float, float]:
    if not 0.0 <= front_angle < math.pi / 2:
        raise DomainError("front angle must lie in [0, pi/2)")
    if not dt > 0:
        raise DomainError("dt must be positive")
    # Seeds at unit spacing; the front reaches seed x at time x * sin(angle) / v_in.
    xs = np.linspace(0.0, 1.0, seeds)
    arrival = xs * math.sin(front_angle) / v_in
    observe = arrival[-1] + dt
    radii = v_out * (observe - arrival)
    return _common_tangent_angle(xs, radii)


def huygens_refraction(front_angle: float, interface: Interface, dt: float = 1.0, seeds: int = 9) -> float:
    """Refracted front inclination built from elementary waves.

    A plane front inclined at ``front_angle`` sweeps along the interface;
    each point it reaches emits a circle growing at ``v_below``. ``dt`` after
    the front reaches the last seed, the common tangent of those circles is
    the refracted front. Its inclination equals :func:`refract`.
    """
    angle, _ = _wavelet_angle(front_angle, interface.v_above, interface.v_below, dt, seeds)
    return angle


def huygens_reflection(front_angle: float, v: float, dt: float = 1.0, seeds: int = 9) -> float:
    """Reflected front inclination: the same wavelets grow back into the first medium at ``v``."""
    angle, _ = _wavelet_angle(front_angle, v, v, dt, seeds)
    return angle


def wavelet_tangency_mismatch(front_angle: float, interface: Interface, dt: float = 1.0, seeds: int = 9) -> float:
    """Largest gap between the constructed front and any intermediate wavelet."""
    _, mismatch = _wavelet_angle(front_angle, interface.v_above, interface.v_below, dt, seeds)
    return mismatch
