"""Rays through horizontal layers whose speed grows with depth as ``sqrt(2 g y)``.

Each layer has constant speed, so the ray is straight inside it; at every
interface Snell's relation keeps ``v_i / sin(alpha_i)`` equal to one constant
``c`` (angles measured from the vertical). As the layers get thinner the
polyline approaches the cycloid with ``a = c^2 / (4 g)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .curves import PlanarCurve
from .cycloid import Cycloid, FitTarget, fit
from .errors import DomainError, ShootingError, TurningPointError, UnsupportedTargetError


@dataclass(frozen=True)
class LayeredMedium:
    """``layer_count`` slabs of equal thickness between depth 0 and ``depth``.

    The speed of layer ``i`` is taken at its mid-depth ``(i + 1/2) * depth / N``.
    """

    depth: float
    layer_count: int
    g: float = 9.81

    def __post_init__(self):
        if not self.depth > 0:
            raise DomainError("depth must be positive")
        if self.layer_count < 1:
            raise DomainError("layer_count must be at least 1")
        if not self.g > 0:
            raise DomainError("g must be positive")

    @property
    def thickness(self) -> float:
        return self.depth / self.layer_count

    @property
    def interfaces(self) -> np.ndarray:
        """Depths of the layer boundaries, top to bottom (``N + 1`` values)."""
        return np.linspace(0.0, self.depth, self.layer_count + 1)

    @property
    def midpoints(self) -> np.ndarray:
        return (np.arange(self.layer_count) + 0.5) * self.thickness

    @property
    def speeds(self) -> np.ndarray:
        return np.sqrt(2.0 * self.g * self.midpoints)


@dataclass(frozen=True)
class RayPath:
    vertices: np.ndarray
    snell_constant: float
    angles: np.ndarray = field(repr=False)
    speeds: np.ndarray = field(repr=False)

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def snell_residual(self) -> float:
        """``max_i |sin(alpha_i) / v_i - 1 / c|`` with the sines measured from the vertices."""
        steps = np.diff(self.vertices, axis=0)
        sines = steps[:, 0] / np.hypot(steps[:, 0], steps[:, 1])
        return float(np.max(np.abs(sines / self.speeds - 1.0 / self.snell_constant)))

    def to_curve(self) -> PlanarCurve:
        """Polyline parametrized by depth (the curve CSV schema applies)."""
        return PlanarCurve(self.vertices[:, 1], self.vertices)


def _advance(medium: LayeredMedium, c: float) -> tuple[np.ndarray, np.ndarray]:
    sines = medium.speeds / c
    if np.any(sines >= 1.0):
        raise TurningPointError(c * c / (2.0 * medium.g))
    return sines, medium.thickness * sines / np.sqrt((1.0 - sines) * (1.0 + sines))


def trace_ray(medium: LayeredMedium, c: float) -> RayPath:
    """Follow the ray with Snell constant ``c`` from the origin to the bottom."""
    if not c > 0:
        raise DomainError("Snell constant must be positive")
    sines, dx = _advance(medium, c)
    xs = np.concatenate([[0.0], np.cumsum(dx)])
    vertices = np.stack([xs, medium.interfaces], axis=-1)
    return RayPath(vertices, float(c), np.arcsin(sines), medium.speeds)


def shoot(target: FitTarget, medium_n: int, g: float = 9.81, xtol: float = 1e-9) -> tuple[float, RayPath]:
    """Find the Snell constant whose ray through ``medium_n`` layers ends at ``B``."""
    if not target.monotone:
        raise UnsupportedTargetError(
            "target needs b2 >= 2*b1/pi: a descending ray cannot reach it without turning"
        )
    if target.b2 == 0:
        raise UnsupportedTargetError("target at zero depth cannot be reached by a descending ray")
    medium = LayeredMedium(target.b2, medium_n, g)

    def reach(c: float) -> float:
        return float(np.sum(_advance(medium, c)[1]))

    # reach() falls monotonically from +inf (just above the deepest speed) to 0.
    lo = float(medium.speeds[-1]) * (1.0 + 4 * np.finfo(float).eps)
    if reach(lo) < target.b1:
        raise ShootingError("cannot bracket the Snell constant: target too far to the side")
    hi = 2.0 * lo
    while reach(hi) > target.b1:
        hi *= 2.0
        if hi > 1e300:
            raise ShootingError("cannot bracket the Snell constant")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if reach(mid) > target.b1:
            lo = mid
        else:
            hi = mid
    c = lo if abs(reach(lo) - target.b1) <= abs(reach(hi) - target.b1) else hi
    path = trace_ray(medium, c)
    if abs(path.end[0] - target.b1) > xtol:
        raise ShootingError(f"terminal x misses b1 by {abs(path.end[0] - target.b1):.3g}")
    return c, path


def distance_to_cycloid(points: np.ndarray, cycloid: Cycloid, t_max: float) -> np.ndarray:
    """Euclidean distance from each point to the arc ``t in [0, t_max]``.

    A dense lookup seeds Newton's method on ``(C(t) - p) . C'(t) = 0``.
    """
    points = np.asarray(points, dtype=float)
    grid = np.linspace(0.0, t_max, 20001)
    tree = cKDTree(cycloid.point(grid))
    _, idx = tree.query(points)
    t = grid[idx]
    for _ in range(20):
        diff = cycloid.point(t) - points
        vel = cycloid.velocity(t)
        g1 = np.sum(diff * vel, axis=-1)
        g2 = np.sum(vel * vel, axis=-1) + np.sum(diff * cycloid.acceleration(t), axis=-1)
        step = np.where(g2 > 0, g1 / np.where(g2 > 0, g2, 1.0), 0.0)
        t = np.clip(t - step, 0.0, t_max)
    return np.linalg.norm(cycloid.point(t) - points, axis=-1)


def sup_deviation(path: RayPath, target: FitTarget) -> float:
    a, t_b = fit(target)
    return float(np.max(distance_to_cycloid(path.vertices, Cycloid(a, y_down=True), t_b)))


def convergence_report(target: FitTarget, n_list: Sequence[int], g: float = 9.81) -> list[tuple[int, float]]:
    """Sup distance between the shot ray and the fitted cycloid for each layer count."""
    report = []
    for n in n_list:
        _, path = shoot(target, int(n), g)
        report.append((int(n), sup_deviation(path, target)))
    return report


def convergence_csv(report) -> str:
    lines = ["N,sup_deviation"] + [f"{n},{d!r}" for n, d in report]
    return "\n".join(lines) + "\n"


def loglog_slope(report) -> float:
    """Least-squares slope of ``log(deviation)`` against ``log(N)``."""
    n = np.log([r[0] for r in report])
    d = np.log([r[1] for r in report])
    return float(np.polyfit(n, d, 1)[0])


def limit_radius(c: float, g: float = 9.81) -> float:
    """Radius of the cycloid the continuous limit produces, ``c^2 / (4 g)``."""
    return c * c / (4.0 * g)
