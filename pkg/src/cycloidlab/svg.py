"""Minimal self-contained SVG figures.

One meter maps to 100 user units (pixels). The viewBox is fitted to the
content with a 5% margin on every side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

import numpy as np

PX_PER_METER = 100.0
MARGIN = 0.05


def _num(v: float) -> str:
    return f"{v:.9g}"


@dataclass
class Figure:
    """Collects shapes in meters; ``y_up`` flips y so that up is up on screen."""

    y_up: bool = True
    _items: list = field(default_factory=list)
    _extent: list = field(default_factory=list)

    def _map(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float)) * PX_PER_METER
        if self.y_up:
            pts = pts * np.array([1.0, -1.0])
        return pts

    def polyline(self, pts, stroke: str = "black", width: float = 1.5, closed: bool = False, label: str | None = None):
        p = self._map(pts)
        self._extent.append(p)
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in p)
        tag = "polygon" if closed else "polyline"
        title = f"<title>{label}</title>" if label else ""
        self._items.append(
            f'<{tag} points="{coords}" fill="none" stroke={quoteattr(stroke)} stroke-width="{_num(width)}">{title}</{tag}>'
        )

    def circle(self, center, radius: float, stroke: str = "gray", width: float = 0.75):
        (cx, cy), = self._map(center)
        r = abs(radius) * PX_PER_METER
        self._extent.append(np.array([[cx - r, cy - r], [cx + r, cy + r]]))
        self._items.append(
            f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}" fill="none" stroke={quoteattr(stroke)} stroke-width="{_num(width)}"/>'
        )

    def marker(self, point, color: str = "red", size: float = 3.0):
        (cx, cy), = self._map(point)
        self._extent.append(np.array([[cx, cy]]))
        self._items.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(size)}" fill={quoteattr(color)}/>')

    def viewbox(self) -> tuple[float, float, float, float]:
        if not self._extent:
            return (0.0, 0.0, 1.0, 1.0)
        allp = np.vstack(self._extent)
        lo, hi = allp.min(axis=0), allp.max(axis=0)
        size = np.maximum(hi - lo, 1e-9)
        pad = MARGIN * size
        lo, size = lo - pad, size + 2 * pad
        return (float(lo[0]), float(lo[1]), float(size[0]), float(size[1]))

    def to_string(self) -> str:
        x, y, w, h = self.viewbox()
        head = (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{_num(w)}" height="{_num(h)}" viewBox="{_num(x)} {_num(y)} {_num(w)} {_num(h)}">'
        )
        return "\n".join([head, *self._items, "</svg>"]) + "\n"
