"""Viewing-geometry math.

Relates physical setup (viewer distance, display pixel density) to what a
human eye can actually resolve. Three results feed the rest of the pipeline:

* apparent angular size of an object at a distance,
* the grid cell size in pixels below which cell structure is invisible to a
  viewer at a given distance,
* the linear downscale factor that maps the legitimate user's view to a
  farther onlooker's view of the same display.

Distances and diagonals are in inches, angles in degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Angular resolving power of typical human vision: objects subtending less
# than about one arcminute of visual angle blend together.
RESOLVING_POWER_DEG = 0.0167


@dataclass(frozen=True)
class ViewingGeometry:
    """A viewer in front of a display.

    ``font_term`` scales the resolvable cell for content rendered larger or
    smaller than the reference interface text size (1.0 = reference).
    """

    distance_in: float
    ppi: float
    font_term: float = 1.0
    resolving_power_deg: float = RESOLVING_POWER_DEG

    def __post_init__(self):
        for field in ("distance_in", "ppi", "font_term", "resolving_power_deg"):
            value = getattr(self, field)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{field} must be positive and finite, got {value}")


@dataclass(frozen=True)
class DisplaySpec:
    """Physical screen: diagonal in inches plus native pixel dimensions."""

    diagonal_in: float
    width_px: int
    height_px: int

    def __post_init__(self):
        if not math.isfinite(self.diagonal_in) or self.diagonal_in <= 0:
            raise ValueError(f"diagonal_in must be positive, got {self.diagonal_in}")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError(f"pixel dimensions must be >= 1, got {self.width_px}x{self.height_px}")

    @property
    def ppi(self) -> float:
        return math.hypot(self.width_px, self.height_px) / self.diagonal_in


def angular_diameter(object_size_in: float, distance_in: float) -> float:
    """Visual angle, in degrees, of an object seen face-on.

    Standard perspective relation: delta = 2*atan(size / (2*distance)).
    """
    if object_size_in <= 0 or distance_in <= 0:
        raise ValueError("object size and distance must be positive")
    return math.degrees(2.0 * math.atan2(object_size_in, 2.0 * distance_in))


def optimal_grid_size(geom: ViewingGeometry) -> tuple[float, int]:
    """Largest grid cell invisible from ``geom.distance_in``, in device pixels.

    The resolving power bounds the visual angle a cell may subtend; converting
    that angle back to physical size at the viewer's distance and then to
    pixels through the display density gives

        g = ppi * 2 * d * tan(alpha / 2) * font_term.

    Returns ``(g_real, g_int)`` where g_int is g_real rounded half-up and
    floored at 1 so a usable cell always exists.
    """
    half_angle = math.radians(geom.resolving_power_deg) / 2.0
    g_real = geom.ppi * 2.0 * geom.distance_in * math.tan(half_angle) * geom.font_term
    g_int = max(1, math.floor(g_real + 0.5))
    return g_real, g_int


def downscale_factor(user_distance_in: float, surfer_distance_in: float, display: DisplaySpec) -> float:
    """Linear shrink factor between the user's and an onlooker's view.

    Both viewers look at the same physical display; the ratio of the angular
    sizes it subtends from their distances is how many times smaller the
    display appears to the farther viewer. Rounded half-up to 2 decimals.
    """
    if user_distance_in <= 0 or surfer_distance_in <= 0:
        raise ValueError("distances must be positive")
    if surfer_distance_in <= user_distance_in:
        raise ValueError(
            f"onlooker must be farther than the user "
            f"({surfer_distance_in} <= {user_distance_in})"
        )
    near = angular_diameter(display.diagonal_in, user_distance_in)
    far = angular_diameter(display.diagonal_in, surfer_distance_in)
    factor = near / far
    return math.floor(factor * 100.0 + 0.5) / 100.0
