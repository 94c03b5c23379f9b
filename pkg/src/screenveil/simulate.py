"""Onlooker view simulation.

A viewer at several times the user's distance cannot resolve single pixels;
their retina pools them. Box (area-average) downscaling models that pooling:
each output pixel is the exact area-weighted mean of the source region it
covers, including fractional rows/columns at region edges, so non-integer
factors carry no alignment bias. Accumulation happens in float64 and the
result is rounded half-up once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DisplaySpec, downscale_factor
from .imagecore import ImageBuffer


@dataclass(frozen=True)
class ViewSimSpec:
    """Linear shrink applied to mimic a farther viewer. Factor must exceed 1
    (an onlooker at or nearer than the user needs no simulation)."""

    linear_factor: float

    def __post_init__(self):
        if not math.isfinite(self.linear_factor) or self.linear_factor <= 1.0:
            raise ValueError(f"linear factor must be > 1, got {self.linear_factor}")


def _axis_area_sums(arr: np.ndarray, out_len: int, axis: int):
    """Sum ``arr`` over out_len equal fractional spans along ``axis``.

    Returns (sums, span) where span is the constant source extent per output
    cell. Uses a prefix sum sampled at fractional span edges; for integer
    spans the interpolation weight is exactly zero, so those reductions are
    exact in float64.
    """
    arr = np.moveaxis(arr, axis, 0)
    in_len = arr.shape[0]
    cum = np.empty((in_len + 1,) + arr.shape[1:], dtype=np.float64)
    cum[0] = 0.0
    np.cumsum(arr, axis=0, out=cum[1:])

    span = in_len / out_len
    edges = np.arange(out_len + 1, dtype=np.float64) * span
    lo = np.minimum(edges.astype(np.intp), in_len)
    frac = edges - lo
    hi = np.minimum(lo + 1, in_len)
    shape = (-1,) + (1,) * (arr.ndim - 1)
    sampled = cum[lo] + frac.reshape(shape) * (cum[hi] - cum[lo])
    sums = np.diff(sampled, axis=0)
    return np.moveaxis(sums, 0, axis), span


def downscale_view(img: ImageBuffer, factor: float) -> ImageBuffer:
    """Shrink by ``factor`` (> 1) with exact box averaging.

    Output dimensions are the source dimensions over the factor, rounded
    half-up; a factor that would leave no pixels is an error.
    """
    if not math.isfinite(factor) or factor <= 1.0:
        raise ValueError(f"downscale factor must be > 1, got {factor}")
    out_w = math.floor(img.width / factor + 0.5)
    out_h = math.floor(img.height / factor + 0.5)
    if out_w < 1 or out_h < 1:
        raise ValueError(f"factor {factor} reduces {img.width}x{img.height} below one pixel")

    sums, span_h = _axis_area_sums(img.pixels.astype(np.float64), out_h, axis=0)
    sums, span_w = _axis_area_sums(sums, out_w, axis=1)
    means = sums / (span_h * span_w)
    out = np.clip(np.floor(means + 0.5), 0, 255).astype(np.uint8)
    return ImageBuffer(out)


def simulate_surfer(
    img: ImageBuffer,
    user_distance_in: float,
    surfer_distance_in: float,
    display: DisplaySpec,
) -> ImageBuffer:
    """Render the image as an onlooker at ``surfer_distance_in`` sees it."""
    factor = downscale_factor(user_distance_in, surfer_distance_in, display)
    return downscale_view(img, ViewSimSpec(factor).linear_factor)
