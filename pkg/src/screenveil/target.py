"""Degraded-appearance renderers: blur, pixelation, contrast reduction.

These produce the image a distant onlooker is *meant* to perceive. The
protection transform elsewhere pairs the original with one of these targets;
here is only the plain image math. All three stages work per channel in
float64 or wide-int space and round half-up exactly once on the way back to
uint8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

MODE_BLUR = "blur"
MODE_PIXELATE = "pixelate"

# Identity point of the contrast curve; presets below it flatten the image.
CONTRAST_NEUTRAL = 127


@dataclass(frozen=True)
class TargetSpec:
    """How to render the onlooker-facing appearance.

    mode "blur" uses ``sigma``, mode "pixelate" uses ``blocks``; the unused
    knob must stay None. ``contrast_preset`` in [0, 127], where 127 leaves
    contrast untouched.
    """

    mode: str
    sigma: float | None = None
    blocks: int | None = None
    contrast_preset: int = CONTRAST_NEUTRAL

    def __post_init__(self):
        if self.mode == MODE_BLUR:
            if self.sigma is None or self.blocks is not None:
                raise ValueError("blur mode takes sigma and no blocks")
            if not math.isfinite(self.sigma) or self.sigma <= 0:
                raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        elif self.mode == MODE_PIXELATE:
            if self.blocks is None or self.sigma is not None:
                raise ValueError("pixelate mode takes blocks and no sigma")
            if self.blocks < 1:
                raise ValueError(f"blocks must be >= 1, got {self.blocks}")
        else:
            raise ValueError(f"unknown target mode {self.mode!r}")
        if not 0 <= self.contrast_preset <= CONTRAST_NEUTRAL:
            raise ValueError(
                f"contrast_preset must be in [0, {CONTRAST_NEUTRAL}], got {self.contrast_preset}"
            )


def _gaussian_taps(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(k * k) / (2.0 * sigma * sigma))
    taps /= taps.sum()
    return taps


def gaussian_blur(img, sigma: float):
    """Separable Gaussian blur with reflected borders (edge pixel not doubled).

    Kernel radius is ceil(3*sigma) so the tails it drops are negligible; taps
    are the sampled Gaussian, normalized to sum 1.
    """
    from .imagecore import ImageBuffer

    if not math.isfinite(sigma) or sigma <= 0:
        raise ValueError(f"sigma must be positive and finite, got {sigma}")
    taps = _gaussian_taps(sigma).astype(np.float32)
    out = cv2.sepFilter2D(img.pixels, -1, taps, taps, borderType=cv2.BORDER_REFLECT_101)
    return ImageBuffer(out)


def _block_starts(length: int, short: int, blocks: int) -> np.ndarray:
    # Block k begins at floor(k * short / blocks); integer arithmetic keeps
    # the short axis landing exactly on `blocks` blocks.
    starts = []
    k = 0
    while True:
        b = (k * short) // blocks
        if b >= length:
            break
        starts.append(b)
        k += 1
    return np.asarray(starts, dtype=np.intp)


def pixelate(img, blocks: int):
    """Mosaic: average over a grid of blocks, ``blocks`` of them along the
    shorter image dimension, same nominal block size along the longer one."""
    from .imagecore import ImageBuffer

    short = min(img.width, img.height)
    if blocks < 1:
        raise ValueError(f"blocks must be >= 1, got {blocks}")
    if blocks > short:
        raise ValueError(f"blocks {blocks} exceeds shorter dimension {short}")

    row_starts = _block_starts(img.height, short, blocks)
    col_starts = _block_starts(img.width, short, blocks)
    row_sizes = np.diff(np.append(row_starts, img.height))
    col_sizes = np.diff(np.append(col_starts, img.width))

    sums = img.pixels.astype(np.int64)
    sums = np.add.reduceat(sums, row_starts, axis=0)
    sums = np.add.reduceat(sums, col_starts, axis=1)
    counts = np.multiply.outer(row_sizes, col_sizes)[:, :, None]
    means = np.floor(sums / counts + 0.5)
    means = np.clip(means, 0, 255).astype(np.uint8)

    out = np.repeat(np.repeat(means, row_sizes, axis=0), col_sizes, axis=1)
    return ImageBuffer(out)


def _contrast_lut(preset: int) -> np.ndarray:
    if not 0 <= preset <= CONTRAST_NEUTRAL:
        raise ValueError(f"contrast preset must be in [0, {CONTRAST_NEUTRAL}], got {preset}")
    c = preset - CONTRAST_NEUTRAL
    alpha = 131.0 * (c + 127.0) / (127.0 * (131.0 - c))
    gamma = 127.0 * (1.0 - alpha)
    values = np.arange(256, dtype=np.float64) * alpha + gamma
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def adjust_contrast(img, preset: int):
    """Compress values toward mid-gray 127. Preset 127 is the identity; lower
    presets flatten harder. 127 itself maps to 127 at every preset."""
    from .imagecore import ImageBuffer

    lut = _contrast_lut(preset)
    return ImageBuffer(lut[img.pixels])


def render_target(img, spec: TargetSpec):
    """Full target appearance: blur or pixelate, then optional contrast cut."""
    if spec.mode == MODE_BLUR:
        out = gaussian_blur(img, spec.sigma)
    else:
        out = pixelate(img, spec.blocks)
    if spec.contrast_preset < CONTRAST_NEUTRAL:
        out = adjust_contrast(out, spec.contrast_preset)
    return out
