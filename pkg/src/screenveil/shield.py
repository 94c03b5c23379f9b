"""The protection transform.

On grid-selected pixels the image is pushed *past* the target so that the
original and the transformed value average back to the target under spatial
pooling: for input v and target t the replacement is

    sqrt(max(0, 2*t^2 - v^2)), rounded half-up, clamped to [0, 255].

A close viewer resolves individual pixels and reads the original through the
untouched half of the checkerboard; a distant viewer's eye pools neighboring
pixels, and the root-mean-square of (kept, replaced) pairs reproduces the
target appearance. Channels where the value clamps at 0 or 255 cannot honor
the pairing exactly; everything else lands within one count of it.

All 65536 (input, target) combinations are precomputed exactly once into a
lookup table; applying the transform is then a pure gather, so results are
byte-identical no matter the backend or thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .grid import generate_grid
from .imagecore import ImageBuffer
from .target import (
    CONTRAST_NEUTRAL,
    MODE_BLUR,
    MODE_PIXELATE,
    TargetSpec,
    adjust_contrast,
    gaussian_blur,
    pixelate,
)

DEFAULT_GRID_CELL = 1
DEFAULT_SIGMA = 8.0


@dataclass(frozen=True)
class ProtectParams:
    """Complete recipe: target appearance plus grid cell size."""

    target: TargetSpec
    grid_cell: int = DEFAULT_GRID_CELL

    def __post_init__(self):
        if self.grid_cell < 1:
            raise ValueError(f"grid cell must be >= 1, got {self.grid_cell}")


# Named strength levels, strongest first. Grid cell stays 1 so the pattern is
# invisible even with the onlooker nearly at the user's shoulder.
PRESETS: dict[str, ProtectParams] = {
    "full": ProtectParams(TargetSpec(MODE_BLUR, sigma=24.0, contrast_preset=80)),
    "strong": ProtectParams(TargetSpec(MODE_BLUR, sigma=20.0, contrast_preset=100)),
    "moderate": ProtectParams(TargetSpec(MODE_BLUR, sigma=16.0, contrast_preset=115)),
    "weak": ProtectParams(TargetSpec(MODE_BLUR, sigma=8.0, contrast_preset=CONTRAST_NEUTRAL)),
}


def preset_params(name: str) -> ProtectParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"preset: unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


@lru_cache(maxsize=1)
def _pair_lut() -> np.ndarray:
    """Flat 65536-entry table; entry v*256 + t holds the replacement byte."""
    v = np.arange(256, dtype=np.int64)[:, None]
    t = np.arange(256, dtype=np.int64)[None, :]
    radicand = np.maximum(2 * t * t - v * v, 0).astype(np.float64)
    lut = np.clip(np.floor(np.sqrt(radicand) + 0.5), 0, 255).astype(np.uint8)
    lut = np.ascontiguousarray(lut.reshape(-1))
    lut.setflags(write=False)
    return lut


_numba_kernel = None
_numba_failed = False


def _get_numba_kernel():
    global _numba_kernel, _numba_failed
    if _numba_kernel is not None or _numba_failed:
        return _numba_kernel
    try:
        import numba
    except ImportError:
        _numba_failed = True
        return None

    @numba.njit(cache=True, nogil=True)
    def kernel(px, bits, tpx, lut, out):
        h, w, c = px.shape
        for i in range(h):
            for j in range(w):
                if bits[i, j]:
                    for k in range(c):
                        out[i, j, k] = lut[np.uint32(px[i, j, k]) * np.uint32(256) + np.uint32(tpx[i, j, k])]
                else:
                    for k in range(c):
                        out[i, j, k] = px[i, j, k]
        return out

    # Warm the compile on a tiny input so first real frame is not charged.
    kernel(
        np.zeros((1, 1, 3), np.uint8),
        np.zeros((1, 1), np.uint8),
        np.zeros((1, 1, 3), np.uint8),
        _pair_lut(),
        np.zeros((1, 1, 3), np.uint8),
    )
    _numba_kernel = kernel
    return kernel


def _pair_numpy(px: np.ndarray, bits: np.ndarray, tpx: np.ndarray) -> np.ndarray:
    lut2d = _pair_lut().reshape(256, 256)
    out = lut2d[px, tpx]
    keep = bits == 0
    out[keep] = px[keep]
    return out


def protect(img: ImageBuffer, mask, target: ImageBuffer, threads: int = 1) -> ImageBuffer:
    """Apply the pairing transform on mask bit 1, pass through on bit 0.

    ``threads`` splits the image into row bands; output bytes are identical
    for any thread count because every pixel is an independent table lookup.
    """
    if not isinstance(threads, int) or threads < 1:
        raise ValueError(f"threads must be a positive integer, got {threads}")
    if (img.height, img.width) != (mask.height, mask.width):
        raise ValueError(
            f"mask {mask.width}x{mask.height} does not match image {img.width}x{img.height}"
        )
    if img.shape != target.shape:
        raise ValueError(
            f"target {target.width}x{target.height} does not match image {img.width}x{img.height}"
        )

    kernel = _get_numba_kernel()
    if kernel is None:
        return ImageBuffer(_pair_numpy(img.pixels, mask.bits, target.pixels))

    px, bits, tpx, lut = img.pixels, mask.bits, target.pixels, _pair_lut()
    out = np.empty_like(px)
    bands = min(threads, img.height)
    if bands == 1:
        kernel(px, bits, tpx, lut, out)
    else:
        edges = np.linspace(0, img.height, bands + 1, dtype=np.intp)
        with ThreadPoolExecutor(max_workers=bands) as pool:
            futures = [
                pool.submit(kernel, px[a:b], bits[a:b], tpx[a:b], lut, out[a:b])
                for a, b in zip(edges[:-1], edges[1:])
                if b > a
            ]
            for f in futures:
                f.result()
    return ImageBuffer(out)


def protect_with_params(img: ImageBuffer, params: ProtectParams, threads: int = 1) -> ImageBuffer:
    """Render the target from the image, then pair against it.

    When the recipe lowers contrast, both the degraded target and the original
    get the same contrast cut before pairing, so kept pixels and replaced
    pixels pool toward the same flattened appearance.
    """
    spec = params.target
    if spec.mode == MODE_BLUR:
        degraded = gaussian_blur(img, spec.sigma)
    else:
        degraded = pixelate(img, spec.blocks)
    if spec.contrast_preset < CONTRAST_NEUTRAL:
        degraded = adjust_contrast(degraded, spec.contrast_preset)
        base = adjust_contrast(img, spec.contrast_preset)
    else:
        base = img
    mask = generate_grid(img.width, img.height, params.grid_cell)
    return protect(base, mask, degraded, threads=threads)


def params_from_mapping(raw: dict) -> ProtectParams:
    """Build ProtectParams from a plain dict (CLI flags, JSON request bodies).

    Either ``preset`` (optionally with ``grid``) or manual keys ``mode`` /
    ``sigma`` / ``blocks`` / ``contrast`` / ``grid``; mixing both is refused
    so a request always has one unambiguous meaning. Error messages start
    with the offending field name.
    """
    if not isinstance(raw, dict):
        raise ValueError("params: expected an object")
    known = {"preset", "mode", "sigma", "blocks", "grid", "contrast"}
    for key in raw:
        if key not in known:
            raise ValueError(f"{key}: unknown parameter")

    grid = raw.get("grid", DEFAULT_GRID_CELL)
    if not isinstance(grid, int) or isinstance(grid, bool) or grid < 1:
        raise ValueError(f"grid: must be an integer >= 1, got {grid!r}")

    if "preset" in raw:
        manual = {"mode", "sigma", "blocks", "contrast"} & raw.keys()
        if manual:
            raise ValueError(f"preset: cannot be combined with {sorted(manual)[0]}")
        base = preset_params(raw["preset"] if isinstance(raw["preset"], str) else "")
        return replace(base, grid_cell=grid)

    mode = raw.get("mode", MODE_BLUR)
    if mode not in (MODE_BLUR, MODE_PIXELATE):
        raise ValueError(f"mode: must be 'blur' or 'pixelate', got {mode!r}")

    contrast = raw.get("contrast", CONTRAST_NEUTRAL)
    if not isinstance(contrast, int) or isinstance(contrast, bool) or not 0 <= contrast <= CONTRAST_NEUTRAL:
        raise ValueError(f"contrast: must be an integer in [0, {CONTRAST_NEUTRAL}], got {contrast!r}")

    if mode == MODE_BLUR:
        if "blocks" in raw:
            raise ValueError("blocks: not valid in blur mode")
        sigma = raw.get("sigma", DEFAULT_SIGMA)
        if isinstance(sigma, bool) or not isinstance(sigma, (int, float)) or not sigma > 0:
            raise ValueError(f"sigma: must be a positive number, got {sigma!r}")
        spec = TargetSpec(MODE_BLUR, sigma=float(sigma), contrast_preset=contrast)
    else:
        if "sigma" in raw:
            raise ValueError("sigma: not valid in pixelate mode")
        blocks = raw.get("blocks")
        if not isinstance(blocks, int) or isinstance(blocks, bool) or blocks < 1:
            raise ValueError(f"blocks: must be an integer >= 1, got {blocks!r}")
        spec = TargetSpec(MODE_PIXELATE, blocks=blocks, contrast_preset=contrast)
    return ProtectParams(target=spec, grid_cell=grid)


def params_to_mapping(params: ProtectParams) -> dict:
    """Canonical plain-dict form of a recipe (inverse of params_from_mapping)."""
    spec = params.target
    out = {"mode": spec.mode, "grid": params.grid_cell, "contrast": spec.contrast_preset}
    if spec.mode == MODE_BLUR:
        out["sigma"] = spec.sigma
    else:
        out["blocks"] = spec.blocks
    return out
