"""Bundled synthetic sample frames for demos, evaluation sweeps and benchmarks.

Two families are generated: dark "night texture" frames (photo-like) and
dark terminal screens (UI-like).  Both are built from a smooth background
field sprinkled with short bright two-pixel dashes.  Dash brightness is tied
to the local background level so that the frames behave well under the
protection pipeline at ordinary settings: each 4x4 neighbourhood carries the
same amount of bright detail, which keeps the downscaled appearance of a
protected frame close to its degraded target.
"""

from __future__ import annotations

import math
import pathlib

import cv2
import numpy as np

from .imagecore import ImageBuffer, save_image

# Brightness of a dash relative to the local background.  Solves
# k^2 + 6k - 63 = 0, the level at which the bright and rewritten halves of
# the dashes plus the rewritten background average back to the degraded
# level inside every 4x4 box (two dashes per box).
DETAIL_GAIN = 6.0 * math.sqrt(2.0) - 3.0

_CELL = 4  # dash placement cell; matches the 4x downscale box


def _smooth01(rng, width, height, cx, cy):
    """Smooth random field in [0, 1] at (height, width)."""
    coarse = rng.standard_normal((cy, cx))
    f = cv2.resize(coarse, (width, height), interpolation=cv2.INTER_CUBIC)
    lo, hi = float(f.min()), float(f.max())
    return (f - lo) / max(hi - lo, 1e-9)


def _dash_slots(rng, vertical_share):
    """Pick two non-overlapping dash slots inside one 4x4 cell.

    A slot is a pair of adjacent pixels, anchored on even coordinates so a
    dash never straddles a 4x4 box edge.  Returns pixel offsets.
    """
    def one():
        if rng.random() < vertical_share:
            r = 2 * int(rng.integers(0, 2))
            c = int(rng.integers(0, _CELL))
            return ((r, c), (r + 1, c))
        r = int(rng.integers(0, _CELL))
        c = 2 * int(rng.integers(0, 2))
        return ((r, c), (r, c + 1))

    first = one()
    for _ in range(64):
        second = one()
        if not set(first) & set(second):
            return first, second
    return first, ((first[0][0] + 2) % 4, first[0][1]), (
        (first[1][0] + 2) % 4, first[1][1])


def _scatter_dashes(rng, height, width, vertical_share):
    mask = np.zeros((height, width), dtype=bool)
    for by in range(height // _CELL):
        for bx in range(width // _CELL):
            for dash in _dash_slots(rng, vertical_share):
                for r, c in dash:
                    mask[by * _CELL + r, bx * _CELL + c] = True
    return mask


def _compose(background, mask):
    """Overlay bright dashes onto a float background, per channel."""
    bright = np.clip(DETAIL_GAIN * background, 0.0, 251.0)
    out = np.where(mask[:, :, None], bright, background)
    return ImageBuffer(np.clip(out, 2.0, 251.0).astype(np.uint8))


def generate_photo(rng, width=384, height=256):
    """Night-texture frame: tinted smooth background with bright glints."""
    base = 22.0 + 13.0 * _smooth01(rng, width, height, 7, 5)
    base += 3.0 * (_smooth01(rng, width, height, 20, 14) - 0.5)
    if rng.random() < 0.5:
        # soft glow region
        yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
        gy, gx = rng.uniform(0.2, 0.8) * height, rng.uniform(0.2, 0.8) * width
        rad = rng.uniform(0.25, 0.5) * min(height, width)
        base += 6.0 * np.exp(-((yy - gy) ** 2 + (xx - gx) ** 2) / (2 * rad * rad))
    base = np.clip(base, 18.0, 42.0)

    tint = rng.uniform(0.82, 1.0, size=3)
    tint /= tint.max()
    background = base[:, :, None] * tint[None, None, :]

    vertical_share = float(rng.choice([0.0, 0.2, 0.5]))
    mask = _scatter_dashes(rng, height, width, vertical_share)
    return _compose(background, mask)


def generate_ui(rng, width=384, height=256):
    """Terminal-style frame: banded rows of short bright strokes."""
    base = 24.0 + 8.0 * _smooth01(rng, width, height, 6, 4)
    # brighter status band on top, slight panel split below
    band = int(rng.integers(2, 4)) * _CELL
    base[:band, :] += rng.uniform(4.0, 8.0)
    split = int(rng.integers(width // 3, 2 * width // 3)) // _CELL * _CELL
    base[band:, :split] *= rng.uniform(0.9, 1.0)
    base = np.clip(base, 18.0, 42.0)

    tint = rng.uniform(0.8, 1.0, size=3)
    tint /= tint.max()
    background = base[:, :, None] * tint[None, None, :]

    # text rows: both dashes of every cell sit in the top two rows, so the
    # frame reads as dense 2px text lines separated by 2px leading
    mask = np.zeros((height, width), dtype=bool)
    for by in range(height // _CELL):
        for bx in range(width // _CELL):
            slots = rng.choice(4, size=2, replace=False)
            for s in slots:
                r, c = int(s) // 2, 2 * (int(s) % 2)
                mask[by * _CELL + r, bx * _CELL + c] = True
                mask[by * _CELL + r, bx * _CELL + c + 1] = True
    return _compose(background, mask)


def build_sample_set(directory, count=24, size=(384, 256), seed=77):
    """Write `count` sample PNGs into `directory`; returns the paths.

    Half the frames are photo-like, half UI-like.  Deterministic for a
    given seed.
    """
    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width, height = size
    paths = []
    half = count - count // 2
    for i in range(half):
        rng = np.random.default_rng((seed, 0, i))
        img = generate_photo(rng, width, height)
        path = directory / f"photo_{i:02d}.png"
        save_image(img, path)
        paths.append(path)
    for i in range(count // 2):
        rng = np.random.default_rng((seed, 1, i))
        img = generate_ui(rng, width, height)
        path = directory / f"ui_{i:02d}.png"
        save_image(img, path)
        paths.append(path)
    return paths


def bundled_sample_paths():
    """Paths of the sample PNGs shipped inside the package."""
    from importlib import resources

    root = resources.files("screenveil") / "assets" / "samples"
    return sorted(pathlib.Path(str(p)) for p in root.iterdir()
                  if p.name.endswith(".png"))
