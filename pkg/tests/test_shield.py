"""Protection transform tests.

The pairing rule is re-derived here as plain per-pixel arithmetic and
compared against the table-driven implementation, so the two routes stay
independent.
"""

import math

import numpy as np
import pytest

from screenveil.grid import generate_grid
from screenveil.imagecore import ImageBuffer
from screenveil.shield import (
    PRESETS,
    ProtectParams,
    params_from_mapping,
    params_to_mapping,
    preset_params,
    protect,
    protect_with_params,
)
from screenveil.target import TargetSpec, adjust_contrast, gaussian_blur, render_target


def pair_reference(v, t):
    # replacement value straight from the definition, one pixel at a time
    v, t = int(v), int(t)
    val = math.sqrt(max(0.0, 2.0 * t * t - v * v))
    return min(255, max(0, math.floor(val + 0.5)))


def const_image(w, h, rgb):
    px = np.zeros((h, w, 3), dtype=np.uint8)
    px[:] = rgb
    return ImageBuffer(px)


def test_published_pairing_examples():
    # (input 100, target 120) -> 137; hard clamps at both ends
    assert pair_reference(100, 120) == 137
    img = const_image(2, 2, (100, 200, 10))
    targ = const_image(2, 2, (120, 10, 200))
    out = protect(img, generate_grid(2, 2, 1), targ).pixels
    assert tuple(out[0, 1]) == (137, 0, 255)


def test_bit0_pixels_pass_through_exactly():
    rng = np.random.default_rng(200)
    px = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    targ = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    mask = generate_grid(16, 16, 2)
    out = protect(ImageBuffer(px), mask, ImageBuffer(targ)).pixels
    keep = mask.bits == 0
    assert np.array_equal(out[keep], px[keep])


def test_bit1_pixels_match_per_pixel_reference():
    rng = np.random.default_rng(201)
    px = rng.integers(0, 256, size=(12, 10, 3), dtype=np.uint8)
    targ = rng.integers(0, 256, size=(12, 10, 3), dtype=np.uint8)
    mask = generate_grid(10, 12, 1)
    out = protect(ImageBuffer(px), mask, ImageBuffer(targ)).pixels
    for i in range(12):
        for j in range(10):
            if mask.bits[i, j]:
                for k in range(3):
                    assert out[i, j, k] == pair_reference(px[i, j, k], targ[i, j, k])


def test_rms_pairing_law_where_unclamped():
    rng = np.random.default_rng(202)
    px = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    targ = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    mask = generate_grid(32, 32, 1)
    out = protect(ImageBuffer(px), mask, ImageBuffer(targ)).pixels
    rewritten = mask.bits.astype(bool)
    v = px[rewritten].astype(np.float64)
    o = out[rewritten].astype(np.float64)
    t = targ[rewritten].astype(np.float64)
    unclamped = (o > 0) & (o < 255)
    rms = np.sqrt((v[unclamped] ** 2 + o[unclamped] ** 2) / 2.0)
    assert np.abs(rms - t[unclamped]).max() <= 1.0


def test_threads_do_not_change_bytes():
    rng = np.random.default_rng(203)
    img = ImageBuffer(rng.integers(0, 256, size=(67, 41, 3), dtype=np.uint8))
    targ = ImageBuffer(rng.integers(0, 256, size=(67, 41, 3), dtype=np.uint8))
    mask = generate_grid(41, 67, 3)
    base = protect(img, mask, targ, threads=1)
    for threads in (2, 4, 8, 16):
        assert protect(img, mask, targ, threads=threads) == base
    # more threads than rows is legal too
    tiny = ImageBuffer(rng.integers(0, 256, size=(3, 5, 3), dtype=np.uint8))
    tiny_t = ImageBuffer(rng.integers(0, 256, size=(3, 5, 3), dtype=np.uint8))
    tiny_mask = generate_grid(5, 3, 1)
    assert protect(tiny, tiny_mask, tiny_t, threads=32) == protect(tiny, tiny_mask, tiny_t)


def test_table_backend_agrees_with_plain_numpy_backend():
    from screenveil import shield

    rng = np.random.default_rng(204)
    px = rng.integers(0, 256, size=(21, 33, 3), dtype=np.uint8)
    targ = rng.integers(0, 256, size=(21, 33, 3), dtype=np.uint8)
    mask = generate_grid(33, 21, 2)
    fast = protect(ImageBuffer(px), mask, ImageBuffer(targ))
    slow = shield._pair_numpy(px, mask.bits, targ)
    assert np.array_equal(fast.pixels, slow)


def test_protect_validates_inputs():
    rng = np.random.default_rng(205)
    img = ImageBuffer(rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8))
    targ_small = ImageBuffer(rng.integers(0, 256, size=(8, 6, 3), dtype=np.uint8))
    mask = generate_grid(8, 8, 1)
    with pytest.raises(ValueError):
        protect(img, mask, targ_small)
    with pytest.raises(ValueError):
        protect(img, generate_grid(6, 8, 1), img)
    with pytest.raises(ValueError):
        protect(img, mask, img, threads=0)


def test_protect_with_params_composes_the_stages():
    rng = np.random.default_rng(206)
    img = ImageBuffer(rng.integers(0, 256, size=(30, 26, 3), dtype=np.uint8))

    params = ProtectParams(TargetSpec("blur", sigma=5.0), grid_cell=2)
    want = protect(img, generate_grid(26, 30, 2), gaussian_blur(img, 5.0))
    assert protect_with_params(img, params) == want

    # with a contrast cut, both the target and the original are flattened
    # before pairing
    params = ProtectParams(TargetSpec("blur", sigma=5.0, contrast_preset=80))
    flattened = adjust_contrast(img, 80)
    degraded = adjust_contrast(gaussian_blur(img, 5.0), 80)
    want = protect(flattened, generate_grid(26, 30, 1), degraded)
    assert protect_with_params(img, params) == want


def test_protect_with_params_deterministic_across_runs_and_threads():
    rng = np.random.default_rng(207)
    img = ImageBuffer(rng.integers(0, 256, size=(64, 48, 3), dtype=np.uint8))
    params = preset_params("moderate")
    first = protect_with_params(img, params, threads=1)
    assert protect_with_params(img, params, threads=1) == first
    assert protect_with_params(img, params, threads=4) == first
    assert protect_with_params(img, params, threads=8) == first


def test_preset_table_values():
    assert set(PRESETS) == {"full", "strong", "moderate", "weak"}
    expect = {
        "full": (24.0, 80),
        "strong": (20.0, 100),
        "moderate": (16.0, 115),
        "weak": (8.0, 127),
    }
    for name, (sigma, contrast) in expect.items():
        p = PRESETS[name]
        assert p.target.mode == "blur"
        assert p.target.sigma == sigma
        assert p.target.contrast_preset == contrast
        assert p.grid_cell == 1
    with pytest.raises(ValueError):
        preset_params("maximum")


def test_params_mapping_roundtrip():
    for raw in (
        {"mode": "blur", "sigma": 12.5, "grid": 2, "contrast": 90},
        {"mode": "pixelate", "blocks": 16, "grid": 1, "contrast": 127},
    ):
        params = params_from_mapping(raw)
        assert params_to_mapping(params) == raw
    # preset expands to its full manual form
    params = params_from_mapping({"preset": "full"})
    assert params_to_mapping(params) == {
        "mode": "blur",
        "sigma": 24.0,
        "grid": 1,
        "contrast": 80,
    }


def test_params_mapping_defaults():
    params = params_from_mapping({})
    assert params.target.mode == "blur"
    assert params.target.sigma == 8.0
    assert params.target.contrast_preset == 127
    assert params.grid_cell == 1


def test_params_mapping_field_errors():
    cases = [
        ({"preset": "weak", "sigma": 4}, "preset"),
        ({"preset": "nope"}, "preset"),
        ({"sigma": -3}, "sigma"),
        ({"sigma": "8"}, "sigma"),
        ({"mode": "pixelate"}, "blocks"),
        ({"mode": "pixelate", "blocks": 0}, "blocks"),
        ({"mode": "pixelate", "sigma": 8}, "sigma"),
        ({"mode": "blur", "blocks": 4}, "blocks"),
        ({"grid": 0}, "grid"),
        ({"grid": 1.5}, "grid"),
        ({"contrast": 128}, "contrast"),
        ({"contrast": True}, "contrast"),
        ({"mode": "invert"}, "mode"),
        ({"strength": 4}, "strength"),
    ]
    for raw, field in cases:
        with pytest.raises(ValueError) as err:
            params_from_mapping(raw)
        assert str(err.value).startswith(field), raw
