"""Checkerboard grid mask tests."""

import numpy as np
import pytest

from screenveil.grid import GridMask, generate_grid


def test_unit_cell_pattern():
    mask = generate_grid(4, 4, 1)
    expected = np.array(
        [
            [0, 1, 0, 1],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [1, 0, 1, 0],
        ],
        dtype=np.uint8,
    )
    assert np.array_equal(mask.bits, expected)


def test_two_pixel_cells():
    mask = generate_grid(4, 4, 2)
    expected = np.array(
        [
            [0, 0, 1, 1],
            [0, 0, 1, 1],
            [1, 1, 0, 0],
            [1, 1, 0, 0],
        ],
        dtype=np.uint8,
    )
    assert np.array_equal(mask.bits, expected)


def test_matches_index_formula_for_odd_sizes():
    # cells need not divide the image; direct (i//g + j//g) % 2 is the oracle
    for g in (1, 2, 3, 5):
        mask = generate_grid(7, 5, g)
        for i in range(5):
            for j in range(7):
                assert mask.bits[i, j] == (i // g + j // g) % 2


def test_origin_cell_is_kept():
    # bit 0 = passthrough; the top-left cell must be kept so a close viewer
    # always has original pixels to anchor on
    for g in (1, 3, 4):
        assert generate_grid(8, 8, g).bits[0, 0] == 0


def test_coverage_is_half_on_even_tilings():
    assert generate_grid(8, 8, 1).coverage() == 0.5
    assert generate_grid(8, 8, 2).coverage() == 0.5
    # odd tilings drift from exactly one half, but stay close
    assert abs(generate_grid(9, 9, 2).coverage() - 0.5) < 0.1


def test_dimensions_and_properties():
    mask = generate_grid(6, 3, 2)
    assert mask.width == 6
    assert mask.height == 3
    assert mask.cell_size == 2
    assert mask.bits.shape == (3, 6)
    assert mask.bits.dtype == np.uint8


def test_bits_are_read_only():
    mask = generate_grid(4, 4, 1)
    with pytest.raises(ValueError):
        mask.bits[0, 0] = 1


def test_invalid_arguments():
    with pytest.raises(ValueError):
        generate_grid(4, 4, 0)
    with pytest.raises(ValueError):
        generate_grid(0, 4, 1)
    with pytest.raises(ValueError):
        generate_grid(4, -1, 1)


def test_gridmask_validates_bits():
    with pytest.raises(ValueError):
        GridMask(np.array([[0, 2]], dtype=np.uint8), 1)
