"""Checkerboard selection masks.

A grid mask flags which pixels the protection transform may touch. Cells of
``cell_size`` x ``cell_size`` pixels alternate 0/1 in a checkerboard, starting
with 0 at the top-left corner. Edge cells are cropped by the image border but
keep the bit of their cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridMask:
    bits: np.ndarray  # (height, width) uint8 of 0/1, read-only
    cell_size: int

    def __post_init__(self):
        if self.bits.ndim != 2 or self.bits.dtype != np.uint8:
            raise ValueError("bits must be a 2-D uint8 array")
        if self.cell_size < 1:
            raise ValueError(f"cell_size must be >= 1, got {self.cell_size}")
        if self.bits.size and int(self.bits.max()) > 1:
            raise ValueError("mask bits must be 0 or 1")

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def coverage(self) -> float:
        """Fraction of pixels carrying bit 1."""
        return float(self.bits.mean())


def generate_grid(width: int, height: int, cell_size: int) -> GridMask:
    if width < 1 or height < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {width}x{height}")
    if cell_size < 1:
        raise ValueError(f"cell_size must be >= 1, got {cell_size}")
    rows = np.arange(height, dtype=np.int64) // cell_size
    cols = np.arange(width, dtype=np.int64) // cell_size
    bits = (np.add.outer(rows, cols) & 1).astype(np.uint8)
    bits.setflags(write=False)
    return GridMask(bits=bits, cell_size=cell_size)
