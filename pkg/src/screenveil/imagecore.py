"""8-bit RGB raster buffer and lossless image file I/O.

Everything downstream (grid pairing, blur, downscaling, metrics) operates on
``ImageBuffer``: a height x width x 3 interleaved uint8 array, row-major,
origin at the top-left. Intermediate math lives in float or wide-int numpy
arrays that may leave [0, 255]; values are clamped exactly once when a result
is written back into a buffer.

File formats: PNG (via Pillow) and binary PPM (P6), both losslessly
round-tripped. Grayscale sources are replicated across the three channels and
alpha is dropped on load, so every decoded image satisfies the same RGB8
contract.
"""

from __future__ import annotations

import hashlib
import io
import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError


class FormatError(ValueError):
    """An image file or extension this library does not handle."""


_PPM_MAXVAL = 255


class ImageBuffer:
    """Immutable RGB image with 8-bit samples.

    ``pixels`` is a read-only (height, width, 3) uint8 view; the constructor
    copies its input, so callers can keep mutating their own arrays.
    """

    __slots__ = ("_px",)

    def __init__(self, pixels):
        px = np.asarray(pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected a (height, width, 3) array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"image dimensions must be at least 1x1, got {px.shape[1]}x{px.shape[0]}")
        if px.dtype != np.uint8:
            raise ValueError(f"expected uint8 samples, got {px.dtype}")
        px = np.ascontiguousarray(px).copy()
        px.setflags(write=False)
        self._px = px

    @classmethod
    def from_bytes(cls, width: int, height: int, data: bytes) -> "ImageBuffer":
        """Build a buffer from raw interleaved RGB bytes (row-major)."""
        expected = width * height * 3
        if len(data) != expected:
            raise ValueError(
                f"need {expected} bytes for {width}x{height} RGB, got {len(data)}"
            )
        arr = np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3)
        return cls(arr)

    @property
    def pixels(self) -> np.ndarray:
        return self._px

    @property
    def width(self) -> int:
        return self._px.shape[1]

    @property
    def height(self) -> int:
        return self._px.shape[0]

    @property
    def shape(self) -> tuple:
        return self._px.shape

    def tobytes(self) -> bytes:
        return self._px.tobytes()

    def content_hash(self) -> str:
        """SHA-256 over dimensions and raw pixel bytes, as lowercase hex.

        The digest input is width and height as big-endian uint32 followed by
        the interleaved RGB bytes, so equal-looking images of different sizes
        never collide.
        """
        h = hashlib.sha256()
        h.update(struct.pack(">II", self.width, self.height))
        h.update(self._px.tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self._px.shape == other._px.shape and np.array_equal(self._px, other._px)

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height})"


def _rgb_from_pil(im: Image.Image) -> np.ndarray:
    # Palette images expand to their true colors first; 16-bit depths are not
    # silently truncated.
    if im.mode in ("P", "PA"):
        im = im.convert("RGBA")
    if im.mode in ("I", "I;16", "I;16B", "F"):
        raise FormatError(f"unsupported sample depth (mode {im.mode}); only 8-bit images are handled")
    if im.mode == "L":
        arr = np.asarray(im, dtype=np.uint8)
        return np.repeat(arr[:, :, None], 3, axis=2)
    if im.mode == "LA":
        arr = np.asarray(im.convert("LA"), dtype=np.uint8)[:, :, 0]
        return np.repeat(arr[:, :, None], 3, axis=2)
    if im.mode == "RGB":
        return np.asarray(im, dtype=np.uint8)
    if im.mode == "RGBA":
        return np.asarray(im, dtype=np.uint8)[:, :, :3]
    # 1-bit and anything exotic: normalize through RGB.
    return np.asarray(im.convert("RGB"), dtype=np.uint8)


def from_png_bytes(data: bytes) -> ImageBuffer:
    """Decode an in-memory PNG (used by the HTTP endpoints)."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            return ImageBuffer(_rgb_from_pil(im))
    except UnidentifiedImageError as exc:
        raise FormatError("not a decodable PNG stream") from exc


def to_png_bytes(img: ImageBuffer) -> bytes:
    """Encode to PNG. Deterministic: same pixels give the same bytes."""
    out = io.BytesIO()
    Image.fromarray(img.pixels, mode="RGB").save(out, format="PNG")
    return out.getvalue()


def _read_ppm(data: bytes, path: Path) -> ImageBuffer:
    # Header: "P6" <ws> width <ws> height <ws> maxval <single ws> raster.
    # '#' comments may appear between tokens.
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PPM header")
        return data[start:pos]

    if token() != b"P6":
        raise FormatError(f"{path}: not a binary PPM (P6) file")
    try:
        width, height, maxval = int(token()), int(token()), int(token())
    except ValueError as exc:
        raise FormatError(f"{path}: malformed PPM header") from exc
    if maxval != _PPM_MAXVAL:
        raise FormatError(f"{path}: PPM maxval {maxval} unsupported, need {_PPM_MAXVAL}")
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad PPM dimensions {width}x{height}")
    pos += 1  # exactly one whitespace byte separates header from raster
    raster = data[pos : pos + width * height * 3]
    if len(raster) != width * height * 3:
        raise FormatError(f"{path}: PPM raster truncated ({len(raster)} of {width * height * 3} bytes)")
    return ImageBuffer.from_bytes(width, height, raster)


def load_image(path) -> ImageBuffer:
    """Read a PNG or binary PPM file into an ImageBuffer.

    Missing files surface the usual ``FileNotFoundError``; recognizable but
    unsupported formats (JPEG, GIF, ASCII PPM, ...) raise ``FormatError``
    naming the format.
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        try:
            with Image.open(io.BytesIO(data)) as im:
                im.load()
                return ImageBuffer(_rgb_from_pil(im))
        except UnidentifiedImageError as exc:
            raise FormatError(f"{path}: corrupt PNG") from exc
    if data[:2] == b"P6":
        return _read_ppm(data, path)
    name = _sniff_format(data)
    raise FormatError(f"{path}: unsupported image format ({name}); expected PNG or binary PPM")


def _sniff_format(data: bytes) -> str:
    if data[:2] == b"\xff\xd8":
        return "JPEG"
    if data[:6] in (b"GIF87a", b"GIF89a"):
        return "GIF"
    if data[:2] == b"BM":
        return "BMP"
    if data[:4] in (b"II*\x00", b"MM\x00*"):
        return "TIFF"
    if data[:4] == b"RIFF" and data[8:12] == b"WEBP":
        return "WebP"
    if data[:2] in (b"P1", b"P2", b"P3", b"P4", b"P5"):
        return "ASCII/other PNM"
    return "unknown"


def save_image(img: ImageBuffer, path) -> None:
    """Write PNG or binary PPM, chosen by file extension."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".png":
        path.write_bytes(to_png_bytes(img))
    elif ext in (".ppm", ".pnm"):
        header = f"P6\n{img.width} {img.height}\n{_PPM_MAXVAL}\n".encode("ascii")
        path.write_bytes(header + img.tobytes())
    else:
        raise FormatError(f"unsupported output extension {ext or '(none)'}; use .png or .ppm")
