"""Quality metrics: structural similarity and label retention.

SSIM here is the classic uniform-window variant: luma plane, 7x7 sliding
windows at every fully-interior position, per-window statistics with
population normalization, mean over windows. Label retention quantifies how
much machine-readable content survives protection, using a recognition client
(a deterministic mock for tests, optionally a live HTTP service).
"""

from __future__ import annotations

import base64
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import cv2
import numpy as np

from .imagecore import ImageBuffer, to_png_bytes

_LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class SsimParams:
    window: int = 7
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if self.k1 <= 0 or self.k2 <= 0 or self.dynamic_range <= 0:
            raise ValueError("k1, k2 and dynamic_range must be positive")


def luma(img: ImageBuffer) -> np.ndarray:
    """Rec. 601 luma, rounded half-up to uint8."""
    r, g, b = _LUMA_WEIGHTS
    px = img.pixels.astype(np.float64)
    y = px[:, :, 0] * r + px[:, :, 1] * g + px[:, :, 2] * b
    return np.floor(y + 0.5).astype(np.uint8)


def ssim(a: ImageBuffer, b: ImageBuffer, params: SsimParams = SsimParams()) -> float:
    """Mean structural similarity over all fully-interior windows.

    Identical inputs score exactly 1.0. Windows never cross the border, so
    images must be at least window x window.
    """
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    w = params.window
    if a.height < w or a.width < w:
        raise ValueError(f"image {a.width}x{a.height} smaller than {w}x{w} window")

    x = luma(a).astype(np.float64)
    y = luma(b).astype(np.float64)

    r = w // 2

    def win_mean(plane):
        m = cv2.boxFilter(plane, cv2.CV_64F, (w, w), normalize=True, borderType=cv2.BORDER_CONSTANT)
        return m[r : plane.shape[0] - r, r : plane.shape[1] - r]

    mx = win_mean(x)
    my = win_mean(y)
    vx = win_mean(x * x) - mx * mx
    vy = win_mean(y * y) - my * my
    cxy = win_mean(x * y) - mx * my

    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2
    score = ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / (
        (mx * mx + my * my + c1) * (vx + vy + c2)
    )
    return float(score.mean())


@dataclass(frozen=True)
class RecognitionResult:
    """Labels a recognition backend attached to one image."""

    labels: dict[str, float] = field(default_factory=dict)  # text -> confidence
    source: str = "mock"
    missing: bool = False  # no fixture entry / backend had nothing to say


class RecognitionClient(Protocol):
    def annotate(self, img: ImageBuffer) -> RecognitionResult: ...


class MockRecognitionClient:
    """Deterministic recognition from a JSON fixture.

    The fixture maps the image content hash (hex, as ImageBuffer.content_hash
    produces) to a list of {"label", "confidence"} entries. Unknown images
    come back empty with ``missing`` set, so evaluation runs never block on
    coverage gaps.
    """

    def __init__(self, fixture_path):
        raw = json.loads(Path(fixture_path).read_text())
        if not isinstance(raw, dict):
            raise ValueError(f"{fixture_path}: fixture must be a JSON object")
        self._by_hash: dict[str, dict[str, float]] = {}
        for key, entries in raw.items():
            self._by_hash[key] = {e["label"]: float(e["confidence"]) for e in entries}

    def annotate(self, img: ImageBuffer) -> RecognitionResult:
        found = self._by_hash.get(img.content_hash())
        if found is None:
            return RecognitionResult(labels={}, source="mock", missing=True)
        return RecognitionResult(labels=dict(found), source="mock")


class LiveRecognitionClient:
    """JSON-over-HTTPS label detection (cloud vision style API).

    Disabled unless the API key environment variable is set. ``transport`` is
    injectable for tests; the default posts with ``requests``.
    """

    def __init__(self, endpoint: str, api_key_env: str = "SCREENVEIL_VISION_KEY",
                 timeout: float = 15.0, transport=None):
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout
        self._transport = transport or self._post

    def _post(self, url: str, payload: dict) -> dict:
        import requests

        resp = requests.post(url, json=payload, timeout=self.timeout)
        resp.raise_for_status()
        return resp.json()

    def annotate(self, img: ImageBuffer) -> RecognitionResult:
        key = os.environ.get(self.api_key_env)
        if not key:
            raise RuntimeError(f"recognition API key not set (${self.api_key_env})")
        payload = {
            "requests": [
                {
                    "image": {"content": base64.b64encode(to_png_bytes(img)).decode("ascii")},
                    "features": [{"type": "LABEL_DETECTION", "maxResults": 50}],
                }
            ]
        }
        url = f"{self.endpoint}?key={key}"
        body = self._transport(url, payload)
        annotations = (body.get("responses") or [{}])[0].get("labelAnnotations") or []
        labels = {a["description"]: float(a.get("score", 0.0)) for a in annotations if "description" in a}
        return RecognitionResult(labels=labels, source="live", missing=not annotations)


def recognize(img: ImageBuffer, client: RecognitionClient) -> RecognitionResult:
    return client.annotate(img)


@dataclass(frozen=True)
class RetentionReport:
    retained_fraction: float
    original_count: int
    retained_count: int


def label_retention(original: RecognitionResult, protected: RecognitionResult) -> RetentionReport:
    """Fraction of the original's labels still detected after protection.

    Matching is case-insensitive on label text. An empty original set yields
    0.0 (nothing was there to retain).
    """
    orig = {text.casefold() for text in original.labels}
    prot = {text.casefold() for text in protected.labels}
    if not orig:
        return RetentionReport(0.0, 0, 0)
    kept = orig & prot
    return RetentionReport(len(kept) / len(orig), len(orig), len(kept))
