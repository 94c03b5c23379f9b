"""Latency / throughput / resource benchmark for the protection pipeline.

Frames are synthesized from a seeded generator so the benchmark needs no
dataset and two runs on the same machine time identical bytes. Only the
protection call is timed; synthesis and buffer construction stay outside the
clock. Statistics per resolution: mean, median, p95 (nearest-rank) frame
latency in ms, FPS as 1000/mean, plus best-effort peak RSS and CPU
utilization for the row.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field

import numpy as np
import psutil

from .imagecore import ImageBuffer
from .shield import ProtectParams, preset_params, protect_with_params

# Common video ladder, a 512x512 point for comparison against prior systems,
# and tall phone-native resolutions.
DEFAULT_RESOLUTIONS: list[tuple[int, int]] = [
    (256, 144),
    (426, 240),
    (640, 360),
    (854, 480),
    (960, 540),
    (1024, 576),
    (1280, 720),
    (1366, 768),
    (1600, 900),
    (1920, 1080),
    (2560, 1440),
    (512, 512),
    (1080, 2400),
    (1170, 2532),
    (1440, 3088),
]

CSV_HEADER = "resolution,frames,threads,mean_ms,median_ms,p95_ms,fps,peak_rss_bytes,cpu_pct"

# Published reference points for the 512x512 row, printed for context only:
# an earlier CPU grid approach vs GPU implementations of this pipeline.
COMPARISON_512 = "earlier CPU grid approach ~1684 ms; GPU implementations 2.1-3.5 ms"


@dataclass(frozen=True)
class BenchConfig:
    resolutions: tuple = tuple(DEFAULT_RESOLUTIONS)
    frames: int = 100
    params: ProtectParams = field(default_factory=lambda: preset_params("weak"))
    threads: int = 1
    seed: int = 1234

    def __post_init__(self):
        if self.frames < 1:
            raise ValueError(f"frames must be >= 1, got {self.frames}")
        if not self.resolutions:
            raise ValueError("resolutions must be non-empty")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass
class BenchRow:
    width: int
    height: int
    frames: int
    threads: int
    mean_ms: float = 0.0
    median_ms: float = 0.0
    p95_ms: float = 0.0
    fps: float = 0.0
    peak_rss_bytes: int = 0
    cpu_pct: float = 0.0
    error: str | None = None

    @property
    def resolution(self) -> str:
        return f"{self.width}x{self.height}"

    @property
    def pixels(self) -> int:
        return self.width * self.height


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(CSV_HEADER.split(","))
        for r in self.rows:
            if r.error:
                continue
            writer.writerow(
                [
                    r.resolution,
                    r.frames,
                    r.threads,
                    f"{r.mean_ms:.3f}",
                    f"{r.median_ms:.3f}",
                    f"{r.p95_ms:.3f}",
                    f"{r.fps:.2f}",
                    r.peak_rss_bytes,
                    f"{r.cpu_pct:.1f}",
                ]
            )
        return out.getvalue()

    def format_table(self) -> str:
        lines = [
            f"{'resolution':>12} {'mean ms':>9} {'median':>9} {'p95':>9} {'fps':>8} {'rss MB':>8} {'cpu %':>7}"
        ]
        for r in self.rows:
            if r.error:
                lines.append(f"{r.resolution:>12} FAILED: {r.error}")
                continue
            lines.append(
                f"{r.resolution:>12} {r.mean_ms:>9.3f} {r.median_ms:>9.3f} {r.p95_ms:>9.3f}"
                f" {r.fps:>8.2f} {r.peak_rss_bytes / 1e6:>8.1f} {r.cpu_pct:>7.1f}"
            )
            if (r.width, r.height) == (512, 512):
                lines.append(f"{'':>12} (512x512 context: {COMPARISON_512})")
        return "\n".join(lines)

    def recommendation(self, min_fps: float = 60.0) -> str:
        """Highest-pixel-count resolution still meeting the FPS floor."""
        ok = [r for r in self.rows if not r.error and r.fps >= min_fps]
        if not ok:
            best = max((r for r in self.rows if not r.error), key=lambda r: r.fps, default=None)
            if best is None:
                return "no successful rows; no recommendation"
            return (
                f"no resolution sustains {min_fps:.0f} FPS; fastest is "
                f"{best.resolution} at {best.fps:.1f} FPS"
            )
        pick = max(ok, key=lambda r: r.pixels)
        return f"highest resolution sustaining {min_fps:.0f} FPS: {pick.resolution} ({pick.fps:.1f} FPS)"


def _synth_frame(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def run_bench(cfg: BenchConfig, progress=None) -> BenchReport:
    """Execute the benchmark. ``progress`` (optional) is called with each
    finished BenchRow, for live console output."""
    proc = psutil.Process()
    rows: list[BenchRow] = []
    for width, height in cfg.resolutions:
        row = BenchRow(width=width, height=height, frames=cfg.frames, threads=cfg.threads)
        rng = np.random.default_rng((cfg.seed, width, height))
        latencies: list[float] = []
        peak_rss = 0
        cpu0 = time.process_time()
        wall0 = time.perf_counter()
        try:
            for _ in range(cfg.frames):
                frame = ImageBuffer(_synth_frame(rng, width, height))
                t0 = time.perf_counter()
                protect_with_params(frame, cfg.params, threads=cfg.threads)
                latencies.append((time.perf_counter() - t0) * 1000.0)
                peak_rss = max(peak_rss, proc.memory_info().rss)
        except MemoryError as exc:
            row.error = f"out of memory ({exc})"
            rows.append(row)
            if progress:
                progress(row)
            continue
        wall = time.perf_counter() - wall0
        cpu = time.process_time() - cpu0

        latencies.sort()
        row.mean_ms = sum(latencies) / len(latencies)
        row.median_ms = statistics.median(latencies)
        row.p95_ms = latencies[max(0, -(-len(latencies) * 95 // 100) - 1)]
        row.fps = 1000.0 / row.mean_ms if row.mean_ms > 0 else float("inf")
        row.peak_rss_bytes = peak_rss
        row.cpu_pct = 100.0 * cpu / wall if wall > 0 else 0.0
        rows.append(row)
        if progress:
            progress(row)
    return BenchReport(rows=rows)
