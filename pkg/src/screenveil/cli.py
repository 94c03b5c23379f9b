"""Command-line surface: single images, frame streams, evaluation sweeps,
benchmarking, and the HTTP service.

Exit codes: 0 success, 1 I/O or stream errors, 2 invalid flags or parameter
combinations.
"""

from __future__ import annotations

import argparse
import csv
import json
import queue
import re
import sys
import threading
from pathlib import Path

from .bench import DEFAULT_RESOLUTIONS, BenchConfig, run_bench
from .geometry import (
    RESOLVING_POWER_DEG,
    DisplaySpec,
    ViewingGeometry,
    optimal_grid_size,
)
from .imagecore import FormatError, ImageBuffer, load_image, save_image
from .metrics import MockRecognitionClient, label_retention, ssim
from .shield import (
    PRESETS,
    params_from_mapping,
    params_to_mapping,
    protect_with_params,
)
from .simulate import downscale_view, simulate_surfer
from .target import render_target


def _add_params_flags(sub):
    sub.add_argument("--preset", choices=sorted(PRESETS), help="named strength level")
    sub.add_argument("--mode", choices=("blur", "pixelate"))
    sub.add_argument("--sigma", type=float, help="blur strength")
    sub.add_argument("--blocks", type=int, help="pixelation block count (short axis)")
    sub.add_argument("--grid", type=int, help="grid cell size in pixels")
    sub.add_argument("--contrast", type=int, help="contrast preset, 0..127 (127 = off)")


def _params_from_args(args):
    raw = {}
    for key in ("preset", "mode", "sigma", "blocks", "grid", "contrast"):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    return params_from_mapping(raw)


def _announce_params(args, params):
    chosen = json.dumps(params_to_mapping(params))
    if getattr(args, "preset", None):
        print(f"preset '{args.preset}' -> {chosen}", file=sys.stderr)
    else:
        print(f"params {chosen}", file=sys.stderr)


def cmd_protect(args) -> int:
    params = _params_from_args(args)
    _announce_params(args, params)
    img = load_image(args.input)
    out = protect_with_params(img, params, threads=args.threads)
    save_image(out, args.output)
    return 0


def _read_exact(stream, n: int) -> bytes:
    chunks = []
    got = 0
    while got < n:
        piece = stream.read(n - got)
        if not piece:
            break
        chunks.append(piece)
        got += len(piece)
    return b"".join(chunks)


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def _video_raw(args, params) -> int:
    if args.width is None or args.height is None:
        raise ValueError("raw streams need --width and --height")
    if args.width < 1 or args.height < 1:
        raise ValueError(f"bad frame size {args.width}x{args.height}")
    frame_bytes = args.width * args.height * 3

    instream = sys.stdin.buffer if args.input == "-" else open(args.input, "rb")
    outstream = sys.stdout.buffer if args.output == "-" else open(args.output, "wb")

    # Reader thread keeps a bounded number of frames in flight; the main loop
    # consumes in order, so output order always matches input order.
    frames: queue.Queue = queue.Queue(maxsize=args.queue_depth)

    def reader():
        idx = 0
        while True:
            data = _read_exact(instream, frame_bytes)
            if not data:
                frames.put((idx, None, None))
                return
            if len(data) != frame_bytes:
                frames.put((idx, None, f"frame {idx} truncated: {len(data)} of {frame_bytes} bytes"))
                return
            frames.put((idx, data, None))
            idx += 1

    thread = threading.Thread(target=reader, daemon=True)
    thread.start()
    try:
        while True:
            idx, data, err = frames.get()
            if err:
                raise FormatError(err)
            if data is None:
                break
            img = ImageBuffer.from_bytes(args.width, args.height, data)
            out = protect_with_params(img, params, threads=args.threads)
            outstream.write(out.tobytes())
        outstream.flush()
    finally:
        if instream is not sys.stdin.buffer:
            instream.close()
        if outstream is not sys.stdout.buffer:
            outstream.close()
    return 0


def _video_pngdir(args, params) -> int:
    in_dir = Path(args.input)
    out_dir = Path(args.output)
    names = sorted((p.name for p in in_dir.iterdir() if p.suffix.lower() == ".png"), key=_natural_key)
    if not names:
        raise FormatError(f"{in_dir}: no PNG frames found")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        img = load_image(in_dir / name)
        out = protect_with_params(img, params, threads=args.threads)
        save_image(out, out_dir / name)
    return 0


def cmd_protect_video(args) -> int:
    params = _params_from_args(args)
    _announce_params(args, params)
    if args.input != "-" and Path(args.input).is_dir():
        return _video_pngdir(args, params)
    return _video_raw(args, params)


def cmd_simulate(args) -> int:
    geometry_flags = [args.user_d, args.surfer_d, args.diagonal]
    has_geometry = any(v is not None for v in geometry_flags)
    if args.factor is not None and has_geometry:
        raise ValueError("give either --factor or the geometry flags, not both")
    if args.factor is None and not has_geometry:
        raise ValueError("one of --factor or --user-d/--surfer-d/--diagonal is required")
    if has_geometry and None in geometry_flags:
        raise ValueError("geometry form needs all of --user-d, --surfer-d and --diagonal")

    img = load_image(args.input)
    if args.factor is not None:
        out = downscale_view(img, args.factor)
    else:
        display = DisplaySpec(args.diagonal, img.width, img.height)
        out = simulate_surfer(img, args.user_d, args.surfer_d, display)
    save_image(out, args.output)
    return 0


def cmd_grid_size(args) -> int:
    geom = ViewingGeometry(
        distance_in=args.distance,
        ppi=args.ppi,
        font_term=args.font_term,
        resolving_power_deg=args.alpha,
    )
    g_real, g_int = optimal_grid_size(geom)
    print(f"{g_real:.2f} {g_int}")
    return 0


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


EVAL_HEADER = "image,mode,sigma_or_blocks,grid,contrast,factor,ssim_vs_target,ssim_vs_original,retention"


def cmd_evaluate(args) -> int:
    dataset = Path(args.dataset)
    if not dataset.is_dir():
        raise FormatError(f"{dataset}: not a directory")
    paths = sorted(p for p in dataset.iterdir() if p.suffix.lower() in (".png", ".ppm"))
    if not paths:
        print(f"error: {dataset}: no images to evaluate", file=sys.stderr)
        return 1

    combos = [("blur", s) for s in _parse_float_list(args.sigmas)]
    combos += [("pixelate", b) for b in _parse_int_list(args.blocks_list)]
    if not combos:
        raise ValueError("nothing to sweep: both --sigmas and --blocks-list are empty")
    grids = _parse_int_list(args.grids)
    factors = _parse_float_list(args.factors)
    if not grids or not factors:
        raise ValueError("--grids and --factors must be non-empty")

    client = MockRecognitionClient(args.recognition_fixture) if args.recognition_fixture else None

    out_path = Path(args.out)
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVAL_HEADER.split(","))
        for path in paths:
            img = load_image(path)
            orig_labels = client.annotate(img) if client else None
            for mode, strength in combos:
                for grid_cell in grids:
                    raw = {"mode": mode, "grid": grid_cell, "contrast": args.contrast}
                    raw["sigma" if mode == "blur" else "blocks"] = strength
                    params = params_from_mapping(raw)
                    protected = protect_with_params(img, params, threads=args.threads)
                    target = render_target(img, params.target)
                    vs_original = ssim(protected, img)
                    retention = ""
                    if client:
                        report = label_retention(orig_labels, client.annotate(protected))
                        retention = f"{report.retained_fraction:.4f}"
                    for factor in factors:
                        vs_target = ssim(downscale_view(protected, factor), downscale_view(target, factor))
                        writer.writerow(
                            [
                                path.name,
                                mode,
                                strength,
                                grid_cell,
                                args.contrast,
                                factor,
                                f"{vs_target:.6f}",
                                f"{vs_original:.6f}",
                                retention,
                            ]
                        )
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    resolutions = DEFAULT_RESOLUTIONS
    if args.resolutions:
        resolutions = []
        for token in args.resolutions.split(","):
            w, _, h = token.partition("x")
            resolutions.append((int(w), int(h)))
    params = _params_from_args(args)
    cfg = BenchConfig(
        resolutions=tuple(resolutions),
        frames=args.frames,
        params=params,
        threads=args.threads,
    )
    print(f"benchmarking {len(resolutions)} resolutions x {cfg.frames} frames", file=sys.stderr)
    report = run_bench(cfg, progress=lambda row: print(f"  {row.resolution} done", file=sys.stderr))
    print(report.format_table())
    print(report.recommendation(args.target_fps))
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
        print(f"wrote {args.csv}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(max_dim=args.max_dim, static_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_make_samples(args) -> int:
    from .samples import build_sample_set

    paths = build_sample_set(args.out, count=args.count, seed=args.seed)
    print(f"wrote {len(paths)} images under {args.out}", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="screenveil", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("protect", help="protect a single image")
    p.add_argument("input")
    p.add_argument("output")
    _add_params_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_protect)

    p = sub.add_parser("protect-video", help="protect a raw RGB24 stream or PNG directory")
    p.add_argument("input", help="'-' for stdin, a raw file, or a directory of PNG frames")
    p.add_argument("output", help="'-' for stdout, a raw file, or an output directory")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    _add_params_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--queue-depth", type=int, default=8)
    p.set_defaults(func=cmd_protect_video)

    p = sub.add_parser("simulate", help="render the onlooker's downscaled view")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--factor", type=float)
    p.add_argument("--user-d", type=float, help="user distance, inches")
    p.add_argument("--surfer-d", type=float, help="onlooker distance, inches")
    p.add_argument("--diagonal", type=float, help="display diagonal, inches")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="sweep parameters over an image directory, write CSV")
    p.add_argument("dataset")
    p.add_argument("--out", default="evaluation.csv")
    p.add_argument("--sigmas", default="8,16,24,32")
    p.add_argument("--blocks-list", default="")
    p.add_argument("--grids", default="1")
    p.add_argument("--factors", default="4")
    p.add_argument("--contrast", type=int, default=127)
    p.add_argument("--recognition-fixture", help="JSON fixture for the mock recognition client")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid-size", help="largest invisible grid cell for a viewing setup")
    p.add_argument("--ppi", type=float, required=True)
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--alpha", type=float, default=RESOLVING_POWER_DEG, help="resolving power, degrees")
    p.add_argument("--font-term", type=float, default=1.0)
    p.set_defaults(func=cmd_grid_size)

    p = sub.add_parser("bench", help="benchmark the protection pipeline")
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--resolutions", help="comma-separated WxH list (default: built-in table)")
    p.add_argument("--csv", help="write CSV report to this path")
    p.add_argument("--target-fps", type=float, default=60.0)
    _add_params_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--max-dim", type=int, default=4096)
    p.add_argument("--ui", help="directory of static UI files to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("make-samples", help="regenerate the bundled sample image set")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=24)
    p.add_argument("--seed", type=int, default=77)
    p.set_defaults(func=cmd_make_samples)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
