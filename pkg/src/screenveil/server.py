"""HTTP service wrapping the protection pipeline.

Endpoints mirror the CLI paths exactly (same decode, same transform, same PNG
encoder), so a request and the equivalent command line produce byte-identical
files. Requests carry the image either as a base64 PNG inside a JSON body or
as multipart/form-data with an ``image`` file part and an optional ``params``
JSON field. The multipart parser is local to this module: only the narrow
form shape above is accepted, which keeps the service dependency-light.
"""

from __future__ import annotations

import base64
import json
import re

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .imagecore import FormatError, ImageBuffer, from_png_bytes, to_png_bytes
from .shield import PRESETS, params_from_mapping, params_to_mapping, protect_with_params
from .simulate import downscale_view

DEFAULT_MAX_DIM = 4096


class _RequestError(Exception):
    def __init__(self, message: str, field: str, status: int = 400):
        super().__init__(message)
        self.field = field
        self.status = status


def _parse_multipart(body: bytes, content_type: str) -> dict[str, bytes]:
    match = re.search(r'boundary="?([^";,]+)"?', content_type)
    if not match:
        raise _RequestError("multipart boundary missing from content-type", "body")
    delim = b"--" + match.group(1).encode("latin-1")
    fields: dict[str, bytes] = {}
    for segment in body.split(delim)[1:]:
        if segment.startswith(b"--"):
            break  # closing delimiter
        segment = segment.removeprefix(b"\r\n")
        head, sep, payload = segment.partition(b"\r\n\r\n")
        if not sep:
            raise _RequestError("malformed multipart section", "body")
        if payload.endswith(b"\r\n"):
            payload = payload[:-2]
        name = re.search(rb'name="([^"]*)"', head)
        if name:
            fields[name.group(1).decode("latin-1")] = payload
    return fields


async def _image_and_extras(request: Request, max_dim: int) -> tuple[ImageBuffer, dict]:
    """Pull the PNG payload plus any extra fields out of either body form."""
    content_type = request.headers.get("content-type", "")
    body = await request.body()

    if content_type.startswith("multipart/form-data"):
        fields = _parse_multipart(body, content_type)
        if "image" not in fields:
            raise _RequestError("multipart form needs an 'image' file part", "image")
        png = fields.pop("image")
        extras = {}
        for key, raw in fields.items():
            text = raw.decode("utf-8", "replace")
            if key == "params":
                try:
                    extras["params"] = json.loads(text)
                except json.JSONDecodeError:
                    raise _RequestError("params field is not valid JSON", "params") from None
            else:
                extras[key] = text
    else:
        try:
            payload = json.loads(body)
        except json.JSONDecodeError:
            raise _RequestError("request body is not valid JSON", "body") from None
        if not isinstance(payload, dict) or "image_b64" not in payload:
            raise _RequestError("JSON body needs an 'image_b64' key", "image_b64")
        try:
            png = base64.b64decode(payload["image_b64"], validate=True)
        except (TypeError, ValueError):
            raise _RequestError("image_b64 is not valid base64", "image_b64") from None
        extras = {k: v for k, v in payload.items() if k != "image_b64"}

    try:
        img = from_png_bytes(png)
    except FormatError as exc:
        raise _RequestError(str(exc), "image") from None
    if img.width > max_dim or img.height > max_dim:
        raise _RequestError(
            f"image {img.width}x{img.height} exceeds the {max_dim}x{max_dim} limit",
            "image",
            status=413,
        )
    return img, extras


def create_app(max_dim: int = DEFAULT_MAX_DIM, static_dir=None) -> FastAPI:
    app = FastAPI(title="screenveil", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(_RequestError)
    async def on_request_error(request, exc: _RequestError):
        return JSONResponse(status_code=exc.status, content={"error": str(exc), "field": exc.field})

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.get("/presets")
    async def presets():
        return {name: params_to_mapping(p) for name, p in PRESETS.items()}

    @app.post("/protect")
    async def protect_endpoint(request: Request):
        img, extras = await _image_and_extras(request, max_dim)
        raw_params = extras.get("params", {})
        try:
            params = params_from_mapping(raw_params if raw_params is not None else {})
        except ValueError as exc:
            field = str(exc).split(":", 1)[0]
            raise _RequestError(str(exc), field) from None
        out = protect_with_params(img, params)
        return Response(content=to_png_bytes(out), media_type="image/png")

    @app.post("/simulate")
    async def simulate_endpoint(request: Request):
        img, extras = await _image_and_extras(request, max_dim)
        raw = extras.get("factor")
        if raw is None:
            raise _RequestError("a 'factor' value is required", "factor")
        try:
            factor = float(raw)
        except (TypeError, ValueError):
            raise _RequestError(f"factor must be a number, got {raw!r}", "factor") from None
        try:
            out = downscale_view(img, factor)
        except ValueError as exc:
            raise _RequestError(str(exc), "factor") from None
        return Response(content=to_png_bytes(out), media_type="image/png")

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
