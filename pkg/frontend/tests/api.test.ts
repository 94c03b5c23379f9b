import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, blobToBase64, bytesToBase64 } from "../src/api.js";

const fetchMock = vi.fn();
vi.stubGlobal("fetch", fetchMock);

afterEach(() => {
  fetchMock.mockReset();
});

function pngResponse(bytes: Uint8Array): Response {
  return new Response(bytes, { status: 200, headers: { "Content-Type": "image/png" } });
}

describe("base64 plumbing", () => {
  it("matches the platform encoder, including large buffers", async () => {
    const rng = [7, 0, 255, 128, 13];
    const small = new Uint8Array(rng);
    expect(bytesToBase64(small)).toBe(Buffer.from(small).toString("base64"));

    const big = new Uint8Array(70000).map((_, i) => (i * 31) % 256);
    expect(bytesToBase64(big)).toBe(Buffer.from(big).toString("base64"));
    expect(await blobToBase64(new Blob([big]))).toBe(Buffer.from(big).toString("base64"));
  });
});

describe("protect", () => {
  it("posts the image and params as JSON and returns the PNG blob", async () => {
    const png = new Uint8Array([137, 80, 78, 71, 1, 2, 3]);
    fetchMock.mockResolvedValueOnce(pngResponse(png));
    const client = new ApiClient("");

    const params = { mode: "blur" as const, sigma: 8, grid: 1, contrast: 127 };
    const blob = await client.protect("aW1n", params);

    expect(fetchMock).toHaveBeenCalledOnce();
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/protect");
    expect(init.method).toBe("POST");
    expect(init.headers["Content-Type"]).toBe("application/json");
    expect(JSON.parse(init.body)).toEqual({ image_b64: "aW1n", params });
    expect(new Uint8Array(await blob.arrayBuffer())).toEqual(png);
  });

  it("accepts the preset-shaped params object", async () => {
    fetchMock.mockResolvedValueOnce(pngResponse(new Uint8Array([1])));
    await new ApiClient().protect("aW1n", { preset: "full", grid: 1 });
    const body = JSON.parse(fetchMock.mock.calls[0]![1].body);
    expect(body.params).toEqual({ preset: "full", grid: 1 });
  });

  it("surfaces backend validation as ApiError with the field name", async () => {
    fetchMock.mockResolvedValueOnce(
      new Response(JSON.stringify({ error: "sigma: must be a positive number", field: "sigma" }), {
        status: 400,
        headers: { "Content-Type": "application/json" },
      }),
    );
    const err = await new ApiClient()
      .protect("aW1n", { mode: "blur", sigma: -1, grid: 1, contrast: 127 })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.field).toBe("sigma");
    expect(err.status).toBe(400);
    expect(err.message).toContain("sigma");
  });

  it("passes the abort signal through to fetch", async () => {
    fetchMock.mockResolvedValueOnce(pngResponse(new Uint8Array([1])));
    const controller = new AbortController();
    await new ApiClient().protect(
      "aW1n",
      { mode: "blur", sigma: 8, grid: 1, contrast: 127 },
      controller.signal,
    );
    expect(fetchMock.mock.calls[0]![1].signal).toBe(controller.signal);
  });
});

describe("simulate", () => {
  it("posts the factor alongside the image", async () => {
    fetchMock.mockResolvedValueOnce(pngResponse(new Uint8Array([9])));
    await new ApiClient().simulate("cHJvdA==", 4.0);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/simulate");
    expect(JSON.parse(init.body)).toEqual({ image_b64: "cHJvdA==", factor: 4.0 });
  });
});

describe("presets and health", () => {
  it("fetches the preset table", async () => {
    const table = { weak: { mode: "blur", grid: 1, contrast: 127, sigma: 8 } };
    fetchMock.mockResolvedValueOnce(
      new Response(JSON.stringify(table), {
        status: 200,
        headers: { "Content-Type": "application/json" },
      }),
    );
    expect(await new ApiClient().presets()).toEqual(table);
    expect(fetchMock.mock.calls[0]![0]).toBe("/presets");
  });

  it("health is false when the backend is unreachable", async () => {
    fetchMock.mockRejectedValueOnce(new TypeError("fetch failed"));
    expect(await new ApiClient().health()).toBe(false);
    fetchMock.mockResolvedValueOnce(new Response("{}", { status: 200 }));
    expect(await new ApiClient().health()).toBe(true);
  });

  it("prefixes a configured base URL", async () => {
    fetchMock.mockResolvedValueOnce(new Response("{}", { status: 200 }));
    await new ApiClient("http://127.0.0.1:8787").health();
    expect(fetchMock.mock.calls[0]![0]).toBe("http://127.0.0.1:8787/health");
  });
});
