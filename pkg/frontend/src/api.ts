// Thin client for the protection service. All pixels come from the backend;
// the UI never re-implements the transforms.

import type { PresetInfo, ProtectParams } from "./state.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public field: string | null,
    public status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function toApiError(resp: Response): Promise<ApiError> {
  let message = `request failed with status ${resp.status}`;
  let field: string | null = null;
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") message = body.error;
    if (body && typeof body.field === "string") field = body.field;
  } catch {
    // non-JSON error body, keep the status message
  }
  return new ApiError(message, field, resp.status);
}

export function bytesToBase64(bytes: Uint8Array): string {
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(binary);
}

export async function blobToBase64(blob: Blob): Promise<string> {
  return bytesToBase64(new Uint8Array(await blob.arrayBuffer()));
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(`${this.baseUrl}/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }

  async presets(): Promise<Record<string, PresetInfo>> {
    const resp = await fetch(`${this.baseUrl}/presets`);
    if (!resp.ok) throw await toApiError(resp);
    return resp.json();
  }

  /** POST /protect with a base64 PNG; resolves to the protected PNG. */
  async protect(
    imageB64: string,
    params: ProtectParams | { preset: string; grid: number },
    signal?: AbortSignal,
  ): Promise<Blob> {
    const resp = await fetch(`${this.baseUrl}/protect`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ image_b64: imageB64, params }),
      signal,
    });
    if (!resp.ok) throw await toApiError(resp);
    return resp.blob();
  }

  /** POST /simulate: the onlooker's downscaled view of a base64 PNG. */
  async simulate(imageB64: string, factor: number, signal?: AbortSignal): Promise<Blob> {
    const resp = await fetch(`${this.baseUrl}/simulate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ image_b64: imageB64, factor }),
      signal,
    });
    if (!resp.ok) throw await toApiError(resp);
    return resp.blob();
  }
}
