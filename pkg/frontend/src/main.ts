// Wires the tuner page: controls on the left, three panes on the right
// (protected close-up view, simulated onlooker view, untouched original).
// Every rendered pixel comes from the backend service.

import { ApiClient, blobToBase64 } from "./api.js";
import { cliCommand, settingsJson } from "./export.js";
import { DEBOUNCE_MS, PaneScheduler } from "./scheduler.js";
import {
  ControlKey,
  PresetInfo,
  RANGES,
  TunerState,
  applyPreset,
  defaultState,
  protectParams,
  setControl,
  setFactorOverride,
  setGeometry,
  setMode,
  surferFactor,
} from "./state.js";

const api = new ApiClient("");
let state = defaultState();
let presets: Record<string, PresetInfo> = {};
let imageB64: string | null = null;
let imageName = "sample";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const banner = el<HTMLDivElement>("banner");
const paneUser = el<HTMLImageElement>("pane-user");
const paneSurfer = el<HTMLImageElement>("pane-surfer");
const paneOriginal = el<HTMLImageElement>("pane-original");
const badgeParams = el<HTMLSpanElement>("badge-params");
const badgeFactor = el<HTMLSpanElement>("badge-factor");
const cliOut = el<HTMLElement>("cli-string");

function setPane(img: HTMLImageElement, blob: Blob): void {
  const old = img.src;
  img.src = URL.createObjectURL(blob);
  if (old.startsWith("blob:")) URL.revokeObjectURL(old);
}

function paneHooks(img: HTMLImageElement) {
  return {
    onStale: () => img.classList.add("stale"),
    onFresh: () => {
      img.classList.remove("stale");
      banner.hidden = true;
    },
    onError: (err: unknown) => {
      banner.hidden = false;
      banner.querySelector("span")!.textContent =
        err instanceof Error ? err.message : "backend unreachable";
    },
  };
}

const userScheduler = new PaneScheduler(DEBOUNCE_MS, paneHooks(paneUser));
const surferScheduler = new PaneScheduler(DEBOUNCE_MS, paneHooks(paneSurfer));

function scheduleRender(): void {
  if (!imageB64) return;
  const source = imageB64;
  const params = protectParams(state);
  const factor = surferFactor(state);

  userScheduler.request(async (signal) => {
    setPane(paneUser, await api.protect(source, params, signal));
  });
  surferScheduler.request(async (signal) => {
    const protectedBlob = await api.protect(source, params, signal);
    const protectedB64 = await blobToBase64(protectedBlob);
    setPane(paneSurfer, await api.simulate(protectedB64, factor, signal));
  });
}

function refreshControls(): void {
  const presetSelect = el<HTMLSelectElement>("preset");
  presetSelect.value = state.presetName ?? "custom";
  el<HTMLSelectElement>("mode").value = state.mode;
  for (const key of Object.keys(RANGES) as ControlKey[]) {
    const slider = el<HTMLInputElement>(key);
    slider.value = String(state[key]);
    el<HTMLSpanElement>(`${key}-value`).textContent = String(state[key]);
  }
  el<HTMLDivElement>("blur-row").hidden = state.mode !== "blur";
  el<HTMLDivElement>("pixelate-row").hidden = state.mode !== "pixelate";

  const knob = state.mode === "blur" ? `σ ${state.sigma}` : `${state.blocks} blocks`;
  badgeParams.textContent = `(${knob}, contrast ${state.contrast}, g ${state.grid})`;
  badgeFactor.textContent = `${surferFactor(state).toFixed(2)}×`;
  cliOut.textContent = cliCommand(state, imageName, `protected_${imageName}`);
}

function update(next: TunerState): void {
  state = next;
  refreshControls();
  scheduleRender();
}

function bindControls(): void {
  el<HTMLSelectElement>("preset").addEventListener("change", (ev) => {
    const name = (ev.target as HTMLSelectElement).value;
    const info = presets[name];
    if (info) update(applyPreset(state, name, info));
  });
  el<HTMLSelectElement>("mode").addEventListener("change", (ev) => {
    update(setMode(state, (ev.target as HTMLSelectElement).value as TunerState["mode"], presets));
  });
  for (const key of Object.keys(RANGES) as ControlKey[]) {
    el<HTMLInputElement>(key).addEventListener("input", (ev) => {
      update(setControl(state, key, Number((ev.target as HTMLInputElement).value), presets));
    });
  }
  for (const [id, field] of [
    ["user-d", "userDistanceIn"],
    ["surfer-d", "surferDistanceIn"],
    ["diagonal", "diagonalIn"],
  ] as const) {
    el<HTMLInputElement>(id).addEventListener("change", (ev) => {
      update(setGeometry(state, { [field]: Number((ev.target as HTMLInputElement).value) }));
    });
  }
  el<HTMLInputElement>("factor-override").addEventListener("change", (ev) => {
    const raw = (ev.target as HTMLInputElement).value.trim();
    update(setFactorOverride(state, raw === "" ? null : Number(raw)));
  });

  el<HTMLInputElement>("file").addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    imageB64 = await blobToBase64(file);
    imageName = file.name;
    paneOriginal.src = URL.createObjectURL(file);
    refreshControls();
    scheduleRender();
  });

  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const blob = new Blob([settingsJson(state)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "screenveil-settings.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });
  el<HTMLButtonElement>("copy-cli").addEventListener("click", () => {
    void navigator.clipboard.writeText(cliOut.textContent ?? "");
  });
  el<HTMLButtonElement>("retry").addEventListener("click", () => {
    banner.hidden = true;
    scheduleRender();
  });
}

/** Built-in stand-in image so the page is interactive before any upload. */
function drawSample(): string {
  const canvas = document.createElement("canvas");
  canvas.width = 640;
  canvas.height = 400;
  const ctx = canvas.getContext("2d")!;
  const grad = ctx.createLinearGradient(0, 0, 640, 400);
  grad.addColorStop(0, "#2b4162");
  grad.addColorStop(1, "#12100e");
  ctx.fillStyle = grad;
  ctx.fillRect(0, 0, 640, 400);
  ctx.fillStyle = "#e8e4d8";
  ctx.font = "28px sans-serif";
  ctx.fillText("Quarterly numbers (confidential)", 40, 80);
  ctx.font = "18px monospace";
  for (let i = 0; i < 9; i++) {
    ctx.fillText(`row ${i + 1}   revenue ${(1200 + 137 * i).toFixed(0)}k   margin ${(12 + i) % 31}%`, 40, 130 + 26 * i);
  }
  return canvas.toDataURL("image/png").split(",", 2)[1] ?? "";
}

async function init(): Promise<void> {
  bindControls();
  try {
    presets = await api.presets();
  } catch {
    banner.hidden = false;
  }
  const presetSelect = el<HTMLSelectElement>("preset");
  for (const name of Object.keys(presets)) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = name;
    presetSelect.append(opt);
  }
  const custom = document.createElement("option");
  custom.value = "custom";
  custom.textContent = "custom";
  presetSelect.append(custom);

  imageB64 = drawSample();
  paneOriginal.src = `data:image/png;base64,${imageB64}`;
  refreshControls();
  scheduleRender();
}

void init();
