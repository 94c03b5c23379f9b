// Tuner state: mirrors the backend's parameter rules so invalid settings are
// unrepresentable in the controls. The backend is still the authority; this
// module only clamps and formats.

export type Mode = "blur" | "pixelate";

export interface PresetInfo {
  mode: Mode;
  grid: number;
  contrast: number;
  sigma?: number;
  blocks?: number;
}

export interface SimGeometry {
  userDistanceIn: number;
  surferDistanceIn: number;
  diagonalIn: number;
}

export interface TunerState {
  mode: Mode;
  sigma: number;
  blocks: number;
  grid: number;
  contrast: number;
  presetName: string | null;
  geometry: SimGeometry;
  factorOverride: number | null;
}

export interface ProtectParams {
  mode: Mode;
  grid: number;
  contrast: number;
  sigma?: number;
  blocks?: number;
}

export const RANGES = {
  sigma: { min: 0.5, max: 40, step: 0.5 },
  blocks: { min: 1, max: 64, step: 1 },
  grid: { min: 1, max: 8, step: 1 },
  contrast: { min: 0, max: 127, step: 1 },
} as const;

export type ControlKey = keyof typeof RANGES;

export function defaultState(): TunerState {
  return {
    mode: "blur",
    sigma: 8,
    blocks: 16,
    grid: 1,
    contrast: 127,
    presetName: "weak",
    geometry: { userDistanceIn: 10, surferDistanceIn: 41, diagonalIn: 5.78 },
    factorOverride: null,
  };
}

function clamp(value: number, key: ControlKey): number {
  const r = RANGES[key];
  if (!Number.isFinite(value)) return r.min;
  const snapped = Math.round(value / r.step) * r.step;
  return Math.min(r.max, Math.max(r.min, snapped));
}

/** Set one slider value; clamps to its range and drops the preset name when
 * the result no longer matches the named preset. */
export function setControl(
  state: TunerState,
  key: ControlKey,
  value: number,
  presets: Record<string, PresetInfo> = {},
): TunerState {
  const next = { ...state, [key]: clamp(value, key) };
  next.presetName = matchPreset(next, presets);
  return next;
}

export function setMode(
  state: TunerState,
  mode: Mode,
  presets: Record<string, PresetInfo> = {},
): TunerState {
  const next = { ...state, mode };
  next.presetName = matchPreset(next, presets);
  return next;
}

export function applyPreset(state: TunerState, name: string, info: PresetInfo): TunerState {
  const next: TunerState = {
    ...state,
    mode: info.mode,
    grid: info.grid,
    contrast: info.contrast,
    presetName: name,
  };
  if (info.sigma !== undefined) next.sigma = info.sigma;
  if (info.blocks !== undefined) next.blocks = info.blocks;
  return next;
}

/** Name of the preset this state reproduces exactly, or null. */
export function matchPreset(
  state: TunerState,
  presets: Record<string, PresetInfo>,
): string | null {
  for (const [name, info] of Object.entries(presets)) {
    if (info.mode !== state.mode) continue;
    if (info.grid !== state.grid || info.contrast !== state.contrast) continue;
    if (info.mode === "blur" && info.sigma !== state.sigma) continue;
    if (info.mode === "pixelate" && info.blocks !== state.blocks) continue;
    return name;
  }
  return null;
}

export function setGeometry(state: TunerState, patch: Partial<SimGeometry>): TunerState {
  const geometry = { ...state.geometry, ...patch };
  for (const value of Object.values(geometry)) {
    if (!Number.isFinite(value) || value <= 0) return state; // refuse, keep last good
  }
  if (geometry.surferDistanceIn <= geometry.userDistanceIn) return state;
  return { ...state, geometry };
}

export function setFactorOverride(state: TunerState, factor: number | null): TunerState {
  if (factor !== null && (!Number.isFinite(factor) || factor <= 1)) return state;
  return { ...state, factorOverride: factor };
}

/** Request body for POST /protect: only the knob the mode uses is present. */
export function protectParams(state: TunerState): ProtectParams {
  const base: ProtectParams = {
    mode: state.mode,
    grid: state.grid,
    contrast: state.contrast,
  };
  if (state.mode === "blur") base.sigma = state.sigma;
  else base.blocks = state.blocks;
  return base;
}

export function angularDiameterDeg(sizeIn: number, distanceIn: number): number {
  return (2 * Math.atan2(sizeIn, 2 * distanceIn) * 180) / Math.PI;
}

function roundHalfUp2(x: number): number {
  return Math.floor(x * 100 + 0.5) / 100;
}

/** Shrink factor between the user's view and the onlooker's view, two
 * decimals, matching the backend's geometry math. Explicit override wins. */
export function surferFactor(state: TunerState): number {
  if (state.factorOverride !== null) return state.factorOverride;
  const g = state.geometry;
  const near = angularDiameterDeg(g.diagonalIn, g.userDistanceIn);
  const far = angularDiameterDeg(g.diagonalIn, g.surferDistanceIn);
  return roundHalfUp2(near / far);
}
