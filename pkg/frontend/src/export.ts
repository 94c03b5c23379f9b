// Settings export: the same recipe as a /protect JSON body and as a CLI
// command line, so a setting found in the browser reproduces exactly from a
// script.

import type { TunerState } from "./state.js";
import { protectParams } from "./state.js";

export function exportParams(state: TunerState): Record<string, unknown> {
  if (state.presetName) {
    return { preset: state.presetName, grid: state.grid };
  }
  return { ...protectParams(state) };
}

export function settingsJson(state: TunerState): string {
  return JSON.stringify(exportParams(state), null, 2) + "\n";
}

export function cliCommand(state: TunerState, input = "in.png", output = "out.png"): string {
  const parts = ["screenveil", "protect", input, output];
  if (state.presetName) {
    parts.push("--preset", state.presetName, "--grid", String(state.grid));
  } else {
    parts.push("--mode", state.mode);
    if (state.mode === "blur") {
      parts.push("--sigma", String(state.sigma));
    } else {
      parts.push("--blocks", String(state.blocks));
    }
    parts.push("--contrast", String(state.contrast), "--grid", String(state.grid));
  }
  return parts.join(" ");
}
