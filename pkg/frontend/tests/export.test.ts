import { describe, expect, it } from "vitest";

import { cliCommand, exportParams, settingsJson } from "../src/export.js";
import { PresetInfo, applyPreset, defaultState, setControl, setMode } from "../src/state.js";

const PRESETS: Record<string, PresetInfo> = {
  full: { mode: "blur", grid: 1, contrast: 80, sigma: 24 },
  weak: { mode: "blur", grid: 1, contrast: 127, sigma: 8 },
};

describe("CLI command string", () => {
  it("preset state exports the preset flag", () => {
    const s = applyPreset(defaultState(), "full", PRESETS.full!);
    expect(cliCommand(s)).toBe("screenveil protect in.png out.png --preset full --grid 1");
  });

  it("custom blur state exports explicit flags", () => {
    const s = setControl(defaultState(), "sigma", 12, PRESETS);
    expect(cliCommand(s)).toBe(
      "screenveil protect in.png out.png --mode blur --sigma 12 --contrast 127 --grid 1",
    );
  });

  it("keeps fractional sigma intact", () => {
    const s = setControl(defaultState(), "sigma", 12.5, PRESETS);
    expect(cliCommand(s)).toContain("--sigma 12.5");
  });

  it("pixelate state exports blocks", () => {
    let s = setMode(defaultState(), "pixelate", PRESETS);
    s = setControl(s, "blocks", 24, PRESETS);
    expect(cliCommand(s, "shot.png", "safe.png")).toBe(
      "screenveil protect shot.png safe.png --mode pixelate --blocks 24 --contrast 127 --grid 1",
    );
  });
});

describe("settings JSON", () => {
  it("preset state exports the preset name plus grid", () => {
    const s = applyPreset(defaultState(), "full", PRESETS.full!);
    expect(exportParams(s)).toEqual({ preset: "full", grid: 1 });
  });

  it("custom state exports the full /protect params object", () => {
    const s = setControl(defaultState(), "sigma", 12, PRESETS);
    expect(exportParams(s)).toEqual({ mode: "blur", sigma: 12, grid: 1, contrast: 127 });
  });

  it("never mixes the blur and pixelate knobs", () => {
    const blur = exportParams(setControl(defaultState(), "sigma", 12, PRESETS));
    expect("blocks" in blur).toBe(false);
    const pix = exportParams(setMode(defaultState(), "pixelate", PRESETS));
    expect("sigma" in pix).toBe(false);
  });

  it("serializes to parseable JSON with a trailing newline", () => {
    const s = setControl(defaultState(), "sigma", 12, PRESETS);
    const text = settingsJson(s);
    expect(text.endsWith("\n")).toBe(true);
    expect(JSON.parse(text)).toEqual(exportParams(s));
  });
});
