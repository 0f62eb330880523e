/** Concept picker, palette-grid endpoint pickers, and custom Lab entry.
 *
 * Custom Lab values are range-checked client-side only; all interpretation
 * happens server-side.
 */
import { el } from "../format.js";
import type { SessionStore } from "../state.js";
import type { ColorSpec, PaletteColor } from "../types.js";

const LAB_RANGES: Record<string, [number, number]> = {
  L: [0, 100],
  a: [-128, 128],
  b: [-128, 128],
};

function specLabel(spec: ColorSpec | null): string {
  if (spec === null) return "none";
  if ("index" in spec) return `palette #${spec.index}`;
  return `Lab(${spec.lab.L}, ${spec.lab.a}, ${spec.lab.b})`;
}

function paletteGrid(
  colors: PaletteColor[],
  endpoint: "light" | "dark",
  onPick: (spec: ColorSpec) => void,
): HTMLElement {
  const grid = el("div", { class: "palette-grid", "data-grid": endpoint });
  for (const color of colors) {
    const swatch = el("button", {
      class: "palette-swatch",
      title: `#${color.index} ${color.srgb.hex}`,
      "data-index": String(color.index),
      "data-hex": color.srgb.hex,
      style: `background:${color.srgb.hex}`,
    });
    swatch.addEventListener("click", () => onPick({ index: color.index }));
    grid.append(swatch);
  }
  return grid;
}

function labEntry(
  endpoint: "light" | "dark",
  onPick: (spec: ColorSpec) => void,
): HTMLElement {
  const inputs: Record<string, HTMLInputElement> = {};
  const row = el("div", { class: "lab-entry" });
  for (const channel of ["L", "a", "b"] as const) {
    const input = el("input", {
      type: "number",
      placeholder: channel,
      "data-lab": `${endpoint}-${channel}`,
    });
    inputs[channel] = input;
    row.append(input);
  }
  const message = el("span", { class: "lab-message", "data-lab-message": endpoint });
  const apply = el("button", { "data-lab-apply": endpoint }, ["use Lab"]);
  apply.addEventListener("click", () => {
    const values: Record<string, number> = {};
    for (const [channel, [lo, hi]] of Object.entries(LAB_RANGES)) {
      const raw = inputs[channel]!.value;
      const value = Number(raw);
      if (raw.trim() === "" || !Number.isFinite(value) || value < lo || value > hi) {
        message.textContent = `${channel} must be in [${lo}, ${hi}]`;
        return;
      }
      values[channel] = value;
    }
    message.textContent = "";
    onPick({ lab: { L: values.L!, a: values.a!, b: values.b! } });
  });
  row.append(apply, message);
  return row;
}

export function mountPalettePicker(
  container: HTMLElement,
  store: SessionStore,
  colors: PaletteColor[],
  concepts: string[],
): void {
  const conceptSelect = el("select", { "data-field": "concept" });
  conceptSelect.append(el("option", { value: "" }, ["select a concept"]));
  for (const concept of concepts) {
    conceptSelect.append(el("option", { value: concept }, [concept]));
  }
  conceptSelect.addEventListener("change", () => {
    void store.setConcept(conceptSelect.value === "" ? null : conceptSelect.value);
  });

  const lightLabel = el("span", { "data-selection": "light" }, ["none"]);
  const darkLabel = el("span", { "data-selection": "dark" }, ["none"]);
  container.append(
    el("div", { class: "concept-row" }, [
      el("label", {}, ["concept "]),
      conceptSelect,
    ]),
    el("h3", {}, ["light endpoint: ", lightLabel]),
    paletteGrid(colors, "light", (spec) => void store.setLight(spec)),
    labEntry("light", (spec) => void store.setLight(spec)),
    el("h3", {}, ["dark endpoint: ", darkLabel]),
    paletteGrid(colors, "dark", (spec) => void store.setDark(spec)),
    labEntry("dark", (spec) => void store.setDark(spec)),
  );

  store.subscribe((session) => {
    lightLabel.textContent = specLabel(session.light);
    darkLabel.textContent = specLabel(session.dark);
  });
}
