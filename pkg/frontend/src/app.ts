/** Root composition: loads palette and concepts, wires panels to the store. */
import { getColors, getConcepts } from "./api.js";
import { mountErrorBanner } from "./components/error-banner.js";
import { mountPalettePicker } from "./components/palette-picker.js";
import { mountPredictionPanel } from "./components/prediction-panel.js";
import { mountScalePreview } from "./components/scale-preview.js";
import { mountWeightSliders } from "./components/weight-sliders.js";
import { el } from "./format.js";
import { SessionStore } from "./state.js";

export interface App {
  store: SessionStore;
}

export async function mountApp(root: HTMLElement): Promise<App> {
  const store = new SessionStore();
  const [colors, conceptsResponse] = await Promise.all([
    getColors(),
    getConcepts(),
  ]);

  const pickerPanel = el("section", { class: "panel", "data-panel": "picker" });
  const weightsPanel = el("section", { class: "panel", "data-panel": "weights" });
  const predictionPanel = el("section", { class: "panel", "data-panel": "prediction" });
  const scalePanel = el("section", { class: "panel", "data-panel": "scale" });

  root.replaceChildren();
  mountErrorBanner(root, store);
  root.append(pickerPanel, weightsPanel, predictionPanel, scalePanel);

  mountPalettePicker(pickerPanel, store, colors, conceptsResponse.concepts);
  mountWeightSliders(weightsPanel, store);
  mountPredictionPanel(predictionPanel, store);
  mountScalePreview(scalePanel, store);

  // paint the initial state (default weights shown before any interaction)
  await store.refresh();
  return { store };
}
