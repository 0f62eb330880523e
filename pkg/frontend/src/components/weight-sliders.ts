/** Coupled weight sliders: association weight and darkness weight, locked to
 * sum 1. Moving either slider updates the other. */
import { el, showNumber } from "../format.js";
import type { SessionStore } from "../state.js";

export function mountWeightSliders(
  container: HTMLElement,
  store: SessionStore,
): void {
  const waValue = el("span", { "data-field": "wa" });
  const wdValue = el("span", { "data-field": "wd" });
  const waSlider = el("input", {
    type: "range",
    min: "0",
    max: "1",
    step: "0.05",
    "data-slider": "wa",
  });
  const wdSlider = el("input", {
    type: "range",
    min: "0",
    max: "1",
    step: "0.05",
    "data-slider": "wd",
  });

  waSlider.addEventListener("input", () => {
    void store.setWeightA(Number(waSlider.value));
  });
  wdSlider.addEventListener("input", () => {
    void store.setWeightD(Number(wdSlider.value));
  });

  container.append(
    el("div", { class: "slider-row" }, [
      el("label", {}, ["association weight ", waValue]),
      waSlider,
    ]),
    el("div", { class: "slider-row" }, [
      el("label", {}, ["darkness weight ", wdValue]),
      wdSlider,
    ]),
  );

  store.subscribe((session) => {
    waSlider.value = String(session.weights.wa);
    wdSlider.value = String(session.weights.wd);
    waValue.textContent = showNumber(session.weights.wa);
    wdValue.textContent = showNumber(session.weights.wd);
  });
}
