/** Ten-swatch scale strip, monotonicity badge (red below the 0.8 screen),
 * and the sample SVG stimulus rendered from the current endpoints. */
import { el, showNumber } from "../format.js";
import type { SessionStore } from "../state.js";
import type { ScaleResponse, StimulusResponse } from "../types.js";

export function mountScalePreview(
  container: HTMLElement,
  store: SessionStore,
): void {
  const strip = el("div", { class: "scale-strip", "data-field": "scale-strip" });
  const lightnessDelta = el("span", { "data-field": "lightness-delta" });
  const badge = el("span", { class: "badge", "data-field": "monotonicity-badge" });
  const rSquared = el("span", { "data-field": "r-squared" });
  const stimulusBox = el("div", { class: "stimulus-box", "data-field": "stimulus" });
  const seedInput = el("input", {
    type: "number",
    value: "0",
    min: "0",
    "data-field": "stimulus-seed",
  });
  seedInput.addEventListener("change", () => {
    const seed = Number(seedInput.value);
    if (Number.isInteger(seed) && seed >= 0) {
      void store.setStimulusSeed(seed);
    }
  });

  container.append(
    strip,
    el("div", {}, ["lightness difference ", lightnessDelta]),
    el("div", {}, [badge, " r-squared ", rSquared]),
    el("div", { class: "seed-row" }, [el("label", {}, ["stimulus seed "]), seedInput]),
    stimulusBox,
  );

  const renderScale = (scale: ScaleResponse | null): void => {
    strip.replaceChildren();
    if (scale === null) {
      lightnessDelta.textContent = "";
      badge.textContent = "";
      badge.className = "badge";
      rSquared.textContent = "";
      return;
    }
    for (const step of scale.steps) {
      strip.append(
        el("div", {
          class: "scale-swatch",
          title: step.hex,
          "data-hex": step.hex,
          style: `background:${step.hex}`,
        }),
      );
    }
    lightnessDelta.textContent = showNumber(scale.lightness_delta);
    const report = scale.monotonicity;
    if (report === null) {
      badge.textContent = "no concept selected";
      badge.className = "badge badge-neutral";
      rSquared.textContent = "";
    } else if (report.degenerate) {
      badge.textContent = "degenerate";
      badge.className = "badge badge-fail";
      rSquared.textContent = showNumber(report.r_squared);
    } else if (report.pass) {
      badge.textContent = "monotone";
      badge.className = "badge badge-pass";
      rSquared.textContent = showNumber(report.r_squared);
    } else {
      badge.textContent = "non-monotone";
      badge.className = "badge badge-fail";
      rSquared.textContent = showNumber(report.r_squared);
    }
  };

  const renderStimulus = (stimulus: StimulusResponse | null): void => {
    if (stimulus === null) {
      stimulusBox.replaceChildren();
      return;
    }
    stimulusBox.innerHTML = stimulus.svg;
  };

  store.subscribe((session) => {
    renderScale(session.scale);
    renderStimulus(session.stimulus);
  });
}
