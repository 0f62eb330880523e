/** Prediction readout: assignment, semantic-distance gauge, p(dark-more),
 * weighting and salience echoes, and the combined-merit bipartite diagram
 * (edge thickness proportional to merit). */
import { el, showNumber } from "../format.js";
import type { SessionStore } from "../state.js";
import type { MeritGraphJson, PredictionResponse } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

// (x1) dark-more, (x2) light-more, (x3) light-less, (x4) dark-less
const EDGES: {
  key: keyof MeritGraphJson;
  from: [number, number];
  to: [number, number];
  labelAt: [number, number];
}[] = [
  { key: "x1", from: [40, 30], to: [200, 30], labelAt: [120, 22] },
  { key: "x2", from: [40, 90], to: [200, 30], labelAt: [95, 48] },
  { key: "x3", from: [40, 90], to: [200, 90], labelAt: [120, 108] },
  { key: "x4", from: [40, 30], to: [200, 90], labelAt: [95, 86] },
];

function svgNode(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function meritDiagram(merits: MeritGraphJson): SVGElement {
  const svg = svgNode("svg", {
    viewBox: "0 0 240 120",
    width: "240",
    height: "120",
    "data-diagram": "combined-merit",
  });
  for (const edge of EDGES) {
    const value = merits[edge.key];
    const line = svgNode("line", {
      x1: String(edge.from[0]),
      y1: String(edge.from[1]),
      x2: String(edge.to[0]),
      y2: String(edge.to[1]),
      stroke: "#444",
      "stroke-width": String(1 + 7 * value),
      "data-edge-line": edge.key,
    });
    const label = svgNode("text", {
      x: String(edge.labelAt[0]),
      y: String(edge.labelAt[1]),
      "font-size": "9",
      "data-edge": edge.key,
    });
    label.textContent = showNumber(value);
    svg.append(line, label);
  }
  const nodes: [string, number, number][] = [
    ["dark", 30, 30],
    ["light", 30, 90],
    ["more", 210, 30],
    ["less", 210, 90],
  ];
  for (const [name, x, y] of nodes) {
    const circle = svgNode("circle", {
      cx: String(x),
      cy: String(y),
      r: "12",
      fill: name === "dark" ? "#222" : name === "light" ? "#ddd" : "#f4f4f4",
      stroke: "#444",
    });
    const text = svgNode("text", {
      x: String(x),
      y: String(y + 24),
      "font-size": "9",
      "text-anchor": "middle",
    });
    text.textContent = name;
    svg.append(circle, text);
  }
  return svg;
}

export function mountPredictionPanel(
  container: HTMLElement,
  store: SessionStore,
): void {
  const assignment = el("div", { class: "assignment", "data-field": "assignment" });
  const deltaS = el("span", { "data-field": "delta-s" });
  const signedS = el("span", { "data-field": "signed-s" });
  const pDarkMore = el("span", { "data-field": "p-dark-more" });
  const gaugeFill = el("div", {
    class: "gauge-fill",
    role: "meter",
    "data-field": "gauge",
  });
  const predWa = el("span", { "data-field": "pred-wa" });
  const predWd = el("span", { "data-field": "pred-wd" });
  const salienceValue = el("span", { "data-field": "salience-value" });
  const salienceSource = el("span", { "data-field": "salience-source" });
  const diagramBox = el("div", { class: "diagram-box" });
  const body = el("div", { class: "prediction-body" }, [
    assignment,
    el("div", {}, ["semantic distance ", deltaS]),
    el("div", {}, ["signed distance ", signedS]),
    el("div", {}, ["p(dark is more) ", pDarkMore]),
    el("div", { class: "gauge" }, [gaugeFill]),
    el("div", {}, ["weights used ", predWa, " / ", predWd]),
    el("div", {}, ["darkness salience ", salienceValue, " (", salienceSource, ")"]),
    diagramBox,
  ]);
  const empty = el("div", { class: "empty", "data-field": "prediction-empty" }, [
    "choose a concept and both endpoints to see a prediction",
  ]);
  container.append(empty, body);

  const render = (prediction: PredictionResponse | null): void => {
    if (prediction === null) {
      body.style.display = "none";
      empty.style.display = "";
      return;
    }
    body.style.display = "";
    empty.style.display = "none";
    assignment.textContent =
      prediction.assignment === "dark_more" ? "dark maps to more" : "light maps to more";
    assignment.dataset.assignment = prediction.assignment;
    deltaS.textContent = showNumber(prediction.delta_s);
    signedS.textContent = showNumber(prediction.signed_s);
    pDarkMore.textContent = showNumber(prediction.p_dark_more);
    gaugeFill.style.width = `${prediction.p_dark_more * 100}%`;
    gaugeFill.setAttribute("aria-valuenow", showNumber(prediction.p_dark_more));
    predWa.textContent = showNumber(prediction.weights.wa);
    predWd.textContent = showNumber(prediction.weights.wd);
    salienceValue.textContent = showNumber(prediction.salience.value);
    salienceSource.textContent = prediction.salience.source;
    diagramBox.replaceChildren(meritDiagram(prediction.combined_merit));
  };

  render(null);
  store.subscribe((session) => render(session.prediction));
}
