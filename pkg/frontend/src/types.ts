/** Payload shapes mirrored from the HTTP JSON API. */

export interface LabJson {
  L: number;
  a: number;
  b: number;
}

export interface LchJson {
  L: number;
  C: number;
  h: number;
}

export interface XyyJson {
  x: number;
  y: number;
  Y: number;
}

export interface SrgbJson {
  r: number;
  g: number;
  b: number;
  hex: string;
  clipped: boolean;
}

export interface PaletteColor {
  index: number;
  xyy: XyyJson;
  lab: LabJson;
  lch: LchJson;
  srgb: SrgbJson;
}

export interface ConceptsResponse {
  concepts: string[];
}

export interface WeightsJson {
  wa: number;
  wd: number;
}

/** Edge order: x1 dark-more, x2 light-more, x3 light-less, x4 dark-less. */
export interface MeritGraphJson {
  x1: number;
  x2: number;
  x3: number;
  x4: number;
}

export interface SalienceJson {
  value: number;
  source: string;
  consistent_with_lightness: boolean;
}

export type ColorSpec = { index: number } | { lab: LabJson };

export interface PredictRequest {
  merits?: [number, number, number, number];
  concept?: string;
  light?: ColorSpec;
  dark?: ColorSpec;
  weights?: WeightsJson;
  salience?: number;
}

export interface PredictionResponse {
  assignment: "dark_more" | "light_more";
  delta_s: number;
  signed_s: number;
  p_dark_more: number;
  weights: WeightsJson;
  salience: SalienceJson;
  association_merit: MeritGraphJson;
  darkness_merit: MeritGraphJson;
  combined_merit: MeritGraphJson;
}

export interface ScaleRequest {
  light: ColorSpec;
  dark: ColorSpec;
  concept?: string;
}

export interface ScaleStep {
  lab: LabJson;
  hex: string;
}

export interface MonotonicityJson {
  r_squared: number;
  pass: boolean;
  predicted: number[];
  degenerate: boolean;
}

export interface ScaleResponse {
  steps: ScaleStep[];
  lightness_delta: number;
  monotonicity: MonotonicityJson | null;
}

export interface StimulusRequest {
  light: ColorSpec;
  dark: ColorSpec;
  seed?: number;
  reversed?: boolean;
  orientation?: string;
  labels?: boolean;
}

export interface StimulusResponse {
  svg: string;
  cell_hexes: string[][];
  width: number;
  height: number;
  dataset: {
    seed: number;
    reversed: boolean;
    values: number[][];
  };
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
