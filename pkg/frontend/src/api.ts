/** Thin typed client for the engine's HTTP API; all math stays server-side. */
import type {
  ApiErrorBody,
  ConceptsResponse,
  PaletteColor,
  PredictRequest,
  PredictionResponse,
  ScaleRequest,
  ScaleResponse,
  StimulusRequest,
  StimulusResponse,
} from "./types.js";

export const API_BASE = "/api/v1";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly detail: unknown,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(`${API_BASE}${path}`, init);
  } catch (err) {
    throw new ApiError("network", `API unreachable: ${String(err)}`, null, 0);
  }
  let body: unknown;
  try {
    body = await resp.json();
  } catch {
    body = null;
  }
  if (!resp.ok) {
    const e = (body ?? {}) as Partial<ApiErrorBody>;
    throw new ApiError(
      e.code ?? "http_error",
      e.message ?? `request failed with status ${resp.status}`,
      e.detail ?? null,
      resp.status,
    );
  }
  return body as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export const getColors = (): Promise<PaletteColor[]> =>
  request<PaletteColor[]>("/colors");

export const getConcepts = (): Promise<ConceptsResponse> =>
  request<ConceptsResponse>("/concepts");

export const postPredict = (body: PredictRequest): Promise<PredictionResponse> =>
  post<PredictionResponse>("/predict", body);

export const postScale = (body: ScaleRequest): Promise<ScaleResponse> =>
  post<ScaleResponse>("/scale", body);

export const postStimulus = (body: StimulusRequest): Promise<StimulusResponse> =>
  post<StimulusResponse>("/stimulus", body);
