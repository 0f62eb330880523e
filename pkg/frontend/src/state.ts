/** Design-session store: selections, coupled weights, latest API results.
 *
 * Invariants: wa + wd === 1 at all times; results shown always belong to the
 * newest inputs (stale responses are dropped, last write wins).
 */
import { ApiError, postPredict, postScale, postStimulus } from "./api.js";
import type {
  ColorSpec,
  PredictRequest,
  PredictionResponse,
  ScaleResponse,
  StimulusResponse,
  WeightsJson,
} from "./types.js";

export interface DesignSession {
  concept: string | null;
  light: ColorSpec | null;
  dark: ColorSpec | null;
  weights: WeightsJson;
  salience: number | null;
  stimulusSeed: number;
  prediction: PredictionResponse | null;
  scale: ScaleResponse | null;
  stimulus: StimulusResponse | null;
  error: string | null;
  pending: boolean;
}

export type Listener = (session: DesignSession) => void;

// drop float dust so displayed weights stay exact grid values
const snap = (v: number): number => Number(v.toFixed(10));

export const DEFAULT_WEIGHTS: WeightsJson = { wa: 0.7, wd: 0.3 };

export class SessionStore {
  private session: DesignSession = {
    concept: null,
    light: null,
    dark: null,
    weights: { ...DEFAULT_WEIGHTS },
    salience: null,
    stimulusSeed: 0,
    prediction: null,
    scale: null,
    stimulus: null,
    error: null,
    pending: false,
  };
  private listeners: Listener[] = [];
  private requestVersion = 0;

  get(): DesignSession {
    return this.session;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.session);
  }

  private patch(update: Partial<DesignSession>): void {
    this.session = { ...this.session, ...update };
    this.emit();
  }

  setConcept(concept: string | null): Promise<void> {
    this.patch({ concept });
    return this.refresh();
  }

  setLight(light: ColorSpec | null): Promise<void> {
    this.patch({ light });
    return this.refresh();
  }

  setDark(dark: ColorSpec | null): Promise<void> {
    this.patch({ dark });
    return this.refresh();
  }

  setSalience(salience: number | null): Promise<void> {
    this.patch({ salience });
    return this.refresh();
  }

  setStimulusSeed(stimulusSeed: number): Promise<void> {
    this.patch({ stimulusSeed });
    return this.refresh();
  }

  /** Move one weight; the other follows so the pair always sums to 1. */
  setWeightA(wa: number): Promise<void> {
    const a = snap(wa);
    this.patch({ weights: { wa: a, wd: snap(1 - a) } });
    return this.refresh();
  }

  setWeightD(wd: number): Promise<void> {
    const d = snap(wd);
    this.patch({ weights: { wa: snap(1 - d), wd: d } });
    return this.refresh();
  }

  private predictRequest(): PredictRequest | null {
    const { concept, light, dark, weights, salience } = this.session;
    if (concept === null || light === null || dark === null) return null;
    const body: PredictRequest = { concept, light, dark, weights };
    if (salience !== null) body.salience = salience;
    return body;
  }

  /** Re-query the API for the current inputs; stale responses are dropped. */
  async refresh(): Promise<void> {
    const version = ++this.requestVersion;
    const body = this.predictRequest();
    if (body === null) {
      this.patch({ prediction: null, scale: null, stimulus: null, error: null });
      return;
    }
    this.patch({ pending: true });
    const { concept, light, dark } = body;
    try {
      const [prediction, scale, stimulus] = await Promise.all([
        postPredict(body),
        postScale({ light: light!, dark: dark!, concept }),
        postStimulus({ light: light!, dark: dark!, seed: this.session.stimulusSeed }),
      ]);
      if (version !== this.requestVersion) return; // superseded
      this.patch({ prediction, scale, stimulus, error: null, pending: false });
    } catch (err) {
      if (version !== this.requestVersion) return;
      const message =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      // inputs stay untouched so the user can correct and retry
      this.patch({ error: message, pending: false });
    }
  }
}
