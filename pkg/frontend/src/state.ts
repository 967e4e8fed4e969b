// Session state and the edit -> recompute loop.
//
// Drags call preview() (debounced 150 ms); releases call commit() which
// flushes immediately. Every dispatch validates the document client-side,
// fires region and maxvel together, and a LatestGate token discards
// responses that belong to a superseded edit, so the displayed result always
// matches the latest committed state.

import { ApiClient, ApiError } from "./api.js";
import { Debouncer } from "./debounce.js";
import { polygonArea } from "./geometry.js";
import { LatestGate } from "./latest.js";
import { SchemaViolation, validateStance } from "./schema.js";
import {
  ApiDocument,
  ApiErrorBody,
  MaxvelData,
  OptionOverrides,
  RegionData,
  StanceDocument,
} from "./types.js";

export interface ExplorerState {
  doc: StanceDocument;
  options: OptionOverrides;
  dirty: boolean;
  inFlight: boolean;
  region: RegionData | null;
  maxvel: MaxvelData | null;
  regionArea: number;
  error: (ApiErrorBody & { status?: number }) | null;
  generation: number; // bumps whenever a fresh result lands
}

export type Mutator = (doc: StanceDocument) => void;
export type Listener = (state: ExplorerState) => void;

const DEBOUNCE_MS = 150;

export class ExplorerStore {
  private state: ExplorerState;
  private listeners: Listener[] = [];
  private debouncer: Debouncer;
  private gate = new LatestGate();

  constructor(private api: ApiClient, doc: StanceDocument,
              options: OptionOverrides = {}, debounceMs: number = DEBOUNCE_MS) {
    validateStance(doc);
    this.debouncer = new Debouncer(debounceMs);
    this.state = {
      doc,
      options,
      dirty: true,
      inFlight: false,
      region: null,
      maxvel: null,
      regionArea: 0,
      error: null,
      generation: 0,
    };
  }

  getState(): ExplorerState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const l of this.listeners) l(this.state);
  }

  private mutate(mutator: Mutator): StanceDocument {
    const next = structuredClone(this.state.doc);
    mutator(next);
    return next;
  }

  /** Slider drag: update the document, recompute after the quiet period. */
  preview(mutator: Mutator): void {
    const next = this.mutate(mutator);
    this.state = { ...this.state, doc: next, dirty: true };
    this.notify();
    this.debouncer.schedule(() => void this.dispatch());
  }

  /** Drag end / discrete edit: update and recompute immediately. */
  commit(mutator?: Mutator): Promise<void> {
    if (mutator) {
      const next = this.mutate(mutator);
      this.state = { ...this.state, doc: next, dirty: true };
      this.notify();
    }
    this.debouncer.cancel();
    return this.dispatch();
  }

  /** Replace the whole document (session import). */
  load(doc: StanceDocument): Promise<void> {
    validateStance(doc);
    this.state = { ...this.state, doc: structuredClone(doc), dirty: true };
    this.notify();
    this.debouncer.cancel();
    return this.dispatch();
  }

  setOptions(options: OptionOverrides): Promise<void> {
    this.state = { ...this.state, options, dirty: true };
    this.notify();
    this.debouncer.cancel();
    return this.dispatch();
  }

  private async dispatch(): Promise<void> {
    const doc = this.state.doc;
    try {
      validateStance(doc);
    } catch (err) {
      if (err instanceof SchemaViolation) {
        this.state = {
          ...this.state,
          error: { code: "client_validation", stage: "client", message: err.message, field_path: err.fieldPath },
        };
        this.notify();
        return;
      }
      throw err;
    }
    const token = this.gate.issue();
    this.state = { ...this.state, inFlight: true };
    this.notify();

    const regionPromise = this.api.region(doc, this.state.options);
    const maxvelPromise = doc.impact ? this.api.maxvel(doc, this.state.options) : null;
    const outcomes = await Promise.allSettled(
      maxvelPromise ? [regionPromise, maxvelPromise] : [regionPromise]);

    if (!this.gate.isCurrent(token)) {
      return; // stale: a newer edit was committed while this ran
    }
    let failure: (ApiErrorBody & { status?: number }) | null = null;
    for (const outcome of outcomes) {
      if (outcome.status === "rejected") {
        const err = outcome.reason;
        if ((err as Error)?.name === "AbortError") {
          return; // superseded request; the newer dispatch owns the state
        }
        failure = err instanceof ApiError
          ? { ...err.body, status: err.status }
          : { code: "network", stage: "transport", message: String(err) };
        break;
      }
    }
    const region = outcomes[0].status === "fulfilled"
      ? (outcomes[0] as PromiseFulfilledResult<ApiDocument<RegionData>>).value
      : null;
    const maxvel = maxvelPromise && outcomes[1]?.status === "fulfilled"
      ? (outcomes[1] as PromiseFulfilledResult<ApiDocument<MaxvelData>>).value
      : null;
    if (failure) {
      this.state = { ...this.state, inFlight: false, error: failure };
      this.notify();
      return;
    }
    const regionData = region ? region.data : null;
    this.state = {
      ...this.state,
      dirty: false,
      inFlight: false,
      error: null,
      region: regionData,
      maxvel: maxvel ? maxvel.data : null,
      regionArea: regionData ? polygonArea(regionData.inner_vertices) : 0,
      generation: this.state.generation + 1,
    };
    this.notify();
  }
}
