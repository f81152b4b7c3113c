/** Debounced live prediction with stale-response discarding.
 *
 * Every edit calls submit(); after the debounce interval the latest spec is
 * POSTed to /predict. Responses carry the sequence number of the request
 * that produced them, and anything older than the newest applied response
 * is dropped, so rapid edits can never leave an outdated prediction on the
 * gauges.
 */
import { ServiceClient } from "./api.js";
import type { RatingTriple, TactonSpec } from "./types.js";

export const DEBOUNCE_MS = 250;

export interface LiveUpdate {
  spec: TactonSpec;
  ratings: RatingTriple;
  raw: RatingTriple;
  warnings: string[];
  seq: number;
}

export interface LivePredictorHooks {
  onUpdate: (u: LiveUpdate) => void;
  onError?: (err: unknown) => void;
}

export class LivePredictor {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pendingSpec: TactonSpec | null = null;
  private nextSeq = 0;
  private lastApplied = -1;
  private inflight = 0;

  constructor(
    private readonly client: ServiceClient,
    private readonly hooks: LivePredictorHooks,
    private readonly debounceMs: number = DEBOUNCE_MS,
  ) {}

  /** Register an edit; the request fires debounceMs after the last call. */
  submit(spec: TactonSpec): void {
    this.pendingSpec = spec;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.debounceMs);
  }

  /** Send the pending spec immediately, bypassing the debounce. */
  flush(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    return this.fire();
  }

  get inflightCount(): number {
    return this.inflight;
  }

  private async fire(): Promise<void> {
    const spec = this.pendingSpec;
    if (spec === null) {
      return;
    }
    this.pendingSpec = null;
    const seq = this.nextSeq++;
    this.inflight++;
    try {
      const res = await this.client.predict(spec);
      if (seq <= this.lastApplied) {
        return; // a newer edit already answered
      }
      this.lastApplied = seq;
      this.hooks.onUpdate({
        spec,
        ratings: res.ratings,
        raw: res.raw,
        warnings: res.warnings,
        seq,
      });
    } catch (err) {
      if (seq > this.lastApplied) {
        this.hooks.onError?.(err);
      }
    } finally {
      this.inflight--;
    }
  }
}
