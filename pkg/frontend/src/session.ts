/** Client-side design session state.
 *
 * History is append-only within a session and capped; when the cap is hit
 * the oldest snapshot is handed to an export callback before eviction so no
 * design is silently lost. The comparison slot holds an optional second
 * (spec, prediction) pair for A/B work.
 */
import type { RatingTriple, TactonSpec } from "./types.js";

export const HISTORY_CAP = 200;

export interface Snapshot {
  spec: TactonSpec;
  prediction: RatingTriple;
  at: number;
}

export interface SessionExport {
  endpoint: string;
  current: TactonSpec | null;
  history: Snapshot[];
  comparison: Snapshot | null;
}

export interface RatingDeltas {
  roughness: number;
  valence: number;
  arousal: number;
}

export class DesignSession {
  current: TactonSpec | null = null;
  comparison: Snapshot | null = null;
  private readonly snapshots: Snapshot[] = [];

  constructor(
    public readonly endpoint: string,
    private readonly onEvict: (s: Snapshot) => void = () => {},
  ) {}

  get history(): readonly Snapshot[] {
    return this.snapshots;
  }

  record(spec: TactonSpec, prediction: RatingTriple, at: number = Date.now()): Snapshot {
    const snap: Snapshot = { spec, prediction, at };
    this.snapshots.push(snap);
    while (this.snapshots.length > HISTORY_CAP) {
      const evicted = this.snapshots.shift();
      if (evicted) {
        this.onEvict(evicted);
      }
    }
    return snap;
  }

  /** The snapshot just before the latest one, shown ghosted behind the
   * gauges so each prediction can be read against the previous edit. */
  previous(): Snapshot | null {
    return this.snapshots.length >= 2 ? this.snapshots[this.snapshots.length - 2] : null;
  }

  latest(): Snapshot | null {
    return this.snapshots.length > 0 ? this.snapshots[this.snapshots.length - 1] : null;
  }

  pinComparison(snap: Snapshot | null = null): void {
    this.comparison = snap ?? this.latest();
  }

  /** Per-dimension differences between the latest prediction and the pinned
   * comparison (latest minus comparison). */
  comparisonDeltas(): RatingDeltas | null {
    const a = this.latest();
    const b = this.comparison;
    if (!a || !b) {
      return null;
    }
    return {
      roughness: a.prediction.roughness - b.prediction.roughness,
      valence: a.prediction.valence - b.prediction.valence,
      arousal: a.prediction.arousal - b.prediction.arousal,
    };
  }

  exportJson(): string {
    const payload: SessionExport = {
      endpoint: this.endpoint,
      current: this.current,
      history: this.snapshots,
      comparison: this.comparison,
    };
    return JSON.stringify(payload, null, 2);
  }

  static importJson(text: string, onEvict?: (s: Snapshot) => void): DesignSession {
    const payload = JSON.parse(text) as SessionExport;
    if (!Array.isArray(payload.history)) {
      throw new Error("session import: history must be an array");
    }
    const session = new DesignSession(payload.endpoint, onEvict);
    session.current = payload.current ?? null;
    for (const snap of payload.history) {
      session.record(snap.spec, snap.prediction, snap.at);
    }
    session.comparison = payload.comparison ?? null;
    return session;
  }
}
