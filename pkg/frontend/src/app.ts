/** Playground assembly: controls, gauges, history, and canvases wired to
 * the service. The returned handle exposes the DOM nodes and programmatic
 * edit entry points so automated tests can drive the same code paths a
 * designer would. */
import { ServiceClient } from "./api.js";
import { clampSinusoidal, inModelBand } from "./controls.js";
import { LivePredictor, DEBOUNCE_MS } from "./live.js";
import { drawHeatmap, drawWaveform } from "./render.js";
import { decodeWaveformB64 } from "./api.js";
import { DesignSession } from "./session.js";
import { specViolations } from "./schema.js";
import type { LiveUpdate } from "./live.js";
import type { TactonSpec } from "./types.js";

export interface PlaygroundOptions {
  endpoint: string;
  debounceMs?: number;
  /** Hook invoked after each applied prediction; tests use it to await
   * gauge updates without polling. */
  onApplied?: (u: LiveUpdate) => void;
}

export interface Playground {
  root: HTMLElement;
  session: DesignSession;
  client: ServiceClient;
  gauges: { roughness: HTMLElement; valence: HTMLElement; arousal: HTMLElement };
  ghost: HTMLElement;
  warningsEl: HTMLElement;
  errorEl: HTMLElement;
  historyCountEl: HTMLElement;
  deltasEl: HTMLElement;
  /** Apply an edited spec: clamp, validate, debounce, predict. */
  edit(spec: TactonSpec): void;
  /** Convenience for the amplitude slider on a sinusoidal design. */
  editAmplitude(value: number): void;
  pinComparison(): void;
  refreshVisuals(spec: TactonSpec): Promise<void>;
}

const GAUGE_DIMS = ["roughness", "valence", "arousal"] as const;

function el(tag: string, className: string, parent: HTMLElement): HTMLElement {
  const node = parent.ownerDocument.createElement(tag);
  node.className = className;
  parent.appendChild(node);
  return node;
}

export function createPlayground(root: HTMLElement, opts: PlaygroundOptions): Playground {
  const client = new ServiceClient(opts.endpoint);
  const session = new DesignSession(opts.endpoint);

  const gaugeRow = el("div", "gauges", root);
  const gauges = {
    roughness: el("output", "gauge gauge-roughness", gaugeRow),
    valence: el("output", "gauge gauge-valence", gaugeRow),
    arousal: el("output", "gauge gauge-arousal", gaugeRow),
  };
  const ghost = el("div", "gauge-ghost", gaugeRow);
  const warningsEl = el("div", "warnings", root);
  const errorEl = el("div", "error-panel", root);
  const historyCountEl = el("span", "history-count", root);
  const deltasEl = el("div", "compare-deltas", root);
  historyCountEl.textContent = "0";

  let lastSpec: TactonSpec = {
    type: "sinusoidal",
    amplitude: 0,
    carrier_freq: 155,
    envelope_freq: 4,
    duration: 1,
  };

  const predictor = new LivePredictor(
    client,
    {
      onUpdate: (u) => {
        const prev = session.latest();
        session.record(u.spec, u.ratings, Date.now());
        for (const dim of GAUGE_DIMS) {
          gauges[dim].textContent = u.ratings[dim].toFixed(1);
        }
        ghost.textContent = prev
          ? GAUGE_DIMS.map((d) => prev.prediction[d].toFixed(1)).join(" / ")
          : "";
        warningsEl.textContent = u.warnings.join("; ");
        errorEl.textContent = "";
        historyCountEl.textContent = String(session.history.length);
        const deltas = session.comparisonDeltas();
        deltasEl.textContent = deltas
          ? GAUGE_DIMS.map((d) => `${d} ${deltas[d] >= 0 ? "+" : ""}${deltas[d].toFixed(1)}`).join(
              "  ",
            )
          : "";
        opts.onApplied?.(u);
      },
      onError: (err) => {
        errorEl.textContent = err instanceof Error ? err.message : String(err);
      },
    },
    opts.debounceMs ?? DEBOUNCE_MS,
  );

  const waveCanvas = root.ownerDocument.createElement("canvas");
  waveCanvas.className = "waveform";
  waveCanvas.width = 600;
  waveCanvas.height = 120;
  root.appendChild(waveCanvas);
  const heatCanvas = root.ownerDocument.createElement("canvas");
  heatCanvas.className = "spectrogram";
  root.appendChild(heatCanvas);

  function edit(spec: TactonSpec): void {
    const violations = specViolations(spec);
    if (violations.length > 0) {
      // clamping should make this unreachable for slider input; complex
      // track editors can still produce invalid shapes
      errorEl.textContent = violations.join("; ");
      return;
    }
    lastSpec = spec;
    session.current = spec;
    if ("carrier_freq" in spec) {
      root.classList.toggle("out-of-band", !inModelBand(spec.carrier_freq));
    }
    predictor.submit(spec);
  }

  function editAmplitude(value: number): void {
    const base =
      lastSpec.type === "sinusoidal"
        ? lastSpec
        : { type: "sinusoidal" as const, amplitude: 0, carrier_freq: 155, envelope_freq: 4, duration: 1 };
    edit(clampSinusoidal({ ...base, amplitude: value }));
  }

  async function refreshVisuals(spec: TactonSpec): Promise<void> {
    try {
      const res = await client.synthesize(spec);
      const samples = decodeWaveformB64(res.waveform.data_b64);
      const waveCtx = waveCanvas.getContext("2d");
      if (waveCtx) {
        drawWaveform(waveCtx, samples, 0.3);
      }
      const layer = res.spectrograms.preview[0];
      if (layer && layer.length > 0) {
        heatCanvas.width = layer[0].length;
        heatCanvas.height = layer.length;
        const heatCtx = heatCanvas.getContext("2d");
        if (heatCtx) {
          drawHeatmap(heatCtx, layer);
        }
      }
      warningsEl.textContent = res.validation.warnings.join("; ");
    } catch (err) {
      errorEl.textContent = err instanceof Error ? err.message : String(err);
    }
  }

  return {
    root,
    session,
    client,
    gauges,
    ghost,
    warningsEl,
    errorEl,
    historyCountEl,
    deltasEl,
    edit,
    editAmplitude,
    pinComparison: () => session.pinComparison(),
    refreshVisuals,
  };
}
