/** UI control ranges and client-side clamping.
 *
 * Out-of-range slider input is clamped rather than rejected, so the UI can
 * never submit a spec the service would refuse. Values inside the UI range
 * but outside the 80 to 230 Hz model band are legal; the service flags them
 * with a reliability warning which the UI surfaces.
 */
import { MODEL_BAND_HZ, PULSE_SLOT_S } from "./types.js";
import type { RhythmicSpec, SinusoidalSpec, TactonSpec } from "./types.js";

export interface ControlRange {
  min: number;
  max: number;
  step: number;
}

export const CONTROL_RANGES: Record<string, ControlRange> = {
  amplitude: { min: 0, max: 1, step: 0.01 },
  carrier_freq: { min: 50, max: 300, step: 0.5 },
  envelope_freq: { min: 0, max: 10, step: 0.25 },
  duration: { min: 0.3, max: 6, step: 0.1 },
};

export function clamp(value: number, range: ControlRange): number {
  if (Number.isNaN(value)) {
    return range.min;
  }
  return Math.min(range.max, Math.max(range.min, value));
}

/** True when a carrier sits inside the band the predictor was trained for;
 * the slider highlights this interval. */
export function inModelBand(carrierHz: number): boolean {
  return carrierHz >= MODEL_BAND_HZ[0] && carrierHz <= MODEL_BAND_HZ[1];
}

export function slotsToDuration(nSlots: number): number {
  return nSlots * PULSE_SLOT_S;
}

export function clampSinusoidal(raw: {
  amplitude: number;
  carrier_freq: number;
  envelope_freq: number;
  duration: number;
}): SinusoidalSpec {
  return {
    type: "sinusoidal",
    amplitude: clamp(raw.amplitude, CONTROL_RANGES.amplitude),
    carrier_freq: clamp(raw.carrier_freq, CONTROL_RANGES.carrier_freq),
    envelope_freq: clamp(raw.envelope_freq, CONTROL_RANGES.envelope_freq),
    duration: clamp(raw.duration, CONTROL_RANGES.duration),
  };
}

export function clampRhythmic(raw: {
  amplitude: number;
  carrier_freq: number;
  pulses: number[];
}): RhythmicSpec {
  const pulses = raw.pulses.map((p) => (p ? 1 : 0));
  return {
    type: "rhythmic",
    amplitude: clamp(raw.amplitude, CONTROL_RANGES.amplitude),
    carrier_freq: clamp(raw.carrier_freq, CONTROL_RANGES.carrier_freq),
    pulses: pulses.length > 0 ? pulses : [1],
  };
}

export function specDuration(spec: TactonSpec): number {
  if (spec.type === "rhythmic") {
    return slotsToDuration(spec.pulses.length);
  }
  return spec.duration;
}
