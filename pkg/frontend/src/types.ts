/** Tacton spec variants, mirroring the service JSON schema exactly. */

export interface SinusoidalSpec {
  type: "sinusoidal";
  amplitude: number;
  carrier_freq: number;
  envelope_freq: number;
  duration: number;
}

export interface RhythmicSpec {
  type: "rhythmic";
  amplitude: number;
  carrier_freq: number;
  pulses: number[];
}

export type Breakpoint = [number, number];

export interface ComplexSpec {
  type: "complex";
  envelope_track: Breakpoint[];
  frequency_track: Breakpoint[];
  duration: number;
}

export type TactonSpec = SinusoidalSpec | RhythmicSpec | ComplexSpec;

export interface RatingTriple {
  roughness: number;
  valence: number;
  arousal: number;
}

export interface WaveformPayload {
  data_b64: string;
  sample_rate: number;
  units: string;
  length: number;
}

export interface SpectrogramPayload {
  channels: string[];
  freq_resolution_hz: number;
  hop_s: number;
  preview: number[][][];
}

export interface ValidationPayload {
  ok: boolean;
  violations: string[];
  warnings: string[];
}

export interface SynthesizeResponse {
  waveform: WaveformPayload;
  spectrograms: SpectrogramPayload;
  validation: ValidationPayload;
}

export interface PredictResponse {
  ratings: RatingTriple;
  raw: RatingTriple;
  warnings: string[];
}

export interface ModelInfoResponse {
  config: Record<string, unknown>;
  channels: string[];
  version: number;
}

export interface ServiceErrorBody {
  error: { code: string; message: string; [k: string]: unknown };
}

/** Rhythm grid resolution in seconds; 64 slots make a 2 s Tacton. */
export const PULSE_SLOT_S = 0.03125;

/** Carrier band the predictor was designed around, in Hz. */
export const MODEL_BAND_HZ: readonly [number, number] = [80, 230];
