/** The twenty canonical Tacton specs, mirroring docs/schema/fixtures. */
import type { TactonSpec } from "../src/types.js";

function repeat(pattern: number[], times: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < times; i++) {
    out.push(...pattern);
  }
  return out;
}

export const CANONICAL_SPECS: TactonSpec[] = [
  { type: "sinusoidal", amplitude: 1.0, carrier_freq: 155.0, envelope_freq: 4.0, duration: 1.0 },
  { type: "sinusoidal", amplitude: 0.5, carrier_freq: 80.0, envelope_freq: 0.0, duration: 2.0 },
  { type: "sinusoidal", amplitude: 0.25, carrier_freq: 230.0, envelope_freq: 8.0, duration: 0.5 },
  { type: "sinusoidal", amplitude: 0.75, carrier_freq: 120.5, envelope_freq: 2.5, duration: 1.5 },
  { type: "sinusoidal", amplitude: 0.0, carrier_freq: 155.0, envelope_freq: 0.0, duration: 0.3 },
  { type: "sinusoidal", amplitude: 1.0, carrier_freq: 300.0, envelope_freq: 10.0, duration: 6.0 },
  { type: "sinusoidal", amplitude: 0.125, carrier_freq: 50.0, envelope_freq: 1.0, duration: 3.0 },
  { type: "sinusoidal", amplitude: 0.9, carrier_freq: 187.5, envelope_freq: 6.25, duration: 2.25 },
  { type: "rhythmic", amplitude: 1.0, carrier_freq: 155.0, pulses: repeat([1, 1, 0, 0], 16) },
  { type: "rhythmic", amplitude: 0.5, carrier_freq: 80.0, pulses: repeat([1], 32) },
  { type: "rhythmic", amplitude: 0.75, carrier_freq: 230.0, pulses: repeat([1, 0], 8) },
  { type: "rhythmic", amplitude: 0.3, carrier_freq: 100.0, pulses: [1, 1, 1, 0, 0, 0, 1, 0] },
  { type: "rhythmic", amplitude: 1.0, carrier_freq: 155.0, pulses: [1] },
  { type: "rhythmic", amplitude: 0.6, carrier_freq: 210.0, pulses: repeat([0, 1], 32) },
  {
    type: "complex",
    envelope_track: [
      [0.0, 0.0],
      [0.5, 1.0],
      [1.0, 0.0],
    ],
    frequency_track: [
      [0.0, 80.0],
      [1.0, 230.0],
    ],
    duration: 1.0,
  },
  {
    type: "complex",
    envelope_track: [
      [0.0, 1.0],
      [2.0, 1.0],
    ],
    frequency_track: [
      [0.0, 155.0],
      [2.0, 155.0],
    ],
    duration: 2.0,
  },
  {
    type: "complex",
    envelope_track: [
      [0.0, 0.2],
      [0.75, 0.8],
      [1.5, 0.4],
    ],
    frequency_track: [
      [0.0, 100.0],
      [0.5, 200.0],
      [1.5, 120.0],
    ],
    duration: 1.5,
  },
  {
    type: "complex",
    envelope_track: [
      [0.0, 0.0],
      [0.1, 1.0],
      [0.9, 1.0],
      [1.0, 0.0],
    ],
    frequency_track: [
      [0.0, 90.0],
      [1.0, 90.0],
    ],
    duration: 1.0,
  },
  {
    type: "complex",
    envelope_track: [
      [0.0, 0.5],
      [3.0, 0.5],
    ],
    frequency_track: [
      [0.0, 60.0],
      [1.5, 250.0],
      [3.0, 60.0],
    ],
    duration: 3.0,
  },
  {
    type: "complex",
    envelope_track: [
      [0.0, 1.0],
      [0.5, 0.25],
      [4.0, 0.75],
    ],
    frequency_track: [
      [0.0, 230.0],
      [4.0, 80.0],
    ],
    duration: 4.0,
  },
];
