import { describe, expect, it } from "vitest";

import {
  FREQ_EXTENT_HZ,
  TIME_EXTENT_S,
  axisTicks,
  dominantFrequencyHz,
  heatmapRgba,
  waveformPolyline,
} from "../src/render.js";

describe("waveformPolyline", () => {
  it("renders a zero waveform as a flat midline", () => {
    const points = waveformPolyline(new Float32Array(100), 600, 120, 0.3);
    expect(points.length).toBe(100);
    expect(points.every((p) => p.y === 60)).toBe(true);
    expect(points[0].x).toBe(0);
    expect(points[99].x).toBe(600);
  });

  it("maps |value| = scale to the canvas edges", () => {
    const points = waveformPolyline([0.3, -0.3, 0], 600, 120, 0.3);
    expect(points[0].y).toBe(0);
    expect(points[1].y).toBe(120);
    expect(points[2].y).toBe(60);
  });

  it("handles empty input", () => {
    expect(waveformPolyline([], 600, 120, 1)).toEqual([]);
  });
});

describe("heatmapRgba", () => {
  it("renders a zero matrix fully dark", () => {
    const { width, height, pixels } = heatmapRgba([
      [0, 0],
      [0, 0],
    ]);
    expect([width, height]).toEqual([2, 2]);
    for (let i = 0; i < pixels.length; i += 4) {
      expect(pixels[i]).toBe(0);
      expect(pixels[i + 3]).toBe(255);
    }
  });

  it("puts low frequencies at the bottom and peaks at full intensity", () => {
    // row 0 = lowest frequency; the peak sits in the high-frequency row
    const { pixels } = heatmapRgba([
      [0, 0],
      [4, 2],
    ]);
    // top image row (y=0) is the high-frequency row
    expect(pixels[0]).toBe(255);
    expect(pixels[4]).toBe(128);
    // bottom image row is the zero low-frequency row
    expect(pixels[8]).toBe(0);
    expect(pixels[12]).toBe(0);
  });
});

describe("dominantFrequencyHz", () => {
  it("finds the strongest bin in Hz", () => {
    const matrix = Array.from({ length: 251 }, (_, f) =>
      Array.from({ length: 10 }, () => (f === 50 ? 1 : 0)),
    );
    // bin 50 at 2 Hz spacing corresponds to a 100 Hz tone
    expect(dominantFrequencyHz(matrix, 2)).toBe(100);
  });

  it("returns null for silence", () => {
    expect(dominantFrequencyHz([[0], [0]], 2)).toBeNull();
  });
});

describe("axes", () => {
  it("covers 0 to 6 s and 0 to 500 Hz", () => {
    expect(TIME_EXTENT_S).toEqual([0, 6]);
    expect(FREQ_EXTENT_HZ).toEqual([0, 500]);
    expect(axisTicks(TIME_EXTENT_S, 6)).toEqual([0, 1, 2, 3, 4, 5, 6]);
    expect(axisTicks(FREQ_EXTENT_HZ, 5)).toEqual([0, 100, 200, 300, 400, 500]);
  });
});
