/** Waveform and spectrogram rendering.
 *
 * The geometry helpers are pure (sample arrays in, pixel coordinates or
 * RGBA buffers out) so they can be tested without a canvas; the draw*
 * functions are thin adapters onto a 2D context. Axes are fixed to the
 * pipeline extents: 0 to 6 s of padded signal and 0 to 500 Hz of spectrum.
 */

export const TIME_EXTENT_S: readonly [number, number] = [0, 6];
export const FREQ_EXTENT_HZ: readonly [number, number] = [0, 500];

export interface Point {
  x: number;
  y: number;
}

/** Map samples onto a polyline across the full canvas width; amplitude is
 * scaled symmetrically so that |value| = scale hits the top/bottom edge. */
export function waveformPolyline(
  samples: ArrayLike<number>,
  width: number,
  height: number,
  scale: number,
): Point[] {
  const n = samples.length;
  if (n === 0) {
    return [];
  }
  const mid = height / 2;
  const points: Point[] = new Array(n);
  for (let i = 0; i < n; i++) {
    const x = n === 1 ? 0 : (i / (n - 1)) * width;
    const y = mid - (samples[i] / scale) * mid;
    points[i] = { x, y };
  }
  return points;
}

/** Grayscale RGBA image of a (freq, time) magnitude matrix, low frequencies
 * at the bottom, intensity normalized to the matrix maximum. A zero matrix
 * renders fully dark. */
export function heatmapRgba(matrix: number[][]): {
  width: number;
  height: number;
  pixels: Uint8ClampedArray<ArrayBuffer>;
} {
  const height = matrix.length;
  const width = height > 0 ? matrix[0].length : 0;
  const pixels = new Uint8ClampedArray(new ArrayBuffer(width * height * 4));
  let peak = 0;
  for (const row of matrix) {
    for (const v of row) {
      if (v > peak) {
        peak = v;
      }
    }
  }
  for (let f = 0; f < height; f++) {
    const row = matrix[f];
    const y = height - 1 - f; // flip so frequency grows upward
    for (let t = 0; t < width; t++) {
      const level = peak > 0 ? Math.round((row[t] / peak) * 255) : 0;
      const o = (y * width + t) * 4;
      pixels[o] = level;
      pixels[o + 1] = level;
      pixels[o + 2] = level;
      pixels[o + 3] = 255;
    }
  }
  return { width, height, pixels };
}

/** Frequency (Hz) of the strongest bin, given the matrix and bin spacing;
 * null for an all-zero matrix. */
export function dominantFrequencyHz(matrix: number[][], freqStepHz: number): number | null {
  let best = 0;
  let bestRow = -1;
  matrix.forEach((row, f) => {
    for (const v of row) {
      if (v > best) {
        best = v;
        bestRow = f;
      }
    }
  });
  return bestRow >= 0 ? bestRow * freqStepHz : null;
}

export function axisTicks(extent: readonly [number, number], count: number): number[] {
  const [lo, hi] = extent;
  return Array.from({ length: count + 1 }, (_, i) => lo + ((hi - lo) * i) / count);
}

export function drawWaveform(
  ctx: CanvasRenderingContext2D,
  samples: ArrayLike<number>,
  scale: number,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#4dd0e1";
  ctx.lineWidth = 1;
  ctx.beginPath();
  waveformPolyline(samples, width, height, scale).forEach((p, i) => {
    if (i === 0) {
      ctx.moveTo(p.x, p.y);
    } else {
      ctx.lineTo(p.x, p.y);
    }
  });
  ctx.stroke();
}

export function drawHeatmap(ctx: CanvasRenderingContext2D, matrix: number[][]): void {
  const { width, height, pixels } = heatmapRgba(matrix);
  if (width === 0 || height === 0) {
    return;
  }
  const image = new ImageData(pixels, width, height);
  ctx.putImageData(image, 0, 0);
}
