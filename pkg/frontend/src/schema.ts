/** Canonical Tacton spec serialization.
 *
 * The service publishes fixture files (docs/schema/fixtures) in a fixed
 * layout: two-space indentation, fields in declaration order, floats with
 * an explicit decimal point, rhythm pulses as bare integers. This module
 * reproduces that layout byte for byte so a serialized spec can be compared
 * against the published fixtures directly.
 */
import type { Breakpoint, TactonSpec } from "./types.js";

/** Format a float the way the service does (shortest round-trip decimal,
 * integers rendered with a trailing ".0"). Only plain decimal notation is
 * supported; magnitudes outside [1e-4, 1e16) would switch to exponent
 * notation inconsistently between runtimes and are rejected. */
export function canonicalFloat(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite number in spec: ${x}`);
  }
  const mag = Math.abs(x);
  if (mag !== 0 && (mag < 1e-4 || mag >= 1e16)) {
    throw new Error(`magnitude out of canonical range: ${x}`);
  }
  if (Number.isInteger(x)) {
    return x.toFixed(1);
  }
  return String(x);
}

function intArrayLines(values: number[], indent: string): string[] {
  const lines = [`[`];
  values.forEach((v, i) => {
    if (!Number.isInteger(v)) {
      throw new Error(`pulse values must be integers, got ${v}`);
    }
    lines.push(`${indent}  ${v}${i < values.length - 1 ? "," : ""}`);
  });
  lines.push(`${indent}]`);
  return lines;
}

function trackLines(track: Breakpoint[], indent: string): string[] {
  const lines = [`[`];
  track.forEach(([t, v], i) => {
    lines.push(`${indent}  [`);
    lines.push(`${indent}    ${canonicalFloat(t)},`);
    lines.push(`${indent}    ${canonicalFloat(v)}`);
    lines.push(`${indent}  ]${i < track.length - 1 ? "," : ""}`);
  });
  lines.push(`${indent}]`);
  return lines;
}

/** Serialize a spec to the canonical JSON text (no trailing newline). */
export function serializeSpec(spec: TactonSpec): string {
  const lines: string[] = ["{"];
  const field = (name: string, value: string, last = false) => {
    lines.push(`  "${name}": ${value}${last ? "" : ","}`);
  };
  const block = (name: string, body: string[], last = false) => {
    lines.push(`  "${name}": ${body[0]}`);
    for (let i = 1; i < body.length; i++) {
      lines.push(body[i]);
    }
    if (!last) {
      lines[lines.length - 1] += ",";
    }
  };

  switch (spec.type) {
    case "sinusoidal":
      field("type", `"sinusoidal"`);
      field("amplitude", canonicalFloat(spec.amplitude));
      field("carrier_freq", canonicalFloat(spec.carrier_freq));
      field("envelope_freq", canonicalFloat(spec.envelope_freq));
      field("duration", canonicalFloat(spec.duration), true);
      break;
    case "rhythmic":
      field("type", `"rhythmic"`);
      field("amplitude", canonicalFloat(spec.amplitude));
      field("carrier_freq", canonicalFloat(spec.carrier_freq));
      block("pulses", intArrayLines(spec.pulses, "  "), true);
      break;
    case "complex":
      field("type", `"complex"`);
      block("envelope_track", trackLines(spec.envelope_track, "  "));
      block("frequency_track", trackLines(spec.frequency_track, "  "));
      field("duration", canonicalFloat(spec.duration), true);
      break;
  }
  lines.push("}");
  return lines.join("\n");
}

/** Serialize to the exact byte content of a published fixture file. */
export function serializeSpecFile(spec: TactonSpec): string {
  return serializeSpec(spec) + "\n";
}

/** Structural validity check mirroring the server's hard invariants, so the
 * UI never submits a spec the service would reject with 422. */
export function specViolations(spec: TactonSpec): string[] {
  const out: string[] = [];
  if (spec.type === "sinusoidal" || spec.type === "rhythmic") {
    if (!(spec.amplitude >= 0 && spec.amplitude <= 1)) {
      out.push(`amplitude must be in [0, 1], got ${spec.amplitude}`);
    }
    if (!(spec.carrier_freq > 0)) {
      out.push(`carrier_freq must be > 0, got ${spec.carrier_freq}`);
    }
  }
  if (spec.type === "sinusoidal") {
    if (!(spec.envelope_freq >= 0)) {
      out.push(`envelope_freq must be >= 0, got ${spec.envelope_freq}`);
    }
    if (!(spec.duration > 0)) {
      out.push(`duration must be > 0, got ${spec.duration}`);
    }
  }
  if (spec.type === "rhythmic") {
    if (spec.pulses.length === 0) {
      out.push("pulses must be non-empty");
    }
    if (spec.pulses.some((p) => p !== 0 && p !== 1)) {
      out.push("every pulse value must be 0 or 1");
    }
  }
  if (spec.type === "complex") {
    if (!(spec.duration > 0)) {
      out.push(`duration must be > 0, got ${spec.duration}`);
    }
    for (const [name, track] of [
      ["envelope_track", spec.envelope_track],
      ["frequency_track", spec.frequency_track],
    ] as const) {
      if (track.length < 2) {
        out.push(`${name} needs at least 2 breakpoints`);
        continue;
      }
      const times = track.map(([t]) => t);
      if (times.some((t, i) => i > 0 && t <= times[i - 1])) {
        out.push(`${name} breakpoint times must be strictly increasing`);
      }
      if (times[0] !== 0) {
        out.push(`${name} must start at t=0`);
      }
      if (times[times.length - 1] !== spec.duration) {
        out.push(`${name} must end at t=duration (${spec.duration})`);
      }
    }
    if (spec.envelope_track.some(([, v]) => v < 0 || v > 1)) {
      out.push("envelope_track values must be in [0, 1]");
    }
    if (spec.frequency_track.some(([, v]) => v <= 0)) {
      out.push("frequency_track values must be > 0");
    }
  }
  return out;
}
