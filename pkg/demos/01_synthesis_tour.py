#!/usr/bin/env python3
"""Walk through the three Tacton families and what their waveforms look like.

Run from the repo root:

    python3 demos/01_synthesis_tour.py
"""
import numpy as np

from vibtact import (ComplexSpec, RhythmicSpec, SinusoidalSpec, synthesize,
                     validate)

FS = 1000


def describe(name, spec):
    report = validate(spec)
    w = synthesize(spec, FS)
    print(f"--- {name}")
    print(f"    valid: {report.ok}  warnings: {report.warnings or 'none'}")
    print(f"    {len(w)} samples at {FS} Hz ({w.duration:.3f} s)")
    print(f"    peak {np.max(np.abs(w.samples)):.3f}, "
          f"rms {np.sqrt(np.mean(w.samples ** 2)):.3f}")
    # a coarse ASCII envelope: mean |x| per 100 ms bucket
    env = np.abs(w.samples)
    n_buckets = max(1, len(env) // 100)
    buckets = [env[i * 100:(i + 1) * 100].mean() for i in range(n_buckets)]
    bars = "".join(" .:-=+*#"[min(7, int(b * 8))] for b in buckets)
    print(f"    envelope |{bars}|")


# A plain 155 Hz buzz with a 4 Hz amplitude wobble.  The envelope is the
# rectified sine |sin(2*pi*4*t)|, so you should see eight humps in two seconds.
describe("sinusoidal", SinusoidalSpec(
    amplitude=1.0, carrier_freq=155.0, envelope_freq=4.0, duration=2.0))

# Rhythm patterns are 64 on/off slots of 31.25 ms each (2 s total).
# This one is a march: two slots on, two slots off.
describe("rhythmic", RhythmicSpec(
    amplitude=1.0, carrier_freq=80.0, pulses=tuple([1, 1, 0, 0] * 16)))

# Complex Tactons interpolate envelope and frequency between breakpoints.
# Here the amplitude swells and fades while the pitch slides 80 -> 230 Hz.
describe("complex", ComplexSpec(
    duration=3.0,
    envelope_track=((0.0, 0.0), (1.5, 1.0), (3.0, 0.0)),
    frequency_track=((0.0, 80.0), (3.0, 230.0)),
))

# Validation flags, but does not reject, carriers outside the 80-230 Hz band
# the rating model was built around.
report = validate(SinusoidalSpec(amplitude=0.5, carrier_freq=40.0,
                                 envelope_freq=0.0, duration=1.0))
print("--- out-of-band carrier")
print(f"    valid: {report.ok}")
print(f"    warning: {report.warnings[0]}")
