#!/usr/bin/env python3
"""Show the seven augmentation methods and check their perceptual bounds.

Every augmented copy must stay below the detection thresholds: noise within
0.0006 G, speed within +/-15 %, amplitude within +/-10 %.

    python3 demos/02_augmentation_bounds.py
"""
import numpy as np

from vibtact import (AugmentConfig, AugmentMethod, SinusoidalSpec,
                     augment_dataset, augment_record, synthesize)
from vibtact.augment import record_rng

spec = SinusoidalSpec(amplitude=1.0, carrier_freq=155.0, envelope_freq=4.0,
                      duration=1.0)
w = synthesize(spec, 1000).to_acceleration(0.3)
config = AugmentConfig(rng_seed=7)

print(f"source: {len(w)} samples, rms {np.sqrt(np.mean(w.samples**2)):.4f} G")
print()
print(f"{'method':6s} {'noise a':>10s} {'speed b':>9s} {'amp c':>8s} "
      f"{'len':>5s} {'max |delta|':>12s}")

for method in AugmentMethod:
    rng = record_rng(config.rng_seed, "demo", method, 0)
    out, draw = augment_record(w, method, config, rng)
    if len(out) == len(w):
        max_delta = f"{np.max(np.abs(out.samples - w.samples)):12.6f}"
    else:
        max_delta = "   (resized)"  # speed change: lengths differ
    fmt = lambda v, width, prec: f"{v:{width}.{prec}f}" if v is not None else " " * (width - 1) + "-"
    print(f"{method.name:6s} {fmt(draw.a, 10, 6)} {fmt(draw.b, 9, 4)} "
          f"{fmt(draw.c, 8, 4)} {len(out):5d} {max_delta}")

# the dataset-level expansion: n records become n * (7 * reps + 1)
pairs = [("demo", w)]
outputs, manifest = augment_dataset(pairs, AugmentConfig(repetitions=2, rng_seed=7))
print()
print(f"1 record x (7 methods x 2 reps + original) = {len(outputs)} records")

# bound check over a few hundred random draws
worst_noise = worst_speed = worst_amp = 0.0
for rep in range(50):
    for method in AugmentMethod:
        rng = record_rng(config.rng_seed, f"r{rep}", method, rep)
        _, draw = augment_record(w, method, config, rng)
        worst_noise = max(worst_noise, abs(draw.a or 0.0))
        worst_speed = max(worst_speed, abs(draw.b or 0.0))
        worst_amp = max(worst_amp, abs(draw.c or 0.0))
print(f"350 draws: max |a|={worst_noise:.6f} (<=0.0006), "
      f"max |b|={worst_speed:.4f} (<=0.15), max |c|={worst_amp:.4f} (<=0.10)")
