#!/usr/bin/env python3
"""Filter a Tacton through the four mechanoreceptive channels and look at the
resulting spectrogram stack.

    python3 demos/03_mechano_spectrograms.py
"""
import numpy as np

from vibtact import (MechanoChannel, SinusoidalSpec, Waveform, channel_filter,
                     mechano_spectrograms, synthesize)
from vibtact.waveform import zero_pad

# a 155 Hz carrier with an 8 Hz wobble: energy at the carrier plus low-rate
# envelope content, which is exactly what separates the RA and SA channels
spec = SinusoidalSpec(amplitude=1.0, carrier_freq=155.0, envelope_freq=8.0,
                      duration=2.0)
w = zero_pad(synthesize(spec, 1000), 6000)

print("per-channel rms after zero-phase band filtering:")
rms = lambda x: np.sqrt(np.mean(x ** 2))
for ch in MechanoChannel:
    out = channel_filter(w, ch)
    print(f"  {ch.value:4s} {rms(out.samples):8.4f}   (input {rms(w.samples):.4f})")
print("RA2 keeps most of the 155 Hz carrier; SA1 keeps almost nothing,")
print("because its 5 Hz lowpass only sees the slow envelope.")
print()

stack = mechano_spectrograms(w, channels=("ra1", "ra2", "sa1", "sa2"))
print(f"spectrogram stack: {stack.data.shape} "
      f"(channels, 2 Hz bins, {stack.hop_s*1000:.0f} ms frames)")

# crude ASCII rendering of the RA2 layer, coarsened to fit a terminal
layer = stack.data[stack.channels.index("ra2")]
rows, cols = 16, 60
f_idx = np.linspace(0, layer.shape[0] - 1, rows).astype(int)
t_idx = np.linspace(0, layer.shape[1] - 1, cols).astype(int)
img = layer[np.ix_(f_idx, t_idx)]
img = img / (img.max() or 1.0)
chars = " .:-=+*#%@"
print()
print("RA2 magnitude (frequency up, time right):")
for r in range(rows - 1, -1, -1):
    line = "".join(chars[min(9, int(v * 10))] for v in img[r])
    print(f"  {f_idx[r]*2:3d} Hz |{line}|")
