"""Sampled 1D vibration signals and their file formats."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import butter, sosfiltfilt

PIPELINE_RATES = (1000, 10000)

# Peak acceleration of a full-amplitude Tacton on a typical phone actuator.
# Converts normalized [-1, 1] synthesis output into G for the pipeline.
DEFAULT_DEVICE_GAIN_G = 0.3


class WaveformError(ValueError):
    pass


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled acceleration signal.

    ``units`` is "norm" for normalized synthesis output in [-1, 1] and "G"
    once scaled by a device gain.
    """

    samples: np.ndarray
    sample_rate: int
    units: str = "norm"

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise WaveformError(f"samples must be 1-D, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise WaveformError("samples contain non-finite values")
        if not (isinstance(self.sample_rate, (int, np.integer)) and self.sample_rate > 0):
            raise WaveformError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        self.samples.setflags(write=False)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def to_acceleration(self, gain_g: float = DEFAULT_DEVICE_GAIN_G) -> "Waveform":
        """Scale a normalized waveform to physical acceleration in G."""
        if self.units == "G":
            return self
        return Waveform(self.samples * gain_g, self.sample_rate, units="G")


def zero_pad(w: Waveform, target_len: int) -> Waveform:
    """Append trailing zeros up to ``target_len``.  Never truncates."""
    n = len(w)
    if n > target_len:
        raise WaveformError(
            f"waveform of {n} samples exceeds target length {target_len}; refusing to truncate"
        )
    if n == target_len:
        return w
    padded = np.concatenate([w.samples, np.zeros(target_len - n)])
    return Waveform(padded, w.sample_rate, units=w.units)


def downsample(w: Waveform, target_rate: int) -> Waveform:
    """Anti-aliased integer-factor decimation.

    The lowpass (8th-order Butterworth, cutoff 0.45 * target_rate) is applied
    forward-backward so rhythmic onsets keep their timing.
    """
    if target_rate <= 0 or w.sample_rate % target_rate != 0:
        raise WaveformError(
            f"target rate {target_rate} does not divide sample rate {w.sample_rate}"
        )
    if target_rate == w.sample_rate:
        return w
    factor = w.sample_rate // target_rate
    sos = butter(8, 0.45 * target_rate, btype="low", fs=w.sample_rate, output="sos")
    filtered = sosfiltfilt(sos, w.samples)
    return Waveform(filtered[::factor], target_rate, units=w.units)


def save_waveform(w: Waveform, path: str | Path) -> None:
    """Raw little-endian float32 samples plus a JSON sidecar."""
    path = Path(path)
    w.samples.astype("<f4").tofile(path)
    sidecar = {"sample_rate": w.sample_rate, "units": w.units, "length": len(w)}
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar))


def load_waveform(path: str | Path) -> Waveform:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    samples = np.fromfile(path, dtype="<f4").astype(np.float64)
    if samples.shape[0] != sidecar["length"]:
        raise WaveformError(
            f"{path}: expected {sidecar['length']} samples, file holds {samples.shape[0]}"
        )
    return Waveform(samples, int(sidecar["sample_rate"]), units=sidecar.get("units", "norm"))


def save_waveform_csv(w: Waveform, path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        for s in w.samples:
            writer.writerow([repr(float(s))])


def load_waveform_csv(path: str | Path, sample_rate: int, units: str = "norm") -> Waveform:
    with open(path, newline="") as f:
        samples = [float(row[0]) for row in csv.reader(f) if row]
    return Waveform(np.array(samples), sample_rate, units=units)
