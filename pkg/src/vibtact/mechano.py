"""Mechanoreceptive channel filtering and spectrogram conversion.

Each tactile channel is a 4th-order Butterworth band applied forward and
backward (zero phase), after which a 0.5 s / 0.05 s-hop STFT turns the
6,000-sample signal into a 251 x 121 magnitude image per channel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .waveform import Waveform, zero_pad

PIPELINE_RATE = 1000
PADDED_LEN = 6000
WINDOW_S = 0.5
HOP_S = 0.05
WINDOW_LEN = int(WINDOW_S * PIPELINE_RATE)  # 500 -> 2 Hz bins
HOP_LEN = int(HOP_S * PIPELINE_RATE)  # 50
N_FREQ_BINS = WINDOW_LEN // 2 + 1  # 251
N_FRAMES = PADDED_LEN // HOP_LEN + 1  # 121
FREQ_RESOLUTION_HZ = PIPELINE_RATE / WINDOW_LEN  # 2.0


class RateError(ValueError):
    pass


class MechanoChannel(Enum):
    RA1 = "ra1"  # Meissner corpuscle, bandpass 3-100 Hz
    RA2 = "ra2"  # Pacinian corpuscle, 40-500 Hz; 500 = Nyquist so highpass at 40
    SA1 = "sa1"  # Merkel disk, lowpass 5 Hz
    SA2 = "sa2"  # Ruffini ending, bandpass 15-400 Hz


UNFILTERED = "unfiltered"
CHANNEL_ORDER = (MechanoChannel.RA1, MechanoChannel.RA2, MechanoChannel.SA1, MechanoChannel.SA2)

_FILTER_ORDER = 4


def _channel_sos(ch: MechanoChannel, fs: int):
    if ch is MechanoChannel.RA1:
        return butter(_FILTER_ORDER, [3.0, 100.0], btype="band", fs=fs, output="sos")
    if ch is MechanoChannel.RA2:
        # upper edge equals Nyquist at 1 kHz; the signal band itself is the limit
        return butter(_FILTER_ORDER, 40.0, btype="high", fs=fs, output="sos")
    if ch is MechanoChannel.SA1:
        return butter(_FILTER_ORDER, 5.0, btype="low", fs=fs, output="sos")
    if ch is MechanoChannel.SA2:
        return butter(_FILTER_ORDER, [15.0, 400.0], btype="band", fs=fs, output="sos")
    raise ValueError(f"unknown channel {ch!r}")


def channel_filter(w: Waveform, ch: MechanoChannel) -> Waveform:
    """Zero-phase band-limited output, same length and rate."""
    if w.sample_rate != PIPELINE_RATE:
        raise RateError(f"channel filters expect {PIPELINE_RATE} Hz, got {w.sample_rate}")
    # pad with silence: vibration records are zero outside their extent, and
    # the 5 Hz lowpass needs a long settling run-in
    pad = w.sample_rate
    padded = np.concatenate([np.zeros(pad), w.samples, np.zeros(pad)])
    filtered = sosfiltfilt(_channel_sos(ch, w.sample_rate), padded, padlen=0)[pad:-pad]
    return Waveform(filtered, w.sample_rate, units=w.units)


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(n) / n)


def stft(w: Waveform) -> np.ndarray:
    """Centered one-sided STFT, (freq_bins, frames) complex.

    Frames are centered on multiples of the hop; the signal is reflect-padded
    by half a window at both edges.  No frequency zero-padding, so bins are
    exactly 2 Hz apart.
    """
    if w.sample_rate != PIPELINE_RATE:
        raise RateError(f"stft expects {PIPELINE_RATE} Hz, got {w.sample_rate}")
    x = w.samples
    half = WINDOW_LEN // 2
    padded = np.concatenate([x[1:half + 1][::-1], x, x[-half - 1:-1][::-1]])
    n_frames = len(x) // HOP_LEN + 1
    window = _hann_periodic(WINDOW_LEN)
    frames = np.stack([
        padded[m * HOP_LEN:m * HOP_LEN + WINDOW_LEN] * window for m in range(n_frames)
    ])
    return np.fft.rfft(frames, n=WINDOW_LEN, axis=1).T


@dataclass(frozen=True)
class SpectrogramStack:
    """Per-channel STFT magnitude images, shape (C, 251, 121)."""

    channels: tuple  # channel names, e.g. ("ra1", "ra2") or ("unfiltered",)
    data: np.ndarray
    freq_resolution: float = FREQ_RESOLUTION_HZ
    hop_s: float = HOP_S
    window_s: float = WINDOW_S

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        expected = (len(self.channels), N_FREQ_BINS, N_FRAMES)
        if data.shape != expected:
            raise ValueError(f"spectrogram stack must be {expected}, got {data.shape}")
        if not np.all(np.isfinite(data)) or np.any(data < 0):
            raise ValueError("spectrogram values must be finite and non-negative")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "channels", tuple(self.channels))
        self.data.setflags(write=False)


def normalize_channels(channels) -> tuple:
    """Fixed ordering: the RA1/RA2/SA1/SA2 subsequence, or the unfiltered singleton."""
    names = []
    for ch in channels:
        names.append(ch.value if isinstance(ch, MechanoChannel) else str(ch))
    if names == [UNFILTERED]:
        return (UNFILTERED,)
    if UNFILTERED in names:
        raise ValueError("'unfiltered' cannot be combined with mechanoreceptive channels")
    selected = set(names)
    known = {ch.value for ch in CHANNEL_ORDER}
    unknown = selected - known
    if unknown:
        raise ValueError(f"unknown channels: {sorted(unknown)}")
    return tuple(ch.value for ch in CHANNEL_ORDER if ch.value in selected)


def mechano_spectrograms(w: Waveform, channels=(MechanoChannel.RA1, MechanoChannel.RA2)) -> SpectrogramStack:
    """Zero-pad to 6,000 samples, filter per channel, take STFT magnitudes."""
    if w.sample_rate != PIPELINE_RATE:
        raise RateError(f"pipeline expects {PIPELINE_RATE} Hz, got {w.sample_rate}")
    names = normalize_channels(channels)
    padded = zero_pad(w, PADDED_LEN)
    layers = []
    for name in names:
        if name == UNFILTERED:
            filtered = padded
        else:
            filtered = channel_filter(padded, MechanoChannel(name))
        layers.append(np.abs(stft(filtered)))
    return SpectrogramStack(channels=names, data=np.stack(layers))


def save_spectrograms(stack: SpectrogramStack, path: str | Path) -> None:
    path = Path(path)
    stack.data.astype("<f4").tofile(path)
    sidecar = {
        "channels": list(stack.channels),
        "shape": list(stack.data.shape),
        "window_s": stack.window_s,
        "hop_s": stack.hop_s,
    }
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar))


def load_spectrograms(path: str | Path) -> SpectrogramStack:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    shape = tuple(sidecar["shape"])
    data = np.fromfile(path, dtype="<f4").astype(np.float64).reshape(shape)
    return SpectrogramStack(channels=tuple(sidecar["channels"]), data=data,
                            hop_s=sidecar["hop_s"], window_s=sidecar["window_s"])
