import numpy as np
import pytest

from vibtact import MechanoChannel, Waveform, channel_filter, mechano_spectrograms, stft
from vibtact.mechano import (
    HOP_LEN,
    N_FRAMES,
    N_FREQ_BINS,
    PADDED_LEN,
    WINDOW_LEN,
    RateError,
    normalize_channels,
)
from vibtact.waveform import WaveformError


def naive_stft(samples):
    """Independent per-frame DFT with the documented framing and window."""
    half = WINDOW_LEN // 2
    padded = np.concatenate([samples[1:half + 1][::-1], samples, samples[-half - 1:-1][::-1]])
    n_frames = len(samples) // HOP_LEN + 1
    n = np.arange(WINDOW_LEN)
    window = 0.5 - 0.5 * np.cos(2 * np.pi * n / WINDOW_LEN)
    k = np.arange(N_FREQ_BINS)
    basis = np.exp(-2j * np.pi * np.outer(k, n) / WINDOW_LEN)
    out = np.empty((N_FREQ_BINS, n_frames), dtype=complex)
    for m in range(n_frames):
        frame = padded[m * HOP_LEN:m * HOP_LEN + WINDOW_LEN] * window
        out[:, m] = basis @ frame
    return out


def tone(freq, n=6000, fs=1000):
    t = np.arange(n) / fs
    return Waveform(np.sin(2 * np.pi * freq * t), fs)


class TestChannelFilter:
    def test_zero_in_zero_out(self):
        w = Waveform(np.zeros(2000), 1000)
        for ch in MechanoChannel:
            assert np.allclose(channel_filter(w, ch).samples, 0.0)

    def test_passband_tone_passes_ra1(self):
        w = tone(60.0, n=4000)
        out = channel_filter(w, MechanoChannel.RA1)
        rms = lambda x: np.sqrt(np.mean(x ** 2))
        assert rms(out.samples) >= 0.7 * rms(w.samples)

    def test_stopband_tone_blocked_sa1(self):
        w = tone(60.0, n=4000)
        out = channel_filter(w, MechanoChannel.SA1)
        rms = lambda x: np.sqrt(np.mean(x ** 2))
        assert rms(out.samples) <= 0.01 * rms(w.samples)

    def test_wrong_rate_rejected(self):
        with pytest.raises(RateError):
            channel_filter(Waveform(np.zeros(100), 500), MechanoChannel.RA1)

    def test_zero_phase_no_group_delay(self):
        # in-band tone burst keeps its alignment after filtering
        t = np.arange(3000) / 1000
        burst = np.sin(2 * np.pi * 60.0 * t)
        burst[:1200] = 0.0
        burst[1800:] = 0.0
        w = Waveform(burst, 1000)
        out = channel_filter(w, MechanoChannel.RA1)
        xc = np.correlate(out.samples, burst, mode="full")
        lag = np.argmax(xc) - (len(burst) - 1)
        assert abs(lag) <= 1


class TestStft:
    def test_shape_on_6000_samples(self):
        S = stft(Waveform(np.random.default_rng(0).normal(size=6000), 1000))
        assert S.shape == (251, 121)

    def test_zero_input(self):
        S = stft(Waveform(np.zeros(6000), 1000))
        assert np.all(S == 0.0)

    def test_tone_bin(self):
        S = stft(tone(100.0))
        mags = np.abs(S)
        # interior frames peak at bin 50 (100 Hz / 2 Hz)
        for m in range(2, 119):
            assert np.argmax(mags[:, m]) == 50

    def test_matches_naive_dft(self):
        rng = np.random.default_rng(42)
        for _ in range(3):
            x = rng.normal(size=6000)
            S = stft(Waveform(x, 1000))
            ref = naive_stft(x)
            err = np.max(np.abs(S - ref)) / np.max(np.abs(ref))
            assert err < 1e-9


class TestMechanoSpectrograms:
    def test_two_channel_shape(self):
        stack = mechano_spectrograms(tone(100.0, n=3000))
        assert stack.data.shape == (2, 251, 121)
        assert stack.channels == ("ra1", "ra2")

    def test_unfiltered_single(self):
        stack = mechano_spectrograms(tone(100.0), channels=("unfiltered",))
        assert stack.data.shape == (1, 251, 121)

    def test_four_channel(self):
        stack = mechano_spectrograms(tone(100.0), channels=("ra1", "ra2", "sa1", "sa2"))
        assert stack.data.shape == (4, 251, 121)
        assert stack.channels == ("ra1", "ra2", "sa1", "sa2")

    def test_channel_order_fixed(self):
        stack = mechano_spectrograms(tone(100.0), channels=("sa1", "ra2", "ra1"))
        assert stack.channels == ("ra1", "ra2", "sa1")

    def test_overlength_rejected(self):
        with pytest.raises(WaveformError):
            mechano_spectrograms(Waveform(np.zeros(6001), 1000))

    def test_values_nonnegative_finite(self):
        stack = mechano_spectrograms(tone(155.0, n=5000))
        assert np.all(stack.data >= 0.0)
        assert np.all(np.isfinite(stack.data))

    def test_magnitude_linearity(self):
        w = Waveform(np.random.default_rng(3).normal(size=4000), 1000)
        a = mechano_spectrograms(w)
        b = mechano_spectrograms(Waveform(2.5 * w.samples, 1000))
        assert np.max(np.abs(b.data - 2.5 * a.data)) / np.max(a.data) < 1e-9

    def test_unfiltered_cannot_mix(self):
        with pytest.raises(ValueError):
            normalize_channels(("unfiltered", "ra1"))
