"""Band-limited windowed-sinc resampling for time stretching."""
from __future__ import annotations

import numpy as np

KERNEL_TAPS = 64  # half-width 32 input samples each side


def resample_by_ratio(x: np.ndarray, ratio: float) -> np.ndarray:
    """Read ``x`` at ``ratio`` input samples per output sample.

    ratio > 1 compresses time (faster playback, spectrum scaled up by the
    same ratio).  Output length is round(len(x) / ratio).  The sinc kernel
    cutoff drops to 1/ratio of Nyquist when speeding up, so content that
    would alias is removed rather than folded.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if ratio == 1.0:
        return x.copy()
    if ratio <= 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    n_out = int(round(n / ratio))
    half = KERNEL_TAPS // 2
    cutoff = min(1.0, 1.0 / ratio)  # cycles per input sample, relative to Nyquist

    # positions of output samples on the input grid
    pos = np.arange(n_out) * ratio
    base = np.floor(pos).astype(int)
    # tap offsets relative to the floor sample
    offsets = np.arange(-half + 1, half + 1)
    idx = base[:, None] + offsets[None, :]
    frac = pos[:, None] - idx

    kernel = cutoff * np.sinc(cutoff * frac)
    # Blackman window centered on the interpolation point
    win_arg = (frac / half + 1.0) * 0.5  # in [0, 1] across the kernel support
    win = 0.42 - 0.5 * np.cos(2 * np.pi * win_arg) + 0.08 * np.cos(4 * np.pi * win_arg)
    kernel *= win

    valid = (idx >= 0) & (idx < n)
    idx_c = np.clip(idx, 0, n - 1)
    taps = np.where(valid, x[idx_c], 0.0)
    return np.sum(taps * kernel, axis=1)
