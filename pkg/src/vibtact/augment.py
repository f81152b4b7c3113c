"""Perceptually-bounded waveform augmentation.

Three operators, each bounded so the change stays below the relevant
detection threshold: uniform noise under the absolute limen, speed change
under the frequency JND, amplitude change under the intensity JND.  The
seven usable combinations expand a dataset 15x at two repetitions per
method.
"""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .resample import resample_by_ratio
from .waveform import Waveform


class BoundViolationError(ValueError):
    pass


@dataclass(frozen=True)
class AugmentConfig:
    noise_bound: float = 0.0006  # G, absolute limen near 200 Hz
    speed_bound: float = 0.15
    duration_change_cap: float | None = None  # seconds; None disables the clamp
    amplitude_bound: float = 0.10
    repetitions: int = 2
    rng_seed: int = 0

    def __post_init__(self):
        if self.noise_bound < 0 or self.speed_bound < 0 or self.amplitude_bound < 0:
            raise ValueError("bounds must be >= 0")
        if self.duration_change_cap is not None and self.duration_change_cap < 0:
            raise ValueError("duration_change_cap must be >= 0")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


class AugmentMethod(Enum):
    N = ("noise",)
    S = ("speed",)
    A = ("amplitude",)
    NS = ("noise", "speed")
    NA = ("noise", "amplitude")
    SA = ("speed", "amplitude")
    NSA = ("noise", "speed", "amplitude")

    @property
    def operators(self):
        return self.value


ALL_METHODS = tuple(AugmentMethod)


def inject_noise(w: Waveform, a: float, rng: np.random.Generator,
                 bound: float = 0.0006) -> Waveform:
    """Add per-sample uniform noise in [-|a|, |a|]."""
    if abs(a) > bound:
        raise BoundViolationError(f"noise amplitude {a} exceeds bound {bound}")
    if a == 0.0:
        return w
    noise = rng.uniform(-abs(a), abs(a), size=len(w))
    return Waveform(w.samples + noise, w.sample_rate, units=w.units)


def change_speed(w: Waveform, b: float, bound: float = 0.15) -> Waveform:
    """Play back faster (b > 0) or slower (b < 0); duration becomes d/(1+b)."""
    if abs(b) > bound:
        raise BoundViolationError(f"speed rate {b} exceeds bound {bound}")
    if b == 0.0:
        return w
    return Waveform(resample_by_ratio(w.samples, 1.0 + b), w.sample_rate, units=w.units)


def change_amplitude(w: Waveform, c: float, bound: float = 0.10) -> Waveform:
    """Scale every sample by (1 + c)."""
    if abs(c) > bound:
        raise BoundViolationError(f"amplitude rate {c} exceeds bound {bound}")
    if c == 0.0:
        return w
    return Waveform((1.0 + c) * w.samples, w.sample_rate, units=w.units)


def effective_speed_bound(config: AugmentConfig, duration_s: float) -> float:
    """Clamp the speed bound so |duration change| stays under the cap."""
    if config.duration_change_cap is None or duration_s <= 0:
        return config.speed_bound
    return min(config.speed_bound, config.duration_change_cap / duration_s)


@dataclass
class AugmentDraw:
    """Parameters actually drawn for one augmented record."""
    method: AugmentMethod
    a: float | None = None
    b: float | None = None
    c: float | None = None


def augment_record(w: Waveform, method: AugmentMethod, config: AugmentConfig,
                   rng: np.random.Generator) -> tuple[Waveform, AugmentDraw]:
    """Apply the method's operators in fixed noise -> speed -> amplitude order."""
    draw = AugmentDraw(method=method)
    out = w
    if "noise" in method.operators:
        draw.a = float(rng.uniform(0.0, config.noise_bound))
        out = inject_noise(out, draw.a, rng, bound=config.noise_bound)
    if "speed" in method.operators:
        b_max = effective_speed_bound(config, w.duration)
        draw.b = float(rng.uniform(-b_max, b_max))
        out = change_speed(out, draw.b, bound=config.speed_bound)
    if "amplitude" in method.operators:
        draw.c = float(rng.uniform(-config.amplitude_bound, config.amplitude_bound))
        out = change_amplitude(out, draw.c, bound=config.amplitude_bound)
    return out, draw


def record_rng(seed: int, src_id: str, method: AugmentMethod, repetition: int) -> np.random.Generator:
    """Stream derived from (seed, record, method, repetition); schedule-independent."""
    key = (seed, zlib.crc32(src_id.encode()), list(AugmentMethod).index(method), repetition)
    return np.random.default_rng(np.random.SeedSequence(key))


def augment_dataset(records, config: AugmentConfig):
    """Expand each (id, Waveform) record into 7 * repetitions variants plus the original.

    Returns (outputs, manifest): outputs is a list of (out_id, Waveform);
    manifest is one provenance dict per output.
    """
    if not records:
        raise ValueError("records must be non-empty")
    outputs = []
    manifest = []
    for src_id, w in records:
        outputs.append((src_id, w))
        manifest.append({"out_id": src_id, "src_id": src_id, "method": "original",
                         "a": None, "b": None, "c": None, "seed_path": None})
        for method in ALL_METHODS:
            for rep in range(1, config.repetitions + 1):
                rng = record_rng(config.rng_seed, src_id, method, rep)
                out, draw = augment_record(w, method, config, rng)
                out_id = f"{src_id}__{method.name}_{rep}"
                outputs.append((out_id, out))
                manifest.append({
                    "out_id": out_id,
                    "src_id": src_id,
                    "method": method.name,
                    "a": draw.a,
                    "b": draw.b,
                    "c": draw.c,
                    "seed_path": [config.rng_seed, src_id, method.name, rep],
                })
    return outputs, manifest


def write_manifest(manifest, path: str | Path) -> None:
    with open(path, "w") as f:
        for entry in manifest:
            f.write(json.dumps(entry) + "\n")


def read_manifest(path: str | Path):
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]
