"""Tacton specifications and waveform synthesis.

Three spec families: plain sinusoids with an optional rectified-sine
envelope, carrier bursts gated by a binary rhythm grid (31.25 ms slots),
and free-form Tactons driven by piecewise-linear envelope and frequency
tracks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .waveform import Waveform

PULSE_SLOT_S = 0.03125  # rhythm grid resolution
MODEL_BAND_HZ = (80.0, 230.0)  # carrier band the predictor was designed around


class SpecValidationError(ValueError):
    """Raised when a spec violates a hard invariant; message lists violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class SinusoidalSpec:
    amplitude: float
    carrier_freq: float
    envelope_freq: float
    duration: float

    kind = "sinusoidal"


@dataclass(frozen=True)
class RhythmicSpec:
    amplitude: float
    carrier_freq: float
    pulses: tuple

    kind = "rhythmic"

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(int(p) for p in self.pulses))

    @property
    def duration(self) -> float:
        return len(self.pulses) * PULSE_SLOT_S


@dataclass(frozen=True)
class ComplexSpec:
    envelope_track: tuple  # ((t, value), ...) with value in [0, 1]
    frequency_track: tuple  # ((t, hz), ...)
    duration: float

    kind = "complex"

    def __post_init__(self):
        object.__setattr__(
            self, "envelope_track", tuple((float(t), float(v)) for t, v in self.envelope_track)
        )
        object.__setattr__(
            self, "frequency_track", tuple((float(t), float(v)) for t, v in self.frequency_track)
        )


TactonSpec = Union[SinusoidalSpec, RhythmicSpec, ComplexSpec]


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def _check_track(name, track, duration, violations):
    if len(track) < 2:
        violations.append(f"{name} needs at least 2 breakpoints")
        return
    times = [t for t, _ in track]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        violations.append(f"{name} breakpoint times must be strictly increasing")
    if times[0] != 0.0:
        violations.append(f"{name} must start at t=0")
    if times[-1] != duration:
        violations.append(f"{name} must end at t=duration ({duration})")


def validate(spec: TactonSpec, device_gain_g: float = 0.3) -> ValidationReport:
    """Hard invariants become violations; model-reliability issues are warnings."""
    violations: list = []
    warnings: list = []

    if isinstance(spec, SinusoidalSpec):
        if not (0.0 <= spec.amplitude <= 1.0):
            violations.append(f"amplitude must be in [0, 1], got {spec.amplitude}")
        if spec.carrier_freq <= 0:
            violations.append(f"carrier_freq must be > 0, got {spec.carrier_freq}")
        if spec.envelope_freq < 0:
            violations.append(f"envelope_freq must be >= 0, got {spec.envelope_freq}")
        if spec.duration <= 0:
            violations.append(f"duration must be > 0, got {spec.duration}")
        carriers = [spec.carrier_freq]
        peak = spec.amplitude
    elif isinstance(spec, RhythmicSpec):
        if not (0.0 <= spec.amplitude <= 1.0):
            violations.append(f"amplitude must be in [0, 1], got {spec.amplitude}")
        if spec.carrier_freq <= 0:
            violations.append(f"carrier_freq must be > 0, got {spec.carrier_freq}")
        if len(spec.pulses) == 0:
            violations.append("pulses must be non-empty")
        if any(p not in (0, 1) for p in spec.pulses):
            violations.append("every pulse value must be 0 or 1")
        carriers = [spec.carrier_freq]
        peak = spec.amplitude
    elif isinstance(spec, ComplexSpec):
        if spec.duration <= 0:
            violations.append(f"duration must be > 0, got {spec.duration}")
        _check_track("envelope_track", spec.envelope_track, spec.duration, violations)
        _check_track("frequency_track", spec.frequency_track, spec.duration, violations)
        if any(not (0.0 <= v <= 1.0) for _, v in spec.envelope_track):
            violations.append("envelope_track values must be in [0, 1]")
        if any(v <= 0 for _, v in spec.frequency_track):
            violations.append("frequency_track values must be > 0")
        carriers = [v for _, v in spec.frequency_track]
        peak = max((v for _, v in spec.envelope_track), default=0.0)
    else:
        violations.append(f"unknown spec type {type(spec).__name__}")
        carriers, peak = [], 0.0

    lo, hi = MODEL_BAND_HZ
    if not violations:
        if any(not (lo <= f <= hi) for f in carriers):
            warnings.append(
                f"carrier frequency outside [{lo:g}, {hi:g}] Hz; predictions are less reliable there"
            )
        if peak * device_gain_g > 0.3 + 1e-12:
            warnings.append(
                f"peak acceleration {peak * device_gain_g:.3g} G exceeds 0.3 G; "
                "predictions are less reliable there"
            )
    return ValidationReport(ok=not violations, violations=violations, warnings=warnings)


def _require_valid(spec: TactonSpec) -> None:
    report = validate(spec)
    if not report.ok:
        raise SpecValidationError(report.violations)


def pulse_slot_bounds(n_slots: int, sample_rate: int) -> np.ndarray:
    """Sample index of each slot boundary; slot k covers [b[k], b[k+1])."""
    edges = np.arange(n_slots + 1) * PULSE_SLOT_S * sample_rate
    return np.round(edges).astype(int)


def synthesize(spec: TactonSpec, sample_rate: int) -> Waveform:
    """Render a spec to a normalized [-1, 1] waveform.

    Sinusoidal and rhythmic Tactons use a constant carrier; complex Tactons
    integrate the frequency track (trapezoidal rule) for instantaneous phase.
    """
    _require_valid(spec)
    n = int(round(spec.duration * sample_rate))
    t = np.arange(n) / sample_rate

    if isinstance(spec, SinusoidalSpec):
        if spec.envelope_freq == 0.0:
            env = np.full(n, spec.amplitude)
        else:
            env = spec.amplitude * np.abs(np.sin(2 * np.pi * spec.envelope_freq * t))
        samples = env * np.sin(2 * np.pi * spec.carrier_freq * t)
    elif isinstance(spec, RhythmicSpec):
        bounds = pulse_slot_bounds(len(spec.pulses), sample_rate)
        env = np.zeros(n)
        for k, p in enumerate(spec.pulses):
            if p:
                env[bounds[k]:bounds[k + 1]] = spec.amplitude
        samples = env * np.sin(2 * np.pi * spec.carrier_freq * t)
    else:
        et = np.array([p[0] for p in spec.envelope_track])
        ev = np.array([p[1] for p in spec.envelope_track])
        ft = np.array([p[0] for p in spec.frequency_track])
        fv = np.array([p[1] for p in spec.frequency_track])
        env = np.interp(t, et, ev)
        freq = np.interp(t, ft, fv)
        phase = np.zeros(n)
        if n > 1:
            dt = 1.0 / sample_rate
            phase[1:] = np.cumsum((freq[:-1] + freq[1:]) * 0.5 * dt)
        samples = env * np.sin(2 * np.pi * phase)

    return Waveform(samples, sample_rate, units="norm")


# ---------------------------------------------------------------------------
# JSON serialization (variant tag + SI units, seconds/Hz)

def spec_to_dict(spec: TactonSpec) -> dict:
    if isinstance(spec, SinusoidalSpec):
        return {
            "type": "sinusoidal",
            "amplitude": spec.amplitude,
            "carrier_freq": spec.carrier_freq,
            "envelope_freq": spec.envelope_freq,
            "duration": spec.duration,
        }
    if isinstance(spec, RhythmicSpec):
        return {
            "type": "rhythmic",
            "amplitude": spec.amplitude,
            "carrier_freq": spec.carrier_freq,
            "pulses": list(spec.pulses),
        }
    if isinstance(spec, ComplexSpec):
        return {
            "type": "complex",
            "envelope_track": [[t, v] for t, v in spec.envelope_track],
            "frequency_track": [[t, v] for t, v in spec.frequency_track],
            "duration": spec.duration,
        }
    raise TypeError(f"not a TactonSpec: {type(spec).__name__}")


def spec_from_dict(d: dict) -> TactonSpec:
    try:
        kind = d["type"]
    except (TypeError, KeyError):
        raise SpecValidationError(["missing variant tag 'type'"])
    if kind == "sinusoidal":
        return SinusoidalSpec(
            amplitude=float(d["amplitude"]),
            carrier_freq=float(d["carrier_freq"]),
            envelope_freq=float(d["envelope_freq"]),
            duration=float(d["duration"]),
        )
    if kind == "rhythmic":
        return RhythmicSpec(
            amplitude=float(d["amplitude"]),
            carrier_freq=float(d["carrier_freq"]),
            pulses=tuple(d["pulses"]),
        )
    if kind == "complex":
        return ComplexSpec(
            envelope_track=tuple((float(t), float(v)) for t, v in d["envelope_track"]),
            frequency_track=tuple((float(t), float(v)) for t, v in d["frequency_track"]),
            duration=float(d["duration"]),
        )
    raise SpecValidationError([f"unknown spec type {kind!r}"])


def load_spec(path: str | Path) -> TactonSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def save_spec(spec: TactonSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2))


TACTON_SPEC_JSON_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "TactonSpec",
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "type": {"const": "sinusoidal"},
                "amplitude": {"type": "number", "minimum": 0, "maximum": 1},
                "carrier_freq": {"type": "number", "exclusiveMinimum": 0},
                "envelope_freq": {"type": "number", "minimum": 0},
                "duration": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["type", "amplitude", "carrier_freq", "envelope_freq", "duration"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "rhythmic"},
                "amplitude": {"type": "number", "minimum": 0, "maximum": 1},
                "carrier_freq": {"type": "number", "exclusiveMinimum": 0},
                "pulses": {"type": "array", "items": {"enum": [0, 1]}, "minItems": 1},
            },
            "required": ["type", "amplitude", "carrier_freq", "pulses"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "complex"},
                "envelope_track": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "minItems": 2,
                },
                "frequency_track": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "minItems": 2,
                },
                "duration": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["type", "envelope_track", "frequency_track", "duration"],
            "additionalProperties": False,
        },
    ],
}
