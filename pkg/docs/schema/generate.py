"""Publish the Tacton spec JSON schema and canonical serialization fixtures.

Run from the repository root:

    python3 docs/schema/generate.py

Writes tacton_spec.schema.json plus twenty fixture files covering all three
spec families. The fixtures freeze the canonical serialization (field order,
two-space indentation, float formatting) so API clients can verify their own
serializers byte for byte.
"""
import json
from pathlib import Path

from vibtact.tacton import (
    ComplexSpec,
    RhythmicSpec,
    SinusoidalSpec,
    TACTON_SPEC_JSON_SCHEMA,
    spec_to_dict,
)

HERE = Path(__file__).resolve().parent

FIXTURES = [
    SinusoidalSpec(amplitude=1.0, carrier_freq=155.0, envelope_freq=4.0, duration=1.0),
    SinusoidalSpec(amplitude=0.5, carrier_freq=80.0, envelope_freq=0.0, duration=2.0),
    SinusoidalSpec(amplitude=0.25, carrier_freq=230.0, envelope_freq=8.0, duration=0.5),
    SinusoidalSpec(amplitude=0.75, carrier_freq=120.5, envelope_freq=2.5, duration=1.5),
    SinusoidalSpec(amplitude=0.0, carrier_freq=155.0, envelope_freq=0.0, duration=0.3),
    SinusoidalSpec(amplitude=1.0, carrier_freq=300.0, envelope_freq=10.0, duration=6.0),
    SinusoidalSpec(amplitude=0.125, carrier_freq=50.0, envelope_freq=1.0, duration=3.0),
    SinusoidalSpec(amplitude=0.9, carrier_freq=187.5, envelope_freq=6.25, duration=2.25),
    RhythmicSpec(amplitude=1.0, carrier_freq=155.0, pulses=(1, 1, 0, 0) * 16),
    RhythmicSpec(amplitude=0.5, carrier_freq=80.0, pulses=(1,) * 32),
    RhythmicSpec(amplitude=0.75, carrier_freq=230.0, pulses=(1, 0) * 8),
    RhythmicSpec(amplitude=0.3, carrier_freq=100.0, pulses=(1, 1, 1, 0, 0, 0, 1, 0)),
    RhythmicSpec(amplitude=1.0, carrier_freq=155.0, pulses=(1,)),
    RhythmicSpec(amplitude=0.6, carrier_freq=210.0, pulses=(0, 1) * 32),
    ComplexSpec(
        envelope_track=((0.0, 0.0), (0.5, 1.0), (1.0, 0.0)),
        frequency_track=((0.0, 80.0), (1.0, 230.0)),
        duration=1.0,
    ),
    ComplexSpec(
        envelope_track=((0.0, 1.0), (2.0, 1.0)),
        frequency_track=((0.0, 155.0), (2.0, 155.0)),
        duration=2.0,
    ),
    ComplexSpec(
        envelope_track=((0.0, 0.2), (0.75, 0.8), (1.5, 0.4)),
        frequency_track=((0.0, 100.0), (0.5, 200.0), (1.5, 120.0)),
        duration=1.5,
    ),
    ComplexSpec(
        envelope_track=((0.0, 0.0), (0.1, 1.0), (0.9, 1.0), (1.0, 0.0)),
        frequency_track=((0.0, 90.0), (1.0, 90.0)),
        duration=1.0,
    ),
    ComplexSpec(
        envelope_track=((0.0, 0.5), (3.0, 0.5)),
        frequency_track=((0.0, 60.0), (1.5, 250.0), (3.0, 60.0)),
        duration=3.0,
    ),
    ComplexSpec(
        envelope_track=((0.0, 1.0), (0.5, 0.25), (4.0, 0.75)),
        frequency_track=((0.0, 230.0), (4.0, 80.0)),
        duration=4.0,
    ),
]


def main() -> None:
    (HERE / "tacton_spec.schema.json").write_text(
        json.dumps(TACTON_SPEC_JSON_SCHEMA, indent=2) + "\n"
    )
    fixture_dir = HERE / "fixtures"
    fixture_dir.mkdir(exist_ok=True)
    for i, spec in enumerate(FIXTURES):
        path = fixture_dir / f"spec_{i:02d}.json"
        path.write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")
    print(f"wrote schema and {len(FIXTURES)} fixtures under {HERE}")


if __name__ == "__main__":
    main()
