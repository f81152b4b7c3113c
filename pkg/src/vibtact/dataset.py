"""Corpus generation, the synthetic rating oracle, metrics, CV splits, and
the linear-regression baseline.

The oracle is a frozen stand-in for human ratings: a deterministic map from
waveform features to a roughness/valence/arousal triple.  Its constants are
artifact definitions; the only structure it shares with human data is the
positive arousal-roughness relationship.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .mechano import FREQ_RESOLUTION_HZ, N_FREQ_BINS, mechano_spectrograms
from .tacton import ComplexSpec, RhythmicSpec, SinusoidalSpec, TactonSpec, synthesize
from .vibnet import RatingTriple
from .waveform import DEFAULT_DEVICE_GAIN_G, Waveform

# family mix of the synthesized corpus: sinusoidal : rhythmic : complex
FAMILY_PROPORTIONS = (54, 60, 40)

ENVELOPE_LOWPASS_HZ = 20.0
MODULATION_CLAMP = 1.5


@dataclass(frozen=True)
class DatasetRecord:
    record_id: str
    tacton_id: str
    source: str  # "synthetic" | "external"
    waveform_path: str
    ratings: RatingTriple
    rating_sd: RatingTriple | None = None
    device_label: str | None = None

    def __post_init__(self):
        vals = self.ratings.as_array()
        if np.any(vals < 0) or np.any(vals > 100):
            raise ValueError(f"{self.record_id}: ratings must be in [0, 100], got {vals}")
        if self.rating_sd is not None and np.any(self.rating_sd.as_array() < 0):
            raise ValueError(f"{self.record_id}: rating sd must be >= 0")


@dataclass
class Metrics:
    rmse: dict
    within_sd: dict | None = None

    def to_dict(self) -> dict:
        d = {"per_dim": {}, "averages": {}}
        for dim in ("roughness", "valence", "arousal"):
            d["per_dim"][dim] = {"rmse": self.rmse[dim]}
            if self.within_sd is not None:
                d["per_dim"][dim]["within_sd"] = self.within_sd[dim]
        d["averages"]["rmse"] = self.rmse["average"]
        if self.within_sd is not None:
            d["averages"]["within_sd"] = self.within_sd["average"]
        return d


DIMS = ("roughness", "valence", "arousal")


def _triples_to_array(triples) -> np.ndarray:
    return np.stack([t.as_array() if isinstance(t, RatingTriple) else np.asarray(t, dtype=np.float64)
                     for t in triples])


def rmse(preds, truths) -> Metrics:
    p = _triples_to_array(preds)
    t = _triples_to_array(truths)
    if p.shape != t.shape or p.shape[0] < 1:
        raise ValueError(f"prediction/truth shape mismatch: {p.shape} vs {t.shape}")
    per_dim = np.sqrt(np.mean((p - t) ** 2, axis=0))
    out = {dim: float(v) for dim, v in zip(DIMS, per_dim)}
    out["average"] = float(per_dim.mean())
    return Metrics(rmse=out)


def within_sd(preds, truth_means, truth_sds) -> dict:
    p = _triples_to_array(preds)
    m = _triples_to_array(truth_means)
    s = _triples_to_array(truth_sds)
    if not (p.shape == m.shape == s.shape):
        raise ValueError("prediction/mean/sd shape mismatch")
    within = np.abs(p - m) <= s
    props = within.mean(axis=0)
    out = {dim: float(v) for dim, v in zip(DIMS, props)}
    out["average"] = float(props.mean())
    return out


def kfold_split(n: int, k: int, seed: int = 0) -> np.ndarray:
    """fold_of[i] in [0, k); folds disjoint, exhaustive, sizes differ by <= 1."""
    if not (n >= k >= 2):
        raise ValueError(f"need n >= k >= 2, got n={n}, k={k}")
    order = np.random.default_rng(seed).permutation(n)
    fold_of = np.empty(n, dtype=int)
    for fold, chunk in enumerate(np.array_split(order, k)):
        fold_of[chunk] = fold
    return fold_of


# -- waveform features ------------------------------------------------------

def envelope_modulation_index(w: Waveform, clamp: bool = False) -> float:
    """Std/mean of the 20 Hz-lowpassed rectified signal; 0 for silent input."""
    sos = butter(4, ENVELOPE_LOWPASS_HZ, btype="low", fs=w.sample_rate, output="sos")
    env = sosfiltfilt(sos, np.abs(w.samples))
    mean = env.mean()
    if mean <= 0:
        return 0.0
    ratio = float(env.std() / mean)
    if clamp:
        ratio = min(ratio, MODULATION_CLAMP)
    return ratio


def spectral_centroid_hz(w: Waveform) -> float:
    """Centroid of the time-averaged unfiltered spectrogram; 0 for empty spectra."""
    stack = mechano_spectrograms(w, channels=("unfiltered",))
    mean_mag = stack.data[0].mean(axis=1)
    total = mean_mag.sum()
    if total <= 0:
        return 0.0
    freqs = np.arange(N_FREQ_BINS) * FREQ_RESOLUTION_HZ
    return float((freqs * mean_mag).sum() / total)


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def synthetic_oracle(spec: TactonSpec, w: Waveform,
                     device_gain_g: float = DEFAULT_DEVICE_GAIN_G) -> RatingTriple:
    """Deterministic rating triple from three waveform features.

    e: clamped envelope-modulation index in [0, 1]; s: spectral centroid
    normalized by 500 Hz; m: RMS normalized by the device-gain peak.
    """
    e = envelope_modulation_index(w, clamp=True) / MODULATION_CLAMP
    s = spectral_centroid_hz(w) / 500.0
    m = float(np.sqrt(np.mean(w.samples ** 2))) / device_gain_g
    roughness = 100.0 * _clip01(0.6 * e + 0.4 * (1.0 - s))
    arousal = 100.0 * _clip01(0.5 * e + 0.3 * m + 0.2 * (1.0 - s))
    valence = 100.0 * _clip01(1.0 - 0.7 * (arousal / 100.0) - 0.3 * e)
    return RatingTriple(roughness=roughness, valence=valence, arousal=arousal)


def baseline_features(w: Waveform) -> np.ndarray:
    """Fixed feature vector for the linear baseline.

    [RMS, spectral centroid (Hz), duration (s), envelope-modulation index
    (unclamped), peak amplitude]
    """
    return np.array([
        float(np.sqrt(np.mean(w.samples ** 2))),
        spectral_centroid_hz(w),
        w.duration,
        envelope_modulation_index(w, clamp=False),
        float(np.max(np.abs(w.samples))) if len(w) else 0.0,
    ])


def linear_baseline(train_features: np.ndarray, train_targets: np.ndarray,
                    test_features: np.ndarray, test_targets: np.ndarray):
    """OLS with intercept per output dimension; ridge fallback when singular.

    Returns (Metrics, predictions, warning_or_None).
    """
    X = np.column_stack([np.ones(train_features.shape[0]), train_features])
    Xt = np.column_stack([np.ones(test_features.shape[0]), test_features])
    warning = None
    coef, _, rank, _ = np.linalg.lstsq(X, train_targets, rcond=None)
    if rank < X.shape[1]:
        warning = "singular design matrix; using ridge fallback (lambda=1e-6)"
        gram = X.T @ X
        coef = np.linalg.solve(gram + 1e-6 * np.eye(gram.shape[0]), X.T @ train_targets)
    preds = Xt @ coef
    return rmse(preds, test_targets), preds, warning


def mean_predictor_rmse(train_targets: np.ndarray, test_targets: np.ndarray) -> Metrics:
    """RMSE of always predicting the training-set mean triple."""
    mean = train_targets.mean(axis=0)
    preds = np.broadcast_to(mean, test_targets.shape)
    return rmse(preds, test_targets)


# -- corpus generation ------------------------------------------------------

def family_counts(n: int, proportions=FAMILY_PROPORTIONS) -> tuple:
    """Largest-remainder apportionment of n records across the three families."""
    total = sum(proportions)
    quotas = [n * p / total for p in proportions]
    counts = [int(q) for q in quotas]
    remainder = n - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: quotas[i] - counts[i], reverse=True)
    for i in order[:remainder]:
        counts[i] += 1
    return tuple(counts)


def _random_rhythm(rng: np.random.Generator, n_slots: int = 64) -> tuple:
    """Binary pattern built from alternating note/rest runs; at least one pulse.

    A per-pattern rest scale spreads duty cycles from sparse single taps to
    near-continuous buzzes, so the corpus spans the full envelope-modulation
    range rather than clustering around half-on patterns.
    """
    max_rest = int(rng.integers(1, 41))
    pulses = []
    while len(pulses) < n_slots:
        note = int(rng.integers(1, 5))
        rest = int(rng.integers(1, max_rest + 1))
        pulses.extend([1] * note)
        pulses.extend([0] * rest)
    pulses = pulses[:n_slots]
    if not any(pulses):
        pulses[0] = 1
    return tuple(pulses)


def _random_track(rng: np.random.Generator, duration: float, lo: float, hi: float) -> tuple:
    n_pts = int(rng.integers(3, 7))
    inner = np.sort(rng.uniform(0.0, duration, size=n_pts - 2))
    times = np.concatenate([[0.0], inner, [duration]])
    # nudge any duplicate times apart; breakpoints must strictly increase
    for i in range(1, len(times)):
        if times[i] <= times[i - 1]:
            times[i] = np.nextafter(times[i - 1], duration)
    values = rng.uniform(lo, hi, size=len(times))
    return tuple((float(t), float(v)) for t, v in zip(times, values))


def _random_spec(rng: np.random.Generator, family: int) -> TactonSpec:
    if family == 0:
        return SinusoidalSpec(
            amplitude=float(rng.choice([0.5, 1.0])),
            carrier_freq=float(rng.choice([80.0, 155.0, 230.0])),
            envelope_freq=float(rng.choice([0.0, 4.0, 8.0])),
            duration=float(rng.choice([0.3, 1.0, 2.0])),
        )
    if family == 1:
        return RhythmicSpec(
            amplitude=float(rng.choice([0.5, 1.0])),
            carrier_freq=float(rng.choice([80.0, 150.0, 230.0])),
            pulses=_random_rhythm(rng),
        )
    duration = float(rng.uniform(0.43, 5.38))
    return ComplexSpec(
        envelope_track=_random_track(rng, duration, 0.0, 1.0),
        frequency_track=_random_track(rng, duration, 80.0, 230.0),
        duration=duration,
    )


def generate_corpus(n: int, seed: int = 0, sample_rate: int = 1000,
                    device_gain_g: float = DEFAULT_DEVICE_GAIN_G):
    """n labelled records: (tacton_id, spec, waveform in G, RatingTriple)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = family_counts(n)
    out = []
    i = 0
    for family, count in enumerate(counts):
        for _ in range(count):
            rng = np.random.default_rng(np.random.SeedSequence((seed, family, i)))
            spec = _random_spec(rng, family)
            w = synthesize(spec, sample_rate).to_acceleration(device_gain_g)
            ratings = synthetic_oracle(spec, w, device_gain_g)
            out.append((f"T{i:04d}", spec, w, ratings))
            i += 1
    return out


def augmentation_pool(records, channels=("ra1", "ra2"), seed: int = 0,
                      padded_len: int | None = None):
    """Per-record variant pools for augmentation-sampled training.

    For each (tacton_id, spec, waveform, ratings) record, builds the original
    plus one draw of every augmentation method (8 variants total), padded to
    the pipeline length, and the matching mechanoreceptive spectrograms.
    Returns (wave_pool, spec_pool) with shapes (n, 8, T) and (n, 8, C, F, TT)
    in float32. Variants whose speed change overruns the padded length are
    cropped to it; the tail is silence for every corpus family, so nothing
    audible is lost.
    """
    from .augment import ALL_METHODS, AugmentConfig, augment_record, record_rng
    from .mechano import PADDED_LEN
    from .waveform import zero_pad

    target_len = PADDED_LEN if padded_len is None else padded_len
    config = AugmentConfig()
    wave_pool = []
    spec_pool = []
    for tacton_id, _, w, _ in records:
        variants = [w]
        for method in ALL_METHODS:
            rng = record_rng(seed, tacton_id, method, 0)
            aw, _ = augment_record(w, method, config, rng)
            if len(aw) > target_len:
                aw = Waveform(aw.samples[:target_len], aw.sample_rate, units=aw.units)
            variants.append(aw)
        padded = [zero_pad(v, target_len) for v in variants]
        wave_pool.append([p.samples for p in padded])
        spec_pool.append([mechano_spectrograms(p, channels).data for p in padded])
    return (np.asarray(wave_pool, dtype=np.float32),
            np.asarray(spec_pool, dtype=np.float32))


# -- manifests and reports --------------------------------------------------

def write_dataset_manifest(records, path: str | Path) -> None:
    """JSON lines, one DatasetRecord per line."""
    with open(path, "w") as f:
        for r in records:
            entry = {
                "record_id": r.record_id,
                "tacton_id": r.tacton_id,
                "source": r.source,
                "waveform_path": r.waveform_path,
                "ratings": {"r": r.ratings.roughness, "v": r.ratings.valence,
                            "a": r.ratings.arousal},
            }
            if r.rating_sd is not None:
                entry["sd"] = {"r": r.rating_sd.roughness, "v": r.rating_sd.valence,
                               "a": r.rating_sd.arousal}
            if r.device_label is not None:
                entry["device_label"] = r.device_label
            f.write(json.dumps(entry) + "\n")


def read_dataset_manifest(path: str | Path):
    records = []
    with open(path) as f:
        for line in f:
            if not line.strip():
                continue
            e = json.loads(line)
            sd = e.get("sd")
            records.append(DatasetRecord(
                record_id=e["record_id"],
                tacton_id=e["tacton_id"],
                source=e["source"],
                waveform_path=e["waveform_path"],
                ratings=RatingTriple(e["ratings"]["r"], e["ratings"]["v"], e["ratings"]["a"]),
                rating_sd=RatingTriple(sd["r"], sd["v"], sd["a"]) if sd else None,
                device_label=e.get("device_label"),
            ))
    return records


def write_metrics_report(metrics: Metrics, path: str | Path) -> None:
    Path(path).write_text(json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n")


def write_metrics_csv(metrics: Metrics, path: str | Path) -> None:
    lines = ["dimension,rmse" + (",within_sd" if metrics.within_sd else "")]
    for dim in DIMS + ("average",):
        row = f"{dim},{metrics.rmse[dim]!r}"
        if metrics.within_sd:
            row += f",{metrics.within_sd[dim]!r}"
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n")
