import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vibtact import dataset as ds
from vibtact.tacton import ComplexSpec, RhythmicSpec, SinusoidalSpec, synthesize, validate
from vibtact.vibnet import RatingTriple
from vibtact.waveform import Waveform


def triple(r, v, a):
    return RatingTriple(r, v, a)


class TestMetrics:
    def test_rmse_identical_zero(self):
        t = [triple(10, 20, 30), triple(40, 50, 60)]
        m = ds.rmse(t, t)
        assert m.rmse["average"] == 0.0

    def test_rmse_hand_value(self):
        preds = [triple(3, 0, 0)]
        truths = [triple(0, 4, 0)]
        m = ds.rmse(preds, truths)
        assert m.rmse["roughness"] == pytest.approx(3.0)
        assert m.rmse["valence"] == pytest.approx(4.0)
        assert m.rmse["arousal"] == 0.0
        assert m.rmse["average"] == pytest.approx(7.0 / 3.0)

    def test_rmse_symmetric(self):
        rng = np.random.default_rng(0)
        a = rng.uniform(0, 100, (5, 3))
        b = rng.uniform(0, 100, (5, 3))
        assert ds.rmse(a, b).rmse == ds.rmse(b, a).rmse

    @given(st.floats(0.1, 10.0))
    @settings(max_examples=20, deadline=None)
    def test_rmse_scales_with_error(self, alpha):
        base = np.zeros((4, 3))
        err = np.arange(12, dtype=float).reshape(4, 3) + 1.0
        m1 = ds.rmse(base + err, base)
        m2 = ds.rmse(base + alpha * err, base)
        assert m2.rmse["average"] == pytest.approx(alpha * m1.rmse["average"])

    def test_rmse_length_mismatch(self):
        with pytest.raises(ValueError):
            ds.rmse([triple(1, 2, 3)], [triple(1, 2, 3), triple(4, 5, 6)])

    def test_within_sd_shift_invariant(self):
        preds = np.array([[50.0, 50.0, 50.0]])
        means = np.array([[52.0, 45.0, 80.0]])
        sds = np.array([[5.0, 4.0, 10.0]])
        a = ds.within_sd(preds, means, sds)
        b = ds.within_sd(preds + 7.0, means + 7.0, sds)
        assert a == b

    def test_within_sd_proportions(self):
        preds = np.array([[50.0, 50.0, 50.0], [50.0, 50.0, 50.0]])
        means = np.array([[52.0, 70.0, 50.0], [45.0, 50.0, 90.0]])
        sds = np.full((2, 3), 5.0)
        out = ds.within_sd(preds, means, sds)
        assert out["roughness"] == 1.0
        assert out["valence"] == 0.5
        assert out["arousal"] == 0.5


class TestKFold:
    @given(st.integers(2, 40), st.integers(2, 7), st.integers(0, 1000))
    @settings(max_examples=60, deadline=None)
    def test_partition_properties(self, n, k, seed):
        if n < k:
            return
        fold = ds.kfold_split(n, k, seed)
        assert fold.shape == (n,)
        sizes = np.bincount(fold, minlength=k)
        assert sizes.sum() == n
        assert sizes.max() - sizes.min() <= 1
        assert set(np.unique(fold)) <= set(range(k))

    def test_five_fold_200_sizes(self):
        fold = ds.kfold_split(200, 5, seed=0)
        assert sorted(np.bincount(fold)) == [40, 40, 40, 40, 40]

    def test_seed_reproducible(self):
        assert np.array_equal(ds.kfold_split(100, 5, 3), ds.kfold_split(100, 5, 3))

    def test_bad_args(self):
        with pytest.raises(ValueError):
            ds.kfold_split(3, 5)
        with pytest.raises(ValueError):
            ds.kfold_split(10, 1)


def oracle_by_hand(w, device_gain_g=0.3):
    """Recompute the rating formulas directly from scipy primitives."""
    from scipy.signal import butter, sosfiltfilt
    from vibtact.mechano import mechano_spectrograms
    sos = butter(4, 20.0, btype="low", fs=w.sample_rate, output="sos")
    env = sosfiltfilt(sos, np.abs(w.samples))
    e = 0.0 if env.mean() <= 0 else min(env.std() / env.mean(), 1.5) / 1.5
    mag = mechano_spectrograms(w, channels=("unfiltered",)).data[0].mean(axis=1)
    s = 0.0 if mag.sum() <= 0 else float((np.arange(251) * 2.0 * mag).sum() / mag.sum()) / 500.0
    m = float(np.sqrt(np.mean(w.samples ** 2))) / device_gain_g
    clip = lambda x: min(1.0, max(0.0, x))
    rough = 100 * clip(0.6 * e + 0.4 * (1 - s))
    ar = 100 * clip(0.5 * e + 0.3 * m + 0.2 * (1 - s))
    val = 100 * clip(1 - 0.7 * (ar / 100) - 0.3 * e)
    return rough, val, ar


class TestOracle:
    def test_zero_waveform_triple(self):
        spec = SinusoidalSpec(amplitude=1.0, carrier_freq=155.0, envelope_freq=4.0, duration=1.0)
        w = Waveform(np.zeros(1000), 1000, units="G")
        r = ds.synthetic_oracle(spec, w)
        assert (r.roughness, r.valence, r.arousal) == (40.0, 86.0, 20.0)

    def test_frozen_sinusoidal_value(self):
        spec = SinusoidalSpec(amplitude=1.0, carrier_freq=155.0, envelope_freq=4.0, duration=1.0)
        w = synthesize(spec, 1000).to_acceleration(0.3)
        r = ds.synthetic_oracle(spec, w)
        assert r.roughness == pytest.approx(46.59841002801238, abs=1e-9)
        assert r.valence == pytest.approx(59.19866655059474, abs=1e-9)
        assert r.arousal == pytest.approx(44.659154986552075, abs=1e-9)

    def test_frozen_rhythmic_value(self):
        spec = RhythmicSpec(amplitude=1.0, carrier_freq=80.0, pulses=tuple([1, 1, 0, 0] * 16))
        w = synthesize(spec, 1000).to_acceleration(0.3)
        r = ds.synthetic_oracle(spec, w)
        assert r.roughness == pytest.approx(68.28004282248092, abs=1e-9)
        assert r.valence == pytest.approx(38.828413104251766, abs=1e-9)
        assert r.arousal == pytest.approx(61.30476539020122, abs=1e-9)

    def test_matches_independent_recomputation(self):
        specs = [
            SinusoidalSpec(amplitude=0.5, carrier_freq=80.0, envelope_freq=8.0, duration=0.3),
            SinusoidalSpec(amplitude=1.0, carrier_freq=230.0, envelope_freq=0.0, duration=2.0),
            RhythmicSpec(amplitude=1.0, carrier_freq=150.0,
                         pulses=tuple(int(b) for b in np.random.default_rng(5).integers(0, 2, 64))),
        ]
        for spec in specs:
            w = synthesize(spec, 1000).to_acceleration(0.3)
            got = ds.synthetic_oracle(spec, w)
            want = oracle_by_hand(w)
            np.testing.assert_allclose(got.as_array(), want, rtol=1e-12)

    def test_deterministic(self):
        spec = SinusoidalSpec(amplitude=1.0, carrier_freq=80.0, envelope_freq=4.0, duration=1.0)
        w = synthesize(spec, 1000).to_acceleration(0.3)
        assert ds.synthetic_oracle(spec, w) == ds.synthetic_oracle(spec, w)

    def test_arousal_roughness_positive_correlation(self):
        recs = ds.generate_corpus(200, seed=2)
        r = np.array([t.roughness for _, _, _, t in recs])
        a = np.array([t.arousal for _, _, _, t in recs])
        assert np.corrcoef(r, a)[0, 1] > 0


class TestFeatures:
    def test_modulation_index_silent(self):
        assert ds.envelope_modulation_index(Waveform(np.zeros(500), 1000)) == 0.0

    def test_modulation_index_clamp(self):
        # a single short burst in a long silence has huge std/mean
        x = np.zeros(4000)
        x[100:160] = np.sin(2 * np.pi * 80 * np.arange(60) / 1000)
        w = Waveform(x, 1000)
        raw = ds.envelope_modulation_index(w, clamp=False)
        assert raw > 1.5
        assert ds.envelope_modulation_index(w, clamp=True) == 1.5

    def test_centroid_of_tone(self):
        t = np.arange(3000) / 1000
        w = Waveform(np.sin(2 * np.pi * 100.0 * t), 1000)
        assert ds.spectral_centroid_hz(w) == pytest.approx(100.0, abs=5.0)

    def test_feature_vector_layout(self):
        t = np.arange(2000) / 1000
        w = Waveform(0.2 * np.sin(2 * np.pi * 80.0 * t), 1000)
        f = ds.baseline_features(w)
        assert f.shape == (5,)
        assert f[0] == pytest.approx(0.2 / np.sqrt(2), rel=1e-3)  # RMS
        assert f[2] == pytest.approx(2.0)  # duration
        # sampling never lands exactly on the crest, so the peak is just shy of 0.2
        assert f[4] == pytest.approx(0.2, rel=2e-3)


class TestLinearBaseline:
    def test_exactly_linear_targets_fit(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(40, 5))
        W = rng.normal(size=(5, 3))
        y = X @ W + 7.0
        Xt = rng.normal(size=(10, 5))
        yt = Xt @ W + 7.0
        m, preds, warn = ds.linear_baseline(X, y, Xt, yt)
        assert m.rmse["average"] < 1e-6
        assert warn is None

    def test_constant_targets(self):
        X = np.random.default_rng(1).normal(size=(20, 5))
        y = np.full((20, 3), 42.0)
        m, preds, warn = ds.linear_baseline(X, y, X, y)
        assert m.rmse["average"] == pytest.approx(0.0, abs=1e-8)

    def test_singular_design_warns(self):
        X = np.ones((20, 5))  # all columns collinear with the intercept
        y = np.random.default_rng(2).normal(size=(20, 3))
        m, preds, warn = ds.linear_baseline(X, y, X, y)
        assert warn is not None and "ridge" in warn

    def test_mean_predictor(self):
        train = np.array([[0.0, 0.0, 0.0], [100.0, 100.0, 100.0]])
        test = np.array([[50.0, 50.0, 50.0]])
        m = ds.mean_predictor_rmse(train, test)
        assert m.rmse["average"] == 0.0


class TestCorpus:
    def test_family_apportionment(self):
        assert ds.family_counts(154) == (54, 60, 40)
        assert ds.family_counts(15) == (5, 6, 4)
        assert ds.family_counts(200) == (70, 78, 52)

    def test_apportionment_sums(self):
        for n in range(1, 60):
            assert sum(ds.family_counts(n)) == n

    def test_corpus_seeded_identical(self):
        a = ds.generate_corpus(12, seed=9)
        b = ds.generate_corpus(12, seed=9)
        for (ida, sa, wa, ra), (idb, sb, wb, rb) in zip(a, b):
            assert ida == idb and sa == sb and ra == rb
            assert np.array_equal(wa.samples, wb.samples)

    def test_corpus_specs_validate(self):
        for _, spec, _, _ in ds.generate_corpus(30, seed=4):
            assert validate(spec).ok

    def test_corpus_families_present(self):
        recs = ds.generate_corpus(20, seed=1)
        kinds = {type(spec) for _, spec, _, _ in recs}
        assert kinds == {SinusoidalSpec, RhythmicSpec, ComplexSpec}

    def test_ratings_in_range(self):
        for _, _, _, r in ds.generate_corpus(40, seed=6):
            arr = r.as_array()
            assert np.all(arr >= 0) and np.all(arr <= 100)

    def test_bad_n(self):
        with pytest.raises(ValueError):
            ds.generate_corpus(0)


class TestManifests:
    def test_round_trip(self, tmp_path):
        recs = [
            ds.DatasetRecord("R0", "T0001", "synthetic", "waves/T0001.f32",
                             triple(10, 20, 30)),
            ds.DatasetRecord("R1", "T0002", "external", "waves/T0002.f32",
                             triple(40, 50, 60), rating_sd=triple(1, 2, 3),
                             device_label="voice coil"),
        ]
        path = tmp_path / "m.jsonl"
        ds.write_dataset_manifest(recs, path)
        back = ds.read_dataset_manifest(path)
        assert back == recs

    def test_out_of_range_rating_rejected(self):
        with pytest.raises(ValueError):
            ds.DatasetRecord("R0", "T0", "synthetic", "w.f32", triple(150, 0, 0))

    def test_metrics_report_stable_bytes(self, tmp_path):
        m = ds.rmse([triple(1, 2, 3)], [triple(4, 6, 3)])
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        ds.write_metrics_report(m, p1)
        ds.write_metrics_report(m, p2)
        assert p1.read_bytes() == p2.read_bytes()
        payload = json.loads(p1.read_text())
        assert payload["averages"]["rmse"] == pytest.approx((3 + 4 + 0) / 3)

    def test_metrics_csv(self, tmp_path):
        m = ds.rmse([triple(1, 2, 3)], [triple(4, 6, 3)])
        path = tmp_path / "m.csv"
        ds.write_metrics_csv(m, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "dimension,rmse"
        assert len(lines) == 5
