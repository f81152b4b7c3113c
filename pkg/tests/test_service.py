import base64

import numpy as np
import pytest
from fastapi.testclient import TestClient

from vibtact import vibnet
from vibtact.service import ServiceConfig, create_app
from vibtact.vibnet import VibNetConfig

TINY = VibNetConfig(
    channels=("unfiltered",), gru_layers=1, gru_hidden=4, seq_frame=600,
    stem_channels=4, resnet_spec=((2, 4, 2, 1),), head_dims=(8, 4),
    dropout_p=0.0, seed=0)

SIN_SPEC = {"type": "sinusoidal", "amplitude": 1.0, "carrier_freq": 155.0,
            "envelope_freq": 4.0, "duration": 0.5}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(vibnet.build(TINY)))


@pytest.fixture(scope="module")
def bare_client():
    return TestClient(create_app(None))


class TestHealth:
    def test_ok(self, bare_client):
        r = bare_client.get("/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}


class TestModelInfo:
    def test_info(self, client):
        r = client.get("/model/info")
        assert r.status_code == 200
        body = r.json()
        assert body["channels"] == ["unfiltered"]
        assert body["config"]["gru_hidden"] == 4

    def test_503_without_model(self, bare_client):
        r = bare_client.get("/model/info")
        assert r.status_code == 503
        assert r.json()["error"]["code"] == "model_not_loaded"


class TestSynthesize:
    def test_waveform_and_preview(self, client):
        r = client.post("/synthesize", json=SIN_SPEC)
        assert r.status_code == 200
        body = r.json()
        raw = base64.b64decode(body["waveform"]["data_b64"])
        samples = np.frombuffer(raw, dtype="<f4")
        assert samples.shape == (500,)
        assert body["waveform"]["sample_rate"] == 1000
        preview = np.array(body["spectrograms"]["preview"])
        assert preview.shape[0] == 1  # one channel for this model
        assert preview.shape[1] <= 64 and preview.shape[2] <= 64

    def test_full_resolution(self, client):
        r = client.post("/synthesize?full_resolution=true", json=SIN_SPEC)
        preview = np.array(r.json()["spectrograms"]["preview"])
        assert preview.shape == (1, 251, 121)

    def test_bad_json_400(self, client):
        r = client.post("/synthesize", content=b"{not json",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "bad_json"

    def test_unknown_type_400(self, client):
        r = client.post("/synthesize", json={"type": "square", "amplitude": 1.0})
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "schema_violation"

    def test_out_of_range_spec_422(self, client):
        r = client.post("/synthesize", json={**SIN_SPEC, "amplitude": 5.0})
        assert r.status_code == 422
        body = r.json()["error"]
        assert body["code"] == "invalid_spec"
        assert body["report"]["violations"]

    def test_band_warning_surfaces(self, client):
        r = client.post("/synthesize", json={**SIN_SPEC, "carrier_freq": 40.0})
        assert r.status_code == 200
        assert r.json()["validation"]["warnings"]


class TestPredict:
    def test_spec_prediction_deterministic(self, client):
        a = client.post("/predict", json={"spec": SIN_SPEC}).json()
        b = client.post("/predict", json={"spec": SIN_SPEC}).json()
        assert a == b
        for dim in ("roughness", "valence", "arousal"):
            assert 0.0 <= a["ratings"][dim] <= 100.0
        assert "raw" in a and "normalization" in a

    def test_waveform_prediction(self, client):
        samples = (0.1 * np.sin(2 * np.pi * 80 * np.arange(1000) / 1000)).astype("<f4")
        payload = {"waveform": {"data_b64": base64.b64encode(samples.tobytes()).decode(),
                                "sample_rate": 1000}}
        r = client.post("/predict", json=payload)
        assert r.status_code == 200

    def test_spec_and_waveform_rejected(self, client):
        r = client.post("/predict", json={"spec": SIN_SPEC, "waveform": {}})
        assert r.status_code == 400

    def test_neither_rejected(self, client):
        r = client.post("/predict", json={})
        assert r.status_code == 400

    def test_wrong_rate_rejected(self, client):
        payload = {"waveform": {"data_b64": "", "sample_rate": 44100}}
        r = client.post("/predict", json=payload)
        assert r.status_code == 400

    def test_503_without_model(self, bare_client):
        r = bare_client.post("/predict", json={"spec": SIN_SPEC})
        assert r.status_code == 503

    def test_overlong_spec_422(self, client):
        r = client.post("/predict", json={"spec": {
            "type": "complex",
            "duration": 7.0,
            "envelope_track": [[0.0, 0.5], [7.0, 0.5]],
            "frequency_track": [[0.0, 100.0], [7.0, 100.0]],
        }})
        assert r.status_code == 422


class TestBodyLimit:
    def test_413_oversize(self):
        app = create_app(None, ServiceConfig(max_body_bytes=100))
        c = TestClient(app)
        r = c.post("/synthesize", content=b"x" * 200,
                   headers={"content-type": "application/json",
                            "content-length": "200"})
        assert r.status_code == 413
        assert r.json()["error"]["code"] == "oversize"


class TestConfig:
    def test_bad_port(self):
        with pytest.raises(ValueError):
            ServiceConfig(port=0)
