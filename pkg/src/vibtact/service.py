"""Local HTTP service exposing synthesis, processing, and prediction."""
from __future__ import annotations

import base64
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import vibnet
from .mechano import FREQ_RESOLUTION_HZ, HOP_S, PADDED_LEN, PIPELINE_RATE, mechano_spectrograms
from .tacton import SpecValidationError, spec_from_dict, synthesize, validate
from .waveform import DEFAULT_DEVICE_GAIN_G, Waveform, zero_pad

PREVIEW_MAX = 64


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8077
    checkpoint_path: str | None = None
    max_body_bytes: int = 8 * 1024 * 1024
    cors_origins: tuple = ("*",)

    def __post_init__(self):
        if not (0 < self.port < 65536):
            raise ValueError(f"invalid port {self.port}")


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message, **extra}})


def _preview(data: np.ndarray, full: bool) -> list:
    """Block-mean downsample a (F, T) image to at most 64x64 for transport."""
    if full:
        return data.tolist()
    f_step = max(1, int(np.ceil(data.shape[0] / PREVIEW_MAX)))
    t_step = max(1, int(np.ceil(data.shape[1] / PREVIEW_MAX)))
    f_n = data.shape[0] // f_step * f_step
    t_n = data.shape[1] // t_step * t_step
    blocks = data[:f_n, :t_n].reshape(f_n // f_step, f_step, t_n // t_step, t_step)
    return blocks.mean(axis=(1, 3)).tolist()


def _decode_waveform(payload: dict) -> Waveform:
    rate = payload.get("sample_rate")
    if rate != PIPELINE_RATE:
        raise ValueError(f"waveform sample_rate must be {PIPELINE_RATE}, got {rate}")
    raw = base64.b64decode(payload["data_b64"])
    samples = np.frombuffer(raw, dtype="<f4").astype(np.float64)
    if samples.shape[0] > PADDED_LEN:
        raise ValueError(f"waveform longer than {PADDED_LEN} samples")
    return Waveform(samples, PIPELINE_RATE, units=payload.get("units", "G"))


def create_app(model: "vibnet.VibNet | None", config: ServiceConfig = ServiceConfig()) -> FastAPI:
    app = FastAPI(title="vibtact service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > config.max_body_bytes:
            return _error(413, "oversize", f"body exceeds {config.max_body_bytes} bytes")
        return await call_next(request)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/model/info")
    def model_info():
        if model is None:
            return _error(503, "model_not_loaded", "no checkpoint loaded")
        return {
            "config": model.config.to_dict(),
            "channels": list(model.config.channels),
            "version": vibnet.CHECKPOINT_VERSION,
        }

    @app.post("/synthesize")
    async def synthesize_endpoint(request: Request, full_resolution: bool = False):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_json", "request body is not valid JSON")
        try:
            spec = spec_from_dict(body)
        except (SpecValidationError, KeyError, TypeError, ValueError) as e:
            return _error(400, "schema_violation", str(e))
        report = validate(spec)
        if not report.ok:
            return _error(422, "invalid_spec", "spec violates invariants",
                          report={"ok": False, "violations": report.violations,
                                  "warnings": report.warnings})
        w = synthesize(spec, PIPELINE_RATE).to_acceleration(DEFAULT_DEVICE_GAIN_G)
        channels = model.config.channels if model is not None else ("ra1", "ra2")
        stack = mechano_spectrograms(zero_pad(w, PADDED_LEN), channels)
        return {
            "waveform": {
                "data_b64": base64.b64encode(w.samples.astype("<f4").tobytes()).decode(),
                "sample_rate": w.sample_rate,
                "units": w.units,
                "length": len(w),
            },
            "spectrograms": {
                "channels": list(stack.channels),
                "freq_resolution_hz": FREQ_RESOLUTION_HZ,
                "hop_s": HOP_S,
                "preview": [_preview(layer, full_resolution) for layer in stack.data],
            },
            "validation": {"ok": True, "violations": [], "warnings": report.warnings},
        }

    @app.post("/predict")
    async def predict_endpoint(request: Request):
        if model is None:
            return _error(503, "model_not_loaded", "no checkpoint loaded")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_json", "request body is not valid JSON")
        if not isinstance(body, dict) or ("spec" in body) == ("waveform" in body):
            return _error(400, "schema_violation",
                          "body must contain exactly one of 'spec' or 'waveform'")
        warnings: list = []
        try:
            if "spec" in body:
                spec = spec_from_dict(body["spec"])
                report = validate(spec)
                if not report.ok:
                    return _error(422, "invalid_spec", "spec violates invariants",
                                  report={"ok": False, "violations": report.violations,
                                          "warnings": report.warnings})
                warnings = report.warnings
                w = synthesize(spec, PIPELINE_RATE).to_acceleration(DEFAULT_DEVICE_GAIN_G)
                if len(w) > PADDED_LEN:
                    return _error(422, "invalid_spec", f"spec longer than {PADDED_LEN} samples",
                                  report={"ok": False,
                                          "violations": [f"duration exceeds {PADDED_LEN // PIPELINE_RATE} s"],
                                          "warnings": warnings})
            else:
                w = _decode_waveform(body["waveform"])
        except (SpecValidationError, KeyError, TypeError, ValueError) as e:
            return _error(400, "schema_violation", str(e))
        clamped, raw = model.predict(w)
        return {
            "ratings": {"roughness": clamped.roughness, "valence": clamped.valence,
                        "arousal": clamped.arousal},
            "raw": {"roughness": raw.roughness, "valence": raw.valence,
                    "arousal": raw.arousal},
            "normalization": {
                "spec_mean": model.spec_mean.tolist(),
                "spec_std": model.spec_std.tolist(),
                "wave_scale": model.wave_scale,
            },
            "warnings": warnings,
        }

    return app


def serve(config: ServiceConfig) -> None:
    import uvicorn

    model = vibnet.load(config.checkpoint_path) if config.checkpoint_path else None
    app = create_app(model, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
