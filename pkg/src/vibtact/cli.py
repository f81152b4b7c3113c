"""Command-line entry points for the full pipeline."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import augment as aug
from . import dataset as ds
from . import vibnet
from .mechano import PADDED_LEN, PIPELINE_RATE, mechano_spectrograms, save_spectrograms
from .tacton import load_spec, save_spec, synthesize, validate
from .vibnet import RatingTriple, TrainHyper, VibNetConfig
from .waveform import (DEFAULT_DEVICE_GAIN_G, Waveform, load_waveform,
                       save_waveform, zero_pad)


class CliError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _load_manifest(path) -> list:
    if not Path(path).exists():
        raise CliError("file_not_found", f"manifest not found: {path}")
    return ds.read_dataset_manifest(path)


def _load_record_waveform(record: ds.DatasetRecord, base: Path) -> Waveform:
    p = Path(record.waveform_path)
    if not p.is_absolute():
        p = base / p
    if not p.exists():
        raise CliError("file_not_found", f"waveform not found: {p}")
    return load_waveform(p)


def _records_to_arrays(records, base: Path, channels):
    waves, specs, targets = [], [], []
    for r in records:
        w = _load_record_waveform(r, base)
        padded = zero_pad(w, PADDED_LEN)
        stack = mechano_spectrograms(padded, channels)
        waves.append(padded.samples)
        specs.append(stack.data)
        targets.append(r.ratings.as_array())
    return np.stack(waves), np.stack(specs), np.stack(targets)


# -- commands ---------------------------------------------------------------

def cmd_synth(args):
    spec = load_spec(args.spec)
    report = validate(spec)
    if not report.ok:
        raise CliError("invalid_spec", "; ".join(report.violations))
    w = synthesize(spec, args.rate)
    if args.gain_g is not None:
        w = w.to_acceleration(args.gain_g)
    save_waveform(w, args.out)
    print(json.dumps({"out": str(args.out), "length": len(w), "sample_rate": w.sample_rate,
                      "units": w.units, "warnings": report.warnings}))


def cmd_gen_corpus(args):
    out = Path(args.out)
    (out / "waves").mkdir(parents=True, exist_ok=True)
    (out / "specs").mkdir(parents=True, exist_ok=True)
    corpus = ds.generate_corpus(args.n, seed=args.seed)
    records = []
    for tid, spec, w, ratings in corpus:
        save_waveform(w, out / "waves" / f"{tid}.f32")
        save_spec(spec, out / "specs" / f"{tid}.json")
        records.append(ds.DatasetRecord(
            record_id=tid, tacton_id=tid, source="synthetic",
            waveform_path=f"waves/{tid}.f32", ratings=ratings))
    ds.write_dataset_manifest(records, out / "manifest.jsonl")
    print(json.dumps({"out": str(out), "records": len(records)}))


def cmd_augment(args):
    records = _load_manifest(args.inp)
    base = Path(args.inp).parent
    out = Path(args.out)
    (out / "waves").mkdir(parents=True, exist_ok=True)
    config = aug.AugmentConfig(
        repetitions=args.reps, rng_seed=args.seed,
        duration_change_cap=args.duration_cap_ms / 1000.0 if args.duration_cap_ms else None)
    by_id = {r.record_id: r for r in records}
    pairs = [(r.record_id, _load_record_waveform(r, base)) for r in records]
    outputs, manifest = aug.augment_dataset(pairs, config)
    out_records = []
    for (out_id, w), prov in zip(outputs, manifest):
        save_waveform(w, out / "waves" / f"{out_id}.f32")
        src = by_id[prov["src_id"]]
        out_records.append(ds.DatasetRecord(
            record_id=out_id, tacton_id=src.tacton_id, source=src.source,
            waveform_path=f"waves/{out_id}.f32", ratings=src.ratings,
            rating_sd=src.rating_sd, device_label=src.device_label))
    ds.write_dataset_manifest(out_records, out / "manifest.jsonl")
    aug.write_manifest(manifest, out / "provenance.jsonl")
    print(json.dumps({"out": str(out), "inputs": len(records), "records": len(out_records)}))


def cmd_process(args):
    channels = tuple(args.channels.split(","))
    in_dir = Path(args.inp)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = sorted(in_dir.glob("*.f32"))
    if not files:
        raise CliError("file_not_found", f"no .f32 waveforms in {in_dir}")
    for f in files:
        w = load_waveform(f)
        stack = mechano_spectrograms(zero_pad(w, PADDED_LEN), channels)
        save_spectrograms(stack, out_dir / f.name)
    print(json.dumps({"out": str(out_dir), "processed": len(files),
                      "channels": list(channels)}))


def cmd_train(args):
    records = _load_manifest(args.data)
    base = Path(args.data).parent
    if args.config:
        config = VibNetConfig.from_dict(json.loads(Path(args.config).read_text()))
    else:
        config = VibNetConfig()
    if args.seed is not None:
        config = VibNetConfig.from_dict({**config.to_dict(), "seed": args.seed})
    hyper = TrainHyper(lr=args.lr, batch_size=args.batch, epochs=args.epochs,
                       seed=args.seed if args.seed is not None else 0)
    waves, specs, targets = _records_to_arrays(records, base, config.channels)

    report = {"folds": []}
    if args.folds and args.folds > 1:
        fold_of = ds.kfold_split(len(records), args.folds, seed=hyper.seed)
        for fold in range(args.folds):
            tr = fold_of != fold
            te = fold_of == fold
            m = vibnet.build(config)
            vibnet.train(m, waves[tr], specs[tr], targets[tr], hyper)
            preds = m.predict_arrays(waves[te], specs[te])
            report["folds"].append(ds.rmse(preds, targets[te]).to_dict())
        report["mean_validation_rmse"] = float(np.mean(
            [f["averages"]["rmse"] for f in report["folds"]]))

    model = vibnet.build(config)
    log = vibnet.train(model, waves, specs, targets, hyper)
    vibnet.save(model, args.out)
    report["final_train_mse"] = log[-1]["mse"]
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(json.dumps({"out": str(args.out), **report}))


def cmd_predict(args):
    model = vibnet.load(args.model)
    if args.data:
        records = _load_manifest(args.data)
        base = Path(args.data).parent
        preds = []
        for r in records:
            clamped, raw = model.predict(_load_record_waveform(r, base))
            preds.append({"record_id": r.record_id,
                          "r": clamped.roughness, "v": clamped.valence, "a": clamped.arousal,
                          "raw": [raw.roughness, raw.valence, raw.arousal]})
        text = json.dumps(preds, indent=2)
        if args.out:
            Path(args.out).write_text(text + "\n")
        else:
            print(text)
    else:
        if not args.inp:
            raise CliError("bad_arguments", "predict needs --in or --data")
        if not Path(args.inp).exists():
            raise CliError("file_not_found", f"waveform not found: {args.inp}")
        clamped, raw = model.predict(load_waveform(args.inp))
        print(json.dumps({"r": clamped.roughness, "v": clamped.valence, "a": clamped.arousal,
                          "raw": [raw.roughness, raw.valence, raw.arousal]}))


def _load_triples(path) -> list:
    if not Path(path).exists():
        raise CliError("file_not_found", f"file not found: {path}")
    text = Path(path).read_text()
    if path.endswith(".jsonl"):
        records = ds.read_dataset_manifest(path)
        return [r.ratings for r in records]
    data = json.loads(text)
    triples = []
    for item in data:
        if isinstance(item, dict):
            triples.append(RatingTriple(item["r"], item["v"], item["a"]))
        else:
            triples.append(RatingTriple(*item))
    return triples


def cmd_eval(args):
    preds = _load_triples(args.pred)
    truths = _load_triples(args.truth)
    if len(preds) != len(truths):
        raise CliError("length_mismatch",
                       f"{len(preds)} predictions vs {len(truths)} truths")
    metrics = ds.rmse(preds, truths)
    if args.out:
        ds.write_metrics_report(metrics, args.out)
    print(json.dumps(metrics.to_dict(), sort_keys=True))


def cmd_serve(args):
    from .service import ServiceConfig, serve
    serve(ServiceConfig(host=args.host, port=args.port, checkpoint_path=args.model))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vibtact")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a Tacton spec to a waveform")
    s.add_argument("--spec", required=True)
    s.add_argument("--rate", type=int, default=PIPELINE_RATE)
    s.add_argument("--out", required=True)
    s.add_argument("--gain-g", type=float, default=None,
                   help="convert to acceleration (G) with this device gain")
    s.set_defaults(fn=cmd_synth)

    s = sub.add_parser("gen-corpus", help="generate a labelled synthetic corpus")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_gen_corpus)

    s = sub.add_parser("augment", help="expand a dataset with bounded augmentations")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--reps", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--duration-cap-ms", type=float, default=None)
    s.set_defaults(fn=cmd_augment)

    s = sub.add_parser("process", help="convert waveforms to spectrogram stacks")
    s.add_argument("--channels", default="ra1,ra2")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_process)

    s = sub.add_parser("train", help="train a VibNet model")
    s.add_argument("--data", required=True)
    s.add_argument("--config", default=None)
    s.add_argument("--out", required=True)
    s.add_argument("--folds", type=int, default=0)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--epochs", type=int, default=100)
    s.add_argument("--lr", type=float, default=0.001)
    s.add_argument("--batch", type=int, default=32)
    s.add_argument("--report", default=None)
    s.set_defaults(fn=cmd_train)

    s = sub.add_parser("predict", help="predict ratings for waveforms")
    s.add_argument("--model", required=True)
    s.add_argument("--in", dest="inp", default=None)
    s.add_argument("--data", default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_predict)

    s = sub.add_parser("eval", help="RMSE between predictions and truths")
    s.add_argument("--pred", required=True)
    s.add_argument("--truth", required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--model", default=None)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8077)
    s.set_defaults(fn=cmd_serve)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
        return 0
    except CliError as e:
        print(json.dumps({"error": {"code": e.code, "message": str(e)}}), file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(json.dumps({"error": {"code": "file_not_found", "message": str(e)}}),
              file=sys.stderr)
        return 2
    except (ValueError, vibnet.CheckpointError) as e:
        print(json.dumps({"error": {"code": type(e).__name__, "message": str(e)}}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
