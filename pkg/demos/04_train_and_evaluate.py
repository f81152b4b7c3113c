#!/usr/bin/env python3
"""Train a small rating predictor on a synthetic corpus and compare it with
the mean predictor and the linear baseline.

Uses a reduced corpus and epoch count so it finishes in about a minute;
the full acceptance-scale run lives in tests/test_acceptance.py.

    python3 demos/04_train_and_evaluate.py
"""
import time

import numpy as np

from vibtact import dataset as ds
from vibtact import vibnet
from vibtact.mechano import PADDED_LEN, mechano_spectrograms
from vibtact.vibnet import TrainHyper, VibNetConfig
from vibtact.waveform import zero_pad

N, SEED, EPOCHS = 60, 11, 8

print(f"generating {N} labelled records (seed {SEED})...")
recs = ds.generate_corpus(N, seed=SEED)
waves = np.stack([zero_pad(w, PADDED_LEN).samples for _, _, w, _ in recs])
specs = np.stack([mechano_spectrograms(zero_pad(w, PADDED_LEN)).data
                  for _, _, w, _ in recs])
targets = np.stack([r.as_array() for _, _, _, r in recs])

fold = ds.kfold_split(N, 5, seed=7)
tr, te = np.where(fold != 0)[0], np.where(fold == 0)[0]
print(f"train/test split: {len(tr)}/{len(te)}")

# reference points first
mean_rmse = ds.mean_predictor_rmse(targets[tr], targets[te]).rmse["average"]
feats = np.stack([ds.baseline_features(w) for _, _, w, _ in recs])
lin, _, _ = ds.linear_baseline(feats[tr], targets[tr], feats[te], targets[te])
print(f"mean predictor held-out RMSE: {mean_rmse:6.2f}")
print(f"linear baseline held-out RMSE: {lin.rmse['average']:6.2f}")

print("\nbuilding per-record augmentation pools (8 variants each)...")
pool_waves, pool_specs = ds.augmentation_pool([recs[i] for i in tr], seed=0)

# dropout off: at this corpus size the dropout noise swamps the signal
model = vibnet.build(VibNetConfig(dropout_p=0.0))
n_params = sum(p.data.size for p in model.parameters())
print(f"training desk-scale model ({n_params} parameters, {EPOCHS} epochs,")
print("one augmentation variant sampled per record per epoch)...")
t0 = time.time()
log = vibnet.train(model, waves[tr], specs[tr], targets[tr],
                   TrainHyper(lr=0.02, batch_size=8, epochs=EPOCHS, seed=0),
                   variant_waves=pool_waves, variant_specs=pool_specs)
for entry in log:
    print(f"  epoch {entry['epoch']:2d}  train mse {entry['mse']:9.1f}")
print(f"({time.time() - t0:.0f} s, incl. final batchnorm recalibration passes)")

preds = model.predict_arrays(waves[te], specs[te])
m = ds.rmse(preds, targets[te])
print(f"\nmodel held-out RMSE: {m.rmse['average']:6.2f} "
      f"(roughness {m.rmse['roughness']:.2f}, valence {m.rmse['valence']:.2f}, "
      f"arousal {m.rmse['arousal']:.2f})")
print("a few epochs on a small corpus will not beat the linear baseline;")
print("the acceptance run trains 30 epochs on 200 records and must.")
