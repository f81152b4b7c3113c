"""Vibrotactile icon toolkit: synthesis, augmentation, mechanoreceptive
spectrograms, and a dual-stream roughness/valence/arousal predictor."""

from .waveform import (
    DEFAULT_DEVICE_GAIN_G,
    Waveform,
    WaveformError,
    downsample,
    load_waveform,
    save_waveform,
    zero_pad,
)
from .tacton import (
    ComplexSpec,
    RhythmicSpec,
    SinusoidalSpec,
    SpecValidationError,
    TactonSpec,
    spec_from_dict,
    spec_to_dict,
    synthesize,
    validate,
)
from .augment import (
    AugmentConfig,
    AugmentMethod,
    BoundViolationError,
    augment_dataset,
    augment_record,
    change_amplitude,
    change_speed,
    inject_noise,
)
from .mechano import (
    MechanoChannel,
    SpectrogramStack,
    channel_filter,
    mechano_spectrograms,
    stft,
)
from .vibnet import (
    RatingTriple,
    TrainHyper,
    VibNet,
    VibNetConfig,
    build,
    load,
    save,
    train,
)
from .dataset import (
    DatasetRecord,
    Metrics,
    generate_corpus,
    kfold_split,
    linear_baseline,
    rmse,
    synthetic_oracle,
    within_sd,
)

__version__ = "0.1.0"
