import numpy as np

import seizure.classes.dataset
import seizure.classes.record
import seizure.config


def blobs(
    n_per_class: int = 20,
    dimension: int = 4,
    separation: float = 3.0,
    seed: int = 0,
    patient: str = "p1",
) -> seizure.classes.dataset.Dataset:
    """
    Two Gaussian clouds of unit variance, class 0 around the origin and
    class 1 around `separation` on every axis; rows alternate between the
    classes.
    """
    rng = np.random.default_rng(seed)
    negatives = rng.standard_normal((n_per_class, dimension))
    positives = rng.standard_normal((n_per_class, dimension)) + separation

    vectors = np.empty((2 * n_per_class, dimension))
    vectors[0::2] = negatives
    vectors[1::2] = positives
    labels = np.tile([0, 1], n_per_class)

    return seizure.classes.dataset.Dataset(
        vectors=vectors,
        labels=labels,
        keys=[(patient, "{}_01".format(patient), i) for i in range(2 * n_per_class)])


def patients(
    names=("p1", "p2", "p3"),
    n_per_class: int = 10,
    dimension: int = 4,
    seed: int = 0,
) -> seizure.classes.dataset.Dataset:
    """
    One `blobs()` dataset per patient, concatenated in the order of `names`.
    """
    return seizure.classes.dataset.Dataset.concatenate([
        blobs(n_per_class=n_per_class, dimension=dimension, seed=seed + index, patient=name)
        for index, name in enumerate(names)
    ])


def sine_record(
    seconds: int = 4,
    channels: int = 2,
    sample_rate: int = 64,
    record_id: str = "p1_01",
) -> seizure.classes.record.Record:
    t = np.arange(seconds * sample_rate) / sample_rate
    rows = [np.sin(2 * np.pi * (c + 1) * 3 * t) * (c + 1) for c in range(channels)]
    return seizure.classes.record.Record(
        channels=rows, sample_rate=sample_rate, record_id=record_id)


def quick_config(**kwargs) -> seizure.config.RunConfig:
    """
    A configuration with small networks and few iterations, so that every
    classifier trains in well under a second on toy data.
    """
    defaults = dict(
        k=3,
        lr_iters=200,
        hidden_layers="6",
        pretrain_epochs=2,
        pretrain_rate=0.01,
        finetune_iters=8,
        finetune_rate=0.5,
        batch_size=5,
        seed=0,
        jobs=1,
    )
    defaults.update(kwargs)
    return seizure.config.RunConfig(**defaults)
