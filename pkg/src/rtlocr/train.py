"""Training orchestration: splits, the update loop, validation, early stop.

One CTC update per line (batch size 1).  The best checkpoint is chosen by
validation script-only accuracy, ties broken by full accuracy.  Everything is
driven by a single seed, so a run is bit-reproducible.
"""

from __future__ import annotations

import copy
import logging
import random
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import net
from .errors import CodecCoverage, InfeasibleTarget, TooFewSamples
from .imaging import LineImage
from .evaluate import evaluate_model
from .script import ScriptFilter, build_codec, encode
from .store import LineSample, OcrModel, save_model

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    hidden_size: int = 100
    # 1e-3 clears the early all-blank plateau within a few thousand updates
    # on 48-px synthetic lines; 1e-4 is still stuck there at 20k updates.
    learning_rate: float = 1e-3
    momentum: float = 0.9
    clip_norm: float = 5.0
    max_updates: int = 10000
    validation_fraction: float = 0.1
    validation_interval: int = 1000
    patience: int = 5
    seed: int = 1
    line_height: int = 48
    # fraction of updates that see a randomly thresholded (bilevel) copy of
    # the line, so the model also reads pre-binarized scans
    binarize_augment: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation fraction must be in (0, 1)")
        if self.hidden_size <= 0:
            raise ValueError("hidden size must be positive")
        if not 0.0 <= self.binarize_augment <= 1.0:
            raise ValueError("binarize augment fraction must be in [0, 1]")


@dataclass
class ValidationPoint:
    updates: int
    full_accuracy: float | None
    script_accuracy: float | None
    mean_train_loss: float


@dataclass
class TrainReport:
    history: list[ValidationPoint] = field(default_factory=list)
    best_checkpoint: str = ""
    best_updates: int = 0
    updates_done: int = 0
    skipped_infeasible: int = 0
    seconds_per_update: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def split(
    dataset: list[LineSample], validation_fraction: float, seed: int
) -> tuple[list[LineSample], list[LineSample]]:
    """Deterministic shuffled split into (train, validation)."""
    if len(dataset) < 10:
        raise TooFewSamples(f"need at least 10 samples, got {len(dataset)}")
    idx = list(range(len(dataset)))
    random.Random(seed).shuffle(idx)
    n_val = max(1, round(len(dataset) * validation_fraction))
    val = sorted(idx[:n_val])
    tr = sorted(idx[n_val:])
    return [dataset[i] for i in tr], [dataset[i] for i in val]


def merge_datasets(datasets: list[list[LineSample]]) -> list[LineSample]:
    """Concatenate datasets; source ids are preserved on each sample."""
    merged: list[LineSample] = []
    for ds in datasets:
        merged.extend(ds)
    return merged


def _binarize_line(image: LineImage, rng: np.random.Generator) -> LineImage:
    """Simulate a coarse bilevel rescan of a grayscale strip.

    Random downscale, hard threshold, nearest-neighbor upsample — the way
    pre-binarized low-resolution scans reach the recognizer in the wild.
    """
    from .imaging import _resize_bilinear

    pixels = image.pixels.astype(np.float64)
    factor = rng.choice((1.0, 1.3, 1.5))
    h, w = pixels.shape
    if factor > 1.0:
        sh = max(int(round(h / factor)), 1)
        sw = max(int(round(w / factor)), 1)
        small = _resize_bilinear(pixels, sh, sw)
        ys = np.minimum((np.arange(h) * sh / h).astype(np.int64), sh - 1)
        xs = np.minimum((np.arange(w) * sw / w).astype(np.int64), sw - 1)
        pixels = small[np.ix_(ys, xs)]
    thr = rng.uniform(0.35, 0.55)
    return LineImage((pixels >= thr).astype(np.float32))


def _validation_key(point: ValidationPoint) -> tuple[float, float]:
    return (
        -1.0 if point.script_accuracy is None else point.script_accuracy,
        -1.0 if point.full_accuracy is None else point.full_accuracy,
    )


def train(
    dataset: list[LineSample],
    cfg: TrainConfig,
    run_dir: str | Path | None = None,
    script_filter: ScriptFilter | None = None,
) -> tuple[OcrModel, TrainReport]:
    """Train a line recognizer; returns the best-by-validation model."""
    codec = build_codec([s.text for s in dataset])
    for s in dataset:
        for ch in s.text:
            if ch not in codec and not ch.isspace():
                raise CodecCoverage(f"sample {s.sample_id!r} has uncovered char {ch!r}")

    train_set, val_set = split(dataset, cfg.validation_fraction, cfg.seed)
    params = net.init_params(cfg.hidden_size, cfg.line_height, len(codec), cfg.seed)
    optimizer = net.Optimizer(cfg.learning_rate, cfg.momentum, cfg.clip_norm)
    meta = {
        "seed": cfg.seed,
        "updates": 0,
        "sources": sorted({s.source_id for s in dataset}),
    }

    def snapshot(updates: int) -> OcrModel:
        return OcrModel(
            cfg.line_height,
            cfg.hidden_size,
            codec,
            {k: v.copy() for k, v in params.items()},
            dict(meta, updates=updates),
        )

    targets = [encode(s.text, codec) for s in train_set]
    report = TrainReport()
    best_model = snapshot(0)
    best_key = (-2.0, -2.0)
    stale = 0
    epoch_rng = random.Random(cfg.seed ^ 0x5EED)
    run_dir = Path(run_dir) if run_dir is not None else None
    if run_dir is not None:
        run_dir.mkdir(parents=True, exist_ok=True)

    aug_rng = np.random.default_rng(cfg.seed ^ 0xB1EB1E)
    updates = 0
    loss_sum = 0.0
    loss_count = 0
    t_start = time.perf_counter()
    stop = cfg.max_updates <= 0
    while not stop:
        order = list(range(len(train_set)))
        epoch_rng.shuffle(order)
        for i in order:
            sample = train_set[i]
            if sample.image.width < len(targets[i]):
                report.skipped_infeasible += 1
                continue
            image = sample.image
            if cfg.binarize_augment > 0 and aug_rng.random() < cfg.binarize_augment:
                image = _binarize_line(image, aug_rng)
            try:
                post, cache = net.forward(params, image, want_cache=True)
                loss, grad = net.ctc_loss(post, targets[i])
            except InfeasibleTarget:
                report.skipped_infeasible += 1
                continue
            net.backward_update(params, cache, grad, optimizer)
            updates += 1
            loss_sum += loss
            loss_count += 1

            if updates % cfg.validation_interval == 0 or updates >= cfg.max_updates:
                point = _validate(params, codec, cfg, val_set, updates, loss_sum, loss_count, script_filter)
                report.history.append(point)
                loss_sum, loss_count = 0.0, 0
                if run_dir is not None:
                    save_model(snapshot(updates), run_dir / f"checkpoint-{updates}.korm")
                if _validation_key(point) > best_key:
                    best_key = _validation_key(point)
                    best_model = snapshot(updates)
                    report.best_updates = updates
                    stale = 0
                else:
                    stale += 1
                log.info(
                    "updates=%d loss=%.4f full=%s script=%s",
                    updates, point.mean_train_loss, point.full_accuracy, point.script_accuracy,
                )
                if stale >= cfg.patience:
                    stop = True
            if updates >= cfg.max_updates:
                stop = True
            if stop:
                break
    elapsed = time.perf_counter() - t_start
    report.updates_done = updates
    report.seconds_per_update = elapsed / updates if updates else 0.0
    if run_dir is not None:
        best_path = run_dir / "best.korm"
        save_model(best_model, best_path)
        report.best_checkpoint = str(best_path)
        import json

        (run_dir / "train_report.jsonl").write_text(
            "\n".join(json.dumps(asdict(p)) for p in report.history) + "\n",
            encoding="utf-8",
        )
    return best_model, report


def _validate(params, codec, cfg, val_set, updates, loss_sum, loss_count, script_filter) -> ValidationPoint:
    model = OcrModel(cfg.line_height, cfg.hidden_size, codec, params, {})
    ev = evaluate_model(model, val_set, script_filter)
    return ValidationPoint(
        updates=updates,
        full_accuracy=ev.full_accuracy,
        script_accuracy=ev.script_accuracy,
        mean_train_loss=loss_sum / max(loss_count, 1),
    )
