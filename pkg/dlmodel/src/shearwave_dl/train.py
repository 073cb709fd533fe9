"""Training loop with random temporal crops, early stopping, and
moving-window inference."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from .config import ExperimentConfig
from .data import VolumeSample, cut_window, random_window, window_start_count
from .model import WaveRegressor


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    val_loss: float


@dataclass
class TrainResult:
    model: WaveRegressor
    history: list[EpochStats] = field(default_factory=list)
    best_epoch: int = -1
    best_val_loss: float = math.inf


def _loss_kpa(pred_pa: torch.Tensor, target_pa: torch.Tensor) -> torch.Tensor:
    # MSE in kPa^2 keeps magnitudes optimizer friendly
    return torch.mean(((pred_pa - target_pa) / 1000.0) ** 2)


def _validation_windows(samples: list[VolumeSample], window: int,
                        stride: int | None) -> list[tuple[VolumeSample, int]]:
    step = stride if stride is not None else window
    pairs = []
    for s in samples:
        last = window_start_count(s.frames, window) - 1
        starts = list(range(0, last + 1, step))
        if starts[-1] != last:
            starts.append(last)
        pairs.extend((s, start) for start in starts)
    return pairs


def _evaluate_loss(model: WaveRegressor, pairs, batch_size: int) -> float:
    model.eval()
    losses, counts = [], []
    with torch.no_grad():
        for i in range(0, len(pairs), batch_size):
            chunk = pairs[i:i + batch_size]
            x = torch.stack([cut_window(s, start, model.config.input_window)
                             for s, start in chunk])
            y = torch.tensor([s.label_pa for s, _ in chunk], dtype=torch.float32)
            losses.append(float(_loss_kpa(model(x), y)) * len(chunk))
            counts.append(len(chunk))
    return sum(losses) / sum(counts)


def train(model: WaveRegressor, train_samples: list[VolumeSample],
          val_samples: list[VolumeSample],
          config: ExperimentConfig = ExperimentConfig()) -> TrainResult:
    """Fit with per-epoch random 16-frame crops and early stopping.

    Deterministic for a fixed config seed. The best-validation weights are
    restored before returning.
    """
    if not train_samples or not val_samples:
        raise ValueError("empty training or validation set")
    window = config.model.input_window
    for s in train_samples + val_samples:
        window_start_count(s.frames, window)  # raises if too short

    if config.optimizer != "adam":
        raise ValueError(f"unsupported optimizer {config.optimizer!r}")
    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    # start the head at the mean training label so early epochs fit
    # deviations, not the offset
    mean_label = float(np.mean([s.label_pa for s in train_samples]))
    with torch.no_grad():
        model.head.bias.fill_(mean_label / model.PA_PER_UNIT)

    val_pairs = _validation_windows(val_samples, window, config.val_stride)
    result = TrainResult(model=model)
    best_state = None
    since_best = 0

    for epoch in range(config.max_epochs):
        model.train()
        entries = [(s, random_window(s, window, rng)) for s in train_samples
                   for _ in range(config.windows_per_volume)]
        order = rng.permutation(len(entries))
        epoch_loss, seen = 0.0, 0
        for i in range(0, len(order), config.batch_size):
            idx = order[i:i + config.batch_size]
            x = torch.stack([entries[j][1] for j in idx])
            y = torch.tensor([entries[j][0].label_pa for j in idx], dtype=torch.float32)
            optimizer.zero_grad()
            loss = _loss_kpa(model(x), y)
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach()) * len(idx)
            seen += len(idx)

        val_loss = _evaluate_loss(model, val_pairs, config.batch_size)
        result.history.append(EpochStats(epoch, epoch_loss / seen, val_loss))

        if val_loss < result.best_val_loss:
            result.best_val_loss = val_loss
            result.best_epoch = epoch
            best_state = copy.deepcopy(model.state_dict())
            since_best = 0
        else:
            since_best += 1
            if since_best > config.patience:
                break

    if best_state is not None:
        model.load_state_dict(best_state)
    return result


def predict_volume(model: WaveRegressor, sample: VolumeSample, stride: int = 1) -> float:
    """Mean prediction over a moving temporal window, in pascals.

    Windows are evaluated one at a time, so the result is exactly the
    arithmetic mean of the per-window outputs.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    window = model.config.input_window
    last = window_start_count(sample.frames, window) - 1
    starts = list(range(0, last + 1, stride))
    model.eval()
    outputs = []
    with torch.no_grad():
        for start in starts:
            x = cut_window(sample, start, window).unsqueeze(0)
            outputs.append(float(model(x)))
    return float(np.mean(outputs))
