"""The single experiment configuration: everything the architecture leaves
open (optimizer, learning rate, batch size, windows per epoch, early
stopping, label scaling). Tunable, not contractual.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .model import ModelConfig


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig = ModelConfig()
    optimizer: str = "adam"
    learning_rate: float = 3e-3
    batch_size: int = 8
    windows_per_volume: int = 2   # random temporal crops per volume per epoch
    max_epochs: int = 60
    patience: int = 8             # early stopping on validation loss
    val_stride: int | None = None  # None -> non-overlapping validation windows
    predict_stride: int = 1
    seed: int = 0

    def to_json(self, path: str | Path) -> None:
        doc = asdict(self)
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        model_doc = doc.pop("model", {})
        if "block_layers" in model_doc:
            model_doc["block_layers"] = tuple(model_doc["block_layers"])
        if "input_frame" in model_doc:
            model_doc["input_frame"] = tuple(model_doc["input_frame"])
        return cls(model=ModelConfig(**model_doc), **doc)
