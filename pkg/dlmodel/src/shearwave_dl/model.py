"""Densely connected 3D CNN regressing elasticity from wave-field windows.

Architecture: an initial 3x3x3 convolution, four dense blocks (3x3x3
convolutions, stride 1, feature concatenation) separated by transition
layers (1x1x1 convolution + stride-2 average pooling), and a final fully
connected layer emitting one scalar elasticity in pascals.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn


@dataclass(frozen=True)
class ModelConfig:
    block_layers: tuple[int, int, int, int] = (2, 4, 6, 3)
    growth: int = 6
    input_window: int = 16
    input_frame: tuple[int, int] = (64, 64)
    init_features: int = 8
    compression: float = 0.5
    # (time, height, width) stride of the initial convolution; spatial
    # halving keeps CPU training tractable and the wave patterns resolved
    stem_stride: tuple[int, int, int] = (1, 2, 2)

    def __post_init__(self):
        if len(self.block_layers) != 4 or any(n < 1 for n in self.block_layers):
            raise ValueError("need four dense blocks with at least one layer each")
        if self.growth < 1 or self.init_features < 1:
            raise ValueError("growth and init_features must be >= 1")
        if not 0.0 < self.compression <= 1.0:
            raise ValueError("compression must lie in (0, 1]")
        # three stride-2 transitions separate the four blocks
        reduction = 2 ** 3
        if (self.input_window < reduction * self.stem_stride[0]
                or self.input_frame[0] < reduction * self.stem_stride[1]
                or self.input_frame[1] < reduction * self.stem_stride[2]):
            raise ValueError("input too small for three stride-2 reductions")


class _DenseLayer(nn.Module):
    def __init__(self, in_channels: int, growth: int):
        super().__init__()
        self.norm = nn.BatchNorm3d(in_channels)
        self.conv = nn.Conv3d(in_channels, growth, kernel_size=3, padding=1, bias=False)

    def forward(self, x):
        new = self.conv(torch.relu(self.norm(x)))
        return torch.cat([x, new], dim=1)


class _Transition(nn.Module):
    def __init__(self, in_channels: int, out_channels: int):
        super().__init__()
        self.norm = nn.BatchNorm3d(in_channels)
        self.conv = nn.Conv3d(in_channels, out_channels, kernel_size=1, bias=False)
        self.pool = nn.AvgPool3d(kernel_size=2, stride=2)

    def forward(self, x):
        return self.pool(self.conv(torch.relu(self.norm(x))))


class WaveRegressor(nn.Module):
    """Maps a (batch, window, height, width) wave-field clip to pascals.

    The head works in kPa for optimizer-friendly magnitudes; forward scales
    back to pascals.
    """

    PA_PER_UNIT = 1000.0

    def __init__(self, config: ModelConfig = ModelConfig()):
        super().__init__()
        self.config = config
        channels = config.init_features
        self.stem = nn.Conv3d(1, channels, kernel_size=3, padding=1,
                              stride=config.stem_stride, bias=False)

        stages: list[nn.Module] = []
        for i, n_layers in enumerate(config.block_layers):
            for _ in range(n_layers):
                stages.append(_DenseLayer(channels, config.growth))
                channels += config.growth
            if i < len(config.block_layers) - 1:
                out = max(1, int(channels * config.compression))
                stages.append(_Transition(channels, out))
                channels = out
        self.features = nn.Sequential(*stages)
        self.final_norm = nn.BatchNorm3d(channels)
        self.pool = nn.AdaptiveAvgPool3d(1)
        self.head = nn.Linear(channels, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() == 4:
            x = x.unsqueeze(1)  # add channel axis
        y = self.stem(x)
        y = self.features(y)
        y = torch.relu(self.final_norm(y))
        y = self.pool(y).flatten(1)
        return self.head(y).squeeze(-1) * self.PA_PER_UNIT


def build_model(config: ModelConfig = ModelConfig(), seed: int | None = None) -> WaveRegressor:
    """Construct the regressor, optionally under a fixed init seed."""
    if seed is not None:
        torch.manual_seed(seed)
    return WaveRegressor(config)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
