"""Model topology settings: full-scale defaults plus the reduced desk profile."""

from __future__ import annotations

from dataclasses import dataclass

from ..world.types import CANVAS


@dataclass(frozen=True)
class ModelConfig:
    cnn_channels: tuple[int, ...] = (64, 64, 256, 256)
    cnn_kernels: tuple[int, ...] = (3, 2, 2, 1)
    cnn_strides: tuple[int, ...] = (3, 2, 2, 1)
    positional_channels: int = 256
    rnn_hidden: int = 128
    mask_hidden: int = 128
    nav_channels: int = 64
    nav_mlp: int = 512
    action_hidden: int = 512
    n_actions: int = 4
    interp_steps: int = 3
    interpreter_output: str = "gated"  # "gated" -> y^I, "raw" -> x_loc^I

    @property
    def d(self) -> int:
        """Feature-cube channel count: CNN output plus the positional cube."""
        return self.cnn_channels[-1] + self.positional_channels

    @property
    def n(self) -> int:
        return CANVAS * CANVAS

    def validate(self) -> None:
        if self.positional_channels != self.cnn_channels[-1]:
            raise ValueError("positional cube must match the CNN output channel count")
        if self.interpreter_output not in ("gated", "raw"):
            raise ValueError(f"interpreter_output {self.interpreter_output!r}")
        if not (len(self.cnn_channels) == len(self.cnn_kernels) == len(self.cnn_strides)):
            raise ValueError("CNN layer lists must have equal lengths")

    @classmethod
    def desk(cls) -> "ModelConfig":
        """Reduced profile for tests and CPU training; same topology, D=64."""
        return cls(
            cnn_channels=(16, 16, 32, 32),
            positional_channels=32,
            rnn_hidden=64,
            mask_hidden=64,
            nav_channels=16,
            nav_mlp=128,
            action_hidden=128,
        )
