"""Parameter registry and the adagrad update."""

from __future__ import annotations

import hashlib

import numpy as np

from .layers import init_layer
from .rng import RngHub
from .tensor import Tensor

ADAGRAD_EPS = 1e-8


class MissingGradient(RuntimeError):
    def __init__(self, name: str):
        super().__init__(f"parameter '{name}' has no gradient; populate or zero it before stepping")
        self.name = name


class ParamStore:
    """Ordered map name -> (parameter tensor, adagrad accumulator).

    Accumulators share the parameter's shape and stay non-negative.  The store
    is single-owner during a training step.
    """

    def __init__(self, dtype=np.float32):
        self.dtype = np.dtype(dtype)
        self._params: dict[str, Tensor] = {}
        self._accums: dict[str, np.ndarray] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __len__(self) -> int:
        return len(self._params)

    def names(self):
        return list(self._params.keys())

    def items(self):
        return self._params.items()

    def add(self, name: str, tensor: Tensor) -> Tensor:
        if name in self._params:
            raise ValueError(f"duplicate parameter name '{name}'")
        tensor.requires_grad = True
        if tensor.data.dtype != self.dtype:
            tensor.data = tensor.data.astype(self.dtype)
        self._params[name] = tensor
        self._accums[name] = np.zeros_like(tensor.data)
        return tensor

    def create(self, name: str, shape, hub: RngHub, zero: bool = False) -> Tensor:
        """Register a parameter initialized from the named 'params/<name>' stream."""
        if zero:
            t = Tensor(np.zeros(shape, dtype=self.dtype), requires_grad=True)
        else:
            t = init_layer(shape, hub.derive(f"params/{name}"), dtype=self.dtype)
        return self.add(name, t)

    def accumulator(self, name: str) -> np.ndarray:
        return self._accums[name]

    def zero_grads(self) -> None:
        for p in self._params.values():
            p.grad = None

    def fill_missing_grads(self) -> None:
        """Give zero gradients to parameters untouched by this step's graphs."""
        for p in self._params.values():
            if p.grad is None:
                p.grad = np.zeros_like(p.data)

    def adagrad_step(self, lr: float, weight_decay: float = 0.0) -> None:
        for name, p in self._params.items():
            if p.grad is None:
                raise MissingGradient(name)
            g = p.grad
            if weight_decay:
                g = g + weight_decay * p.data
            acc = self._accums[name]
            acc += g * g
            p.data -= lr * g / (np.sqrt(acc) + ADAGRAD_EPS)
            p.grad = None

    def snapshot(self) -> dict[str, np.ndarray]:
        """Frozen copy of parameter values (target-network weights)."""
        return {name: p.data.copy() for name, p in self._params.items()}

    def load_values(self, values: dict[str, np.ndarray]) -> None:
        mismatches = []
        for name, p in self._params.items():
            v = values.get(name)
            if v is None:
                mismatches.append(f"missing '{name}'")
            elif tuple(v.shape) != tuple(p.data.shape):
                mismatches.append(f"'{name}' shape {v.shape} != {p.data.shape}")
        extra = set(values) - set(self._params)
        mismatches += [f"unexpected '{n}'" for n in sorted(extra)]
        if mismatches:
            raise ValueError("parameter set mismatch: " + "; ".join(mismatches))
        for name, p in self._params.items():
            p.data[...] = values[name].astype(self.dtype)

    def state_hash(self) -> str:
        """Digest over names, parameter bytes and accumulator bytes."""
        digest = hashlib.sha256()
        for name, p in self._params.items():
            digest.update(name.encode())
            digest.update(p.data.tobytes())
            digest.update(self._accums[name].tobytes())
        return digest.hexdigest()
