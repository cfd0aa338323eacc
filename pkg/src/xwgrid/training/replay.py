"""Ring-buffer experience replay with rank-based prioritization.

Priorities are |TD error|, stale-initialized to the current maximum so every
new transition is sampled soon after insertion.  Sampling probability of the
item ranked r-th by priority is proportional to 1/r; full ties fall back to
uniform sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Experience:
    tokens: tuple[int, ...]
    image: np.ndarray  # uint8 egocentric frame
    action: int
    reward: float
    next_tokens: tuple[int, ...]
    next_image: np.ndarray
    done: bool


class ReplayBuffer:
    def __init__(self, capacity: int = 10_000):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: list[Experience] = []
        self._priorities = np.zeros(capacity, dtype=np.float64)
        self._pos = 0

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, idx: int) -> Experience:
        return self._items[idx]

    def push(self, exp: Experience) -> None:
        prio = self._priorities[: len(self._items)].max() if self._items else 1.0
        if len(self._items) < self.capacity:
            self._items.append(exp)
            self._priorities[len(self._items) - 1] = prio
        else:
            self._items[self._pos] = exp  # eldest evicted first
            self._priorities[self._pos] = prio
            self._pos = (self._pos + 1) % self.capacity

    def probabilities(self) -> np.ndarray:
        n = len(self._items)
        prios = self._priorities[:n]
        if np.all(prios == prios[0]):
            return np.full(n, 1.0 / n)
        ranks = np.empty(n, dtype=np.int64)
        ranks[np.argsort(-prios, kind="stable")] = np.arange(1, n + 1)
        weights = 1.0 / ranks
        return weights / weights.sum()

    def sample(self, batch: int, rng: np.random.Generator) -> np.ndarray:
        """Indices of `batch` items; without replacement unless the buffer is smaller."""
        if not self._items:
            raise ValueError("cannot sample from an empty buffer")
        n = len(self._items)
        probs = self.probabilities()
        replace = n < batch
        return rng.choice(n, size=batch, replace=replace, p=probs)

    def update_priorities(self, indices, td_errors) -> None:
        self._priorities[np.asarray(indices)] = np.abs(np.asarray(td_errors, dtype=np.float64))
