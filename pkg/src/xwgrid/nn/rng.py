"""Named RNG streams derived from a single root seed.

Subsystems (env, params, exploration, teacher, ...) each draw from their own
stream so they stay independently reproducible: reordering calls in one
subsystem never perturbs another.
"""

from __future__ import annotations

import zlib

import numpy as np


class RngHub:
    def __init__(self, root_seed: int):
        self.root_seed = int(root_seed)
        self._streams: dict[str, np.random.Generator] = {}

    def _seed_seq(self, name: str) -> np.random.SeedSequence:
        return np.random.SeedSequence([self.root_seed, zlib.crc32(name.encode("utf-8"))])

    def stream(self, name: str) -> np.random.Generator:
        """Persistent stream: repeated calls return the same advancing generator."""
        gen = self._streams.get(name)
        if gen is None:
            gen = np.random.default_rng(self._seed_seq(name))
            self._streams[name] = gen
        return gen

    def derive(self, name: str) -> np.random.Generator:
        """Fresh generator at a fixed point: same name always restarts the sequence."""
        return np.random.default_rng(self._seed_seq(name))
