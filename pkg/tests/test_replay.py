"""Prioritized replay: ring semantics, rank law, tie handling."""

import numpy as np
import pytest

from xwgrid.training import Experience, ReplayBuffer


def make_exp(i):
    img = np.full((2, 2, 3), i % 255, dtype=np.uint8)
    return Experience(
        tokens=(i,), image=img, action=i % 4, reward=-0.1,
        next_tokens=(i,), next_image=img, done=False,
    )


class TestRing:
    def test_capacity_evicts_eldest(self):
        buf = ReplayBuffer(capacity=5)
        for i in range(8):
            buf.push(make_exp(i))
        assert len(buf) == 5
        held = sorted(buf[i].tokens[0] for i in range(5))
        assert held == [3, 4, 5, 6, 7]

    def test_never_exceeds_capacity(self):
        buf = ReplayBuffer(capacity=10)
        for i in range(200):
            buf.push(make_exp(i))
            assert len(buf) <= 10

    def test_new_items_get_max_priority(self):
        buf = ReplayBuffer(capacity=10)
        buf.push(make_exp(0))
        buf.update_priorities([0], [5.0])
        buf.push(make_exp(1))
        assert buf._priorities[1] == 5.0


class TestSampling:
    def test_rank_ratio_two_items(self):
        buf = ReplayBuffer(capacity=4)
        buf.push(make_exp(0))
        buf.push(make_exp(1))
        buf.update_priorities([0, 1], [9.0, 1.0])  # ranks 1, 2
        rng = np.random.default_rng(0)
        counts = np.zeros(2)
        for _ in range(20000):
            counts[buf.sample(1, rng)[0]] += 1
        ratio = counts[0] / counts[1]
        assert abs(ratio - 2.0) < 0.1  # 2:1 within 5%

    def test_uniform_when_all_tie(self):
        buf = ReplayBuffer(capacity=8)
        for i in range(8):
            buf.push(make_exp(i))
        probs = buf.probabilities()
        assert np.allclose(probs, 1 / 8)

    def test_probabilities_follow_inverse_rank(self):
        buf = ReplayBuffer(capacity=10)
        for i in range(10):
            buf.push(make_exp(i))
        tds = np.arange(10, 0, -1, dtype=float)  # item 0 has the largest error
        buf.update_priorities(np.arange(10), tds)
        probs = buf.probabilities()
        harmonic = (1.0 / np.arange(1, 11)).sum()
        assert np.allclose(probs, 1.0 / (np.arange(1, 11) * harmonic))

    def test_without_replacement_within_batch(self):
        buf = ReplayBuffer(capacity=32)
        for i in range(32):
            buf.push(make_exp(i))
        rng = np.random.default_rng(1)
        for _ in range(20):
            idx = buf.sample(16, rng)
            assert len(set(idx.tolist())) == 16

    def test_small_buffer_samples_with_replacement(self):
        buf = ReplayBuffer(capacity=100)
        for i in range(3):
            buf.push(make_exp(i))
        rng = np.random.default_rng(2)
        idx = buf.sample(16, rng)
        assert len(idx) == 16
        assert set(idx.tolist()) <= {0, 1, 2}

    def test_empty_buffer_raises(self):
        with pytest.raises(ValueError):
            ReplayBuffer(4).sample(1, np.random.default_rng(0))

    def test_priorities_refresh_after_update(self):
        buf = ReplayBuffer(capacity=4)
        for i in range(4):
            buf.push(make_exp(i))
        buf.update_priorities([0, 1, 2, 3], [0.1, -4.0, 2.0, 0.5])
        probs = buf.probabilities()
        assert probs[1] == probs.max()  # |td| drives the rank
        assert probs[0] == probs.min()
