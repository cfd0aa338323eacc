"""GRU cell, bidirectional RNN, and layer initialization."""

import numpy as np
import pytest

from gradcheck import finite_diff_check
from xwgrid import nn
from xwgrid.nn import GruParams, RngHub, ShapeError, Tensor, bi_rnn, gru_cell, init_layer


def make_gru(h, e, rng, dtype=np.float64, scale=0.5):
    return GruParams(
        wx=Tensor(rng.normal(scale=scale, size=(e, 3 * h)).astype(dtype), requires_grad=True),
        wh=Tensor(rng.normal(scale=scale, size=(h, 3 * h)).astype(dtype), requires_grad=True),
        b=Tensor(rng.normal(scale=scale, size=(3 * h,)).astype(dtype), requires_grad=True),
    )


class TestGruCell:
    def test_zero_everything_gives_zero(self):
        h, e = 4, 3
        p = GruParams(
            wx=Tensor(np.zeros((e, 3 * h), dtype=np.float32)),
            wh=Tensor(np.zeros((h, 3 * h), dtype=np.float32)),
            b=Tensor(np.zeros(3 * h, dtype=np.float32)),
        )
        out = gru_cell(Tensor(np.zeros(h, dtype=np.float32)), Tensor(np.zeros(e, dtype=np.float32)), p)
        assert np.all(out.data == 0)

    def test_output_within_unit_interval(self):
        # mathematically the open interval; float32 may round onto the boundary
        rng = np.random.default_rng(0)
        p32 = make_gru(6, 5, rng, dtype=np.float32, scale=2.0)
        for _ in range(20):
            state = Tensor(rng.uniform(-1, 1, 6).astype(np.float32))
            inp = Tensor(rng.normal(scale=3, size=5).astype(np.float32))
            assert (np.abs(gru_cell(state, inp, p32).data) <= 1).all()
        p64 = make_gru(6, 5, rng, scale=0.5)
        for _ in range(20):
            state = Tensor(rng.uniform(-1, 1, 6))
            inp = Tensor(rng.normal(size=5))
            assert (np.abs(gru_cell(state, inp, p64).data) < 1).all()

    def test_shape_mismatch(self):
        rng = np.random.default_rng(1)
        p = make_gru(4, 3, rng)
        with pytest.raises(ShapeError):
            gru_cell(Tensor(np.zeros(5)), Tensor(np.zeros(3)), p)

    def test_gradients_all_parameters(self):
        rng = np.random.default_rng(2)
        p = make_gru(4, 3, rng)
        state = Tensor(rng.uniform(-0.9, 0.9, 4), requires_grad=True)
        inp = Tensor(rng.normal(size=3), requires_grad=True)

        def loss():
            return nn.tsum(gru_cell(state, inp, p))

        finite_diff_check(loss, [p.wx, p.wh, p.b, state, inp])


class TestBiRnn:
    def test_single_token_context_equals_embedding(self):
        rng = np.random.default_rng(3)
        fw, bw = make_gru(4, 3, rng), make_gru(4, 3, rng)
        x = Tensor(rng.normal(size=(1, 3)))
        s_emb, contexts, avg = bi_rnn(x, fw, bw)
        assert np.allclose(contexts.data[0], s_emb.data)
        assert np.allclose(avg.data, s_emb.data)

    def test_reversal_swaps_directions(self):
        rng = np.random.default_rng(4)
        shared = make_gru(4, 3, rng)
        x = rng.normal(size=(5, 3))
        s1, _, _ = bi_rnn(Tensor(x), shared, shared)
        s2, _, _ = bi_rnn(Tensor(x[::-1].copy()), shared, shared)
        assert np.allclose(s1.data, s2.data, atol=1e-10)

    def test_empty_sequence_rejected(self):
        rng = np.random.default_rng(5)
        fw, bw = make_gru(4, 3, rng), make_gru(4, 3, rng)
        with pytest.raises(ShapeError):
            bi_rnn(Tensor(np.zeros((0, 3))), fw, bw)

    def test_batched_matches_single(self):
        rng = np.random.default_rng(6)
        fw, bw = make_gru(4, 3, rng), make_gru(4, 3, rng)
        batch = rng.normal(size=(3, 5, 3))
        sb, cb, ab = bi_rnn(Tensor(batch), fw, bw)
        for i in range(3):
            s, c, a = bi_rnn(Tensor(batch[i]), fw, bw)
            assert np.allclose(s.data, sb.data[i], atol=1e-12)
            assert np.allclose(c.data, cb.data[i], atol=1e-12)
            assert np.allclose(a.data, ab.data[i], atol=1e-12)

    def test_gradients(self):
        rng = np.random.default_rng(7)
        fw, bw = make_gru(3, 2, rng), make_gru(3, 2, rng)
        x = Tensor(rng.normal(size=(4, 2)), requires_grad=True)
        w = rng.normal(size=(4, 3))

        def loss():
            s_emb, contexts, avg = bi_rnn(x, fw, bw)
            return nn.add(
                nn.tsum(nn.mul(contexts, Tensor(w))),
                nn.add(nn.tsum(s_emb), nn.tsum(avg)),
            )

        finite_diff_check(loss, [fw.wx, fw.wh, fw.b, bw.wx, bw.wh, bw.b, x])


class TestInitLayer:
    def test_std_scales_with_size(self):
        rng = np.random.default_rng(8)
        t = init_layer((100, 100), rng)
        assert t.shape == (100, 100)
        assert abs(t.data.std() - 0.01) < 0.001  # 1/sqrt(10000), within 10%

    def test_deterministic_per_name(self):
        hub = RngHub(42)
        a = init_layer((7, 3), hub.derive("params/x"))
        b = init_layer((7, 3), hub.derive("params/x"))
        c = init_layer((7, 3), hub.derive("params/y"))
        assert np.array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)

    def test_zero_size_rejected(self):
        with pytest.raises(ShapeError):
            init_layer((0, 4), np.random.default_rng(0))

    def test_named_streams_are_independent(self):
        hub = RngHub(1)
        first = hub.stream("env").integers(1000)
        hub.stream("teacher").integers(1000, size=50)  # heavy use of another stream
        hub2 = RngHub(1)
        hub2.stream("teacher").integers(1000, size=3)
        assert first == hub2.stream("env").integers(1000)
