"""Engine-level operation semantics and gradient integrity."""

import numpy as np
import pytest

from gradcheck import finite_diff_check
from oracles import brute_conv2d, shift_map
from xwgrid import nn
from xwgrid.nn import NumericError, ShapeError, Tape, Tensor


def t64(arr, grad=True):
    return Tensor(np.asarray(arr, dtype=np.float64), requires_grad=grad)


class TestConv2d:
    def test_identity_scale(self):
        x = Tensor(np.ones((1, 3, 3), dtype=np.float32))
        k = Tensor(np.full((1, 1, 1, 1), 2.0, dtype=np.float32))
        out = nn.conv2d(x, k, stride=1, pad=0)
        assert out.shape == (1, 3, 3)
        assert np.allclose(out.data, 2.0)

    def test_cnn_stack_arithmetic(self):
        # (k=3,s=3) -> (2,2) -> (2,2) -> (1,1): 156 -> 52 -> 26 -> 13 -> 13
        size = 156
        for k, s in ((3, 3), (2, 2), (2, 2), (1, 1)):
            size = (size - k) // s + 1
        assert size == 13
        x = Tensor(np.zeros((1, 156, 156), dtype=np.float32))
        for k, s in ((3, 3), (2, 2), (2, 2), (1, 1)):
            x = nn.conv2d(x, Tensor(np.zeros((1, 1, k, k), dtype=np.float32)), stride=s)
        assert x.shape == (1, 13, 13)

    def test_onehot_kernel_translates(self):
        rng = np.random.default_rng(1)
        y = rng.random((13, 13)).astype(np.float32)
        for dr, dc in ((0, 0), (1, 0), (0, -2), (-3, 4), (6, 6), (-6, -6)):
            k = np.zeros((1, 1, 13, 13), dtype=np.float32)
            k[0, 0, 6 + dr, 6 + dc] = 1.0
            out = nn.conv2d(Tensor(y[None]), Tensor(k), stride=1, pad=6)
            assert np.array_equal(out.data[0], shift_map(y, dr, dc)), (dr, dc)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for c, h, o, k, s, p in ((2, 8, 3, 3, 1, 1), (3, 9, 2, 3, 3, 0), (1, 6, 1, 2, 2, 0)):
            x = rng.normal(size=(c, h, h))
            ker = rng.normal(size=(o, c, k, k))
            out = nn.conv2d(Tensor(x.astype(np.float64)), Tensor(ker.astype(np.float64)), s, p)
            assert np.allclose(out.data, brute_conv2d(x, ker, s, p), atol=1e-12)

    def test_center_onehot_is_identity(self):
        rng = np.random.default_rng(3)
        for k in (3, 5, 13):
            x = rng.random((1, 13, 13)).astype(np.float32)
            ker = np.zeros((1, 1, k, k), dtype=np.float32)
            ker[0, 0, k // 2, k // 2] = 1.0
            out = nn.conv2d(Tensor(x), Tensor(ker), stride=1, pad=(k - 1) // 2)
            assert np.array_equal(out.data, x)

    def test_shape_errors_name_axes(self):
        x = Tensor(np.zeros((2, 5, 5), dtype=np.float32))
        with pytest.raises(ShapeError, match="C_in"):
            nn.conv2d(x, Tensor(np.zeros((1, 3, 2, 2), dtype=np.float32)))
        with pytest.raises(ShapeError, match="divisible"):
            nn.conv2d(x, Tensor(np.zeros((1, 2, 2, 2), dtype=np.float32)), stride=2)
        with pytest.raises(ShapeError, match="larger"):
            nn.conv2d(x, Tensor(np.zeros((1, 2, 7, 7), dtype=np.float32)))

    def test_gradients(self):
        rng = np.random.default_rng(4)
        x = t64(rng.normal(size=(2, 6, 6)))
        k = t64(rng.normal(size=(3, 2, 3, 3)))
        w = rng.normal(size=(3, 6, 6))

        def loss():
            return nn.tsum(nn.mul(nn.conv2d(x, k, stride=1, pad=1), Tensor(w)))

        finite_diff_check(loss, [x, k])

    def test_gradients_batched_kernels(self):
        rng = np.random.default_rng(5)
        x = t64(rng.normal(size=(2, 1, 7, 7)))
        k = t64(rng.normal(size=(2, 1, 1, 7, 7)))
        w = rng.normal(size=(2, 1, 7, 7))

        def loss():
            return nn.tsum(nn.mul(nn.conv2d(x, k, stride=1, pad=3), Tensor(w)))

        finite_diff_check(loss, [x, k])


class TestSoftmax:
    def test_uniform(self):
        out = nn.softmax(Tensor(np.zeros(4, dtype=np.float32) + 3.0))
        assert np.allclose(out.data, 0.25, atol=1e-7)

    def test_large_values_stable(self):
        out = nn.softmax(Tensor(np.array([1000.0, 0.0], dtype=np.float32)))
        assert np.all(np.isfinite(out.data))
        assert abs(out.data[0] - 1.0) < 1e-6 and out.data[1] < 1e-6

    def test_shift_invariance(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=8).astype(np.float32)
        a = nn.softmax(Tensor(x)).data
        b = nn.softmax(Tensor(x + 7.5)).data
        assert np.allclose(a, b, atol=1e-6)

    def test_sums_to_one_nonnegative(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            x = rng.normal(scale=10, size=rng.integers(2, 30)).astype(np.float32)
            y = nn.softmax(Tensor(x)).data
            assert abs(y.sum() - 1.0) < 1e-6
            assert (y >= 0).all()

    def test_nan_raises(self):
        with pytest.raises(NumericError):
            nn.softmax(Tensor(np.array([1.0, np.nan], dtype=np.float32)))
        with pytest.raises(NumericError):
            nn.log_softmax(Tensor(np.array([np.nan], dtype=np.float32)))

    def test_gradients(self):
        rng = np.random.default_rng(6)
        x = t64(rng.normal(size=(3, 5)))
        w = rng.normal(size=(3, 5))

        def loss():
            return nn.tsum(nn.mul(nn.softmax(x, axis=-1), Tensor(w)))

        finite_diff_check(loss, [x])

        def loss_log():
            return nn.tsum(nn.mul(nn.log_softmax(x, axis=-1), Tensor(w)))

        finite_diff_check(loss_log, [x])


class TestCosine:
    def test_equal_vectors(self):
        v = Tensor(np.array([1.0, 2.0, -3.0], dtype=np.float32))
        assert nn.cosine_sim(v, v).item() == pytest.approx(1.0, abs=1e-6)

    def test_opposite_vectors(self):
        v = np.array([0.5, -1.5, 2.0], dtype=np.float32)
        out = nn.cosine_sim(Tensor(v), Tensor(-v))
        assert out.item() == pytest.approx(-1.0, abs=1e-6)

    def test_zero_norm_returns_zero(self):
        z = Tensor(np.zeros(4, dtype=np.float32), requires_grad=True)
        v = Tensor(np.ones(4, dtype=np.float32))
        with Tape() as tape:
            out = nn.cosine_sim(z, v)
            total = nn.tsum(out)
        assert out.item() == 0.0
        tape.backward(total)
        assert np.all(z.grad == 0)

    def test_range(self):
        rng = np.random.default_rng(7)
        a = Tensor(rng.normal(size=(50, 6)).astype(np.float32))
        b = Tensor(rng.normal(size=(50, 6)).astype(np.float32))
        out = nn.cosine_sim(a, b).data
        assert (out <= 1 + 1e-6).all() and (out >= -1 - 1e-6).all()

    def test_gradients_with_broadcast(self):
        rng = np.random.default_rng(8)
        p = t64(rng.normal(size=(2, 1, 4)))
        c = t64(rng.normal(size=(2, 3, 4)))
        w = rng.normal(size=(2, 3))

        def loss():
            return nn.tsum(nn.mul(nn.cosine_sim(p, c), Tensor(w)))

        finite_diff_check(loss, [p, c])


class TestElementwiseAndShape:
    def test_binary_op_gradients(self):
        rng = np.random.default_rng(9)
        a = t64(rng.normal(size=(3, 4)))
        b = t64(rng.normal(size=(4,)))  # broadcast
        w = rng.normal(size=(3, 4))

        for op in (nn.add, nn.sub, nn.mul):
            def loss(op=op):
                return nn.tsum(nn.mul(op(a, b), Tensor(w)))

            finite_diff_check(loss, [a, b])

    def test_unary_gradients(self):
        rng = np.random.default_rng(10)
        x = t64(rng.normal(size=(2, 5)))
        w = rng.normal(size=(2, 5))
        for op in (nn.relu, nn.tanh, nn.sigmoid):
            def loss(op=op):
                return nn.tsum(nn.mul(op(x), Tensor(w)))

            finite_diff_check(loss, [x])

    def test_matmul_gradients(self):
        rng = np.random.default_rng(11)
        a = t64(rng.normal(size=(3, 4)))
        b = t64(rng.normal(size=(4, 2)))
        w = rng.normal(size=(3, 2))

        def loss():
            return nn.tsum(nn.mul(nn.matmul(a, b), Tensor(w)))

        finite_diff_check(loss, [a, b])

    def test_batched_matmul_gradients(self):
        rng = np.random.default_rng(12)
        a = t64(rng.normal(size=(2, 3, 4)))
        b = t64(rng.normal(size=(4, 2)))
        w = rng.normal(size=(2, 3, 2))

        def loss():
            return nn.tsum(nn.mul(nn.matmul(a, b), Tensor(w)))

        finite_diff_check(loss, [a, b])

    def test_take_rows_and_pick_gradients(self):
        rng = np.random.default_rng(13)
        table = t64(rng.normal(size=(6, 3)))
        ids = np.array([[0, 2, 2], [5, 1, 0]])
        w = rng.normal(size=(2, 3, 3))

        def loss():
            return nn.tsum(nn.mul(nn.take_rows(table, ids), Tensor(w)))

        finite_diff_check(loss, [table])

        x = t64(rng.normal(size=(4, 5)))
        idx = np.array([1, 0, 4, 2])

        def loss2():
            return nn.tsum(nn.pick(x, idx, axis=-1))

        finite_diff_check(loss2, [x])

    def test_concat_slice_transpose_gradients(self):
        rng = np.random.default_rng(14)
        a = t64(rng.normal(size=(2, 3)))
        b = t64(rng.normal(size=(2, 2)))
        w = rng.normal(size=(2, 5))

        def loss():
            return nn.tsum(nn.mul(nn.concat([a, b], axis=1), Tensor(w)))

        finite_diff_check(loss, [a, b])

        x = t64(rng.normal(size=(3, 4, 2)))
        w2 = rng.normal(size=(2, 2, 3))

        def loss2():
            return nn.tsum(
                nn.mul(nn.transpose(nn.slice_axis(x, 1, 1, 3), (2, 1, 0)), Tensor(w2))
            )

        finite_diff_check(loss2, [x])

    def test_tape_visits_each_record_once(self):
        x = t64(np.array([1.0, 2.0]))
        with Tape() as tape:
            y = nn.mul(x, x)
            z = nn.tsum(y)
        n_records = len(tape)
        assert n_records == 2
        tape.backward(z)
        assert len(tape) == 0  # consumed exactly once
        assert np.allclose(x.grad, [2.0, 4.0])

    def test_no_tape_no_recording(self):
        x = t64(np.array([1.0]))
        y = nn.mul(x, x)
        assert y.requires_grad is False
