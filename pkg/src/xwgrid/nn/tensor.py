"""Dense-array reverse-mode differentiation engine.

A Tensor wraps a row-major numpy array (float32 by default, float64 for
high-precision test shadows).  Operations record themselves on the active
Tape; Tape.backward replays the records in reverse order exactly once.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np


class ShapeError(ValueError):
    """Operand dimensions do not line up; message names the offending axes."""


class NumericError(ArithmeticError):
    """Non-finite values where finite ones are required."""


class Tensor:
    __slots__ = ("data", "requires_grad", "grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float32)
        self.data = arr
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = g.astype(self.data.dtype, copy=True)
        else:
            self.grad += g

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    # arithmetic sugar; the module-level functions do the real work
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)


class Tape:
    """Ordered record of operations for one forward/backward pass.

    Single-owner: open as a context manager, run the forward computation,
    then call backward exactly once.  Nesting tapes is not supported.
    """

    def __init__(self):
        self._records: list[tuple[Tensor, tuple, Callable]] = []
        self._entered = False

    def __enter__(self) -> "Tape":
        global _ACTIVE_TAPE
        if _ACTIVE_TAPE is not None:
            raise RuntimeError("a Tape is already active; tapes do not nest")
        _ACTIVE_TAPE = self
        self._entered = True
        return self

    def __exit__(self, exc_type, exc, tb):
        global _ACTIVE_TAPE
        _ACTIVE_TAPE = None
        return False

    def record(self, out: Tensor, inputs: tuple, backward: Callable) -> None:
        self._records.append((out, inputs, backward))

    def __len__(self) -> int:
        return len(self._records)

    def backward(self, loss: Tensor, seed: Optional[np.ndarray] = None) -> None:
        """Accumulate d(loss)/d(input) into .grad of every requiring tensor."""
        if seed is None:
            seed = np.ones_like(loss.data)
        loss.accumulate_grad(np.asarray(seed, dtype=loss.dtype))
        for out, inputs, backward in reversed(self._records):
            if out.grad is None:
                continue
            grads = backward(out.grad)
            for t, g in zip(inputs, grads):
                if g is not None and isinstance(t, Tensor) and t.requires_grad:
                    t.accumulate_grad(g)
        self._records.clear()


_ACTIVE_TAPE: Optional[Tape] = None


def _coerce(x, like: Tensor) -> Tensor:
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=like.dtype))


def _record(out: Tensor, inputs: tuple, backward: Callable) -> Tensor:
    tape = _ACTIVE_TAPE
    need = tape is not None and any(
        isinstance(t, Tensor) and t.requires_grad for t in inputs
    )
    if need:
        out.requires_grad = True
        tape.record(out, inputs, backward)
    return out


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum g down to `shape`, undoing numpy broadcasting."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, (gs, s) in enumerate(zip(g.shape, shape)) if s == 1 and gs != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


# ---------------------------------------------------------------------------
# elementwise


def add(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a, dtype=b.dtype))
    b = _coerce(b, a)
    out = Tensor(a.data + b.data)
    return _record(
        out,
        (a, b),
        lambda g: (_unbroadcast(g, a.data.shape), _unbroadcast(g, b.data.shape)),
    )


def sub(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a, dtype=b.dtype))
    b = _coerce(b, a)
    out = Tensor(a.data - b.data)
    return _record(
        out,
        (a, b),
        lambda g: (_unbroadcast(g, a.data.shape), -_unbroadcast(g, b.data.shape)),
    )


def mul(a, b) -> Tensor:
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a, dtype=b.dtype))
    b = _coerce(b, a)
    out = Tensor(a.data * b.data)
    return _record(
        out,
        (a, b),
        lambda g: (
            _unbroadcast(g * b.data, a.data.shape),
            _unbroadcast(g * a.data, b.data.shape),
        ),
    )


def relu(x: Tensor) -> Tensor:
    out = Tensor(np.maximum(x.data, 0))
    return _record(out, (x,), lambda g: (g * (x.data > 0),))


def tanh(x: Tensor) -> Tensor:
    y = np.tanh(x.data)
    out = Tensor(y)
    return _record(out, (x,), lambda g: (g * (1.0 - y * y),))


def sigmoid(x: Tensor) -> Tensor:
    xd = x.data
    y = np.empty_like(xd)
    pos = xd >= 0
    y[pos] = 1.0 / (1.0 + np.exp(-xd[pos]))
    ex = np.exp(xd[~pos])
    y[~pos] = ex / (1.0 + ex)
    out = Tensor(y)
    return _record(out, (x,), lambda g: (g * y * (1.0 - y),))


# ---------------------------------------------------------------------------
# reductions and shape


def tsum(x: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    out = Tensor(x.data.sum(axis=axis, keepdims=keepdims))

    def backward(g):
        if axis is None:
            return (np.broadcast_to(g, x.data.shape).astype(x.dtype),)
        gg = g
        if not keepdims:
            gg = np.expand_dims(g, axis)
        return (np.broadcast_to(gg, x.data.shape).astype(x.dtype),)

    return _record(out, (x,), backward)


def tmean(x: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    n = x.data.size if axis is None else x.data.shape[axis]
    return mul(tsum(x, axis=axis, keepdims=keepdims), 1.0 / n)


def reshape(x: Tensor, shape) -> Tensor:
    out = Tensor(x.data.reshape(shape))
    return _record(out, (x,), lambda g: (g.reshape(x.data.shape),))


def transpose(x: Tensor, axes) -> Tensor:
    out = Tensor(np.ascontiguousarray(x.data.transpose(axes)))
    inv = np.argsort(axes)
    return _record(out, (x,), lambda g: (g.transpose(inv),))


def concat(parts: Sequence[Tensor], axis: int = 0) -> Tensor:
    out = Tensor(np.concatenate([p.data for p in parts], axis=axis))
    sizes = [p.data.shape[axis] for p in parts]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        return tuple(np.split(g, splits, axis=axis))

    return _record(out, tuple(parts), backward)


def broadcast_to(x: Tensor, shape) -> Tensor:
    out = Tensor(np.broadcast_to(x.data, shape).copy())
    return _record(out, (x,), lambda g: (_unbroadcast(g, x.data.shape),))


def slice_axis(x: Tensor, axis: int, start: int, stop: int) -> Tensor:
    idx = [slice(None)] * x.data.ndim
    idx[axis] = slice(start, stop)
    idx = tuple(idx)
    out = Tensor(np.ascontiguousarray(x.data[idx]))

    def backward(g):
        full = np.zeros_like(x.data)
        full[idx] = g
        return (full,)

    return _record(out, (x,), backward)


# ---------------------------------------------------------------------------
# linear algebra


def matmul(a: Tensor, b: Tensor) -> Tensor:
    try:
        out_data = np.matmul(a.data, b.data)
    except ValueError as e:
        raise ShapeError(f"matmul shapes {a.data.shape} x {b.data.shape}: {e}") from None
    out = Tensor(out_data)

    def backward(g):
        ad, bd = a.data, b.data
        ga = gb = None
        if a.requires_grad:
            if bd.ndim == 1:
                ga = np.multiply.outer(g, bd) if ad.ndim > 1 else g * bd
            elif ad.ndim == 1:
                ga = np.matmul(g, np.swapaxes(bd, -1, -2))
                ga = _unbroadcast(ga, ad.shape)
            else:
                ga = _unbroadcast(np.matmul(g, np.swapaxes(bd, -1, -2)), ad.shape)
        if b.requires_grad:
            if ad.ndim == 1:
                gb = np.multiply.outer(ad, g) if bd.ndim > 1 else ad * g
            elif bd.ndim == 1:
                gb = _unbroadcast(
                    np.matmul(np.swapaxes(ad, -1, -2), g[..., None]).squeeze(-1), bd.shape
                )
            else:
                gb = _unbroadcast(np.matmul(np.swapaxes(ad, -1, -2), g), bd.shape)
        return (ga, gb)

    return _record(out, (a, b), backward)


def take_rows(table: Tensor, ids) -> Tensor:
    """Embedding lookup: rows of `table` selected by an int array."""
    ids = np.asarray(ids)
    out = Tensor(table.data[ids])

    def backward(g):
        gt = np.zeros_like(table.data)
        np.add.at(gt, ids, g)
        return (gt,)

    return _record(out, (table,), backward)


def pick(x: Tensor, index, axis: int = -1) -> Tensor:
    """Gather one element per row along `axis` (e.g. the answer logit)."""
    idx = np.asarray(index)
    taken = np.take_along_axis(x.data, np.expand_dims(idx, axis), axis=axis)
    out = Tensor(taken)

    def backward(g):
        full = np.zeros_like(x.data)
        np.put_along_axis(full, np.expand_dims(idx, axis), g, axis=axis)
        return (full,)

    return _record(out, (x,), backward)


# ---------------------------------------------------------------------------
# softmax family


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    if np.isnan(x.data).any():
        raise NumericError("softmax input contains NaN")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(y)

    def backward(g):
        dot = (g * y).sum(axis=axis, keepdims=True)
        return ((g - dot) * y,)

    return _record(out, (x,), backward)


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    if np.isnan(x.data).any():
        raise NumericError("log_softmax input contains NaN")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    y = shifted - lse
    out = Tensor(y)

    def backward(g):
        return (g - np.exp(y) * g.sum(axis=axis, keepdims=True),)

    return _record(out, (x,), backward)


def cosine_sim(a: Tensor, b: Tensor, axis: int = -1, eps: float = 1e-8) -> Tensor:
    """Cosine similarity along `axis` with broadcasting.

    Either operand with norm < eps yields similarity 0 with zero gradient.
    """
    ad, bd = np.broadcast_arrays(a.data, b.data)
    na = np.sqrt((ad * ad).sum(axis=axis, keepdims=True))
    nb = np.sqrt((bd * bd).sum(axis=axis, keepdims=True))
    ok = (na >= eps) & (nb >= eps)
    denom = np.where(ok, na * nb, 1.0)
    dot = (ad * bd).sum(axis=axis, keepdims=True)
    cos = np.where(ok, dot / denom, 0.0)
    out = Tensor(cos.squeeze(axis))

    def backward(g):
        gk = np.expand_dims(g, axis)
        ga = gb = None
        if a.requires_grad:
            full = np.where(ok, gk * (bd / denom - cos * ad / np.where(ok, na * na, 1.0)), 0.0)
            ga = _unbroadcast(full.astype(a.dtype), a.data.shape)
        if b.requires_grad:
            full = np.where(ok, gk * (ad / denom - cos * bd / np.where(ok, nb * nb, 1.0)), 0.0)
            gb = _unbroadcast(full.astype(b.dtype), b.data.shape)
        return (ga, gb)

    return _record(out, (a, b), backward)


# ---------------------------------------------------------------------------
# convolution

_COL_INDEX_CACHE: dict = {}


def _col_indices(h: int, w: int, kh: int, kw: int, stride: int, pad: int):
    key = (h, w, kh, kw, stride, pad)
    hit = _COL_INDEX_CACHE.get(key)
    if hit is not None:
        return hit
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (w + 2 * pad - kw) // stride + 1
    i0 = np.repeat(np.arange(oh) * stride, ow)
    j0 = np.tile(np.arange(ow) * stride, oh)
    u = np.repeat(np.arange(kh), kw)
    v = np.tile(np.arange(kw), kh)
    rows = i0[:, None] + u[None, :]  # [N, kh*kw] on the padded image
    cols = j0[:, None] + v[None, :]
    _COL_INDEX_CACHE[key] = (oh, ow, rows, cols)
    return oh, ow, rows, cols


def conv2d(x: Tensor, kernels: Tensor, stride: int = 1, pad: int = 0) -> Tensor:
    """True 2D convolution (kernel flip + cross-correlation).

    x: [C,H,W] or [B,C,H,W]; kernels: [O,C,kh,kw] shared across the batch or
    [B,O,C,kh,kw] per-sample.  Output spatial size must divide exactly:
    (H + 2*pad - kh) % stride == 0.
    """
    squeeze = x.data.ndim == 3
    xd = x.data[None] if squeeze else x.data
    if xd.ndim != 4:
        raise ShapeError(f"conv2d input must be 3- or 4-dimensional, got {x.data.shape}")
    per_sample = kernels.data.ndim == 5
    kd = kernels.data if per_sample else kernels.data[None]
    if kd.ndim != 5:
        raise ShapeError(f"conv2d kernels must be 4- or 5-dimensional, got {kernels.data.shape}")
    B, C, H, W = xd.shape
    KB, O, KC, kh, kw = kd.shape
    if KC != C:
        raise ShapeError(f"conv2d channel mismatch: input C={C}, kernel C_in={KC}")
    if per_sample and KB != B:
        raise ShapeError(f"conv2d batch mismatch: input B={B}, kernel B={KB}")
    if H + 2 * pad < kh or W + 2 * pad < kw:
        raise ShapeError(f"kernel {kh}x{kw} larger than padded input {H + 2 * pad}x{W + 2 * pad}")
    if (H + 2 * pad - kh) % stride or (W + 2 * pad - kw) % stride:
        raise ShapeError(
            f"conv2d geometry not exact: (H+2p-k)={H + 2 * pad - kh},{W + 2 * pad - kw} "
            f"not divisible by stride {stride}"
        )
    if stride < 1:
        raise ShapeError(f"stride must be >= 1, got {stride}")

    oh, ow, rows, cols = _col_indices(H, W, kh, kw, stride, pad)
    n = oh * ow
    kk = kh * kw
    if pad:
        xp = np.zeros((B, C, H + 2 * pad, W + 2 * pad), dtype=xd.dtype)
        xp[:, :, pad : pad + H, pad : pad + W] = xd
    else:
        xp = xd
    patches = xp[:, :, rows, cols]  # [B, C, N, kk]
    col = np.ascontiguousarray(patches.transpose(0, 2, 1, 3)).reshape(B, n, C * kk)
    kflip = np.ascontiguousarray(kd[:, :, :, ::-1, ::-1]).reshape(KB, O, C * kk)
    if per_sample:
        out_d = np.einsum("bnk,bok->bon", col, kflip, optimize=True)
    else:
        out_d = np.matmul(col, kflip[0].T).transpose(0, 2, 1)
    out_d = np.ascontiguousarray(out_d).reshape(B, O, oh, ow)
    out = Tensor(out_d[0] if squeeze else out_d)

    def backward(g):
        gd = g[None] if squeeze else g
        gd = gd.reshape(B, O, n)
        gx = gk = None
        if kernels.requires_grad:
            if per_sample:
                gkf = np.einsum("bon,bnk->bok", gd, col, optimize=True)
            else:
                gkf = np.tensordot(gd, col, axes=([0, 2], [0, 1]))[None]
            gkf = gkf.reshape(KB, O, C, kh, kw)[:, :, :, ::-1, ::-1]
            gk = np.ascontiguousarray(gkf if per_sample else gkf[0])
        if x.requires_grad:
            hp, wp = H + 2 * pad, W + 2 * pad
            if stride == 1 and kh == kw:
                # d(out)/d(in) is itself a convolution: correlate the padded
                # output gradient with the unflipped kernel, one gather+einsum
                gmap = gd.reshape(B, O, oh, ow)
                gpad = np.zeros((B, O, oh + 2 * (kh - 1), ow + 2 * (kw - 1)), dtype=xd.dtype)
                gpad[:, :, kh - 1 : kh - 1 + oh, kw - 1 : kw - 1 + ow] = gmap
                _, _, grows, gcols_idx = _col_indices(oh, ow, kh, kw, 1, kh - 1)
                colg = gpad[:, :, grows, gcols_idx]  # [B, O, hp*wp, kk]
                kor = kd.reshape(KB, O, C, kk)
                if per_sample:
                    gxp = np.einsum("bomk,bock->bcm", colg, kor, optimize=True)
                else:
                    gxp = np.einsum("bomk,ock->bcm", colg, kor[0], optimize=True)
                gxp = gxp.reshape(B, C, hp, wp)
            else:
                if per_sample:
                    gcol = np.einsum("bon,bok->bnk", gd, kflip, optimize=True)
                else:
                    gcol = np.matmul(gd.transpose(0, 2, 1), kflip[0])
                gcol = gcol.reshape(B, n, C, kk).transpose(0, 2, 1, 3)
                gxp = np.zeros((B, C, hp, wp), dtype=xd.dtype)
                piece = gcol.reshape(B, C, oh, ow, kk)
                for idx in range(kk):
                    u, v = divmod(idx, kw)
                    gxp[:, :, u : u + stride * (oh - 1) + 1 : stride,
                        v : v + stride * (ow - 1) + 1 : stride] += piece[:, :, :, :, idx]
            gx = gxp[:, :, pad : pad + H, pad : pad + W] if pad else gxp
            if squeeze:
                gx = gx[0]
        return (gx, gk)

    return _record(out, (x, kernels), backward)
