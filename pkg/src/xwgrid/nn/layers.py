"""Recurrent and feedforward building blocks on top of the tensor engine."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import (
    ShapeError,
    Tensor,
    add,
    concat,
    matmul,
    mul,
    reshape,
    sigmoid,
    slice_axis,
    sub,
    tanh,
    tmean,
)


def init_layer(shape, rng: np.random.Generator, dtype=np.float32) -> Tensor:
    """Normal(0, 1/sqrt(K)) initialization, K = number of entries in the layer."""
    shape = tuple(int(s) for s in shape)
    k = int(np.prod(shape))
    if k <= 0:
        raise ShapeError(f"init_layer needs a non-empty shape, got {shape}")
    std = 1.0 / np.sqrt(k)
    return Tensor(rng.normal(0.0, std, size=shape).astype(dtype), requires_grad=True)


def linear(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    y = matmul(x, w)
    if b is not None:
        y = add(y, b)
    return y


@dataclass
class GruParams:
    """Gate weights for one GRU direction: wx [E,3H], wh [H,3H], b [3H]."""

    wx: Tensor
    wh: Tensor
    b: Tensor

    @property
    def hidden(self) -> int:
        return self.wh.shape[0]


def gru_cell(state: Tensor, inp: Tensor, p: GruParams) -> Tensor:
    """Standard GRU update; accepts [H]/[E] vectors or [B,H]/[B,E] batches."""
    h = p.hidden
    if state.shape[-1] != h or inp.shape[-1] != p.wx.shape[0]:
        raise ShapeError(
            f"gru_cell: state {state.shape} / input {inp.shape} incompatible with "
            f"wx {p.wx.shape}, wh {p.wh.shape}"
        )
    gx = add(matmul(inp, p.wx), p.b)
    gh = matmul(state, p.wh)
    ax = state.data.ndim - 1
    r = sigmoid(add(slice_axis(gx, ax, 0, h), slice_axis(gh, ax, 0, h)))
    z = sigmoid(add(slice_axis(gx, ax, h, 2 * h), slice_axis(gh, ax, h, 2 * h)))
    n = tanh(add(slice_axis(gx, ax, 2 * h, 3 * h), mul(r, slice_axis(gh, ax, 2 * h, 3 * h))))
    return add(mul(sub(1.0, z), n), mul(z, state))


def bi_rnn(embeds: Tensor, fw: GruParams, bw: GruParams):
    """Bidirectional GRU with sum-combined directions.

    embeds: [L,E] or [B,L,E] (one length per batch).  Returns
    (s_emb, contexts, avg_state): contexts[l] = forward_state[l] +
    backward_state[l]; s_emb = forward_final + backward_final; avg_state =
    mean of contexts over positions.
    """
    single = embeds.data.ndim == 2
    x = reshape(embeds, (1,) + embeds.shape) if single else embeds
    b, length, _ = x.shape
    if length < 1:
        raise ShapeError("bi_rnn needs at least one token")
    h = fw.hidden
    steps = [reshape(slice_axis(x, 1, t, t + 1), (b, x.shape[2])) for t in range(length)]
    dtype = embeds.dtype

    state = Tensor(np.zeros((b, h), dtype=dtype))
    fw_states = []
    for t in range(length):
        state = gru_cell(state, steps[t], fw)
        fw_states.append(state)
    state = Tensor(np.zeros((b, h), dtype=dtype))
    bw_states = [None] * length
    for t in reversed(range(length)):
        state = gru_cell(state, steps[t], bw)
        bw_states[t] = state

    contexts = [add(f, bk) for f, bk in zip(fw_states, bw_states)]
    s_emb = add(fw_states[-1], bw_states[0])
    stacked = concat([reshape(c, (b, 1, h)) for c in contexts], axis=1)
    avg_state = tmean(stacked, axis=1)
    if single:
        s_emb = reshape(s_emb, (h,))
        avg_state = reshape(avg_state, (h,))
        stacked = reshape(stacked, (length, h))
    return s_emb, stacked, avg_state
