from .layers import GruParams, bi_rnn, gru_cell, init_layer, linear
from .optim import ADAGRAD_EPS, MissingGradient, ParamStore
from .rng import RngHub
from .serialize import CheckpointError, load_into, read_checkpoint, save_checkpoint
from .tensor import (
    NumericError,
    ShapeError,
    Tape,
    Tensor,
    add,
    broadcast_to,
    concat,
    conv2d,
    cosine_sim,
    log_softmax,
    matmul,
    mul,
    pick,
    relu,
    reshape,
    sigmoid,
    slice_axis,
    softmax,
    sub,
    take_rows,
    tanh,
    tmean,
    transpose,
    tsum,
)

__all__ = [
    "ADAGRAD_EPS",
    "CheckpointError",
    "GruParams",
    "MissingGradient",
    "NumericError",
    "ParamStore",
    "RngHub",
    "ShapeError",
    "Tape",
    "Tensor",
    "add",
    "bi_rnn",
    "broadcast_to",
    "concat",
    "conv2d",
    "cosine_sim",
    "gru_cell",
    "init_layer",
    "linear",
    "load_into",
    "log_softmax",
    "matmul",
    "mul",
    "pick",
    "read_checkpoint",
    "relu",
    "reshape",
    "save_checkpoint",
    "sigmoid",
    "slice_axis",
    "softmax",
    "sub",
    "take_rows",
    "tanh",
    "tmean",
    "transpose",
    "tsum",
]
