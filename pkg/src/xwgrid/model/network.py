"""The explicit-grounding network.

One concept-detection function scores a word embedding against every spatial
feature vector; language grounding (the interpreter's attention map) and
language prediction (answer scoring) both go through it.  The only
sentence-derived quantities that reach the navigation and prediction heads
are the grounding results: the attention map and the channel mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import nn
from ..nn import GruParams, ParamStore, RngHub, Tensor
from ..world.types import CANVAS, IMAGE_PX
from .config import ModelConfig


def detect(h: Tensor, x_feat, u) -> Tensor:
    """Concept detection: score map over locations, chi[n] = sum_d h[n,d]*x_feat[d]*u[d].

    h: [N,D] or [B,N,D]; x_feat and u: [D] or [B,D].
    """
    w = nn.mul(x_feat, u) if not isinstance(x_feat, (int, float)) else u
    if h.data.ndim == 2:
        return nn.matmul(h, w)
    b, _, d = h.shape
    if w.data.ndim == 1:
        w = nn.broadcast_to(nn.reshape(w, (1, d)), (b, d))
    return nn.reshape(nn.matmul(h, nn.reshape(w, (b, d, 1))), (b, h.shape[1]))


@dataclass
class InterpStep:
    word_attention: np.ndarray  # o^i_l over sentence positions
    chi: np.ndarray  # raw detection scores of the attended word
    y_prime: np.ndarray  # softmaxed detection map
    x_loc_i: np.ndarray  # translated map
    rho: np.ndarray  # update gate
    y_i: np.ndarray  # gated accumulated map


@dataclass
class GroundingResult:
    x_loc: Tensor  # [B,N]
    x_feat: Optional[Tensor] = None  # [B,D]
    s_emb: Optional[Tensor] = None
    steps: list[InterpStep] = field(default_factory=list)


class GroundingModel:
    def __init__(
        self,
        cfg: ModelConfig,
        lexicon_size: int,
        hub: Optional[RngHub] = None,
        dtype=np.float32,
    ):
        cfg.validate()
        self.cfg = cfg
        self.lexicon_size = lexicon_size
        self.store = ParamStore(dtype=dtype)
        hub = hub if hub is not None else RngHub(0)
        p = self.store
        d, hdim = cfg.d, cfg.rnn_hidden

        c_in = 3
        for i, (c_out, k, _s) in enumerate(zip(cfg.cnn_channels, cfg.cnn_kernels, cfg.cnn_strides)):
            p.create(f"cnn/{i}/w", (c_out, c_in, k, k), hub)
            p.create(f"cnn/{i}/b", (c_out,), hub)
            c_in = c_out
        p.create("pos_cube", (cfg.positional_channels, CANVAS, CANVAS), hub, zero=True)

        # word embeddings start at unit standard deviation, unlike the layers
        emb = Tensor(
            hub.derive("params/embed").normal(0.0, 1.0, size=(lexicon_size, d)).astype(dtype),
            requires_grad=True,
        )
        p.add("embed", emb)

        for side in ("fw", "bw"):
            p.create(f"rnn/{side}/wx", (d, 3 * hdim), hub)
            p.create(f"rnn/{side}/wh", (hdim, 3 * hdim), hub)
            p.create(f"rnn/{side}/b", (3 * hdim,), hub)
        p.create("interp/gru/wx", (hdim, 3 * hdim), hub)
        p.create("interp/gru/wh", (hdim, 3 * hdim), hub)
        p.create("interp/gru/b", (3 * hdim,), hub)
        p.create("interp/gate/w", (hdim, 1), hub)
        p.create("interp/gate/b", (1,), hub)

        p.create("mask/w1", (hdim, cfg.mask_hidden), hub)
        p.create("mask/b1", (cfg.mask_hidden,), hub)
        p.create("mask/w2", (cfg.mask_hidden, d), hub)
        p.create("mask/b2", (d,), hub)

        p.create("terrain/f", (d,), hub)

        p.create("nav/conv1/w", (cfg.nav_channels, 2, 3, 3), hub)
        p.create("nav/conv1/b", (cfg.nav_channels,), hub)
        p.create("nav/conv2/w", (4, cfg.nav_channels, 3, 3), hub)
        p.create("nav/conv2/b", (4,), hub)
        m = cfg.nav_mlp
        p.create("nav/mlp/w1", (4 * cfg.n, m), hub)
        p.create("nav/mlp/b1", (m,), hub)
        p.create("nav/mlp/w2", (m, m), hub)
        p.create("nav/mlp/b2", (m,), hub)
        p.create("nav/mlp/w3", (m, m), hub)
        p.create("nav/mlp/b3", (m,), hub)
        p.create("act/w1", (m, cfg.action_hidden), hub)
        p.create("act/b1", (cfg.action_hidden,), hub)
        p.create("act/w2", (cfg.action_hidden, cfg.n_actions), hub)
        p.create("act/b2", (cfg.n_actions,), hub)
        p.create("value/w", (m, 1), hub)
        p.create("value/b", (1,), hub)

    # -- pieces ---------------------------------------------------------------

    def _gru(self, prefix: str) -> GruParams:
        p = self.store
        return GruParams(wx=p[f"{prefix}/wx"], wh=p[f"{prefix}/wh"], b=p[f"{prefix}/b"])

    def encode_image(self, images: np.ndarray) -> Tensor:
        """uint8 [B,156,156,3] (or one image) -> feature cube [B,N,D]."""
        arr = np.asarray(images)
        if arr.ndim == 3:
            arr = arr[None]
        if arr.shape[1:] != (IMAGE_PX, IMAGE_PX, 3):
            raise nn.ShapeError(f"expected [B,{IMAGE_PX},{IMAGE_PX},3] images, got {arr.shape}")
        x = Tensor(np.ascontiguousarray(arr.transpose(0, 3, 1, 2), dtype=self.store.dtype) / 255.0)
        cfg = self.cfg
        for i, (c_out, k, s) in enumerate(zip(cfg.cnn_channels, cfg.cnn_kernels, cfg.cnn_strides)):
            w, bias = self.store[f"cnn/{i}/w"], self.store[f"cnn/{i}/b"]
            x = nn.relu(nn.add(nn.conv2d(x, w, stride=s), nn.reshape(bias, (c_out, 1, 1))))
        b = x.shape[0]
        feat = nn.transpose(nn.reshape(x, (b, cfg.cnn_channels[-1], cfg.n)), (0, 2, 1))
        pos = nn.transpose(nn.reshape(self.store["pos_cube"], (cfg.positional_channels, cfg.n)), (1, 0))
        pos = nn.broadcast_to(nn.reshape(pos, (1, cfg.n, cfg.positional_channels)), (b, cfg.n, cfg.positional_channels))
        return nn.concat([feat, pos], axis=2)

    def encode_sentence(self, tokens: np.ndarray):
        """Int tokens [B,L] -> (embeds [B,L,D], s_emb [B,H], contexts, avg_state)."""
        tokens = np.asarray(tokens)
        if tokens.ndim == 1:
            tokens = tokens[None]
        embeds = nn.take_rows(self.store["embed"], tokens)
        s_emb, contexts, avg = nn.bi_rnn(embeds, self._gru("rnn/fw"), self._gru("rnn/bw"))
        return embeds, s_emb, contexts, avg

    def channel_mask_from_avg(self, avg: Tensor) -> Tensor:
        hidden = nn.tanh(nn.linear(avg, self.store["mask/w1"], self.store["mask/b1"]))
        return nn.sigmoid(nn.linear(hidden, self.store["mask/w2"], self.store["mask/b2"]))

    def channel_mask(self, tokens: np.ndarray) -> Tensor:
        _, _, _, avg = self.encode_sentence(tokens)
        return self.channel_mask_from_avg(avg)

    def interpret(self, h: Tensor, tokens: np.ndarray, keep_steps: bool = False) -> GroundingResult:
        """Iterative word-attention grounding producing the attention map."""
        tokens = np.asarray(tokens)
        if tokens.ndim == 1:
            tokens = tokens[None]
        embeds, s_emb, contexts, _ = self.encode_sentence(tokens)
        return self.interpret_encoded(h, embeds, s_emb, contexts, keep_steps=keep_steps)

    def interpret_encoded(
        self, h: Tensor, embeds: Tensor, s_emb: Tensor, contexts: Tensor, keep_steps: bool = False
    ) -> GroundingResult:
        cfg = self.cfg
        b, length, hdim = contexts.shape
        n = cfg.n
        y = Tensor(np.zeros((b, n), dtype=h.dtype))
        y.data[:, n // 2] = 1.0  # identity translation: one-hot at the map center
        p = s_emb
        ones = Tensor(np.ones((cfg.d,), dtype=h.dtype))
        steps: list[InterpStep] = []
        x_loc_i = y
        gru = self._gru("interp/gru")
        for _ in range(cfg.interp_steps):
            cos = nn.cosine_sim(nn.reshape(p, (b, 1, hdim)), contexts)
            o = nn.softmax(cos, axis=-1)
            o3 = nn.reshape(o, (b, length, 1))
            w_bar = nn.tsum(nn.mul(o3, contexts), axis=1)
            s_word = nn.tsum(nn.mul(o3, embeds), axis=1)
            p = nn.gru_cell(p, w_bar, gru)
            chi = detect(h, ones, s_word)
            y_prime = nn.softmax(chi, axis=-1)
            translated = nn.conv2d(
                nn.reshape(y, (b, 1, CANVAS, CANVAS)),
                nn.reshape(y_prime, (b, 1, 1, CANVAS, CANVAS)),
                stride=1,
                pad=CANVAS // 2,
            )
            x_loc_i = nn.reshape(translated, (b, n))
            rho = nn.sigmoid(nn.linear(p, self.store["interp/gate/w"], self.store["interp/gate/b"]))
            y = nn.add(nn.mul(rho, x_loc_i), nn.mul(nn.sub(1.0, rho), y))
            if keep_steps:
                steps.append(
                    InterpStep(
                        word_attention=o.data.copy(),
                        chi=chi.data.copy(),
                        y_prime=y_prime.data.copy(),
                        x_loc_i=x_loc_i.data.copy(),
                        rho=rho.data.copy(),
                        y_i=y.data.copy(),
                    )
                )
        x_loc = y if cfg.interpreter_output == "gated" else x_loc_i
        return GroundingResult(x_loc=x_loc, s_emb=s_emb, steps=steps)

    def terrain_map(self, h: Tensor) -> Tensor:
        """Language-independent per-cell saliency used by navigation."""
        d = self.cfg.d
        t = nn.matmul(h, nn.reshape(self.store["terrain/f"], (d, 1)))
        return nn.sigmoid(nn.reshape(t, h.shape[:-1]))

    def nav_head(self, x_loc: Tensor, x_terr: Tensor):
        """(policy over 4 actions, state value, action logits) from the two maps only."""
        b = x_loc.shape[0]
        maps = nn.concat(
            [nn.reshape(x_loc, (b, 1, CANVAS, CANVAS)), nn.reshape(x_terr, (b, 1, CANVAS, CANVAS))],
            axis=1,
        )
        s = self.store
        z = nn.relu(nn.add(nn.conv2d(maps, s["nav/conv1/w"], stride=1, pad=1),
                           nn.reshape(s["nav/conv1/b"], (self.cfg.nav_channels, 1, 1))))
        z = nn.relu(nn.add(nn.conv2d(z, s["nav/conv2/w"], stride=1, pad=1),
                           nn.reshape(s["nav/conv2/b"], (4, 1, 1))))
        t = nn.reshape(z, (b, 4 * self.cfg.n))
        t = nn.relu(nn.linear(t, s["nav/mlp/w1"], s["nav/mlp/b1"]))
        t = nn.relu(nn.linear(t, s["nav/mlp/w2"], s["nav/mlp/b2"]))
        t = nn.relu(nn.linear(t, s["nav/mlp/w3"], s["nav/mlp/b3"]))
        a = nn.relu(nn.linear(t, s["act/w1"], s["act/b1"]))
        logits = nn.linear(a, s["act/w2"], s["act/b2"])
        policy = nn.softmax(logits, axis=-1)
        value = nn.reshape(nn.linear(t, s["value/w"], s["value/b"]), (b,))
        return policy, value, logits

    def predict_answer(self, h: Tensor, x_loc: Tensor, x_feat: Tensor):
        """Answer scores over the whole lexicon: m[k] = x_loc . phi(h, x_feat, u_k)."""
        b, n, d = h.shape
        weighted = nn.reshape(nn.matmul(nn.reshape(x_loc, (b, 1, n)), h), (b, d))
        masked = nn.mul(weighted, x_feat)
        m = nn.matmul(masked, nn.transpose(self.store["embed"], (1, 0)))
        return m, np.argmax(m.data, axis=-1)

    # -- pipelines --------------------------------------------------------------

    def nav_forward(self, images, tokens, keep_steps: bool = False):
        h = self.encode_image(images)
        grounding = self.interpret(h, tokens, keep_steps=keep_steps)
        x_terr = self.terrain_map(h)
        policy, value, _ = self.nav_head(grounding.x_loc, x_terr)
        return policy, value, grounding

    def qa_forward(self, images, tokens, keep_steps: bool = False):
        h = self.encode_image(images)
        tokens = np.asarray(tokens)
        if tokens.ndim == 1:
            tokens = tokens[None]
        embeds, s_emb, contexts, avg = self.encode_sentence(tokens)
        grounding = self.interpret_encoded(h, embeds, s_emb, contexts, keep_steps=keep_steps)
        grounding.x_feat = self.channel_mask_from_avg(avg)
        m, answers = self.predict_answer(h, grounding.x_loc, grounding.x_feat)
        return m, answers, grounding
