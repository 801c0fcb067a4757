"""Masked tabular encoder.

Every feature slot owns a learnable embedding row; a token is the linear
projection of [value, embedding], with a learnable scalar standing in for
the value at masked positions. A pre-norm self-attention encoder maps the 69
tokens to a 69 x d context (d = embedding width), which is ALSO the prompt
fed to the generator's cross-attention. During pretraining a smaller decoder
reads the context, with masked positions replaced by fresh mask-token
constructions, and regresses the masked feature values.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from .. import rng
from ..nn import CrossAttention, LayerNorm, Linear, Module, Tensor, ops
from ..radiomics import N_FEATURES


@dataclass
class TabularEncoderConfig:
    embed_dim: int = 32
    encoder_layers: int = 6
    decoder_layers: int = 3
    heads: int = 4
    model_dim: int = 64
    ff_dim: int = 128
    mask_rate_start: float = 0.30
    mask_rate_final: float = 0.90
    curriculum_fraction: float = 0.50
    epochs: int = 40
    batch_size: int = 64
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.mask_rate_start <= 0.95 and 0.0 <= self.mask_rate_final <= 0.95):
            raise ValueError("mask rates must lie in [0, 0.95]")
        if min(self.embed_dim, self.encoder_layers, self.decoder_layers) < 1:
            raise ValueError("dims and layer counts must be >= 1")

    def to_dict(self):
        return asdict(self)


class TransformerBlock(Module):
    def __init__(self, dim, heads, ff_dim, gen):
        super().__init__()
        self.ln1 = self.child("ln1", LayerNorm(dim))
        self.attn = self.child("attn", CrossAttention(dim, dim, heads, gen))
        self.ln2 = self.child("ln2", LayerNorm(dim))
        self.ff1 = self.child("ff1", Linear(dim, ff_dim, gen))
        self.ff2 = self.child("ff2", Linear(ff_dim, dim, gen))

    def __call__(self, x):
        h = self.ln1(x)
        x = ops.add(x, self.attn(h, h))
        h = self.ln2(x)
        x = ops.add(x, self.ff2(ops.gelu(self.ff1(h))))
        return x


class TabularEncoder(Module):
    def __init__(self, config):
        super().__init__()
        self.config = config
        gen = rng.stream(config.seed, "met-init")
        d = config.embed_dim
        m = config.model_dim
        self.embeddings = self.param(
            "embeddings", (gen.standard_normal((N_FEATURES, d)) * 0.1).astype(np.float32)
        )
        self.mask_value = self.param("mask_value", np.zeros((1, 1), dtype=np.float32))
        self.input_proj = self.child("input_proj", Linear(d + 1, m, gen))
        self.enc_blocks = [
            self.child(f"enc{i}", TransformerBlock(m, config.heads, config.ff_dim, gen))
            for i in range(config.encoder_layers)
        ]
        self.enc_norm = self.child("enc_norm", LayerNorm(m))
        self.context_head = self.child("context_head", Linear(m, d, gen))
        self.dec_in = self.child("dec_in", Linear(d, m, gen))
        self.dec_blocks = [
            self.child(f"dec{i}", TransformerBlock(m, config.heads, config.ff_dim, gen))
            for i in range(config.decoder_layers)
        ]
        self.dec_norm = self.child("dec_norm", LayerNorm(m))
        self.value_head = self.child("value_head", Linear(m, 1, gen))

    # ------------------------------------------------------------- tokens

    def build_tokens(self, values, mask_flags):
        """Project [value-or-mask-scalar, embedding] rows to model width.

        values: (B, 69) constant array; mask_flags: (B, 69) in {0,1}.
        Output: (B, 69, model_dim) Tensor.
        """
        b = values.shape[0]
        vals = Tensor(values.astype(np.float32))
        flags = Tensor(mask_flags.astype(np.float32))
        kept = ops.mul(vals, ops.add_scalar(ops.scale(flags, -1.0), 1.0))
        masked_part = ops.mul(flags, self.mask_value)
        mixed = ops.add(kept, masked_part)
        mixed3 = ops.reshape(mixed, (b, N_FEATURES, 1))
        emb = ops.broadcast_to(self.embeddings, (b, N_FEATURES, self.config.embed_dim))
        return self.input_proj(ops.concat([mixed3, emb], axis=2))

    # -------------------------------------------------------------- passes

    def encode_tokens(self, tokens):
        x = tokens
        for block in self.enc_blocks:
            x = block(x)
        return self.context_head(self.enc_norm(x))

    def encode(self, values, masked_slots=()):
        """PromptContext (B, 69, d) for normalized feature rows.

        masked_slots: indices whose tokens use the mask construction (the
        probe masks the clinical slots this way); empty for prompts.
        """
        values = np.atleast_2d(np.asarray(values, dtype=np.float32))
        flags = np.zeros_like(values)
        for j in masked_slots:
            flags[:, j] = 1.0
        return self.encode_tokens(self.build_tokens(values, flags))

    def reconstruct(self, values, mask_flags):
        """Pretraining pass: (context, predicted values (B, 69))."""
        b = values.shape[0]
        tokens = self.build_tokens(values, mask_flags)
        context = self.encode_tokens(tokens)
        dec_known = self.dec_in(context)
        # masked positions of `tokens` already hold the mask-token
        # construction, so the decoder reuses them directly
        flags3 = Tensor(mask_flags.astype(np.float32).reshape(b, N_FEATURES, 1))
        keep3 = Tensor((1.0 - mask_flags).astype(np.float32).reshape(b, N_FEATURES, 1))
        x = ops.add(ops.mul(dec_known, keep3), ops.mul(tokens, flags3))
        for block in self.dec_blocks:
            x = block(x)
        pred = self.value_head(self.dec_norm(x))
        return context, ops.reshape(pred, (b, N_FEATURES))


def masked_mse(pred, targets, mask_flags):
    """MSE over masked slots only; unmasked targets cannot affect it."""
    total = float(mask_flags.sum())
    if total == 0:
        return ops.scale(ops.sum_all(ops.mul(pred, Tensor(np.zeros_like(pred.data)))), 0.0)
    flags = Tensor(mask_flags.astype(np.float32))
    diff = ops.mul(ops.sub(pred, Tensor(targets.astype(np.float32))), flags)
    return ops.scale(ops.sum_all(ops.mul(diff, diff)), 1.0 / total)
