"""Prompt encoders for the generator, and prompt vector construction.

Three interchangeable configurations:
  met-frozen        pretrained tabular encoder, weights frozen
  mlp-joint         three fully connected layers trained with the generator
  constant-baseline two learned context matrices keyed only on mass-vs-
                    normal, standing in for category-text prompts

All emit a (B, 69, d) context consumed by cross-attention.
"""

import numpy as np

from .. import rng
from ..nn import Linear, Module, Tensor, ops
from ..radiomics import BIRADS_CODE, BIRADS_SLOT, DENSITY_CODE, DENSITY_SLOT, N_FEATURES


def normal_prompt(density):
    """The distinguished mass-free condition: 67 zeros + density + birads 0."""
    v = np.zeros(N_FEATURES, dtype=np.float32)
    v[DENSITY_SLOT] = DENSITY_CODE[density]
    v[BIRADS_SLOT] = BIRADS_CODE["normal"]
    return v


def clinical_slots(vector, density, birads):
    out = np.asarray(vector, dtype=np.float32).copy()
    out[DENSITY_SLOT] = DENSITY_CODE[density]
    out[BIRADS_SLOT] = BIRADS_CODE[birads]
    return out


class MlpPromptEncoder(Module):
    """69 -> 256 -> 256 -> 69*d, reshaped to (B, 69, d); trained jointly."""

    def __init__(self, embed_dim, seed, hidden=256):
        super().__init__()
        self.embed_dim = embed_dim
        gen = rng.stream(seed, "mlp-prompt-init")
        self.fc1 = self.child("fc1", Linear(N_FEATURES, hidden, gen))
        self.fc2 = self.child("fc2", Linear(hidden, hidden, gen))
        self.fc3 = self.child("fc3", Linear(hidden, N_FEATURES * embed_dim, gen))

    def __call__(self, values):
        values = np.atleast_2d(np.asarray(values, dtype=np.float32))
        x = Tensor(values)
        h = ops.relu(self.fc1(x))
        h = ops.relu(self.fc2(h))
        out = self.fc3(h)
        return ops.reshape(out, (values.shape[0], N_FEATURES, self.embed_dim))


class ConstantPromptEncoder(Module):
    """Two learned contexts: one for any mass prompt, one for normal."""

    def __init__(self, embed_dim, seed):
        super().__init__()
        self.embed_dim = embed_dim
        gen = rng.stream(seed, "const-prompt-init")
        self.mass_ctx = self.param(
            "mass_ctx", (gen.standard_normal((N_FEATURES, embed_dim)) * 0.1).astype(np.float32)
        )
        self.normal_ctx = self.param(
            "normal_ctx", (gen.standard_normal((N_FEATURES, embed_dim)) * 0.1).astype(np.float32)
        )

    def __call__(self, values):
        values = np.atleast_2d(np.asarray(values, dtype=np.float32))
        b = values.shape[0]
        # a prompt is "normal" when its birads slot is 0
        is_mass = (values[:, BIRADS_SLOT] > 0).astype(np.float32).reshape(b, 1, 1)
        flag = Tensor(is_mass)
        keep = Tensor(1.0 - is_mass)
        mass = ops.broadcast_to(self.mass_ctx, (b, N_FEATURES, self.embed_dim))
        norm = ops.broadcast_to(self.normal_ctx, (b, N_FEATURES, self.embed_dim))
        return ops.add(ops.mul(mass, flag), ops.mul(norm, keep))


class FrozenMetPrompt:
    """Adapter giving a pretrained TabularEncoder the prompt-encoder call
    shape. Parameters stay frozen; nothing is exposed to the optimizer."""

    def __init__(self, model):
        self.model = model
        self.embed_dim = model.config.embed_dim

    def __call__(self, values):
        return self.model.encode(values)

    def named_parameters(self, prefix=""):
        return iter(())

    def parameters(self):
        return {}

    def state_arrays(self):
        return {}
