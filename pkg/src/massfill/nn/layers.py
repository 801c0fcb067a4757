"""Parameterized building blocks on top of the op catalog.

Modules register parameters in insertion order; that order is the canonical
tensor order for checkpoints and the optimizer, which keeps training and
serialization bit-reproducible.
"""

import math

import numpy as np

from . import ops
from .tensor import Tensor


class Module:
    def __init__(self):
        self._params = {}
        self._children = {}

    def param(self, name, array):
        t = Tensor(np.asarray(array, dtype=np.float32), requires_grad=True)
        self._params[name] = t
        return t

    def child(self, name, module):
        self._children[name] = module
        return module

    def named_parameters(self, prefix=""):
        for name, p in self._params.items():
            yield (prefix + name, p)
        for cname, child in self._children.items():
            yield from child.named_parameters(prefix + cname + ".")

    def parameters(self):
        return dict(self.named_parameters())

    def state_arrays(self):
        return {name: p.data for name, p in self.named_parameters()}

    def load_state(self, arrays):
        params = self.parameters()
        missing = set(params) - set(arrays)
        extra = set(arrays) - set(params)
        if missing or extra:
            raise KeyError(f"state mismatch: missing={sorted(missing)} extra={sorted(extra)}")
        for name, p in params.items():
            arr = np.asarray(arrays[name], dtype=np.float32)
            if arr.shape != p.data.shape:
                raise ValueError(f"{name}: stored shape {arr.shape} != model shape {p.data.shape}")
            p.data = arr.copy()
            p.grad = None

    def requires_grad_(self, flag):
        for _, p in self.named_parameters():
            p.requires_grad = bool(flag)
        return self

    def zero_grad(self):
        for _, p in self.named_parameters():
            p.grad = None


def glorot_uniform(gen, fan_in, fan_out, shape):
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return gen.uniform(-limit, limit, size=shape).astype(np.float32)


class Linear(Module):
    """y = x @ W + b, with optional low-rank adapter pair.

    With an adapter attached the effective weight is W + (alpha/r) * (B A)^T
    in this storage layout: lora_a is (r, in), lora_b is (out, r), lora_b
    starts at zero so a fresh adapter is an exact no-op.
    """

    def __init__(self, in_dim, out_dim, gen, bias=True, zero_init=False):
        super().__init__()
        self.in_dim = in_dim
        self.out_dim = out_dim
        if zero_init:
            w0 = np.zeros((in_dim, out_dim), dtype=np.float32)
        else:
            w0 = glorot_uniform(gen, in_dim, out_dim, (in_dim, out_dim))
        self.w = self.param("w", w0)
        self.b = self.param("b", np.zeros(out_dim, dtype=np.float32)) if bias else None
        self.lora_a = None
        self.lora_b = None
        self.lora_scale = 0.0

    def attach_lora(self, rank, alpha, gen):
        if rank >= min(self.in_dim, self.out_dim):
            raise ValueError(
                f"lora rank {rank} must be < min(in={self.in_dim}, out={self.out_dim})"
            )
        a0 = (gen.standard_normal((rank, self.in_dim)) / math.sqrt(self.in_dim)).astype(np.float32)
        self.lora_a = self.param("lora_a", a0)
        self.lora_b = self.param("lora_b", np.zeros((self.out_dim, rank), dtype=np.float32))
        self.lora_scale = float(alpha) / float(rank)

    def __call__(self, x):
        # flatten leading dims so the product is one GEMM, not a batch loop
        lead = x.data.shape[:-1]
        flat = ops.reshape(x, (-1, self.in_dim)) if x.data.ndim != 2 else x
        y = ops.matmul(flat, self.w)
        if self.lora_a is not None:
            # x @ A^T @ B^T, scaled; base weight untouched
            za = ops.matmul(flat, ops.transpose(self.lora_a, (1, 0)))
            zb = ops.matmul(za, ops.transpose(self.lora_b, (1, 0)))
            y = ops.add(y, ops.scale(zb, self.lora_scale))
        if self.b is not None:
            y = ops.add(y, self.b)
        if x.data.ndim != 2:
            y = ops.reshape(y, lead + (self.out_dim,))
        return y


class LayerNorm(Module):
    def __init__(self, dim, axis=-1, eps=1e-5):
        super().__init__()
        self.axis = axis
        self.eps = eps
        self.gamma = self.param("gamma", np.ones(dim, dtype=np.float32))
        self.beta = self.param("beta", np.zeros(dim, dtype=np.float32))

    def __call__(self, x):
        return ops.layer_norm(x, self.gamma, self.beta, axis=self.axis, eps=self.eps)


class Conv2d(Module):
    def __init__(self, cin, cout, gen, ksize=3, stride=1, pad=1, bias=True, zero_init=False):
        super().__init__()
        self.stride = stride
        self.pad = pad
        fan_in = cin * ksize * ksize
        fan_out = cout * ksize * ksize
        if zero_init:
            w0 = np.zeros((cout, cin, ksize, ksize), dtype=np.float32)
        else:
            w0 = glorot_uniform(gen, fan_in, fan_out, (cout, cin, ksize, ksize))
        self.w = self.param("w", w0)
        self.b = self.param("b", np.zeros(cout, dtype=np.float32)) if bias else None

    def __call__(self, x):
        return ops.conv2d(x, self.w, self.b, stride=self.stride, pad=self.pad)


class CrossAttention(Module):
    """Multi-head attention with queries from x and keys/values from context.

    Projection layers are plain Linears, so low-rank adapters attach to them
    directly. With context=x this is self-attention.
    """

    def __init__(self, dim, ctx_dim, n_heads, gen):
        super().__init__()
        if dim % n_heads != 0:
            raise ValueError(f"dim {dim} not divisible by heads {n_heads}")
        self.n_heads = n_heads
        self.wq = self.child("wq", Linear(dim, dim, gen, bias=False))
        self.wk = self.child("wk", Linear(ctx_dim, dim, gen, bias=False))
        self.wv = self.child("wv", Linear(ctx_dim, dim, gen, bias=False))
        self.wo = self.child("wo", Linear(dim, dim, gen, bias=True))

    def __call__(self, x, context):
        q = self.wq(x)
        k = self.wk(context)
        v = self.wv(context)
        out = ops.attention(q, k, v, self.n_heads)
        return self.wo(out)

    def projection_linears(self):
        return [self.wq, self.wk, self.wv, self.wo]
