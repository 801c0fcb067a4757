"""Forward ops and their backward rules.

All kernels take and return float32; reductions and normalization statistics
accumulate in float64 before casting back. Every op validates shapes up
front and raises ShapeError naming the op, so a mismatch fails loudly at the
call site instead of deep inside numpy broadcasting.

Set MASSFILL_CHECK_FINITE=1 (or call set_check_finite) to scan every op
output for NaN/Inf; training loops always check the loss scalar regardless.
"""

import math
import os

import numpy as np
from scipy.special import erf

from .. import backend
from .tensor import Tensor, ShapeError, record, check_finite

_CHECK_FINITE = bool(int(os.environ.get("MASSFILL_CHECK_FINITE", "0")))

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT2PI = 1.0 / math.sqrt(2.0 * math.pi)


def set_check_finite(enabled):
    global _CHECK_FINITE
    _CHECK_FINITE = bool(enabled)


def _out(name, inputs, data, backward_fn):
    if _CHECK_FINITE:
        check_finite(name, data)
    out = Tensor(data)
    return record(inputs, out, backward_fn)


def _unbroadcast(g, shape):
    """Reduce a gradient back to the shape it was broadcast from."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def _check_broadcast(op, a, b):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(op, a.shape, b.shape) from None


# ----------------------------------------------------------------- arithmetic


def add(a, b):
    _check_broadcast("add", a.data, b.data)
    data = a.data + b.data

    def bwd(g):
        return _unbroadcast(g, a.data.shape), _unbroadcast(g, b.data.shape)

    return _out("add", (a, b), data, bwd)


def sub(a, b):
    _check_broadcast("sub", a.data, b.data)
    data = a.data - b.data

    def bwd(g):
        return _unbroadcast(g, a.data.shape), -_unbroadcast(g, b.data.shape)

    return _out("sub", (a, b), data, bwd)


def mul(a, b):
    _check_broadcast("mul", a.data, b.data)
    data = a.data * b.data

    def bwd(g):
        return (
            _unbroadcast(g * b.data, a.data.shape),
            _unbroadcast(g * a.data, b.data.shape),
        )

    return _out("mul", (a, b), data, bwd)


def scale(a, s):
    s = float(s)
    data = a.data * np.float32(s)

    def bwd(g):
        return (g * np.float32(s),)

    return _out("scale", (a,), data, bwd)


def add_scalar(a, s):
    data = a.data + np.float32(s)

    def bwd(g):
        return (g,)

    return _out("add_scalar", (a,), data, bwd)


def exp(a):
    data = np.exp(a.data)

    def bwd(g):
        return (g * data,)

    return _out("exp", (a,), data, bwd)


def log(a):
    data = np.log(a.data)

    def bwd(g):
        return (g / a.data,)

    return _out("log", (a,), data, bwd)


def sqrt(a):
    data = np.sqrt(a.data)

    def bwd(g):
        return (g * (0.5 / np.maximum(data, np.float32(1e-12))),)

    return _out("sqrt", (a,), data, bwd)


# -------------------------------------------------------------- linear algebra


def matmul(a, b):
    """Matrix product with numpy batching semantics on leading axes."""
    if a.data.ndim < 2 or b.data.ndim < 2 or a.data.shape[-1] != b.data.shape[-2]:
        raise ShapeError("matmul", a.data.shape, b.data.shape)
    data = np.matmul(a.data, b.data)

    def bwd(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2))
        gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return _unbroadcast(ga, a.data.shape), _unbroadcast(gb, b.data.shape)

    return _out("matmul", (a, b), data, bwd)


# ----------------------------------------------------------------- activations


def relu(a):
    data = np.maximum(a.data, np.float32(0))

    def bwd(g):
        return (g * (a.data > 0),)

    return _out("relu", (a,), data, bwd)


def gelu(a):
    """Exact (erf-based) GELU."""
    x = a.data
    phi_cdf = np.float32(0.5) * (1.0 + erf(x * _INV_SQRT2)).astype(np.float32)
    data = x * phi_cdf

    def bwd(g):
        pdf = np.exp(np.float32(-0.5) * x * x) * np.float32(_INV_SQRT2PI)
        return (g * (phi_cdf + x * pdf),)

    return _out("gelu", (a,), data, bwd)


def sigmoid(a):
    x = a.data
    data = np.empty_like(x)
    pos = x >= 0
    data[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    data[~pos] = ex / (1.0 + ex)

    def bwd(g):
        return (g * data * (1.0 - data),)

    return _out("sigmoid", (a,), data, bwd)


def softmax(a):
    """Softmax over the last axis."""
    x = a.data
    m = x.max(axis=-1, keepdims=True)
    e = np.exp(x - m)
    data = e / e.sum(axis=-1, keepdims=True)

    def bwd(g):
        dot = (g * data).sum(axis=-1, keepdims=True)
        return ((g - dot) * data,)

    return _out("softmax", (a,), data, bwd)


# --------------------------------------------------------------- normalization


def layer_norm(x, gamma, beta, axis=-1, eps=1e-5):
    """Normalize over one axis.

    Elementwise math stays float32; means/variances and the parameter-
    gradient sums reduce in float64 before casting back.
    """
    if gamma.data.size != x.data.shape[axis] or beta.data.size != x.data.shape[axis]:
        raise ShapeError("layer_norm", x.data.shape, gamma.data.shape, beta.data.shape)
    xd = x.data
    mu = xd.mean(axis=axis, keepdims=True, dtype=np.float64).astype(np.float32)
    xc = xd - mu
    var = np.mean(xc * xc, axis=axis, keepdims=True, dtype=np.float64)
    inv = (1.0 / np.sqrt(var + eps)).astype(np.float32)
    xhat = xc * inv

    gshape = [1] * x.data.ndim
    gshape[axis] = x.data.shape[axis]
    gam = gamma.data.reshape(gshape)
    bet = beta.data.reshape(gshape)
    data = xhat * gam + bet

    def bwd(g):
        dxhat = g * gam
        dmu_term = dxhat.mean(axis=axis, keepdims=True, dtype=np.float64).astype(np.float32)
        dvar_term = np.mean(dxhat * xhat, axis=axis, keepdims=True, dtype=np.float64).astype(
            np.float32
        )
        dx = (dxhat - dmu_term - xhat * dvar_term) * inv
        sum_axes = tuple(i for i in range(x.data.ndim) if i != axis % x.data.ndim)
        dgamma = (g * xhat).sum(axis=sum_axes, dtype=np.float64).astype(np.float32)
        dbeta = g.sum(axis=sum_axes, dtype=np.float64).astype(np.float32)
        return dx, dgamma.reshape(gamma.data.shape), dbeta.reshape(beta.data.shape)

    return _out("layer_norm", (x, gamma, beta), data, bwd)


# --------------------------------------------------------------------- shapes


def reshape(a, shape):
    data = a.data.reshape(shape)
    old = a.data.shape

    def bwd(g):
        return (g.reshape(old),)

    return _out("reshape", (a,), data, bwd)


def transpose(a, axes):
    axes = tuple(axes)
    data = np.ascontiguousarray(a.data.transpose(axes))
    inv = tuple(np.argsort(axes))

    def bwd(g):
        return (np.ascontiguousarray(g.transpose(inv)),)

    return _out("transpose", (a,), data, bwd)


def concat(tensors, axis):
    datas = [t.data for t in tensors]
    data = np.concatenate(datas, axis=axis)
    sizes = [d.shape[axis] for d in datas]
    splits = np.cumsum(sizes)[:-1]

    def bwd(g):
        return tuple(np.ascontiguousarray(p) for p in np.split(g, splits, axis=axis))

    return _out("concat", tuple(tensors), data, bwd)


def broadcast_to(a, shape):
    data = np.ascontiguousarray(np.broadcast_to(a.data, shape))

    def bwd(g):
        return (_unbroadcast(g, a.data.shape),)

    return _out("broadcast_to", (a,), data, bwd)


def getitem(a, index):
    data = np.ascontiguousarray(a.data[index])

    def bwd(g):
        ga = np.zeros_like(a.data)
        ga[index] = g
        return (ga,)

    return _out("getitem", (a,), data, bwd)


# ------------------------------------------------------------------ reductions


def mean_all(a):
    data = np.float32(a.data.mean(dtype=np.float64))
    n = a.data.size

    def bwd(g):
        return (np.full_like(a.data, g / n, dtype=np.float32),)

    return _out("mean_all", (a,), data, bwd)


def sum_all(a):
    data = np.float32(a.data.sum(dtype=np.float64))

    def bwd(g):
        return (np.full_like(a.data, g, dtype=np.float32),)

    return _out("sum_all", (a,), data, bwd)


def mse_loss(pred, target):
    """Mean squared error over all elements (float64 accumulation)."""
    if pred.data.shape != target.data.shape:
        raise ShapeError("mse_loss", pred.data.shape, target.data.shape)
    diff = pred.data.astype(np.float64) - target.data.astype(np.float64)
    data = np.float32((diff * diff).mean())
    n = pred.data.size

    def bwd(g):
        gd = (g * 2.0 / n * diff).astype(np.float32)
        return gd, -gd

    return _out("mse_loss", (pred, target), data, bwd)


def bce_loss(probs, targets, eps=1e-7):
    """Binary cross-entropy on probabilities in (0,1), mean over elements."""
    if probs.data.shape != targets.data.shape:
        raise ShapeError("bce_loss", probs.data.shape, targets.data.shape)
    p = np.clip(probs.data.astype(np.float64), eps, 1.0 - eps)
    y = targets.data.astype(np.float64)
    data = np.float32(-(y * np.log(p) + (1.0 - y) * np.log1p(-p)).mean())
    n = probs.data.size

    def bwd(g):
        gp = (g / n * (p - y) / (p * (1.0 - p))).astype(np.float32)
        return gp, None

    return _out("bce_loss", (probs, targets), data, bwd)


def bce_with_logits(logits, targets):
    """Numerically stable sigmoid + binary cross-entropy, mean over elements."""
    if logits.data.shape != targets.data.shape:
        raise ShapeError("bce_with_logits", logits.data.shape, targets.data.shape)
    z = logits.data.astype(np.float64)
    y = targets.data.astype(np.float64)
    per = np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))
    data = np.float32(per.mean())
    n = logits.data.size

    def bwd(g):
        s = 1.0 / (1.0 + np.exp(-z))
        return ((g / n * (s - y)).astype(np.float32), None)

    return _out("bce_with_logits", (logits, targets), data, bwd)


# -------------------------------------------------------------- image kernels


def conv2d(x, w, b=None, stride=1, pad=1):
    """2D convolution (cross-correlation) on NCHW, stride 1 or 2.

    Lowered to im2col + GEMM through the kernel backend; the im2col buffer is
    kept for the backward pass.
    """
    if x.data.ndim != 4 or w.data.ndim != 4 or x.data.shape[1] != w.data.shape[1]:
        raise ShapeError("conv2d", x.data.shape, w.data.shape)
    if stride not in (1, 2):
        raise ValueError(f"conv2d: stride must be 1 or 2, got {stride}")
    bsz, cin, h, wdt = x.data.shape
    cout, _, k, k2 = w.data.shape
    if k != k2:
        raise ShapeError("conv2d", w.data.shape)
    if b is not None and b.data.shape != (cout,):
        raise ShapeError("conv2d", w.data.shape, b.data.shape)
    out_h = (h + 2 * pad - k) // stride + 1
    out_w = (wdt + 2 * pad - k) // stride + 1
    if out_h <= 0 or out_w <= 0:
        raise ShapeError("conv2d", x.data.shape, w.data.shape)

    if pad > 0:
        xpad = np.pad(x.data, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    else:
        xpad = x.data
    cols = backend.im2col(xpad, k, stride, out_h, out_w)  # (B, C*k*k, oh*ow)
    w2 = w.data.reshape(cout, cin * k * k)
    out = np.matmul(w2, cols).reshape(bsz, cout, out_h, out_w)
    if b is not None:
        out = out + b.data.reshape(1, cout, 1, 1)

    inputs = (x, w) if b is None else (x, w, b)

    def bwd(g):
        g2 = g.reshape(bsz, cout, out_h * out_w)
        dw = np.matmul(g2, cols.transpose(0, 2, 1)).sum(axis=0).reshape(w.data.shape)
        dcols = np.matmul(w2.T, g2)
        dxpad = backend.col2im_add(dcols, k, stride, xpad.shape)
        if pad > 0:
            dx = np.ascontiguousarray(dxpad[:, :, pad:-pad, pad:-pad])
        else:
            dx = dxpad
        if b is None:
            return dx, dw
        return dx, dw, g.sum(axis=(0, 2, 3))

    return _out("conv2d", inputs, out, bwd)


def upsample_nearest2x(x):
    if x.data.ndim != 4:
        raise ShapeError("upsample_nearest2x", x.data.shape)
    data = x.data.repeat(2, axis=2).repeat(2, axis=3)
    bsz, c, h, w = x.data.shape

    def bwd(g):
        return (g.reshape(bsz, c, h, 2, w, 2).sum(axis=(3, 5)),)

    return _out("upsample_nearest2x", (x,), data, bwd)


def global_max_2d(x):
    """Max over the two spatial axes of NCHW; gradient goes to the argmax."""
    if x.data.ndim != 4:
        raise ShapeError("global_max_2d", x.data.shape)
    bsz, c, h, w = x.data.shape
    flat = x.data.reshape(bsz, c, h * w)
    idx = flat.argmax(axis=2)
    data = np.take_along_axis(flat, idx[:, :, None], axis=2)[:, :, 0]

    def bwd(g):
        gx = np.zeros_like(flat)
        np.put_along_axis(gx, idx[:, :, None], g[:, :, None], axis=2)
        return (gx.reshape(x.data.shape),)

    return _out("global_max_2d", (x,), data, bwd)


# ------------------------------------------------------------------- attention


def attention(q, k, v, n_heads):
    """Scaled dot-product attention over (B, T, D) tensors.

    Composed from primitive ops so the backward pass is derived, not
    hand-written. Full (non-flash) materialization; sequence lengths here
    stay small.
    """
    bq, tq, d = q.data.shape
    bk, tk, dk = k.data.shape
    if (bq, d) != (bk, dk) or k.data.shape != v.data.shape or d % n_heads != 0:
        raise ShapeError("attention", q.data.shape, k.data.shape, v.data.shape)
    dh = d // n_heads
    qh = transpose(reshape(q, (bq, tq, n_heads, dh)), (0, 2, 1, 3))
    kh = transpose(reshape(k, (bk, tk, n_heads, dh)), (0, 2, 3, 1))
    vh = transpose(reshape(v, (bk, tk, n_heads, dh)), (0, 2, 1, 3))
    scores = scale(matmul(qh, kh), 1.0 / math.sqrt(dh))
    attn = softmax(scores)
    out = matmul(attn, vh)
    return reshape(transpose(out, (0, 2, 1, 3)), (bq, tq, d))
