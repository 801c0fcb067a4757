"""Central finite-difference gradient oracle.

Independent of the tape: it only calls the forward path, perturbing one
input element at a time, and compares against whatever backward() produced.
"""

import numpy as np

from massfill.nn import Tape, Tensor, backward


def numeric_grad(fn, tensors, wrt, eps=1e-3):
    """Central-difference gradient of scalar fn w.r.t. tensors[wrt]."""
    base = tensors[wrt].data
    grad = np.zeros_like(base, dtype=np.float64)
    flat = base.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        lo_hi = float(fn(*tensors).data)
        flat[i] = orig - eps
        lo_lo = float(fn(*tensors).data)
        flat[i] = orig
        gflat[i] = (lo_hi - lo_lo) / (2.0 * eps)
    return grad


def analytic_grads(fn, tensors):
    for t in tensors:
        t.grad = None
    with Tape() as tape:
        loss = fn(*tensors)
    backward(loss, tape)
    return [t.grad if t.grad is not None else np.zeros_like(t.data) for t in tensors]


def rel_error(a, b):
    na = np.linalg.norm(np.asarray(a, dtype=np.float64).ravel())
    nb = np.linalg.norm(np.asarray(b, dtype=np.float64).ravel())
    nd = np.linalg.norm((np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)).ravel())
    return nd / max(na, nb, 1e-12)


def check_op(fn, tensors, tol=1e-3, eps=1e-3):
    """Assert every requires_grad input matches the finite-difference oracle."""
    an = analytic_grads(fn, tensors)
    worst = 0.0
    for i, t in enumerate(tensors):
        if not t.requires_grad:
            continue
        num = numeric_grad(fn, tensors, i, eps=eps)
        err = rel_error(an[i], num)
        worst = max(worst, err)
        assert err < tol, f"input {i}: rel error {err:.3e} >= {tol}"
    return worst
