"""Adam with bias correction, in functional and stateful forms."""

import numpy as np


class AdamState:
    """Per-parameter moment accumulators plus hyperparameters."""

    def __init__(self, shapes, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.step_count = 0
        self.m = {k: np.zeros(s, dtype=np.float32) for k, s in shapes.items()}
        self.v = {k: np.zeros(s, dtype=np.float32) for k, s in shapes.items()}


def adam_step(params, grads, state):
    """One Adam update. Mutates params and state in place, deterministically.

    params/grads: dicts name -> float32 array with matching shapes. A NaN or
    Inf gradient raises before anything is touched.
    """
    for name, g in grads.items():
        if name not in params:
            raise KeyError(f"gradient for unknown parameter {name!r}")
        if g.shape != params[name].shape:
            raise ValueError(f"{name}: grad shape {g.shape} != param shape {params[name].shape}")
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"non-finite gradient for parameter {name!r}")
    state.step_count += 1
    t = state.step_count
    bc1 = 1.0 - state.beta1**t
    bc2 = 1.0 - state.beta2**t
    for name, g in grads.items():
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        mhat = m / bc1
        vhat = v / bc2
        params[name] -= (state.lr * mhat / (np.sqrt(vhat) + state.eps)).astype(np.float32)
    return params, state


class Adam:
    """Stateful wrapper over adam_step for a dict of Tensors."""

    def __init__(self, tensors, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.tensors = dict(tensors)
        self.state = AdamState(
            {k: t.data.shape for k, t in self.tensors.items()},
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )

    def step(self):
        grads = {}
        for name, t in self.tensors.items():
            if t.grad is not None:
                grads[name] = t.grad
        params = {name: self.tensors[name].data for name in grads}
        adam_step(params, grads, self.state)

    def zero_grad(self):
        for t in self.tensors.values():
            t.grad = None
