"""Dense float32 tensors with reverse-mode automatic differentiation.

A Tensor wraps a numpy float32 array. While a Tape is active, every op
records a node (inputs, output, backward rule) in execution order; backward()
walks the list strictly in reverse, so topological order holds by
construction. Kernels are float32 with float64 accumulation inside
reductions and normalization statistics.

Tapes are single-owner: recording is not thread safe, but tensors that are
never written (frozen parameters) may be read from many threads.
"""

import numpy as np


class ShapeError(ValueError):
    """Raised when operand shapes do not conform for an op."""

    def __init__(self, op, *shapes):
        super().__init__(f"{op}: incompatible shapes {', '.join(str(tuple(s)) for s in shapes)}")
        self.op = op
        self.shapes = shapes


class Tape:
    """Ordered record of ops for one forward pass."""

    def __init__(self):
        self.nodes = []
        self._prev = None

    def __enter__(self):
        global _ACTIVE_TAPE
        self._prev = _ACTIVE_TAPE
        _ACTIVE_TAPE = self
        return self

    def __exit__(self, *exc):
        global _ACTIVE_TAPE
        _ACTIVE_TAPE = self._prev
        self._prev = None
        return False


_ACTIVE_TAPE = None


def active_tape():
    return _ACTIVE_TAPE


class no_grad:
    """Context manager suspending tape recording."""

    def __enter__(self):
        global _ACTIVE_TAPE
        self._prev = _ACTIVE_TAPE
        _ACTIVE_TAPE = None
        return self

    def __exit__(self, *exc):
        global _ACTIVE_TAPE
        _ACTIVE_TAPE = self._prev
        return False


class Tensor:
    __slots__ = ("data", "requires_grad", "grad", "_id")

    _next_id = 0

    def __init__(self, data, requires_grad=False):
        arr = np.asarray(data, dtype=np.float32)
        self.data = arr
        self.requires_grad = bool(requires_grad)
        self.grad = None
        Tensor._next_id += 1
        self._id = Tensor._next_id

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data)

    def numpy(self):
        return self.data

    def detach(self):
        """A view of the same data that contributes zero gradient."""
        t = Tensor.__new__(Tensor)
        t.data = self.data
        t.requires_grad = False
        t.grad = None
        Tensor._next_id += 1
        t._id = Tensor._next_id
        return t

    def zero_grad(self):
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    # convenience arithmetic; heavy lifting lives in ops.py
    def __add__(self, other):
        from . import ops

        return ops.add(self, _as_tensor(other))

    def __radd__(self, other):
        from . import ops

        return ops.add(_as_tensor(other), self)

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, _as_tensor(other))

    def __rsub__(self, other):
        from . import ops

        return ops.sub(_as_tensor(other), self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, _as_tensor(other))

    def __rmul__(self, other):
        from . import ops

        return ops.mul(_as_tensor(other), self)

    def __neg__(self):
        from . import ops

        return ops.scale(self, -1.0)

    def __matmul__(self, other):
        from . import ops

        return ops.matmul(self, _as_tensor(other))

    def reshape(self, *shape):
        from . import ops

        return ops.reshape(self, shape if len(shape) > 1 else shape[0])

    def transpose(self, axes):
        from . import ops

        return ops.transpose(self, axes)


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(np.asarray(x, dtype=np.float32))


class Node:
    __slots__ = ("inputs", "output", "backward_fn")

    def __init__(self, inputs, output, backward_fn):
        self.inputs = inputs
        self.output = output
        self.backward_fn = backward_fn


def record(inputs, output, backward_fn):
    """Put a node on the active tape if any input can require gradients."""
    tape = _ACTIVE_TAPE
    if tape is None:
        return output
    tape.nodes.append(Node(inputs, output, backward_fn))
    return output


def backward(loss, tape):
    """Accumulate gradients of a scalar loss into every reachable leaf.

    Returns {tensor_id: gradient array}; leaves with requires_grad also get
    their .grad field set (accumulating across calls until zero_grad).
    """
    if loss.data.ndim != 0 and loss.data.size != 1:
        raise ShapeError("backward", loss.data.shape)
    grads = {loss._id: np.ones_like(loss.data)}
    leaves = {}
    for node in reversed(tape.nodes):
        gout = grads.get(node.output._id)
        if gout is None:
            continue
        gins = node.backward_fn(gout)
        for t, g in zip(node.inputs, gins):
            if t.requires_grad and t._id not in leaves:
                leaves[t._id] = t
            if g is None:
                continue
            acc = grads.get(t._id)
            grads[t._id] = g if acc is None else acc + g
    for tid, t in leaves.items():
        if tid in grads:
            g = grads[tid].astype(np.float32, copy=False)
            t.grad = g.copy() if t.grad is None else t.grad + g
    # a tape is consumed by backward; replaying it is an error, not a no-op
    tape.nodes.clear()
    return grads


def check_finite(name, arr):
    if not np.all(np.isfinite(arr)):
        bad = int(np.size(arr) - np.count_nonzero(np.isfinite(arr)))
        raise FloatingPointError(f"{name}: {bad} non-finite values in output of shape {arr.shape}")
