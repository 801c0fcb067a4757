"""Every differentiable op in the core, wrapped as a scalar-valued case for
finite-difference checking. Shared by the unit tests and the acceptance gate.

Inputs are kept away from kinks (relu at 0, max ties) so central differences
are valid, and a fixed random linear functional turns tensor outputs into
scalars with dense gradients.
"""

import numpy as np

from massfill.nn import Tensor, ops


def _t(gen, shape, lo=-1.0, hi=1.0, grad=True, avoid_zero=0.0):
    data = gen.uniform(lo, hi, size=shape).astype(np.float32)
    if avoid_zero > 0:
        data = data + np.sign(data) * avoid_zero
    return Tensor(data, requires_grad=grad)


def op_cases(gen):
    """Return [(name, fn, tensors)]. fn(*tensors) is a scalar Tensor."""
    cases = []

    def case(name, out_shape, f, tensors):
        # probe fixed at construction so repeated forward evals agree
        probe = Tensor(gen.uniform(-1.0, 1.0, size=out_shape).astype(np.float32))
        cases.append((name, lambda *ts, _f=f, _p=probe: ops.sum_all(ops.mul(_f(*ts), _p)), tensors))

    def scalar_case(name, f, tensors):
        cases.append((name, f, tensors))

    case("add", (3, 4), lambda x, y: ops.add(x, y), [_t(gen, (3, 4)), _t(gen, (3, 4))])
    case("add_broadcast", (3, 4), lambda x, y: ops.add(x, y), [_t(gen, (3, 4)), _t(gen, (1, 4))])
    case("sub", (3, 4), lambda x, y: ops.sub(x, y), [_t(gen, (3, 4)), _t(gen, (3, 4))])
    case("mul", (3, 4), lambda x, y: ops.mul(x, y), [_t(gen, (3, 4)), _t(gen, (3, 4))])
    case("scale", (3, 4), lambda x: ops.scale(x, -2.5), [_t(gen, (3, 4))])
    case("exp", (3, 4), lambda x: ops.exp(x), [_t(gen, (3, 4))])
    case("log", (3, 4), lambda x: ops.log(x), [_t(gen, (3, 4), lo=0.5, hi=2.0)])
    case("sqrt", (3, 4), lambda x: ops.sqrt(x), [_t(gen, (3, 4), lo=0.5, hi=2.0)])

    case("matmul", (3, 5), lambda x, y: ops.matmul(x, y), [_t(gen, (3, 4)), _t(gen, (4, 5))])
    case(
        "matmul_batched",
        (2, 3, 5),
        lambda x, y: ops.matmul(x, y),
        [_t(gen, (2, 3, 4)), _t(gen, (2, 4, 5))],
    )
    case(
        "matmul_broadcast",
        (2, 3, 5),
        lambda x, y: ops.matmul(x, y),
        [_t(gen, (2, 3, 4)), _t(gen, (4, 5))],
    )

    case("relu", (3, 4), lambda x: ops.relu(x), [_t(gen, (3, 4), avoid_zero=0.05)])
    case("gelu", (3, 4), lambda x: ops.gelu(x), [_t(gen, (3, 4))])
    case("sigmoid", (3, 4), lambda x: ops.sigmoid(x), [_t(gen, (3, 4))])
    case("softmax", (3, 4), lambda x: ops.softmax(x), [_t(gen, (3, 4))])

    g5 = Tensor(gen.uniform(0.5, 1.5, 5).astype(np.float32), requires_grad=True)
    b5 = Tensor(gen.uniform(-0.5, 0.5, 5).astype(np.float32), requires_grad=True)
    case(
        "layer_norm",
        (4, 5),
        lambda x, gm, bt: ops.layer_norm(x, gm, bt),
        [_t(gen, (4, 5)), g5, b5],
    )
    g3 = Tensor(gen.uniform(0.5, 1.5, 3).astype(np.float32), requires_grad=True)
    b3 = Tensor(gen.uniform(-0.5, 0.5, 3).astype(np.float32), requires_grad=True)
    case(
        "layer_norm_axis1",
        (2, 3, 4, 4),
        lambda x, gm, bt: ops.layer_norm(x, gm, bt, axis=1),
        [_t(gen, (2, 3, 4, 4)), g3, b3],
    )

    case(
        "conv2d_s1",
        (2, 3, 5, 5),
        lambda x, w, bb: ops.conv2d(x, w, bb, stride=1, pad=1),
        [
            _t(gen, (2, 2, 5, 5)),
            _t(gen, (3, 2, 3, 3)),
            Tensor(gen.uniform(-0.5, 0.5, 3).astype(np.float32), requires_grad=True),
        ],
    )
    case(
        "conv2d_s2",
        (2, 3, 3, 3),
        lambda x, w, bb: ops.conv2d(x, w, bb, stride=2, pad=1),
        [
            _t(gen, (2, 2, 6, 6)),
            _t(gen, (3, 2, 3, 3)),
            Tensor(gen.uniform(-0.5, 0.5, 3).astype(np.float32), requires_grad=True),
        ],
    )
    case(
        "upsample_nearest2x",
        (2, 2, 6, 6),
        lambda x: ops.upsample_nearest2x(x),
        [_t(gen, (2, 2, 3, 3))],
    )
    spread = np.linspace(0, 8, 2 * 3 * 4 * 4).astype(np.float32).reshape(2, 3, 4, 4)
    spread = spread + gen.uniform(-0.2, 0.2, (2, 3, 4, 4)).astype(np.float32)
    case(
        "global_max_2d",
        (2, 3),
        lambda x: ops.global_max_2d(x),
        [Tensor(spread, requires_grad=True)],
    )

    case(
        "attention",
        (2, 3, 4),
        lambda q, k, v: ops.attention(q, k, v, n_heads=2),
        [_t(gen, (2, 3, 4)), _t(gen, (2, 5, 4)), _t(gen, (2, 5, 4))],
    )

    tgt = Tensor(gen.uniform(-1, 1, (3, 4)).astype(np.float32))
    scalar_case("mse_loss", lambda x, _t=tgt: ops.mse_loss(x, _t), [_t(gen, (3, 4))])
    ytgt = Tensor((gen.uniform(0, 1, (3, 4)) > 0.5).astype(np.float32))
    scalar_case("bce_with_logits", lambda x, _y=ytgt: ops.bce_with_logits(x, _y), [_t(gen, (3, 4))])
    scalar_case("bce_loss", lambda x, _y=ytgt: ops.bce_loss(x, _y), [_t(gen, (3, 4), lo=0.2, hi=0.8)])
    scalar_case("mean_all", lambda x: ops.mean_all(x), [_t(gen, (3, 4))])

    case("reshape", (2, 6), lambda x: ops.reshape(x, (2, 6)), [_t(gen, (3, 4))])
    case("transpose", (4, 2, 3), lambda x: ops.transpose(x, (2, 0, 1)), [_t(gen, (2, 3, 4))])
    case(
        "concat",
        (3, 7),
        lambda x, y: ops.concat([x, y], axis=1),
        [_t(gen, (3, 4)), _t(gen, (3, 3))],
    )
    case("broadcast_to", (4, 3, 2), lambda x: ops.broadcast_to(x, (4, 3, 2)), [_t(gen, (3, 2))])
    case(
        "getitem",
        (2, 2),
        lambda x: ops.getitem(x, (slice(0, 2), slice(1, 3))),
        [_t(gen, (3, 4))],
    )
    return cases
