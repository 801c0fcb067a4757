import numpy as np
import pytest

from massfill.nn import Adam, AdamState, ShapeError, Tape, Tensor, adam_step, backward, ops
from massfill import rng

from gradcheck import check_op
from op_catalog import op_cases


def test_softmax_uniform():
    out = ops.softmax(Tensor(np.zeros(3, dtype=np.float32)))
    np.testing.assert_allclose(out.data, np.full(3, 1 / 3, dtype=np.float32), atol=1e-7)


def test_matmul_identity():
    gen = rng.stream(7, "test", "matmul")
    a = gen.standard_normal((3, 5)).astype(np.float32)
    out = ops.matmul(Tensor(np.eye(3, dtype=np.float32)), Tensor(a))
    np.testing.assert_array_equal(out.data, a)


def test_conv2d_ones_hand_counts():
    # 3x3 all-ones kernel over 5x5 all-ones image, zero padding 1:
    # each output counts the in-bounds taps (9 center, 6 edge, 4 corner)
    img = Tensor(np.ones((1, 1, 5, 5), dtype=np.float32))
    ker = Tensor(np.ones((1, 1, 3, 3), dtype=np.float32))
    out = ops.conv2d(img, ker, None, stride=1, pad=1).data[0, 0]
    assert out[2, 2] == 9.0
    assert out[0, 2] == 6.0
    assert out[0, 0] == 4.0


def test_shape_mismatch_reports_op_and_shapes():
    with pytest.raises(ShapeError, match="matmul"):
        ops.matmul(Tensor(np.zeros((2, 3), np.float32)), Tensor(np.zeros((2, 3), np.float32)))
    with pytest.raises(ShapeError, match="mse_loss"):
        ops.mse_loss(Tensor(np.zeros((2, 3), np.float32)), Tensor(np.zeros((3, 2), np.float32)))


def test_backward_square_analytic():
    x = Tensor(np.float32(3.0).reshape(()), requires_grad=True)
    with Tape() as tape:
        y = ops.mul(x, x)
    backward(y, tape)
    assert abs(float(x.grad) - 6.0) < 1e-6


def test_backward_requires_scalar_loss():
    x = Tensor(np.ones((2, 2), np.float32), requires_grad=True)
    with Tape() as tape:
        y = ops.mul(x, x)
    with pytest.raises(ShapeError):
        backward(y, tape)


def test_constant_and_detached_get_zero_gradient():
    x = Tensor(np.full((3,), 2.0, np.float32), requires_grad=True)
    c = Tensor(np.full((3,), 5.0, np.float32))
    with Tape() as tape:
        out = ops.sum_all(ops.mul(c, c))
    grads = backward(out, tape)
    assert x._id not in grads
    assert x.grad is None
    # detach cuts the flow entirely
    with Tape() as tape:
        out = ops.sum_all(ops.mul(x.detach(), x.detach()))
    backward(out, tape)
    assert x.grad is None


def test_leaf_used_twice_accumulates_once_correctly():
    x = Tensor(np.float32(2.0).reshape(()), requires_grad=True)
    with Tape() as tape:
        y = ops.add(ops.mul(x, x), ops.mul(x, x))  # 2x^2 -> dy/dx = 4x = 8
    backward(y, tape)
    assert abs(float(x.grad) - 8.0) < 1e-6


def test_softmax_gradient_matches_finite_difference():
    gen = rng.stream(0, "test", "softmax-fd")
    x = Tensor(gen.standard_normal(4).astype(np.float32), requires_grad=True)
    w = Tensor(gen.standard_normal(4).astype(np.float32))
    check_op(lambda t: ops.sum_all(ops.mul(ops.softmax(t), w)), [x], tol=1e-3)


@pytest.mark.parametrize("seed", range(3))
def test_all_ops_gradcheck_smoke(seed):
    gen = rng.stream(seed, "gradcheck")
    for name, fn, tensors in op_cases(gen):
        try:
            check_op(fn, tensors)
        except AssertionError as e:
            raise AssertionError(f"{name}: {e}") from e


def test_softmax_rows_sum_to_one():
    gen = rng.stream(3, "softmax-rows")
    x = Tensor(gen.uniform(-5, 5, (20, 11)).astype(np.float32))
    s = ops.softmax(x).data
    np.testing.assert_allclose(s.sum(axis=-1), 1.0, atol=1e-6)


def test_layer_norm_statistics():
    gen = rng.stream(4, "layernorm-stats")
    x = Tensor(gen.uniform(-3, 3, (50, 32)).astype(np.float32))
    gamma = Tensor(np.ones(32, np.float32))
    beta = Tensor(np.zeros(32, np.float32))
    y = ops.layer_norm(x, gamma, beta).data.astype(np.float64)
    assert np.abs(y.mean(axis=-1)).max() < 1e-5
    assert np.abs(y.var(axis=-1) - 1.0).max() < 1e-4


def test_tape_replay_determinism():
    def run():
        gen = rng.stream(11, "replay")
        x = Tensor(gen.standard_normal((4, 6)).astype(np.float32), requires_grad=True)
        w = Tensor(gen.standard_normal((6, 3)).astype(np.float32), requires_grad=True)
        with Tape() as tape:
            y = ops.gelu(ops.matmul(x, w))
            loss = ops.mse_loss(y, Tensor(np.zeros((4, 3), np.float32)))
        backward(loss, tape)
        return loss.data.copy(), x.grad.copy(), w.grad.copy()

    l1, gx1, gw1 = run()
    l2, gx2, gw2 = run()
    assert np.array_equal(l1, l2)
    assert np.array_equal(gx1, gx2)
    assert np.array_equal(gw1, gw2)


# ------------------------------------------------------------------- Adam


def _params(val=1.0):
    return {"w": np.full((3,), val, dtype=np.float32)}


def test_adam_zero_gradient_no_change():
    p = _params()
    st = AdamState({"w": (3,)}, lr=0.1)
    adam_step(p, {"w": np.zeros(3, np.float32)}, st)
    np.testing.assert_array_equal(p["w"], np.ones(3, np.float32))


def test_adam_first_step_magnitude():
    # bias-corrected mhat/(sqrt(vhat)+eps) == 1/(1+eps) for unit gradient
    p = _params()
    st = AdamState({"w": (3,)}, lr=0.1)
    adam_step(p, {"w": np.ones(3, np.float32)}, st)
    np.testing.assert_allclose(p["w"], 1.0 - 0.1, atol=1e-6)


def test_adam_determinism():
    def run():
        p = _params()
        st = AdamState({"w": (3,)}, lr=0.05)
        g = np.array([0.5, -0.25, 1.5], np.float32)
        for _ in range(10):
            adam_step(p, {"w": g}, st)
        return p["w"].copy()

    np.testing.assert_array_equal(run(), run())


def test_adam_nan_gradient_rejected_before_mutation():
    p = _params()
    st = AdamState({"w": (3,)}, lr=0.1)
    bad = np.array([1.0, np.nan, 0.0], np.float32)
    with pytest.raises(FloatingPointError):
        adam_step(p, {"w": bad}, st)
    np.testing.assert_array_equal(p["w"], np.ones(3, np.float32))
    assert st.step_count == 0


def test_adam_wrapper_updates_tensors():
    t = Tensor(np.ones(4, np.float32), requires_grad=True)
    opt = Adam({"t": t}, lr=0.1)
    t.grad = np.ones(4, np.float32)
    opt.step()
    assert t.data[0] < 1.0
