import numpy as np
import pytest

from qrlbench.baselines.nets import (
    Mlp,
    mlp_forward,
    mlp_forward_batch,
    mlp_gradient,
    mlp_gradient_batch,
    sgd_step,
)

FD_STEP = 1e-5
FD_RTOL = 1e-4


def finite_difference_grads(net, state, upstream):
    """Central finite differences of upstream . mlp_forward across all params."""
    grads = []
    for param in net.parameters():
        grad = np.zeros_like(param)
        it = np.nditer(param, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            original = param[idx]
            param[idx] = original + FD_STEP
            plus = float(upstream @ mlp_forward(net, state))
            param[idx] = original - FD_STEP
            minus = float(upstream @ mlp_forward(net, state))
            param[idx] = original
            grad[idx] = (plus - minus) / (2 * FD_STEP)
        grads.append(grad)
    return grads


def relative_error(a, b):
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8)
    return np.abs(a - b) / scale


class TestForward:
    def test_zero_net_outputs_zero(self):
        net = Mlp(np.zeros((4, 2)), np.zeros(4), np.zeros((3, 4)), np.zeros(3), "relu")
        np.testing.assert_array_equal(mlp_forward(net, np.array([1.0, -2.0])), np.zeros(3))

    def test_hand_computed_toy(self):
        # 2 -> 1 -> 1 relu: out = 2 * relu(x0) + 1
        net = Mlp(np.array([[1.0, 0.0]]), np.zeros(1), np.array([[2.0]]), np.array([1.0]), "relu")
        assert mlp_forward(net, np.array([3.0, -1.0]))[0] == 7.0
        assert mlp_forward(net, np.array([-3.0, -1.0]))[0] == 1.0

    def test_tanh_hidden_bounded(self):
        rng = np.random.default_rng(0)
        net = Mlp.initialize(rng, hidden_activation="tanh")
        s = np.array([3.0, -3.0])
        hidden = np.tanh(net.w1 @ s + net.b1)
        assert np.all(np.abs(hidden) < 1.0)
        assert np.all(np.isfinite(mlp_forward(net, np.array([50.0, -50.0]))))

    def test_batch_matches_single(self):
        rng = np.random.default_rng(1)
        net = Mlp.initialize(rng)
        states = rng.normal(size=(6, 2))
        batch = mlp_forward_batch(net, states)
        for i, s in enumerate(states):
            np.testing.assert_allclose(batch[i], mlp_forward(net, s), atol=1e-12)

    def test_unknown_activation_rejected(self):
        with pytest.raises(ValueError):
            Mlp(np.zeros((1, 2)), np.zeros(1), np.zeros((1, 1)), np.zeros(1), "sigmoid")


class TestGradient:
    def test_zero_upstream(self):
        rng = np.random.default_rng(2)
        net = Mlp.initialize(rng)
        grads = mlp_gradient(net, rng.normal(size=2), np.zeros(4))
        for g in grads.arrays():
            np.testing.assert_array_equal(g, np.zeros_like(g))

    def test_dead_relu_blocks_gradient(self):
        # single hidden unit with negative preactivation: no gradient reaches w1
        net = Mlp(np.array([[1.0, 0.0]]), np.array([-10.0]), np.array([[3.0]]),
                  np.zeros(1), "relu")
        grads = mlp_gradient(net, np.array([1.0, 1.0]), np.array([1.0]))
        np.testing.assert_array_equal(grads.w1, np.zeros_like(grads.w1))
        np.testing.assert_array_equal(grads.b1, np.zeros_like(grads.b1))
        # output bias still learns
        np.testing.assert_array_equal(grads.b2, np.array([1.0]))

    @pytest.mark.parametrize("activation", ["relu", "tanh"])
    def test_matches_finite_differences(self, activation):
        rng = np.random.default_rng(7)
        for _ in range(10):
            net = Mlp.initialize(rng, hidden_dim=8, out_dim=3, hidden_activation=activation)
            state = rng.normal(size=2)
            upstream = rng.normal(size=3)
            analytic = mlp_gradient(net, state, upstream)
            numeric = finite_difference_grads(net, state, upstream)
            for got, expected in zip(analytic.arrays(), numeric):
                assert np.max(relative_error(got, expected)) < FD_RTOL

    def test_batch_gradient_sums_samples(self):
        rng = np.random.default_rng(8)
        net = Mlp.initialize(rng, hidden_dim=5, out_dim=2)
        states = rng.normal(size=(4, 2))
        upstream = rng.normal(size=(4, 2))
        batch = mlp_gradient_batch(net, states, upstream)
        summed = [np.zeros_like(g) for g in batch.arrays()]
        for s, u in zip(states, upstream):
            for total, g in zip(summed, mlp_gradient(net, s, u).arrays()):
                total += g
        for got, expected in zip(batch.arrays(), summed):
            np.testing.assert_allclose(got, expected, atol=1e-10)


class TestSgdStep:
    def test_descends(self):
        rng = np.random.default_rng(9)
        net = Mlp.initialize(rng, hidden_dim=4, out_dim=1)
        before = net.w2.copy()
        grads = mlp_gradient(net, np.array([0.3, 0.4]), np.array([1.0]))
        sgd_step(net, grads, lr=0.5)
        np.testing.assert_allclose(net.w2, before - 0.5 * grads.w2, atol=1e-12)

    def test_copy_is_independent(self):
        rng = np.random.default_rng(10)
        net = Mlp.initialize(rng)
        clone = net.copy()
        net.w1 += 1.0
        assert np.all(clone.w1 != net.w1)
