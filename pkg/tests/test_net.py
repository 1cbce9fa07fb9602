import numpy as np
import pytest

from rtlocr import net
from rtlocr.errors import ShapeMismatch, StaleCache
from rtlocr.imaging import LineImage

from conftest import random_posteriors


def tiny_line(rng, height=8, width=10):
    return LineImage(rng.random((height, width)).astype(np.float32))


def tiny_params(seed=0, s=4, h=8, k=3):
    return net.init_params(s, h, k, seed)


class TestForward:
    def test_zero_weights_uniform(self):
        params = {k: np.zeros_like(v) for k, v in tiny_params().items()}
        rng = np.random.default_rng(0)
        post = net.forward(params, tiny_line(rng))
        assert np.allclose(post, 1.0 / post.shape[1], atol=1e-12)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(1)
        for seed in range(5):
            params = tiny_params(seed)
            post = net.forward(params, tiny_line(rng))
            assert np.abs(post.sum(axis=1) - 1.0).max() <= 1e-9
            assert (post > 0).all() and (post < 1).all()

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        line = tiny_line(rng)
        params = tiny_params(7)
        a = net.forward(params, line)
        b = net.forward(params, line)
        assert np.array_equal(a, b)

    def test_t_equals_width(self):
        rng = np.random.default_rng(3)
        line = tiny_line(rng, width=17)
        assert net.forward(tiny_params(), line).shape[0] == 17

    def test_height_mismatch(self):
        rng = np.random.default_rng(4)
        with pytest.raises(ShapeMismatch):
            net.forward(tiny_params(), tiny_line(rng, height=9))


class TestBackwardUpdate:
    def test_zero_gradient_no_change(self):
        rng = np.random.default_rng(5)
        line = tiny_line(rng)
        params = tiny_params(1)
        before = {k: v.copy() for k, v in params.items()}
        post, cache = net.forward(params, line, want_cache=True)
        opt = net.Optimizer(learning_rate=0.1, momentum=0.9)
        net.backward_update(params, cache, np.zeros_like(post), opt)
        for k in params:
            assert np.array_equal(params[k], before[k])
        assert all(np.all(v == 0) for v in opt.velocity.values())

    def test_momentum_zero_is_plain_sgd(self):
        rng = np.random.default_rng(6)
        line = tiny_line(rng)
        params = tiny_params(2)
        before = {k: v.copy() for k, v in params.items()}
        post, cache = net.forward(params, line, want_cache=True)
        _, grad = net.ctc_loss(post, [1, 2])
        grads = net.backward(params, cache, grad)
        lr = 1e-3
        opt = net.Optimizer(learning_rate=lr, momentum=0.0, clip_norm=0.0)
        net.backward_update(params, cache, grad, opt)
        for k in params:
            assert np.allclose(params[k], before[k] - lr * grads[k].astype(np.float32), atol=1e-7)

    def test_stale_cache_rejected(self):
        rng = np.random.default_rng(7)
        line = tiny_line(rng)
        params = tiny_params(3)
        post, cache = net.forward(params, line, want_cache=True)
        other = tiny_params(4)
        with pytest.raises(StaleCache):
            net.backward(other, cache, np.zeros_like(post))

    def test_single_step_decreases_loss(self):
        rng = np.random.default_rng(8)
        line = tiny_line(rng, width=12)
        params = tiny_params(5)
        target = [1, 2, 1]
        post, cache = net.forward(params, line, want_cache=True)
        loss0, grad = net.ctc_loss(post, target)
        opt = net.Optimizer(learning_rate=1e-2, momentum=0.0)
        net.backward_update(params, cache, grad, opt)
        loss1, _ = net.ctc_loss(net.forward(params, line), target)
        assert loss1 < loss0


class TestGradientCheck:
    def test_tiny_model(self):
        rng = np.random.default_rng(1)
        params = tiny_params(1)
        err = net.gradient_check(params, tiny_line(rng, width=10), [1, 2, 1])
        assert err <= 1e-5

    def test_zero_input_empty_target(self):
        params = tiny_params(1)
        line = LineImage(np.full((8, 6), 1e-6, dtype=np.float32))
        err = net.gradient_check(params, line, [])
        assert err <= 1e-5

    def test_negative_control_detects_corruption(self):
        # flip the sign of one analytic gradient: harness must notice
        rng = np.random.default_rng(2)
        line = tiny_line(rng, width=8)
        params = tiny_params(2)
        p64 = {k: v.astype(np.float64) for k, v in params.items()}
        post, cache = net.forward(p64, line, want_cache=True)
        _, grad_logits = net.ctc_loss(post, [1])
        analytic = net.backward(p64, cache, grad_logits)
        corrupted = {k: (-v if k == "out.b" else v) for k, v in analytic.items()}
        worst = 0.0
        eps = 1e-4
        flat = p64["out.b"].ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            up = net.loss_of(p64, line, [1])
            flat[i] = orig - eps
            down = net.loss_of(p64, line, [1])
            flat[i] = orig
            numeric = (up - down) / (2 * eps)
            a = corrupted["out.b"].ravel()[i]
            worst = max(worst, abs(a - numeric) / max(abs(a), abs(numeric), 1e-6))
        assert worst > 1e-2


class TestInit:
    def test_seeded_and_bounded(self):
        a = tiny_params(9)
        b = tiny_params(9)
        c = tiny_params(10)
        for k in a:
            assert np.array_equal(a[k], b[k])
            assert np.abs(a[k]).max() <= net.PARAM_INIT_SCALE
        assert any(not np.array_equal(a[k], c[k]) for k in a)
