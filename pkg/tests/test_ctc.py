"""CTC loss against brute-force path enumeration."""

import itertools
import math

import numpy as np
import pytest

from rtlocr.errors import InfeasibleTarget
from rtlocr.net import ctc_loss
from rtlocr.script import BLANK

from conftest import random_posteriors


def collapse(path):
    out = []
    prev = None
    for k in path:
        if k != prev and k != BLANK:
            out.append(k)
        prev = k
    return tuple(out)


def ctc_oracle(posteriors, target):
    """Sum path probabilities over every frame labeling that collapses to target."""
    t_len, k1 = posteriors.shape
    target = tuple(target)
    total = 0.0
    for path in itertools.product(range(k1), repeat=t_len):
        if collapse(path) == target:
            p = 1.0
            for t, k in enumerate(path):
                p *= posteriors[t, k]
            total += p
    return -math.log(total) if total > 0 else math.inf


class TestWorkedExamples:
    def test_single_frame(self):
        post = np.array([[0.1, 0.9]])
        loss, _ = ctc_loss(post, [1])
        assert loss == pytest.approx(-math.log(0.9), abs=1e-12)

    def test_two_frames_uniform(self):
        # paths a.a, a.blank, blank.a out of 4 -> p = 3/4
        post = np.full((2, 2), 0.5)
        loss, _ = ctc_loss(post, [1])
        assert loss == pytest.approx(-math.log(0.75), abs=1e-12)
        assert loss == pytest.approx(ctc_oracle(post, [1]), abs=1e-12)

    def test_repeat_needs_blank(self):
        # only path a.blank.a out of 8 -> p = 1/8
        post = np.full((3, 2), 0.5)
        loss, _ = ctc_loss(post, [1, 1])
        assert loss == pytest.approx(-math.log(0.125), abs=1e-12)
        assert loss == pytest.approx(2.07944, abs=1e-5)

    def test_infeasible_repeat(self):
        post = np.full((2, 2), 0.5)
        with pytest.raises(InfeasibleTarget):
            ctc_loss(post, [1, 1])

    def test_empty_target(self):
        rng = np.random.default_rng(0)
        post = random_posteriors(rng, 4, 3)
        loss, grad = ctc_loss(post, [])
        assert loss == pytest.approx(-np.log(post[:, BLANK]).sum(), abs=1e-12)
        # gradient: y - onehot(blank) at every frame
        expected = post.copy()
        expected[:, BLANK] -= 1.0
        assert np.allclose(grad, expected, atol=1e-12)


class TestOracleEquivalence:
    def test_exhaustive_small_cases(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            k = int(rng.integers(1, 4))
            t_len = int(rng.integers(1, 7))
            length = int(rng.integers(0, 4))
            target = [int(rng.integers(1, k + 1)) for _ in range(length)]
            repeats = sum(a == b for a, b in zip(target, target[1:]))
            post = random_posteriors(rng, t_len, k + 1)
            if t_len < length + repeats:
                with pytest.raises(InfeasibleTarget):
                    ctc_loss(post, target)
                continue
            loss, _ = ctc_loss(post, target)
            oracle = ctc_oracle(post, target)
            assert abs(loss - oracle) / oracle <= 1e-9

    def test_loss_nonnegative(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            post = random_posteriors(rng, 5, 3)
            loss, _ = ctc_loss(post, [1])
            assert loss >= 0.0


class TestGradientStructure:
    def test_gamma_rows_sum_to_one(self):
        # grad = y - gamma and gamma rows are distributions, so rows of grad sum to 0
        rng = np.random.default_rng(9)
        post = random_posteriors(rng, 6, 4)
        _, grad = ctc_loss(post, [1, 2, 3])
        assert np.allclose(grad.sum(axis=1), 0.0, atol=1e-12)

    def test_monotone_in_valid_path_mass(self):
        # concentrating mass on a valid path strictly decreases loss
        base = np.full((3, 2), 0.5)
        sharper = np.array([[0.1, 0.9], [0.9, 0.1], [0.1, 0.9]])  # a, blank, a
        l0, _ = ctc_loss(base, [1, 1])
        l1, _ = ctc_loss(sharper, [1, 1])
        assert l1 < l0

    def test_grad_matches_finite_difference_on_probs(self):
        # central differences on the pre-softmax parameterization
        rng = np.random.default_rng(5)
        t_len, k1 = 4, 3
        logits = rng.normal(size=(t_len, k1))

        def loss_of(lg):
            e = np.exp(lg - lg.max(axis=1, keepdims=True))
            y = e / e.sum(axis=1, keepdims=True)
            loss, _ = ctc_loss(y, [1, 2])
            return loss

        e = np.exp(logits - logits.max(axis=1, keepdims=True))
        y = e / e.sum(axis=1, keepdims=True)
        _, grad = ctc_loss(y, [1, 2])
        eps = 1e-6
        for t in range(t_len):
            for k in range(k1):
                up = logits.copy(); up[t, k] += eps
                dn = logits.copy(); dn[t, k] -= eps
                numeric = (loss_of(up) - loss_of(dn)) / (2 * eps)
                assert numeric == pytest.approx(grad[t, k], abs=1e-6)
