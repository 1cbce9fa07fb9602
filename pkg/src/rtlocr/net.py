"""Bidirectional LSTM line recognizer: forward pass, CTC loss, BPTT updates.

The recognizer reads a line strip column by column (one timestep per pixel
column).  Each direction is a standard LSTM (gates i, f, o and candidate g, no
peepholes); the two hidden states are concatenated and projected to per-frame
class scores, softmax-normalized over the codec plus the reserved blank.

Parameters live in a flat dict of named float32 arrays; the gate rows of the
stacked weight matrices are ordered [i, f, g, o]:

    fwd.W (4S, H)   fwd.R (4S, S)   fwd.b (4S,)
    bwd.W (4S, H)   bwd.R (4S, S)   bwd.b (4S,)
    out.W (K+1, 2S) out.b (K+1,)

The CTC recursion runs in log-space float64 regardless of parameter dtype.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleTarget, ShapeMismatch, StaleCache
from .imaging import LineImage
from .script import BLANK

PARAM_INIT_SCALE = 0.1


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def init_params(hidden_size: int, line_height: int, num_classes: int, seed: int) -> dict[str, np.ndarray]:
    """Seeded uniform(-0.1, 0.1) initialization of all weights and biases.

    ``num_classes`` counts characters only; the blank row is added here.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    s, h, k1 = hidden_size, line_height, num_classes + 1

    def u(*shape):
        return rng.uniform(-PARAM_INIT_SCALE, PARAM_INIT_SCALE, shape).astype(np.float32)

    params = {}
    for d in ("fwd", "bwd"):
        params[f"{d}.W"] = u(4 * s, h)
        params[f"{d}.R"] = u(4 * s, s)
        params[f"{d}.b"] = u(4 * s)
    params["out.W"] = u(k1, 2 * s)
    params["out.b"] = u(k1)
    return params


def param_shapes(hidden_size: int, line_height: int, num_classes: int) -> dict[str, tuple[int, ...]]:
    s, h, k1 = hidden_size, line_height, num_classes + 1
    shapes: dict[str, tuple[int, ...]] = {}
    for d in ("fwd", "bwd"):
        shapes[f"{d}.W"] = (4 * s, h)
        shapes[f"{d}.R"] = (4 * s, s)
        shapes[f"{d}.b"] = (4 * s,)
    shapes["out.W"] = (k1, 2 * s)
    shapes["out.b"] = (k1,)
    return shapes


@dataclass
class ForwardCache:
    """Activations retained by :func:`forward` for the matching backward pass."""

    params_id: int
    x_stacked: np.ndarray  # (2, H, T); direction 1 time-reversed
    gates: np.ndarray  # (T, 2, 4S) post-nonlinearity, gate order i,f,g,o
    cells: np.ndarray  # (T, 2, S)
    hidden: np.ndarray  # (T, 2, S)
    hidden_cat: np.ndarray  # (2S, T) in column order
    posteriors: np.ndarray  # (T, K+1)


def forward(params: dict[str, np.ndarray], line: LineImage, want_cache: bool = False):
    """Run the recognizer over a line strip.

    Returns a (T, K+1) row-stochastic posterior matrix, or a
    ``(posteriors, cache)`` pair when ``want_cache`` is set.
    """
    s4, h = params["fwd.W"].shape
    s = s4 // 4
    if line.height != h:
        raise ShapeMismatch(f"line height {line.height} != model input height {h}")
    dtype = params["fwd.W"].dtype
    x = line.pixels.astype(dtype, copy=False)  # (H, T)
    t_len = x.shape[1]

    # direction 1 consumes the columns right-to-left
    x_stacked = np.stack([x, x[:, ::-1]])  # (2, H, T)
    r_stacked = np.stack([params["fwd.R"], params["bwd.R"]])  # (2, 4S, S)
    # input projections for every timestep in two gemms
    zx = np.stack(
        [
            params["fwd.W"] @ x + params["fwd.b"][:, None],
            params["bwd.W"] @ x[:, ::-1] + params["bwd.b"][:, None],
        ]
    )  # (2, 4S, T)

    gates = np.empty((t_len, 2, 4 * s), dtype=dtype)
    cells = np.empty((t_len, 2, s), dtype=dtype)
    hidden = np.empty((t_len, 2, s), dtype=dtype)
    h_prev = np.zeros((2, s), dtype=dtype)
    c_prev = np.zeros((2, s), dtype=dtype)
    for t in range(t_len):
        z = zx[:, :, t] + np.einsum("dks,ds->dk", r_stacked, h_prev)
        gi = _sigmoid(z[:, :s])
        gf = _sigmoid(z[:, s : 2 * s])
        gg = np.tanh(z[:, 2 * s : 3 * s])
        go = _sigmoid(z[:, 3 * s :])
        c = gf * c_prev + gi * gg
        hh = go * np.tanh(c)
        gates[t, :, :s] = gi
        gates[t, :, s : 2 * s] = gf
        gates[t, :, 2 * s : 3 * s] = gg
        gates[t, :, 3 * s :] = go
        cells[t] = c
        hidden[t] = hh
        h_prev, c_prev = hh, c

    # concatenate [fwd_t ; bwd_t] in left-to-right column order
    hidden_cat = np.empty((2 * s, t_len), dtype=dtype)
    hidden_cat[:s] = hidden[:, 0, :].T
    hidden_cat[s:] = hidden[::-1, 1, :].T

    logits = (params["out.W"] @ hidden_cat + params["out.b"][:, None]).astype(np.float64)
    logits -= logits.max(axis=0, keepdims=True)
    expl = np.exp(logits)
    posteriors = (expl / expl.sum(axis=0, keepdims=True)).T  # (T, K+1), float64

    if not want_cache:
        return posteriors
    cache = ForwardCache(id(params), x_stacked, gates, cells, hidden, hidden_cat, posteriors)
    return posteriors, cache


def _blank_augment(target: list[int]) -> np.ndarray:
    ext = np.full(2 * len(target) + 1, BLANK, dtype=np.int64)
    ext[1::2] = target
    return ext


def ctc_loss(posteriors: np.ndarray, target: list[int]):
    """Negative log-likelihood of a label sequence plus its pre-softmax gradient.

    Alpha/beta recursions over the blank-augmented target, fully in log-space
    float64.  Returns ``(loss, grad)`` with grad shaped like ``posteriors``.
    """
    t_len, k1 = posteriors.shape
    length = len(target)
    if any(not (1 <= lb <= k1 - 1) for lb in target):
        raise ShapeMismatch("target labels out of codec range")
    repeats = sum(1 for a, b in zip(target, target[1:]) if a == b)
    if t_len < length + repeats:
        raise InfeasibleTarget(f"{t_len} frames cannot emit {length} labels ({repeats} repeats)")

    with np.errstate(divide="ignore"):
        log_y = np.log(posteriors.astype(np.float64))
    ext = _blank_augment(target)
    n_ext = ext.size
    ly = log_y[:, ext]  # (T, 2L+1)

    # skip transition s-2 -> s allowed where ext[s] is a label differing from ext[s-2]
    can_skip = np.zeros(n_ext, dtype=bool)
    if n_ext > 2:
        can_skip[2:] = (ext[2:] != BLANK) & (ext[2:] != ext[:-2])

    neg_inf = -np.inf
    alpha = np.full((t_len, n_ext), neg_inf)
    alpha[0, 0] = ly[0, 0]
    if n_ext > 1:
        alpha[0, 1] = ly[0, 1]
    for t in range(1, t_len):
        prev = alpha[t - 1]
        acc = prev.copy()
        acc[1:] = np.logaddexp(acc[1:], prev[:-1])
        if n_ext > 2:
            acc[2:][can_skip[2:]] = np.logaddexp(acc[2:][can_skip[2:]], prev[:-2][can_skip[2:]])
        alpha[t] = acc + ly[t]

    beta = np.full((t_len, n_ext), neg_inf)
    beta[-1, -1] = 0.0
    if n_ext > 1:
        beta[-1, -2] = 0.0
    for t in range(t_len - 2, -1, -1):
        nxt = beta[t + 1] + ly[t + 1]
        acc = nxt.copy()
        acc[:-1] = np.logaddexp(acc[:-1], nxt[1:])
        if n_ext > 2:
            skip_from = can_skip[2:]
            acc[:-2][skip_from] = np.logaddexp(acc[:-2][skip_from], nxt[2:][skip_from])
        beta[t] = acc

    log_p = alpha[-1, -1] if n_ext == 1 else np.logaddexp(alpha[-1, -1], alpha[-1, -2])
    if not np.isfinite(log_p):
        raise InfeasibleTarget("target has zero probability under these posteriors")
    loss = -log_p

    # occupancy gamma_t(k) = sum over ext positions carrying label k
    log_occ = alpha + beta - log_p  # (T, 2L+1)
    occ = np.exp(log_occ)
    gamma = np.zeros((t_len, k1))
    np.add.at(gamma, (slice(None), ext), occ)
    grad = posteriors.astype(np.float64) - gamma
    return loss, grad


@dataclass
class Optimizer:
    """SGD with classical momentum and optional global-norm gradient clipping."""

    learning_rate: float = 1e-4
    momentum: float = 0.9
    clip_norm: float = 5.0
    velocity: dict[str, np.ndarray] = field(default_factory=dict)

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        if self.clip_norm > 0:
            total = np.sqrt(sum(float((g.astype(np.float64) ** 2).sum()) for g in grads.values()))
            if total > self.clip_norm:
                scale = self.clip_norm / total
                grads = {k: g * scale for k, g in grads.items()}
        for name, g in grads.items():
            v = self.velocity.get(name)
            if v is None:
                v = np.zeros_like(params[name])
                self.velocity[name] = v
            v *= self.momentum
            v += g.astype(params[name].dtype)
            params[name] -= self.learning_rate * v


def backward(params: dict[str, np.ndarray], cache: ForwardCache, grad_logits: np.ndarray) -> dict[str, np.ndarray]:
    """Backpropagation through time; returns gradients for every parameter.

    ``grad_logits`` is the (T, K+1) CTC gradient with respect to the
    pre-softmax scores.
    """
    if cache.params_id != id(params):
        raise StaleCache("cache does not belong to this parameter set")
    s4 = params["fwd.R"].shape[0]
    s = s4 // 4
    t_len = cache.gates.shape[0]
    dtype = params["fwd.W"].dtype
    r_stacked = np.stack([params["fwd.R"], params["bwd.R"]])

    dlog = grad_logits.astype(dtype).T  # (K+1, T)
    grads = {
        "out.W": dlog @ cache.hidden_cat.T,
        "out.b": dlog.sum(axis=1),
    }
    dh_cat = params["out.W"].T @ dlog  # (2S, T)

    # external dh per internal timestep, direction 1 re-reversed
    dh_ext = np.empty((t_len, 2, s), dtype=dtype)
    dh_ext[:, 0, :] = dh_cat[:s].T
    dh_ext[:, 1, :] = dh_cat[s:].T[::-1]

    dz_all = np.empty((t_len, 2, 4 * s), dtype=dtype)
    dh_rec = np.zeros((2, s), dtype=dtype)
    dc_rec = np.zeros((2, s), dtype=dtype)
    zeros = np.zeros((2, s), dtype=dtype)
    for t in range(t_len - 1, -1, -1):
        gi = cache.gates[t, :, :s]
        gf = cache.gates[t, :, s : 2 * s]
        gg = cache.gates[t, :, 2 * s : 3 * s]
        go = cache.gates[t, :, 3 * s :]
        c = cache.cells[t]
        c_prev = cache.cells[t - 1] if t > 0 else zeros
        tanh_c = np.tanh(c)

        dh = dh_ext[t] + dh_rec
        do = dh * tanh_c
        dc = dh * go * (1.0 - tanh_c**2) + dc_rec
        di = dc * gg
        dg = dc * gi
        df = dc * c_prev
        dc_rec = dc * gf

        dz = dz_all[t]
        dz[:, :s] = di * gi * (1.0 - gi)
        dz[:, s : 2 * s] = df * gf * (1.0 - gf)
        dz[:, 2 * s : 3 * s] = dg * (1.0 - gg**2)
        dz[:, 3 * s :] = do * go * (1.0 - go)
        dh_rec = np.einsum("dks,dk->ds", r_stacked, dz)

    h_prev = np.concatenate([np.zeros((1, 2, s), dtype=dtype), cache.hidden[:-1]])
    for i, d in enumerate(("fwd", "bwd")):
        grads[f"{d}.W"] = np.einsum("tk,ht->kh", dz_all[:, i, :], cache.x_stacked[i])
        grads[f"{d}.R"] = np.einsum("tk,ts->ks", dz_all[:, i, :], h_prev[:, i, :])
        grads[f"{d}.b"] = dz_all[:, i, :].sum(axis=0)
    return grads


def backward_update(
    params: dict[str, np.ndarray],
    cache: ForwardCache,
    grad_logits: np.ndarray,
    optimizer: Optimizer,
) -> dict[str, float]:
    """One in-place SGD-with-momentum step; returns per-parameter gradient norms."""
    grads = backward(params, cache, grad_logits)
    norms = {name: float(np.linalg.norm(g)) for name, g in grads.items()}
    optimizer.step(params, grads)
    return norms


def loss_of(params: dict[str, np.ndarray], line: LineImage, target: list[int]) -> float:
    post = forward(params, line)
    loss, _ = ctc_loss(post, target)
    return float(loss)


def gradient_check(
    params: dict[str, np.ndarray],
    line: LineImage,
    target: list[int],
    epsilon: float = 1e-4,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Runs entirely in float64; intended for tiny models only (every parameter
    costs two loss evaluations).
    """
    p64 = {k: v.astype(np.float64) for k, v in params.items()}
    post, cache = forward(p64, line, want_cache=True)
    _, grad_logits = ctc_loss(post, target)
    analytic = backward(p64, cache, grad_logits)

    worst = 0.0
    for name, arr in p64.items():
        flat = arr.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            up = loss_of(p64, line, target)
            flat[i] = orig - epsilon
            down = loss_of(p64, line, target)
            flat[i] = orig
            numeric = (up - down) / (2.0 * epsilon)
            a = analytic[name].ravel()[i]
            denom = max(abs(a), abs(numeric), 1e-6)
            worst = max(worst, abs(a - numeric) / denom)
    return worst
