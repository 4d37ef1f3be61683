"""Autoencoder baseline: one-hot input -> MLP transmitter -> AWGN -> exact posteriors.

The transmitter is an MLP ``M -> 200 -> 200 -> N`` (ReLU hidden layers, linear
output) whose ``M`` outputs, energy-normalized together, form the
constellation. No receiver network is trained: the bit-wise posteriors are
computed in closed form from the known channel law, and the per-sample loss is
``-m - sum_i log2 P(b_i | y)``. Gradients are backpropagated by hand.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from gsgmi.constellation import Constellation, label_bits, normalize
from gsgmi.gmi import LN2, gmi_gh
from gsgmi.optimizer import Adam, Constant, bsa_perm, lr_at, make_init

HIDDEN = (200, 200)


class PrefitError(RuntimeError):
    """Prefit did not reach the requested tolerance."""

    def __init__(self, error, params):
        super().__init__(f"prefit did not converge: max coordinate error {error:.3e}")
        self.error = error
        self.params = params


@dataclass
class MlpParams:
    weights: list
    biases: list

    @property
    def sizes(self):
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def copy(self):
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def arrays(self):
        return self.weights + self.biases

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias per weight matrix")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"layer {i}: weight {w.shape} / bias {b.shape} mismatch")
            if i and w.shape[0] != self.weights[i - 1].shape[1]:
                raise ValueError(f"layer {i} input size does not match previous layer")


def glorot_init(sizes, seed=None):
    """Glorot-uniform weights, zero biases."""
    rng = np.random.default_rng(seed)
    ws, bs = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        lim = math.sqrt(6.0 / (fan_in + fan_out))
        ws.append(rng.uniform(-lim, lim, size=(fan_in, fan_out)))
        bs.append(np.zeros(fan_out))
    return MlpParams(ws, bs)


def default_sizes(M, n):
    return [M, *HIDDEN, n]


def _forward(params):
    # the input batch is the identity: row r is the one-hot vector of label r
    h = np.eye(params.sizes[0])
    acts = [h]
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        h = h @ w + b
        if i < last:
            h = np.maximum(h, 0.0)
        acts.append(h)
    return h, acts


def _backward(params, acts, dout):
    gw = [None] * len(params.weights)
    gb = [None] * len(params.weights)
    d = dout
    for i in range(len(params.weights) - 1, -1, -1):
        gw[i] = acts[i].T @ d
        gb[i] = d.sum(axis=0)
        if i:
            d = (d @ params.weights[i].T) * (acts[i] > 0)
    return MlpParams(gw, gb)


def _norm_backward(u, x, gx):
    # x = alpha(u) u with alpha = sqrt(N M / 2 / |u|^2)
    alpha = math.sqrt(float(np.sum(x * x)) / float(np.sum(u * u)))
    return alpha * (gx - x * (np.sum(x * gx) / np.sum(x * x)))


def tx_forward(params):
    """Constellation produced by the transmitter for all ``M`` labels."""
    u, _ = _forward(params)
    return Constellation.from_points(u)


def _batch_loss_grad(x, labels, z, noise):
    """Mean loss over the batch and its gradient w.r.t. the normalized points."""
    M = x.shape[0]
    bits = label_bits(M).astype(float)
    m = bits.shape[1]
    s2 = noise.variance
    y = x[labels] + noise.sigma * z
    d = y[:, None, :] - x[None, :, :]
    L = -np.einsum("kjn,kjn->kj", d, d) / (2.0 * s2)
    L -= L.max(axis=1, keepdims=True)
    E = np.exp(L)
    tot = E.sum(axis=1)
    bl = bits[labels]
    S_own = np.where(bl == 1.0, E @ bits, E @ (1.0 - bits))
    F = m * np.log(tot) - np.log(S_own).sum(axis=1)
    loss = float(np.mean(-m + F / LN2))
    # dF/dlog p(y|x_j) = E_j (m / tot - sum_i [b_ji == b_i] / S_own_i)
    r = 1.0 / S_own
    match = (r * (1.0 - bl)).sum(axis=1)[:, None] + (r * (2.0 * bl - 1.0)) @ bits.T
    C = E * (m / tot[:, None] - match)
    gy = (C @ x) / s2
    gx = (C.T @ y - C.sum(axis=0)[:, None] * x) / s2
    np.add.at(gx, labels, gy)
    gx /= len(labels) * LN2
    return loss, gx


def ae_loss_and_grad(params, noise, K, rng):
    """Batch loss ``mean(-m - sum_i log2 P(b_i|y))`` and its gradient.

    Draws ``K`` uniform labels and then ``K x N`` standard normals from ``rng``.
    """
    if K < 1:
        raise ValueError("batch size must be >= 1")
    u, acts = _forward(params)
    x = normalize(u)
    M, n = x.shape
    labels = rng.integers(0, M, size=K)
    z = rng.standard_normal((K, n))
    loss, gx = _batch_loss_grad(x, labels, z, noise)
    return loss, _backward(params, acts, _norm_backward(u, x, gx))


def prefit(params, target, tol=1e-3, max_steps=20000, lr=0.01):
    """Fit the transmitter output to ``target`` by Adam on the mean squared error."""
    params = params.copy()
    t = target.points
    adam = Adam()
    err = np.inf
    for _ in range(max_steps + 1):
        u, acts = _forward(params)
        x = normalize(u)
        err = float(np.max(np.abs(x - t)))
        if err < tol:
            return params
        gx = 2.0 * (x - t) / x.size
        grads = _backward(params, acts, _norm_backward(u, x, gx))
        deltas = adam.step(grads.arrays(), lr)
        for p, dlt in zip(params.arrays(), deltas):
            p -= dlt
    raise PrefitError(err, params)


@dataclass
class TrainConfig:
    steps: int = 2000
    batch: int = 480
    lr: float = 1e-3
    schedule: object = None
    bsa_every: int = 0
    seed: int = 0
    quad_nodes: int = None
    eval_every: int = 200

    def __post_init__(self):
        if self.steps < 0 or self.batch < 1:
            raise ValueError("need steps >= 0 and batch >= 1")


@dataclass
class AeRun:
    params: MlpParams
    final: Constellation
    steps: list  # steps at which the GMI was evaluated
    trajectory: list  # quadrature GMI at those steps
    losses: np.ndarray
    snr_db: float
    wall_time: float = 0.0
    swaps: int = 0
    config: dict = field(default_factory=dict)

    @property
    def final_gmi(self):
        return float(self.trajectory[-1])

    def trace_csv(self):
        n = self.final.n
        lines = ["step,gmi_bits,gmi_bits_per_2d"]
        for s, g in zip(self.steps, self.trajectory):
            lines.append(f"{s},{g!r},{g * 2.0 / n!r}")
        return "\n".join(lines) + "\n"


def ae_train(init, noise, cfg=None):
    """Train the transmitter with Adam on the exact-posterior loss."""
    cfg = TrainConfig() if cfg is None else cfg
    t0 = time.perf_counter()
    params = init.copy()
    rng = np.random.default_rng(cfg.seed)
    adam = Adam()
    sched = Constant(cfg.lr) if cfg.schedule is None else cfg.schedule
    steps, traj, losses = [], [], []
    swaps = 0

    def record(step):
        steps.append(step)
        traj.append(gmi_gh(tx_forward(params), noise, cfg.quad_nodes))

    record(0)
    for step in range(1, cfg.steps + 1):
        loss, grads = ae_loss_and_grad(params, noise, cfg.batch, rng)
        losses.append(loss)
        # ascent on -loss
        deltas = adam.step([-g for g in grads.arrays()], lr_at(sched, step - 1))
        for p, dlt in zip(params.arrays(), deltas):
            p += dlt
        if cfg.bsa_every and step % cfg.bsa_every == 0:
            perm, _ = bsa_perm(tx_forward(params), noise, cfg.quad_nodes)
            if np.any(perm != np.arange(len(perm))):
                # label r now drives the hidden units that produced old point perm[r]
                params.weights[0] = params.weights[0][perm]
                adam.reset()
                swaps += 1
        if cfg.eval_every and step % cfg.eval_every == 0 and step != cfg.steps:
            record(step)
    if cfg.steps:
        record(cfg.steps)
    return AeRun(
        params=params,
        final=tx_forward(params),
        steps=steps,
        trajectory=traj,
        losses=np.array(losses),
        snr_db=noise.snr_db,
        wall_time=time.perf_counter() - t0,
        swaps=swaps,
        config=dict(vars(cfg), schedule=repr(cfg.schedule)),
    )


def run_from_policy(policy, M, n, noise, cfg, seed):
    """One restart: Glorot init (``random``) or Glorot + prefit to QAM/APSK."""
    cfg = TrainConfig() if cfg is None else cfg
    init_seed, train_seed = np.random.SeedSequence(seed).spawn(2)
    params = glorot_init(default_sizes(M, n), np.random.default_rng(init_seed))
    if policy != "random":
        params = prefit(params, make_init(policy, M, n, seed))
    run_cfg = TrainConfig(**{**vars(cfg), "seed": int(train_seed.generate_state(1)[0])})
    return ae_train(params, noise, run_cfg)

