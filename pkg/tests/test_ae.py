import math

import numpy as np
import pytest

from gsgmi import ae
from gsgmi.constellation import ConstellationError, gen_qam
from gsgmi.gmi import NoiseSpec, gmi_gh
from gsgmi.optimizer import Constant

NZ9 = NoiseSpec(9.0)


def embedding_params(c):
    # one-hot -> [x+, x-] -> identity -> x, exact through the ReLUs
    x = c.points
    M, n = x.shape
    W1 = np.concatenate([x, -x], axis=1)
    W2 = np.eye(2 * n)
    W3 = np.concatenate([np.eye(n), -np.eye(n)], axis=0)
    return ae.MlpParams([W1, W2, W3], [np.zeros(2 * n), np.zeros(2 * n), np.zeros(n)])


def test_glorot():
    a = ae.glorot_init([16, 200, 200, 2], seed=3)
    b = ae.glorot_init([16, 200, 200, 2], seed=3)
    for x, y in zip(a.arrays(), b.arrays()):
        np.testing.assert_array_equal(x, y)
    w = a.weights[1]
    lim = math.sqrt(6 / 400)
    assert np.max(np.abs(w)) <= lim
    # uniform(-lim, lim) has std lim/sqrt(3)
    assert abs(w.mean()) <= 3 * lim / math.sqrt(3) / math.sqrt(w.size)
    assert all(np.all(bb == 0) for bb in a.biases)
    assert a.sizes == [16, 200, 200, 2]


def test_params_validation():
    with pytest.raises(ValueError):
        ae.MlpParams([np.zeros((4, 3))], [np.zeros(2)])
    with pytest.raises(ValueError):
        ae.MlpParams([np.zeros((4, 3)), np.zeros((2, 2))], [np.zeros(3), np.zeros(2)])


def test_tx_forward_embedding_and_degenerate():
    c = gen_qam(16)
    assert ae.tx_forward(embedding_params(c)) == c
    p = ae.glorot_init(ae.default_sizes(16, 2), 0)
    assert abs(ae.tx_forward(p).energy() - 1.0) <= 1e-12
    p.weights[-1][:] = 0.0
    p.biases[-1][:] = 0.0
    with pytest.raises(ConstellationError):
        ae.tx_forward(p)


def test_loss_noiseless_limit():
    p = embedding_params(gen_qam(16))
    loss, _ = ae.ae_loss_and_grad(p, NoiseSpec(40.0), 2000, np.random.default_rng(0))
    assert -4.0 <= loss <= -4.0 + 1e-3


@pytest.mark.parametrize("seed", [0, 1])
def test_backprop_matches_finite_differences(seed):
    p = ae.glorot_init([4, 8, 8, 2], seed)
    nz = NoiseSpec(5.0)

    def loss(q):
        return ae.ae_loss_and_grad(q, nz, 64, np.random.default_rng(7))[0]

    _, g = ae.ae_loss_and_grad(p, nz, 64, np.random.default_rng(7))
    h = 1e-4
    for arr, garr in zip(p.arrays(), g.arrays()):
        fd = np.zeros_like(arr)
        for idx in np.ndindex(arr.shape):
            old = arr[idx]
            arr[idx] = old + h
            up = loss(p)
            arr[idx] = old - h
            dn = loss(p)
            arr[idx] = old
            fd[idx] = (up - dn) / (2 * h)
        np.testing.assert_allclose(garr, fd, rtol=1e-4, atol=1e-9)


def test_loss_bounded_and_batch_checks():
    p = ae.glorot_init([16, 32, 32, 2], 5)
    rng = np.random.default_rng(1)
    for _ in range(5):
        loss, _ = ae.ae_loss_and_grad(p, NZ9, 100, rng)
        assert -loss <= 4.0
    with pytest.raises(ValueError):
        ae.ae_loss_and_grad(p, NZ9, 0, rng)


def test_loss_estimates_gmi():
    # posteriors are exact, so -E[loss] equals the GMI up to sampling noise
    p = ae.prefit(ae.glorot_init([16, 32, 32, 2], 2), gen_qam(16))
    rng = np.random.default_rng(4)
    vals = [-ae.ae_loss_and_grad(p, NZ9, 4000, rng)[0] for _ in range(25)]
    est = np.mean(vals)
    se = np.std(vals, ddof=1) / math.sqrt(len(vals))
    ref = gmi_gh(ae.tx_forward(p), NZ9, 48)
    assert abs(est - ref) <= 3 * se


def test_prefit():
    p0 = ae.glorot_init(ae.default_sizes(16, 2), 0)
    target = gen_qam(16)
    p = ae.prefit(p0, target)
    assert np.max(np.abs(ae.tx_forward(p).points - target.points)) < 1e-3
    # tol = inf and target = current output both return without a step
    same = ae.prefit(p0, gen_qam(16), tol=math.inf)
    for a, b in zip(same.arrays(), p0.arrays()):
        np.testing.assert_array_equal(a, b)
    fixed = ae.prefit(p0, ae.tx_forward(p0))
    for a, b in zip(fixed.arrays(), p0.arrays()):
        np.testing.assert_array_equal(a, b)
    with pytest.raises(ae.PrefitError) as err:
        ae.prefit(p0, target, max_steps=2)
    assert err.value.error > 1e-3


def test_train_zero_steps():
    p = ae.glorot_init([16, 16, 16, 2], 1)
    run = ae.ae_train(p, NZ9, ae.TrainConfig(steps=0))
    assert run.steps == [0]
    assert run.final_gmi == gmi_gh(ae.tx_forward(p), NZ9)
    assert run.final == ae.tx_forward(p)


def test_train_reproducible_and_improves():
    p = ae.glorot_init([16, 64, 64, 2], 1)
    cfg = ae.TrainConfig(steps=150, batch=200, eval_every=50, seed=9)
    a = ae.ae_train(p, NZ9, cfg)
    b = ae.ae_train(p, NZ9, cfg)
    assert a.steps == [0, 50, 100, 150]
    np.testing.assert_array_equal(a.trajectory, b.trajectory)
    np.testing.assert_array_equal(a.losses, b.losses)
    assert a.final_gmi > a.trajectory[0]
    assert a.trace_csv().splitlines()[0] == "step,gmi_bits,gmi_bits_per_2d"
    # the input params are not modified
    np.testing.assert_array_equal(p.weights[0], ae.glorot_init([16, 64, 64, 2], 1).weights[0])


def test_train_bsa_relabels_embedding():
    c = gen_qam(16)
    perm = np.arange(16)
    perm[[2, 9]] = perm[[9, 2]]
    p = embedding_params(c.permuted(perm))
    cfg = ae.TrainConfig(steps=1, batch=10, lr=1e-9, bsa_every=1, schedule=Constant(1e-9))
    run = ae.ae_train(p, NZ9, cfg)
    assert run.swaps == 1
    assert abs(run.final_gmi - gmi_gh(c, NZ9)) < 1e-6


def test_train_config_validation():
    with pytest.raises(ValueError):
        ae.TrainConfig(steps=-1)
    with pytest.raises(ValueError):
        ae.TrainConfig(batch=0)


def test_run_from_policy_prefit_starts_at_qam():
    run = ae.run_from_policy("qam", 16, 2, NZ9, ae.TrainConfig(steps=0), seed=5)
    assert abs(run.trajectory[0] - gmi_gh(gen_qam(16), NZ9)) < 5e-3
