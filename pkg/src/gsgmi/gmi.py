"""Generalized mutual information of labeled constellations over the AWGN channel.

The GMI of a constellation ``X`` with labels ``b_k`` is::

    GMI = m - 1/M sum_k sum_i E_z[ log2( sum_{x in X} p(y|x) / sum_{x in X_i,b_ki} p(y|x) ) ]

with ``y = x_k + z`` and ``z ~ N(0, sigma^2 I_N)``. The expectation over ``z`` is
taken with a tensor-product Gauss-Hermite rule (deterministic, differentiable)
or by Monte Carlo sampling (unbiased, used as a cross-check).

Noise convention: ``sigma^2 = 10^(-snr_db/10) / 2`` per real dimension, and
constellations carry mean energy ``N/2``, so SNR is energy per 2D over noise
per 2D for every ``N``.
"""

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.special import logsumexp

from gsgmi.constellation import Constellation, label_bits

LN2 = math.log(2.0)

# default Gauss-Hermite nodes per dimension, keyed by N
_DEFAULT_NODES = {1: 24, 2: 12, 3: 10, 4: 8}


def default_nodes(n):
    return _DEFAULT_NODES.get(n, 6)


@dataclass(frozen=True)
class NoiseSpec:
    """AWGN level given as SNR in dB (energy per 2D over noise per 2D)."""

    snr_db: float

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db!r}")

    @property
    def sigma(self):
        return math.sqrt(0.5 * 10.0 ** (-self.snr_db / 10.0))

    @property
    def variance(self):
        return 0.5 * 10.0 ** (-self.snr_db / 10.0)

    @classmethod
    def from_sigma(cls, sigma):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        return cls(-10.0 * math.log10(2.0 * sigma * sigma))


@dataclass(frozen=True, eq=False)
class GhGrid:
    """Physicists' Gauss-Hermite rule (weight ``exp(-t^2)``) and its tensor power."""

    J: int
    nodes: np.ndarray
    weights: np.ndarray
    n: int = 1

    def tensor(self, n=None):
        """Nodes ``(J^n, n)`` and weights ``(J^n,)`` normalized to sum to one."""
        n = self.n if n is None else n
        grids = np.meshgrid(*([self.nodes] * n), indexing="ij")
        wgrids = np.meshgrid(*([self.weights] * n), indexing="ij")
        T = np.stack([g.ravel() for g in grids], axis=1)
        W = np.prod(np.stack([w.ravel() for w in wgrids], axis=1), axis=1) / np.pi ** (n / 2)
        return T, W


def gh_nodes(J, n=1):
    """Gauss-Hermite nodes and weights for ``int f(t) exp(-t^2) dt``, ``1 <= J <= 64``."""
    if not isinstance(J, (int, np.integer)) or not 1 <= J <= 64:
        raise ValueError(f"node count must be in [1, 64], got {J!r}")
    t, w = np.polynomial.hermite.hermgauss(int(J))
    # enforce exact symmetry of the rule
    t = 0.5 * (t - t[::-1])
    w = 0.5 * (w + w[::-1])
    return GhGrid(int(J), t, w, n)


_LOG2E = 1.4426950408889634
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_ROUND = 6755399441055744.0  # 1.5 * 2^52


@numba.njit(cache=True)
def _exp_inplace(buf, tbuf, ibuf):
    # exp(buf) in place, branch-free so the loops vectorize; <= 2 ulp from libm.
    # Inputs are clamped at -600: those terms are < e^-600 relative to the
    # transmitted point's own term, which every partial sum contains.
    n = buf.shape[0]
    for j in range(n):
        x = max(buf[j], -600.0)
        t = x * _LOG2E + _ROUND
        k = t - _ROUND
        r = (x - k * _LN2_HI) - k * _LN2_LO
        p = 1.0 / 479001600.0
        p = p * r + 1.0 / 39916800.0
        p = p * r + 1.0 / 3628800.0
        p = p * r + 1.0 / 362880.0
        p = p * r + 1.0 / 40320.0
        p = p * r + 1.0 / 5040.0
        p = p * r + 1.0 / 720.0
        p = p * r + 1.0 / 120.0
        p = p * r + 1.0 / 24.0
        p = p * r + 1.0 / 6.0
        p = p * r + 0.5
        p = p * r + 1.0
        p = p * r + 1.0
        buf[j] = p
        tbuf[j] = t
    # the low mantissa bits of t hold round(x / ln2); build 2^k from them
    ti = tbuf.view(np.int64)
    for j in range(n):
        ibuf[j] = (ti[j] + 1023) << 52
    scale = ibuf.view(np.float64)
    for j in range(n):
        buf[j] *= scale[j]


@numba.njit(cache=True)
def _gh_kernel(A, P, W, m, want_grad):
    # A[k, j] = -|x_k - x_j|^2 / (2 s^2), P[q, j] = sqrt(2)/s * t_q . x_j, so
    # log p(y_kq | x_j) - log p(y_kq | x_k) = A[k, j] + P[q, j] - P[q, k] <= |t_q|^2
    M = A.shape[0]
    Q = P.shape[0]
    F = np.zeros(M)
    # R[k, j] = sum_q, S[q, j] = sum_k of W_q * dF_kq / dlog p(y_kq | x_j)
    if want_grad:
        R = np.zeros((M, M))
        S = np.zeros((Q, M))
    else:
        R = np.zeros((1, 1))
        S = np.zeros((1, 1))
    buf = np.empty(M)
    tbuf = np.empty(M)
    ibuf = np.empty(M, dtype=np.int64)
    lvl_a = np.empty(M // 2)
    lvl_b = np.empty(M // 2)
    sown = np.empty(m)
    gtab = np.empty(M)
    for k in range(M):
        acc = 0.0
        for q in range(Q):
            pk = P[q, k]
            for j in range(M):
                buf[j] = A[k, j] + P[q, j] - pk
            _exp_inplace(buf, tbuf, ibuf)
            # halving tree: at width n the two halves differ in label bit n/2
            src = buf
            n = M
            for p in range(m - 1, -1, -1):
                dst = lvl_a if p % 2 == 0 else lvl_b
                half = n // 2
                s0 = 0.0
                s1 = 0.0
                for i in range(half):
                    a = src[i]
                    b = src[i + half]
                    s0 += a
                    s1 += b
                    dst[i] = a + b
                sown[p] = s1 if (k >> p) & 1 else s0
                src = dst
                n = half
            tot = src[0]
            f = m * math.log(tot)
            for p in range(m):
                f -= math.log(sown[p])
            acc += W[q] * f
            if want_grad:
                # gtab[j] = sum_p [bit_p(j) == bit_p(k)] / sown[p], built by doubling
                base = 0.0
                for p in range(m):
                    if not (k >> p) & 1:
                        base += 1.0 / sown[p]
                gtab[0] = base
                for p in range(m):
                    w = 1 << p
                    step = 1.0 / sown[p] if (k >> p) & 1 else -1.0 / sown[p]
                    for j in range(w):
                        gtab[w + j] = gtab[j] + step
                mt = m / tot
                wq = W[q]
                rk = R[k]
                sq = S[q]
                for j in range(M):
                    c = wq * buf[j] * (mt - gtab[j])
                    rk[j] += c
                    sq[j] += c
        F[k] = acc
    return F, R, S


def _pairwise_sqdist(x):
    d = x[:, None, :] - x[None, :, :]
    return np.einsum("kjn,kjn->kj", d, d)


def _as_points(c):
    if isinstance(c, Constellation):
        return c.points
    x = np.asarray(c, dtype=float)
    if x.ndim != 2:
        raise ValueError("points must be an M x N matrix")
    return x


def _check_J(J, n):
    J = default_nodes(n) if J is None else J
    if not isinstance(J, (int, np.integer)) or J < 2:
        raise ValueError(f"quadrature needs J >= 2 nodes per dimension, got {J!r}")
    return int(J)


def _gh_eval(x, noise, J, want_grad):
    M, n = x.shape
    m = M.bit_length() - 1
    if M < 2 or (1 << m) != M:
        raise ValueError(f"M must be a power of two >= 2, got {M}")
    J = _check_J(J, n)
    T, W = gh_nodes(J).tensor(n)
    s2 = noise.variance
    A = -_pairwise_sqdist(x) / (2.0 * s2)
    P = (math.sqrt(2.0 / s2)) * (T @ x.T)
    F, R, S = _gh_kernel(np.ascontiguousarray(A), np.ascontiguousarray(P), W, m, want_grad)
    gmi = m - math.fsum(F) / (M * LN2)
    if not want_grad:
        return gmi, None
    s = math.sqrt(2.0 * s2)
    G = R @ x + R.T @ x + s * (S.T @ T) - R.sum(axis=0)[:, None] * x
    G *= -1.0 / (M * LN2 * s2)
    return gmi, G


def gmi_gh(c, noise, J=None):
    """GMI in bits per N-dimensional symbol via tensor Gauss-Hermite quadrature.

    ``J`` defaults to 12 nodes per dimension for N=2 and 8 for N=4.
    """
    x = _as_points(c)
    if not isinstance(c, Constellation):
        x = _normalize(x)
    return _gh_eval(x, noise, J, False)[0]


def _normalize(u):
    e = float(np.sum(u * u))
    if e == 0.0:
        raise ValueError("cannot normalize an all-zero constellation")
    return u * math.sqrt(0.5 * u.shape[1] * u.shape[0] / e)


def gmi_and_gradient(points, noise, J=None):
    """GMI of ``normalize(points)`` and its gradient w.r.t. the raw ``points``.

    The gradient includes the chain rule through the energy normalization, so
    it is orthogonal to ``points`` (scaling never changes the GMI).
    """
    u = _as_points(points)
    x = _normalize(u)
    gmi, G = _gh_eval(x, noise, J, True)
    alpha = math.sqrt(float(np.sum(x * x)) / float(np.sum(u * u)))
    G = alpha * (G - x * (np.sum(x * G) / np.sum(x * x)))
    return gmi, G


def gmi_gradient(c, noise, J=None):
    """Gradient of :func:`gmi_gh` w.r.t. the unnormalized coordinates."""
    return gmi_and_gradient(c, noise, J)[1]


def _bit_masks(M):
    return label_bits(M).astype(bool)


def _loglik(y, x, noise):
    d = y[:, None, :] - x[None, :, :]
    return -np.einsum("kjn,kjn->kj", d, d) / (2.0 * noise.variance)


def bitwise_posteriors(c, y, noise):
    """Exact posteriors ``P(B_i = 1 | y)`` for one observation or a batch.

    ``y`` of shape ``(N,)`` gives ``(m,)``; shape ``(K, N)`` gives ``(K, m)``.
    """
    x = _as_points(c)
    y = np.asarray(y, dtype=float)
    single = y.ndim == 1
    y2 = np.atleast_2d(y)
    if not np.all(np.isfinite(y2)):
        raise ValueError("observation must be finite")
    L = _loglik(y2, x, noise)
    lse_all = logsumexp(L, axis=1)
    bits = _bit_masks(x.shape[0])
    out = np.empty((y2.shape[0], bits.shape[1]))
    for i in range(bits.shape[1]):
        lse1 = logsumexp(np.where(bits[:, i][None, :], L, -np.inf), axis=1)
        out[:, i] = np.exp(lse1 - lse_all)
    return out[0] if single else out


def _mc_values(x, labels, y, noise):
    # per-sample m + sum_i log2 P(b_i | y)
    L = _loglik(y, x, noise)
    lse_all = logsumexp(L, axis=1)
    bits = _bit_masks(x.shape[0])
    m = bits.shape[1]
    val = np.full(len(labels), float(m))
    for i in range(m):
        own = bits[:, i][None, :] == bits[labels, i][:, None]
        val -= (lse_all - logsumexp(np.where(own, L, -np.inf), axis=1)) / LN2
    return val


def gmi_mc(c, noise, samples=10**6, seed=0, chunk=50_000):
    """Monte Carlo GMI estimate and its standard error (bits per symbol)."""
    if samples < 1000:
        raise ValueError("Monte Carlo GMI needs at least 1000 samples")
    x = _as_points(c)
    M, n = x.shape
    rng = np.random.default_rng(seed)
    vals = np.empty(samples)
    sigma = noise.sigma
    for start in range(0, samples, chunk):
        k = min(chunk, samples - start)
        labels = rng.integers(0, M, size=k)
        y = x[labels] + sigma * rng.standard_normal((k, n))
        vals[start:start + k] = _mc_values(x, labels, y, noise)
    est = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return est, stderr
