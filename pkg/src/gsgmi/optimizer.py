"""GMI maximization by gradient ascent directly on constellation coordinates.

The transmitter "network" here has no hidden layers: its weights are the
constellation coordinates themselves. Each iteration evaluates the quadrature
GMI and its exact gradient and takes one Adam step. Also provides learning-rate
schedules, the binary switching algorithm (BSA) for relabeling, and a
multi-restart harness that summarizes final GMIs as an empirical CDF.
"""

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from gsgmi.constellation import (
    Constellation,
    gen_apsk,
    gen_qam,
    label_bits,
    product4d,
    random_constellation,
)
from gsgmi.gmi import LN2, _check_J, gh_nodes, gmi_and_gradient, gmi_gh

log = logging.getLogger(__name__)


# -- Adam -------------------------------------------------------------------


class Adam:
    """Adam with bias correction; :meth:`step` returns the ascent delta.

    ``grad`` may be a single array or a list of arrays (one moment pair each).
    """

    def __init__(self, beta1=0.9, beta2=0.999, eps=1e-8):
        if not (0 <= beta1 < 1 and 0 <= beta2 < 1) or eps <= 0:
            raise ValueError("need 0 <= beta1, beta2 < 1 and eps > 0")
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.reset()

    def reset(self):
        self.t = 0
        self.m = None
        self.v = None

    def step(self, grad, lr):
        single = isinstance(grad, np.ndarray)
        grads = [grad] if single else list(grad)
        if self.m is None:
            self.m = [np.zeros_like(g, dtype=float) for g in grads]
            self.v = [np.zeros_like(g, dtype=float) for g in grads]
        if len(grads) != len(self.m) or any(
            g.shape != m.shape for g, m in zip(grads, self.m)
        ):
            raise ValueError("gradient shapes do not match the optimizer state")
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        deltas = []
        for g, m, v in zip(grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            denom = v * (1.0 / bc2)
            np.sqrt(denom, out=denom)
            denom += self.eps
            delta = m * (lr / bc1)
            delta /= denom
            deltas.append(delta)
        return deltas[0] if single else deltas


# -- learning-rate schedules -------------------------------------------------


@dataclass(frozen=True)
class Constant:
    lr: float = 1e-3


@dataclass(frozen=True)
class Triangular:
    """Linear ramp lr_min -> lr_max -> lr_min over each period."""

    lr_min: float
    lr_max: float
    period: int


@dataclass(frozen=True)
class CosineRestarts:
    """Cosine annealing from lr_max to 0, restarting; windows grow by ``mult``."""

    lr_max: float
    period: int
    mult: float = 1.0


def lr_at(schedule, step):
    if step < 0:
        raise ValueError("step must be non-negative")
    if isinstance(schedule, (int, float)):
        return float(schedule)
    if isinstance(schedule, Constant):
        return schedule.lr
    if isinstance(schedule, Triangular):
        frac = (step % schedule.period) / schedule.period
        return schedule.lr_min + (schedule.lr_max - schedule.lr_min) * (1.0 - abs(2.0 * frac - 1.0))
    if isinstance(schedule, CosineRestarts):
        T = float(schedule.period)
        t = float(step)
        while t >= T:
            t -= T
            T *= schedule.mult
        return 0.5 * schedule.lr_max * (1.0 + math.cos(math.pi * t / T))
    raise TypeError(f"unknown schedule {schedule!r}")


def parse_schedule(text, lr):
    """``constant`` | ``tri:LO:HI:PERIOD`` | ``cos:HI:PERIOD[:MULT]``."""
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind in ("constant", "const"):
            return Constant(float(parts[1]) if len(parts) > 1 else lr)
        if kind in ("tri", "triangular"):
            return Triangular(float(parts[1]), float(parts[2]), int(parts[3]))
        if kind in ("cos", "cosine"):
            mult = float(parts[3]) if len(parts) > 3 else 1.0
            return CosineRestarts(float(parts[1]), int(parts[2]), mult)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad schedule {text!r}: {exc}") from exc
    raise ValueError(f"unknown schedule kind {kind!r}")


def schedule_to_str(schedule):
    if isinstance(schedule, Constant):
        return f"constant:{schedule.lr!r}"
    if isinstance(schedule, Triangular):
        return f"tri:{schedule.lr_min!r}:{schedule.lr_max!r}:{schedule.period}"
    if isinstance(schedule, CosineRestarts):
        return f"cos:{schedule.lr_max!r}:{schedule.period}:{schedule.mult!r}"
    return repr(schedule)


# -- direct optimization ------------------------------------------------------


@dataclass
class OptConfig:
    iterations: int = 1000
    lr: float = 5e-4
    schedule: object = None
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    quad_nodes: int = None
    seed: int = 0
    bsa_every: int = 0

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not self.lr > 0:
            raise ValueError("lr must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1) or self.eps <= 0:
            raise ValueError("invalid Adam parameters")

    @property
    def lr_schedule(self):
        return Constant(self.lr) if self.schedule is None else self.schedule

    def to_dict(self):
        d = asdict(self)
        d["schedule"] = schedule_to_str(self.lr_schedule)
        return d


@dataclass
class OptRun:
    initial: Constellation
    final: Constellation
    trajectory: np.ndarray
    snr_db: float
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def initial_gmi(self):
        return float(self.trajectory[0])

    @property
    def final_gmi(self):
        return float(self.trajectory[-1])

    def trace_csv(self):
        n = self.final.n
        lines = ["iteration,gmi_bits,gmi_bits_per_2d"]
        for i, g in enumerate(self.trajectory):
            lines.append(f"{i},{g!r},{g * 2.0 / n!r}")
        return "\n".join(lines) + "\n"


def optimize_direct(init, noise, cfg=None, callback=None):
    """Adam ascent on the raw coordinates of ``init``.

    ``trajectory[i]`` is the GMI after ``i`` steps; ``trajectory[-1]`` is the
    GMI of the returned (normalized) constellation.
    """
    cfg = OptConfig() if cfg is None else cfg
    J = _check_J(cfg.quad_nodes, init.n)
    t0 = time.perf_counter()
    u = np.array(init.points, dtype=float)
    adam = Adam(cfg.beta1, cfg.beta2, cfg.eps)
    sched = cfg.lr_schedule
    traj = []
    for it in range(cfg.iterations):
        g, grad = gmi_and_gradient(u, noise, J)
        traj.append(g)
        u = u + adam.step(grad, lr_at(sched, it))
        if cfg.bsa_every and (it + 1) % cfg.bsa_every == 0:
            perm, _ = bsa_perm(Constellation.from_points(u), noise, J)
            if np.any(perm != np.arange(len(perm))):
                u = u[perm]
                adam.reset()
        if callback is not None:
            callback(it, g)
    final = Constellation.from_points(u)
    traj.append(gmi_gh(final, noise, J))
    return OptRun(
        initial=init,
        final=final,
        trajectory=np.array(traj),
        snr_db=noise.snr_db,
        wall_time=time.perf_counter() - t0,
        config=cfg.to_dict(),
    )


# -- binary switching algorithm --------------------------------------------


def _own_term_likelihoods(x, noise, J):
    # E[k, q, j] = p(y_kq | x_j) / p(y_kq | x_k), so E[k, q, k] == 1
    M, n = x.shape
    T, W = gh_nodes(J).tensor(n)
    s2 = noise.variance
    d = x[:, None, :] - x[None, :, :]
    A = -np.einsum("kjn,kjn->kj", d, d) / (2.0 * s2)
    P = math.sqrt(2.0 / s2) * (T @ x.T)
    L = A[:, None, :] + P[None, :, :] - P.T[:, :, None]
    np.maximum(L, -600.0, out=L)
    return np.exp(L, out=L), W


def _swap_scores(E, W, bits, sums, a, bs):
    """GMI after swapping the labels of points ``a`` and each ``b`` in ``bs``."""
    M, Q, _ = E.shape
    m = bits.shape[1]
    bitsf = bits.astype(float)
    tot, S1, S0 = sums
    d = bitsf[a][None, :] - bitsf[bs]  # (B, m)
    diff = (E[:, :, bs] - E[:, :, a][:, :, None]).transpose(2, 0, 1)[..., None]  # (B, M, Q, 1)
    dd = d[:, None, None, :] * diff
    S1n = S1[None] + dd
    S0n = S0[None] - dd
    own = np.broadcast_to(bits[None], (len(bs), M, m)).copy()
    own[:, a, :] = bits[bs]
    own[np.arange(len(bs)), bs, :] = bits[a]
    S_own = np.where(own[:, :, None, :] == 1, S1n, S0n)
    # the own point (E == 1) is always in its subset
    np.maximum(S_own, 1.0, out=S_own)
    F = m * np.log(tot)[None] - np.log(S_own).sum(axis=3)  # (B, M, Q)
    return m - (F @ W).sum(axis=1) / (M * LN2)


def bsa_perm(c, noise, J=None, tol=1e-9, max_rounds=None, chunk_elems=4_000_000):
    """Best-improvement pairwise label switching.

    Returns ``(perm, gmi)`` where ``c.permuted(perm)`` is the relabeled
    constellation and ``gmi`` its quadrature GMI. Each round scans all
    ``M(M-1)/2`` swaps and applies the best one (lowest index pair on ties);
    stops when no swap improves the GMI by more than ``tol``.
    """
    J = _check_J(J, c.n)
    M = c.M
    bits = label_bits(M)
    m = bits.shape[1]
    perm = np.arange(M)
    x = c.points.copy()
    g0 = gmi_gh(c, noise, J)
    max_rounds = M * M if max_rounds is None else max_rounds
    for _ in range(max_rounds):
        E, W = _own_term_likelihoods(x, noise, J)
        bf = bits.astype(float)
        # total and per-bit subset sums: (M, Q), (M, Q, m), (M, Q, m)
        sums = (E.sum(axis=2), E @ bf, E @ (1.0 - bf))
        best, best_pair = -np.inf, None
        per_b = max(1, chunk_elems // (M * len(W) * m))
        for a in range(M - 1):
            for lo in range(a + 1, M, per_b):
                bs = np.arange(lo, min(M, lo + per_b))
                scores = _swap_scores(E, W, bits, sums, a, bs)
                i = int(np.argmax(scores))
                if scores[i] > best + 1e-12:
                    best, best_pair = float(scores[i]), (a, int(bs[i]))
        if best_pair is None or best - g0 <= tol:
            break
        a, b = best_pair
        x[[a, b]] = x[[b, a]]
        g1 = gmi_gh(x, noise, J)
        if g1 <= g0 + tol:
            x[[a, b]] = x[[b, a]]
            break
        perm[[a, b]] = perm[[b, a]]
        g0 = g1
        log.debug("bsa swap %d <-> %d, gmi %.9f", a, b, g0)
    return perm, g0


def bsa(c, noise, J=None, tol=1e-9):
    """Relabel ``c`` by the binary switching algorithm; never lowers the GMI."""
    perm, _ = bsa_perm(c, noise, J, tol)
    return c.permuted(perm)


# -- restarts ------------------------------------------------------------------


def gray_qam_reference(M, n):
    """Gray QAM of matching size/dimension, or ``None`` if there is none."""
    m = M.bit_length() - 1
    if n == 2 and m % 2 == 0 and m >= 2:
        return gen_qam(M)
    if n == 4 and m % 4 == 0 and m >= 4:
        q = gen_qam(1 << (m // 2))
        return product4d(q, q)
    return None


def make_init(policy, M, n, seed):
    """Initial constellation for ``policy`` in {random, qam, apsk:R}."""
    if policy == "random":
        return random_constellation(M, n, seed)
    if policy == "qam":
        ref = gray_qam_reference(M, n)
        if ref is None:
            raise ValueError(f"no Gray QAM with M={M}, N={n}")
        return ref
    if policy.startswith("apsk"):
        rings = int(policy.split(":")[1]) if ":" in policy else 1
        if n == 2:
            return gen_apsk(M, rings)
        if n == 4:
            side = 1 << ((M.bit_length() - 1) // 2)
            if side * side != M:
                raise ValueError(f"4D APSK product needs square M, got {M}")
            a = gen_apsk(side, rings)
            return product4d(a, a)
    raise ValueError(f"unknown init policy {policy!r} for N={n}")


@dataclass
class CdfReport:
    gmis: np.ndarray  # sorted final GMIs (bits per symbol)
    reference: float  # Gray-QAM GMI, nan if no QAM of this size
    n: int
    runner: str = ""
    init: str = ""
    snr_db: float = float("nan")
    seeds: list = field(default_factory=list)

    @property
    def cdf(self):
        return np.arange(1, len(self.gmis) + 1) / len(self.gmis)

    @property
    def fraction_below_reference(self):
        if math.isnan(self.reference):
            return float("nan")
        return float(np.mean(self.gmis < self.reference))

    def median(self):
        return float(np.median(self.gmis))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "gmi_bits", "gmi_bits_per_2d", "cdf", "below_reference"])
        for i, (g, p) in enumerate(zip(self.gmis, self.cdf)):
            w.writerow([i, repr(float(g)), repr(float(g) * 2 / self.n), repr(float(p)),
                        int(g < self.reference)])
        return buf.getvalue()


def _one_run(args):
    runner, policy, M, n, snr_db, seed, cfg = args
    from gsgmi.gmi import NoiseSpec

    noise = NoiseSpec(snr_db)
    if runner == "direct":
        init = make_init(policy, M, n, seed)
        return optimize_direct(init, noise, cfg).final_gmi
    if runner == "ae":
        from gsgmi import ae

        return ae.run_from_policy(policy, M, n, noise, cfg, seed).final_gmi
    raise ValueError(f"unknown runner {runner!r}")


def restart_cdf(policy, runner, noise, runs, base_seed=0, M=16, n=2, cfg=None, jobs=1):
    """Repeat an optimization ``runs`` times; run ``i`` uses seed ``base_seed + i``.

    ``cfg`` is an :class:`OptConfig` for ``runner="direct"`` or an
    :class:`gsgmi.ae.TrainConfig` for ``runner="ae"`` (its seed is overridden).
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    seeds = [base_seed + i for i in range(runs)]
    tasks = [(runner, policy, M, n, noise.snr_db, s, cfg) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            finals = list(ex.map(_one_run, tasks))
    else:
        finals = [_one_run(t) for t in tasks]
    ref = gray_qam_reference(M, n)
    J = getattr(cfg, "quad_nodes", None)
    reference = gmi_gh(ref, noise, J) if ref is not None else float("nan")
    return CdfReport(
        gmis=np.sort(np.array(finals)),
        reference=reference,
        n=n,
        runner=runner,
        init=policy,
        snr_db=noise.snr_db,
        seeds=seeds,
    )
