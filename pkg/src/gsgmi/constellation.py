"""Labeled constellations: construction, Gray labeling, normalization and I/O.

A constellation is an ``M x N`` array of real coordinates. The label of a point
is the ``m``-bit binary expansion of its row index (MSB first), so relabeling a
constellation is nothing more than permuting its rows.

Energy convention: the mean symbol energy is ``N / 2``, i.e. unit energy per two
real dimensions. With this convention 2D and 4D formats share one SNR axis.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from gsgmi._io import atomic_write_text

ENERGY_TOL = 1e-12


class ConstellationError(ValueError):
    """Raised for invalid constellation parameters or files."""


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GrayCode:
    """Binary-reflected Gray code of width ``m``.

    ``codes[p]`` is the word at position ``p``; consecutive words (cyclically)
    differ in one bit.
    """

    m: int
    codes: tuple

    def position(self, word):
        """Position of ``word`` in the code sequence (inverse Gray map)."""
        return _inverse_gray(word)

    def as_bits(self):
        return [format(c, f"0{self.m}b") for c in self.codes]


def _inverse_gray(g):
    b = 0
    while g:
        b ^= g
        g >>= 1
    return b


def brgc(m):
    """Binary-reflected Gray code of width ``m`` (1 <= m <= 16)."""
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= 16:
        raise ConstellationError(f"Gray code width must be in [1, 16], got {m!r}")
    codes = [0, 1]
    for w in range(1, int(m)):
        codes = codes + [c | (1 << w) for c in reversed(codes)]
    return GrayCode(int(m), tuple(codes))


def label_bits(M):
    """``M x log2(M)`` array of label bits, MSB first, row ``k`` = binary ``k``."""
    m = int(round(math.log2(M)))
    k = np.arange(M)[:, None]
    shifts = np.arange(m - 1, -1, -1)[None, :]
    return ((k >> shifts) & 1).astype(np.uint8)


def normalize(points):
    """Scale ``points`` so that the mean energy per point equals ``N / 2``."""
    x = np.asarray(points, dtype=float)
    if x.ndim != 2:
        raise ConstellationError("points must be an M x N matrix")
    energy = np.mean(np.sum(x * x, axis=1))
    if not np.isfinite(energy):
        raise ConstellationError("points contain non-finite coordinates")
    if energy == 0.0:
        raise ConstellationError("cannot normalize an all-zero constellation")
    return x * math.sqrt(0.5 * x.shape[1] / energy)


@dataclass(frozen=True, eq=False)
class Constellation:
    """``M`` labeled points in ``R^N`` with mean energy ``N / 2``.

    Construct with :meth:`from_points` to normalize arbitrary coordinates; the
    plain constructor only validates.
    """

    points: np.ndarray

    def __post_init__(self):
        x = np.array(self.points, dtype=float)
        if x.ndim != 2 or x.shape[1] < 1:
            raise ConstellationError(f"points must be an M x N matrix, got shape {x.shape}")
        M = x.shape[0]
        if M < 2 or not _is_pow2(M):
            raise ConstellationError(f"M must be a power of two >= 2, got {M}")
        if not np.all(np.isfinite(x)):
            raise ConstellationError("points contain non-finite coordinates")
        energy = float(np.mean(np.sum(x * x, axis=1)))
        target = 0.5 * x.shape[1]
        if abs(energy - target) > ENERGY_TOL * max(1.0, target):
            raise ConstellationError(
                f"mean energy {energy!r} violates normalization (expected {target})"
            )
        x.flags.writeable = False
        object.__setattr__(self, "points", x)

    @classmethod
    def from_points(cls, points):
        return cls(normalize(points))

    @property
    def M(self):
        return self.points.shape[0]

    @property
    def m(self):
        return self.M.bit_length() - 1

    @property
    def n(self):
        return self.points.shape[1]

    @property
    def bits(self):
        return label_bits(self.M)

    def energy(self):
        return float(np.mean(np.sum(self.points**2, axis=1)))

    def permuted(self, perm):
        """Relabel: new row ``r`` is old row ``perm[r]``."""
        return Constellation(self.points[np.asarray(perm)])

    def __eq__(self, other):
        if not isinstance(other, Constellation):
            return NotImplemented
        return self.points.shape == other.points.shape and np.array_equal(
            self.points, other.points
        )

    def __hash__(self):
        return hash(self.points.tobytes())

    def __repr__(self):
        return f"Constellation(M={self.M}, N={self.n})"

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return {"m": self.m, "n": self.n, "points": self.points.tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())

    def save(self, path):
        atomic_write_text(path, self.to_json() + "\n")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label_bits"] + [f"x{i + 1}" for i in range(self.n)])
        for k in range(self.M):
            w.writerow([format(k, f"0{self.m}b")] + [repr(float(v)) for v in self.points[k]])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, data):
        try:
            m, n, pts = int(data["m"]), int(data["n"]), data["points"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConstellationError(f"malformed constellation record: {exc}") from exc
        x = np.asarray(pts, dtype=float)
        if x.shape != (2**m, n):
            raise ConstellationError(
                f"points shape {x.shape} does not match m={m}, n={n} (expected {(2**m, n)})"
            )
        return cls(x)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConstellationError(
                f"JSON parse error at line {exc.lineno}, column {exc.colno} "
                f"(char {exc.pos}): {exc.msg}"
            ) from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


# -- constructors -----------------------------------------------------------


def _gray_pam_levels(bits):
    # amplitude of each width-`bits` label on a Gray-labeled PAM axis
    L = 1 << bits
    pos = np.array([_inverse_gray(v) for v in range(L)])
    return 2.0 * pos - (L - 1)


def gen_qam(M):
    """Square ``M``-QAM with per-axis Gray labeling.

    The first ``m/2`` label bits select the in-phase level, the last ``m/2`` the
    quadrature level.
    """
    if not isinstance(M, (int, np.integer)) or M < 4 or not _is_pow2(M):
        raise ConstellationError(f"QAM size must be 4^k, got {M!r}")
    m = int(M).bit_length() - 1
    if m % 2:
        raise ConstellationError(f"QAM size {M} is not square (cross-QAM unsupported)")
    h = m // 2
    levels = _gray_pam_levels(h)
    k = np.arange(M)
    pts = np.stack([levels[k >> h], levels[k & ((1 << h) - 1)]], axis=1)
    return Constellation.from_points(pts)


def gen_apsk(M, rings):
    """Gray-labeled APSK with ``rings`` phase-aligned rings of radii 1, 3, 5, ...

    The first ``log2(rings)`` bits Gray-code the ring index, the remaining bits
    Gray-code the phase index on that ring.
    """
    if not isinstance(M, (int, np.integer)) or M < 2 or not _is_pow2(M):
        raise ConstellationError(f"APSK size must be a power of two >= 2, got {M!r}")
    if not isinstance(rings, (int, np.integer)) or rings < 1 or not _is_pow2(rings):
        raise ConstellationError(f"ring count must be a power of two, got {rings!r}")
    if M % rings or M // rings < 2:
        raise ConstellationError(f"{rings} rings do not divide {M} points into rings of >= 2")
    per_ring = M // rings
    pb = per_ring.bit_length() - 1
    k = np.arange(M)
    inv = np.array([_inverse_gray(v) for v in range(max(rings, per_ring))])
    ring = inv[k >> pb]
    phase = inv[k & (per_ring - 1)]
    radius = 2.0 * ring + 1.0
    angle = 2.0 * np.pi * phase / per_ring
    pts = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    return Constellation.from_points(pts)


def gen_psk(M):
    return gen_apsk(M, 1)


def product4d(a, b):
    """Cartesian product of two 2D constellations; labels concatenate (a then b)."""
    if a.n != 2 or b.n != 2:
        raise ConstellationError(f"product4d needs two 2D constellations, got N={a.n}, N={b.n}")
    ia = np.repeat(np.arange(a.M), b.M)
    ib = np.tile(np.arange(b.M), a.M)
    pts = np.concatenate([a.points[ia], b.points[ib]], axis=1)
    return Constellation.from_points(pts)


def random_constellation(M, n, seed=None):
    """Gaussian random coordinates, normalized. Labels are arbitrary."""
    rng = np.random.default_rng(seed)
    return Constellation.from_points(rng.standard_normal((M, n)))
