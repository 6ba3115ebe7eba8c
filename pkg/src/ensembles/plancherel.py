"""Plancherel measure: RSK, samplers, longest increasing subsequences and limit laws."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from . import _kernels
from .combinat import Partition, Permutation, all_permutations, dim, partitions, profile, transpose
from .rng import as_generator

KEROV_TERMS = 200
SUP_GRID = 10_000


# --------------------------------------------------------------------------
# Tableaux and RSK


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows if len(r))
        object.__setattr__(self, "rows", rows)
        shape = [len(r) for r in rows]
        Partition(shape)
        entries = sorted(v for r in rows for v in r)
        if entries != list(range(1, len(entries) + 1)):
            raise ValueError("entries must be 1..n, each once")
        for r in rows:
            if any(b <= a for a, b in zip(r, r[1:])):
                raise ValueError("rows must increase strictly")
        for upper, lower in zip(rows, rows[1:]):
            if any(lower[j] <= upper[j] for j in range(len(lower))):
                raise ValueError("columns must increase strictly")

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)


def _row_insert(rows: list[list[int]], x: int) -> int:
    """Insert ``x``; return the index of the row that grew."""
    r = 0
    while True:
        if r == len(rows):
            rows.append([x])
            return r
        row = rows[r]
        pos = bisect_right(row, x)
        if pos == len(row):
            row.append(x)
            return r
        row[pos], x = x, row[pos]
        r += 1


def rsk(s: Permutation) -> tuple[StandardTableau, StandardTableau]:
    """Robinson-Schensted: insertion tableau P and recording tableau Q."""
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    for t, x in enumerate(s.images, start=1):
        r = _row_insert(p_rows, x)
        if r == len(q_rows):
            q_rows.append([])
        q_rows[r].append(t)
    return StandardTableau(tuple(map(tuple, p_rows))), StandardTableau(tuple(map(tuple, q_rows)))


def rsk_inverse(p: StandardTableau, q: StandardTableau) -> Permutation:
    if p.shape != q.shape:
        raise ValueError(f"shapes differ: {p.shape} vs {q.shape}")
    rows = [list(r) for r in p.rows]
    where = {v: i for i, r in enumerate(q.rows) for v in r}
    n = p.n
    images = [0] * n
    for t in range(n, 0, -1):
        r = where[t]
        x = rows[r].pop()
        for upper in range(r - 1, -1, -1):
            row = rows[upper]
            # the largest entry smaller than x is bumped back up
            pos = bisect_right(row, x) - 1
            row[pos], x = x, row[pos]
        images[t - 1] = x
        if not rows[r]:
            rows.pop(r)
    return Permutation(images)


def word_shape(word: Sequence[int]) -> Partition:
    """Shape of the Schensted insertion tableau of a word (letters may repeat)."""
    w = np.ascontiguousarray(word, dtype=np.int64)
    if w.size == 0:
        return Partition()
    width = _kernels.patience_length(w, False)
    # longest strictly decreasing = longest strictly increasing of the reverse
    height = _kernels.patience_length(w[::-1].copy(), True)
    return Partition(_kernels.row_insertion_shape(w, width, height))


def lis_length(s: Permutation | Sequence[int]) -> int:
    """Longest increasing subsequence of the one-line word, by patience sorting."""
    images = s.images if isinstance(s, Permutation) else s
    w = np.ascontiguousarray(images, dtype=np.int64)
    return int(_kernels.patience_length(w, True)) if w.size else 0


# --------------------------------------------------------------------------
# Exact laws


def plancherel_weight(lam: Sequence[int]) -> Fraction:
    lam = Partition(lam)
    return Fraction(dim(lam) ** 2, math.factorial(lam.size))


def plancherel_law(n: int) -> dict[Partition, Fraction]:
    return {lam: plancherel_weight(lam) for lam in partitions(n)}


def rsk_shape_law(n: int) -> dict[Partition, Fraction]:
    """Shape law of RSK over the uniform measure on S_n, by enumeration."""
    counts: dict[Partition, int] = {}
    for s in all_permutations(n):
        lam = rsk(s)[0].shape
        counts[lam] = counts.get(lam, 0) + 1
    total = math.factorial(n)
    return {lam: Fraction(c, total) for lam, c in counts.items()}


def growth_transitions(lam: Sequence[int]) -> dict[Partition, Fraction]:
    """Exact one-box transition law of the growth sampler from ``lam``.

    Uses the corner-content product; independent of dimensions.
    """
    lam = Partition(lam)
    adds = lam.addable_cells()
    xs = [j - i for i, j in adds]
    ys = [j - i for i, j in lam.removable_cells()]
    out = {}
    for (i, _j), x in zip(adds, xs):
        num = math.prod((x - y for y in ys), start=Fraction(1))
        den = math.prod((x - other for other in xs if other != x), start=Fraction(1))
        out[lam.add_cell(i)] = num / den
    return out


def growth_law(n: int) -> dict[Partition, Fraction]:
    law = {Partition(): Fraction(1)}
    for _ in range(n):
        nxt: dict[Partition, Fraction] = {}
        for lam, p in law.items():
            for mu, q in growth_transitions(lam).items():
                nxt[mu] = nxt.get(mu, 0) + p * q
        law = nxt
    return law


# --------------------------------------------------------------------------
# Samplers


def sample_plancherel_rsk(n: int, rng=None) -> Partition:
    """Shape of RSK applied to a uniform random permutation."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    word = as_generator(rng).permutation(n)
    return word_shape(word)


def sample_plancherel_hookwalk(n: int, rng=None) -> Partition:
    """Plancherel sample grown one box at a time.

    Each step adds a box with the Plancherel transition probability
    ``dim(mu) / ((|lam|+1) dim(lam))``, evaluated through the contents of
    the addable and removable corners.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    u = as_generator(rng).random(n)
    return Partition(_kernels.plancherel_growth(u))


SAMPLERS = {"rsk": sample_plancherel_rsk, "hookwalk": sample_plancherel_hookwalk}


def sample_plancherel(n: int, count: int, rng=None, sampler: str = "rsk") -> list[Partition]:
    draw = SAMPLERS[sampler]
    gen = as_generator(rng)
    return [draw(n, gen) for _ in range(count)]


# --------------------------------------------------------------------------
# Limit shape and fluctuations


def omega(x):
    """The limit shape: ``(2/pi)(x arcsin(x/2) + sqrt(4-x^2))`` on ``|x| <= 2``, ``|x|`` outside."""
    x = np.asarray(x, dtype=float)
    inner = np.clip(x, -2.0, 2.0)
    val = (2.0 / np.pi) * (inner * np.arcsin(inner / 2.0) + np.sqrt(4.0 - inner**2))
    out = np.where(np.abs(x) <= 2.0, val, np.abs(x))
    return out if out.ndim else float(out)


def omega_area() -> float:
    val, _ = integrate.quad(lambda x: omega(x) - abs(x), -2.0, 2.0, epsabs=1e-12, epsrel=1e-12, points=[0.0])
    return val


def scaled_profile(lam: Sequence[int]):
    lam = Partition(lam)
    if lam.size == 0:
        raise ValueError("the empty diagram has no rescaled profile")
    return profile(lam, 1.0 / math.sqrt(lam.size))


def sup_distance_to_omega(lam: Sequence[int], grid: int = SUP_GRID) -> float:
    """``sup_x |lam_bar(x) - Omega(x)|``.

    On every linear piece of ``lam_bar`` the difference is monotone (``|Omega'| <= 1``),
    so the breakpoints already carry the supremum; the uniform grid on
    ``[-3, 3]`` is kept as a guard.
    """
    prof = scaled_profile(lam)
    xs = np.concatenate((prof.breakpoints, np.linspace(-3.0, 3.0, grid), [-2.0, 2.0]))
    return float(np.max(np.abs(prof(xs) - omega(xs))))


def _poly(coeffs: Sequence[float]) -> np.polynomial.Polynomial:
    return np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))


@lru_cache(maxsize=64)
def _omega_moment(coeffs: tuple[float, ...]) -> float:
    phi = _poly(coeffs)
    val, _ = integrate.quad(lambda x: phi(x) * (omega(x) - abs(x)), -2.0, 2.0, epsabs=1e-12, epsrel=1e-12, limit=200, points=[0.0])
    return val


def _profile_moment(lam: Partition, coeffs: tuple[float, ...]) -> float:
    """``int phi(x) (lam_bar(x) - |x|) dx``, exact up to rounding (Gauss-Legendre per linear piece)."""
    prof = scaled_profile(lam)
    x = prof.breakpoints
    if 0.0 not in x:
        x = np.sort(np.append(x, 0.0))
    a, b = x[:-1], x[1:]
    degree = max(len(coeffs) - 1, 0)
    nodes, weights = np.polynomial.legendre.leggauss(degree // 2 + 2)
    mid = (a + b) / 2.0
    half = (b - a) / 2.0
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    f = _poly(coeffs)(pts) * (prof(pts) - np.abs(pts))
    return float(np.sum(half * (f @ weights)))


def fluctuation_integral(lam: Sequence[int], coeffs: Sequence[float]) -> float:
    """``int phi(x) Delta_n(x) dx`` with ``Delta_n = (sqrt(n)/2)(lam_bar - Omega)``.

    ``coeffs`` are polynomial coefficients in increasing degree.
    """
    lam = Partition(lam)
    if lam.size < 1:
        raise ValueError("need at least one box")
    coeffs = tuple(float(c) for c in coeffs)
    if not any(coeffs):
        return 0.0
    return math.sqrt(lam.size) / 2.0 * (_profile_moment(lam, coeffs) - _omega_moment(coeffs))


@lru_cache(maxsize=64)
def kerov_coefficients(coeffs: tuple[float, ...], K: int = KEROV_TERMS) -> np.ndarray:
    """``c_k = (1/pi) k^{-1/2} int_{-2}^{2} sin(k arccos(x/2)) phi(x) dx`` for ``k = 2..K``."""
    if K < 2:
        raise ValueError("K must be at least 2")
    phi = _poly(coeffs)
    out = np.empty(K - 1)
    for idx, k in enumerate(range(2, K + 1)):
        # x = 2 cos(t), dx = -2 sin(t) dt
        val, _ = integrate.quad(
            lambda t: math.sin(k * t) * phi(2.0 * math.cos(t)) * 2.0 * math.sin(t),
            0.0,
            math.pi,
            epsabs=1e-13,
            limit=400,
        )
        out[idx] = val / (math.pi * math.sqrt(k))
    return out


def sample_kerov_process(coeffs: Sequence[float], K: int = KEROV_TERMS, rng=None, count: int | None = None):
    """Draw ``int phi(x) Delta(x) dx`` from the random sine series truncated at ``K``."""
    c = kerov_coefficients(tuple(float(v) for v in coeffs), K)
    gen = as_generator(rng)
    if count is None:
        return float(gen.standard_normal(c.size) @ c)
    return gen.standard_normal((count, c.size)) @ c


def kerov_variance(coeffs: Sequence[float], K: int = KEROV_TERMS) -> float:
    c = kerov_coefficients(tuple(float(v) for v in coeffs), K)
    return float(c @ c)


# --------------------------------------------------------------------------
# Edge scaling and involutions


def edge_statistic(lam: Sequence[int], k: int) -> list[float]:
    """``u_i = (lam_i - 2 sqrt(n)) / n^{1/6}`` for the first ``k`` rows."""
    lam = Partition(lam)
    if not 1 <= k <= len(lam):
        raise ValueError(f"k must be between 1 and {len(lam)}")
    n = lam.size
    return [(lam[i] - 2.0 * math.sqrt(n)) / n ** (1.0 / 6.0) for i in range(k)]


def edge_rows(u: Sequence[float], n: int) -> list[float]:
    """Inverse of :func:`edge_statistic`: ``lam_i = 2 sqrt(n) + u_i n^{1/6}``."""
    return [2.0 * math.sqrt(n) + x * n ** (1.0 / 6.0) for x in u]


@lru_cache(maxsize=None)
def involution_count(n: int) -> int:
    """``T(n) = T(n-1) + (n-1) T(n-2)``."""
    a, b = 1, 1
    for m in range(2, n + 1):
        a, b = b, b + (m - 1) * a
    return b if n >= 1 else 1


def _fixed_ratios(n: int) -> np.ndarray:
    """``T(m-1)/T(m)`` for ``m = 0..n`` via ``1/r_m = 1 + (m-1) r_{m-1}``."""
    r = np.ones(n + 1)
    for m in range(2, n + 1):
        r[m] = 1.0 / (1.0 + (m - 1) * r[m - 1])
    return r


def sample_involution(n: int, rng=None) -> Permutation:
    """Uniform random involution: the largest point is fixed with probability ``T(n-1)/T(n)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    u = as_generator(rng).random((n, 2))
    return Permutation.from_zero_based(_kernels.involution_pairs(u, _fixed_ratios(n)))


def involution_lis(n: int, rng=None) -> int:
    u = as_generator(rng).random((n, 2))
    images = _kernels.involution_pairs(u, _fixed_ratios(n))
    return int(_kernels.patience_length(images, True))


__all__ = [
    "StandardTableau",
    "edge_rows",
    "edge_statistic",
    "fluctuation_integral",
    "growth_law",
    "growth_transitions",
    "involution_count",
    "kerov_coefficients",
    "kerov_variance",
    "lis_length",
    "omega",
    "omega_area",
    "plancherel_law",
    "plancherel_weight",
    "rsk",
    "rsk_inverse",
    "rsk_shape_law",
    "sample_involution",
    "sample_kerov_process",
    "sample_plancherel",
    "sample_plancherel_hookwalk",
    "sample_plancherel_rsk",
    "sup_distance_to_omega",
    "transpose",
    "word_shape",
]
