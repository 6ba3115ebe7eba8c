"""Poissonized Plancherel measure and its lattice correlation kernels.

Lattice sites are half-integers. Functions accept them as floats or
Fractions (``-0.5``, ``Fraction(7, 2)``); internally they are doubled to odd
integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from . import _kernels
from .combinat import Partition, dim, partitions_up_to

MAX_MILLER_START = 100_000
SERIES_TOL = 1e-16
SERIES_QUIET_TERMS = 10


class ConvergenceError(RuntimeError):
    pass


def _doubled(x) -> int:
    d = Fraction(x) * 2
    if d.denominator != 1 or d.numerator % 2 == 0:
        raise ValueError(f"{x} is not a half-integer")
    return int(d)


# --------------------------------------------------------------------------
# Bessel functions on a lattice of orders


@lru_cache(maxsize=256)
def _chain(alpha: float, z: float, top: int) -> np.ndarray:
    """Normalized ``J_{alpha+k}(z)``, ``k = 0..top``, for ``alpha`` in {0, 1/2}."""
    if int(z) + top > MAX_MILLER_START:
        raise ConvergenceError(f"recurrence start beyond {MAX_MILLER_START} for order {top}, z={z}")
    vals, norm = _kernels.bessel_minimal_chain(alpha, z, top)
    scale = (z / 2.0) ** alpha / norm
    out = vals * scale
    out.setflags(write=False)
    return out


def bessel_half(order, z: float) -> float:
    """``J_order(z)`` for ``order`` in ``Z/2`` and ``z > 0``.

    Miller's backward recurrence with Neumann-series normalization for
    nonnegative orders; negative integer orders by ``J_{-m} = (-1)^m J_m``,
    negative half-integer orders by continuing the recurrence downward,
    where it is stable.
    """
    z = float(z)
    if not z > 0:
        raise ValueError("z must be positive")
    twice = Fraction(order) * 2
    if twice.denominator != 1:
        raise ValueError(f"order {order} is not in Z/2")
    twice = int(twice)
    alpha = 0.5 if twice % 2 else 0.0
    if twice >= 0:
        k = (twice - (1 if alpha else 0)) // 2
        return float(_chain(alpha, z, max(k, 1))[k])
    if alpha == 0.0:
        m = -twice // 2
        return (-1) ** m * float(_chain(0.0, z, max(m, 1))[m])
    # J_{mu-1} = (2 mu / z) J_mu - J_{mu+1}, from mu = 1/2 down to the order
    chain = _chain(0.5, z, 1)
    upper, cur = float(chain[1]), float(chain[0])
    mu = 0.5
    target = twice / 2.0
    while mu > target:
        upper, cur = cur, (2.0 * mu / z) * cur - upper
        mu -= 1.0
    return cur


bessel_j = bessel_half


def integer_bessel_table(z: float, lo: int, hi: int) -> np.ndarray:
    """``[J_m(z) for m in lo..hi]`` for integer orders."""
    top = max(abs(lo), abs(hi), 1)
    chain = _chain(0.0, float(z), top)
    m = np.arange(lo, hi + 1)
    sign = np.where((m < 0) & (np.abs(m) % 2 == 1), -1.0, 1.0)
    return sign * chain[np.abs(m)]


# --------------------------------------------------------------------------
# Poissonized Plancherel measure


def poissonized_plancherel_weight(lam: Sequence[int], nu: float) -> float:
    """``e^{-nu} nu^{|lam|} (dim lam / |lam|!)^2``."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    lam = Partition(lam)
    n = lam.size
    ratio = Fraction(dim(lam), math.factorial(n))
    return math.exp(-nu + n * math.log(nu)) * float(ratio * ratio)


def poisson_tail(cutoff: int, nu: float) -> float:
    """``P(N > cutoff)`` for ``N ~ Poisson(nu)``."""
    return float(stats.poisson.sf(cutoff, nu))


# --------------------------------------------------------------------------
# Discrete Bessel kernel


def _series_length(z: float, top_order: int) -> int:
    return max(top_order, int(z)) + int(z) + 40


def _bessel_rows(doubled_points: Sequence[int], nu: float) -> np.ndarray:
    """Row ``i`` holds ``J_{x_i + s}(2 sqrt(nu))`` for ``s = 1/2, 3/2, ...`` until negligible."""
    z = 2.0 * math.sqrt(nu)
    starts = [(d + 1) // 2 for d in doubled_points]
    length = _series_length(z, max(abs(s) for s in starts)) + (max(starts) - min(starts))
    while True:
        lo = min(starts)
        table = integer_bessel_table(z, lo, max(starts) + length)
        rows = np.stack([table[s - lo : s - lo + length] for s in starts])
        quiet = np.abs(rows[:, -SERIES_QUIET_TERMS:]) < math.sqrt(SERIES_TOL)
        if quiet.all() and max(starts) + length > z:
            return rows
        length *= 2


def discrete_bessel_kernel(x, y, nu: float) -> float:
    """``J(x, y) = sum_{s in Z'_+} J_{x+s}(2 sqrt nu) J_{y+s}(2 sqrt nu)``.

    The sum stops after ten consecutive terms below ``1e-16``.
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    dx, dy = _doubled(x), _doubled(y)
    rows = _bessel_rows([dx, dy], nu)
    terms = rows[0] * rows[1]
    small = np.abs(terms) < SERIES_TOL
    run = 0
    for idx, flag in enumerate(small):
        run = run + 1 if flag else 0
        if run == SERIES_QUIET_TERMS:
            return float(math.fsum(terms[: idx + 1]))
    return float(math.fsum(terms))


def discrete_bessel_kernel_ratio(x, y, nu: float) -> float:
    """Off-diagonal closed form ``sqrt(nu) (J_{x-1/2} J_{y+1/2} - J_{x+1/2} J_{y-1/2}) / (x - y)``."""
    dx, dy = _doubled(x), _doubled(y)
    if dx == dy:
        raise ValueError("the ratio form is undefined on the diagonal")
    z = 2.0 * math.sqrt(nu)
    mx, my = (dx - 1) // 2, (dy - 1) // 2
    lo, hi = min(mx, my), max(mx, my) + 1
    t = integer_bessel_table(z, lo, hi)
    jx0, jx1 = t[mx - lo], t[mx + 1 - lo]
    jy0, jy1 = t[my - lo], t[my + 1 - lo]
    return math.sqrt(nu) * (jx0 * jy1 - jx1 * jy0) / ((dx - dy) / 2.0)


def bessel_kernel_matrix(points: Sequence, nu: float) -> np.ndarray:
    """``[J(x_i, x_j)]`` for half-integer ``points``, via the projection series."""
    doubled = [_doubled(p) for p in points]
    if not doubled:
        return np.zeros((0, 0))
    rows = _bessel_rows(doubled, nu)
    return rows @ rows.T


def determinantal_correlation(points: Sequence, nu: float) -> float:
    """``det[J(x_i, x_j)]``; 1 for the empty set."""
    if len(points) == 0:
        return 1.0
    return float(np.linalg.det(bessel_kernel_matrix(points, nu)))


# --------------------------------------------------------------------------
# Brute-force oracle


class CorrelationOracle:
    """Correlation functions of ``lam -> L(lam)`` under ``M_nu``, by summing over diagrams.

    All diagrams with at most ``cutoff`` boxes are enumerated once; the
    missing mass is the Poisson tail ``P(|lam| > cutoff)``.
    """

    def __init__(self, nu: float, cutoff: int, window: Iterable):
        self.nu = float(nu)
        self.cutoff = int(cutoff)
        self.sites = sorted(_doubled(x) for x in window)
        self._bit = {d: 1 << i for i, d in enumerate(self.sites)}
        weights = []
        masks = []
        for lam in partitions_up_to(self.cutoff):
            weights.append(poissonized_plancherel_weight(lam, self.nu))
            masks.append(self._mask(lam))
        self.weights = np.array(weights)
        self.masks = np.array(masks, dtype=np.int64)
        self.tail_bound = poisson_tail(self.cutoff, self.nu)

    def _mask(self, lam: Partition) -> int:
        occupied = {2 * part - 2 * i + 1 for i, part in enumerate(lam, start=1)}
        depth = -2 * len(lam) - 1
        mask = 0
        for d, bit in self._bit.items():
            if d in occupied or d <= depth:
                mask |= bit
        return mask

    def _xmask(self, points) -> int:
        mask = 0
        for p in points:
            d = _doubled(p)
            if d not in self._bit:
                raise ValueError(f"site {p} is outside the oracle window")
            mask |= self._bit[d]
        return mask

    def total_mass(self) -> float:
        return float(math.fsum(self.weights))

    def correlation(self, points) -> float:
        """``P(X subset of L(lam))`` restricted to ``|lam| <= cutoff``."""
        xm = self._xmask(points)
        return float(math.fsum(self.weights[(self.masks & xm) == xm]))

    def hole_probability(self, points) -> float:
        """``P(no site of X is occupied)`` restricted to ``|lam| <= cutoff``."""
        xm = self._xmask(points)
        return float(math.fsum(self.weights[(self.masks & xm) == 0]))


@lru_cache(maxsize=8)
def _oracle(nu: float, cutoff: int, window: tuple) -> CorrelationOracle:
    return CorrelationOracle(nu, cutoff, window)


def brute_force_correlation(points, nu: float, cutoff: int = 30) -> tuple[float, float]:
    """``(P(X subset of L(lam)) over |lam| <= cutoff, Poisson tail beyond cutoff)``."""
    window = tuple(sorted(Fraction(_doubled(p), 2) for p in points))
    if not window:
        window = (Fraction(-1, 2),)
        oracle = _oracle(float(nu), int(cutoff), window)
        return oracle.total_mass(), oracle.tail_bound
    oracle = _oracle(float(nu), int(cutoff), window)
    return oracle.correlation(points), oracle.tail_bound


def window_sites(half_width: int) -> list[Fraction]:
    """``{-half_width + 1/2, ..., half_width - 1/2}``: ``2*half_width`` sites."""
    return [Fraction(2 * k + 1, 2) for k in range(-half_width, half_width)]


def determinantal_check(nu: float = 2.0, half_width: int = 6, cutoff: int = 30, max_points: int = 2) -> dict:
    """Compare ``det[J]`` with the oracle on every subset of the window up to ``max_points``."""
    sites = window_sites(half_width)
    oracle = CorrelationOracle(nu, cutoff, sites)
    worst = 0.0
    worst_set: tuple = ()
    checked = 0
    for size in range(0, max_points + 1):
        for subset in combinations(sites, size):
            err = abs(determinantal_correlation(subset, nu) - oracle.correlation(subset))
            checked += 1
            if err > worst:
                worst, worst_set = err, subset
    return {
        "max_abs_error": worst,
        "worst_set": [str(x) for x in worst_set],
        "subsets_checked": checked,
        "tail_bound": oracle.tail_bound,
    }


# --------------------------------------------------------------------------
# Discrete sine kernel and the bulk limit


def discrete_sine_kernel(k: int, l: int, a: float) -> float:
    """``sin(arccos(a/2)(k-l)) / (pi (k-l))``; ``arccos(a/2)/pi`` on the diagonal."""
    if not -2.0 < a < 2.0:
        raise ValueError("a must lie in (-2, 2)")
    phi = math.acos(a / 2.0)
    d = int(k) - int(l)
    if d == 0:
        return phi / math.pi
    return math.sin(phi * d) / (math.pi * d)


def bulk_anchor(a: float, nu: float) -> Fraction:
    """Half-integer nearest to ``a sqrt(nu)``; ties go up."""
    t = a * math.sqrt(nu)
    return Fraction(math.floor(t) * 2 + 1, 2)


def bulk_limit_check(a: float, nus: Sequence[float], reach: int = 3) -> list[dict]:
    """Distance between the shifted Bessel kernel and the discrete sine kernel.

    For each ``nu``, the maximum over ``|k|, |l| <= reach`` of
    ``|J(x+k, x+l) - S(k, l)|`` with ``x`` the anchor of ``a sqrt(nu)``.
    """
    if not -2.0 < a < 2.0:
        raise ValueError("a must lie in (-2, 2)")
    offsets = list(range(-reach, reach + 1))
    sine = np.array([[discrete_sine_kernel(k, l, a) for l in offsets] for k in offsets])
    out = []
    for nu in nus:
        x = bulk_anchor(a, nu)
        mat = bessel_kernel_matrix([x + k for k in offsets], nu)
        out.append(
            {
                "nu": float(nu),
                "anchor": float(x),
                "max_error": float(np.max(np.abs(mat - sine))),
                "diagonal": float(mat[reach, reach]),
            }
        )
    return out


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    param: float
    tol: float = 1e-12

    def __post_init__(self):
        if self.kind == "bessel" and not self.param > 0:
            raise ValueError("the discrete Bessel kernel needs nu > 0")
        if self.kind == "sine" and not -2.0 < self.param < 2.0:
            raise ValueError("the discrete sine kernel needs a in (-2, 2)")
        if self.kind not in ("bessel", "sine"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    def __call__(self, x, y) -> float:
        if self.kind == "bessel":
            return discrete_bessel_kernel(x, y, self.param)
        return discrete_sine_kernel(int(x), int(y), self.param)
