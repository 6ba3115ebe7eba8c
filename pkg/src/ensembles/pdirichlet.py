"""Poisson-Dirichlet PD(theta): three samplers and the correlation functions.

Batch samplers return a ``(count, k)`` array of the ``k`` largest atoms per
draw, sorted decreasingly. The single-draw wrappers return a
:class:`SimplexPoint`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .combinat import Permutation
from .rng import as_generator

STICK_REL_TOL = 1e-3
DIRICHLET_ORDER = 512
POISSON_CUTOFF = 1e-8


class DegenerateInputError(ValueError):
    """A partial sum reached 1, so the inverse stick map is undefined."""


@dataclass(frozen=True)
class SimplexPoint:
    """Decreasing prefix ``xs`` of a point of the closed infinite simplex.

    ``r_tail`` is the mass not accounted for by ``xs``.
    """

    xs: tuple[float, ...]
    r_tail: float

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        object.__setattr__(self, "xs", xs)
        if any(b > a for a, b in zip(xs, xs[1:])):
            raise ValueError("xs must be weakly decreasing")
        if self.r_tail < -1e-12 or abs(sum(xs) + self.r_tail - 1.0) > 1e-12:
            raise ValueError("xs and r_tail must sum to 1 with r_tail >= 0")

    @classmethod
    def from_row(cls, row: Sequence[float]) -> "SimplexPoint":
        row = [float(x) for x in row]
        return cls(tuple(row), max(0.0, 1.0 - math.fsum(row)))


def stick_to_simplex(v: Sequence[float]) -> np.ndarray:
    """``u_1 = v_1``, ``u_n = v_n (1-v_1)...(1-v_{n-1})``."""
    v = np.asarray(v, dtype=float)
    rest = np.concatenate(([1.0], np.cumprod(1.0 - v)[:-1]))
    return v * rest


def u_to_v(u: Sequence[float]) -> np.ndarray:
    """Inverse of :func:`stick_to_simplex`: ``v_n = u_n / (1 - u_1 - ... - u_{n-1})``."""
    u = np.asarray(u, dtype=float)
    partial = np.concatenate(([0.0], np.cumsum(u)[:-1]))
    if np.any(partial >= 1.0):
        raise DegenerateInputError("a partial sum of u reached 1")
    return u / (1.0 - partial)


def beta_one_theta(theta: float, size, rng) -> np.ndarray:
    """Sticks with density ``theta (1-t)**(theta-1)`` on [0, 1], by inversion."""
    uni = as_generator(rng).random(size)
    return 1.0 - (1.0 - uni) ** (1.0 / theta)


def _check_theta(theta):
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    return float(theta)


def pd_stickbreak(theta: float, k: int, count: int, rng=None, rel_tol: float = STICK_REL_TOL) -> np.ndarray:
    """Sorted stick-breaking (GEM) atoms, top ``k`` per draw.

    Sticks are broken until the unbroken remainder is below ``rel_tol``
    times the current ``k``-th largest atom.
    """
    theta = _check_theta(theta)
    if k < 1:
        raise ValueError("k must be at least 1")
    gen = as_generator(rng)
    guess = int(k + theta * (math.log(1.0 / rel_tol) + 5.0 * math.log(k + 1.0) + 10.0)) + 16
    out = np.empty((count, k))
    for row in range(count):
        length = guess
        while True:
            uni = gen.random(length)
            top, _rest, used = _kernels.stick_breaking_top(uni, theta, k, rel_tol)
            if used > 0:
                break
            length *= 2
        out[row] = top
    return out


def pd_dirichlet_limit(theta: float, k: int, count: int, rng=None, n: int = DIRICHLET_ORDER) -> np.ndarray:
    """Sorted symmetric Dirichlet(theta/n, ..., theta/n) coordinates, top ``k``.

    Coordinates so small that they round to 0 relative to the largest one
    are reported as 0.
    """
    theta = _check_theta(theta)
    gen = as_generator(rng)
    a = theta / n
    # Gamma(a) = Gamma(a+1) U^{1/a}, in logs: tiny shapes underflow to 0 otherwise
    log_g = np.log(gen.standard_gamma(a + 1.0, size=(count, n))) + np.log(gen.random((count, n))) / a
    w = np.exp(log_g - log_g.max(axis=1, keepdims=True))
    x = -np.sort(-(w / w.sum(axis=1, keepdims=True)), axis=1)
    if k > n:
        x = np.pad(x, ((0, 0), (0, k - n)))
    return x[:, :k]


def poisson_points(theta: float, rng, eps: float = POISSON_CUTOFF) -> np.ndarray:
    """One draw of the Poisson process with intensity ``theta e^{-t}/t`` on ``[eps, inf)``.

    Thinning: on ``[eps, 1]`` against ``theta/t`` (log-uniform proposals,
    kept with probability ``e^{-t}``), on ``[1, inf)`` against ``theta e^{-t}``
    (shifted exponentials, kept with probability ``1/t``).
    """
    gen = as_generator(rng)
    n_low = gen.poisson(theta * math.log(1.0 / eps))
    t_low = eps ** (1.0 - gen.random(n_low))
    t_low = t_low[gen.random(n_low) < np.exp(-t_low)]
    n_high = gen.poisson(theta * math.exp(-1.0))
    t_high = 1.0 + gen.standard_exponential(n_high)
    t_high = t_high[gen.random(n_high) < 1.0 / t_high]
    return np.concatenate((t_high, t_low))


def pd_poisson(
    theta: float, k: int, count: int, rng=None, eps: float = POISSON_CUTOFF, return_sums: bool = False
):
    """PD(theta) as normalized Poisson points.

    Points below ``eps`` are not drawn; their mean total mass
    ``theta (1 - e^{-eps}) <= theta eps`` is added to the normalizer instead.
    """
    theta = _check_theta(theta)
    gen = as_generator(rng)
    # mean mass of the discarded points below eps, added to every normalizer
    below = theta * -math.expm1(-eps)
    out = np.zeros((count, k))
    sums = np.zeros(count)
    pending = np.arange(count)
    # a draw with no points above eps (probability about eps**theta) is redrawn
    while pending.size:
        m = pending.size
        n_low = gen.poisson(theta * math.log(1.0 / eps), size=m)
        t_low = eps ** (1.0 - gen.random(n_low.sum()))
        keep_low = gen.random(t_low.size) < np.exp(-t_low)
        n_high = gen.poisson(theta * math.exp(-1.0), size=m)
        t_high = 1.0 + gen.standard_exponential(n_high.sum())
        keep_high = gen.random(t_high.size) < 1.0 / t_high
        owner = np.concatenate((np.repeat(np.arange(m), n_low)[keep_low], np.repeat(np.arange(m), n_high)[keep_high]))
        t = np.concatenate((t_low[keep_low], t_high[keep_high]))
        order = np.lexsort((-t, owner))
        owner, t = owner[order], t[order]
        counts = np.bincount(owner, minlength=m)
        totals = np.bincount(owner, weights=t, minlength=m)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        rank = np.arange(t.size) - np.repeat(starts, counts)
        sel = rank < k
        rows = pending[owner[sel]]
        totals = totals + below
        out[rows, rank[sel]] = t[sel] / totals[owner[sel]]
        sums[pending] = totals
        pending = pending[counts == 0]
    return (out, sums) if return_sums else out


def sample_pd_stickbreak(theta: float, k: int, rng=None) -> SimplexPoint:
    return SimplexPoint.from_row(pd_stickbreak(theta, k, 1, rng)[0])


def sample_pd_dirichlet_limit(theta: float, n: int = DIRICHLET_ORDER, k: int = 10, rng=None) -> SimplexPoint:
    return SimplexPoint.from_row(pd_dirichlet_limit(theta, k, 1, rng, n=n)[0])


def sample_pd_poisson(theta: float, k: int, eps: float = POISSON_CUTOFF, rng=None) -> SimplexPoint:
    return SimplexPoint.from_row(pd_poisson(theta, k, 1, rng, eps=eps)[0])


SAMPLERS = {
    "stick": pd_stickbreak,
    "dirichlet": pd_dirichlet_limit,
    "poisson": pd_poisson,
}


def sample_pd(method: str, theta: float, k: int, count: int, rng=None) -> np.ndarray:
    try:
        sampler = SAMPLERS[method]
    except KeyError:
        raise ValueError(f"unknown PD method {method!r}; expected one of {sorted(SAMPLERS)}") from None
    return sampler(theta, k, count, rng)


def pd_correlation(us: Sequence[float], theta: float) -> float:
    """``theta**m (1 - sum u)**(theta-1) / prod u`` when ``sum u < 1``, else 0."""
    theta = _check_theta(theta)
    us = [float(u) for u in us]
    if any(u <= 0 for u in us):
        raise ValueError("arguments must lie in (0, 1]")
    rest = 1.0 - math.fsum(us)
    if rest <= 0:
        return 0.0
    return theta ** len(us) * rest ** (theta - 1.0) / math.prod(us)


def one_point_mass(a: float, b: float, theta: float) -> float:
    """Expected number of atoms in ``[a, b]``, the integral of the one-point function."""
    from scipy.integrate import quad

    theta = _check_theta(theta)
    b = min(b, 1.0)
    if a >= b:
        return 0.0
    val, _ = quad(lambda u: pd_correlation([u], theta), a, b, epsabs=1e-13, epsrel=1e-12)
    return val


def ewens_to_simplex(s: Permutation | Sequence[int], n: int | None = None) -> SimplexPoint:
    """Cycle lengths of ``s`` scaled by ``1/n`` (a permutation or its cycle lengths)."""
    if isinstance(s, Permutation):
        lengths = [len(c) for c in s.cycles]
        n = s.n
    else:
        lengths = [int(c) for c in s]
        n = n if n is not None else sum(lengths)
    xs = sorted((c / n for c in lengths), reverse=True)
    return SimplexPoint(tuple(xs), max(0.0, 1.0 - math.fsum(xs)))
