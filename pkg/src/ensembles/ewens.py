"""Ewens measures on S_n, their cycle-type pushforward and consistent sampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .combinat import Partition, Permutation, class_size, partitions, rising_factorial
from .rng import as_generator


@dataclass(frozen=True)
class EwensParams:
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta}")


def _theta(theta):
    if isinstance(theta, EwensParams):
        theta = theta.theta
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    return theta


def ewens_weight(s: Permutation, theta):
    """``theta**cycles / (theta)_n``. Exact when ``theta`` is a Fraction or int."""
    theta = _theta(theta)
    if isinstance(theta, int):
        theta = Fraction(theta)
    return theta**s.num_cycles / rising_factorial(theta, s.n)


def canonical_projection(s: Permutation) -> Permutation:
    """Remove ``n`` from its cycle: S_n -> S_{n-1}.

    For ``n == 1`` this returns the empty permutation.
    """
    n = s.n
    if n == 0:
        raise ValueError("S_0 has no projection")
    img = list(s.images[:-1])
    s_n = s.images[-1]
    return Permutation(s_n if v == n else v for v in img)


def cycle_type(s: Permutation) -> Partition:
    return Partition(sorted((len(c) for c in s.cycles), reverse=True))


def esf_weight(rho: Sequence[int], theta):
    """Ewens sampling formula ``n! theta**l(rho) / ((theta)_n z_rho)``.

    The ``n!`` makes this the cycle-type law of the Ewens measure, i.e.
    ``class_size(rho) * ewens_weight(s, theta)`` for ``s`` of type ``rho``.
    """
    theta = _theta(theta)
    if isinstance(theta, int):
        theta = Fraction(theta)
    rho = Partition(rho)
    return class_size(rho) * theta ** len(rho) / rising_factorial(theta, rho.size)


def esf_law(n: int, theta) -> dict[Partition, object]:
    return {rho: esf_weight(rho, theta) for rho in partitions(n)}


def _insertion_uniforms(n: int, rng) -> np.ndarray:
    return as_generator(rng).random(n)


def sample_ewens(n: int, theta, rng=None) -> Permutation:
    """Exact Ewens(theta) sample on S_n by sequential insertion.

    Element ``k`` starts a new cycle with probability ``theta/(theta+k-1)``,
    otherwise it is spliced in right after one of ``1..k-1`` chosen uniformly.
    Truncating the insertion after ``m`` steps gives the canonical projection
    of the result to S_m.
    """
    theta = float(_theta(theta))
    if n < 0:
        raise ValueError("n must be nonnegative")
    nxt = _kernels.ewens_insertion(_insertion_uniforms(n, rng), theta)
    return Permutation.from_zero_based(nxt)


def sample_ewens_cycle_lengths(n: int, theta, rng=None) -> np.ndarray:
    """Cycle lengths of an Ewens sample, sorted decreasingly (no Permutation object)."""
    theta = float(_theta(theta))
    nxt = _kernels.ewens_insertion(_insertion_uniforms(n, rng), theta)
    return np.sort(_kernels.cycle_lengths(nxt))[::-1]


@dataclass(frozen=True)
class VirtualPermutationPrefix:
    """Levels ``(sigma_1, ..., sigma_N)`` with ``sigma_{n-1} = p(sigma_n)``."""

    levels: tuple[Permutation, ...]

    def is_consistent(self) -> bool:
        for lower, upper in zip(self.levels, self.levels[1:]):
            if canonical_projection(upper) != lower:
                return False
        return all(p.n == i for i, p in enumerate(self.levels, start=1))

    def __len__(self) -> int:
        return len(self.levels)


def _truncate(nxt: np.ndarray, m: int) -> list[int]:
    """Images of 1..m after deleting elements > m from their cycles."""
    out = []
    for i in range(m):
        j = nxt[i]
        while j >= m:
            j = nxt[j]
        out.append(int(j) + 1)
    return out


def sample_virtual_prefix(N: int, theta, rng=None) -> VirtualPermutationPrefix:
    if N < 1:
        raise ValueError("N must be at least 1")
    theta = float(_theta(theta))
    nxt = _kernels.ewens_insertion(_insertion_uniforms(N, rng), theta)
    return VirtualPermutationPrefix(tuple(Permutation(_truncate(nxt, m)) for m in range(1, N + 1)))


def insertion_law(n: int, theta) -> dict[Permutation, object]:
    """Exact law of :func:`sample_ewens` by multiplying step probabilities along every path.

    Works in rational arithmetic when ``theta`` is a Fraction. Does not use
    the Ewens formula; it is the independent side of the exactness check.
    """
    theta = _theta(theta)
    if isinstance(theta, int):
        theta = Fraction(theta)
    law: dict[tuple, object] = {(): Fraction(1) if isinstance(theta, Fraction) else 1.0}
    for k in range(n):
        denom = theta + k
        nxt_law: dict[tuple, object] = {}
        for succ, p in law.items():
            fixed = succ + (k,)
            nxt_law[fixed] = nxt_law.get(fixed, 0) + p * theta / denom
            for j in range(k):
                s = list(succ) + [succ[j]]
                s[j] = k
                key = tuple(s)
                nxt_law[key] = nxt_law.get(key, 0) + p / denom
        law = nxt_law
    return {Permutation.from_zero_based(k): v for k, v in law.items()}


def pushforward(law: dict[Permutation, object], func) -> dict:
    out: dict = {}
    for s, p in law.items():
        key = func(s)
        out[key] = out.get(key, 0) + p
    return out


def conjugacy_class_aggregate(n: int, theta) -> dict[Partition, object]:
    """Cycle-type law obtained by summing ``ewens_weight`` over all of S_n."""
    from .combinat import all_permutations

    theta = _theta(theta)
    if isinstance(theta, int):
        theta = Fraction(theta)
    denom = rising_factorial(theta, n)
    powers = [theta**c / denom for c in range(n + 1)]
    return pushforward({s: powers[s.num_cycles] for s in all_permutations(n)}, cycle_type)


__all__ = [
    "EwensParams",
    "VirtualPermutationPrefix",
    "canonical_projection",
    "conjugacy_class_aggregate",
    "cycle_type",
    "esf_law",
    "esf_weight",
    "ewens_weight",
    "insertion_law",
    "pushforward",
    "sample_ewens",
    "sample_ewens_cycle_lengths",
    "sample_virtual_prefix",
]
