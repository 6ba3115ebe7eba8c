"""Partitions, permutations, Young diagram profiles and particle configurations.

All counting here is done in Python integers (arbitrary precision). Floating
point only enters through :class:`Profile`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations as _itertools_permutations
from typing import Iterable, Iterator, Sequence

import numpy as np


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``. The empty tuple is the empty diagram.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be nonnegative: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def row(self, i: int) -> int:
        """Length of row ``i`` (1-based); zero past the last row."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self))

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, part in enumerate(self, start=1):
            for j in range(1, part + 1):
                yield i, j

    def contents(self) -> list[int]:
        return [j - i for i, j in self.boxes()]

    def transpose(self) -> "Partition":
        return transpose(self)

    def addable_cells(self) -> list[tuple[int, int]]:
        cells = []
        for i in range(1, len(self) + 2):
            if i == 1 or self.row(i - 1) > self.row(i):
                cells.append((i, self.row(i) + 1))
        return cells

    def removable_cells(self) -> list[tuple[int, int]]:
        return [(i, self[i - 1]) for i in range(1, len(self) + 1) if self.row(i + 1) < self[i - 1]]

    def add_cell(self, i: int) -> "Partition":
        parts = list(self) + [0]
        parts[i - 1] += 1
        return Partition(parts)

    def remove_cell(self, i: int) -> "Partition":
        parts = list(self)
        parts[i - 1] -= 1
        return Partition(parts)


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        return
    if n == 0:
        yield Partition()
        return

    def _gen(remaining: int, cap: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in _gen(remaining - first, first):
                yield (first,) + rest

    for parts in _gen(n, n):
        yield Partition(parts)


def partitions_up_to(n_max: int) -> Iterator[Partition]:
    for n in range(n_max + 1):
        yield from partitions(n)


def partitions_with_rows(n: int, max_rows: int) -> Iterator[Partition]:
    """Partitions of ``n`` with at most ``max_rows`` nonzero parts."""
    return (lam for lam in partitions(n) if len(lam) <= max_rows)


def transpose(lam: Sequence[int]) -> Partition:
    lam = Partition(lam)
    if not lam:
        return Partition()
    return Partition(sum(1 for part in lam if part >= i) for i in range(1, lam[0] + 1))


def hook_lengths(lam: Sequence[int]) -> dict[tuple[int, int], int]:
    lam = Partition(lam)
    conj = transpose(lam)
    return {(i, j): (lam[i - 1] - j) + (conj[j - 1] - i) + 1 for i, j in lam.boxes()}


def dim(lam: Sequence[int]) -> int:
    """Number of standard tableaux of shape ``lam`` (hook length formula)."""
    lam = Partition(lam)
    return math.factorial(lam.size) // math.prod(hook_lengths(lam).values())


@lru_cache(maxsize=None)
def _syt_count(parts: tuple[int, ...]) -> int:
    if not parts:
        return 1
    total = 0
    for i in range(len(parts)):
        nxt = parts[i + 1] if i + 1 < len(parts) else 0
        if parts[i] > nxt:
            smaller = list(parts)
            smaller[i] -= 1
            while smaller and smaller[-1] == 0:
                smaller.pop()
            total += _syt_count(tuple(smaller))
    return total


def standard_tableaux_count(lam: Sequence[int]) -> int:
    """Count standard tableaux by removing the cell holding the largest entry.

    Independent of :func:`dim`: no hook lengths involved.
    """
    return _syt_count(tuple(Partition(lam)))


def z_factor(rho: Sequence[int]) -> int:
    """``z_rho = prod_k k**m_k * m_k!``, the centralizer order of cycle type ``rho``."""
    return math.prod(k**m * math.factorial(m) for k, m in Counter(Partition(rho)).items())


def class_size(rho: Sequence[int]) -> int:
    """Size ``n!/z_rho`` of the conjugacy class of cycle type ``rho`` in S_n."""
    rho = Partition(rho)
    return math.factorial(rho.size) // z_factor(rho)


def rising_factorial(x, n: int):
    """Pochhammer symbol ``x (x+1) ... (x+n-1)``; keeps the type of ``x``."""
    out = 1 if not isinstance(x, float) else 1.0
    for k in range(n):
        out = out * (x + k)
    return out


# --------------------------------------------------------------------------
# Permutations


class Permutation:
    """A bijection of ``{1..n}`` stored in one-line notation.

    ``images[i-1]`` is the image of ``i``. Instances are immutable and
    hashable; the cycle decomposition is computed once on first use.
    """

    __slots__ = ("images", "__dict__")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(v) for v in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        if name == "images":
            raise AttributeError("Permutation is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> "Permutation":
        cycles = [tuple(c) for c in cycles]
        if n is None:
            n = max((max(c) for c in cycles if c), default=0)
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def from_zero_based(cls, images: Sequence[int]) -> "Permutation":
        return cls(int(v) + 1 for v in images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        if not self.images:
            return "()"
        sep = "" if self.n < 10 else " "
        return "".join("(" + sep.join(map(str, c)) + ")" for c in self.cycles)

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles, each starting at its smallest element, ordered by that element."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def num_cycles(self) -> int:
        return len(self.cycles)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first."""
        return Permutation(self.images[v - 1] for v in other.images)

    def is_involution(self) -> bool:
        return all(self.images[v - 1] == i for i, v in enumerate(self.images, start=1))

    def to_json(self) -> list[int]:
        return list(self.images)


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in _itertools_permutations(range(1, n + 1)):
        yield Permutation(images)


# --------------------------------------------------------------------------
# Profiles in rotated coordinates x = s - r, y = r + s


@dataclass(frozen=True)
class Profile:
    """The boundary of a diagram as the piecewise-linear graph ``y = lam(x)``.

    ``breakpoints`` interleave local minima and maxima (first and last are
    minima), ``values`` are the heights there; both are already multiplied
    by ``scale``. Outside ``[breakpoints[0], breakpoints[-1]]`` the profile
    is ``|x|``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    scale: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.interp(x, self.breakpoints, self.values)
        out = np.where((x < self.breakpoints[0]) | (x > self.breakpoints[-1]), np.abs(x), inside)
        return out if out.ndim else float(out)

    @property
    def minima(self) -> np.ndarray:
        return self.breakpoints[::2]

    @property
    def maxima(self) -> np.ndarray:
        return self.breakpoints[1::2]

    def area(self) -> float:
        """Area between the profile and ``y = |x|``."""
        x, y = self.breakpoints, self.values
        under_profile = float(np.sum((y[1:] + y[:-1]) * np.diff(x)) / 2.0)
        return under_profile - (x[0] ** 2 + x[-1] ** 2) / 2.0


def profile(lam: Sequence[int], scale: float = 1.0) -> Profile:
    """Profile of ``lam`` shrunk by ``scale`` along both axes.

    Local minima sit at the contents of addable cells and maxima at the
    contents of removable cells, shifted by one: a cell ``(i, j)`` covers
    ``j - i - 1 <= x <= j - i + 1``.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    lam = Partition(lam)
    mins = [(j - 1 - (i - 1), (i - 1) + (j - 1)) for i, j in lam.addable_cells()]
    maxs = [(j - i, i + j) for i, j in lam.removable_cells()]
    pts = sorted(mins + maxs)
    x = np.array([p[0] for p in pts], dtype=float) * scale
    y = np.array([p[1] for p in pts], dtype=float) * scale
    return Profile(x, y, float(scale))


# --------------------------------------------------------------------------
# Particle configurations on the half-integer lattice, stored doubled


@dataclass(frozen=True)
class PointConfiguration:
    """The set ``{lam_i - i + 1/2}`` as finitely many deviations from ``Z'_-``.

    ``positives`` holds the particles on ``Z'_+`` and ``negative_holes`` the
    empty sites of ``Z'_-``, both as doubled integers (site ``x`` is stored
    as the odd integer ``2x``).
    """

    positives: frozenset = field(default_factory=frozenset)
    negative_holes: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "positives", frozenset(int(v) for v in self.positives))
        object.__setattr__(self, "negative_holes", frozenset(int(v) for v in self.negative_holes))
        if any(v % 2 == 0 or v < 0 for v in self.positives):
            raise ValueError("positives must be positive odd (doubled half-integers)")
        if any(v % 2 == 0 or v > 0 for v in self.negative_holes):
            raise ValueError("negative_holes must be negative odd (doubled half-integers)")

    @property
    def balanced(self) -> bool:
        return len(self.positives) == len(self.negative_holes)

    def contains(self, doubled_site: int) -> bool:
        if doubled_site > 0:
            return doubled_site in self.positives
        return doubled_site not in self.negative_holes

    def particles(self, count: int) -> list[Fraction]:
        """The ``count`` largest particles as exact half-integers."""
        out = []
        site = max(self.positives, default=-1)
        while len(out) < count:
            if self.contains(site):
                out.append(Fraction(site, 2))
            site -= 2
        return out

    def to_json(self) -> dict:
        return {"positives": sorted(self.positives), "negative_holes": sorted(self.negative_holes)}

    @classmethod
    def from_json(cls, data: dict) -> "PointConfiguration":
        return cls(frozenset(data["positives"]), frozenset(data["negative_holes"]))


def to_point_configuration(lam: Sequence[int]) -> PointConfiguration:
    lam = Partition(lam)
    sites = {2 * part - 2 * i + 1 for i, part in enumerate(lam, start=1)}
    depth = len(lam)
    holes = {-(2 * k - 1) for k in range(1, depth + 1)} - sites
    return PointConfiguration(frozenset(s for s in sites if s > 0), frozenset(holes))


def from_point_configuration(config: PointConfiguration) -> Partition:
    if not config.balanced:
        raise ValueError(
            f"unbalanced configuration: {len(config.positives)} particles on Z'_+ "
            f"but {len(config.negative_holes)} holes on Z'_-"
        )
    depth = (1 - min(config.negative_holes)) // 2 if config.negative_holes else 0
    parts = [Fraction(p) + i - Fraction(1, 2) for i, p in enumerate(config.particles(depth), start=1)]
    return Partition(int(p) for p in parts)


def frobenius_coordinates(lam: Sequence[int]) -> tuple[list[Fraction], list[Fraction]]:
    """Modified Frobenius coordinates ``(lam_i - i + 1/2, lam'_i - i + 1/2)`` over the diagonal."""
    lam = Partition(lam)
    conj = transpose(lam)
    d = sum(1 for i, part in enumerate(lam, start=1) if part >= i)
    half = Fraction(1, 2)
    return [lam[i - 1] - i + half for i in range(1, d + 1)], [conj[i - 1] - i + half for i in range(1, d + 1)]
