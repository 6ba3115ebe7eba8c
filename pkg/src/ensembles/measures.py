"""z-measures, their mixtures, RSK-Knuth pushforwards and Schur measures.

Weights keep the numeric type of their parameters: pass Fractions to get
exact rational results, floats or complex numbers otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np
from scipy import stats

from . import _kernels
from .combinat import Partition, dim, partitions, partitions_up_to, rising_factorial
from .plancherel import plancherel_weight, word_shape
from .rng import as_generator


def pochhammer_box(x, lam: Sequence[int]):
    """``(x)_lam = prod over cells (i, j) of (x + j - i)``."""
    out = 1
    for i, part in enumerate(Partition(lam), start=1):
        for j in range(1, part + 1):
            out = out * (x + j - i)
    return out


def _is_integral(x) -> bool:
    if isinstance(x, complex):
        return x.imag == 0 and float(x.real).is_integer()
    return float(x).is_integer()


def _power(base, exponent):
    """``base ** exponent`` kept exact for integral exponents."""
    if _is_integral(exponent):
        e = int(exponent.real if isinstance(exponent, complex) else exponent)
        return base**e if e >= 0 else 1 / base ** (-e)
    return base**exponent


@dataclass(frozen=True)
class ZParams:
    """Parameters ``(z, z')`` and, for mixed measures, ``xi`` in (0, 1)."""

    z: complex
    zp: complex
    xi: float | None = None

    def __post_init__(self):
        if self.xi is not None and not 0 < self.xi < 1:
            raise ValueError("xi must lie in (0, 1)")

    @property
    def principal(self) -> bool:
        return self.z != 0 and complex(self.zp) == complex(self.z).conjugate()

    def admissible(self, depth: int = 10) -> bool:
        """Principal pairs pass outright; other pairs are screened on ``|lam| <= depth``."""
        if self.principal:
            return True
        zz = complex(self.z) * complex(self.zp)
        if zz.imag != 0 or zz.real <= 0:
            return False
        for lam in partitions_up_to(depth):
            v = complex(pochhammer_box(self.z, lam) * pochhammer_box(self.zp, lam))
            if v.imag != 0 or v.real < 0:
                return False
        return True

    def check(self, depth: int = 10) -> "ZParams":
        if not self.admissible(depth):
            raise ValueError(f"inadmissible parameters z={self.z}, z'={self.zp}")
        return self


def _exact(x):
    return Fraction(x) if isinstance(x, int) else x


def _product(z, zp):
    return z * zp


def zmeasure_weight(lam: Sequence[int], z, zp):
    """``(z)_lam (z')_lam / (zz')_n * dim(lam)^2 / n!``."""
    lam = Partition(lam)
    z, zp = _exact(z), _exact(zp)
    n = lam.size
    denom = rising_factorial(_product(z, zp), n)
    if denom == 0:
        raise ZeroDivisionError(f"(zz')_{n} vanishes for zz' = {_product(z, zp)}")
    return pochhammer_box(z, lam) * pochhammer_box(zp, lam) / denom * plancherel_weight(lam)


def zmeasure_law(n: int, z, zp) -> dict[Partition, object]:
    return {lam: zmeasure_weight(lam, z, zp) for lam in partitions(n)}


def zmeasure_identity_residual(n: int, z, zp):
    """``sum (z)_lam (z')_lam dim^2 - (zz')_n n!`` over ``lam`` of size ``n``."""
    lhs = sum(pochhammer_box(z, lam) * pochhammer_box(zp, lam) * dim(lam) ** 2 for lam in partitions(n))
    return lhs - rising_factorial(_product(z, zp), n) * math.factorial(n)


def mixed_zmeasure_weight(lam: Sequence[int], z, zp, xi):
    """``(1-xi)^{zz'} xi^{|lam|} (z)_lam (z')_lam (dim lam / |lam|!)^2``."""
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    lam = Partition(lam)
    n = lam.size
    ratio = Fraction(dim(lam), math.factorial(n))
    core = xi**n * pochhammer_box(z, lam) * pochhammer_box(zp, lam) * (ratio * ratio)
    return _power(1 - xi, _product(z, zp)) * core


def negative_binomial_tail(cutoff: int, zz: float, xi: float) -> float:
    """``P(|lam| > cutoff)`` under the negative binomial law ``(1-xi)^{zz} (zz)_n xi^n / n!``."""
    return float(stats.nbinom.sf(cutoff, float(zz), 1.0 - float(xi)))


def mixed_partial_sum(cutoff: int, z, zp, xi) -> float:
    return math.fsum(float(mixed_zmeasure_weight(lam, z, zp, xi)) for lam in partitions_up_to(cutoff))


def poissonized_plancherel(lam: Sequence[int], nu: float) -> float:
    lam = Partition(lam)
    n = lam.size
    ratio = Fraction(dim(lam), math.factorial(n))
    return math.exp(-nu) * nu**n * float(ratio * ratio)


# --------------------------------------------------------------------------
# Meixner ensemble


def _y_n_lattice(N: int, cutoff: int) -> Iterator[tuple[int, ...]]:
    """Strictly decreasing ``(l_1 > ... > l_N >= 0)`` with ``l_1 <= cutoff``."""
    for ls in combinations(range(cutoff, -1, -1), N):
        yield ls


def meixner_weight(ls: Sequence[int], b, xi):
    """``prod_{i<j} (l_i - l_j)^2 prod_i (b)_{l_i} xi^{l_i} / l_i!``."""
    vdm = math.prod((a - c) ** 2 for a, c in combinations(ls, 2))
    out = vdm
    for l in ls:
        out = out * rising_factorial(b, l) * xi**l / math.factorial(l)
    return out


@dataclass
class MeixnerReport:
    N: int
    b: object
    xi: object
    constant: float
    rel_spread: float
    states: int
    support_ok: bool
    offending: list

    @property
    def passed(self) -> bool:
        return self.support_ok and self.rel_spread < 1e-10 and not self.offending


def meixner_check(N: int, b, xi, cutoff: int = 8, support_depth: int = 8) -> MeixnerReport:
    """Ratio of the mixed z-measure at ``z=N, z'=N+b-1`` to the Meixner weight on ``Y(N)``.

    ``lam`` maps to ``l_i = lam_i + N - i``. The ratio must not depend on
    ``lam``; diagrams with more than ``N`` rows must get weight 0.
    """
    z, zp = N, N + b - 1
    ratios = []
    offending = []
    for ls in _y_n_lattice(N, cutoff):
        lam = Partition(l - (N - i) for i, l in enumerate(ls, start=1))
        w = mixed_zmeasure_weight(lam, z, zp, xi)
        m = meixner_weight(ls, b, xi)
        if m == 0:
            offending.append(list(lam))
            continue
        ratios.append(float(w / m) if not isinstance(w, Fraction) or not isinstance(m, Fraction) else w / m)
    exact = all(isinstance(r, Fraction) for r in ratios)
    if exact:
        spread = 0.0 if len(set(ratios)) == 1 else float((max(ratios) - min(ratios)) / max(ratios))
    else:
        arr = np.array([float(r) for r in ratios])
        spread = float((arr.max() - arr.min()) / abs(arr.mean()))
    support_ok = True
    for n in range(N + 1, support_depth + 1):
        for lam in partitions(n):
            if len(lam) > N and mixed_zmeasure_weight(lam, z, zp, xi) != 0:
                support_ok = False
                offending.append(list(lam))
    return MeixnerReport(N, b, xi, float(ratios[0]), spread, len(ratios), support_ok, offending)


# --------------------------------------------------------------------------
# RSK-Knuth on generalized permutations and words


def biword(matrix) -> tuple[list[int], list[int]]:
    """Two-line array of a nonnegative integer matrix (1-based letters, lexicographic)."""
    m = np.asarray(matrix, dtype=np.int64)
    if np.any(m < 0):
        raise ValueError("entries must be nonnegative")
    top, bottom = [], []
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            top.extend([i + 1] * int(m[i, j]))
            bottom.extend([j + 1] * int(m[i, j]))
    return top, bottom


def rsk_knuth(matrix) -> Partition:
    """Shape of the RSK-Knuth correspondence applied to a nonnegative integer matrix."""
    _top, bottom = biword(matrix)
    return word_shape(bottom)


def generalized_permutations(N: int, Np: int, n: int) -> Iterator[np.ndarray]:
    """All ``N x Np`` nonnegative integer matrices with entry sum ``n``."""
    cells = N * Np

    def _compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in _compositions(total - first, parts - 1):
                yield (first,) + rest

    for comp in _compositions(n, cells):
        yield np.array(comp, dtype=np.int64).reshape(N, Np)


def rsk_knuth_law(N: int, Np: int, n: int) -> dict[Partition, Fraction]:
    counts: dict[Partition, int] = {}
    total = 0
    for m in generalized_permutations(N, Np, n):
        lam = rsk_knuth(m)
        counts[lam] = counts.get(lam, 0) + 1
        total += 1
    return {lam: Fraction(c, total) for lam, c in counts.items()}


def rsk_knuth_pushforward_check(N: int, Np: int, n: int) -> dict:
    """Uniform generalized permutations vs the z-measure with ``z=N, z'=Np``, exactly."""
    empirical = rsk_knuth_law(N, Np, n)
    mismatches = []
    for lam in partitions(n):
        expected = zmeasure_weight(lam, N, Np)
        got = empirical.get(lam, Fraction(0))
        if got != expected:
            mismatches.append({"shape": list(lam), "pushforward": str(got), "zmeasure": str(expected)})
    return {"N": N, "Np": Np, "n": n, "mismatches": mismatches, "passed": not mismatches}


def words_pushforward_check(N: int, n: int) -> dict:
    """Schensted shapes of all ``N**n`` words vs ``(N)_lam dim^2 / (N^n n!)``."""
    counts: dict[Partition, int] = {}
    for word in product(range(1, N + 1), repeat=n):
        lam = word_shape(word)
        counts[lam] = counts.get(lam, 0) + 1
    total = N**n
    mismatches = []
    mass = Fraction(0)
    for lam in partitions(n):
        expected = Fraction(pochhammer_box(N, lam) * dim(lam) ** 2, total * math.factorial(n))
        got = Fraction(counts.get(lam, 0), total)
        mass += expected
        if got != expected:
            mismatches.append({"shape": list(lam), "words": str(got), "formula": str(expected)})
    return {"N": N, "n": n, "total_mass": str(mass), "mismatches": mismatches, "passed": not mismatches and mass == 1}


def sample_geometric_matrix(N: int, Np: int, xi: float, rng=None) -> np.ndarray:
    """i.i.d. entries with ``P(k) = (1 - xi) xi^k``, ``k >= 0``."""
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    return as_generator(rng).geometric(1.0 - xi, size=(N, Np)) - 1


def last_passage_time(matrix) -> int:
    """Largest entry sum over up-right lattice paths from the top-left to the bottom-right cell."""
    m = np.ascontiguousarray(matrix, dtype=np.int64)
    if m.size == 0:
        return 0
    return int(_kernels.last_passage(m))


# --------------------------------------------------------------------------
# Schur measures


class InsufficientSpecialization(ValueError):
    pass


@dataclass(frozen=True)
class Specialization:
    """Values of a multiplicative functional on ``h_1, h_2, ...``.

    ``kind`` is ``"explicit"`` (``h`` lists ``h_1, h_2, ...``), ``"zxi"``
    (``h_k = xi^{k/2} (z)_k / k!``) or ``"plancherel"`` (``h_k = nu^{k/2} / k!``).
    """

    kind: str
    h: tuple = ()
    z: complex = 0
    xi: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.kind not in ("explicit", "zxi", "plancherel"):
            raise ValueError(f"unknown specialization kind {self.kind!r}")
        object.__setattr__(self, "h", tuple(self.h))

    def value(self, k: int):
        if k == 0:
            return 1
        if k < 0:
            return 0
        if self.kind == "explicit":
            if k > len(self.h):
                raise InsufficientSpecialization(f"h_{k} requested but only {len(self.h)} values given")
            return self.h[k - 1]
        if self.kind == "zxi":
            return self.xi ** (k / 2) * rising_factorial(self.z, k) / math.factorial(k)
        return self.nu ** (k / 2) / math.factorial(k)

    def to_json(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "h": list(self.h)}
        if self.kind == "zxi":
            return {"kind": "zxi", "z": self.z, "xi": self.xi}
        return {"kind": "plancherel", "nu": self.nu}

    @classmethod
    def from_json(cls, data: dict, which: str = "z") -> "Specialization":
        """Build from JSON; for a ``zxi`` pair object ``which`` picks ``"z"`` or ``"zp"``."""
        kind = data["kind"]
        if kind == "explicit":
            return cls("explicit", h=tuple(data["h"]))
        if kind == "zxi":
            return cls("zxi", z=data[which], xi=data["xi"])
        if kind == "plancherel":
            return cls("plancherel", nu=data["nu"])
        raise ValueError(f"unknown specialization kind {kind!r}")


def zxi_pair(z, zp, xi) -> tuple[Specialization, Specialization]:
    return Specialization("zxi", z=z, xi=xi), Specialization("zxi", z=zp, xi=xi)


def jacobi_trudi_matrix(lam: Sequence[int], spec: Specialization) -> np.ndarray:
    lam = Partition(lam)
    ell = len(lam)
    return np.array([[spec.value(lam[i] - i + j) for j in range(ell)] for i in range(ell)], dtype=float)


def schur_value(lam: Sequence[int], spec: Specialization) -> float:
    """``spec(s_lam) = det[spec(h_{lam_i - i + j})]``."""
    lam = Partition(lam)
    if not lam:
        return 1.0
    return float(np.linalg.det(jacobi_trudi_matrix(lam, spec)))


def schur_weight(lam: Sequence[int], phi: Specialization, psi: Specialization) -> float:
    """Unnormalized Schur-measure weight ``phi(s_lam) psi(s_lam)``."""
    return schur_value(lam, phi) * schur_value(lam, psi)


def normalize_over(phi: Specialization, psi: Specialization, max_size: int, closed_form: float | None = None) -> dict:
    """Truncated normalization ``sum_{|lam| <= max_size} phi(s_lam) psi(s_lam)``.

    With ``closed_form`` the remainder ``closed_form - truncated`` is reported
    alongside.
    """
    total = math.fsum(schur_weight(lam, phi, psi) for lam in partitions_up_to(max_size))
    out = {"max_size": max_size, "truncated_sum": total}
    if closed_form is not None:
        out["closed_form"] = float(closed_form)
        out["remainder"] = float(closed_form) - total
    return out


def zxi_normalization(z, zp, xi) -> float:
    """Closed form ``(1-xi)^{-zz'}`` of the z-specialized Schur normalization."""
    return float((1.0 - xi) ** (-(z * zp)))


def schur_measure(lam: Sequence[int], phi: Specialization, psi: Specialization, constant: float) -> float:
    return schur_weight(lam, phi, psi) / constant
