"""Verification suites: each returns a list of :class:`Check` records.

Suites draw randomness only from :func:`ensembles.rng.stream` with fixed
chunk indices, so a suite run is a pure function of its seed and parameters.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np
from scipy import stats

from . import ewens, kernels, measures, pdirichlet, plancherel
from .combinat import Partition, all_permutations, dim, partitions, partitions_up_to
from .rng import stream


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    measured: object
    tolerance: object
    runtime: float = field(default=0.0, compare=False)

    def to_json(self, timing: bool = False) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "measured": self.measured,
            "tolerance": self.tolerance,
            "runtime": round(self.runtime, 3) if timing else None,
        }


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _timed(checks: list[Check], func: Callable[[], Check]) -> None:
    with _Timer() as t:
        check = func()
    check.runtime = t.elapsed
    checks.append(check)


def _exact_mismatches(a: dict, b: dict) -> int:
    keys = set(a) | set(b)
    return sum(1 for k in keys if a.get(k, 0) != b.get(k, 0))


def _chisquare(observed: dict, probs: dict, total: int, min_expected: float = 5.0) -> tuple[float, int]:
    """Chi-square p-value, lumping categories with expected count below ``min_expected``."""
    keys = sorted(probs, key=lambda k: -float(probs[k]))
    obs, exp = [], []
    lump_obs = 0
    for k in keys:
        p = float(probs[k])
        if p * total >= min_expected:
            obs.append(observed.get(k, 0))
            exp.append(p * total)
        else:
            lump_obs += observed.get(k, 0)
    lump_obs += sum(v for k, v in observed.items() if k not in probs)
    lump_p = max(0.0, 1.0 - sum(exp) / total)
    if lump_p * total >= min_expected:
        obs.append(lump_obs)
        exp.append(lump_p * total)
    elif lump_obs:
        # a category the law says is (nearly) impossible showed up
        obs.append(lump_obs)
        exp.append(max(lump_p * total, 1e-12))
    exp = np.array(exp)
    exp *= sum(obs) / exp.sum()
    res = stats.chisquare(obs, exp)
    return float(res.pvalue), len(obs)


# --------------------------------------------------------------------------


def ewens_exact(seed: int = 7) -> list[Check]:
    checks: list[Check] = []
    thetas = (Fraction(1, 2), Fraction(1), Fraction(2))

    def insertion():
        bad = 0
        for theta in thetas:
            for n in range(1, 7):
                law = ewens.insertion_law(n, theta)
                target = {s: ewens.ewens_weight(s, theta) for s in all_permutations(n)}
                bad += _exact_mismatches(law, target)
        return Check("insertion sampler law equals Ewens weights (n<=6)", "Ewens measure", bad == 0, bad, 0)

    def projection():
        bad = 0
        for theta in thetas:
            for n in range(2, 7):
                upper = {s: ewens.ewens_weight(s, theta) for s in all_permutations(n)}
                pushed = ewens.pushforward(upper, ewens.canonical_projection)
                lower = {s: ewens.ewens_weight(s, theta) for s in all_permutations(n - 1)}
                bad += _exact_mismatches(pushed, lower)
        return Check("canonical projection pushes Ewens_n to Ewens_{n-1} (n<=6)", "projective consistency", bad == 0, bad, 0)

    def esf():
        bad = 0
        for theta in thetas:
            for n in range(1, 9):
                law = ewens.esf_law(n, theta)
                if sum(law.values()) != 1:
                    bad += 1
                bad += _exact_mismatches(law, ewens.conjugacy_class_aggregate(n, theta))
        return Check("Ewens sampling formula sums to 1 and matches class aggregation (n<=8)", "Ewens sampling formula", bad == 0, bad, 0)

    for f in (insertion, projection, esf):
        _timed(checks, f)
    return checks


def pd_cross(seed: int = 7, samples: int = 10_000) -> list[Check]:
    checks: list[Check] = []
    thetas = (0.5, 1.0, 2.0)
    methods = ("stick", "dirichlet", "poisson")
    draws: dict[tuple[float, str], np.ndarray] = {}
    for i, theta in enumerate(thetas):
        for j, method in enumerate(methods):
            k = 10 if method == "stick" else 1
            draws[theta, method] = pdirichlet.sample_pd(method, theta, k, samples, stream(seed, "pdirichlet", 3 * i + j))

    def ks():
        worst = 1.0
        for theta in thetas:
            for a, b in combinations(methods, 2):
                p = stats.ks_2samp(draws[theta, a][:, 0], draws[theta, b][:, 0]).pvalue
                worst = min(worst, float(p))
        return Check("pairwise two-sample KS on x1, three samplers", "PD(theta) descriptions agree", worst > 0.01, worst, "p > 0.01")

    def intensity():
        edges = np.linspace(0.1, 0.9, 9)
        worst = 0.0
        for theta in thetas:
            atoms = draws[theta, "stick"]
            for lo, hi in zip(edges[:-1], edges[1:]):
                per_draw = ((atoms >= lo) & (atoms < hi)).sum(axis=1)
                se = per_draw.std(ddof=1) / math.sqrt(samples)
                z = abs(per_draw.mean() - pdirichlet.one_point_mass(lo, hi, theta)) / se
                worst = max(worst, float(z))
        return Check("binned one-point intensity on [0.1, 0.9]", "PD correlation functions", worst <= 3.0, worst, "<= 3 SE")

    def largest():
        x1 = draws[1.0, "stick"][:, 0]
        worst = 0.0
        for a in (0.5, 0.7, 0.9):
            p = math.log(1.0 / a)
            se = math.sqrt(p * (1 - p) / samples)
            worst = max(worst, abs(float(np.mean(x1 >= a)) - p) / se)
        return Check("theta=1: P(x1 >= a) = ln(1/a)", "PD(1) largest atom", worst <= 3.0, worst, "<= 3 SE")

    for f in (ks, intensity, largest):
        _timed(checks, f)
    return checks


def _lis_quadratic(seq) -> int:
    best = [1] * len(seq)
    for i in range(len(seq)):
        for j in range(i):
            if seq[j] < seq[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best, default=0)


def plancherel_exact(seed: int = 7, samples: int = 100_000) -> list[Check]:
    checks: list[Check] = []

    def burnside():
        bad = [n for n in range(13) if sum(dim(lam) ** 2 for lam in partitions(n)) != math.factorial(n)]
        return Check("sum of dim^2 over partitions of n equals n! (n<=12)", "Burnside identity", not bad, len(bad), 0)

    def rsk_law():
        bad = sum(_exact_mismatches(plancherel.rsk_shape_law(n), plancherel.plancherel_law(n)) for n in range(1, 9))
        return Check("RSK shape law equals Plancherel weights (n<=8)", "Plancherel measure via RSK", bad == 0, bad, 0)

    def growth():
        bad = sum(_exact_mismatches(plancherel.growth_law(n), plancherel.plancherel_law(n)) for n in range(1, 9))
        return Check("growth-process law equals Plancherel weights (n<=8)", "Plancherel growth", bad == 0, bad, 0)

    def ulam():
        bad = 0
        for s in all_permutations(7):
            lam1 = plancherel.rsk(s)[0].shape[0]
            if plancherel.lis_length(s) != lam1 or _lis_quadratic(s.images) != lam1:
                bad += 1
        return Check("LIS equals first row of the RSK shape on all of S_7", "Ulam problem and RSK", bad == 0, bad, 0)

    def roundtrip():
        bad = 0
        seen = set()
        for s in all_permutations(6):
            p, q = plancherel.rsk(s)
            seen.add((p, q))
            if plancherel.rsk_inverse(p, q) != s:
                bad += 1
        bad += math.factorial(6) - len(seen)
        return Check("RSK round trip and injectivity on S_6", "RSK bijection", bad == 0, bad, 0)

    def hookwalk():
        worst = 1.0
        for n in range(2, 7):
            gen = stream(seed, "plancherel", n)
            counts: dict[Partition, int] = {}
            for _ in range(samples):
                lam = plancherel.sample_plancherel_hookwalk(n, gen)
                counts[lam] = counts.get(lam, 0) + 1
            p, _ = _chisquare(counts, plancherel.plancherel_law(n), samples)
            worst = min(worst, p)
        return Check("growth sampler chi-square vs exact weights (2<=n<=6)", "Plancherel growth sampler", worst > 0.01, worst, "p > 0.01")

    for f in (burnside, rsk_law, growth, ulam, roundtrip, hookwalk):
        _timed(checks, f)
    return checks


def limit_shape(seed: int = 7, samples: int = 50, sizes: tuple[int, int] = (100, 6400)) -> list[Check]:
    checks: list[Check] = []

    def trend():
        medians = []
        for i, n in enumerate(sizes):
            gen = stream(seed, "plancherel", 100 + i)
            d = [plancherel.sup_distance_to_omega(plancherel.sample_plancherel_rsk(n, gen)) for _ in range(samples)]
            medians.append(float(np.median(d)))
        ratio = medians[1] / medians[0]
        return Check(
            f"median sup-distance to Omega shrinks more than 2x from n={sizes[0]} to n={sizes[1]}",
            "limit shape",
            ratio < 0.5,
            {"medians": medians, "ratio": ratio},
            "ratio < 0.5",
        )

    def area():
        a = plancherel.omega_area()
        return Check("area between Omega and |x| equals 2", "limit shape normalization", abs(a - 2) < 1e-9, a, "|area - 2| < 1e-9")

    for f in (area, trend):
        _timed(checks, f)
    return checks


def kerov_clt(seed: int = 7, n: int = 4000, samples: int = 2000, series_samples: int = 100_000) -> list[Check]:
    checks: list[Check] = []
    coeffs = (0.0, 0.0, 1.0)

    def variance():
        gen = stream(seed, "plancherel", 200)
        vals = [plancherel.fluctuation_integral(plancherel.sample_plancherel_rsk(n, gen), coeffs) for _ in range(samples)]
        emp = float(np.var(vals, ddof=1))
        series = plancherel.sample_kerov_process(coeffs, plancherel.KEROV_TERMS, stream(seed, "plancherel", 201), series_samples)
        ref = float(np.var(series, ddof=1))
        rel = abs(emp - ref) / ref
        return Check(
            "variance of the x^2 fluctuation integral vs the random series",
            "Kerov central limit theorem",
            rel < 0.15,
            {"empirical": emp, "series": ref, "relative_gap": rel},
            "relative gap < 0.15",
        )

    _timed(checks, variance)
    return checks


def determinantal(seed: int = 7, nu: float = 2.0, window: int = 6, cutoff: int = 30, tol: float = 1e-6) -> list[Check]:
    checks: list[Check] = []
    report: dict = {}

    def identity():
        report.update(kernels.determinantal_check(nu, window, cutoff, 2))
        err = report["max_abs_error"]
        return Check(
            "det[J] equals the brute-force correlation on all subsets of size <= 2",
            "discrete Bessel determinantal structure",
            err < tol,
            {"max_abs_error": err, "subsets": report["subsets_checked"]},
            tol,
        )

    def tail():
        t = report["tail_bound"]
        return Check("Poisson tail beyond the partition cutoff", "oracle truncation", t < 1e-9, t, 1e-9)

    for f in (identity, tail):
        _timed(checks, f)
    return checks


def bulk_limit(seed: int = 7, nus: tuple = (100.0, 400.0, 1600.0), alphas: tuple = (0.0, 0.5, 1.0)) -> list[Check]:
    checks: list[Check] = []
    for a in alphas:

        def one(a=a):
            rows = kernels.bulk_limit_check(a, nus)
            errs = [r["max_error"] for r in rows]
            ok = all(e1 < e0 for e0, e1 in zip(errs, errs[1:]))
            return Check(f"Bessel-to-sine error decreases in nu at a={a}", "discrete sine bulk limit", ok, errs, "strictly decreasing")

        _timed(checks, one)
    return checks


def zmeasures_suite(seed: int = 7) -> list[Check]:
    checks: list[Check] = []

    def normalization():
        worst = 0.0
        for z, zp in ((2, 3), (1.5, 1.5), (0.5, 4)):
            for n in range(1, 9):
                scale = abs(float(measures.rising_factorial(z * zp, n))) * math.factorial(n)
                worst = max(worst, abs(float(measures.zmeasure_identity_residual(n, z, zp))) / scale)
        return Check("sum (z)_lam (z')_lam dim^2 = (zz')_n n! (n<=8)", "z-measure normalization", worst < 1e-10, worst, 1e-10)

    def degeneration():
        nu = 2.0
        errs = []
        for t in (10, 100, 1000):
            xi = nu / t**2
            errs.append(
                max(
                    abs(float(measures.mixed_zmeasure_weight(lam, t, t, xi)) - measures.poissonized_plancherel(lam, nu))
                    for lam in partitions_up_to(4)
                )
            )
        ok = all(e1 < e0 for e0, e1 in zip(errs, errs[1:])) and errs[-1] < 1e-2
        return Check("mixed z-measure at z=z'=t, xi=2/t^2 approaches poissonized Plancherel", "Plancherel degeneration", ok, errs, "decreasing, last < 1e-2")

    def fixed_n():
        errs = []
        law = plancherel.plancherel_law(5)
        for t in (10, 100, 1000):
            errs.append(max(abs(float(measures.zmeasure_weight(lam, t, t)) - float(p)) for lam, p in law.items()))
        ok = all(e1 < e0 for e0, e1 in zip(errs, errs[1:])) and errs[-1] < 1e-2
        return Check("z-measure at z=z'=t approaches Plancherel on partitions of 5", "Plancherel degeneration", ok, errs, "decreasing, last < 1e-2")

    def tails():
        worst = 0.0
        ok = True
        for z, zp, xi in ((2, 3, 0.3), (1.5, 1.5, 0.5), (0.5, 4, 0.2)):
            for L in (4, 8, 12):
                s = measures.mixed_partial_sum(L, z, zp, xi)
                gap = 1.0 - s
                tail = measures.negative_binomial_tail(L, z * zp, xi)
                ok &= s <= 1 + 1e-12 and abs(gap - tail) <= 1e-10
                worst = max(worst, abs(gap - tail))
        return Check("mixed partial sums fall short of 1 by the negative-binomial tail", "negative binomial mixture", ok, worst, 1e-10)

    def meixner():
        worst = 0.0
        ok = True
        for N in (1, 2, 3):
            for b in (1.0, 2.5):
                rep = measures.meixner_check(N, b, 0.3, cutoff=8)
                ok &= rep.passed
                worst = max(worst, rep.rel_spread)
        return Check("z=N, z'=N+b-1 gives the Meixner ensemble on Y(N)", "Meixner correspondence", ok, worst, 1e-10)

    for f in (normalization, degeneration, fixed_n, tails, meixner):
        _timed(checks, f)
    return checks


def schur_vs_z(seed: int = 7, z: float = 2.0, zp: float = 3.0, xi: float = 0.3, lmax: int = 24) -> list[Check]:
    checks: list[Check] = []
    phi, psi = measures.zxi_pair(z, zp, xi)

    def pointwise():
        pre = (1 - xi) ** (z * zp)
        worst = max(
            abs(measures.schur_weight(lam, phi, psi) * pre - float(measures.mixed_zmeasure_weight(lam, z, zp, xi)))
            for lam in partitions_up_to(6)
        )
        return Check("Schur weight under the z-specialization equals the mixed z-measure (|lam|<=6)", "Schur measures", worst < 1e-10, worst, 1e-10)

    def normalization():
        closed = measures.zxi_normalization(z, zp, xi)
        rep = measures.normalize_over(phi, psi, lmax, closed)
        # the missing relative mass is exactly the negative-binomial tail beyond lmax
        rel = rep["remainder"] / closed
        gap = abs(rel - measures.negative_binomial_tail(lmax, z * zp, xi))
        return Check("(1-xi)^(-zz') vs truncated summation plus tail", "Schur normalization constant", gap < 1e-10, gap, 1e-10)

    for f in (pointwise, normalization):
        _timed(checks, f)
    return checks


def rsk_pushforwards(seed: int = 7, samples: int = 100_000, xi: float = 0.2) -> list[Check]:
    checks: list[Check] = []

    def matrices():
        bad = sum(len(measures.rsk_knuth_pushforward_check(2, 2, n)["mismatches"]) for n in range(1, 5))
        return Check("uniform 2x2 matrices of sum n push to the z-measure z=z'=2 (n<=4)", "generalized permutations", bad == 0, bad, 0)

    def words():
        bad = sum(0 if measures.words_pushforward_check(2, n)["passed"] else 1 for n in range(1, 7))
        return Check("uniform words on 2 letters push to (2)_lam dim^2/(2^n n!) (n<=6)", "random words", bad == 0, bad, 0)

    def geometric():
        gen = stream(seed, "measures", 0)
        mats = gen.geometric(1.0 - xi, size=(samples, 2, 2)) - 1
        counts: dict[Partition, int] = {}
        for m in mats:
            lam = measures.rsk_knuth(m)
            counts[lam] = counts.get(lam, 0) + 1
        probs = {lam: float(measures.mixed_zmeasure_weight(lam, 2, 2, xi)) for lam in partitions_up_to(20) if len(lam) <= 2}
        p, _ = _chisquare(counts, probs, samples)
        return Check("geometric 2x2 matrices: shape law chi-square vs mixed z-measure", "geometric matrices", p > 0.01, p, "p > 0.01")

    for f in (matrices, words, geometric):
        _timed(checks, f)
    return checks


def lpp(seed: int = 7, samples: int = 10_000) -> list[Check]:
    checks: list[Check] = []

    def identity():
        gen = stream(seed, "measures", 1)
        bad = 0
        for _ in range(samples):
            shape = gen.integers(1, 6, size=2)
            m = gen.integers(0, 5, size=tuple(shape))
            lam = measures.rsk_knuth(m)
            if measures.last_passage_time(m) != (lam[0] if lam else 0):
                bad += 1
        return Check("last passage time equals the first row of the RSK-Knuth shape", "last passage percolation", bad == 0, bad, 0)

    _timed(checks, identity)
    return checks


SUITES: dict[str, Callable[..., list[Check]]] = {
    "ewens-exact": ewens_exact,
    "pd-cross": pd_cross,
    "plancherel-exact": plancherel_exact,
    "limit-shape": limit_shape,
    "kerov-clt": kerov_clt,
    "determinantal": determinantal,
    "bulk-limit": bulk_limit,
    "zmeasures": zmeasures_suite,
    "schur-vs-z": schur_vs_z,
    "rsk-pushforwards": rsk_pushforwards,
    "lpp": lpp,
}


def run_suite(name: str, seed: int = 7, **params) -> dict:
    """Run one suite and assemble its report (without timings)."""
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}") from None
    checks = suite(seed=seed, **params)
    return {
        "suite": name,
        "seed": seed,
        "params": {k: v for k, v in sorted(params.items())},
        "status": "pass" if all(c.passed for c in checks) else "fail",
        "checks": checks,
    }
