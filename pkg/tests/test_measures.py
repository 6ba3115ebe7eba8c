import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ensembles.combinat import Partition, Permutation, all_permutations, partitions, partitions_up_to, rising_factorial
from ensembles.measures import (
    InsufficientSpecialization,
    Specialization,
    ZParams,
    biword,
    generalized_permutations,
    last_passage_time,
    meixner_check,
    mixed_partial_sum,
    mixed_zmeasure_weight,
    negative_binomial_tail,
    normalize_over,
    pochhammer_box,
    rsk_knuth,
    rsk_knuth_pushforward_check,
    sample_geometric_matrix,
    schur_value,
    schur_weight,
    words_pushforward_check,
    zmeasure_identity_residual,
    zmeasure_law,
    zmeasure_weight,
    zxi_normalization,
    zxi_pair,
)
from ensembles.plancherel import plancherel_law, rsk
from ensembles.rng import stream


def test_pochhammer_box():
    x = Fraction(7, 3)
    assert pochhammer_box(x, (2, 1)) == x * (x + 1) * (x - 1)
    assert pochhammer_box(x, (4,)) == rising_factorial(x, 4)
    assert pochhammer_box(2, (3, 3, 1)) == 0
    assert pochhammer_box(x, ()) == 1


def test_admissibility_screen():
    assert ZParams(2, 3).admissible()
    assert ZParams(1.5, 1.5).admissible()
    assert ZParams(complex(1, 2), complex(1, -2)).principal
    assert ZParams(complex(1, 2), complex(1, -2)).admissible()
    assert not ZParams(-1, 1).admissible()
    assert not ZParams(2.5, 0.5).admissible()
    with pytest.raises(ValueError):
        ZParams(2.5, 0.5).check()
    with pytest.raises(ValueError):
        ZParams(2, 3, xi=1.0)


@pytest.mark.parametrize("z, zp", [(2, 3), (1.5, 1.5), (0.5, 4)])
def test_normalization_identity(z, zp):
    for n in range(1, 9):
        scale = abs(float(rising_factorial(z * zp, n))) * math.factorial(n)
        assert abs(float(zmeasure_identity_residual(n, z, zp))) / scale < 1e-10
        assert math.fsum(float(v) for v in zmeasure_law(n, z, zp).values()) == pytest.approx(1.0, abs=1e-12)


def test_exact_weights_with_integer_parameters():
    law = zmeasure_law(3, 2, 3)
    assert all(isinstance(v, Fraction) for v in law.values())
    assert sum(law.values()) == 1


def test_division_by_zero_signaled():
    with pytest.raises(ZeroDivisionError):
        zmeasure_weight((2, 1), -1, 2)


def test_plancherel_degeneration():
    law = plancherel_law(5)
    errs = [max(abs(float(zmeasure_weight(lam, t, t)) - float(p)) for lam, p in law.items()) for t in (10, 100, 1000)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2


def test_one_row_support_at_z_one():
    for n in range(1, 7):
        for lam, w in zmeasure_law(n, 1, 2.5).items():
            if len(lam) >= 2:
                assert w == 0


def test_mixed_measure():
    assert mixed_zmeasure_weight((), 2, 3, 0.3) == pytest.approx(0.7**6)
    s = mixed_partial_sum(12, 2, 3, 0.3)
    assert s <= 1 and s >= 1 - negative_binomial_tail(12, 6, 0.3) - 1e-12
    with pytest.raises(ValueError):
        mixed_zmeasure_weight((1,), 2, 3, 1.5)


def test_mixed_plancherel_degeneration():
    from ensembles.kernels import poissonized_plancherel_weight

    nu = 2.0
    errs = []
    for t in (10, 100, 1000):
        xi = nu / t**2
        errs.append(max(abs(float(mixed_zmeasure_weight(lam, t, t, xi)) - poissonized_plancherel_weight(lam, nu)) for lam in partitions_up_to(4)))
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("b", [1.0, 2.5, Fraction(5, 2)])
def test_meixner(N, b):
    rep = meixner_check(N, b, 0.3, cutoff=8)
    assert rep.passed, rep.offending
    assert rep.rel_spread < 1e-10
    assert rep.states == math.comb(9, N)


def test_meixner_single_particle_is_weight_itself():
    b, xi = 2.5, 0.3
    ws = [mixed_zmeasure_weight((l,), 1, b, xi) / (rising_factorial(b, l) * xi**l / math.factorial(l)) for l in range(9)]
    assert max(ws) - min(ws) < 1e-12 * max(ws)


def test_rsk_knuth_examples():
    m = np.zeros((3, 4), dtype=int)
    m[1, 2] = 5
    assert rsk_knuth(m) == Partition((5,))
    for s in all_permutations(5):
        pm = np.zeros((5, 5), dtype=int)
        for i, j in enumerate(s.images):
            pm[i, j - 1] = 1
        assert rsk_knuth(pm) == rsk(s)[0].shape
    assert biword([[1, 0], [2, 1]]) == ([1, 2, 2, 2], [1, 1, 1, 2])
    with pytest.raises(ValueError):
        biword([[-1]])


def test_rsk_knuth_pushforwards():
    assert sum(1 for _ in generalized_permutations(2, 2, 4)) == math.comb(7, 3)
    for n in range(1, 5):
        assert rsk_knuth_pushforward_check(2, 2, n)["passed"]
    assert rsk_knuth_pushforward_check(2, 3, 3)["passed"]


def test_words_pushforward():
    for n in range(1, 7):
        rep = words_pushforward_check(2, n)
        assert rep["passed"] and rep["total_mass"] == "1"
    assert words_pushforward_check(1, 5)["passed"]
    assert words_pushforward_check(3, 4)["passed"]


def test_geometric_matrix():
    xi = 0.35
    gen = stream(3, "measures", 10)
    sums = np.array([sample_geometric_matrix(2, 3, xi, gen).sum() for _ in range(20_000)])
    mean = 6 * xi / (1 - xi)
    assert abs(sums.mean() - mean) < 3 * sums.std(ddof=1) / math.sqrt(sums.size)
    zeros = np.mean(sums == 0)
    p0 = (1 - xi) ** 6
    assert p0 == pytest.approx(float(mixed_zmeasure_weight((), 2, 3, xi)))
    assert abs(zeros - p0) < 3 * math.sqrt(p0 * (1 - p0) / sums.size)
    with pytest.raises(ValueError):
        sample_geometric_matrix(2, 2, 1.0)


def test_geometric_shape_law():
    from scipy import stats

    xi = 0.2
    gen = stream(4, "measures", 11)
    mats = gen.geometric(1 - xi, size=(100_000, 2, 2)) - 1
    counts = Counter(rsk_knuth(m) for m in mats)
    probs = {lam: float(mixed_zmeasure_weight(lam, 2, 2, xi)) for lam in partitions_up_to(20) if len(lam) <= 2}
    keys = [lam for lam in probs if probs[lam] * 100_000 >= 5]
    obs = [counts[lam] for lam in keys] + [100_000 - sum(counts[lam] for lam in keys)]
    exp = [probs[lam] * 100_000 for lam in keys]
    exp.append(100_000 - sum(exp))
    assert stats.chisquare(obs, exp).pvalue > 0.01


def test_specializations():
    phi = Specialization("explicit", h=(0.7, 0.2, 0.05))
    assert schur_value((1,), phi) == pytest.approx(0.7)
    assert schur_value((1, 1), phi) == pytest.approx(0.7**2 - 0.2)
    assert schur_value((), phi) == 1.0
    with pytest.raises(InsufficientSpecialization):
        schur_value((4,), phi)
    with pytest.raises(ValueError):
        Specialization("bogus")
    assert Specialization.from_json(phi.to_json()) == phi
    z = Specialization.from_json({"kind": "zxi", "z": 2, "zp": 3, "xi": 0.3}, "zp")
    assert z.value(2) == pytest.approx(0.3 * 3 * 4 / 2)
    assert z.value(0) == 1 and z.value(-2) == 0


def test_schur_matches_mixed_zmeasure():
    phi, psi = zxi_pair(2, 3, 0.3)
    pre = 0.7**6
    for lam in partitions_up_to(6):
        assert abs(schur_weight(lam, phi, psi) * pre - float(mixed_zmeasure_weight(lam, 2, 3, 0.3))) < 1e-10


def test_schur_normalization_constant():
    phi, psi = zxi_pair(2, 3, 0.3)
    closed = zxi_normalization(2, 3, 0.3)
    rep = normalize_over(phi, psi, 20, closed)
    assert rep["remainder"] / closed == pytest.approx(negative_binomial_tail(20, 6, 0.3), rel=1e-6)
    assert "remainder" not in normalize_over(phi, psi, 3)


def test_last_passage_examples():
    assert last_passage_time([[7]]) == 7
    assert last_passage_time(np.ones((2, 2), dtype=int)) == 3
    assert last_passage_time(np.zeros((0, 0), dtype=int)) == 0


@given(
    st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(lambda c: st.lists(st.lists(st.integers(0, 4), min_size=c, max_size=c), min_size=r, max_size=r))
    )
)
def test_last_passage_is_first_row(rows):
    m = np.array(rows)
    lam = rsk_knuth(m)
    assert last_passage_time(m) == (lam[0] if lam else 0)
