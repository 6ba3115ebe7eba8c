import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from ensembles.combinat import Partition, Permutation, all_permutations, partitions, transpose
from ensembles.plancherel import (
    StandardTableau,
    edge_rows,
    edge_statistic,
    fluctuation_integral,
    growth_law,
    growth_transitions,
    involution_count,
    involution_lis,
    kerov_variance,
    lis_length,
    omega,
    omega_area,
    plancherel_law,
    rsk,
    rsk_inverse,
    rsk_shape_law,
    sample_involution,
    sample_kerov_process,
    sample_plancherel,
    sample_plancherel_hookwalk,
    sample_plancherel_rsk,
    sup_distance_to_omega,
    word_shape,
)
from ensembles.rng import stream


def _lis_brute(seq):
    best = [1] * len(seq)
    for i in range(len(seq)):
        for j in range(i):
            if seq[j] < seq[i]:
                best[i] = max(best[i], best[j] + 1)
    return max(best, default=0)


def test_tableau_validation():
    StandardTableau(((1, 2), (3,)))
    with pytest.raises(ValueError):
        StandardTableau(((1, 3), (2, 4), (5, 6, 7)))
    with pytest.raises(ValueError):
        StandardTableau(((2, 1),))
    with pytest.raises(ValueError):
        StandardTableau(((1, 2), (2,)))


def test_rsk_of_identity():
    p, q = rsk(Permutation.identity(5))
    assert p.rows == q.rows == ((1, 2, 3, 4, 5),)


def test_rsk_small_example():
    s = Permutation((2, 1, 3))
    assert lis_length(s) == 2
    assert rsk(s)[0].shape == Partition((2, 1))


def test_rsk_is_bijective_on_s6():
    seen = set()
    for s in all_permutations(6):
        p, q = rsk(s)
        assert p.shape == q.shape
        assert rsk_inverse(p, q) == s
        seen.add((p, q))
    assert len(seen) == 720


def test_rsk_of_inverse_swaps_tableaux():
    for s in all_permutations(6):
        p, q = rsk(s)
        assert rsk(s.inverse()) == (q, p)


def test_rsk_inverse_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        rsk_inverse(StandardTableau(((1, 2),)), StandardTableau(((1,), (2,))))


def test_ulam_identity_on_s7():
    for s in all_permutations(7):
        lam1 = rsk(s)[0].shape[0]
        assert lis_length(s) == lam1 == _lis_brute(s.images)


@given(st.lists(st.integers(1, 6), max_size=40))
def test_word_shape_matches_tableau_rows(word):
    rows: list[list[int]] = []
    from bisect import bisect_right

    for x in word:
        for row in rows:
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                break
            row[pos], x = x, row[pos]
        else:
            rows.append([x])
    assert word_shape(word) == Partition(len(r) for r in rows)


def test_exact_laws_agree():
    for n in range(1, 9):
        law = plancherel_law(n)
        assert sum(law.values()) == 1
        assert rsk_shape_law(n) == law
        assert growth_law(n) == law
        assert all(law[transpose(lam)] == p for lam, p in law.items())


def test_growth_transitions_are_exact_probabilities():
    for lam in partitions(6):
        tr = growth_transitions(lam)
        assert all(isinstance(p, Fraction) for p in tr.values())
        assert sum(tr.values()) == 1


def test_small_samplers():
    assert sample_plancherel_rsk(1, 0) == Partition((1,))
    assert sample_plancherel_hookwalk(1, 0) == Partition((1,))
    counts = Counter(sample_plancherel(2, 4000, stream(1, "plancherel", 40), "hookwalk"))
    assert set(counts) == {Partition((2,)), Partition((1, 1))}
    assert abs(counts[Partition((2,))] / 4000 - 0.5) < 3 * math.sqrt(0.25 / 4000)


def _chisq(samples, law):
    counts = Counter(samples)
    total = len(samples)
    items = sorted(law.items(), key=lambda kv: -kv[1])
    obs, exp, lump_o, lump_e = [], [], 0, 0.0
    for lam, p in items:
        e = float(p) * total
        if e >= 5:
            obs.append(counts[lam])
            exp.append(e)
        else:
            lump_o += counts[lam]
            lump_e += e
    obs.append(lump_o)
    exp.append(lump_e)
    return stats.chisquare(obs, np.array(exp) * sum(obs) / sum(exp)).pvalue


@pytest.mark.parametrize("sampler", ["rsk", "hookwalk"])
def test_samplers_at_n20(sampler):
    samples = sample_plancherel(20, 20_000, stream(2, "plancherel", 41), sampler)
    assert _chisq(samples, plancherel_law(20)) > 0.01


def test_samplers_agree_on_mean_first_row():
    a = [lam[0] for lam in sample_plancherel(100, 3000, stream(3, "plancherel", 42), "rsk")]
    b = [lam[0] for lam in sample_plancherel(100, 3000, stream(3, "plancherel", 43), "hookwalk")]
    se = math.sqrt(np.var(a, ddof=1) / len(a) + np.var(b, ddof=1) / len(b))
    assert abs(np.mean(a) - np.mean(b)) < 3 * se


def test_omega():
    assert omega(2.0) == pytest.approx(2.0) and omega(-2.0) == pytest.approx(2.0)
    assert omega(0.0) == pytest.approx(4 / math.pi)
    assert omega(3.5) == 3.5
    xs = np.linspace(-3, 3, 601)
    assert np.all(omega(xs) >= np.abs(xs) - 1e-15)
    assert omega_area() == pytest.approx(2.0, abs=1e-8)


def test_sup_distance():
    with pytest.raises(ValueError):
        sup_distance_to_omega(())
    lam = sample_plancherel_rsk(500, 1)
    d = sup_distance_to_omega(lam)
    assert d >= 0
    # breakpoints alone already attain the supremum
    assert sup_distance_to_omega(lam, grid=2) == pytest.approx(d, abs=1e-12)


def test_sup_distance_trend():
    med = []
    for i, n in enumerate((100, 6400)):
        gen = stream(7, "plancherel", 44 + i)
        med.append(np.median([sup_distance_to_omega(sample_plancherel_rsk(n, gen)) for _ in range(50)]))
    assert med[1] < med[0] / 2


def test_fluctuation_integral():
    lam = sample_plancherel_rsk(300, 2)
    assert fluctuation_integral(lam, [0.0]) == 0.0
    # exact profile moment: constant phi integrates the profile area (= 2) minus Omega's area (= 2)
    assert fluctuation_integral(lam, [1.0]) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        fluctuation_integral((), [1.0])


def test_antisymmetric_mean_trend():
    out = []
    for i, n in enumerate((500, 2000, 8000)):
        gen = stream(8, "plancherel", 50 + i)
        vals = [fluctuation_integral(sample_plancherel_rsk(n, gen), [0.0, 1.0]) for _ in range(300)]
        se = np.std(vals, ddof=1) / math.sqrt(len(vals))
        out.append(abs(np.mean(vals)) / se)
    assert all(z < 3 for z in out)


def test_kerov_process():
    coeffs = (0.0, 0.0, 1.0)
    assert kerov_variance(coeffs) == pytest.approx(1 / 3, rel=1e-6)
    assert abs(kerov_variance(coeffs, 100) - kerov_variance(coeffs, 200)) / kerov_variance(coeffs) < 0.01
    draws = sample_kerov_process([0.0, 0.0, 0.0, 1.0, 0.5], rng=stream(9, "plancherel", 60), count=10_000)
    assert abs(draws.mean()) < 3 * draws.std() / 100
    assert stats.normaltest(draws).pvalue > 0.01
    assert isinstance(sample_kerov_process(coeffs, rng=1), float)


def test_edge_statistic():
    lam = Partition((30, 20, 5))
    u = edge_statistic(lam, 3)
    assert np.allclose(edge_rows(u, lam.size), lam)
    with pytest.raises(ValueError):
        edge_statistic(lam, 4)
    big = sample_plancherel_rsk(10_000, 3)
    u = edge_statistic(big, 5)
    assert all(a >= b for a, b in zip(u, u[1:]))


@pytest.mark.slow
def test_edge_median_stabilizes():
    meds = []
    for i, (n, count) in enumerate(((1000, 200), (10_000, 100), (100_000, 25))):
        gen = stream(10, "plancherel", 70 + i)
        meds.append(np.median([edge_statistic(sample_plancherel_rsk(n, gen), 1)[0] for _ in range(count)]))
    assert max(meds) - min(meds) < 0.5


def test_involutions():
    assert [involution_count(n) for n in range(7)] == [1, 1, 2, 4, 10, 26, 76]
    gen = stream(11, "plancherel", 80)
    samples = [sample_involution(4, gen) for _ in range(10_000)]
    assert all(s.compose(s) == Permutation.identity(4) for s in samples)
    counts = Counter(samples)
    assert len(counts) == 10
    assert stats.chisquare(list(counts.values())).pvalue > 0.01


def test_involution_lis_trend():
    meds = []
    for i, n in enumerate((1000, 10_000)):
        gen = stream(12, "plancherel", 90 + i)
        meds.append(np.median([(involution_lis(n, gen) - 2 * math.sqrt(n)) / n ** (1 / 6) for _ in range(200)]))
    assert abs(meds[0] - meds[1]) < 0.5
