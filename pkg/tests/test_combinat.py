import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ensembles.combinat import (
    Partition,
    Permutation,
    PointConfiguration,
    all_permutations,
    class_size,
    dim,
    frobenius_coordinates,
    from_point_configuration,
    hook_lengths,
    partitions,
    profile,
    rising_factorial,
    standard_tableaux_count,
    to_point_configuration,
    transpose,
    z_factor,
)


@st.composite
def diagrams(draw, max_size=30):
    n = draw(st.integers(0, max_size))
    parts = []
    left = n
    while left:
        top = min(left, parts[-1]) if parts else left
        p = draw(st.integers(1, top))
        parts.append(p)
        left -= p
    return Partition(parts)


def test_partition_normalizes_and_validates():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))
    assert Partition(()).size == 0
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_partition_counts():
    assert [sum(1 for _ in partitions(n)) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]


def test_hook_lengths_examples():
    assert hook_lengths((2, 1)) == {(1, 1): 3, (1, 2): 1, (2, 1): 1}
    assert hook_lengths((5,)) == {(1, j): 5 - j + 1 for j in range(1, 6)}
    assert hook_lengths(()) == {}


def test_dim_examples():
    assert dim((6,)) == 1 and dim((1,) * 6) == 1
    assert dim((2, 1)) == 2
    assert sum(dim(lam) ** 2 for lam in partitions(4)) == 24
    assert standard_tableaux_count((3, 2)) == 5
    assert standard_tableaux_count((1,)) == 1
    assert standard_tableaux_count((2, 2)) == 2


def test_dim_matches_tableau_recursion():
    for n in range(13):
        for lam in partitions(n):
            assert dim(lam) == standard_tableaux_count(lam)


def test_burnside_is_exact():
    for n in range(13):
        assert sum(dim(lam) ** 2 for lam in partitions(n)) == math.factorial(n)


def test_transpose():
    assert transpose((4, 2, 1)) == Partition((3, 2, 1, 1))
    assert transpose(()) == Partition(())
    for n in range(9):
        for lam in partitions(n):
            assert transpose(transpose(lam)) == lam
            assert dim(transpose(lam)) == dim(lam)


def test_class_size():
    assert class_size((2, 2, 1)) == 15
    assert z_factor((2, 2, 1)) == 8
    assert class_size((1,) * 5) == 1
    for n in range(9):
        assert sum(class_size(rho) for rho in partitions(n)) == math.factorial(n)


def test_rising_factorial_keeps_type():
    assert rising_factorial(Fraction(1, 2), 3) == Fraction(15, 8)
    assert rising_factorial(3, 0) == 1
    assert rising_factorial(2.5, 2) == pytest.approx(8.75)


def test_profile_of_421():
    prof = profile((4, 2, 1))
    assert list(prof.breakpoints) == [-3, -2, -1, 0, 1, 3, 4]
    assert list(prof.values) == [3, 4, 3, 4, 3, 5, 4]
    assert sorted(prof.minima) == [-3, -1, 1, 4]
    assert prof.area() == pytest.approx(14)
    assert prof(10) == 10 and prof(-7.5) == 7.5


def test_empty_profile_is_abs():
    prof = profile(())
    xs = np.linspace(-3, 3, 13)
    assert np.allclose([prof(x) for x in xs], np.abs(xs))


@given(diagrams(40))
def test_profile_area_and_slopes(lam):
    if lam.size == 0:
        return
    prof = profile(lam, 1 / math.sqrt(lam.size))
    assert prof.area() == pytest.approx(2.0)
    slopes = np.diff(prof.values) / np.diff(prof.breakpoints)
    assert np.allclose(np.abs(slopes), 1.0)
    assert np.all(slopes[:-1] * slopes[1:] < 0)
    far = 1.01 * max(lam[0], len(lam)) / math.sqrt(lam.size)
    assert prof(far) == pytest.approx(far) and prof(-far) == pytest.approx(far)


def test_point_configuration_examples():
    empty = to_point_configuration(())
    assert not empty.positives and not empty.negative_holes
    conf = to_point_configuration((4, 2, 1))
    assert conf.positives == {7, 1} and conf.negative_holes == {-5, -1}
    assert conf.particles(5) == [Fraction(7, 2), Fraction(1, 2), Fraction(-3, 2), Fraction(-7, 2), Fraction(-9, 2)]
    assert PointConfiguration.from_json(conf.to_json()) == conf


def test_unbalanced_configuration_rejected():
    with pytest.raises(ValueError):
        from_point_configuration(PointConfiguration(frozenset({1}), frozenset()))


def test_configuration_roundtrip_exhaustive():
    for n in range(11):
        for lam in partitions(n):
            conf = to_point_configuration(lam)
            assert conf.balanced
            assert from_point_configuration(conf) == lam


@given(diagrams(400))
def test_configuration_roundtrip_random(lam):
    assert from_point_configuration(to_point_configuration(lam)) == lam


def test_transpose_swaps_particles_and_holes():
    for n in range(7):
        for lam in partitions(n):
            a = to_point_configuration(lam)
            b = to_point_configuration(transpose(lam))
            assert b.positives == {-h for h in a.negative_holes}
            assert b.negative_holes == {-p for p in a.positives}


def test_frobenius_coordinates():
    h = Fraction(1, 2)
    assert frobenius_coordinates((1,)) == ([h], [h])
    assert frobenius_coordinates((4, 2, 1)) == ([Fraction(7, 2), h], [Fraction(5, 2), h])
    for n in range(11):
        for lam in partitions(n):
            a, b = frobenius_coordinates(lam)
            assert len(a) == len(b)
            assert sum(a) + sum(b) == n
            assert all(x > y for x, y in zip(a, a[1:])) and all(x > y for x, y in zip(b, b[1:]))


def test_permutation_basics():
    s = Permutation.from_cycles([(1, 5, 3), (2, 4)])
    assert s.images == (5, 4, 1, 2, 3)
    assert s.num_cycles == 2
    assert s.compose(s.inverse()) == Permutation.identity(5)
    assert str(s) == "(153)(24)"
    assert str(Permutation.from_cycles([(1, 10)], 11)) == "(1 10)(2)(3)(4)(5)(6)(7)(8)(9)(11)"
    assert s.to_json() == [5, 4, 1, 2, 3]
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_cycles_partition_the_ground_set():
    for s in all_permutations(5):
        flat = sorted(x for c in s.cycles for x in c)
        assert flat == list(range(1, 6))
        for c in s.cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                assert s(a) == b
