import random
from fractions import Fraction

import pytest

from egalmatch.birkhoff import (
    FractionalBistochastic,
    ScaledBistochastic,
    allocation_from_matrix,
    allocation_to_sequence,
    complete_to_bistochastic,
    decompose,
)
from egalmatch.core import InvalidInstanceError, InvariantError, allocation_of, evaluate
from egalmatch.corpus import random_allocation, random_scaled_bistochastic

from conftest import inst


def test_completion_of_bistochastic_is_identity():
    a = allocation_from_matrix([[1, 1], [1, 1]])
    assert complete_to_bistochastic(a, 2).entries == ((1, 1), (1, 1))


def test_completion_fill_order():
    a = allocation_from_matrix([[1, 0], [0, 1]])
    assert complete_to_bistochastic(a, 2).entries == ((2, 0), (0, 2))


def test_completion_pads_rows():
    a = allocation_from_matrix([[1, 0]])
    assert complete_to_bistochastic(a, 1).entries == ((1, 0), (0, 1))


@pytest.mark.parametrize("rows,T,where", [
    ([[3, 0], [0, 0]], 2, "row 0"),
    ([[1, 0], [1, 0]], 1, "column 0"),
    ([[1], [0]], 1, "more agents"),
])
def test_completion_rejects(rows, T, where):
    with pytest.raises(InvalidInstanceError, match=where):
        complete_to_bistochastic(allocation_from_matrix(rows), T)


@pytest.mark.parametrize("seed", range(40))
def test_completion_dominates_and_is_short(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    m = rng.randint(n, 6)
    T = rng.randint(1, 6)
    a = random_allocation(rng, n, m, T)
    # knock some mass out so completion has work to do
    counts = [list(r) for r in a.counts]
    for _ in range(rng.randint(0, 4)):
        i, j = rng.randrange(n), rng.randrange(m)
        counts[i][j] = max(0, counts[i][j] - 1)
    B = complete_to_bistochastic(allocation_from_matrix(counts), T)
    assert all(B.entries[i][j] >= counts[i][j] for i in range(n) for j in range(m))


def test_bistochastic_types_validate():
    with pytest.raises(InvalidInstanceError):
        ScaledBistochastic(((1, 0), (1, 0)), 1)
    with pytest.raises(InvalidInstanceError):
        FractionalBistochastic(((Fraction(1, 2), Fraction(1, 2)), (1, 0)))


def test_decompose_permutation_matrix():
    dec = decompose(ScaledBistochastic(((0, 5, 0), (5, 0, 0), (0, 0, 5)), 5))
    assert dec.terms == ((5, (1, 0, 2)),)


def test_decompose_all_ones():
    dec = decompose(ScaledBistochastic(((1, 1), (1, 1)), 2))
    assert sorted(dec.terms) == [(1, (0, 1)), (1, (1, 0))]


def test_decompose_uniform_fractional():
    third = Fraction(1, 3)
    dec = decompose(FractionalBistochastic(tuple((third,) * 3 for _ in range(3))))
    assert len(dec) == 3 and dec.coefficients() == [third] * 3
    cells = [(i, j) for mt in dec.matchings() for i, j in enumerate(mt)]
    assert len(set(cells)) == 9


def test_decompose_rejects_plain_lists():
    with pytest.raises(InvalidInstanceError):
        decompose([[1]])


@pytest.mark.parametrize("seed", range(60))
def test_decompose_random(seed):
    rng = random.Random(seed)
    size, scale = rng.randint(1, 6), rng.randint(1, 12)
    B = ScaledBistochastic(tuple(map(tuple, random_scaled_bistochastic(rng, size, scale))), scale)
    dec = decompose(B)
    assert dec.reconstruct(size) == [list(r) for r in B.entries]
    assert len(dec) <= size * size - size + 1
    assert all(isinstance(c, int) and c > 0 for c in dec.coefficients())


def test_sequence_from_repeated_matching():
    a = allocation_of([(1, 0, 2)] * 4, 3, 3)
    assert allocation_to_sequence(a, 4) == [(1, 0, 2)] * 4


def test_sequence_binary_example():
    i = inst([[1, 0], [1, 1]], 2)
    seq = allocation_to_sequence(allocation_from_matrix([[2, 0], [0, 2]]), 2)
    assert seq == [(0, 1), (0, 1)] and evaluate(i, seq).values[-1] == (2, 2)


def test_sequence_from_optimal_counterexample(counterexample):
    i = counterexample()
    a = allocation_of([(0, 1, 2), (2, 0, 1)], 3, 3)
    assert evaluate(i, allocation_to_sequence(a, 2)).bottlenecks[-1] == 6


@pytest.mark.parametrize("seed", range(40))
def test_sequence_preserves_allocation_values(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = rng.randint(n, 5)
    T = rng.randint(1, 6)
    i = inst([[rng.randint(0, 9) for _ in range(m)] for _ in range(n)], T)
    a = random_allocation(rng, n, m, T)
    seq = allocation_to_sequence(a, T)
    final = evaluate(i, seq).final_values()
    assert len(seq) == T
    assert all(final[k] >= a.value(i, k) for k in range(n))
    assert len(set(seq)) <= m * m - m + 1


def test_invariant_error_is_assertion():
    assert issubclass(InvariantError, AssertionError)
