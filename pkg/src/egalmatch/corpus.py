"""Seeded random instances, grouped by the solver family they exercise."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import Allocation, Instance

KINDS = ("general", "binary", "two-goods", "identical", "two-agent")


def random_instance(rng: random.Random, n: int, m: int, T: int, max_value: int = 9) -> Instance:
    return Instance.from_rows([[rng.randint(0, max_value) for _ in range(m)] for _ in range(n)], T)


def random_binary(rng: random.Random, n: int, m: int, T: int) -> Instance:
    return random_instance(rng, n, m, T, 1)


def random_two_goods(rng: random.Random, n: int, m: int, T: int, max_value: int = 6) -> Instance:
    type_of = [rng.randint(0, 1) for _ in range(m)]
    pair = [(rng.randint(0, max_value), rng.randint(0, max_value)) for _ in range(n)]
    return Instance.from_rows([[pair[i][type_of[j]] for j in range(m)] for i in range(n)], T)


def random_identical(rng: random.Random, n: int, m: int, T: int, max_value: int = 9) -> Instance:
    row = [rng.randint(0, max_value) for _ in range(m)]
    return Instance.from_rows([row] * n, T)


def random_scaled_bistochastic(rng: random.Random, size: int, scale: int) -> list[list[int]]:
    """Sum of ``scale`` random permutation matrices: rows and columns sum to ``scale``."""
    mat = [[0] * size for _ in range(size)]
    for _ in range(scale):
        perm = list(range(size))
        rng.shuffle(perm)
        for i, j in enumerate(perm):
            mat[i][j] += 1
    return mat


def random_allocation(rng: random.Random, n: int, m: int, T: int) -> Allocation:
    """Counts with row sums exactly ``T`` and column sums at most ``T`` (needs ``m >= n``)."""
    counts = [[0] * m for _ in range(n)]
    cols = [0] * m
    for i in range(n):
        for _ in range(T):
            open_goods = [j for j in range(m) if cols[j] < T]
            j = rng.choice(open_goods)
            counts[i][j] += 1
            cols[j] += 1
    return Allocation(tuple(tuple(r) for r in counts))


def random_rationals(rng: random.Random, n: int, m: int, T: int) -> Instance:
    """Small instance with non-integer valuations."""
    return Instance.from_rows(
        [[Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(m)] for _ in range(n)], T
    )


@dataclass(frozen=True)
class CorpusItem:
    id: str
    kind: str
    seed: int
    instance: Instance


def generate(kind: str, seed: int) -> Instance:
    """The instance of ``kind`` determined by ``seed``; sizes stay oracle-friendly."""
    rng = random.Random(f"{kind}:{seed}")
    if kind == "general":
        n = rng.randint(1, 4)
        return random_instance(rng, n, n, rng.randint(1, 5))
    if kind == "binary":
        return random_binary(rng, rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4))
    if kind == "two-goods":
        n = rng.randint(1, 4)
        return random_two_goods(rng, n, rng.randint(n, 4), rng.randint(1, 4))
    if kind == "identical":
        n = rng.randint(1, 4)
        return random_identical(rng, n, rng.randint(n, 5), rng.randint(1, 5))
    if kind == "two-agent":
        return random_instance(rng, 2, rng.randint(1, 4), rng.randint(1, 5), rng.choice([2, 5, 9]))
    raise ValueError(f"unknown corpus kind {kind!r}")


def corpus(seed: int = 0, count: int = 20, kinds=KINDS) -> list[CorpusItem]:
    """``count`` instances of every kind; instance seeds are ``seed .. seed + count - 1``."""
    return [
        CorpusItem(f"{kind}-{s}", kind, s, generate(kind, s))
        for kind in kinds
        for s in range(seed, seed + count)
    ]
