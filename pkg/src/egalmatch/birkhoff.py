"""Allocations, bistochastic matrices and Birkhoff decompositions.

An allocation whose row and column sums are at most ``T`` is first completed
to a scaled integer bistochastic matrix (all sums exactly ``T``), which is
then split into permutation matrices with positive integer coefficients.
Repeating each permutation that many times gives a ``T``-round sequence in
which every agent gets at least its allocated value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import Allocation, InvalidInstanceError, InvariantError, Matching
from .graphs import Bigraph, perfect_matching

Number = Union[int, Fraction]


@dataclass(frozen=True)
class ScaledBistochastic:
    entries: tuple[tuple[int, ...], ...]
    scale: int

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        size = len(rows)
        for i, row in enumerate(rows):
            if len(row) != size:
                raise InvalidInstanceError("bistochastic matrix must be square")
            if any(not isinstance(v, int) or v < 0 for v in row):
                raise InvalidInstanceError(f"row {i} has a negative or non-integer entry")
            if sum(row) != self.scale:
                raise InvalidInstanceError(f"row {i} sums to {sum(row)}, expected {self.scale}")
        for j in range(size):
            s = sum(row[j] for row in rows)
            if s != self.scale:
                raise InvalidInstanceError(f"column {j} sums to {s}, expected {self.scale}")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FractionalBistochastic:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        size = len(rows)
        for i, row in enumerate(rows):
            if len(row) != size:
                raise InvalidInstanceError("bistochastic matrix must be square")
            if any(v < 0 for v in row):
                raise InvalidInstanceError(f"row {i} has a negative entry")
            if sum(row) != 1:
                raise InvalidInstanceError(f"row {i} sums to {sum(row)}, expected 1")
        for j in range(size):
            s = sum(row[j] for row in rows)
            if s != 1:
                raise InvalidInstanceError(f"column {j} sums to {s}, expected 1")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def nonzeros(self) -> int:
        return sum(1 for row in self.entries for v in row if v != 0)


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple[tuple[Number, Matching], ...]

    def __len__(self) -> int:
        return len(self.terms)

    def coefficients(self) -> list[Number]:
        return [c for c, _ in self.terms]

    def matchings(self) -> list[Matching]:
        return [mt for _, mt in self.terms]

    def reconstruct(self, size: int) -> list[list[Number]]:
        out: list[list[Number]] = [[0] * size for _ in range(size)]
        for coef, matching in self.terms:
            for i, j in enumerate(matching):
                out[i][j] += coef
        return out


def complete_to_bistochastic(alloc: Allocation, T: int) -> ScaledBistochastic:
    """Raise entries of ``alloc`` until every row and column sums to ``T``.

    Rows are zero-padded up to a square ``m x m`` matrix.  Each step picks
    the first deficient row and the first deficient column and adds
    ``T - max(row sum, column sum)`` to their shared cell, which saturates at
    least one of the two; hence at most ``2m`` steps.
    """
    n, m = alloc.n, alloc.m
    if n > m:
        raise InvalidInstanceError(f"allocation has more agents ({n}) than goods ({m})")
    for i, s in enumerate(alloc.row_sums()):
        if s > T:
            raise InvalidInstanceError(f"row {i} sums to {s} > T={T}")
    for j, s in enumerate(alloc.col_sums()):
        if s > T:
            raise InvalidInstanceError(f"column {j} sums to {s} > T={T}")
    B = [list(row) for row in alloc.counts] + [[0] * m for _ in range(m - n)]
    rows = [sum(r) for r in B]
    cols = [sum(B[i][j] for i in range(m)) for j in range(m)]
    for _ in range(2 * m + 1):
        i = next((k for k in range(m) if rows[k] < T), None)
        j = next((k for k in range(m) if cols[k] < T), None)
        if i is None and j is None:
            return ScaledBistochastic(tuple(tuple(r) for r in B), T)
        if i is None or j is None:
            raise InvariantError("row and column deficits disagree")
        step = T - max(rows[i], cols[j])
        B[i][j] += step
        rows[i] += step
        cols[j] += step
    raise InvariantError("bistochastic completion did not terminate within 2m steps")


def decompose(B: ScaledBistochastic | FractionalBistochastic) -> BirkhoffDecomposition:
    """Birkhoff's algorithm: peel off permutation matrices from the support.

    Each coefficient is the smallest residual entry on the chosen perfect
    matching, so at least one entry drops to zero per step.  Integer input
    gives positive integer coefficients; fractional input gives positive
    rationals summing to one.
    """
    if not isinstance(B, (ScaledBistochastic, FractionalBistochastic)):
        raise InvalidInstanceError("decompose expects a ScaledBistochastic or FractionalBistochastic")
    size = B.size
    residual = [list(row) for row in B.entries]
    terms = []
    limit = size * size - size + 1
    while any(v != 0 for row in residual for v in row):
        if len(terms) >= limit:
            raise InvariantError(f"decomposition exceeded {limit} terms")
        matching = perfect_matching(Bigraph.from_support(residual))
        if matching is None:
            raise InvariantError("support of a bistochastic residual has no perfect matching")
        coef = min(residual[i][j] for i, j in enumerate(matching))
        for i, j in enumerate(matching):
            residual[i][j] -= coef
        terms.append((coef, matching))
    return BirkhoffDecomposition(tuple(terms))


def allocation_to_sequence(alloc: Allocation, T: int) -> list[Matching]:
    """Turn an allocation into a ``T``-round sequence dominating it agent-wise.

    The returned matchings cover all ``m`` rows of the completed matrix;
    rows beyond ``alloc.n`` belong to padding and are dropped.
    """
    dec = decompose(complete_to_bistochastic(alloc, T))
    seq: list[Matching] = []
    for coef, matching in dec.terms:
        seq.extend([tuple(matching[: alloc.n])] * coef)
    if len(seq) != T:
        raise InvariantError(f"sequence has {len(seq)} rounds, expected {T}")
    return seq


def allocation_from_matrix(rows: Sequence[Sequence[int]]) -> Allocation:
    return Allocation(tuple(tuple(r) for r in rows))
