"""T-independent additive approximations built on the fractional program.

Both algorithms solve the fractional program on the padded square instance
and Birkhoff-decompose its vertex solution.  ``approx_optimal`` targets the
final round only; ``approx_anytime`` schedules the decomposition terms so
that every prefix stays close to its own optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .birkhoff import BirkhoffDecomposition, allocation_to_sequence, decompose
from .core import Allocation, Instance, InvariantError, Matching, make_square, pad_goods, project_sequence
from .egalitarian_lp import LpSolution, solve_p1


@dataclass(frozen=True)
class ScheduleState:
    round: int
    counts: tuple[int, ...]


@dataclass(frozen=True)
class ApproxRun:
    """Everything an approximation run computed, for checking its guarantees."""

    sequence: tuple[Matching, ...]
    lp: LpSolution
    decomposition: BirkhoffDecomposition | None = None
    allocation: Allocation | None = None
    states: tuple[ScheduleState, ...] = ()


def floor_allocation(lp: LpSolution, T: int) -> Allocation:
    return Allocation(tuple(tuple(math.floor(T * v) for v in row) for row in lp.B.entries))


def approx_optimal_run(inst: Instance) -> ApproxRun:
    """Round ``T*B`` down entrywise and convert the allocation to a sequence.

    Rounding down loses less than one copy of each good per agent, so the
    final bottleneck is at least ``T*b - m*max u``.
    """
    square = make_square(inst)
    lp = solve_p1(square)
    alloc = floor_allocation(lp, inst.T)
    seq = allocation_to_sequence(alloc, inst.T)
    agents = pad_goods(inst).n
    return ApproxRun(tuple(project_sequence(seq, agents)), lp, allocation=alloc)


def approx_optimal(inst: Instance) -> list[Matching]:
    return list(approx_optimal_run(inst).sequence)


def schedule(alphas: Sequence[Fraction], T: int) -> tuple[list[int], list[ScheduleState]]:
    """Pick, each round, the term minimising ``(n_k + 1) / alpha_k``.

    Ties go to the lowest index.  Returns the chosen term per round and the
    counts after every round.
    """
    counts = [0] * len(alphas)
    picks, states = [], []
    for t in range(1, T + 1):
        k = min(range(len(alphas)), key=lambda idx: (Fraction(counts[idx] + 1) / alphas[idx], idx))
        counts[k] += 1
        picks.append(k)
        states.append(ScheduleState(t, tuple(counts)))
        for idx, a in enumerate(alphas):
            if counts[idx] < a * t - 1:
                raise InvariantError(f"term {idx} fell behind its share at round {t}")
    return picks, states


def approx_anytime_run(inst: Instance) -> ApproxRun:
    square = make_square(inst)
    lp = solve_p1(square)
    dec = decompose(lp.B)
    picks, states = schedule(dec.coefficients(), inst.T)
    terms = dec.matchings()
    seq = [terms[k] for k in picks]
    agents = pad_goods(inst).n
    return ApproxRun(tuple(project_sequence(seq, agents)), lp, decomposition=dec, states=tuple(states))


def approx_anytime(inst: Instance) -> list[Matching]:
    return list(approx_anytime_run(inst).sequence)
