"""Exact optimal sequences for few agents.

For every priority order of the agents a priority-optimal matching is found
as a maximum-weight matching whose weights encode ranks lexicographically
(agent priority first).  These matchings realise every Pareto-optimal
valuation profile, and there are at most ``n!`` of them, so an integer
program choosing how often to use each one stays small.  It is solved by
branch-and-bound over exact LP relaxations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Instance, InvariantError, LimitExceededError, Matching, Profile, evaluate, pad_goods
from .graphs import max_weight_perfect_matching
from .simplex import LinearProgram, LpInfeasible, solve

DEFAULT_FPT_LIMIT = 5


def rank_table(inst: Instance) -> tuple[tuple[int, ...], ...]:
    """``r[i][j]`` = number of goods agent ``i`` values at most ``u_i(g_j)``."""
    return tuple(
        tuple(sum(1 for w in row if w <= v) for v in row) for row in inst.values
    )


def check_permutation(pi: Sequence[int], n: int) -> tuple[int, ...]:
    pi = tuple(pi)
    if sorted(pi) != list(range(n)):
        raise ValueError(f"{pi} is not a permutation of 0..{n - 1}")
    return pi


def pi_optimal_matching(inst: Instance, pi: Sequence[int]) -> Matching:
    """Priority-optimal matching; ``pi[i]`` is agent ``i``'s 0-based priority (0 = first).

    The weight of agent ``i`` on good ``g`` is ``rank * m**(n - 1 - pi[i])``
    where ``n`` counts agents; any gain for a higher-priority agent then
    outweighs all possible losses below it.
    """
    n, m = inst.n, inst.m
    if m < n:
        raise ValueError("pi_optimal_matching needs m >= n; pad goods first")
    pi = check_permutation(pi, n)
    ranks = rank_table(inst)
    weights = [[ranks[i][j] * m ** (n - 1 - pi[i]) for j in range(m)] for i in range(n)]
    weights += [[0] * m for _ in range(m - n)]
    full = max_weight_perfect_matching(weights)
    return tuple(full[:n])


def _check_limit(inst: Instance, limit: int) -> None:
    if inst.n > limit:
        raise LimitExceededError(
            f"{inst.n} agents exceeds the FPT limit of {limit}; use the approx algorithms instead"
        )


@dataclass(frozen=True)
class PriorityProgram:
    """Deduplicated priority-optimal matchings with their profiles."""

    T: int
    matchings: tuple[Matching, ...]
    profiles: tuple[Profile, ...]


def priority_matchings(inst: Instance, limit: int = DEFAULT_FPT_LIMIT) -> PriorityProgram:
    """One priority-optimal matching per distinct profile, over all ``n!`` orders.

    Orders are enumerated lexicographically; the first matching seen for a
    profile is kept.
    """
    _check_limit(inst, limit)
    work = pad_goods(inst)
    seen: dict[Profile, Matching] = {}
    for pi in itertools.permutations(range(work.n)):
        mt = pi_optimal_matching(work, pi)
        seen.setdefault(work.profile(mt), mt)
    if len(seen) > math.factorial(work.n):
        raise InvariantError("more distinct profiles than priority orders")
    return PriorityProgram(inst.T, tuple(seen.values()), tuple(seen.keys()))


def pareto_optimal_profiles(inst: Instance, limit: int = DEFAULT_FPT_LIMIT) -> set[Profile]:
    return set(priority_matchings(inst, limit).profiles)


def _relaxation(profiles: Sequence[Profile], T: int, lower, upper, agents: int) -> LinearProgram:
    k = len(profiles)
    nv = k + 1
    A_ub, b_ub = [], []
    for i in range(agents):
        row = [-p[i] for p in profiles] + [1]
        A_ub.append(row)
        b_ub.append(0)
    for idx in range(k):
        if upper[idx] is not None:
            row = [0] * nv
            row[idx] = 1
            A_ub.append(row)
            b_ub.append(upper[idx])
        if lower[idx]:
            row = [0] * nv
            row[idx] = -1
            A_ub.append(row)
            b_ub.append(-lower[idx])
    c = [0] * k + [1]
    return LinearProgram.build(c, A_ub, b_ub, [[1] * k + [0]], [T])


@dataclass(frozen=True)
class IlpSolution:
    counts: tuple[int, ...]
    objective: Fraction
    nodes: int


def solve_p2(profiles: Sequence[Profile], T: int, agents: int | None = None) -> IlpSolution:
    """Maximise the minimum of ``sum_p X_p * p_i`` over integers ``X >= 0`` summing to ``T``.

    Depth-first branch-and-bound; branching picks the fractional variable
    with the largest LP value (lowest index on ties) and explores the
    rounded-up side first.
    """
    k = len(profiles)
    agents = len(profiles[0]) if agents is None else agents
    value = lambda xs: min(sum(x * p[i] for x, p in zip(xs, profiles)) for i in range(agents))  # noqa: E731
    # Incumbent: the best single profile used every round.
    start = max(range(k), key=lambda idx: (min(profiles[idx][:agents]), -idx))
    best_counts = tuple(T if idx == start else 0 for idx in range(k))
    best = value(best_counts)
    stack = [((0,) * k, (None,) * k)]
    nodes = 0
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        try:
            res = solve(_relaxation(profiles, T, lower, upper, agents))
        except LpInfeasible:
            continue
        if res.objective <= best:
            continue
        xs = res.x[:k]
        frac = [idx for idx in range(k) if xs[idx].denominator != 1]
        if not frac:
            counts = tuple(int(x) for x in xs)
            best, best_counts = value(counts), counts
            continue
        j = max(frac, key=lambda idx: (xs[idx], -idx))
        fl = math.floor(xs[j])
        down_upper = upper[:j] + (fl,) + upper[j + 1:]
        up_lower = lower[:j] + (fl + 1,) + lower[j + 1:]
        stack.append((lower, down_upper))
        stack.append((up_lower, upper))
    if sum(best_counts) != T or any(c < 0 for c in best_counts):
        raise InvariantError("integer program produced an invalid count vector")
    return IlpSolution(best_counts, best, nodes)


def fpt_optimal(inst: Instance, limit: int = DEFAULT_FPT_LIMIT) -> list[Matching]:
    """An exactly optimal ``T``-round sequence (final round) for ``n <= limit``."""
    prog = priority_matchings(inst, limit)
    sol = solve_p2(prog.profiles, inst.T, inst.real_agents)
    seq: list[Matching] = []
    for mt, x in zip(prog.matchings, sol.counts):
        seq.extend([mt] * x)
    got = evaluate(pad_goods(inst), seq, inst.real_agents).bottlenecks[-1]
    if got != sol.objective:
        raise InvariantError(f"emitted sequence reaches {got}, program promised {sol.objective}")
    return seq
