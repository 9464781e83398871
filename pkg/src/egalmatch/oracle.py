"""Brute-force ground truth for small instances.

The search runs forward round by round over the set of reachable cumulative
value vectors.  Prefixes reaching the same vector are interchangeable for
the future, and a vector dominated componentwise by another reachable one
can never do better, so both are collapsed.  Likewise only undominated
valuation profiles are ever needed as moves.  Only real (non-dummy) agents
count towards bottlenecks.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, LimitExceededError, Matching, Profile, profile_dominates

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Limits:
    matchings: int = 5_000
    states: int = 1_000_000

    @classmethod
    def from_env(cls, default: "Limits | None" = None) -> "Limits":
        """Read ``EGAL_MATCH_BUDGET`` as ``STATES`` or ``MATCHINGS:STATES``."""
        base = default or cls()
        raw = os.environ.get("EGAL_MATCH_BUDGET", "").strip()
        if not raw:
            return base
        if ":" in raw:
            a, b = raw.split(":", 1)
            return cls(int(a), int(b))
        return cls(base.matchings, int(raw))


DEFAULT_LIMITS = Limits()


def matching_count(n: int, m: int) -> int:
    return math.perm(m, n) if m >= n else 0


def all_matchings(inst: Instance, limits: Limits = DEFAULT_LIMITS) -> list[Matching]:
    count = matching_count(inst.n, inst.m)
    if count > limits.matchings:
        raise LimitExceededError(f"{count} matchings per round exceeds budget {limits.matchings}")
    return list(itertools.permutations(range(inst.m), inst.n))


def distinct_profiles(inst: Instance, limits: Limits = DEFAULT_LIMITS) -> dict[Profile, Matching]:
    """Each distinct valuation profile mapped to its lexicographically first matching."""
    out: dict[Profile, Matching] = {}
    for mt in all_matchings(inst, limits):
        out.setdefault(inst.profile(mt), mt)
    return out


def _maximal(vectors) -> list[Vector]:
    # A strict dominator has a strictly larger sum, so only vectors from
    # earlier sum levels need to be compared against.
    by_sum: dict[Fraction, list[Vector]] = {}
    for v in vectors:
        by_sum.setdefault(sum(v), []).append(v)
    kept: list[Vector] = []
    for total in sorted(by_sum, reverse=True):
        above = list(kept)
        kept.extend(v for v in sorted(by_sum[total], reverse=True)
                    if not any(all(a >= b for a, b in zip(w, v)) for w in above))
    return kept


def _undominated(moves: dict[Profile, Matching]) -> dict[Profile, Matching]:
    # A dominated profile can be swapped for its dominator in any sequence
    # without lowering any cumulative value, so it is never needed.
    return {p: mt for p, mt in moves.items() if not any(profile_dominates(q, p) for q in moves)}


class _Search:
    def __init__(self, inst: Instance, limits: Limits, reduce: bool = True, symmetric: bool = False):
        self.inst = inst
        self.k = inst.real_agents
        self.limits = limits
        self.reduce = reduce
        moves = distinct_profiles(inst, limits)
        self.moves = _undominated(moves) if reduce else moves
        self.generated = 0
        # Agents with equal value rows (and the same real/dummy status) are
        # interchangeable, so when no witness is needed their coordinates
        # can be sorted within each group.
        self.groups: list[list[int]] = []
        if symmetric:
            by_row: dict = {}
            for i, row in enumerate(inst.values):
                by_row.setdefault((row, i < self.k), []).append(i)
            self.groups = [g for g in by_row.values() if len(g) > 1]
        # layers[s] maps vector -> (parent vector, matching) for round s+1
        self.layers: list[dict[Vector, tuple[Vector | None, Matching | None]]] = []

    def value(self, v: Vector) -> Fraction:
        return min(v[: self.k])

    def expand(self, frontier, keep=None) -> dict:
        nxt: dict[Vector, tuple] = {}
        for v in frontier:
            for prof, mt in self.moves.items():
                w = tuple(a + b for a, b in zip(v, prof))
                if self.groups:
                    w = self.canonical(w)
                self.generated += 1
                if self.generated > self.limits.states:
                    raise LimitExceededError(
                        f"oracle search exceeded {self.limits.states} states"
                    )
                if w not in nxt and (keep is None or keep(w)):
                    nxt[w] = (v, mt)
        if not self.reduce:
            return nxt
        return {w: nxt[w] for w in _maximal(nxt)}

    def canonical(self, w: Vector) -> Vector:
        out = list(w)
        for g in self.groups:
            for i, x in zip(g, sorted(w[i] for i in g)):
                out[i] = x
        return tuple(out)

    def witness(self, end: Vector, rounds: int) -> list[Matching]:
        seq = []
        v = end
        for s in range(rounds - 1, -1, -1):
            parent, mt = self.layers[s][v]
            seq.append(mt)
            v = parent
        return seq[::-1]


def opt_values(
    inst: Instance, T: int | None = None, limits: Limits = DEFAULT_LIMITS, reduce: bool = True
) -> list[Fraction]:
    """``[OPT(1), ..., OPT(T)]`` by exhaustive forward search.

    ``reduce=False`` disables the dominance pruning (plain enumeration of
    distinct cumulative vectors); results are identical, only slower.
    """
    T = inst.T if T is None else T
    search = _Search(inst, limits, reduce, symmetric=reduce)
    frontier = {tuple([Fraction(0)] * inst.n): (None, None)}
    out = []
    for _ in range(T):
        frontier = search.expand(frontier)
        out.append(max(search.value(v) for v in frontier))
    return out


def brute_opt(inst: Instance, t: int | None = None, limits: Limits = DEFAULT_LIMITS) -> Fraction:
    """Exact ``OPT(t)`` (default ``t = T``)."""
    return opt_values(inst, t, limits)[-1]


def brute_opt_witness(inst: Instance, t: int | None = None, limits: Limits = DEFAULT_LIMITS) -> tuple[Fraction, list[Matching]]:
    """``OPT(t)`` together with a sequence reaching it at round ``t``."""
    t = inst.T if t is None else t
    search = _Search(inst, limits)
    frontier = {tuple([Fraction(0)] * inst.n): (None, None)}
    for _ in range(t):
        frontier = search.expand(frontier)
        search.layers.append(frontier)
    best = max(frontier, key=lambda v: (search.value(v), v))
    return search.value(best), search.witness(best, t)


def anytime_exists(
    inst: Instance, T: int | None = None, limits: Limits = DEFAULT_LIMITS
) -> tuple[bool, list[Matching] | None]:
    """Decide whether some sequence is optimal at every round ``1..T``.

    Returns ``(True, witness)`` or ``(False, None)``.
    """
    T = inst.T if T is None else T
    opts = opt_values(inst, T, limits)
    search = _Search(inst, limits)
    frontier = {tuple([Fraction(0)] * inst.n): (None, None)}
    for s in range(T):
        target = opts[s]
        frontier = search.expand(frontier, keep=lambda w, target=target: search.value(w) == target)
        if not frontier:
            return False, None
        search.layers.append(frontier)
    end = max(frontier)
    return True, search.witness(end, T)


def pareto_enumerate(inst: Instance, limits: Limits = DEFAULT_LIMITS) -> list[tuple[Matching, Profile]]:
    """All Pareto-optimal matchings with their profiles, in lexicographic order."""
    mts = all_matchings(inst, limits)
    profiles = {mt: inst.profile(mt) for mt in mts}
    distinct = set(profiles.values())
    optimal = {p for p in distinct if not any(profile_dominates(q, p) for q in distinct)}
    return [(mt, profiles[mt]) for mt in mts if profiles[mt] in optimal]
