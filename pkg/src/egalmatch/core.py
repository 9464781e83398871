"""Domain types and value accounting for egalitarian repeated matching.

An instance has ``n`` agents, ``m`` goods and ``T`` rounds.  In every round
each agent is matched to a distinct good; utilities accumulate over rounds
and the objective is the minimum cumulative utility (the bottleneck value).

All numbers are exact: valuations are :class:`fractions.Fraction`, counts
are Python ints.  Agents and goods are 0-indexed here; reports shift to
1-indexed labels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Matching = tuple[int, ...]
Profile = tuple[Fraction, ...]


class EgalMatchError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(EgalMatchError, ValueError):
    """Malformed input: bad shapes, negative or non-exact valuations."""


class InstanceClassError(EgalMatchError, ValueError):
    """The instance is outside the class a solver handles (e.g. non-binary)."""


class LimitExceededError(EgalMatchError):
    """A configured size limit or search budget would be exceeded."""


class InvariantError(EgalMatchError, AssertionError):
    """An internal invariant failed; indicates a bug or corrupted input."""


def to_rational(value) -> Fraction:
    """Parse an exact rational from an int, Fraction or string.

    Strings may be ``"p/q"``, integers or decimals such as ``"2.5"``.
    Floats are refused because they are not exact.

    >>> to_rational("3/6")
    Fraction(1, 2)
    >>> to_rational("0.25")
    Fraction(1, 4)
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidInstanceError(f"valuation {value!r} is not an exact rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInstanceError(f"cannot parse rational {value!r}") from exc
    raise InvalidInstanceError(f"unsupported valuation type {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Serialise as ``"p/q"``; integers keep the ``/1`` for a uniform format."""
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Instance:
    """An egalitarian repeated matching instance.

    ``real_agents`` / ``real_goods`` count the leading rows / columns that
    belong to the original problem; anything beyond was added by padding.
    """

    values: tuple[tuple[Fraction, ...], ...]
    rounds: int
    real_agents: int = -1
    real_goods: int = -1

    def __post_init__(self):
        rows = tuple(tuple(to_rational(v) for v in row) for row in self.values)
        if not rows or not rows[0]:
            raise InvalidInstanceError("instance needs at least one agent and one good")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise InvalidInstanceError(f"row {i + 1} has {len(row)} entries, expected {width}")
            for j, v in enumerate(row):
                if v < 0:
                    raise InvalidInstanceError(f"negative valuation at agent {i + 1}, good {j + 1}")
        if not isinstance(self.rounds, int) or isinstance(self.rounds, bool) or self.rounds < 1:
            raise InvalidInstanceError(f"rounds must be a positive integer, got {self.rounds!r}")
        object.__setattr__(self, "values", rows)
        if self.real_agents < 0:
            object.__setattr__(self, "real_agents", len(rows))
        if self.real_goods < 0:
            object.__setattr__(self, "real_goods", width)
        if not (1 <= self.real_agents <= len(rows) and 1 <= self.real_goods <= width):
            raise InvalidInstanceError("real agent/good counts out of range")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], rounds: int) -> "Instance":
        return cls(tuple(tuple(r) for r in rows), rounds)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    @property
    def T(self) -> int:
        return self.rounds

    def u(self, i: int, j: int) -> Fraction:
        return self.values[i][j]

    def max_value(self) -> Fraction:
        return max(max(row) for row in self.values)

    def is_square(self) -> bool:
        return self.n == self.m

    def with_rounds(self, rounds: int) -> "Instance":
        return Instance(self.values, rounds, self.real_agents, self.real_goods)

    def profile(self, matching: Sequence[int]) -> Profile:
        """Valuation profile ``(u_1(M(1)), ..., u_n(M(n)))`` of a matching."""
        return tuple(self.values[i][g] for i, g in enumerate(matching))

    def is_dummy_agent(self, i: int) -> bool:
        return i >= self.real_agents

    def is_dummy_good(self, j: int) -> bool:
        return j >= self.real_goods


def pad_goods(inst: Instance) -> Instance:
    """Append zero-valued goods until there are at least as many goods as agents."""
    if inst.m >= inst.n:
        return inst
    extra = inst.n - inst.m
    rows = tuple(row + (Fraction(0),) * extra for row in inst.values)
    return Instance(rows, inst.T, inst.real_agents, inst.real_goods)


def pad_agents(inst: Instance) -> Instance:
    """Append dummy agents valuing every good at the instance maximum.

    Dummy agents can never be the unique bottleneck, so the square instance
    has the same optimum for the original agents.
    """
    if inst.m < inst.n:
        raise InvalidInstanceError(
            f"pad_agents needs m >= n (got n={inst.n}, m={inst.m}); call pad_goods first"
        )
    if inst.m == inst.n:
        return inst
    top = inst.max_value()
    dummy = tuple(top for _ in range(inst.m))
    rows = inst.values + (dummy,) * (inst.m - inst.n)
    return Instance(rows, inst.T, inst.real_agents, inst.real_goods)


def make_square(inst: Instance) -> Instance:
    return pad_agents(pad_goods(inst))


def check_matching(inst: Instance, matching: Sequence[int]) -> Matching:
    """Validate a matching against ``inst`` and return it as a tuple."""
    matching = tuple(matching)
    if len(matching) != inst.n:
        raise InvalidInstanceError(f"matching has {len(matching)} agents, instance has {inst.n}")
    for i, g in enumerate(matching):
        if not isinstance(g, int) or not 0 <= g < inst.m:
            raise InvalidInstanceError(f"agent {i + 1} assigned out-of-range good {g!r}")
    if len(set(matching)) != len(matching):
        raise InvalidInstanceError(f"matching {matching} is not injective")
    return matching


@dataclass(frozen=True)
class ValueTrajectory:
    """Cumulative values per round.

    ``values[s][i]`` is agent ``i``'s cumulative value after round ``s + 1``
    (round-major, the transpose of the ``n x t`` layout).
    """

    values: tuple[tuple[Fraction, ...], ...]
    bottlenecks: tuple[Fraction, ...]
    bottleneck_agents: tuple[frozenset[int], ...]

    @property
    def rounds(self) -> int:
        return len(self.bottlenecks)

    def final_values(self) -> tuple[Fraction, ...]:
        return self.values[-1] if self.values else ()


def evaluate(inst: Instance, seq: Sequence[Sequence[int]], agents: int | None = None) -> ValueTrajectory:
    """Exact per-round cumulative values and bottlenecks of a sequence.

    ``agents`` restricts the bottleneck to the first ``agents`` agents (used to
    ignore dummy agents); by default all agents count.
    """
    k = inst.n if agents is None else agents
    acc = [Fraction(0)] * inst.n
    values, bottlenecks, argmins = [], [], []
    for matching in seq:
        matching = check_matching(inst, matching)
        for i, g in enumerate(matching):
            acc[i] += inst.values[i][g]
        row = tuple(acc)
        b = min(row[:k])
        values.append(row)
        bottlenecks.append(b)
        argmins.append(frozenset(i for i in range(k) if row[i] == b))
    return ValueTrajectory(tuple(values), tuple(bottlenecks), tuple(argmins))


def bottleneck(inst: Instance, seq: Sequence[Sequence[int]]) -> Fraction:
    """Bottleneck value after the last round of ``seq``."""
    traj = evaluate(inst, seq)
    if not traj.rounds:
        raise InvalidInstanceError("bottleneck of an empty sequence is undefined")
    return traj.bottlenecks[-1]


@dataclass(frozen=True)
class Allocation:
    """Multiplicity matrix: ``counts[i][j]`` copies of good ``j`` for agent ``i``."""

    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.counts)
        if any(c < 0 for row in rows for c in row):
            raise InvalidInstanceError("allocation counts must be non-negative")
        object.__setattr__(self, "counts", rows)

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def m(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.counts]

    def col_sums(self) -> list[int]:
        return [sum(col) for col in zip(*self.counts)]

    def value(self, inst: Instance, i: int) -> Fraction:
        return sum((c * inst.values[i][j] for j, c in enumerate(self.counts[i])), Fraction(0))


def allocation_of(seq: Sequence[Sequence[int]], n: int, m: int) -> Allocation:
    """How often each good went to each agent over ``seq``."""
    counts = [[0] * m for _ in range(n)]
    for matching in seq:
        for i, g in enumerate(matching):
            counts[i][g] += 1
    return Allocation(tuple(tuple(r) for r in counts))


class Dominance(enum.Enum):
    NONE = "none"
    WEAK = "weak"
    STRONG = "strong"


def pareto_dominates(inst: Instance, M: Sequence[int], M0: Sequence[int]) -> Dominance:
    """Classify whether matching ``M`` Pareto dominates ``M0``.

    STRONG implies WEAK; the strongest applicable relation is returned.
    """
    p, p0 = inst.profile(check_matching(inst, M)), inst.profile(check_matching(inst, M0))
    if any(a < b for a, b in zip(p, p0)):
        return Dominance.NONE
    if any(a > b for a, b in zip(p, p0)):
        return Dominance.STRONG
    return Dominance.WEAK


def profile_dominates(p: Sequence[Fraction], q: Sequence[Fraction]) -> bool:
    """True when profile ``p`` strongly Pareto dominates ``q``."""
    return all(a >= b for a, b in zip(p, q)) and any(a > b for a, b in zip(p, q))


def project_sequence(seq: Sequence[Sequence[int]], agents: int) -> list[Matching]:
    """Drop dummy agents (the trailing ones) from every matching."""
    return [tuple(matching[:agents]) for matching in seq]


@dataclass(frozen=True)
class SolveResult:
    """A sequence together with the guarantee the producing algorithm carries."""

    algorithm: str
    sequence: tuple[Matching, ...]
    guarantee: str
    slack: Fraction = Fraction(0)
    extra: dict = field(default_factory=dict, compare=False)
