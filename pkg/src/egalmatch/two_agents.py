"""Anytime-optimal sequences for two agents.

With two agents every matching is weakly dominated by one of two
candidates built from the shared favourite good ``g0`` and each agent's next
best good, so a greedy choice between those two per round is optimal at
every prefix.  When both choices give the same bottleneck, ``g0`` goes to
agent 1 now and to agent 2 in the following round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, InstanceClassError, Matching, pad_goods


def _best(row, exclude: int | None = None) -> int:
    """Index of the highest value in ``row``; lowest index on ties."""
    return max((j for j in range(len(row)) if j != exclude), key=lambda j: (row[j], -j))


@dataclass(frozen=True)
class TwoAgentReduction:
    """The shared favourite ``g0`` and each agent's best other good.

    ``table[i]`` holds ``(u_i(g0), u_i(g_i))``.
    """

    g0: int
    g1: int
    g2: int
    table: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

    @property
    def give_agent1(self) -> Matching:
        return (self.g0, self.g2)

    @property
    def give_agent2(self) -> Matching:
        return (self.g1, self.g0)


def reduce_two_agents(inst: Instance) -> Matching | TwoAgentReduction:
    """Either a matching that is optimal in every round, or the reduced instance."""
    if inst.n != 2:
        raise InstanceClassError(f"two-agent solver needs n = 2, got n = {inst.n}")
    work = pad_goods(inst)
    u1, u2 = work.values
    f1, f2 = _best(u1), _best(u2)
    if f1 != f2:
        return (f1, f2)
    g0 = f1
    g1, g2 = _best(u1, g0), _best(u2, g0)
    if u1[g0] == u1[g1] or u2[g0] <= u1[g1]:
        return (g1, g0)
    if u2[g0] == u2[g2] or u1[g0] <= u2[g2]:
        return (g0, g2)
    return TwoAgentReduction(g0, g1, g2, ((u1[g0], u1[g1]), (u2[g0], u2[g2])))


def anytime_two_agents(inst: Instance) -> list[Matching]:
    """A sequence ``S`` with ``b^t(S) = OPT(t)`` for every ``t <= T``."""
    red = reduce_two_agents(inst)
    T = inst.T
    if not isinstance(red, TwoAgentReduction):
        return [red] * T
    (a0, a1), (c0, c2) = red.table
    v1 = v2 = Fraction(0)
    seq: list[Matching] = []
    forced = False
    for _ in range(T):
        if forced:
            seq.append(red.give_agent2)
            v1, v2 = v1 + a1, v2 + c0
            forced = False
            continue
        b_first = min(v1 + a0, v2 + c2)
        b_second = min(v1 + a1, v2 + c0)
        if b_first >= b_second:
            seq.append(red.give_agent1)
            v1, v2 = v1 + a0, v2 + c2
            forced = b_first == b_second
        else:
            seq.append(red.give_agent2)
            v1, v2 = v1 + a1, v2 + c0
    return seq

