"""Polynomial-time solvers for restricted valuation classes.

* binary valuations: binary search on the bottleneck with a circulation
  feasibility check restricted to the goods of one maximum matching;
* two types of goods: the same idea over a finite candidate set;
* identical valuations: cyclic shifts over the top ``n`` goods when ``n``
  divides ``T``, and a lowest-value-picks-first greedy otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .birkhoff import allocation_to_sequence
from .core import Allocation, Instance, InstanceClassError, InvariantError, Matching, pad_goods
from .graphs import Bigraph, CirculationNetwork, feasible_circulation, maximum_matching


def is_binary(inst: Instance) -> bool:
    return all(v in (0, 1) for row in inst.values for v in row)


def _require_binary(inst: Instance) -> None:
    if not is_binary(inst):
        raise InstanceClassError("binary solver needs every valuation to be 0 or 1")


def maximum_matching_goods(inst: Instance) -> tuple[int, ...]:
    """Goods used by one maximum matching of the value-1 graph, sorted."""
    _require_binary(inst)
    g = Bigraph(inst.n, inst.m, frozenset(
        (i, j) for i in range(inst.n) for j in range(inst.m) if inst.values[i][j] == 1
    ))
    return tuple(sorted(maximum_matching(g).values()))


def dominator_on_goods(inst: Instance, mt: Matching, goods: tuple[int, ...] | None = None) -> Matching:
    """A matching weakly dominating ``mt`` whose value-1 edges all use ``goods``.

    The agents happy under ``mt`` are re-matched inside ``goods`` (the goods
    of a maximum matching always suffice); everyone else takes the lowest
    unused goods.
    """
    _require_binary(inst)
    goods = maximum_matching_goods(inst) if goods is None else goods
    happy = [i for i in range(inst.n) if inst.values[i][mt[i]] == 1]
    g = Bigraph(len(happy), len(goods), frozenset(
        (a, b) for a, i in enumerate(happy) for b, j in enumerate(goods) if inst.values[i][j] == 1
    ))
    inner = maximum_matching(g)
    if len(inner) != len(happy):
        raise InvariantError("happy agents cannot all be re-matched inside the maximum-matching goods")
    out: list[int | None] = [None] * inst.n
    for a, b in inner.items():
        out[happy[a]] = goods[b]
    free = iter(sorted(set(range(inst.m)) - {j for j in out if j is not None}))
    return tuple(j if j is not None else next(free) for j in out)


def binary_network(inst: Instance, b: int, goods: tuple[int, ...] | None = None) -> CirculationNetwork | None:
    """Circulation whose feasibility certifies bottleneck ``b``; ``None`` = rejected outright.

    Each good in the matched set supplies ``T`` units, each agent absorbs
    ``b`` along value-1 edges, and a slack vertex absorbs the rest.
    """
    T = inst.T
    goods = maximum_matching_goods(inst) if goods is None else goods
    if inst.n * b > len(goods) * T:
        return None
    net = CirculationNetwork()
    for j in goods:
        net.add_vertex(("good", j), -T)
    for i in range(inst.n):
        net.add_vertex(("agent", i), b)
    net.add_vertex(("slack",), len(goods) * T - inst.n * b)
    for i in range(inst.n):
        for j in goods:
            if inst.values[i][j] == 1:
                net.add_edge(("good", j), ("agent", i), T)
    for j in goods:
        net.add_edge(("good", j), ("slack",), T)
    return net


def _allocation_from_flow(net: CirculationNetwork, flows: list[int], n: int, m: int) -> Allocation:
    counts = [[0] * m for _ in range(n)]
    for (tail, head, _), f in zip(net.edges, flows):
        if head[0] == "agent" and tail[0] == "good":
            counts[head[1]][tail[1]] += f
    return Allocation(tuple(tuple(r) for r in counts))


def binary_feasible(inst: Instance, b: int, goods=None) -> Allocation | None:
    """Allocation giving every agent ``b`` value-1 rounds, if one exists."""
    net = binary_network(inst, b, goods)
    if net is None:
        return None
    flows = feasible_circulation(net)
    if flows is None:
        return None
    return _allocation_from_flow(net, flows, inst.n, inst.m)


def binary_optimal(inst: Instance) -> list[Matching]:
    """Optimal sequence for 0/1 valuations; the optimum is an integer in ``[0, T]``."""
    _require_binary(inst)
    work = pad_goods(inst)
    goods = maximum_matching_goods(work)
    lo, hi = 0, work.T
    best = binary_feasible(work, 0, goods)
    if best is None:
        raise InvariantError("bottleneck 0 must always be feasible")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        alloc = binary_feasible(work, mid, goods)
        if alloc is None:
            hi = mid - 1
        else:
            lo, best = mid, alloc
    return allocation_to_sequence(best, work.T)


@dataclass(frozen=True)
class GoodTypePartition:
    """``type_of[j]`` in ``{0, 1}``; ``type_values[i] = (u_i(type 0), u_i(type 1))``."""

    type_of: tuple[int, ...]
    type_values: tuple[tuple[Fraction, Fraction], ...]


def check_partition(inst: Instance, type_of) -> GoodTypePartition:
    type_of = tuple(type_of)
    if len(type_of) != inst.m or any(t not in (0, 1) for t in type_of):
        raise InstanceClassError("partition must assign every good type 0 or 1")
    tv = []
    for i, row in enumerate(inst.values):
        vals = []
        for r in (0, 1):
            seen = {row[j] for j in range(inst.m) if type_of[j] == r}
            if len(seen) > 1:
                raise InstanceClassError(f"agent {i + 1} values goods of type {r} differently")
            vals.append(seen.pop() if seen else None)
        # A missing type never matters; mirror the other value.
        if vals[0] is None:
            vals[0] = vals[1]
        if vals[1] is None:
            vals[1] = vals[0]
        tv.append((vals[0], vals[1]))
    return GoodTypePartition(type_of, tuple(tv))


def infer_partition(inst: Instance) -> GoodTypePartition:
    """Group goods by identical value columns; fails if there are more than two groups."""
    cols = [tuple(row[j] for row in inst.values) for j in range(inst.m)]
    kinds: list[tuple] = []
    for col in cols:
        if col not in kinds:
            kinds.append(col)
    if len(kinds) > 2:
        raise InstanceClassError(f"instance has {len(kinds)} good types, expected at most 2")
    return check_partition(inst, [kinds.index(col) for col in cols])


def two_goods_network(inst: Instance, part: GoodTypePartition, b: Fraction) -> CirculationNetwork | None:
    """Circulation certifying bottleneck ``b``; ``None`` when ``b`` is rejected outright.

    Every good absorbs ``T`` units.  An indifferent agent supplies ``T`` to any
    good; an agent preferring type ``r`` supplies ``k_i`` units to type-``r``
    goods and ``T - k_i`` to any good.  A source covers the ``T(m - n)``
    unused slots.
    """
    T, n, m = inst.T, inst.n, inst.m
    net = CirculationNetwork()
    for j in range(m):
        net.add_vertex(("good", j), T)
    for i in range(n):
        lo_hi = part.type_values[i]
        if T * max(lo_hi) < b:
            return None
        if lo_hi[0] == lo_hi[1]:
            net.add_vertex(("any", i), -T)
            for j in range(m):
                net.add_edge(("any", i), ("good", j), T)
            continue
        r = 0 if lo_hi[0] > lo_hi[1] else 1
        hi_v, lo_v = lo_hi[r], lo_hi[1 - r]
        k = max(0, math.ceil((b - T * lo_v) / (hi_v - lo_v)))
        net.add_vertex(("pref", i), -k)
        net.add_vertex(("any", i), -(T - k))
        for j in range(m):
            if part.type_of[j] == r:
                net.add_edge(("pref", i), ("good", j), T)
            net.add_edge(("any", i), ("good", j), T)
    net.add_vertex(("source",), -T * (m - n))
    for j in range(m):
        net.add_edge(("source",), ("good", j), T)
    return net


def two_goods_feasible(inst: Instance, part: GoodTypePartition, b: Fraction) -> Allocation | None:
    net = two_goods_network(inst, part, b)
    if net is None:
        return None
    flows = feasible_circulation(net)
    if flows is None:
        return None
    counts = [[0] * inst.m for _ in range(inst.n)]
    for (tail, head, _), f in zip(net.edges, flows):
        if tail[0] in ("pref", "any"):
            counts[tail[1]][head[1]] += f
    return Allocation(tuple(tuple(r) for r in counts))


def two_goods_candidates(inst: Instance, part: GoodTypePartition) -> list[Fraction]:
    T = inst.T
    out = set()
    for a, b in part.type_values:
        for k in range(T + 1):
            out.add(k * a + (T - k) * b)
    return sorted(out)


def two_goods_optimal(inst: Instance, part: GoodTypePartition | None = None) -> list[Matching]:
    """Optimal sequence when goods split into two internally-identical types.

    The optimum is one agent's value for some mix of the two types, so a
    binary search over those candidates is exact.
    """
    work = pad_goods(inst)
    if part is None:
        try:
            part = infer_partition(work)
        except InstanceClassError as exc:
            if work is inst:
                raise
            raise InstanceClassError(f"padding with zero goods breaks the two-type structure: {exc}") from exc
    else:
        type_of = tuple(part.type_of)
        if work is not inst:
            zero = [r for r in (0, 1) if all(
                row[j] == 0 for row in inst.values for j in range(inst.m) if type_of[j] == r
            )]
            if not zero:
                raise InstanceClassError("padding with zero goods breaks the two-type structure")
            type_of += (zero[0],) * (work.m - inst.m)
        part = check_partition(work, type_of)
    cands = two_goods_candidates(work, part)
    best = two_goods_feasible(work, part, cands[0])
    if best is None:
        raise InvariantError("smallest candidate bottleneck must be feasible")
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        alloc = two_goods_feasible(work, part, cands[mid])
        if alloc is None:
            hi = mid - 1
        else:
            lo, best = mid, alloc
    return allocation_to_sequence(best, work.T)


def is_identical(inst: Instance) -> bool:
    return all(row == inst.values[0] for row in inst.values)


def _require_identical(inst: Instance) -> None:
    if not is_identical(inst):
        raise InstanceClassError("identical-valuation solver needs all agents to share one valuation")


def top_goods(inst: Instance) -> list[int]:
    """Indices of the ``n`` most valuable goods, by value then index."""
    row = inst.values[0]
    order = sorted(range(inst.m), key=lambda j: (-row[j], j))
    return order[: inst.n]


def gap(inst: Instance) -> Fraction:
    """Value of the best good minus value of the ``n``-th best."""
    work = pad_goods(inst)
    _require_identical(work)
    top = top_goods(work)
    return work.values[0][top[0]] - work.values[0][top[-1]]


def identical_exact(inst: Instance) -> list[Matching]:
    """``k`` copies of each of the ``n`` cyclic shifts over the top ``n`` goods (``T = kn``)."""
    work = pad_goods(inst)
    _require_identical(work)
    n, T = work.n, work.T
    if T % n:
        raise InstanceClassError(f"T={T} is not a multiple of n={n}; use identical-greedy")
    k = T // n
    top = top_goods(work)
    seq: list[Matching] = []
    for shift in range(n):
        seq.extend([tuple(top[(i + shift) % n] for i in range(n))] * k)
    return seq


def identical_greedy(inst: Instance) -> list[Matching]:
    """Each round, agents pick in increasing order of cumulative value.

    Ties: the lower agent index picks first, and the lower good index wins
    among equally valued goods.
    """
    work = pad_goods(inst)
    _require_identical(work)
    n = work.n
    row = work.values[0]
    top = top_goods(work)  # already best-first with index tie-break
    acc = [Fraction(0)] * n
    seq: list[Matching] = []
    for _ in range(work.T):
        order = sorted(range(n), key=lambda i: (acc[i], i))
        mt = [0] * n
        for pos, i in enumerate(order):
            mt[i] = top[pos]
            acc[i] += row[top[pos]]
        seq.append(tuple(mt))
    return seq
