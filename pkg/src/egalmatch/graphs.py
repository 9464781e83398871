"""Bipartite matching and flow primitives.

Everything works on Python ints, so weights of size ``m**n`` (used for
priority-weighted matchings) stay exact.  Ties are broken towards the lowest
left index and then the lowest right index, which keeps outputs reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Bigraph:
    left: int
    right: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a < self.left and 0 <= b < self.right):
                raise ValueError(f"edge ({a}, {b}) out of range")

    @classmethod
    def from_support(cls, matrix: Sequence[Sequence]) -> "Bigraph":
        """Edges at the positive entries of a matrix."""
        edges = frozenset((i, j) for i, row in enumerate(matrix) for j, v in enumerate(row) if v > 0)
        return cls(len(matrix), len(matrix[0]), edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.left)]
        for a, b in sorted(self.edges):
            adj[a].append(b)
        return adj


def maximum_matching(g: Bigraph) -> dict[int, int]:
    """Maximum-cardinality matching by repeated augmenting-path search.

    Left vertices are tried in increasing order and neighbours in increasing
    order, so the result is deterministic.  Returns ``{left: right}``.
    """
    adj = g.adjacency()
    match_right: list[int | None] = [None] * g.right

    def augment(a: int, seen: list[bool]) -> bool:
        for b in adj[a]:
            if seen[b]:
                continue
            seen[b] = True
            if match_right[b] is None or augment(match_right[b], seen):
                match_right[b] = a
                return True
        return False

    for a in range(g.left):
        augment(a, [False] * g.right)
    return {a: b for b, a in enumerate(match_right) if a is not None}


def perfect_matching(g: Bigraph) -> tuple[int, ...] | None:
    """A perfect matching of a square bipartite graph, or ``None`` if none exists."""
    if g.left != g.right:
        raise ValueError("perfect_matching needs a square bipartite graph")
    found = maximum_matching(g)
    if len(found) < g.left:
        return None
    return tuple(found[a] for a in range(g.left))


def max_weight_perfect_matching(weights: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Maximum-weight perfect matching of a complete square bipartite graph.

    Among optimal matchings the lexicographically smallest assignment tuple
    is returned: the weights are lifted by a base-``m`` tie-break term that
    is strictly smaller than one unit of the original weight.
    """
    n = len(weights)
    if any(len(row) != n for row in weights):
        raise ValueError("weight matrix must be square")
    if n == 0:
        return ()
    scale = n ** n
    lifted = [
        [int(weights[i][j]) * scale + (n - 1 - j) * n ** (n - 1 - i) for j in range(n)]
        for i in range(n)
    ]
    top = max(max(row) for row in lifted)
    cost = [[top - w for w in row] for row in lifted]
    return _hungarian_min_cost(cost)


def _hungarian_min_cost(cost: list[list[int]]) -> tuple[int, ...]:
    # Shortest-augmenting-path Hungarian method with potentials, O(n^3).
    n = len(cost)
    INF = None
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j (1-based, 0 = free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv: list = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is INF or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is INF or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    return tuple(assign)


@dataclass
class CirculationNetwork:
    """Directed network with integer vertex demands.

    A vertex's demand is inflow minus outflow, so negative demand marks
    supply.  Capacities of ``None`` are unbounded.
    """

    demands: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)  # (tail, head, capacity)

    def add_vertex(self, name, demand: int) -> None:
        if name in self.demands:
            raise ValueError(f"duplicate vertex {name!r}")
        self.demands[name] = int(demand)

    def add_edge(self, tail, head, capacity: int | None = None) -> int:
        if tail not in self.demands or head not in self.demands:
            raise ValueError(f"edge ({tail!r}, {head!r}) references unknown vertex")
        if capacity is not None and capacity < 0:
            raise ValueError("capacities must be non-negative")
        self.edges.append((tail, head, capacity))
        return len(self.edges) - 1


@dataclass
class FlowNetwork:
    """Single source/sink network produced by the demand transformation."""

    vertices: list
    source: object
    sink: object
    arcs: list  # (tail, head, capacity)
    required: int


def to_flow_network(net: CirculationNetwork) -> FlowNetwork:
    """Standard reduction: supplies hang off a super source, demands feed a super sink.

    Arcs ``0..len(net.edges)-1`` correspond exactly to ``net.edges``.
    """
    total = sum(net.demands.values())
    if total != 0:
        raise ValueError(f"demands sum to {total}, a circulation needs 0")
    required = sum(d for d in net.demands.values() if d > 0)
    source, sink = ("__source__",), ("__sink__",)
    arcs = [(a, b, required if c is None else min(c, required)) for a, b, c in net.edges]
    for v, d in net.demands.items():
        if d < 0:
            arcs.append((source, v, -d))
        elif d > 0:
            arcs.append((v, sink, d))
    return FlowNetwork(list(net.demands) + [source, sink], source, sink, arcs, required)


def max_flow(vertices: Iterable, arcs: Sequence[tuple], source, sink) -> tuple[int, list[int]]:
    """Edmonds-Karp max flow; returns the value and the flow on each arc."""
    index = {v: k for k, v in enumerate(vertices)}
    size = len(index)
    # residual graph as edge lists: to, cap, rev
    graph: list[list[list]] = [[] for _ in range(size)]
    handles = []
    for a, b, cap in arcs:
        ia, ib = index[a], index[b]
        fwd = [ib, cap, None]
        bwd = [ia, 0, fwd]
        fwd[2] = bwd
        graph[ia].append(fwd)
        graph[ib].append(bwd)
        handles.append((fwd, cap))
    s, t = index[source], index[sink]
    value = 0
    while True:
        parent: list = [None] * size
        parent[s] = (s, None)
        queue = deque([s])
        while queue and parent[t] is None:
            x = queue.popleft()
            for edge in graph[x]:
                y, cap, _ = edge
                if cap > 0 and parent[y] is None:
                    parent[y] = (x, edge)
                    queue.append(y)
        if parent[t] is None:
            break
        push = None
        y = t
        while y != s:
            x, edge = parent[y]
            push = edge[1] if push is None else min(push, edge[1])
            y = x
        y = t
        while y != s:
            x, edge = parent[y]
            edge[1] -= push
            edge[2][1] += push
            y = x
        value += push
    return value, [cap - fwd[1] for fwd, cap in handles]


def feasible_circulation(net: CirculationNetwork) -> list[int] | None:
    """Integer flow per edge meeting every demand, or ``None`` if infeasible.

    Raises ``ValueError`` when the demands do not sum to zero.
    """
    flow_net = to_flow_network(net)
    value, flows = max_flow(flow_net.vertices, flow_net.arcs, flow_net.source, flow_net.sink)
    if value < flow_net.required:
        return None
    return flows[: len(net.edges)]


def describe_flow_network(net: CirculationNetwork) -> dict:
    """JSON-friendly dump of the transformed network, for debugging."""
    flow_net = to_flow_network(net)
    name = lambda v: v[0] if isinstance(v, tuple) and len(v) == 1 else str(v)  # noqa: E731
    return {
        "source": name(flow_net.source),
        "sink": name(flow_net.sink),
        "required": flow_net.required,
        "arcs": [
            {"tail": name(a), "head": name(b), "capacity": c} for a, b, c in flow_net.arcs
        ],
    }
