"""Combinatorial tests on erasure patterns: regularity and excess-compatibility.

A pattern E on an m x n grid is *regular* for (a, b) when every subrectangle
S x T with |S| >= a and |T| >= b satisfies |E ∩ (S x T)| <= |S|b + |T|a - ab.
It is *excess-compatible* when, for every column set V of size n - b, the
row excesses max(deg(i) - b, 0) can be routed through the erased cells in V
with at most a units per column.  The two notions coincide; the flow
version needs only C(n, b) (or C(m, a)) max-flow calls.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from mrlab.tensor import ErasurePattern


@dataclass(frozen=True)
class RegularityViolation:
    """Rows S and columns T (0-based) with too many erasures in S x T; evaluates false."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    erased: int
    bound: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ExcessFailure:
    """Column set V admitting no excess flow, with Hall-blocker rows U; evaluates false."""

    columns: tuple[int, ...]
    blocker: tuple[int, ...]
    demand: int
    supply: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class ExcessProfile:
    excesses: tuple[int, ...]
    demand: int


def excess_profile(E: ErasurePattern, a: int, b: int) -> ExcessProfile:
    return ExcessProfile(tuple(max(d - b, 0) for d in E.row_degrees()), a)


def _check_ab(E: ErasurePattern, a: int, b: int) -> None:
    if not (0 <= a <= E.m and 0 <= b <= E.n):
        raise ValueError(f"need 0 <= a <= m and 0 <= b <= n, got a={a} b={b} for a {E.m}x{E.n} grid")


# ---------------------------------------------------------------------------
# naive regularity


def _subsets(size: int, least: int):
    for s in range(least, size + 1):
        yield from itertools.combinations(range(size), s)


def is_regular_naive(E: ErasurePattern, a: int, b: int, exhaustive: bool = False) -> bool | RegularityViolation:
    """Check |E ∩ (S x T)| <= sb + ta - ab over all |S| >= a, |T| >= b.

    By default, for each S only the best T of each size is tried: columns
    sorted by their erasure count inside S, which is where any violation for
    that S must show up first.  ``exhaustive`` enumerates every T as well.
    Returns the first violating (S, T) in (|S|, S) order.
    """
    _check_ab(E, a, b)
    rows = E.row_masks()
    n = E.n
    for S in _subsets(E.m, a):
        s = len(S)
        union_cols = [sum(rows[i] >> j & 1 for i in S) for j in range(n)]
        if exhaustive:
            for T in _subsets(n, b):
                count = sum(union_cols[j] for j in T)
                bound = s * b + len(T) * a - a * b
                if count > bound:
                    return RegularityViolation(S, T, count, bound)
            continue
        order = sorted(range(n), key=lambda j: (-union_cols[j], j))
        count = 0
        for t, j in enumerate(order, 1):
            count += union_cols[j]
            if t < b:
                continue
            bound = s * b + t * a - a * b
            if count > bound:
                return RegularityViolation(S, tuple(sorted(order[:t])), count, bound)
    return True


def is_regular_complement(E: ErasurePattern, a: int, b: int) -> bool | RegularityViolation:
    """Same condition in the form |Ē ∩ (S x T)| >= (s - a)(t - b), checked exhaustively."""
    _check_ab(E, a, b)
    rows = E.row_masks()
    for S in _subsets(E.m, a):
        for T in _subsets(E.n, b):
            kept = sum(1 for i in S for j in T if not rows[i] >> j & 1)
            if kept < (len(S) - a) * (len(T) - b):
                count = len(S) * len(T) - kept
                return RegularityViolation(S, T, count, len(S) * b + len(T) * a - a * b)
    return True


# ---------------------------------------------------------------------------
# max flow


@dataclass(frozen=True)
class FlowNetwork:
    nodes: int
    arcs: tuple[tuple[int, int, int], ...]
    source: int
    sink: int

    def __post_init__(self):
        if not (0 <= self.source < self.nodes and 0 <= self.sink < self.nodes) or self.source == self.sink:
            raise ValueError("source and sink must be distinct nodes")
        for u, v, c in self.arcs:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise ValueError(f"arc ({u},{v}) references a missing node")
            if c < 0:
                raise ValueError("capacities must be non-negative")
            if v == self.source or u == self.sink:
                raise ValueError("no arcs may enter the source or leave the sink")


class _Residual:
    __slots__ = ("head", "cap", "adj")

    def __init__(self, net: FlowNetwork):
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(net.nodes)]
        for u, v, c in net.arcs:
            self.adj[u].append(len(self.head))
            self.head.append(v)
            self.cap.append(c)
            self.adj[v].append(len(self.head))
            self.head.append(u)
            self.cap.append(0)

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.head[e]
                if self.cap[e] and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen


def _dinic(net: FlowNetwork) -> tuple[int, _Residual]:
    g = _Residual(net)
    s, t = net.source, net.sink
    head, cap, adj = g.head, g.cap, g.adj
    total = 0
    while True:
        level = [-1] * net.nodes
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = head[e]
                if cap[e] and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[t] < 0:
            return total, g
        it = [0] * net.nodes

        def push(u: int, limit: int) -> int:
            if u == t:
                return limit
            edges = adj[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                v = head[e]
                if cap[e] and level[v] == level[u] + 1:
                    got = push(v, min(limit, cap[e]))
                    if got:
                        cap[e] -= got
                        cap[e ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while True:
            f = push(s, 1 << 62)
            if not f:
                break
            total += f


def max_flow(net: FlowNetwork) -> tuple[int, list[int]]:
    """Dinic's algorithm.  Returns the flow value and the flow on each arc."""
    value, g = _dinic(net)
    flows = [g.cap[2 * i + 1] for i in range(len(net.arcs))]
    if __debug__:
        _check_flow(net, flows, value)
    return value, flows


def _check_flow(net: FlowNetwork, flows: Sequence[int], value: int) -> None:
    balance = [0] * net.nodes
    for (u, v, c), f in zip(net.arcs, flows):
        if not 0 <= f <= c:
            raise AssertionError(f"flow {f} on arc ({u},{v}) exceeds capacity {c}")
        balance[u] -= f
        balance[v] += f
    for x in range(net.nodes):
        if x not in (net.source, net.sink) and balance[x]:
            raise AssertionError(f"flow not conserved at node {x}")
    if balance[net.sink] != value or balance[net.source] != -value:
        raise AssertionError("flow value mismatch")


# ---------------------------------------------------------------------------
# excess-compatibility


def excess_network(E: ErasurePattern, a: int, b: int, columns: Sequence[int]) -> FlowNetwork:
    """source -> row i (capacity e(i)), row i -> column j (1, for erased (i, j) with
    j in ``columns``), column j -> sink (capacity a)."""
    m = E.m
    profile = excess_profile(E, a, b)
    source, sink = m + len(columns), m + len(columns) + 1
    arcs = [(source, i, e) for i, e in enumerate(profile.excesses) if e]
    for i in range(m):
        for c, j in enumerate(columns):
            if (i, j) in E.cells:
                arcs.append((i, m + c, 1))
    arcs += [(m + c, sink, a) for c in range(len(columns))]
    return FlowNetwork(m + len(columns) + 2, tuple(arcs), source, sink)


def hall_blocker_sizes(E: ErasurePattern, a: int, b: int, U: Sequence[int], V: Sequence[int]) -> tuple[int, int]:
    ex = excess_profile(E, a, b).excesses
    demand = sum(ex[i] for i in U)
    supply = sum(min(a, sum(1 for i in U if (i, j) in E.cells)) for j in V)
    return demand, supply


def excess_flow(E: ErasurePattern, a: int, b: int, columns: Sequence[int]) -> bool | ExcessFailure:
    """Whether the excesses can be routed through the erased cells in ``columns``.

    On failure the rows on the source side of the minimum cut are returned;
    they form a Hall-blocker, which is checked before returning.
    """
    _check_ab(E, a, b)
    need = sum(excess_profile(E, a, b).excesses)
    if need == 0:
        return True
    V = tuple(columns)
    net = excess_network(E, a, b, V)
    value, g = _dinic(net)
    if value == need:
        return True
    side = g.reachable(net.source)
    U = tuple(i for i in range(E.m) if side[i])
    demand, supply = hall_blocker_sizes(E, a, b, U, V)
    if demand <= supply:
        raise AssertionError(f"min-cut rows {U} are not a Hall-blocker for V={V}")
    return ExcessFailure(V, U, demand, supply)


def is_excess_compatible(E: ErasurePattern, a: int, b: int) -> bool | ExcessFailure:
    """Every V of size n - b admits a full excess flow; the first failing V in
    lexicographic order is returned with its Hall-blocker."""
    _check_ab(E, a, b)
    if not any(excess_profile(E, a, b).excesses):
        return True
    for V in itertools.combinations(range(E.n), E.n - b):
        result = excess_flow(E, a, b, V)
        if not result:
            return result
    return True


def fast_check(E: ErasurePattern, a: int, b: int) -> bool | ExcessFailure:
    """Excess-compatibility in the orientation needing fewer flow computations.

    Row subsets (transpose, swap a and b) are used when C(m, a) <= C(n, b).
    A returned failure then refers to the transposed grid.
    """
    _check_ab(E, a, b)
    from math import comb

    if comb(E.m, a) <= comb(E.n, b):
        return is_excess_compatible(E.transpose(), b, a)
    return is_excess_compatible(E, a, b)
