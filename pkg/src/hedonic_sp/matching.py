"""Maximum-weight matchings with a weight-independent tie-break.

Among all maximum-weight matchings we always return the one that is least
under a fixed total order on matchings of the complete graph K_n. The order
is: number the edges {i, j} (i < j) of K_n lexicographically, give a
matching the key ``sum(2**index(e))`` and compare keys. It depends on ``n``
only, never on weights, which is what makes the matching mechanism
strategyproof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .errors import GuardExceededError, ValidationError

Edge = tuple[int, int]
Matching = FrozenSet[Edge]

BRUTE_FORCE_MAX_N = 16


def _edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class UndirectedWeightedGraph:
    n: int
    edges: Mapping[Edge, Fraction]

    def __post_init__(self):
        clean: dict[Edge, Fraction] = {}
        for (i, j), w in self.edges.items():
            if i == j:
                raise ValidationError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge ({i}, {j}) out of range for n={self.n}")
            w = Fraction(w)
            if w <= 0:
                raise ValidationError(f"edge ({i}, {j}) has non-positive weight {w}")
            e = _edge(i, j)
            if e in clean:
                raise ValidationError(f"duplicate edge {e}")
            clean[e] = w
        object.__setattr__(self, "edges", dict(sorted(clean.items())))

    def weight(self, i: int, j: int) -> Fraction:
        """0 for absent pairs."""
        return self.edges.get(_edge(i, j), Fraction(0))

    def induced(self, vertices: Iterable[int]) -> UndirectedWeightedGraph:
        """Subgraph on ``vertices``, keeping the original labels and ``n``."""
        keep = set(vertices)
        return UndirectedWeightedGraph(
            self.n, {e: w for e, w in self.edges.items() if e[0] in keep and e[1] in keep}
        )

    def _key(self) -> tuple:
        return (self.n, tuple(self.edges.items()))

    def __hash__(self):
        return hash(self._key())

    def __eq__(self, other):
        if not isinstance(other, UndirectedWeightedGraph):
            return NotImplemented
        return self._key() == other._key()


def edge_index(i: int, j: int, n: int) -> int:
    """Position of {i, j} in the lexicographic list of K_n's edges."""
    i, j = _edge(i, j)
    if i == j or not (0 <= i and j < n):
        raise ValidationError(f"({i}, {j}) is not an edge of K_{n}")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def order_key(m: Iterable[Edge], n: int) -> int:
    return sum(1 << edge_index(i, j, n) for i, j in m)


def matching_precedes(a: Iterable[Edge], b: Iterable[Edge], n: int) -> bool:
    """Strict order on matchings of K_n; equal matchings do not precede each other."""
    return order_key(a, n) < order_key(b, n)


def matching_weight(g: UndirectedWeightedGraph, m: Iterable[Edge]) -> Fraction:
    return sum((g.weight(i, j) for i, j in m), Fraction(0))


def is_matching(g: UndirectedWeightedGraph, m: Iterable[Edge]) -> bool:
    used: set[int] = set()
    for i, j in m:
        if _edge(i, j) not in g.edges or i in used or j in used:
            return False
        used.update((i, j))
    return True


def max_weight_matching(g: UndirectedWeightedGraph) -> Matching:
    """The order-minimal matching among those of maximum total weight.

    Weights are scaled to integers and then adjusted to
    ``w(e) * 2**(E + 1) - 2**index(e)`` with ``E = n(n-1)/2``; a plain
    maximum-weight matching under the adjusted weights is exactly the
    tie-broken optimum. Solved with the blossom algorithm in networkx, which
    stays in integer arithmetic for integer weights.
    """
    return _max_weight_matching_cached(g)


@lru_cache(maxsize=1 << 16)
def _max_weight_matching_cached(g: UndirectedWeightedGraph) -> Matching:
    if not g.edges:
        return frozenset()
    scale = math.lcm(*(w.denominator for w in g.edges.values()))
    shift = g.n * (g.n - 1) // 2 + 1
    nxg = nx.Graph()
    for (i, j), w in g.edges.items():
        adjusted = int(w * scale) * (1 << shift) - (1 << edge_index(i, j, g.n))
        nxg.add_edge(i, j, weight=adjusted)
    pairs = nx.max_weight_matching(nxg, maxcardinality=False)
    return frozenset(_edge(i, j) for i, j in pairs)


def enumerate_matchings(g: UndirectedWeightedGraph) -> Iterator[Matching]:
    """Every matching of ``g``, the empty one included."""
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for i, j in g.edges:
        adj[i].append(j)

    def rec(v: int, used: frozenset[int], acc: tuple[Edge, ...]) -> Iterator[Matching]:
        while v < g.n and v in used:
            v += 1
        if v >= g.n:
            yield frozenset(acc)
            return
        yield from rec(v + 1, used | {v}, acc)
        for u in adj[v]:
            if u not in used:
                yield from rec(v + 1, used | {v, u}, acc + ((v, u),))

    yield from rec(0, frozenset(), ())


def brute_force_max_matching(g: UndirectedWeightedGraph) -> Matching:
    """Same contract as :func:`max_weight_matching`, by exhaustive enumeration."""
    if g.n > BRUTE_FORCE_MAX_N:
        raise GuardExceededError(
            f"brute-force matching limited to n <= {BRUTE_FORCE_MAX_N}, got {g.n}"
        )
    best: Matching = frozenset()
    best_w = Fraction(0)
    best_key = 0
    for m in enumerate_matchings(g):
        w = matching_weight(g, m)
        if w > best_w or (w == best_w and order_key(m, g.n) < best_key):
            best, best_w, best_key = m, w, order_key(m, g.n)
    return best


def intra_coalition_max_matching(g: UndirectedWeightedGraph, coalition: Iterable[int]) -> Matching:
    return max_weight_matching(g.induced(coalition))


def one_factorization(vertices: Sequence[int]) -> list[Matching]:
    """Round-robin split of the complete graph on an even vertex set into
    ``k - 1`` disjoint perfect matchings."""
    k = len(vertices)
    if k % 2:
        raise ValidationError("one-factorization needs an even number of vertices")
    if k == 0:
        return []
    fixed, rest = vertices[-1], list(vertices[:-1])
    rounds = []
    for r in range(k - 1):
        pairs = {_edge(fixed, rest[r])}
        for s in range(1, k // 2):
            pairs.add(_edge(rest[(r + s) % (k - 1)], rest[(r - s) % (k - 1)]))
        rounds.append(frozenset(pairs))
    return rounds
