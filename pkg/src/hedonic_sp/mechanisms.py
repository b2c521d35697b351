"""Deterministic mechanisms mapping declared valuations to partitions."""

from __future__ import annotations

import enum
from typing import Sequence

from .errors import ClassMismatchError, ValidationError
from .game import Partition, ValuationClass, ValuationProfile, validate
from .matching import UndirectedWeightedGraph, max_weight_matching

AgentOrdering = tuple[int, ...]


class MechanismId(enum.Enum):
    GRAND = "grand"
    SINGLETONS = "singletons"
    DUPLEX_PAIRING = "duplex-pairing"
    MATCHING = "matching"

    @property
    def accepted_classes(self) -> frozenset[ValuationClass]:
        if self is MechanismId.DUPLEX_PAIRING:
            return frozenset({ValuationClass.DUPLEX, ValuationClass.SIMPLE})
        if self is MechanismId.MATCHING:
            return frozenset({ValuationClass.SIMPLE})
        return frozenset(ValuationClass)

    def accepts(self, vclass: ValuationClass) -> bool:
        return vclass in self.accepted_classes


def identity_order(n: int) -> AgentOrdering:
    return tuple(range(n))


def check_order(order: Sequence[int], n: int) -> AgentOrdering:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise ValidationError(f"ordering {order} is not a permutation of 0..{n - 1}")
    return order


def _require(d: ValuationProfile, classes: frozenset[ValuationClass], what: str) -> None:
    if d.vclass not in classes:
        names = ", ".join(sorted(c.value for c in classes))
        raise ClassMismatchError(f"{what} needs a {names} profile, got {d.vclass.value}")


def is_sink(d: ValuationProfile, i: int) -> bool:
    """No j with d_i(j) = 1 and d_j(i) != -1."""
    _require(d, MechanismId.DUPLEX_PAIRING.accepted_classes, "is_sink")
    rows = d.rows
    return not any(rows[i][j] == 1 and rows[j][i] != -1 for j in range(d.n) if j != i)


def duplex_pairing(d: ValuationProfile, order: Sequence[int] | None = None) -> Partition:
    """Scan agents in ``order``; pair the first agent i that has a +1 arc to some j
    which either (a) returns the +1, (b) is indifferent and a sink, or
    (c) is indifferent and comes earlier in the order. Everyone else is alone.

    Cases are tried a, b, c for each i, and within a case j ascends by index.
    At most one pair is ever formed.
    """
    _require(d, MechanismId.DUPLEX_PAIRING.accepted_classes, "duplex pairing")
    n = d.n
    order = identity_order(n) if order is None else check_order(order, n)
    position = {a: k for k, a in enumerate(order)}
    rows = d.rows
    sink: dict[int, bool] = {}

    def is_sink_cached(j: int) -> bool:
        if j not in sink:
            sink[j] = not any(rows[j][k] == 1 and rows[k][j] != -1 for k in range(n) if k != j)
        return sink[j]

    for i in order:
        liked = [j for j in range(n) if j != i and rows[i][j] == 1]
        if not liked:
            continue
        partner = next((j for j in liked if rows[j][i] == 1), None)
        if partner is None:
            partner = next((j for j in liked if rows[j][i] == 0 and is_sink_cached(j)), None)
        if partner is None:
            partner = next(
                (j for j in liked if rows[j][i] == 0 and position[j] < position[i]), None
            )
        if partner is not None:
            return Partition.from_pairs(n, [(i, partner)])
    return Partition.singletons(n)


def build_gbar(d: ValuationProfile) -> UndirectedWeightedGraph:
    """Symmetrise simple declarations: weight 1 for a one-way arc, 2 for a mutual pair."""
    _require(d, MechanismId.MATCHING.accepted_classes, "build_gbar")
    rows = d.rows
    edges = {}
    for i in range(d.n):
        for j in range(i + 1, d.n):
            w = int(rows[i][j] == 1) + int(rows[j][i] == 1)
            if w:
                edges[(i, j)] = w
    return UndirectedWeightedGraph(d.n, edges)


def matching_mechanism(d: ValuationProfile) -> Partition:
    m = max_weight_matching(build_gbar(d))
    return Partition.from_pairs(d.n, m)


def run_mechanism(
    mechanism: MechanismId, d: ValuationProfile, order: Sequence[int] | None = None
) -> Partition:
    problems = validate(d)
    if problems:
        raise ValidationError("invalid profile: " + "; ".join(problems))
    if not mechanism.accepts(d.vclass):
        raise ClassMismatchError(
            f"mechanism {mechanism.value} does not accept {d.vclass.value} profiles"
        )
    if mechanism is MechanismId.GRAND:
        return Partition.grand(d.n)
    if mechanism is MechanismId.SINGLETONS:
        return Partition.singletons(d.n)
    if mechanism is MechanismId.DUPLEX_PAIRING:
        return duplex_pairing(d, order)
    return matching_mechanism(d)
