"""Exhaustive optimal-welfare oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import ClassMismatchError, GuardExceededError
from .game import GameKind, Partition, ValuationClass, ValuationProfile

MAX_ORACLE_N = 12


@dataclass(frozen=True)
class OptResult:
    best: Partition
    welfare: Fraction
    partitions_examined: int


def _guard(n: int) -> None:
    if not 1 <= n <= MAX_ORACLE_N:
        raise GuardExceededError(f"exhaustive search needs 1 <= n <= {MAX_ORACLE_N}, got {n}")


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All RGS a[0..n-1] with a[0] = 0 and a[k] <= 1 + max(a[:k]), lexicographically.

    The same list object is yielded each time and mutated afterwards.
    """
    a = [0] * n
    m = [0] * n  # m[k] = max(a[:k+1])
    while True:
        yield a
        k = n - 1
        while k > 0 and a[k] > m[k - 1]:
            k -= 1
        if k == 0:
            return
        a[k] += 1
        m[k] = max(m[k - 1], a[k])
        for t in range(k + 1, n):
            a[t] = 0
            m[t] = m[k]


def _blocks(rgs: list[int]) -> list[list[int]]:
    blocks: list[list[int]] = []
    for agent, b in enumerate(rgs):
        if b == len(blocks):
            blocks.append([agent])
        else:
            blocks[b].append(agent)
    return blocks


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Every set partition of range(n) once, in canonical form and RGS order."""
    _guard(n)
    for rgs in restricted_growth_strings(n):
        yield Partition(n, tuple(tuple(b) for b in _blocks(rgs)))


def _subset_values(v: ValuationProfile, kind: GameKind) -> list[Fraction]:
    """Coalition value for every bitmask subset, built incrementally."""
    n = v.n
    rows = v.rows
    internal = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        s = internal[rest]
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            s += rows[low][j] + rows[j][low]
            r &= r - 1
        internal[mask] = s
    if kind is GameKind.FHG:
        return [s / m.bit_count() if m else s for m, s in enumerate(internal)]
    return internal


def optimal_partition(v: ValuationProfile, kind: GameKind) -> OptResult:
    """Maximum social welfare over all partitions; the first maximiser in
    enumeration order wins ties."""
    _guard(v.n)
    value = _subset_values(v, kind)
    best_blocks = None
    best = None
    count = 0
    for rgs in restricted_growth_strings(v.n):
        count += 1
        masks = [0] * (max(rgs) + 1)
        for agent, b in enumerate(rgs):
            masks[b] |= 1 << agent
        w = sum((value[m] for m in masks), Fraction(0))
        if best is None or w > best:
            best = w
            best_blocks = _blocks(rgs)
    partition = Partition(v.n, tuple(tuple(b) for b in best_blocks))
    return OptResult(partition, best, count)


def optimal_welfare_upper_bound_nonneg(v: ValuationProfile) -> Fraction:
    """Half the matrix sum: every welfare-positive FHG coalition has at least
    two members, so nobody's utility can exceed half their row sum."""
    if v.vclass not in (ValuationClass.NONNEG, ValuationClass.SIMPLE):
        raise ClassMismatchError(f"bound needs a nonneg or simple profile, got {v.vclass.value}")
    return v.total() / 2
