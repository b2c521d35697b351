"""Hedonic game instances: valuation profiles, partitions, utilities and welfare.

Agents are 0-indexed. All values are :class:`fractions.Fraction`; nothing in
this module touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ValidationError

ZERO = Fraction(0)
ONE = Fraction(1)


class ValuationClass(enum.Enum):
    GENERAL = "general"
    NONNEG = "nonneg"
    DUPLEX = "duplex"
    SIMPLE = "simple"

    def admits(self, value: Fraction) -> bool:
        if self is ValuationClass.GENERAL:
            return -1 <= value <= 1
        if self is ValuationClass.NONNEG:
            return 0 <= value <= 1
        if self is ValuationClass.DUPLEX:
            return value in (-1, 0, 1)
        return value in (0, 1)

    @property
    def finite_values(self) -> tuple[Fraction, ...] | None:
        """Admissible values in ascending order, or None for continuous classes."""
        if self is ValuationClass.DUPLEX:
            return (-ONE, ZERO, ONE)
        if self is ValuationClass.SIMPLE:
            return (ZERO, ONE)
        return None

    def contains(self, other: ValuationClass) -> bool:
        """True if every profile of ``other`` is also a valid profile of ``self``."""
        chain = {
            ValuationClass.GENERAL: {ValuationClass.GENERAL, ValuationClass.NONNEG,
                                     ValuationClass.DUPLEX, ValuationClass.SIMPLE},
            ValuationClass.NONNEG: {ValuationClass.NONNEG, ValuationClass.SIMPLE},
            ValuationClass.DUPLEX: {ValuationClass.DUPLEX, ValuationClass.SIMPLE},
            ValuationClass.SIMPLE: {ValuationClass.SIMPLE},
        }
        return other in chain[self]


class GameKind(enum.Enum):
    ASHG = "ashg"
    FHG = "fhg"


@dataclass(frozen=True)
class ValuationProfile:
    """Dense n x n matrix of exact valuations; ``rows[i][j]`` is how much i values j.

    The constructor normalises entries to ``Fraction`` but does not reject
    out-of-class values; call :func:`validate` for that.
    """

    n: int
    vclass: ValuationClass
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"need at least one agent, got n={self.n}")
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise ValidationError(f"valuation matrix must be {self.n}x{self.n}")
        if not all(type(x) is Fraction for r in self.rows for x in r):
            object.__setattr__(
                self, "rows", tuple(tuple(Fraction(x) for x in r) for r in self.rows)
            )

    @classmethod
    def zeros(cls, n: int, vclass: ValuationClass) -> ValuationProfile:
        return cls(n, vclass, tuple((ZERO,) * n for _ in range(n)))

    @classmethod
    def from_arcs(
        cls,
        n: int,
        vclass: ValuationClass,
        arcs: Mapping[tuple[int, int], Fraction | int | str] | Iterable[tuple[int, int]],
    ) -> ValuationProfile:
        """Build a sparse profile. A bare iterable of pairs means weight 1 arcs."""
        if not isinstance(arcs, Mapping):
            arcs = {arc: ONE for arc in arcs}
        grid = [[ZERO] * n for _ in range(n)]
        for (i, j), value in arcs.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"arc ({i}, {j}) out of range for n={n}")
            grid[i][j] = Fraction(value)
        return cls(n, vclass, tuple(tuple(r) for r in grid))

    def __call__(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def arcs(self) -> dict[tuple[int, int], Fraction]:
        """Nonzero entries, in row-major order."""
        return {
            (i, j): x
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
            if x != 0
        }

    def with_row(self, i: int, row: Sequence[Fraction]) -> ValuationProfile:
        """Copy with agent ``i``'s whole valuation row replaced."""
        _check_agent(self.n, i)
        rows = list(self.rows)
        rows[i] = tuple(row)
        return ValuationProfile(self.n, self.vclass, tuple(rows))

    def with_class(self, vclass: ValuationClass) -> ValuationProfile:
        return ValuationProfile(self.n, vclass, self.rows)

    def total(self) -> Fraction:
        return sum((x for row in self.rows for x in row), ZERO)


@dataclass(frozen=True)
class Partition:
    """Canonical set partition of ``range(n)``.

    Members ascend inside each coalition; coalitions are ordered by their
    smallest member, so two equal partitions are equal as tuples.
    """

    n: int
    coalitions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = []
        seen: set[int] = set()
        for block in self.coalitions:
            members = tuple(sorted(block))
            if not members:
                raise ValidationError("coalitions must be nonempty")
            for a in members:
                if not 0 <= a < self.n:
                    raise ValidationError(f"agent {a} out of range for n={self.n}")
                if a in seen:
                    raise ValidationError(f"agent {a} appears in two coalitions")
                seen.add(a)
            blocks.append(members)
        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - seen)
            raise ValidationError(f"agents {missing} are not covered")
        blocks.sort(key=lambda b: b[0])
        object.__setattr__(self, "coalitions", tuple(blocks))

    @classmethod
    def grand(cls, n: int) -> Partition:
        return cls(n, (tuple(range(n)),))

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Partition:
        """Pairs become coalitions, everyone else stays alone."""
        blocks = [tuple(p) for p in pairs]
        matched = {a for p in blocks for a in p}
        blocks.extend((i,) for i in range(n) if i not in matched)
        return cls(n, tuple(blocks))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.coalitions)

    def __len__(self) -> int:
        return len(self.coalitions)

    def __str__(self) -> str:
        return " | ".join("{" + ",".join(map(str, c)) + "}" for c in self.coalitions)


def _check_agent(n: int, i: int) -> None:
    if not 0 <= i < n:
        raise ValidationError(f"agent index {i} out of range for n={n}")


def coalition_of(p: Partition, i: int) -> tuple[int, ...]:
    _check_agent(p.n, i)
    for block in p.coalitions:
        if i in block:
            return block
    raise AssertionError("partition invariant broken")


def coalition_value(v: ValuationProfile, kind: GameKind, coalition: Sequence[int]) -> Fraction:
    """Welfare contributed by one coalition: its internal arc sum, divided by
    its size under FHG."""
    rows = v.rows
    s = sum((rows[i][j] for i in coalition for j in coalition), ZERO)
    if kind is GameKind.FHG:
        return s / len(coalition)
    return s


def utility(v: ValuationProfile, kind: GameKind, p: Partition, i: int) -> Fraction:
    if p.n != v.n:
        raise ValidationError(f"partition has {p.n} agents, profile has {v.n}")
    block = coalition_of(p, i)
    row = v.rows[i]
    s = sum((row[j] for j in block), ZERO)
    if kind is GameKind.FHG:
        return s / len(block)
    return s


def social_welfare(v: ValuationProfile, kind: GameKind, p: Partition) -> Fraction:
    if p.n != v.n:
        raise ValidationError(f"partition has {p.n} agents, profile has {v.n}")
    return sum((coalition_value(v, kind, c) for c in p.coalitions), ZERO)


def validate(v: ValuationProfile) -> list[str]:
    """Every out-of-class entry and nonzero diagonal, as readable messages.

    An empty list means the profile is valid.
    """
    problems = []
    for i, row in enumerate(v.rows):
        for j, x in enumerate(row):
            if i == j and x != 0:
                problems.append(f"v[{i}][{i}] = {x}: diagonal must be 0")
            elif not v.vclass.admits(x):
                problems.append(f"v[{i}][{j}] = {x}: not admissible for class {v.vclass.value}")
    return problems
