"""Empirical checks: strategyproofness, acceptability, approximation ratios.

A mechanism is either a :class:`MechanismId` (run through
:func:`run_mechanism` with the given ordering) or any callable taking a
profile and returning a partition, which is how test doubles get in.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import ClassMismatchError, ValidationError
from .game import (
    GameKind,
    Partition,
    ValuationClass,
    ValuationProfile,
    coalition_value,
    social_welfare,
    utility,
)
from .instances import Instance, gen_random
from .matching import intra_coalition_max_matching, matching_weight, max_weight_matching
from .mechanisms import MechanismId, build_gbar, run_mechanism
from .oracle import optimal_partition

MechanismFn = Callable[[ValuationProfile], Partition]
Mechanism = Union[MechanismId, MechanismFn]

GRID_STEP = Fraction(1, 10)
# magnitudes the lower-bound constructions lean on
PROOF_VALUES = (Fraction(1, 100), Fraction(9, 10))
SAMPLE_MAX_DENOMINATOR = 1000


def as_callable(mechanism: Mechanism, order: Sequence[int] | None = None) -> MechanismFn:
    if isinstance(mechanism, MechanismId):
        return lambda d: run_mechanism(mechanism, d, order)
    return mechanism


def mechanism_name(mechanism: Mechanism) -> str:
    if isinstance(mechanism, MechanismId):
        return mechanism.value
    return getattr(mechanism, "__name__", repr(mechanism))


class DeviationMode(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    GRID = "grid"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class DeviationSpace:
    """Which full-row declarations an agent may try instead of the truth.

    Exhaustive lists every row of a finite class. Grid takes the product of
    the admissible values on a ``step`` lattice plus -1, 0, 1 and the
    magnitudes 1/100 and 9/10. Sampled draws ``count`` rows of uniform
    rationals with denominator at most 1000.
    """

    vclass: ValuationClass
    n: int
    mode: DeviationMode = DeviationMode.EXHAUSTIVE
    step: Fraction = GRID_STEP
    count: int = 200
    seed: int = 0

    def __post_init__(self):
        finite = self.vclass.finite_values is not None
        if self.mode is DeviationMode.EXHAUSTIVE and not finite:
            raise ValidationError(
                f"exhaustive deviations need a duplex or simple class, got {self.vclass.value}"
            )
        if self.mode is DeviationMode.GRID and not 0 < self.step <= 1:
            raise ValidationError(f"grid step must lie in (0, 1], got {self.step}")

    @property
    def complete(self) -> bool:
        return self.mode is DeviationMode.EXHAUSTIVE

    def values(self) -> tuple[Fraction, ...]:
        if self.vclass.finite_values is not None and self.mode is not DeviationMode.SAMPLED:
            return self.vclass.finite_values
        lo = Fraction(-1) if self.vclass is ValuationClass.GENERAL else Fraction(0)
        vals = {lo + k * self.step for k in range(int((1 - lo) / self.step) + 1)}
        vals |= {Fraction(-1), Fraction(0), Fraction(1)}
        vals |= set(PROOF_VALUES) | {-x for x in PROOF_VALUES}
        return tuple(sorted(x for x in vals if self.vclass.admits(x)))

    def _sample(self, rng: random.Random) -> Fraction:
        finite = self.vclass.finite_values
        if finite is not None:
            return rng.choice(finite)
        q = rng.randint(1, SAMPLE_MAX_DENOMINATOR)
        lo = -q if self.vclass is ValuationClass.GENERAL else 0
        return Fraction(rng.randint(lo, q), q)

    def rows(self, agent: int) -> Iterator[tuple[Fraction, ...]]:
        others = [j for j in range(self.n) if j != agent]
        zero = Fraction(0)
        if self.mode is DeviationMode.SAMPLED:
            rng = random.Random(self.seed * 1_000_003 + agent)
            for _ in range(self.count):
                row = [zero] * self.n
                for j in others:
                    row[j] = self._sample(rng)
                yield tuple(row)
            return
        for combo in itertools.product(self.values(), repeat=len(others)):
            row = [zero] * self.n
            for j, x in zip(others, combo):
                row[j] = x
            yield tuple(row)


@dataclass(frozen=True)
class Witness:
    agent: int
    truth: ValuationProfile
    deviation: tuple[Fraction, ...]
    deviation_index: int
    utility_truthful: Fraction
    utility_deviating: Fraction

    def replay(self, mechanism: Mechanism, order: Sequence[int] | None = None,
               kind: GameKind = GameKind.ASHG) -> bool:
        """Re-run both declarations and confirm the exact same gain."""
        run = as_callable(mechanism, order)
        honest = utility(self.truth, kind, run(self.truth), self.agent)
        lying = utility(self.truth, kind, run(self.truth.with_row(self.agent, self.deviation)),
                        self.agent)
        return (honest, lying) == (self.utility_truthful, self.utility_deviating) and lying > honest


@dataclass(frozen=True)
class SPVerdict:
    holds: bool
    complete: bool
    witness: Witness | None = None
    deviations_checked: int = 0

    @property
    def status(self) -> str:
        if not self.holds:
            return "violated"
        return "holds" if self.complete else "no violation found (incomplete search)"


def iter_violations(
    mechanism: Mechanism,
    truth: ValuationProfile,
    space: DeviationSpace,
    order: Sequence[int] | None = None,
    kind: GameKind = GameKind.ASHG,
    counter: list[int] | None = None,
) -> Iterator[Witness]:
    """Every profitable single-agent deviation, ordered by (agent, deviation index)."""
    if space.vclass is not truth.vclass or space.n != truth.n:
        raise ClassMismatchError(
            f"deviation space is {space.vclass.value}/n={space.n}, "
            f"profile is {truth.vclass.value}/n={truth.n}"
        )
    run = as_callable(mechanism, order)
    honest_outcome = run(truth)
    for agent in range(truth.n):
        honest = utility(truth, kind, honest_outcome, agent)
        for index, row in enumerate(space.rows(agent)):
            if counter is not None:
                counter[0] += 1
            if row == truth.rows[agent]:
                continue
            lying = utility(truth, kind, run(truth.with_row(agent, row)), agent)
            if lying > honest:
                yield Witness(agent, truth, row, index, honest, lying)


def check_strategyproof(
    mechanism: Mechanism,
    truth: ValuationProfile,
    space: DeviationSpace,
    order: Sequence[int] | None = None,
    kind: GameKind = GameKind.ASHG,
) -> SPVerdict:
    counter = [0]
    witness = next(iter_violations(mechanism, truth, space, order, kind, counter), None)
    if witness is not None:
        return SPVerdict(False, space.complete, witness, counter[0])
    return SPVerdict(True, space.complete, None, counter[0])


def all_profiles(vclass: ValuationClass, n: int) -> Iterator[ValuationProfile]:
    """Every profile of a finite class on n agents (|values|^(n(n-1)) of them)."""
    values = vclass.finite_values
    if values is None:
        raise ValidationError(f"class {vclass.value} has infinitely many profiles")
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    zero = Fraction(0)
    for combo in itertools.product(values, repeat=len(cells)):
        grid = [[zero] * n for _ in range(n)]
        for (i, j), x in zip(cells, combo):
            grid[i][j] = x
        yield ValuationProfile(n, vclass, tuple(tuple(r) for r in grid))


def sweep_strategyproof(
    mechanism: Mechanism,
    vclass: ValuationClass,
    n: int,
    order: Sequence[int] | None = None,
    kind: GameKind = GameKind.ASHG,
) -> tuple[SPVerdict, int]:
    """Exhaustive check over every truthful profile of a finite class.

    Returns the verdict (first witness found, if any) and the number of
    truthful profiles examined.
    """
    checked = 0
    profiles = 0
    for truth in all_profiles(vclass, n):
        profiles += 1
        verdict = check_strategyproof(mechanism, truth, DeviationSpace(vclass, n), order, kind)
        checked += verdict.deviations_checked
        if not verdict.holds:
            return SPVerdict(False, True, verdict.witness, checked), profiles
    return SPVerdict(True, True, None, checked), profiles


@dataclass(frozen=True)
class AcceptabilityResult:
    ok: bool
    counterexample: Instance | None = None
    welfare: Fraction | None = None


def check_acceptable(
    mechanism: Mechanism, instances: Iterable[Instance], order: Sequence[int] | None = None
) -> AcceptabilityResult:
    """Welfare must be nonnegative on every instance (measured in the instance's game)."""
    run = as_callable(mechanism, order)
    for inst in instances:
        w = social_welfare(inst.profile, inst.kind, run(inst.profile))
        if w < 0:
            return AcceptabilityResult(False, inst, w)
    return AcceptabilityResult(True)


class Unbounded(enum.Enum):
    INFINITE = "inf"
    UNDEFINED = "undef"


Ratio = Union[Fraction, Unbounded]


def ratio_of(opt: Fraction, achieved: Fraction) -> Ratio:
    if opt == 0:
        return Unbounded.UNDEFINED
    if achieved <= 0:
        return Unbounded.INFINITE
    return opt / achieved


def format_value(x: Ratio) -> str:
    if isinstance(x, Unbounded):
        return x.value
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatioReport:
    label: str
    mechanism_welfare: Fraction
    opt_welfare: Fraction
    ratio: Ratio
    partition: Partition | None = None
    optimum: Partition | None = None


def approx_ratio(
    mechanism: Mechanism,
    inst: Instance,
    order: Sequence[int] | None = None,
    kind: GameKind | None = None,
) -> RatioReport:
    kind = inst.kind if kind is None else kind
    p = as_callable(mechanism, order)(inst.profile)
    achieved = social_welfare(inst.profile, kind, p)
    opt = optimal_partition(inst.profile, kind)
    return RatioReport(inst.label, achieved, opt.welfare, ratio_of(opt.welfare, achieved),
                       p, opt.best)


@dataclass(frozen=True)
class RandomSpec:
    """Random instance family for sweeps; ``density=None`` draws one per trial."""

    vclass: ValuationClass
    n_min: int
    n_max: int
    kind: GameKind = GameKind.FHG
    density: Fraction | None = None


def random_instances(spec: RandomSpec, trials: int, seed: int) -> Iterator[Instance]:
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(spec.n_min, spec.n_max)
        density = spec.density if spec.density is not None else Fraction(rng.randint(1, 100), 100)
        yield gen_random(spec.vclass, n, density, rng.randrange(1 << 32), spec.kind)


def max_ratio(ratios: Iterable[Ratio]) -> Ratio:
    """Largest defined ratio; INFINITE beats everything, UNDEFINED entries are skipped."""
    best: Ratio = Unbounded.UNDEFINED
    for r in ratios:
        if r is Unbounded.UNDEFINED:
            continue
        if r is Unbounded.INFINITE:
            return r
        if best is Unbounded.UNDEFINED or r > best:
            best = r
    return best


@dataclass
class SweepResult:
    reports: list[RatioReport] = field(default_factory=list)

    @property
    def max_ratio(self) -> Ratio:
        return max_ratio(r.ratio for r in self.reports)


def ratio_sweep(
    mechanism: Mechanism,
    spec: RandomSpec,
    trials: int,
    seed: int,
    order: Sequence[int] | None = None,
) -> SweepResult:
    result = SweepResult()
    for inst in random_instances(spec, trials, seed):
        result.reports.append(approx_ratio(mechanism, inst, order))
    return result


@dataclass
class MatchingProofReport:
    """Quantities from the 2-approximation argument for one simple profile and
    one welfare-optimal partition."""

    opt_welfare: Fraction
    intra_weight: Fraction  # w(m'), union of per-coalition maximum matchings
    global_weight: Fraction  # w(m)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def matching_proof_checks(d: ValuationProfile, optimum: Partition) -> MatchingProofReport:
    g = build_gbar(d)
    m = max_weight_matching(g)
    report = MatchingProofReport(social_welfare(d, GameKind.FHG, optimum), Fraction(0),
                                 matching_weight(g, m))
    bad = report.violations
    for coalition in optimum:
        mh = intra_coalition_max_matching(g, coalition)
        w_mh = matching_weight(g, mh)
        report.intra_weight += w_mh
        matched = {a for e in mh for a in e}
        a_side = sorted(matched)
        b_side = [b for b in coalition if b not in matched]
        for x, y in itertools.combinations(b_side, 2):
            if g.weight(x, y):
                bad.append(f"coalition {coalition}: unmatched {x},{y} adjacent")
        if b_side:
            for i, j in mh:
                lhs = sum((g.weight(i, b) + g.weight(j, b) for b in b_side), Fraction(0))
                rhs = g.weight(i, j) * (len(b_side) + 1)
                if lhs > rhs:
                    bad.append(f"coalition {coalition}: edge bound fails on {i},{j}: {lhs} > {rhs}")
        e_hat = sum(
            (g.weight(x, y) for x, y in itertools.combinations(a_side, 2) if (x, y) not in mh),
            Fraction(0),
        )
        if e_hat > w_mh * (len(a_side) - 2):
            bad.append(f"coalition {coalition}: w(E_hat) = {e_hat} > {w_mh * (len(a_side) - 2)}")
        sw = coalition_value(d, GameKind.FHG, coalition)
        if sw > w_mh:
            bad.append(f"coalition {coalition}: welfare {sw} > matching weight {w_mh}")
    if report.opt_welfare > report.intra_weight:
        bad.append(f"OPT {report.opt_welfare} > w(m') {report.intra_weight}")
    if report.global_weight < report.intra_weight:
        bad.append(f"w(m) {report.global_weight} < w(m') {report.intra_weight}")
    return report
