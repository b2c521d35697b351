"""Reproduction scenarios behind ``hedonic-sp repro``.

Each scenario returns ``(passed, details)``; details are ``key value`` lines
with exact values.
"""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .game import GameKind, Partition, ValuationClass, social_welfare
from .instances import (
    CORPUS_DIR,
    corpus_instances,
    gen_complete_reciprocal,
    gen_duplex_star,
    gen_four_cycle,
    gen_general_gap,
    gen_nonneg_cycle,
    gen_simple_cycle7,
    serialize_instance,
)
from .matching import (
    UndirectedWeightedGraph,
    brute_force_max_matching,
    enumerate_matchings,
    matching_precedes,
    matching_weight,
    max_weight_matching,
)
from .mechanisms import MechanismId
from .oracle import enumerate_partitions, optimal_partition
from .verify import (
    DeviationSpace,
    RandomSpec,
    Unbounded,
    approx_ratio,
    check_acceptable,
    format_value,
    iter_violations,
    matching_proof_checks,
    random_instances,
    sweep_strategyproof,
)

Result = tuple[bool, list[str]]

BELL = [1, 2, 5, 15, 52, 203, 877, 4140, 21147]


def _fmt(x) -> str:
    return format_value(x)


def scenario_golden(corpus: Path = CORPUS_DIR) -> Result:
    ok = True
    lines = []
    for name, inst in corpus_instances().items():
        path = Path(corpus) / name
        good = path.is_file() and path.read_text() == serialize_instance(inst)
        ok &= good
        lines.append(f"file {name} {'ok' if good else 'MISMATCH'}")
    return ok, lines


def scenario_cycle7() -> Result:
    c7 = gen_simple_cycle7(1)
    opt = optimal_partition(c7.profile, GameKind.FHG)
    grand = social_welfare(c7.profile, GameKind.FHG, Partition.grand(7))
    rep = approx_ratio(MechanismId.MATCHING, c7)
    chord = gen_simple_cycle7(2)
    opt2 = optimal_partition(chord.profile, GameKind.FHG)
    reference = Partition(7, ((1, 2, 3), (4, 5), (0, 6)))
    reference_sw = social_welfare(chord.profile, GameKind.FHG, reference)
    ok = (
        opt.welfare == Fraction(5, 3)
        and grand == 1
        and rep.mechanism_welfare == Fraction(3, 2)
        and rep.ratio == Fraction(10, 9)
        and opt2.welfare == 2
        and reference_sw == 2
    )
    return ok, [
        f"cycle-opt {_fmt(opt.welfare)}",
        f"cycle-grand {_fmt(grand)}",
        f"cycle-matching {_fmt(rep.mechanism_welfare)}",
        f"cycle-ratio {_fmt(rep.ratio)}",
        f"chord-opt {_fmt(opt2.welfare)}",
        f"chord-reference-partition {_fmt(reference_sw)}",
    ]


def scenario_duplex_star() -> Result:
    star = gen_duplex_star(8, 2)
    rep = approx_ratio(MechanismId.DUPLEX_PAIRING, star, order=tuple(range(8)))
    ok = rep.opt_welfare == 6 and rep.mechanism_welfare == 1 and rep.ratio == 6
    return ok, [
        f"opt {_fmt(rep.opt_welfare)}",
        f"mech {_fmt(rep.mechanism_welfare)}",
        f"ratio {_fmt(rep.ratio)}",
    ]


def scenario_nonneg_cycle() -> Result:
    n, alpha, beta = 6, Fraction(1, 100), Fraction(1, 10000)
    rep = approx_ratio(MechanismId.GRAND, gen_nonneg_cycle(n, alpha, beta))
    ok = (
        rep.opt_welfare == Fraction(n, 4) * alpha
        and rep.mechanism_welfare == (3 * alpha + 3 * beta) / 6
        and Fraction(29, 10) <= rep.ratio < Fraction(n, 2)
    )
    return ok, [
        f"opt {_fmt(rep.opt_welfare)}",
        f"mech {_fmt(rep.mechanism_welfare)}",
        f"ratio {_fmt(rep.ratio)}",
    ]


def scenario_sp_exhaustive() -> Result:
    duplex, duplex_profiles = sweep_strategyproof(
        MechanismId.DUPLEX_PAIRING, ValuationClass.DUPLEX, 3, order=(0, 1, 2)
    )
    matching, simple_profiles = sweep_strategyproof(
        MechanismId.MATCHING, ValuationClass.SIMPLE, 4, kind=GameKind.FHG
    )
    lines = [
        f"duplex-pairing-n3 {duplex.status} profiles {duplex_profiles}",
        f"matching-n4 {matching.status} profiles {simple_profiles}",
    ]
    for name, verdict in (("duplex-pairing", duplex), ("matching", matching)):
        w = verdict.witness
        if w is not None:
            row = " ".join(_fmt(x) for x in w.deviation)
            truth = " / ".join(" ".join(_fmt(x) for x in r) for r in w.truth.rows)
            lines.append(f"{name}-witness agent {w.agent + 1} truth [{truth}] deviation [{row}] "
                         f"utility {_fmt(w.utility_truthful)} -> {_fmt(w.utility_deviating)}")
    return duplex.holds and matching.holds, lines


def _iterated_pairing(d, order=None):
    """Pairing rule re-applied to the leftover agents (sinks recomputed there).
    Negative control only: it is manipulable."""
    rows = d.rows
    order = tuple(range(d.n)) if order is None else tuple(order)
    position = {a: k for k, a in enumerate(order)}
    alive = set(range(d.n))
    pairs = []

    def sink(j):
        return not any(rows[j][k] == 1 and rows[k][j] != -1 for k in alive if k != j)

    while True:
        found = None
        for i in order:
            if i not in alive:
                continue
            liked = [j for j in sorted(alive) if j != i and rows[i][j] == 1]
            found = (
                next(((i, j) for j in liked if rows[j][i] == 1), None)
                or next(((i, j) for j in liked if rows[j][i] == 0 and sink(j)), None)
                or next(((i, j) for j in liked
                         if rows[j][i] == 0 and position[j] < position[i]), None)
            )
            if found:
                break
        if not found:
            return Partition.from_pairs(d.n, pairs)
        pairs.append(found)
        alive -= set(found)


def scenario_iterated_pairing() -> Result:
    cycle = gen_four_cycle().profile
    space = DeviationSpace(ValuationClass.DUPLEX, 4)
    witnesses = [w for w in iter_violations(_iterated_pairing, cycle, space) if w.agent == 0]
    # the smallest edit that pays off for agent 1
    closest = min(
        witnesses,
        key=lambda w: (sum(a != b for a, b in zip(w.deviation, cycle.rows[0])), w.deviation_index),
        default=None,
    )
    expected = (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))
    ok = closest is not None and closest.deviation == expected and closest.replay(_iterated_pairing)
    lines = [f"agent1-witnesses {len(witnesses)}"]
    if closest is not None:
        lines.append("closest-deviation " + " ".join(_fmt(x) for x in closest.deviation))
        lines.append(f"utility {_fmt(closest.utility_truthful)} -> {_fmt(closest.utility_deviating)}")
    return ok, lines


def scenario_matching_2apx(trials: int = 1000, seed: int = 2024) -> Result:
    spec = RandomSpec(ValuationClass.SIMPLE, 2, 7, GameKind.FHG)
    worst: Fraction | Unbounded = Unbounded.UNDEFINED
    over = proof_fail = undefined = 0
    for inst in random_instances(spec, trials, seed):
        rep = approx_ratio(MechanismId.MATCHING, inst)
        if rep.ratio is Unbounded.UNDEFINED:
            undefined += 1
        elif rep.ratio is Unbounded.INFINITE or rep.ratio > 2:
            over += 1
        if isinstance(rep.ratio, Fraction) and (worst is Unbounded.UNDEFINED or rep.ratio > worst):
            worst = rep.ratio
        if not matching_proof_checks(inst.profile, rep.optimum).ok:
            proof_fail += 1
    return over == 0 and proof_fail == 0, [
        f"instances {trials}",
        f"undefined {undefined}",
        f"max-ratio {_fmt(worst)}",
        f"ratio-violations {over}",
        f"proof-inequality-violations {proof_fail}",
    ]


def scenario_tightness() -> Result:
    ratios = {n: approx_ratio(MechanismId.MATCHING, gen_complete_reciprocal(n)).ratio
              for n in (4, 6, 8)}
    ok = ratios[6] == Fraction(5, 3) and ratios[4] <= ratios[6] <= ratios[8]
    return ok, [f"n{n}-ratio {_fmt(r)}" for n, r in ratios.items()]


def scenario_acceptable(seeds: int = 500) -> Result:
    ok = True
    lines = []
    corpus = list(corpus_instances().values())
    randoms = []
    for k, (vclass, kind) in enumerate((c, g) for c in ValuationClass for g in GameKind):
        randoms.extend(random_instances(RandomSpec(vclass, 1, 6, kind), 40, 1000 + k))
    for mech in MechanismId:
        pool = [i for i in corpus + randoms if mech.accepts(i.profile.vclass)]
        res = check_acceptable(mech, pool)
        ok &= res.ok
        verdict = "ok" if res.ok else (
            f"FAIL {res.counterexample.label} welfare {_fmt(res.welfare)}")
        lines.append(f"{mech.value} instances {len(pool)} {verdict}")
        if not res.ok:
            # the grand coalition has no guarantee once negative values are allowed
            nonneg = [i for i in pool if not any(x < 0 for r in i.profile.rows for x in r)]
            lines.append(f"{mech.value} nonnegative-only instances {len(nonneg)} "
                         f"{'ok' if check_acceptable(mech, nonneg).ok else 'FAIL'}")
    mismatches = 0
    rng = random.Random(99)
    for s in range(seeds):
        vclass = ValuationClass.NONNEG if s % 2 else ValuationClass.SIMPLE
        spec = RandomSpec(vclass, 1, 7, GameKind.ASHG)
        inst = next(random_instances(spec, 1, rng.randrange(1 << 30)))
        rep = approx_ratio(MechanismId.GRAND, inst)
        if rep.mechanism_welfare != rep.opt_welfare:
            mismatches += 1
    ok &= mismatches == 0
    lines.append(f"grand-vs-opt-ashg seeds {seeds} mismatches {mismatches}")
    return ok, lines


def _random_graph(rng: random.Random, n: int) -> UndirectedWeightedGraph:
    weights = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 3)]
    density = rng.choice((0.3, 0.6, 1.0))
    edges = {(i, j): rng.choice(weights)
             for i in range(n) for j in range(i + 1, n) if rng.random() < density}
    return UndirectedWeightedGraph(n, edges)


def scenario_oracle(graphs: int = 500, seed: int = 7) -> Result:
    counts = [sum(1 for _ in enumerate_partitions(n)) for n in range(1, 10)]
    rng = random.Random(seed)
    disagree = not_minimal = 0
    for _ in range(graphs):
        g = _random_graph(rng, rng.randint(1, 8))
        fast = max_weight_matching(g)
        if fast != brute_force_max_matching(g):
            disagree += 1
        if g.n <= 6:
            best = matching_weight(g, fast)
            for m in enumerate_matchings(g):
                if matching_weight(g, m) == best and matching_precedes(m, fast, g.n):
                    not_minimal += 1
                    break
    ok = counts == BELL and disagree == 0 and not_minimal == 0
    return ok, [
        "bell " + " ".join(map(str, counts)),
        f"graphs {graphs} disagreements {disagree} non-minimal {not_minimal}",
    ]


def scenario_gaps() -> Result:
    eps = Fraction(1, 100)
    gap2 = gen_general_gap(eps, 2).profile
    together = social_welfare(gap2, GameKind.ASHG, Partition(3, ((1, 2), (0,))))
    front = social_welfare(gap2, GameKind.ASHG, Partition(3, ((0, 1), (2,))))
    opt1 = optimal_partition(gen_general_gap(eps, 1).profile, GameKind.ASHG).welfare
    opt2 = optimal_partition(gap2, GameKind.ASHG).welfare
    star1 = optimal_partition(gen_duplex_star(8, 1).profile, GameKind.ASHG).welfare
    star2 = optimal_partition(gen_duplex_star(8, 2).profile, GameKind.ASHG).welfare
    ok = (together == Fraction(9, 10) - eps and front == eps and opt1 == eps
          and opt2 == Fraction(9, 10) and star1 == 1 and star2 == 6)
    return ok, [
        f"general-v2-pair23 {_fmt(together)}",
        f"general-v2-pair12 {_fmt(front)}",
        f"general-v1-opt {_fmt(opt1)}",
        f"general-v2-opt {_fmt(opt2)}",
        f"duplex-star-v1-opt {_fmt(star1)}",
        f"duplex-star-v2-opt {_fmt(star2)}",
    ]


SCENARIOS: dict[str, Callable[..., Result]] = {
    "golden": scenario_golden,
    "cycle7": scenario_cycle7,
    "duplex-star": scenario_duplex_star,
    "nonneg-cycle": scenario_nonneg_cycle,
    "sp-exhaustive": scenario_sp_exhaustive,
    "iterated-pairing": scenario_iterated_pairing,
    "matching-2apx": scenario_matching_2apx,
    "tightness": scenario_tightness,
    "acceptable": scenario_acceptable,
    "oracle": scenario_oracle,
    "gaps": scenario_gaps,
}
