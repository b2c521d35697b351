"""Acceptance gate: one test and one summary line per criterion, exact arithmetic."""

import random
import time
from fractions import Fraction

import conftest
from doubles import iterated_pairing

from hedonic_sp import (
    GameKind,
    MechanismId,
    Partition,
    ValuationClass,
    social_welfare,
)
from hedonic_sp.instances import (
    corpus_instances,
    gen_complete_reciprocal,
    gen_duplex_star,
    gen_four_cycle,
    gen_general_gap,
    gen_nonneg_cycle,
    gen_simple_cycle7,
)
from hedonic_sp.matching import (
    UndirectedWeightedGraph,
    brute_force_max_matching,
    enumerate_matchings,
    matching_precedes,
    matching_weight,
    max_weight_matching,
)
from hedonic_sp.mechanisms import run_mechanism
from hedonic_sp.oracle import enumerate_partitions, optimal_partition
from hedonic_sp.verify import (
    DeviationSpace,
    RandomSpec,
    Unbounded,
    approx_ratio,
    format_value as fv,
    iter_violations,
    matching_proof_checks,
    random_instances,
    all_profiles,
    sweep_strategyproof,
)


def record(label, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, detail


def test_criterion_1_cycle7_values():
    c7 = gen_simple_cycle7(1)
    opt = optimal_partition(c7.profile, GameKind.FHG).welfare
    grand = social_welfare(c7.profile, GameKind.FHG, Partition.grand(7))
    rep = approx_ratio(MechanismId.MATCHING, c7)
    ok = (opt == Fraction(5, 3) and grand == 1 and rep.mechanism_welfare == Fraction(3, 2)
          and rep.ratio == Fraction(10, 9) and rep.ratio <= 2)
    record("criterion 1", ok, f"opt {fv(opt)} grand {fv(grand)} "
           f"matching {fv(rep.mechanism_welfare)} ratio {fv(rep.ratio)}")


def test_criterion_2_cycle7_with_chord():
    c7 = gen_simple_cycle7(2)
    opt = optimal_partition(c7.profile, GameKind.FHG).welfare
    reference = Partition(7, ((1, 2, 3), (4, 5), (0, 6)))
    ref_sw = social_welfare(c7.profile, GameKind.FHG, reference)
    record("criterion 2", opt == 2 and ref_sw == opt,
           f"opt {fv(opt)} reference partition {{2,3,4}},{{5,6}},{{1,7}} welfare {fv(ref_sw)}")


def test_criterion_3_duplex_star_gap():
    rep = approx_ratio(MechanismId.DUPLEX_PAIRING, gen_duplex_star(8, 2), order=tuple(range(8)))
    ok = rep.opt_welfare == 6 and rep.mechanism_welfare == 1 and rep.ratio == 6
    record("criterion 3", ok, f"opt {fv(rep.opt_welfare)} duplex-pairing "
           f"{fv(rep.mechanism_welfare)} ratio {fv(rep.ratio)}")


def test_criterion_4_nonneg_cycle_grand():
    n, alpha, beta = 6, Fraction(1, 100), Fraction(1, 10000)
    inst = gen_nonneg_cycle(n, alpha, beta)
    rep = approx_ratio(MechanismId.GRAND, inst)
    grand_expected = inst.profile.total() / n
    ok = (rep.opt_welfare == Fraction(n, 4) * alpha
          and rep.mechanism_welfare == grand_expected == (3 * alpha + 3 * beta) / 6
          and Fraction(29, 10) <= rep.ratio < Fraction(n, 2))
    record("criterion 4", ok, f"opt {fv(rep.opt_welfare)} grand {fv(rep.mechanism_welfare)} "
           f"ratio {fv(rep.ratio)} in [29/10, 3)")


def _witness_text(w):
    truth = " / ".join(" ".join(fv(x) for x in r) for r in w.truth.rows)
    return (f"agent {w.agent + 1} truth [{truth}] lies [{' '.join(fv(x) for x in w.deviation)}] "
            f"utility {fv(w.utility_truthful)} -> {fv(w.utility_deviating)}")


def test_criterion_5_exhaustive_strategyproofness():
    start = time.perf_counter()
    duplex_profiles = 0
    duplex_witnesses = []
    for truth in all_profiles(ValuationClass.DUPLEX, 3):
        duplex_profiles += 1
        duplex_witnesses.extend(iter_violations(
            MechanismId.DUPLEX_PAIRING, truth, DeviationSpace(ValuationClass.DUPLEX, 3),
            order=(0, 1, 2)))
    matching, simple_profiles = sweep_strategyproof(
        MechanismId.MATCHING, ValuationClass.SIMPLE, 4, kind=GameKind.FHG)
    elapsed = time.perf_counter() - start
    detail = (f"duplex-pairing n=3 {len(duplex_witnesses)} violations "
              f"({duplex_profiles} profiles); "
              f"matching n=4 {matching.status} ({simple_profiles} profiles); "
              f"{elapsed:.1f}s of 60s")
    for w in duplex_witnesses:
        detail += "; duplex-pairing witness " + _witness_text(w)
    ok = (not duplex_witnesses and duplex_profiles == 729
          and matching.holds and matching.complete and simple_profiles == 4096
          and elapsed < 60)
    record("criterion 5", ok, detail)


def test_criterion_6_iterated_pairing_negative_control():
    cycle = gen_four_cycle().profile
    space = DeviationSpace(ValuationClass.DUPLEX, 4)
    found = [w for w in iter_violations(iterated_pairing, cycle, space) if w.agent == 0]
    closest = min(
        found,
        key=lambda w: (sum(a != b for a, b in zip(w.deviation, cycle.rows[0])), w.deviation_index),
        default=None,
    )
    # truth plus one extra -1 toward agent 4 (index 3)
    expected = cycle.rows[0][:3] + (Fraction(-1),)
    ok = closest is not None and closest.deviation == expected and closest.replay(iterated_pairing)
    detail = f"{len(found)} witnesses for agent 1"
    if closest is not None:
        detail += "; closest " + _witness_text(closest)
    record("criterion 6", ok, detail)


def test_criterion_7_matching_two_approximation():
    spec = RandomSpec(ValuationClass.SIMPLE, 2, 7, GameKind.FHG)
    over = proof_fail = undefined = 0
    worst = Fraction(0)
    for inst in random_instances(spec, 1000, 31337):
        rep = approx_ratio(MechanismId.MATCHING, inst)
        if rep.ratio is Unbounded.UNDEFINED:
            undefined += 1
        elif rep.ratio is Unbounded.INFINITE or rep.ratio > 2:
            over += 1
        else:
            worst = max(worst, rep.ratio)
        if not matching_proof_checks(inst.profile, rep.optimum).ok:
            proof_fail += 1
    record("criterion 7", over == 0 and proof_fail == 0,
           f"1000 instances, {undefined} undefined, max ratio {fv(worst)}, "
           f"{over} ratio violations, {proof_fail} proof-inequality violations")


def test_criterion_8_tightness():
    ratios = {n: approx_ratio(MechanismId.MATCHING, gen_complete_reciprocal(n)).ratio
              for n in (4, 6, 8)}
    ok = ratios[6] == Fraction(5, 3) and ratios[4] <= ratios[6] <= ratios[8]
    record("criterion 8", ok, " ".join(f"n={n} ratio {fv(r)}" for n, r in ratios.items()))


def test_criterion_9_acceptability():
    pool = list(corpus_instances().values())
    for k, (vclass, kind) in enumerate((c, g) for c in ValuationClass for g in GameKind):
        pool.extend(random_instances(RandomSpec(vclass, 1, 6, kind), 40, 500 + k))
    negatives = {}
    for mech in MechanismId:
        for inst in pool:
            if not mech.accepts(inst.profile.vclass):
                continue
            w = social_welfare(inst.profile, inst.kind, run_mechanism(mech, inst.profile))
            if w < 0:
                negatives.setdefault(mech.value, []).append((inst, w))
    rng = random.Random(4242)
    mismatches = 0
    for s in range(500):
        vclass = ValuationClass.NONNEG if s % 2 else ValuationClass.SIMPLE
        inst = next(random_instances(RandomSpec(vclass, 1, 7, GameKind.ASHG), 1,
                                     rng.randrange(1 << 30)))
        rep = approx_ratio(MechanismId.GRAND, inst)
        mismatches += rep.mechanism_welfare != rep.opt_welfare
    detail = f"{len(pool)} instances; grand vs opt on 500 nonneg/simple ashg: {mismatches} mismatches"
    for name, bad in negatives.items():
        classes = sorted({i.profile.vclass.value for i, _ in bad})
        first, w = bad[0]
        detail += (f"; {name} negative on {len(bad)} instances, classes {','.join(classes)} "
                   f"(e.g. {first.label} welfare {fv(w)})")
    record("criterion 9", not negatives and mismatches == 0, detail)


def _random_graph(rng, n):
    weights = [Fraction(1), Fraction(2), Fraction(7, 2), Fraction(1, 3), Fraction(4, 5)]
    keep = rng.choice((0.25, 0.5, 0.8, 1.0))
    return UndirectedWeightedGraph(n, {(i, j): rng.choice(weights) for i in range(n)
                                       for j in range(i + 1, n) if rng.random() < keep})


def test_criterion_10_oracle_self_check():
    counts = [sum(1 for _ in enumerate_partitions(n)) for n in range(1, 10)]
    rng = random.Random(10)
    disagree = not_minimal = small = 0
    for _ in range(500):
        g = _random_graph(rng, rng.randint(1, 8))
        fast = max_weight_matching(g)
        disagree += fast != brute_force_max_matching(g)
        if g.n <= 6:
            small += 1
            best = matching_weight(g, fast)
            not_minimal += any(matching_weight(g, m) == best and matching_precedes(m, fast, g.n)
                               for m in enumerate_matchings(g))
    ok = counts == [1, 2, 5, 15, 52, 203, 877, 4140, 21147] and disagree == 0 and not_minimal == 0
    record("criterion 10", ok, f"bell {' '.join(map(str, counts))}; 500 graphs, "
           f"{disagree} disagreements, {not_minimal} non-minimal of {small} checked at n<=6")


def test_lower_bound_instance_gaps():
    eps = Fraction(1, 100)
    gap1 = gen_general_gap(eps, 1).profile
    gap2 = gen_general_gap(eps, 2).profile
    pair23 = social_welfare(gap2, GameKind.ASHG, Partition(3, ((1, 2), (0,))))
    pair12 = social_welfare(gap2, GameKind.ASHG, Partition(3, ((0, 1), (2,))))
    opt1 = optimal_partition(gap1, GameKind.ASHG).welfare
    star1 = optimal_partition(gen_duplex_star(8, 1).profile, GameKind.ASHG).welfare
    star2 = optimal_partition(gen_duplex_star(8, 2).profile, GameKind.ASHG).welfare
    ok = (pair23 == Fraction(9, 10) - eps and pair12 == eps and opt1 == eps
          and star1 == 1 and star2 == 6)
    record("lower-bound instance gaps", ok,
           f"general v2 {{2,3}} {fv(pair23)} vs {{1,2}} {fv(pair12)}; general v1 opt {fv(opt1)}; "
           f"duplex star n=8 opt v1 {fv(star1)} v2 {fv(star2)}")
