"""Command-line front end.

Output is ``key value`` lines, agents are 1-indexed, numbers are exact
``p/q`` rationals. Exit codes: 0 ok, 2 usage, 3 validation, 4 guard
exceeded, 5 reproduction failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import GuardExceededError, ValidationError
from .game import GameKind, Partition, ValuationClass, social_welfare
from .instances import (
    CORPUS_DIR,
    Instance,
    gen_complete_reciprocal,
    gen_duplex_star,
    gen_four_cycle,
    gen_general_gap,
    gen_nonneg_cycle,
    gen_random,
    gen_simple_cycle7,
    load_instance,
    serialize_instance,
)
from .mechanisms import MechanismId, check_order, identity_order, run_mechanism
from .oracle import optimal_partition
from .repro import SCENARIOS, scenario_golden
from .verify import (
    DeviationMode,
    DeviationSpace,
    approx_ratio,
    check_acceptable,
    check_strategyproof,
    format_value,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_GUARD, EXIT_REPRO = 0, 2, 3, 4, 5

FAMILIES = ("general-gap", "nonneg-cycle", "duplex-star", "simple-cycle7",
            "four-cycle", "complete", "random")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.family} needs {', '.join(missing)}")


def _generate(args) -> Instance:
    kind = GameKind(args.game) if args.game else None
    extra = {"kind": kind} if kind else {}
    family = args.family
    if family == "general-gap":
        return gen_general_gap(args.eps or Fraction(1, 100), args.variant or 1, **extra)
    if family == "nonneg-cycle":
        _need(args, "n", "alpha", "beta")
        return gen_nonneg_cycle(args.n, args.alpha, args.beta, args.variant or 1, **extra)
    if family == "duplex-star":
        _need(args, "n")
        return gen_duplex_star(args.n, args.variant or 1, **extra)
    if family == "simple-cycle7":
        return gen_simple_cycle7(args.variant or 1, **extra)
    if family == "four-cycle":
        return gen_four_cycle(**extra)
    if family == "complete":
        _need(args, "n")
        return gen_complete_reciprocal(args.n, **extra)
    _need(args, "n", "vclass")
    density = args.density if args.density is not None else Fraction(1, 2)
    return gen_random(ValuationClass(args.vclass), args.n, density, args.seed, **extra)


def _order(spec: str | None, n: int):
    if spec is None or spec == "identity":
        return identity_order(n)
    try:
        agents = [int(a) - 1 for a in spec.split(",")]
    except ValueError:
        raise ValidationError(f"bad --order {spec!r}: expected 'identity' or e.g. 3,1,2") from None
    return check_order(agents, n)


def _kind(args, inst: Instance) -> GameKind:
    return GameKind(args.game) if getattr(args, "game", None) else inst.kind


def _coalition_lines(p: Partition) -> list[str]:
    return ["coalition " + " ".join(str(a + 1) for a in c) for c in p]


def cmd_gen(args, out) -> int:
    inst = _generate(args)
    text = serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
        print(f"label {inst.label}", file=out)
        print(f"agents {inst.n}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_run(args, out) -> int:
    inst = load_instance(args.instance)
    mech = MechanismId(args.mechanism)
    p = run_mechanism(mech, inst.profile, _order(args.order, inst.n))
    print(f"mechanism {mech.value}", file=out)
    for line in _coalition_lines(p):
        print(line, file=out)
    print(f"welfare {format_value(social_welfare(inst.profile, _kind(args, inst), p))}", file=out)
    return EXIT_OK


def cmd_opt(args, out) -> int:
    inst = load_instance(args.instance)
    res = optimal_partition(inst.profile, _kind(args, inst))
    for line in _coalition_lines(res.best):
        print(line, file=out)
    print(f"opt {format_value(res.welfare)}", file=out)
    print(f"examined {res.partitions_examined}", file=out)
    return EXIT_OK


def cmd_ratio(args, out) -> int:
    inst = load_instance(args.instance)
    mech = MechanismId(args.mechanism)
    rep = approx_ratio(mech, inst, _order(args.order, inst.n), _kind(args, inst))
    print(f"opt {format_value(rep.opt_welfare)}", file=out)
    print(f"mech {format_value(rep.mechanism_welfare)}", file=out)
    print(f"ratio {format_value(rep.ratio)}", file=out)
    return EXIT_OK


def cmd_verify_sp(args, out) -> int:
    inst = load_instance(args.instance)
    mech = MechanismId(args.mechanism)
    vclass = inst.profile.vclass
    mode = DeviationMode(args.mode) if args.mode else (
        DeviationMode.EXHAUSTIVE if vclass.finite_values else DeviationMode.GRID
    )
    space = DeviationSpace(vclass, inst.n, mode, count=args.count, seed=args.seed)
    verdict = check_strategyproof(mech, inst.profile, space, _order(args.order, inst.n),
                                  _kind(args, inst))
    print(f"verdict {verdict.status}", file=out)
    print(f"checked {verdict.deviations_checked}", file=out)
    w = verdict.witness
    if w is not None:
        print(f"agent {w.agent + 1}", file=out)
        print("deviation " + " ".join(format_value(x) for x in w.deviation), file=out)
        print(f"utility-truthful {format_value(w.utility_truthful)}", file=out)
        print(f"utility-deviating {format_value(w.utility_deviating)}", file=out)
    return EXIT_OK


def cmd_verify_acceptable(args, out) -> int:
    instances = [load_instance(p) for p in args.instances]
    mech = MechanismId(args.mechanism)
    res = check_acceptable(
        lambda d: run_mechanism(mech, d, _order(args.order, d.n)), instances
    )
    print(f"instances {len(instances)}", file=out)
    print(f"acceptable {'yes' if res.ok else 'no'}", file=out)
    if not res.ok:
        print(f"counterexample {res.counterexample.label}", file=out)
        print(f"welfare {format_value(res.welfare)}", file=out)
    return EXIT_OK


def cmd_repro(args, out) -> int:
    names = args.only or list(SCENARIOS)
    unknown = [n for n in names if n not in SCENARIOS]
    if unknown:
        raise UsageError(f"unknown scenario(s): {', '.join(unknown)}; "
                         f"choose from {', '.join(SCENARIOS)}")
    all_ok = True
    for name in names:
        start = time.perf_counter()
        if name == "golden":
            ok, details = scenario_golden(Path(args.corpus))
        else:
            ok, details = SCENARIOS[name]()
        all_ok &= ok
        elapsed = time.perf_counter() - start
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" {elapsed:.1f}s" if args.timing else ""),
              file=out)
        for line in details:
            print(f"  {line}", file=out)
    print(f"summary {'PASS' if all_ok else 'FAIL'}", file=out)
    return EXIT_OK if all_ok else EXIT_REPRO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hedonic-sp",
        description="Strategyproof coalition formation for hedonic games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    mech_names = [m.value for m in MechanismId]

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int)
    gen.add_argument("--variant", type=int, choices=(1, 2))
    gen.add_argument("--eps", type=_fraction)
    gen.add_argument("--alpha", type=_fraction)
    gen.add_argument("--beta", type=_fraction)
    gen.add_argument("--density", type=_fraction)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--class", dest="vclass", choices=[c.value for c in ValuationClass])
    gen.add_argument("--game", choices=[g.value for g in GameKind])
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    def instance_cmd(name, func, help_text, mechanism=True):
        p = sub.add_parser(name, help=help_text)
        if mechanism:
            p.add_argument("--mechanism", required=True, choices=mech_names)
            p.add_argument("--order", help="'identity' or a comma-separated 1-indexed permutation")
        p.add_argument("--game", choices=[g.value for g in GameKind],
                       help="override the game kind stored in the file")
        p.add_argument("instance")
        p.set_defaults(func=func)
        return p

    instance_cmd("run", cmd_run, "run a mechanism")
    instance_cmd("opt", cmd_opt, "brute-force optimum", mechanism=False)
    instance_cmd("ratio", cmd_ratio, "optimum over mechanism welfare")
    sp = instance_cmd("verify-sp", cmd_verify_sp, "search for profitable deviations")
    sp.add_argument("--mode", choices=[m.value for m in DeviationMode])
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)

    acc = sub.add_parser("verify-acceptable", help="check nonnegative welfare")
    acc.add_argument("--mechanism", required=True, choices=mech_names)
    acc.add_argument("--order")
    acc.add_argument("instances", nargs="+")
    acc.set_defaults(func=cmd_verify_acceptable)

    repro = sub.add_parser("repro", help="run the reproduction scenarios")
    repro.add_argument("--only", nargs="+", metavar="NAME")
    repro.add_argument("--corpus", default=str(CORPUS_DIR))
    repro.add_argument("--timing", action="store_true", help="append wall time per scenario")
    repro.set_defaults(func=cmd_repro)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except GuardExceededError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
