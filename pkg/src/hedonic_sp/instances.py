"""Instance generators and the ``hedonic 1`` text format.

Generators take agent numbers as drawn in the figures (1-indexed) and build
0-indexed profiles. The text format is 1-indexed as well.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import InstanceFormatError, ValidationError
from .game import GameKind, ValuationClass, ValuationProfile, validate

MAGIC = "hedonic 1"


@dataclass(frozen=True)
class Instance:
    label: str
    profile: ValuationProfile
    kind: GameKind

    @property
    def n(self) -> int:
        return self.profile.n


def _from_one_indexed_arcs(n, vclass, arcs, label, kind) -> Instance:
    """Build from 1-indexed ``{(i, j): value}``."""
    profile = ValuationProfile.from_arcs(
        n, vclass, {(i - 1, j - 1): Fraction(w) for (i, j), w in arcs.items()}
    )
    problems = validate(profile)
    if problems:
        raise ValidationError("; ".join(problems))
    return Instance(label, profile, kind)


def gen_general_gap(eps: Fraction = Fraction(1, 100), variant: int = 1,
                    kind: GameKind = GameKind.ASHG) -> Instance:
    """Three agents: 1 -> 2 (eps), 3 -> 2 (9/10), and 2 -> 3 worth -1 (variant 1)
    or -eps (variant 2)."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 10):
        raise ValidationError(f"eps must lie in (0, 1/10), got {eps}")
    if variant not in (1, 2):
        raise ValidationError(f"variant must be 1 or 2, got {variant}")
    arcs = {(1, 2): eps, (2, 3): -1 if variant == 1 else -eps, (3, 2): Fraction(9, 10)}
    return _from_one_indexed_arcs(3, ValuationClass.GENERAL, arcs,
                            f"general-gap-v{variant}-eps{eps}", kind)


def gen_nonneg_cycle(n: int, alpha: Fraction, beta: Fraction, variant: int = 1,
                     kind: GameKind = GameKind.FHG) -> Instance:
    """Directed n-cycle, odd agents value their successor at alpha, even agents at beta.

    Variant 2 raises agent n's value for agent 1 to 1 (the deviation instance).
    Requires beta < alpha < 1/n; for ratio experiments pick beta <= alpha/100
    and alpha <= 1/(100 n) so the gap is close to n/2.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if n < 4 or n % 2:
        raise ValidationError(f"n must be even and at least 4, got {n}")
    if not 0 < beta < alpha < Fraction(1, n):
        raise ValidationError(f"need 0 < beta < alpha < 1/n, got alpha={alpha}, beta={beta}, n={n}")
    if variant not in (1, 2):
        raise ValidationError(f"variant must be 1 or 2, got {variant}")
    arcs = {}
    for i in range(1, n):
        arcs[(i, i + 1)] = alpha if i % 2 else beta
    arcs[(n, 1)] = beta if variant == 1 else Fraction(1)
    return _from_one_indexed_arcs(n, ValuationClass.NONNEG, arcs,
                            f"nonneg-cycle-v{variant}-n{n}", kind)


def gen_duplex_star(n: int, variant: int = 1, kind: GameKind = GameKind.ASHG) -> Instance:
    """Agents 1..n-2 like n-1; n-1 likes n; n dislikes 1..n-2.

    In variant 1 agent n-1 also dislikes 1..n-2; in variant 2 it is indifferent to them.
    """
    if n < 4:
        raise ValidationError(f"n must be at least 4, got {n}")
    if variant not in (1, 2):
        raise ValidationError(f"variant must be 1 or 2, got {variant}")
    arcs = {}
    for i in range(1, n - 1):
        arcs[(i, n - 1)] = 1
        arcs[(n, i)] = -1
        if variant == 1:
            arcs[(n - 1, i)] = -1
    arcs[(n - 1, n)] = 1
    return _from_one_indexed_arcs(n, ValuationClass.DUPLEX, arcs,
                            f"duplex-star-v{variant}-n{n}", kind)


def gen_simple_cycle7(variant: int = 1, kind: GameKind = GameKind.FHG) -> Instance:
    """Directed 7-cycle; variant 2 adds the chord 2 -> 4."""
    if variant not in (1, 2):
        raise ValidationError(f"variant must be 1 or 2, got {variant}")
    arcs = {(i, i % 7 + 1): 1 for i in range(1, 8)}
    if variant == 2:
        arcs[(2, 4)] = 1
    return _from_one_indexed_arcs(7, ValuationClass.SIMPLE, arcs, f"simple-cycle7-v{variant}", kind)


def gen_four_cycle(kind: GameKind = GameKind.ASHG) -> Instance:
    arcs = {(1, 2): 1, (2, 3): 1, (3, 4): 1, (4, 1): 1}
    return _from_one_indexed_arcs(4, ValuationClass.DUPLEX, arcs, "four-cycle", kind)


def gen_complete_reciprocal(n: int, kind: GameKind = GameKind.FHG) -> Instance:
    """Every agent likes every other agent."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    arcs = {(i, j): 1 for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
    return _from_one_indexed_arcs(n, ValuationClass.SIMPLE, arcs, f"complete-n{n}", kind)


def _random_value(rng: random.Random, vclass: ValuationClass) -> Fraction:
    if vclass is ValuationClass.SIMPLE:
        return Fraction(1)
    if vclass is ValuationClass.DUPLEX:
        return Fraction(rng.choice((-1, 1)))
    q = rng.randint(1, 100)
    if vclass is ValuationClass.NONNEG:
        return Fraction(rng.randint(1, q), q)
    p = rng.randint(1, q) * rng.choice((-1, 1))
    return Fraction(p, q)


def gen_random(vclass: ValuationClass, n: int, density: Fraction, seed: int,
               kind: GameKind = GameKind.FHG) -> Instance:
    """Each off-diagonal entry is nonzero with probability ``density``; nonzero
    values are uniform over the class's nonzero values (denominators <= 100
    for continuous classes)."""
    density = Fraction(density)
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if not 0 <= density <= 1:
        raise ValidationError(f"density must lie in [0, 1], got {density}")
    rng = random.Random(seed)
    arcs = {}
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                arcs[(i, j)] = _random_value(rng, vclass)
    profile = ValuationProfile.from_arcs(n, vclass, arcs)
    return Instance(f"random-{vclass.value}-n{n}-d{density}-s{seed}", profile, kind)


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def serialize_instance(inst: Instance) -> str:
    lines = [
        MAGIC,
        f"agents {inst.n}",
        f"class {inst.profile.vclass.value}",
        f"game {inst.kind.value}",
        f"# label {inst.label}",
    ]
    for (i, j), x in inst.profile.arcs().items():
        lines.append(f"v {i + 1} {j + 1} {_fmt(x)}")
    return "\n".join(lines) + "\n"


def _parse_header(lines, index, key, lineno_of):
    if index >= len(lines):
        raise InstanceFormatError(f"missing '{key}' header line")
    parts = lines[index].split()
    if len(parts) != 2 or parts[0] != key:
        raise InstanceFormatError(f"expected '{key} <value>'", lineno_of[index])
    return parts[1]


def parse_instance(text: str, label: str | None = None) -> Instance:
    """Inverse of :func:`serialize_instance`. A ``# label <text>`` comment sets the
    label unless one is passed explicitly."""
    content: list[str] = []
    lineno_of: list[int] = []
    found_label = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if found_label is None and body.startswith("label "):
                found_label = body[len("label "):].strip()
            continue
        line = line.split("#", 1)[0].strip()
        if line:
            content.append(line)
            lineno_of.append(lineno)

    if not content or content[0] != MAGIC:
        raise InstanceFormatError(f"first line must be '{MAGIC}'", lineno_of[0] if content else None)
    agents = _parse_header(content, 1, "agents", lineno_of)
    try:
        n = int(agents)
    except ValueError:
        raise InstanceFormatError("agent count must be an integer", lineno_of[1]) from None
    if n < 1:
        raise InstanceFormatError("agent count must be positive", lineno_of[1])
    cls_name = _parse_header(content, 2, "class", lineno_of)
    try:
        vclass = ValuationClass(cls_name)
    except ValueError:
        raise InstanceFormatError(f"unknown class '{cls_name}'", lineno_of[2]) from None
    game_name = _parse_header(content, 3, "game", lineno_of)
    try:
        kind = GameKind(game_name)
    except ValueError:
        raise InstanceFormatError(f"unknown game '{game_name}'", lineno_of[3]) from None

    arcs: dict[tuple[int, int], Fraction] = {}
    for line, lineno in zip(content[4:], lineno_of[4:]):
        parts = line.split()
        if len(parts) != 4 or parts[0] != "v":
            raise InstanceFormatError("expected 'v <i> <j> <p>/<q>'", lineno)
        try:
            i, j = int(parts[1]), int(parts[2])
            value = Fraction(parts[3])
        except (ValueError, ZeroDivisionError):
            raise InstanceFormatError(f"bad number in '{line}'", lineno) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise InstanceFormatError(f"agent id out of range 1..{n}", lineno)
        if i == j:
            raise InstanceFormatError(f"nonzero diagonal entry v {i} {i}", lineno)
        if value == 0:
            raise InstanceFormatError("zero entries must be omitted", lineno)
        if not vclass.admits(value):
            raise InstanceFormatError(f"value {value} not admissible for class {vclass.value}", lineno)
        if (i - 1, j - 1) in arcs:
            raise InstanceFormatError(f"duplicate entry for ({i}, {j})", lineno)
        arcs[(i - 1, j - 1)] = value

    profile = ValuationProfile.from_arcs(n, vclass, arcs)
    return Instance(label or found_label or "unnamed", profile, kind)


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(serialize_instance(inst))


CORPUS_DIR = Path(__file__).parent / "corpus"


def corpus_instances() -> dict[str, Instance]:
    """Golden file name -> freshly generated instance it must equal."""
    return {
        "fig1a.hg": gen_general_gap(Fraction(1, 100), 1),
        "fig1b.hg": gen_general_gap(Fraction(1, 100), 2),
        "fig2a.hg": gen_nonneg_cycle(4, Fraction(1, 100), Fraction(1, 10000), 1),
        "fig2b.hg": gen_nonneg_cycle(4, Fraction(1, 100), Fraction(1, 10000), 2),
        "fig3a-n8.hg": gen_duplex_star(8, 1),
        "fig3b-n8.hg": gen_duplex_star(8, 2),
        "fig4a.hg": gen_simple_cycle7(1),
        "fig4b.hg": gen_simple_cycle7(2),
        "four-cycle.hg": gen_four_cycle(),
    }
