"""Command-unit trees: dominance ranks, level occupancy, and cohesion.

A command tree is a single-rooted hierarchy of at most five levels.
Each occupied level becomes one event whose intensity is the level's
dominance rank and whose probability is the share of agents sitting at
that level; the normalized entropy of the reduced distribution measures
how cohesive the unit is. Low values mean a near-linear chain, high
values an overcrowded bush, and the corridor in between a cohesive team.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Sequence, Tuple

from .entropy import (
    WeightedEvents,
    normalized_entropy,
    reduce,
    zone_of,
    Zone,
)
from .errors import DomainError, ParseError

MAX_LEVELS = 5

# Field-derived default dominance ranks per hierarchy level.
DEFAULT_RANKS: Mapping[int, float] = {1: 250.0, 2: 20.0, 3: 10.0, 4: 5.0, 5: 1.0}

# Default ladder mapping the share of rejected contacts to a level:
# the most dominant agents reject almost everything.
DEFAULT_REJECTION_LADDER: Tuple[Tuple[float, int], ...] = (
    (0.8, 1),
    (0.6, 2),
    (0.4, 3),
    (0.2, 4),
    (0.0, 5),
)


class CohesionClass(Enum):
    LINEAR = "linear"
    COHESIVE = "cohesive"
    OVERCROWDED = "overcrowded"


_ZONE_TO_COHESION = {
    Zone.ORDER: CohesionClass.LINEAR,
    Zone.QUASI_EQUILIBRIUM: CohesionClass.COHESIVE,
    Zone.CHAOS: CohesionClass.OVERCROWDED,
}


class CohesionResult(NamedTuple):
    h: float
    label: CohesionClass


class TreeNode(NamedTuple):
    agent: object
    level: int
    parent: Optional[object]


@dataclass(frozen=True)
class CommandTree:
    """Immutable command hierarchy: one root, parents one level up, <= 5 levels."""

    nodes: Tuple[TreeNode, ...]

    def __init__(self, nodes: Iterable[tuple]):
        object.__setattr__(self, "nodes", tuple(TreeNode(*n) for n in nodes))
        self._validate()

    def _validate(self) -> None:
        if not self.nodes:
            raise DomainError("a command tree needs at least one agent")
        levels: Dict[object, int] = {}
        roots = []
        for node in self.nodes:
            if node.agent in levels:
                raise DomainError(f"agent {node.agent!r} appears twice")
            levels[node.agent] = node.level
            if node.parent is None:
                roots.append(node)
        if len(roots) != 1:
            raise DomainError(f"a command tree needs exactly one root, got {len(roots)}")
        if roots[0].level != 1:
            raise DomainError(f"the root must sit at level 1, got {roots[0].level}")
        max_level = 1
        for node in self.nodes:
            if node.parent is not None:
                if node.parent not in levels:
                    raise DomainError(
                        f"agent {node.agent!r} reports to unknown agent {node.parent!r}"
                    )
                if levels[node.parent] != node.level - 1:
                    raise DomainError(
                        f"agent {node.agent!r} at level {node.level} must report one "
                        f"level up, but {node.parent!r} sits at level {levels[node.parent]}"
                    )
            max_level = max(max_level, node.level)
        if max_level > MAX_LEVELS:
            raise DomainError(
                f"command trees are capped at {MAX_LEVELS} levels, got {max_level}"
            )

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def depth(self) -> int:
        return max(node.level for node in self.nodes)

    def level_counts(self) -> Dict[int, int]:
        """Number of agents per occupied level."""
        return dict(sorted(Counter(node.level for node in self.nodes).items()))


@dataclass(frozen=True)
class RankTable:
    """Dominance rank intensity per hierarchy level; must strictly decrease."""

    by_level: Mapping[int, float] = field(default_factory=lambda: dict(DEFAULT_RANKS))

    def __post_init__(self):
        object.__setattr__(self, "by_level", dict(self.by_level))
        ordered = sorted(self.by_level.items())
        if not ordered:
            raise DomainError("a rank table needs at least one level")
        previous = None
        for level, rank in ordered:
            if not rank > 0:
                raise DomainError(f"level {level}: rank must be positive, got {rank}")
            if previous is not None and rank >= previous:
                raise DomainError("ranks must strictly decrease with level")
            previous = rank

    def rank_for(self, level: int) -> float:
        try:
            return self.by_level[level]
        except KeyError:
            raise DomainError(f"no rank configured for level {level}") from None


def level_distribution(tree: CommandTree, ranks: RankTable = RankTable()) -> WeightedEvents:
    """One event per occupied level: rank intensity, occupancy probability."""
    counts = tree.level_counts()
    total = len(tree)
    return WeightedEvents(
        (level, ranks.rank_for(level), Fraction(count, total))
        for level, count in counts.items()
    )


def cohesion(tree: CommandTree, ranks: RankTable = RankTable()) -> CohesionResult:
    """Normalized entropy of the level distribution plus its cohesion class."""
    h = normalized_entropy(reduce(level_distribution(tree, ranks)))
    return CohesionResult(h=h, label=_ZONE_TO_COHESION[zone_of(h)])


def build_tree(levels: int, branching: int) -> CommandTree:
    """Complete command tree where every non-leaf has ``branching`` children.

    Agents are numbered breadth-first from 0.
    """
    if not 1 <= levels <= MAX_LEVELS:
        raise DomainError(
            f"levels must be in 1..{MAX_LEVELS} (command trees are capped at "
            f"{MAX_LEVELS} levels), got {levels}"
        )
    if branching < 1:
        raise DomainError(f"branching must be >= 1, got {branching}")
    nodes = [TreeNode(0, 1, None)]
    previous = [0]
    next_id = 1
    for level in range(2, levels + 1):
        current = []
        for parent in previous:
            for _ in range(branching):
                nodes.append(TreeNode(next_id, level, parent))
                current.append(next_id)
                next_id += 1
        previous = current
    return CommandTree(nodes)


def rank_from_rejection(
    rejection_share: float,
    ladder: Sequence[Tuple[float, int]] = DEFAULT_REJECTION_LADDER,
) -> int:
    """Level earned by the share of contacts an agent rejects.

    The ladder lists (threshold, level) pairs with strictly decreasing
    thresholds ending at 0.0; the first threshold not exceeding the
    share wins.
    """
    if not 0.0 <= rejection_share <= 1.0:
        raise DomainError(f"rejection share must be in [0, 1], got {rejection_share}")
    thresholds = [t for t, _ in ladder]
    if not ladder or any(a <= b for a, b in zip(thresholds, thresholds[1:])):
        raise DomainError("ladder thresholds must strictly decrease")
    if thresholds[-1] != 0.0:
        raise DomainError("ladder must end at threshold 0.0 to cover [0, 1]")
    for threshold, level in ladder:
        if rejection_share >= threshold:
            return level
    raise AssertionError("unreachable: ladder covers [0, 1]")


def from_edge_list(text: str) -> CommandTree:
    """Parse a tree from lines of ``child parent``; the root is a lone name.

    Blank lines and ``#`` comments are ignored. Levels follow from the
    parent chain. Errors carry the offending line number.
    """
    parents: Dict[str, Optional[str]] = {}
    root = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1:
            if root is not None:
                raise ParseError(f"line {lineno}: second root {tokens[0]!r} (already have {root!r})")
            root = tokens[0]
            name = tokens[0]
            parent = None
        elif len(tokens) == 2:
            name, parent = tokens
        else:
            raise ParseError(f"line {lineno}: expected 'child parent' or a lone root name")
        if name in parents:
            raise ParseError(f"line {lineno}: agent {name!r} defined twice")
        parents[name] = parent
    if root is None:
        raise DomainError("edge list defines no root (a line with a single name)")

    levels: Dict[str, int] = {}

    def level_of(name: str, trail: tuple) -> int:
        if name in trail:
            raise DomainError(f"agent {name!r} is part of a reporting cycle")
        if name not in levels:
            parent = parents.get(name)
            if parent is None and name != root:
                raise DomainError(f"agent {name!r} reports to no one and is not the root")
            levels[name] = 1 if parent is None else level_of(parent, trail + (name,)) + 1
        return levels[name]

    for name, parent in parents.items():
        if parent is not None and parent not in parents:
            raise DomainError(f"agent {name!r} reports to unknown agent {parent!r}")
        level_of(name, ())
    return CommandTree(
        (name, levels[name], parents[name]) for name in parents
    )
