"""The 27-cell state cube over the control, resource and function axes.

Each interaction axis of a group (agent-agent control, team-environment
resource, agent-team function) gets its own normalized entropy value,
classified into a zone. The three zones jointly name one of 27 cells,
and adaptation is modelled as movement between cells that differ by one
zone step on one axis, so the set of possible transitions is small and
enumerable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from itertools import product
from typing import Dict, FrozenSet, List, Tuple

from .entropy import WeightedEvents, Zone, normalized_entropy, reduce, zone_of
from .errors import DomainError


class Axis(Enum):
    CONTROL = "control"
    RESOURCE = "resource"
    FUNCTION = "function"


# Zones ordered along each cube axis.
_ZONE_LEVEL = {Zone.ORDER: 0, Zone.QUASI_EQUILIBRIUM: 1, Zone.CHAOS: 2}
_LEVEL_ZONE = {v: k for k, v in _ZONE_LEVEL.items()}


@dataclass(frozen=True)
class AxisSample:
    """Observed events for one axis plus its calibration coefficient.

    The coefficient scales every intensity before reduction. It cancels
    out of the normalized entropy (scale invariance) but stays in the
    interface so axis calibrations remain explicit.
    """

    axis: Axis
    events: WeightedEvents
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.coefficient > 0:
            raise DomainError(f"axis coefficient must be positive, got {self.coefficient}")


@dataclass(frozen=True)
class CubeState:
    """One cell of the cube: a zone per axis."""

    control: Zone
    resource: Zone
    function: Zone

    @property
    def index(self) -> int:
        """Stable cell number in 1..27."""
        return (
            9 * _ZONE_LEVEL[self.control]
            + 3 * _ZONE_LEVEL[self.resource]
            + _ZONE_LEVEL[self.function]
            + 1
        )

    @classmethod
    def from_index(cls, index: int) -> "CubeState":
        if not 1 <= index <= 27:
            raise DomainError(f"cube index must be in 1..27, got {index}")
        rest, function = divmod(index - 1, 3)
        control, resource = divmod(rest, 3)
        return cls(_LEVEL_ZONE[control], _LEVEL_ZONE[resource], _LEVEL_ZONE[function])

    def as_record(self) -> dict:
        return {
            "control": self.control.value,
            "resource": self.resource.value,
            "function": self.function.value,
            "index": self.index,
        }


def all_states() -> Tuple[CubeState, ...]:
    """The 27 cells in index order."""
    return tuple(
        CubeState(c, r, f)
        for c, r, f in product(
            (Zone.ORDER, Zone.QUASI_EQUILIBRIUM, Zone.CHAOS), repeat=3
        )
    )


def axis_h(sample: AxisSample) -> float:
    """Normalized entropy of one axis after coefficient scaling."""
    scaled = WeightedEvents(
        (ev.label, ev.intensity * sample.coefficient, ev.probability)
        for ev in sample.events.events
    )
    return normalized_entropy(reduce(scaled))


def classify_cube(control_h: float, resource_h: float, function_h: float) -> CubeState:
    """Cell for three per-axis normalized entropy values."""
    return CubeState(zone_of(control_h), zone_of(resource_h), zone_of(function_h))


def adjacent_states(state: CubeState) -> FrozenSet[CubeState]:
    """Cells reachable by one zone step on exactly one axis."""
    neighbours = []
    for field in ("control", "resource", "function"):
        level = _ZONE_LEVEL[getattr(state, field)]
        for step in (-1, 1):
            if 0 <= level + step <= 2:
                neighbours.append(replace(state, **{field: _LEVEL_ZONE[level + step]}))
    return frozenset(neighbours)


# Internal index-based adjacency for path search, sorted for determinism.
_NEIGHBOUR_IDS: Dict[int, Tuple[int, ...]] = {
    s.index: tuple(sorted(n.index for n in adjacent_states(s))) for s in all_states()
}
_AXIS_LEVELS: Dict[int, Tuple[int, int, int]] = {
    s.index: (_ZONE_LEVEL[s.control], _ZONE_LEVEL[s.resource], _ZONE_LEVEL[s.function])
    for s in all_states()
}


def _lattice_distance(a: int, b: int) -> int:
    return sum(abs(x - y) for x, y in zip(_AXIS_LEVELS[a], _AXIS_LEVELS[b]))


def adaptation_paths(
    start: CubeState, goal: CubeState, max_length: int
) -> List[Tuple[CubeState, ...]]:
    """All simple adaptation paths from start to goal, shortest first.

    A path is a sequence of cells joined by single-axis zone steps with
    no repeated cell; its length is its number of steps. Returns every
    path of length <= max_length, ordered by length and then
    lexicographically by cell index. Start equal to goal yields the
    single zero-length path.
    """
    if max_length < 0:
        raise DomainError(f"maximum path length must be >= 0, got {max_length}")
    src, dst = start.index, goal.index
    found: List[Tuple[int, ...]] = []
    queue = deque([(src, 1 << src, (src,))])
    while queue:
        last, visited, path = queue.popleft()
        if last == dst:
            found.append(path)
            continue  # extending past the goal would revisit it
        steps_left = max_length - (len(path) - 1)
        for nb in _NEIGHBOUR_IDS[last]:
            # prune branches that cannot reach the goal in the budget
            if visited >> nb & 1 or _lattice_distance(nb, dst) > steps_left - 1:
                continue
            queue.append((nb, visited | 1 << nb, path + (nb,)))
    return [tuple(CubeState.from_index(i) for i in path) for path in found]
