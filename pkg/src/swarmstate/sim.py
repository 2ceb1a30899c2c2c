"""Deterministic discrete-time simulator of an energy-harvesting swarm.

Robots harvest energy with one of three functions (light, wind,
chemical). Each tick a robot generates its function's current yield,
pays an upkeep, and earns a rank equal to the square of its positive
effective energy (failing robots keep a tiny floor rank). Robots whose
reserves run low while losing energy send an SOS and copy the function
of the highest-ranked advertiser; robots with fat reserves advertise.

The swarm-level state is the normalized entropy of the three per-function
rank totals, always measured against the fixed three-function maximum.
An optional controller nudges the swarm back into the quasi-equilibrium
corridor: below it, the crowd function sheds its weakest robots to the
emptiest functions; above it, the swarm is flagged as disintegrated and
robots drop to solitary work for a tick.

Runs are pure functions of (config, environment profile): the only
randomness is the seeded redraw of per-function yields.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .entropy import H_HIGH, H_LOW, Zone, normalized_entropy_weights, zone_of
from .errors import ConfigError, DomainError


class Harvest(Enum):
    LIGHT = "light"
    WIND = "wind"
    CHEMICAL = "chemical"


FUNCTIONS: Tuple[Harvest, ...] = (Harvest.LIGHT, Harvest.WIND, Harvest.CHEMICAL)


class Mode(Enum):
    NORMAL = "normal"
    SOS = "sos"
    ADVERTISING = "advertising"
    SOLITARY = "solitary"


class Regime(Enum):
    STABLE = "stable"
    MODERATE = "moderate"
    VOLATILE = "volatile"


# Default (change interval, perturbation) per volatility regime.
REGIME_DEFAULTS: Dict[Regime, Tuple[int, float]] = {
    Regime.STABLE: (1, 0.0),
    Regime.MODERATE: (50, 0.75),
    Regime.VOLATILE: (5, 1.5),
}


@dataclass
class Robot:
    id: int
    function: Harvest
    energy_store: float
    generated: float = 0.0
    spent: float = 0.0
    effective: float = 0.0
    rank: float = 0.0
    mode: Mode = Mode.NORMAL


@dataclass(frozen=True)
class EnvironmentProfile:
    """Per-function yields plus the volatility regime that redraws them."""

    base_yields: Dict[Harvest, float]
    regime: Regime = Regime.STABLE
    change_interval: Optional[int] = None
    perturbation: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        interval, magnitude = REGIME_DEFAULTS[self.regime]
        if self.change_interval is None:
            object.__setattr__(self, "change_interval", interval)
        if self.perturbation is None:
            object.__setattr__(self, "perturbation", magnitude)
        for fn in FUNCTIONS:
            if fn not in self.base_yields:
                raise ConfigError(f"environment.base_yields missing {fn.value!r}")
            if self.base_yields[fn] < 0:
                raise ConfigError(
                    f"environment.base_yields.{fn.value} must be >= 0, "
                    f"got {self.base_yields[fn]}"
                )
        if self.change_interval < 1:
            raise ConfigError(
                f"environment.change_interval must be >= 1, got {self.change_interval}"
            )
        if self.perturbation < 0:
            raise ConfigError(
                f"environment.perturbation must be >= 0, got {self.perturbation}"
            )


class Environment:
    """Seeded sampler of piecewise-constant yields for one run."""

    def __init__(self, profile: EnvironmentProfile):
        self.profile = profile
        self._rng = random.Random(profile.seed)
        self._epochs: List[Dict[Harvest, float]] = [dict(profile.base_yields)]

    def yields(self, tick: int) -> Dict[Harvest, float]:
        if self.profile.regime is Regime.STABLE:
            return self._epochs[0]
        epoch = tick // self.profile.change_interval
        while len(self._epochs) <= epoch:
            self._epochs.append(
                {
                    fn: max(
                        0.0,
                        self.profile.base_yields[fn]
                        + self._rng.uniform(-self.profile.perturbation, self.profile.perturbation),
                    )
                    for fn in FUNCTIONS
                }
            )
        return self._epochs[epoch]


@dataclass(frozen=True)
class SimConfig:
    n_robots: int = 30
    ticks: int = 500
    initial_store: float = 50.0
    spend_per_tick: float = 2.0
    sos_threshold: float = 20.0
    advertise_threshold: float = 60.0
    rank_floor: float = 1e-6
    controller_enabled: bool = False
    warm_up: int = 10
    corridor: Tuple[float, float] = (H_LOW, H_HIGH)

    def __post_init__(self):
        if self.n_robots < 3:
            raise ConfigError(f"robots must be >= 3, got {self.n_robots}")
        if self.ticks < 0:
            raise ConfigError(f"ticks must be >= 0, got {self.ticks}")
        for name in ("initial_store", "spend_per_tick"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("sos_threshold", "advertise_threshold", "rank_floor"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.warm_up < 0:
            raise ConfigError(f"warm_up must be >= 0, got {self.warm_up}")
        low, high = self.corridor
        if not 0.0 < low < high < 1.0:
            raise ConfigError(f"corridor must satisfy 0 < low < high < 1, got {self.corridor}")


@dataclass
class SwarmState:
    config: SimConfig
    robots: List[Robot]
    tick: int = 0


class Switch(NamedTuple):
    robot_id: int
    source: Harvest
    target: Harvest


class StepEvents(NamedTuple):
    switches: Tuple[Switch, ...]
    sos_count: int
    advertiser_count: int


class ControlAction(NamedTuple):
    kind: str  # "reassign" or "disintegration"
    robot_id: Optional[int] = None
    source: Optional[Harvest] = None
    target: Optional[Harvest] = None


class SwarmSnapshot(NamedTuple):
    h: float
    counts: Tuple[int, int, int]
    mean_ranks: Tuple[float, float, float]


@dataclass(frozen=True)
class TickMetrics:
    tick: int
    h: float
    zone: Zone
    counts: Tuple[int, int, int]
    mean_ranks: Tuple[float, float, float]
    sos_count: int
    switches: int
    controller_actions: int
    disintegration: bool


@dataclass(frozen=True)
class RunSummary:
    ticks: int
    n_robots: int
    controller_enabled: bool
    warm_up: int
    final_h: float
    final_zone: Zone
    corridor_fraction: float
    disintegration_events: int
    total_switches: int
    total_controller_actions: int

    def as_record(self) -> dict:
        record = {
            "ticks": self.ticks,
            "robots": self.n_robots,
            "controller_enabled": self.controller_enabled,
            "warm_up": self.warm_up,
            "final_h": self.final_h,
            "final_zone": self.final_zone.value,
            "corridor_fraction": self.corridor_fraction,
            "disintegration_events": self.disintegration_events,
            "total_switches": self.total_switches,
            "total_controller_actions": self.total_controller_actions,
        }
        return record


@dataclass(frozen=True)
class RunResult:
    metrics: Tuple[TickMetrics, ...]
    summary: RunSummary


def init_swarm(config: SimConfig) -> SwarmState:
    """Fresh swarm: functions dealt round-robin, equal stores, equal ranks."""
    robots = [
        Robot(
            id=i,
            function=FUNCTIONS[i % len(FUNCTIONS)],
            energy_store=config.initial_store,
            rank=config.rank_floor,
        )
        for i in range(config.n_robots)
    ]
    return SwarmState(config=config, robots=robots)


def step(state: SwarmState, env: Environment, tick: int) -> StepEvents:
    """Advance one tick: harvest, re-rank, signal, then switch atomically."""
    cfg = state.config
    yields = env.yields(tick)
    suppressed = {r.id for r in state.robots if r.mode is Mode.SOLITARY}

    for robot in state.robots:
        robot.generated = yields[robot.function]
        robot.spent = cfg.spend_per_tick
        robot.effective = robot.generated - robot.spent
        robot.energy_store = max(0.0, robot.energy_store + robot.effective)
        robot.rank = robot.effective**2 if robot.effective > 0 else cfg.rank_floor

    for robot in state.robots:
        if robot.id in suppressed:
            robot.mode = Mode.NORMAL  # sat out this tick; back in next tick
        elif robot.effective < 0 and robot.energy_store < cfg.sos_threshold:
            robot.mode = Mode.SOS
        elif robot.energy_store > cfg.advertise_threshold:
            robot.mode = Mode.ADVERTISING
        else:
            robot.mode = Mode.NORMAL

    advertisers = [r for r in state.robots if r.mode is Mode.ADVERTISING]
    best = max(advertisers, key=lambda r: (r.rank, -r.id), default=None)
    switches = []
    if best is not None:
        for robot in state.robots:
            if robot.mode is Mode.SOS and robot.function is not best.function:
                switches.append(Switch(robot.id, robot.function, best.function))

    by_id = {r.id: r for r in state.robots}
    for sw in switches:  # applied only after every decision is made
        by_id[sw.robot_id].function = sw.target

    state.tick = tick
    return StepEvents(
        switches=tuple(switches),
        sos_count=sum(1 for r in state.robots if r.mode is Mode.SOS),
        advertiser_count=len(advertisers),
    )


def swarm_h(state: SwarmState) -> SwarmSnapshot:
    """Normalized entropy of per-function rank totals, out of the fixed 3.

    An empty function contributes zero weight; its mean rank is reported
    as 0. All robots on one function therefore gives h = 0, and even
    occupancy with equal ranks gives h = 1.
    """
    totals = {fn: 0.0 for fn in FUNCTIONS}
    counts = {fn: 0 for fn in FUNCTIONS}
    for robot in state.robots:
        totals[robot.function] += robot.rank
        counts[robot.function] += 1
    h = normalized_entropy_weights([totals[fn] for fn in FUNCTIONS], n=len(FUNCTIONS))
    return SwarmSnapshot(
        h=h,
        counts=tuple(counts[fn] for fn in FUNCTIONS),
        mean_ranks=tuple(
            totals[fn] / counts[fn] if counts[fn] else 0.0 for fn in FUNCTIONS
        ),
    )


def control_policy(state: SwarmState, h: float) -> List[ControlAction]:
    """Corridor-keeping actions for the measured swarm entropy.

    Below the corridor: shed robots from the most-populated function
    (heaviest rank total on count ties), lowest rank first, onto the
    less-populated functions until the projection of h, with every
    robot keeping its current rank, re-enters the corridor. Each move
    prefers a destination that lands the projection inside the corridor
    and otherwise climbs as far as possible without overshooting it.
    Above the corridor: declare disintegration. Inside: nothing.
    """
    low, high = state.config.corridor
    if h > high:
        return [ControlAction(kind="disintegration")]
    if h >= low:
        return []

    counts = {fn: 0 for fn in FUNCTIONS}
    totals = {fn: 0.0 for fn in FUNCTIONS}
    for robot in state.robots:
        counts[robot.function] += 1
        totals[robot.function] += robot.rank

    position = {fn: i for i, fn in enumerate(FUNCTIONS)}
    source = max(FUNCTIONS, key=lambda fn: (counts[fn], totals[fn], -position[fn]))
    movers = sorted(
        (r for r in state.robots if r.function is source), key=lambda r: (r.rank, r.id)
    )

    def projection() -> float:
        # totals are sums of positive ranks; clamp away subtraction dust
        return normalized_entropy_weights(
            [max(0.0, totals[fn]) for fn in FUNCTIONS], n=len(FUNCTIONS)
        )

    actions: List[ControlAction] = []
    for mover in movers:
        if projection() >= low:
            break
        choices = []
        for dest in FUNCTIONS:
            if dest is source:
                continue
            totals[source] -= mover.rank
            totals[dest] += mover.rank
            choices.append((projection(), dest))
            totals[source] += mover.rank
            totals[dest] -= mover.rank
        inside = [c for c in choices if low <= c[0] <= high]
        if inside:
            _, dest = min(inside, key=lambda c: (counts[c[1]], position[c[1]]))
        else:
            below = [c for c in choices if c[0] < low]
            if not below:
                break  # any further move would overshoot the corridor
            _, dest = max(below, key=lambda c: (c[0], -counts[c[1]], -position[c[1]]))
        totals[source] -= mover.rank
        totals[dest] += mover.rank
        counts[source] -= 1
        counts[dest] += 1
        actions.append(
            ControlAction(kind="reassign", robot_id=mover.id, source=source, target=dest)
        )
    return actions


def apply_control(state: SwarmState, actions: Sequence[ControlAction]) -> None:
    by_id = {r.id: r for r in state.robots}
    for action in actions:
        if action.kind == "reassign":
            by_id[action.robot_id].function = action.target
        elif action.kind == "disintegration":
            for robot in state.robots:
                robot.mode = Mode.SOLITARY
        else:
            raise DomainError(f"unknown control action {action.kind!r}")


def _metrics_row(
    tick: int,
    snap: SwarmSnapshot,
    warm_up: int,
    sos_count: int = 0,
    switches: int = 0,
    controller_actions: int = 0,
) -> TickMetrics:
    zone = zone_of(snap.h)
    return TickMetrics(
        tick=tick,
        h=snap.h,
        zone=zone,
        counts=snap.counts,
        mean_ranks=snap.mean_ranks,
        sos_count=sos_count,
        switches=switches,
        controller_actions=controller_actions,
        disintegration=(tick >= warm_up and zone is Zone.CHAOS),
    )


def run(config: SimConfig, profile: EnvironmentProfile) -> RunResult:
    """Full deterministic run: init, tick loop, per-tick metrics, summary."""
    state = init_swarm(config)
    env = Environment(profile)
    rows = [_metrics_row(0, swarm_h(state), config.warm_up)]
    for tick in range(1, config.ticks + 1):
        events = step(state, env, tick)
        snap = swarm_h(state)
        actions: List[ControlAction] = []
        if config.controller_enabled and tick >= config.warm_up:
            actions = control_policy(state, snap.h)
            if actions:
                apply_control(state, actions)
                if any(a.kind == "reassign" for a in actions):
                    snap = swarm_h(state)
        rows.append(
            _metrics_row(
                tick,
                snap,
                config.warm_up,
                sos_count=events.sos_count,
                switches=len(events.switches),
                controller_actions=len(actions),
            )
        )
    return RunResult(metrics=tuple(rows), summary=_summarize(rows, config))


def _summarize(rows: Sequence[TickMetrics], config: SimConfig) -> RunSummary:
    low, high = config.corridor
    scored = [row for row in rows if row.tick >= config.warm_up]
    in_corridor = sum(1 for row in scored if low <= row.h <= high)
    last = rows[-1]
    return RunSummary(
        ticks=config.ticks,
        n_robots=config.n_robots,
        controller_enabled=config.controller_enabled,
        warm_up=config.warm_up,
        final_h=last.h,
        final_zone=last.zone,
        corridor_fraction=in_corridor / len(scored) if scored else 0.0,
        disintegration_events=sum(1 for row in scored if row.disintegration),
        total_switches=sum(row.switches for row in rows),
        total_controller_actions=sum(row.controller_actions for row in rows),
    )


# ---------------------------------------------------------------------------
# Scenario files and metric artifacts
# ---------------------------------------------------------------------------

BUNDLED_SCENARIOS = ("stable", "moderate", "volatile")

METRICS_COLUMNS = [
    "tick",
    "h",
    "zone",
    "count_light",
    "count_wind",
    "count_chemical",
    "mean_rank_light",
    "mean_rank_wind",
    "mean_rank_chemical",
    "sos_count",
    "switches",
    "controller_actions",
    "disintegration",
]


class Scenario(NamedTuple):
    name: str
    config: SimConfig
    environment: EnvironmentProfile


def _require(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}: missing field {key!r}")
    return _typed(mapping[key], key, kind, where)


def _typed(value, key: str, kind, where: str):
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _optional(mapping: dict, key: str, kind, where: str, default):
    if key not in mapping:
        return default
    return _typed(mapping[key], key, kind, where)


def scenario_from_mapping(data: dict, name: str = "scenario") -> Scenario:
    """Build a scenario from parsed JSON, with field-level diagnostics."""
    known = {
        "name",
        "robots",
        "ticks",
        "seed",
        "initial_store",
        "spend_per_tick",
        "sos_threshold",
        "advertise_threshold",
        "rank_floor",
        "controller",
        "environment",
    }
    for key in data:
        if key not in known:
            raise ConfigError(f"scenario: unknown field {key!r}")
    name = data.get("name", name)
    controller = data.get("controller", {})
    if not isinstance(controller, dict):
        raise ConfigError("scenario: field 'controller' must be an object")
    for key in controller:
        if key not in {"enabled", "warm_up"}:
            raise ConfigError(f"scenario.controller: unknown field {key!r}")
    environment = _require(data, "environment", dict, "scenario")
    for key in environment:
        if key not in {"regime", "base_yields", "change_interval", "perturbation"}:
            raise ConfigError(f"scenario.environment: unknown field {key!r}")

    config = SimConfig(
        n_robots=_require(data, "robots", int, "scenario"),
        ticks=_require(data, "ticks", int, "scenario"),
        initial_store=_require(data, "initial_store", float, "scenario"),
        spend_per_tick=_require(data, "spend_per_tick", float, "scenario"),
        sos_threshold=_require(data, "sos_threshold", float, "scenario"),
        advertise_threshold=_require(data, "advertise_threshold", float, "scenario"),
        rank_floor=_optional(data, "rank_floor", float, "scenario", 1e-6),
        controller_enabled=_optional(
            controller, "enabled", bool, "scenario.controller", False
        ),
        warm_up=_optional(controller, "warm_up", int, "scenario.controller", 10),
    )

    try:
        regime = Regime(_require(environment, "regime", str, "scenario.environment"))
    except ValueError:
        raise ConfigError(
            f"scenario.environment: regime must be one of "
            f"{[r.value for r in Regime]}, got {environment['regime']!r}"
        ) from None
    raw_yields = _require(environment, "base_yields", dict, "scenario.environment")
    yields = {}
    for fn in FUNCTIONS:
        yields[fn] = _require(raw_yields, fn.value, float, "scenario.environment.base_yields")
    for key in raw_yields:
        if key not in {fn.value for fn in FUNCTIONS}:
            raise ConfigError(f"scenario.environment.base_yields: unknown function {key!r}")
    profile = EnvironmentProfile(
        base_yields=yields,
        regime=regime,
        change_interval=_optional(
            environment, "change_interval", int, "scenario.environment", None
        ),
        perturbation=_optional(
            environment, "perturbation", float, "scenario.environment", None
        ),
        seed=_optional(data, "seed", int, "scenario", 0),
    )
    return Scenario(name=name, config=config, environment=profile)


def load_scenario(source) -> Scenario:
    """Load a scenario from a JSON file path or a bundled scenario name."""
    from importlib import resources

    path = Path(source)
    if str(source) in BUNDLED_SCENARIOS and not path.exists():
        text = (
            resources.files("swarmstate").joinpath(f"scenarios/{source}.json").read_text()
        )
        name = str(source)
    else:
        text = path.read_text()
        name = path.stem
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        from .errors import ParseError

        raise ParseError(f"{source}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: scenario file must hold a JSON object")
    return scenario_from_mapping(data, name=name)


def with_seed(scenario: Scenario, seed: int) -> Scenario:
    """Same scenario with the environment seed replaced."""
    return scenario._replace(environment=replace(scenario.environment, seed=seed))


def write_metrics_csv(rows: Sequence[TickMetrics], path) -> None:
    """One row per tick in the documented column order."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(METRICS_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row.tick,
                    repr(row.h),
                    row.zone.value,
                    *row.counts,
                    *[repr(v) for v in row.mean_ranks],
                    row.sos_count,
                    row.switches,
                    row.controller_actions,
                    int(row.disintegration),
                ]
            )


def write_h_series_csv(rows: Sequence[TickMetrics], path) -> None:
    """Plot-ready tick/h pairs."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tick", "h"])
        for row in rows:
            writer.writerow([row.tick, repr(row.h)])
