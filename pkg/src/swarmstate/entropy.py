"""Weighted finite event schemes and normalized entropy.

A weighted event couples an intensity (how strong or costly an
interaction is) with a probability (how often it occurs). Dividing each
intensity-probability product by the expectation turns the pairs into an
ordinary probability distribution, the "action share" of each event, so
Shannon entropy applies to systems whose behaviour mixes structure and
chance.

Normalizing the entropy by its maximum log(n) gives a size-independent
disorder measure h in [0, 1]. The golden-ratio cut points split that
axis into three zones: order (h < 0.382), a quasi-equilibrium corridor,
and chaos (h > 0.618).

All functions are pure and all value types are immutable; exact numeric
types such as ``fractions.Fraction`` pass through the reduction
arithmetic unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence, Tuple

from .errors import DomainError

# Probability ingestion tolerance; reduced distributions are renormalized
# once, after which they must sum to 1 within Q_SUM_TOLERANCE.
P_SUM_TOLERANCE = 1e-9
Q_SUM_TOLERANCE = 1e-12

# Roots of h^2 - 3h + 1 = 0 and h^2 + h - 1 = 0 in [0, 1]: the points
# where the disorder/order ratio curves cross the linear order and
# disorder measures. Stored as closed forms; round only for display.
H_LOW = (3.0 - math.sqrt(5.0)) / 2.0
H_HIGH = (math.sqrt(5.0) - 1.0) / 2.0


class Zone(Enum):
    """Classification of the normalized entropy axis."""

    ORDER = "order"
    QUASI_EQUILIBRIUM = "quasi-equilibrium"
    CHAOS = "chaos"


class Event(NamedTuple):
    label: object
    intensity: float
    probability: float


@dataclass(frozen=True)
class WeightedEvents:
    """A complete scheme of labelled events with intensities and probabilities.

    Each event carries a positive intensity and a probability in (0, 1];
    probabilities must sum to 1 within ``P_SUM_TOLERANCE``. Labels are
    opaque but must be unique.
    """

    events: Tuple[Event, ...]

    def __init__(self, events: Iterable[tuple]):
        object.__setattr__(self, "events", tuple(Event(*e) for e in events))
        self._validate()

    def _validate(self) -> None:
        if not self.events:
            raise DomainError("a weighted event scheme needs at least one event")
        seen = set()
        for ev in self.events:
            if ev.label in seen:
                raise DomainError(f"duplicate event label {ev.label!r}")
            seen.add(ev.label)
            if not ev.intensity > 0:
                raise DomainError(
                    f"event {ev.label!r}: intensity must be positive, got {ev.intensity}"
                )
            if not 0 < ev.probability <= 1:
                raise DomainError(
                    f"event {ev.label!r}: probability must be in (0, 1], got {ev.probability}"
                )
        total = sum(ev.probability for ev in self.events)
        if abs(total - 1) > P_SUM_TOLERANCE:
            raise DomainError(f"probabilities must sum to 1, got {float(total)!r}")

    @classmethod
    def uniform(cls, intensities: Sequence[float], labels: Sequence[object] | None = None):
        """Scheme with equal probabilities 1/n for the given intensities."""
        from fractions import Fraction

        if labels is None:
            labels = range(len(intensities))
        if len(intensities) == 0:
            raise DomainError("a weighted event scheme needs at least one event")
        share = Fraction(1, len(intensities))
        return cls(zip(labels, intensities, [share] * len(intensities)))

    def __len__(self) -> int:
        return len(self.events)

    @property
    def labels(self) -> tuple:
        return tuple(ev.label for ev in self.events)

    @property
    def intensities(self) -> tuple:
        return tuple(ev.intensity for ev in self.events)

    @property
    def probabilities(self) -> tuple:
        return tuple(ev.probability for ev in self.events)


@dataclass(frozen=True)
class NominalDistribution:
    """Action shares q_k of a weighted scheme: a plain probability distribution.

    q_k = intensity_k * probability_k / expectation. All shares are
    strictly positive and sum to 1 within ``Q_SUM_TOLERANCE``.
    """

    labels: tuple
    q: tuple
    n: int
    expectation: float

    def __post_init__(self):
        if self.n != len(self.q) or self.n < 1:
            raise DomainError(f"event count {self.n} does not match {len(self.q)} shares")
        for label, share in zip(self.labels, self.q):
            if not share > 0:
                raise DomainError(f"event {label!r}: share must be positive, got {share}")
        if abs(sum(self.q) - 1) > Q_SUM_TOLERANCE:
            raise DomainError(f"shares must sum to 1, got {float(sum(self.q))!r}")


class SurplusInformation(NamedTuple):
    """Predictability left in a system: absolute (base-dependent) and relative."""

    absolute: float
    relative: float


class OrderChaosSplit(NamedTuple):
    """Decomposition of h into disorder/order measures and their ratios."""

    disorder: float
    order: float
    disorder_per_order: float
    order_per_disorder: float


@dataclass(frozen=True)
class ZoneReport:
    """Zone classification of h together with its order/chaos decomposition."""

    h: float
    zone: Zone
    disorder: float
    order: float
    disorder_per_order: float
    order_per_disorder: float
    surplus_information: float


def expectation(events: WeightedEvents):
    """Mean intensity of the scheme: sum of intensity * probability."""
    return sum(ev.intensity * ev.probability for ev in events.events)


def reduce(events: WeightedEvents) -> NominalDistribution:
    """Reduce a weighted scheme to its action-share distribution.

    Each share is q_k = x_k * P_k / E where E is the expectation; the
    result is renormalized once to absorb floating-point rounding.
    Labels keep their input order. Exact inputs (ints, Fractions) yield
    exact shares.
    """
    mean = expectation(events)
    raw = [ev.intensity * ev.probability / mean for ev in events.events]
    total = sum(raw)
    return NominalDistribution(
        labels=events.labels,
        q=tuple(v / total for v in raw),
        n=len(events),
        expectation=mean,
    )


def reduce_uniform(
    intensities: Sequence[float], labels: Sequence[object] | None = None
) -> NominalDistribution:
    """Reduce intensities under equal probabilities: q_k = x_k / sum(x)."""
    return reduce(WeightedEvents.uniform(intensities, labels))


def _entropy_nats(shares: Iterable[float]) -> float:
    # 0 * log 0 = 0 by convention; guards shares that underflow to zero.
    total = 0.0
    for share in shares:
        p = float(share)
        if p > 0.0:
            total -= p * math.log(p)
    return total


def entropy(dist: NominalDistribution, base: float = math.e) -> float:
    """Shannon entropy of the action shares in the given logarithm base."""
    if not base > 1:
        raise DomainError(f"logarithm base must exceed 1, got {base}")
    return _entropy_nats(dist.q) / math.log(base)


def normalized_entropy(dist: NominalDistribution) -> float:
    """Entropy divided by its maximum log(n); base-independent, in [0, 1].

    A single-event distribution has no uncertainty and returns 0.
    """
    if dist.n == 1:
        return 0.0
    h = _entropy_nats(dist.q) / math.log(dist.n)
    return min(1.0, max(0.0, h))


def normalized_entropy_weights(weights: Sequence[float], n: int | None = None) -> float:
    """Normalized entropy of raw nonnegative action weights.

    Unlike :func:`normalized_entropy` this accepts zero weights (they
    contribute nothing, by the 0 * log 0 convention) and an explicit
    event count ``n`` for the log(n) maximum, so a fixed-size system can
    be scored even when some events are currently empty.
    """
    if n is None:
        n = len(weights)
    if n < len(weights):
        raise DomainError(f"event count {n} below weight count {len(weights)}")
    for i, w in enumerate(weights):
        if w < 0:
            raise DomainError(f"weight {i} is negative: {w}")
    total = float(sum(weights))
    if total <= 0.0:
        raise DomainError("at least one weight must be positive")
    if n <= 1:
        return 0.0
    h = _entropy_nats(w / total for w in weights) / math.log(n)
    return min(1.0, max(0.0, h))


def surplus_information(dist: NominalDistribution, base: float = math.e) -> SurplusInformation:
    """How much predictability the system retains.

    Absolute surplus is log(n) - H in the given base; the relative form
    1 - h is base-independent and lives in [0, 1].
    """
    if not base > 1:
        raise DomainError(f"logarithm base must exceed 1, got {base}")
    absolute = (math.log(dist.n) - _entropy_nats(dist.q)) / math.log(base)
    return SurplusInformation(absolute=absolute, relative=1.0 - normalized_entropy(dist))


def order_chaos(h: float) -> OrderChaosSplit:
    """Split h into disorder/order measures and their mutual ratios.

    The two measures always sum to 1. At the endpoints one ratio has a
    zero denominator and is reported as ``math.inf`` rather than raised.
    """
    _check_unit_interval(h)
    disorder = h
    order = 1.0 - h
    return OrderChaosSplit(
        disorder=disorder,
        order=order,
        disorder_per_order=disorder / order if order > 0 else math.inf,
        order_per_disorder=order / disorder if disorder > 0 else math.inf,
    )


def golden_thresholds() -> Tuple[float, float]:
    """Zone boundaries (h_low, h_high) on the normalized entropy axis.

    These are the roots of h^2 - 3h + 1 = 0 and h^2 + h - 1 = 0 in
    [0, 1]; at each of them the ratio of disorder to order (or its
    inverse) equals the golden ratio. They are complementary:
    h_low + h_high = 1.
    """
    return H_LOW, H_HIGH


def zone_of(h: float) -> Zone:
    """Zone for a normalized entropy value; the corridor is inclusive."""
    _check_unit_interval(h)
    if h < H_LOW:
        return Zone.ORDER
    if h <= H_HIGH:
        return Zone.QUASI_EQUILIBRIUM
    return Zone.CHAOS


def classify_zone(h: float) -> ZoneReport:
    """Full zone report for a normalized entropy value."""
    split = order_chaos(h)
    return ZoneReport(
        h=h,
        zone=zone_of(h),
        disorder=split.disorder,
        order=split.order,
        disorder_per_order=split.disorder_per_order,
        order_per_disorder=split.order_per_disorder,
        surplus_information=1.0 - h,
    )


def _check_unit_interval(h: float) -> None:
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"normalized entropy must be in [0, 1], got {h}")
