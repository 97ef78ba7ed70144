"""1+1 dimensional special relativity with c = 1."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

LIGHTLIKE_TOL = 1e-12


class RelativityError(ValueError):
    pass


class IntervalClass(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass(frozen=True)
class SpacetimeEvent:
    id: str
    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise RelativityError(f"event {self.id!r} has non-finite coordinates")


@dataclass(frozen=True)
class Frame:
    v: float

    def __post_init__(self):
        if not abs(self.v) < 1 - 1e-12:
            raise RelativityError(f"frame velocity must satisfy |v| < 1, got {self.v}")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v * self.v)


REST = Frame(0.0)


@dataclass(frozen=True)
class SignalChannel:
    speed: float

    def __post_init__(self):
        if not self.speed > 0:
            raise RelativityError(f"signal speed must be positive, got {self.speed}")


def boost(e: SpacetimeEvent, f: Frame) -> SpacetimeEvent:
    g = f.gamma
    return SpacetimeEvent(e.id, g * (e.t - f.v * e.x), g * (e.x - f.v * e.t))


def interval2(e1: SpacetimeEvent, e2: SpacetimeEvent) -> float:
    """s^2 = dt^2 - dx^2."""
    dt, dx = e2.t - e1.t, e2.x - e1.x
    return dt * dt - dx * dx


def interval_class(e1: SpacetimeEvent, e2: SpacetimeEvent) -> IntervalClass:
    s2 = interval2(e1, e2)
    if abs(s2) <= LIGHTLIKE_TOL:
        return IntervalClass.LIGHTLIKE
    return IntervalClass.TIMELIKE if s2 > 0 else IntervalClass.SPACELIKE


def reversal_threshold(e1: SpacetimeEvent, e2: SpacetimeEvent) -> Optional[float]:
    """Velocity beyond which ``e2`` is seen before ``e1``.

    ``e2`` must be later than ``e1`` in the rest frame. Returns ``dt/dx`` for a
    spacelike pair (frames with ``v`` past it, on the side of ``dx``, reverse
    the order) and ``None`` when no frame with |v| < 1 can reverse it.
    """
    dt, dx = e2.t - e1.t, e2.x - e1.x
    if dt == 0 and dx == 0:
        raise RelativityError("coincident events have no time order")
    if not dt > 0:
        raise RelativityError("second event must be later in the rest frame")
    if interval_class(e1, e2) is not IntervalClass.SPACELIKE:
        return None
    return dt / dx


def reverses_order(e1: SpacetimeEvent, e2: SpacetimeEvent, f: Frame) -> bool:
    return boost(e2, f).t < boost(e1, f).t


def add_velocities(v1: float, v2: float) -> float:
    return (v1 + v2) / (1 + v1 * v2)


def signal_arrival(e_emit: SpacetimeEvent, receiver_x: float, ch: SignalChannel,
                   id: str = "arrival") -> SpacetimeEvent:
    return SpacetimeEvent(id, e_emit.t + abs(receiver_x - e_emit.x) / ch.speed, receiver_x)
