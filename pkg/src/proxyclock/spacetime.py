"""Flat 1+1 Minkowski geometry in units with c = 1.

Positions are in light-seconds and times in seconds.  Observers are static,
and candidate collapse hypersurfaces are the equal-time planes of inertial
frames moving at velocity ``v`` along the single spatial axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

LIGHTLIKE_TOL = 1e-12


class GeometryError(ValueError):
    """Raised for superluminal velocities or degenerate geometry."""


class IntervalClass(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


def _finite(*values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise GeometryError("coordinates must be finite")


def _check_velocity(v: float) -> None:
    if not math.isfinite(v) or abs(v) >= 1.0:
        raise GeometryError(f"|v| must be < 1 for a spacelike surface, got v={v!r}")


@dataclass(frozen=True)
class SpacetimeEvent:
    x: float
    t: float

    def __post_init__(self):
        _finite(self.x, self.t)


@dataclass(frozen=True)
class StaticWorldline:
    x: float

    def __post_init__(self):
        _finite(self.x)

    def at(self, t: float) -> SpacetimeEvent:
        return SpacetimeEvent(self.x, t)


@dataclass(frozen=True)
class FlatHypersurface:
    """The plane t - anchor.t = v (x - anchor.x)."""

    anchor: SpacetimeEvent
    v: float

    def __post_init__(self):
        _check_velocity(self.v)

    def time_at(self, x: float) -> float:
        return self.anchor.t + self.v * (x - self.anchor.x)


def gamma(v: float) -> float:
    _check_velocity(v)
    return 1.0 / math.sqrt(1.0 - v * v)


def interval(e1: SpacetimeEvent, e2: SpacetimeEvent) -> tuple[float, IntervalClass]:
    """Signed squared interval dt^2 - dx^2 and its causal class."""
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    s2 = dt * dt - dx * dx
    if abs(s2) <= LIGHTLIKE_TOL:
        kind = IntervalClass.LIGHTLIKE
    elif s2 > 0:
        kind = IntervalClass.TIMELIKE
    else:
        kind = IntervalClass.SPACELIKE
    return s2, kind


def boost(e: SpacetimeEvent, v: float, origin: SpacetimeEvent = SpacetimeEvent(0.0, 0.0)) -> SpacetimeEvent:
    """Coordinates of ``e`` relative to ``origin`` in the frame moving at ``v``."""
    g = gamma(v)
    dt = e.t - origin.t
    dx = e.x - origin.x
    return SpacetimeEvent(x=g * (dx - v * dt), t=g * (dt - v * dx))


def intercept_time(surface: FlatHypersurface, worldline: StaticWorldline) -> float:
    """Time at which ``surface`` crosses a static worldline."""
    _check_velocity(surface.v)
    return surface.time_at(worldline.x)


def intercept_bounds(anchor: SpacetimeEvent, worldline: StaticWorldline) -> tuple[float, float]:
    """Open interval of intercepts reachable by spacelike planes through ``anchor``.

    The endpoints are where the anchor's light cone meets the worldline.
    """
    dx = abs(worldline.x - anchor.x)
    if dx == 0.0:
        raise GeometryError("worldline passes through the anchor; intercept interval is empty")
    return anchor.t - dx, anchor.t + dx
