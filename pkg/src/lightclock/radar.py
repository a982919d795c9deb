"""Infinitesimal light-clocks and the radar measurement protocol.

A stationary anchor point (the ``s``-point) measures a moving target (the
``m``-point) by radar: emit a light pulse at ``t1``, receive the reflection
back at ``t3``, and form the Einstein measures

    t_E = (t1 + t3) / 2
    r_E = c * (t3 - t1) / 2
    v_E = r_E / t_E        (defined only when t_E != 0)

The simulator works in one spatial dimension.  Light propagates at constant
speed ``c`` in both directions of the s-frame, reflections are instantaneous,
and reflectors move on straight worldlines ``x(t) = x0 + v*t``.  Velocity of
a reflector not moving through the origin is obtained from differences of
two pings rather than from a single ``v_E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CausalityError,
    DegeneratePairError,
    GeometryError,
    SuperluminalError,
    UnitMismatchError,
)
from .infinitesimals import TruncatedHyper, st


def _pure_epsilon() -> TruncatedHyper:
    return TruncatedHyper.infinitesimal()


@dataclass(frozen=True)
class ClockState:
    """Snapshot of an infinitesimal light-clock.

    ``count`` ticks of exact rational duration ``tick_duration`` have
    elapsed; the clock arm ``arm_length`` is a pure infinitesimal (its
    standard part must be zero).
    """

    count: int
    tick_duration: Fraction
    arm_length: TruncatedHyper = field(default_factory=_pure_epsilon)

    def __post_init__(self):
        if not isinstance(self.count, int) or self.count < 0:
            raise ValueError(f"count must be a nonnegative integer, got {self.count!r}")
        u = Fraction(self.tick_duration)
        if u <= 0:
            raise ValueError(f"tick duration must be positive, got {u}")
        object.__setattr__(self, "tick_duration", u)
        if st(self.arm_length) != 0:
            raise ValueError("clock arm must be a pure infinitesimal")

    @property
    def elapsed(self) -> Fraction:
        """Exact elapsed time, count * tick_duration."""
        return self.count * self.tick_duration


def clock_elapsed(before: ClockState, after: ClockState) -> float:
    """Standard part of the interval between two snapshots of one clock.

    The tick count must not run backwards and both snapshots must share the
    same tick duration.  The product is exact rational; only the final
    conversion to float rounds.
    """
    if before.tick_duration != after.tick_duration:
        raise UnitMismatchError(
            f"tick durations differ: {before.tick_duration} vs {after.tick_duration}"
        )
    if after.count < before.count:
        raise CausalityError(
            f"clock ran backwards: {before.count} -> {after.count}"
        )
    return float(after.tick_duration * (after.count - before.count))


@dataclass(frozen=True)
class RadarRecord:
    """One radar exchange and its Einstein measures.

    ``v_E`` is ``None`` when ``t_E == 0`` (the single-ping velocity is then
    undefined).  A zero-range echo forces ``t_E == t3``.
    """

    t1: float
    t3: float
    c: float
    t_E: float
    r_E: float
    v_E: float | None = None

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError(f"light speed must be positive, got {self.c}")
        if self.t3 < self.t1:
            raise CausalityError(f"reception t3={self.t3} precedes emission t1={self.t1}")


def einstein_measures(t1: float, t3: float, c: float) -> RadarRecord:
    """Einstein time, distance and (when defined) velocity from one exchange."""
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if t3 < t1:
        raise CausalityError(f"reception t3={t3} precedes emission t1={t1}")
    t_e = 0.5 * (t3 + t1)
    r_e = 0.5 * c * (t3 - t1)
    v_e = r_e / t_e if t_e != 0 else None
    return RadarRecord(t1=t1, t3=t3, c=c, t_E=t_e, r_E=r_e, v_E=v_e)


@dataclass(frozen=True)
class Reflector:
    """Uniformly moving target on the worldline x(t) = x0 + v*t."""

    x0: float
    v: float

    def position(self, t: float) -> float:
        return self.x0 + self.v * t


def simulate_ping(refl: Reflector, t1: float, c: float = 1.0) -> RadarRecord:
    """One full radar exchange with a uniformly moving reflector.

    The outbound pulse emitted at ``t1`` from the origin meets the worldline
    at ``t_r = (x0 + c*t1) / (c - v)``; the echo returns after a further
    ``x(t_r)/c``.  The reflector must be slower than light and strictly
    ahead of the emitter (positive position) at the reflection event.
    """
    if c <= 0:
        raise ValueError(f"light speed must be positive, got {c}")
    if abs(refl.v) >= c:
        raise SuperluminalError(
            f"|v|={abs(refl.v)} >= c={c}: no intercept with a superluminal reflector"
        )
    t_r = (refl.x0 + c * t1) / (c - refl.v)
    if t_r <= t1:
        raise GeometryError(
            f"reflector at x={refl.position(t1)} is not ahead of the emitter at t1={t1}"
        )
    x_r = refl.position(t_r)
    if x_r < 0:
        raise GeometryError(f"reflection position {x_r} is negative")
    t3 = t_r + x_r / c
    return einstein_measures(t1, t3, c)


def radar_velocity(ping_a: RadarRecord, ping_b: RadarRecord) -> float:
    """Finite-difference Einstein velocity between two pings.

    ``(r_E(b) - r_E(a)) / (t_E(b) - t_E(a))``; consistent with the
    single-ping ``v_E = r_E / t_E`` for motion through the origin.
    """
    dt = ping_b.t_E - ping_a.t_E
    if dt == 0:
        raise DegeneratePairError("pings share the same Einstein time")
    return (ping_b.r_E - ping_a.r_E) / dt
