"""Four-phase QCA clock schedule.

Tick ``t`` is one quarter of a clock cycle. Zone ``k`` runs 90 degrees
behind zone ``k - 1``, so it is in phase ``(t - k) mod 4``. Zone 0 is in
Switch at tick 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import N_ZONES


class ClockPhase(enum.IntEnum):
    SWITCH = 0
    HOLD = 1
    RELEASE = 2
    RELAX = 3


def phase_at(zone: int, tick: int) -> ClockPhase:
    if tick < 0:
        raise ValueError("tick must be non-negative")
    if zone not in range(N_ZONES):
        raise ValueError(f"zone {zone} outside 0..3")
    return ClockPhase((tick - zone) % N_ZONES)


def switching_zone(tick: int) -> int:
    """The single zone that is in Switch at ``tick``."""
    return tick % N_ZONES


def zones_crossable(z1: int, z2: int) -> bool:
    """True iff the zones are 180 degrees apart and may share a coplanar crossing."""
    return (z1 - z2) % N_ZONES == 2


@dataclass(frozen=True)
class ClockSchedule:
    n_ticks: int

    def table(self) -> list[list[ClockPhase]]:
        """Phase of every zone (rows) at every tick (columns)."""
        return [[phase_at(z, t) for t in range(self.n_ticks)] for z in range(N_ZONES)]

    def phase(self, zone: int, tick: int) -> ClockPhase:
        if not 0 <= tick < self.n_ticks:
            raise IndexError(f"tick {tick} outside schedule of {self.n_ticks}")
        return phase_at(zone, tick)
