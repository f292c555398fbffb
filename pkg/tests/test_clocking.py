import pytest
from hypothesis import given, strategies as st

from qcaseq.clocking import ClockPhase, ClockSchedule, phase_at, switching_zone, zones_crossable

zones = st.integers(0, 3)
ticks = st.integers(0, 10_000)


@pytest.mark.parametrize("zone,tick,phase", [
    (0, 0, ClockPhase.SWITCH),
    (1, 1, ClockPhase.SWITCH),
    (0, 1, ClockPhase.HOLD),
    (0, 2, ClockPhase.RELEASE),
    (0, 3, ClockPhase.RELAX),
])
def test_phase_at(zone, tick, phase):
    assert phase_at(zone, tick) is phase


@pytest.mark.parametrize("z1,z2,ok", [(0, 2, True), (1, 3, True), (2, 0, True), (0, 1, False), (0, 0, False)])
def test_zones_crossable(z1, z2, ok):
    assert zones_crossable(z1, z2) is ok


def test_negative_tick_rejected():
    with pytest.raises(ValueError):
        phase_at(0, -1)


@given(ticks)
def test_one_zone_switching_and_all_phases_present(t):
    phases = [phase_at(z, t) for z in range(4)]
    assert phases.count(ClockPhase.SWITCH) == 1
    assert set(phases) == set(ClockPhase)
    assert phase_at(switching_zone(t), t) is ClockPhase.SWITCH


@given(zones, ticks)
def test_period_four(z, t):
    assert phase_at(z, t) is phase_at(z, t + 4)


@given(st.integers(1, 3), ticks)
def test_zone_switches_one_tick_after_predecessor(z, t):
    if phase_at(z - 1, t) is ClockPhase.SWITCH:
        assert phase_at(z, t + 1) is ClockPhase.SWITCH


def test_schedule_table():
    s = ClockSchedule(8)
    table = s.table()
    assert len(table) == 4 and all(len(row) == 8 for row in table)
    assert table[2][2] is ClockPhase.SWITCH
    with pytest.raises(IndexError):
        s.phase(0, 8)
