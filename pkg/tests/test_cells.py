import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcaseq.behavioral import simulate
from qcaseq.cells import (Cell, CellLayout, EngineParams, Geometry, Orientation, Primitive, Role,
                          build_primitive, kink_energy, primitive_netlist, relax, run_layout)
from qcaseq.clocking import zones_crossable
from qcaseq.core import Stimuli

# Independent point-charge oracle. Constants are CODATA 2018, typed in by
# hand so the check does not share code with the engine.
Q_E = 1.602176634e-19
EPS0 = 8.8541878128e-12
EPS_R = 12.9
A = 4.5  # half the 9 nm dot spacing
PITCH = 20.0
MEV = Q_E * 1e-3

# Dots of a 90-degree cell: top-right, top-left, bottom-left, bottom-right.
CORNERS = [(A, A), (-A, A), (-A, -A), (A, -A)]
P_PLUS = (0, 2)   # occupied dot indices for P = +1
P_MINUS = (1, 3)


def occupancy_charges(occupied):
    return [Q_E * (0.5 - (1 if i in occupied else 0)) for i in range(4)]


def pair_energy(ca, qa, cb, qb):
    total = 0.0
    for (xa, ya), q1 in zip(ca, qa):
        for (xb, yb), q2 in zip(cb, qb):
            d = math.hypot(xa - xb, ya - yb) * 1e-9
            total += q1 * q2 / (4 * math.pi * EPS0 * EPS_R * d)
    return total


def dots_at(x, y):
    return [(x * PITCH + dx, y * PITCH + dy) for dx, dy in CORNERS]


def oracle_kink(dx, dy):
    a, b = dots_at(0, 0), dots_at(dx, dy)
    same = pair_energy(a, occupancy_charges(P_PLUS), b, occupancy_charges(P_PLUS))
    opp = pair_energy(a, occupancy_charges(P_PLUS), b, occupancy_charges(P_MINUS))
    return opp - same


# Frozen from the oracle above, in meV.
FROZEN_KINK_MEV = {
    (1, 0): 1.4836,
    (2, 0): 0.04414,
    (1, 1): -0.32257,
    (2, 1): -0.01021,
}


@pytest.mark.parametrize("offset", sorted(FROZEN_KINK_MEV))
def test_oracle_matches_frozen_values(offset):
    assert oracle_kink(*offset) / MEV == pytest.approx(FROZEN_KINK_MEV[offset], rel=1e-3)


@pytest.mark.parametrize("offset", sorted(FROZEN_KINK_MEV))
def test_kink_energy_matches_oracle(offset):
    e = kink_energy(Cell(0, 0, 0), Cell(*offset, 0))
    assert e == pytest.approx(oracle_kink(*offset), rel=1e-9)


def test_adjacent_cells_prefer_alignment():
    assert kink_energy(Cell(0, 0, 0), Cell(1, 0, 0)) > 0
    assert kink_energy(Cell(0, 0, 0), Cell(0, 1, 0)) > 0


def test_diagonal_cells_prefer_anti_alignment():
    assert kink_energy(Cell(0, 0, 0), Cell(1, 1, 0)) < 0


def test_vertical_mirror_gives_same_energy():
    up = kink_energy(Cell(0, 0, 0), Cell(1, 1, 0))
    down = kink_energy(Cell(0, 0, 0), Cell(1, -1, 0))
    assert up == pytest.approx(down, rel=1e-12)


def test_coincident_cells_rejected():
    with pytest.raises(ValueError):
        kink_energy(Cell(0, 0, 0), Cell(0, 0, 1))


def test_rotated_cell_dots_sit_on_axes():
    g = Geometry()
    a, b = Cell(0, 0, 0, orientation=Orientation.ROTATED45), Cell(1, 0, 0, orientation=Orientation.ROTATED45)
    assert math.isfinite(kink_energy(a, b, g))


offsets = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(lambda o: o != (0, 0))
orient = st.sampled_from(list(Orientation))


@given(offsets, st.integers(-5, 5), st.integers(-5, 5), orient, orient)
@settings(max_examples=60, deadline=None)
def test_kink_symmetric_and_translation_invariant(off, tx, ty, oa, ob):
    a = Cell(0, 0, 0, orientation=oa)
    b = Cell(*off, 0, orientation=ob)
    e = kink_energy(a, b)
    assert kink_energy(b, a) == pytest.approx(e, rel=1e-9, abs=1e-30)
    at = Cell(tx, ty, 0, orientation=oa)
    bt = Cell(off[0] + tx, off[1] + ty, 0, orientation=ob)
    assert kink_energy(at, bt) == pytest.approx(e, rel=1e-9, abs=1e-30)


@given(offsets)
@settings(max_examples=40, deadline=None)
def test_kink_mirror_invariant(off):
    e = kink_energy(Cell(0, 0, 0), Cell(*off, 0))
    assert kink_energy(Cell(0, 0, 0), Cell(off[0], -off[1], 0)) == pytest.approx(e, rel=1e-9, abs=1e-30)
    assert kink_energy(Cell(0, 0, 0), Cell(-off[0], off[1], 0)) == pytest.approx(e, rel=1e-9, abs=1e-30)


def _ground_state_3_wire():
    """Exhaustive search over the two free cells' 2-electron placements.

    Each free cell puts its two electrons on any 2 of 4 dots (6 ways). The
    energy counts every inter-cell Coulomb pair plus each cell's own
    electron-electron repulsion; the driver is fixed at P = +1.
    """
    placements = list(itertools.combinations(range(4), 2))
    driver = (dots_at(0, 0), occupancy_charges(P_PLUS))
    best = None
    for o1, o2 in itertools.product(placements, repeat=2):
        c1 = (dots_at(1, 0), occupancy_charges(o1))
        c2 = (dots_at(2, 0), occupancy_charges(o2))
        e = pair_energy(*driver, *c1) + pair_energy(*driver, *c2) + pair_energy(*c1, *c2)
        for dots, occ in ((dots_at(1, 0), o1), (dots_at(2, 0), o2)):
            (x1, y1), (x2, y2) = dots[occ[0]], dots[occ[1]]
            e += Q_E ** 2 / (4 * math.pi * EPS0 * EPS_R * math.hypot(x1 - x2, y1 - y2) * 1e-9)
        if best is None or e < best[0]:
            best = (e, o1, o2)
    return best


def test_three_cell_wire_ground_state_is_all_plus():
    _, o1, o2 = _ground_state_3_wire()
    assert o1 == P_PLUS and o2 == P_PLUS


def test_three_cell_wire_relaxes_to_ground_state():
    lay = CellLayout((Cell(0, 0, 0, Role.FIXED, polarization=1), Cell(1, 0, 0), Cell(2, 0, 0)))
    res = relax(lay, {}, tick=0)
    assert res.converged
    assert res.polarizations[1] > 0.9
    assert res.polarizations[2] > 0.9


def _settle(kind, values):
    lay = build_primitive(kind)
    s = Stimuli({n: [values[n]] * 3 for n in lay.inputs})
    return lay, run_layout(lay, s)


def test_majority_layout_votes():
    lay, run = _settle(Primitive.MAJORITY, {"A": 1, "B": 1, "C": 0})
    assert run.trace["M"][-1] == 1
    dev = [i for i, c in enumerate(lay.cells) if c.pos == (0, 0)][0]
    assert run.polarizations[9, dev] > 0.5  # zone 0 in Hold


@pytest.mark.parametrize("kind", [Primitive.INVERTER_A, Primitive.INVERTER_B])
def test_inverter_layouts_invert(kind):
    for v in (0, 1):
        _, run = _settle(kind, {"in": v})
        assert run.trace["out"][-1] == 1 - v


def test_zoned_wire_delays_one_cycle():
    lay = build_primitive(Primitive.ZONED_WIRE)
    run = run_layout(lay, Stimuli({"in": [0, 0, 1, 1, 1]}))
    out = run.trace["out"]
    # Presented at the start of tick 8, latched by the zone-3 cells at the
    # end of tick 11: one clock cycle of elapsed time.
    assert out[8 + 2] == 0
    assert all(v == 1 for v in out[8 + 3:])


@pytest.mark.parametrize("h,v", list(itertools.product((0, 1), repeat=2)))
def test_crossover_keeps_signals_apart(h, v):
    _, run = _settle(Primitive.ZONE_CROSSOVER, {"H": h, "V": v})
    assert run.trace["Hout"][-1] == h
    assert run.trace["Vout"][-1] == v


def test_crossover_junction_zones_are_crossable():
    lay = build_primitive(Primitive.ZONE_CROSSOVER)
    zones = {c.pos: c.zone for c in lay.cells}
    assert zones_crossable(zones[(0, 0)], zones[(0, 1)])
    assert zones_crossable(zones[(0, 0)], zones[(0, -1)])


def test_primitive_shapes():
    assert len(build_primitive(Primitive.MAJORITY).cells) == 5
    assert len(build_primitive(Primitive.WIRE, 2).cells) == 2
    assert len({c.zone for c in build_primitive(Primitive.WIRE, 2).cells}) == 1
    with pytest.raises(ValueError):
        build_primitive(Primitive.WIRE, 1)


@pytest.mark.parametrize("kind", list(Primitive))
def test_gate_cell_agreement_and_hold_saturation(kind):
    lay, net = build_primitive(kind), primitive_netlist(kind)
    for bits in itertools.product((0, 1), repeat=len(lay.inputs)):
        s = Stimuli({n: [b] * 3 for n, b in zip(lay.inputs, bits)})
        run = run_layout(lay, s)
        gate = simulate(net, s)
        for o in lay.outputs:
            assert run.trace[o][4:] == gate[o][4:], (kind, bits, o)
        assert run.converged and run.max_iterations <= 100
        assert run.hold_saturation(lay) >= 0.5


@given(st.lists(st.sampled_from([0, 1]), min_size=2, max_size=6))
@settings(max_examples=20, deadline=None)
def test_polarizations_stay_bounded(seq):
    lay = build_primitive(Primitive.INVERTER_A)
    run = run_layout(lay, Stimuli({"in": seq}))
    assert np.all(np.abs(run.polarizations) <= 1.0)


def test_layout_validation():
    with pytest.raises(ValueError):
        CellLayout((Cell(0, 0, 0), Cell(0, 0, 1)))
    with pytest.raises(ValueError):
        CellLayout((Cell(0, 0, 0, Role.FIXED, polarization=0.3),))
    with pytest.raises(ValueError):
        Geometry(pitch=0)
    with pytest.raises(ValueError):
        EngineParams(max_iterations=0)


def test_relax_rejects_empty_layout():
    with pytest.raises(ValueError):
        relax(CellLayout(()), {}, 0)


def test_nonconvergence_reported_not_raised():
    lay = build_primitive(Primitive.MAJORITY)
    res = relax(lay, {"A": 1, "B": 0, "C": 1}, 0, EngineParams(max_iterations=1, tolerance=1e-12))
    assert not res.converged
    assert res.iterations == 1
