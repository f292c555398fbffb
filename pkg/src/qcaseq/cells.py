"""Cell-level bistable relaxation engine for QCA primitives.

Each cell is four dots at the corners of a square (or on its axes for a 45
degree cell) holding two electrons over a neutralizing +e/2 per dot. A cell's
state is one polarization P in [-1, 1]. Neighbors couple through the kink
energy, and a cell relaxes to ``P = s / sqrt(1 + s^2)`` with
``s = sum_j E_ij P_j / (2 gamma)``. The clock enters through ``gamma``:
large in Relax/Release (cells depolarize), ramped down during Switch
(cells polarize following their neighbors), and in Hold the cell is
clamped to its latched value.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE
from scipy.constants import epsilon_0

from .clocking import ClockPhase, phase_at
from .core import N_ZONES, SATURATION_THRESHOLD, X, GateNetlist, GateNode, Kind, Stimuli, Trace, logic_of


class Orientation(enum.Enum):
    NORMAL90 = "90"
    ROTATED45 = "45"


class Role(enum.Enum):
    NORMAL = "normal"
    FIXED = "fixed"
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class Cell:
    x: int
    y: int
    zone: int
    role: Role = Role.NORMAL
    orientation: Orientation = Orientation.NORMAL90
    name: str | None = None
    polarization: float | None = None  # fixed cells only

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)

    @property
    def drives(self) -> bool:
        """Input and fixed cells are sources, never relaxed."""
        return self.role in (Role.INPUT, Role.FIXED)


@dataclass(frozen=True)
class Geometry:
    cell_size: float = 18.0  # nm
    dot_offset: float = 9.0  # nm, spacing between neighboring dots
    pitch: float = 20.0  # nm, center-to-center grid spacing

    def __post_init__(self):
        if min(self.cell_size, self.dot_offset, self.pitch) <= 0:
            raise ValueError("geometry must be strictly positive")


@dataclass(frozen=True)
class EngineParams:
    radius: float = 4.0  # pitch units
    tolerance: float = 1e-3
    max_iterations: int = 100
    threshold: float = SATURATION_THRESHOLD
    eps_r: float = 12.9
    ramp_steps: int = 8
    gamma_high: float = 10.0  # multiples of the largest kink energy
    gamma_low: float = 0.01

    def __post_init__(self):
        if min(self.radius, self.tolerance, self.threshold, self.eps_r) <= 0 or self.max_iterations < 1:
            raise ValueError("engine parameters must be positive and max_iterations >= 1")


@dataclass(frozen=True)
class CellLayout:
    cells: tuple[Cell, ...]
    geometry: Geometry = field(default_factory=Geometry)

    def __post_init__(self):
        seen = set()
        for c in self.cells:
            if c.pos in seen:
                raise ValueError(f"two cells at {c.pos}")
            seen.add(c.pos)
            if c.zone not in range(N_ZONES):
                raise ValueError(f"cell at {c.pos} has zone {c.zone}")
            if c.role is Role.FIXED and c.polarization not in (-1, 1, -1.0, 1.0):
                raise ValueError(f"fixed cell at {c.pos} needs polarization +1 or -1")
            if c.role in (Role.INPUT, Role.OUTPUT) and not c.name:
                raise ValueError(f"{c.role.value} cell at {c.pos} needs a name")
        for role in (Role.INPUT, Role.OUTPUT):
            names = [c.name for c in self.cells if c.role is role]
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate {role.value} names")

    @property
    def inputs(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cells if c.role is Role.INPUT)

    @property
    def outputs(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cells if c.role is Role.OUTPUT)

    def index(self, name: str) -> int:
        for i, c in enumerate(self.cells):
            if c.name == name:
                return i
        raise KeyError(name)


# Dot order: top-right, top-left, bottom-left, bottom-right (y grows upward).
# P = +1 puts the electrons on top-right and bottom-left.
_P_PLUS = np.array([1.0, 0.0, 1.0, 0.0])


def dot_positions(cell: Cell, geometry: Geometry) -> np.ndarray:
    a = geometry.dot_offset / 2
    if cell.orientation is Orientation.NORMAL90:
        local = np.array([[a, a], [-a, a], [-a, -a], [a, -a]])
    else:
        r = a * math.sqrt(2)
        local = np.array([[0, r], [-r, 0], [0, -r], [r, 0]])
    return local + geometry.pitch * np.array([cell.x, cell.y], dtype=float)


def dot_charges(p: float) -> np.ndarray:
    """Net dot charges (coulombs) for a fully resolved polarization sign."""
    occ = _P_PLUS if p > 0 else 1 - _P_PLUS
    return ELEMENTARY_CHARGE * (0.5 - occ)


def _coulomb(pa: np.ndarray, qa: np.ndarray, pb: np.ndarray, qb: np.ndarray, eps_r: float) -> float:
    d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=-1) * 1e-9
    if np.any(d == 0):
        raise ValueError("coincident dots")
    return float(np.sum(np.outer(qa, qb) / d) / (4 * math.pi * epsilon_0 * eps_r))


def kink_energy(a: Cell, b: Cell, geometry: Geometry = Geometry(), eps_r: float = 12.9) -> float:
    """Energy cost (joules) of opposite versus equal polarization.

    Positive: the pair prefers to align. Negative: it prefers to anti-align.
    """
    if a.pos == b.pos:
        raise ValueError("kink energy needs two distinct cells")
    pa, pb = dot_positions(a, geometry), dot_positions(b, geometry)
    same = _coulomb(pa, dot_charges(1), pb, dot_charges(1), eps_r)
    opposite = _coulomb(pa, dot_charges(1), pb, dot_charges(-1), eps_r)
    return opposite - same


def coupling_matrix(layout: CellLayout, params: EngineParams = EngineParams()) -> np.ndarray:
    n = len(layout.cells)
    k = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        a, b = layout.cells[i], layout.cells[j]
        if math.hypot(a.x - b.x, a.y - b.y) <= params.radius:
            k[i, j] = k[j, i] = kink_energy(a, b, layout.geometry, params.eps_r)
    return k


@dataclass
class RelaxResult:
    polarizations: np.ndarray
    iterations: int
    converged: bool


class _Engine:
    def __init__(self, layout: CellLayout, params: EngineParams):
        if not layout.cells:
            raise ValueError("empty layout")
        self.layout = layout
        self.params = params
        self.k = coupling_matrix(layout, params)
        self.scale = float(np.max(np.abs(self.k))) or 1.0
        cells = layout.cells
        # Gauss-Seidel order: row-major by position, top row first.
        order = sorted(range(len(cells)), key=lambda i: (-cells[i].y, cells[i].x))
        self.by_zone = [[i for i in order if cells[i].zone == z and not cells[i].drives]
                        for z in range(N_ZONES)]
        self.inputs = {c.name: i for i, c in enumerate(cells) if c.role is Role.INPUT}
        self.fixed = {i: float(c.polarization) for i, c in enumerate(cells) if c.role is Role.FIXED}

    def _sweeps(self, p: np.ndarray, idx: list[int], gamma: float) -> tuple[int, bool]:
        k = self.k
        for it in range(1, self.params.max_iterations + 1):
            delta = 0.0
            for i in idx:
                s = float(k[i] @ p) / (2 * gamma)
                new = s / math.sqrt(1 + s * s)
                delta = max(delta, abs(new - p[i]))
                p[i] = new
            if delta < self.params.tolerance:
                return it, True
        return self.params.max_iterations, False

    def drive(self, p: np.ndarray, inputs: Mapping[str, int]) -> None:
        for i, v in self.fixed.items():
            p[i] = v
        for name, i in self.inputs.items():
            v = inputs.get(name, X)
            p[i] = 0.0 if v == X else (1.0 if v else -1.0)

    def relax(self, prev: np.ndarray, inputs: Mapping[str, int], tick: int) -> RelaxResult:
        p = np.array(prev, dtype=float)
        self.drive(p, inputs)
        hi = self.params.gamma_high * self.scale
        lo = self.params.gamma_low * self.scale
        iters, ok = 0, True
        switching = []
        for z in range(N_ZONES):
            ph = phase_at(z, tick)
            idx = self.by_zone[z]
            if ph is ClockPhase.RELAX:
                p[idx] = 0.0
            elif ph is ClockPhase.RELEASE:
                n, c = self._sweeps(p, idx, hi)
                iters, ok = max(iters, n), ok and c
            elif ph is ClockPhase.SWITCH:
                switching = idx
        if switching:
            p[switching] = 0.0
            steps = self.params.ramp_steps
            for g in np.geomspace(hi, lo, steps):
                n, c = self._sweeps(p, switching, float(g))
                iters, ok = max(iters, n), ok and c
        return RelaxResult(p, iters, ok)


def relax(layout: CellLayout, inputs: Mapping[str, int], tick: int,
          params: EngineParams = EngineParams(), prev: Sequence[float] | None = None) -> RelaxResult:
    """Advance the layout through one clock tick.

    Cells of the zone in Switch are re-polarized along a geometric gamma
    ramp; cells in Hold keep ``prev``; Release relaxes at high gamma and
    Relax zeroes the zone.
    """
    eng = _Engine(layout, params)
    if prev is None:
        prev = np.zeros(len(layout.cells))
    return eng.relax(np.asarray(prev, dtype=float), inputs, tick)


@dataclass
class LayoutRun:
    trace: Trace
    polarizations: np.ndarray  # ticks x cells, after each tick
    max_iterations: int
    converged: bool

    def hold_saturation(self, layout: CellLayout, threshold: float = SATURATION_THRESHOLD,
                        skip_ticks: int = N_ZONES) -> float:
        """Smallest |P| of any driven (non-source) cell while its zone is in Hold."""
        worst = 1.0
        for t in range(skip_ticks, len(self.polarizations)):
            for i, c in enumerate(layout.cells):
                if not c.drives and phase_at(c.zone, t) is ClockPhase.HOLD:
                    worst = min(worst, abs(self.polarizations[t, i]))
        return worst


def _stimulus(stimuli: Stimuli, name: str, t: int) -> int:
    if name in stimuli.overrides:
        return stimuli.overrides[name][t]
    return stimuli.values[name][t // 4]


def run_layout(layout: CellLayout, stimuli: Stimuli, n_cycles: int | None = None,
               params: EngineParams = EngineParams()) -> LayoutRun:
    """Clocked cell simulation with full polarization history.

    Output signals in the trace are latched logic levels: an output changes
    only at its zone's Switch tick and reads X until it first switches.
    """
    n_cycles = stimuli.n_cycles if n_cycles is None else n_cycles
    if stimuli.n_cycles < n_cycles:
        raise ValueError(f"stimuli cover {stimuli.n_cycles} cycles, {n_cycles} requested")
    missing = set(layout.inputs) - set(stimuli.values) - set(stimuli.overrides)
    if missing:
        raise KeyError(f"no stimulus for inputs {sorted(missing)}")
    eng = _Engine(layout, params)
    p = np.zeros(len(layout.cells))
    hist = np.zeros((4 * n_cycles, len(layout.cells)))
    rec = {n: [] for n in (*layout.inputs, *layout.outputs)}
    latched = {n: X for n in layout.outputs}
    outs = {n: layout.index(n) for n in layout.outputs}
    max_it, ok = 0, True
    for t in range(4 * n_cycles):
        ins = {n: _stimulus(stimuli, n, t) for n in layout.inputs}
        res = eng.relax(p, ins, t)
        p = res.polarizations
        hist[t] = p
        max_it, ok = max(max_it, res.iterations), ok and res.converged
        for n in layout.inputs:
            rec[n].append(ins[n])
        for n, i in outs.items():
            if phase_at(layout.cells[i].zone, t) is ClockPhase.SWITCH:
                latched[n] = logic_of(float(np.clip(p[i], -1, 1)), params.threshold)
            rec[n].append(latched[n])
    return LayoutRun(Trace(rec), hist, max_it, ok)


def simulate_layout(layout: CellLayout, stimuli: Stimuli, n_cycles: int | None = None,
                    params: EngineParams = EngineParams()) -> Trace:
    return run_layout(layout, stimuli, n_cycles, params).trace


class Primitive(enum.Enum):
    WIRE = "wire"
    CORNER = "corner"
    INVERTER_A = "inverter_a"
    INVERTER_B = "inverter_b"
    MAJORITY = "majority"
    ZONE_CROSSOVER = "zone_crossover"
    ZONED_WIRE = "zoned_wire"


def _inp(x, y, name, zone=0):
    return Cell(x, y, zone, Role.INPUT, name=name)


def _out(x, y, name, zone=0):
    return Cell(x, y, zone, Role.OUTPUT, name=name)


def build_primitive(kind: Primitive | str, length: int | None = None) -> CellLayout:
    """Cell layout for one primitive.

    ``wire``: ``length`` cells in a row, the first an input, the last an
    output, all in zone 0. ``corner``: an L-shaped wire. ``inverter_a``:
    the input line forks into two branches whose ends sit diagonally against
    the output cell. ``inverter_b``: a single diagonal step. ``majority``:
    the 5-cell cross. ``zone_crossover``: a zone-0 horizontal wire crossing a
    vertical wire whose cells next to the junction are zone 2, so the two
    never switch together. ``zoned_wire``: an input plus two cells in each
    of zones 0-3.
    """
    kind = Primitive(kind)
    cells: list[Cell]
    if kind is Primitive.WIRE:
        n = 5 if length is None else length
        if n < 2:
            raise ValueError("a wire needs at least 2 cells")
        cells = [_inp(0, 0, "in")] + [Cell(x, 0, 0) for x in range(1, n - 1)] + [_out(n - 1, 0, "out")]
    elif kind is Primitive.CORNER:
        cells = [_inp(0, 0, "in"), Cell(1, 0, 0), Cell(2, 0, 0), Cell(2, -1, 0), _out(2, -2, "out")]
    elif kind is Primitive.INVERTER_A:
        cells = [_inp(0, 0, "in"), Cell(1, 0, 0), Cell(2, 0, 0),
                 Cell(2, 1, 0), Cell(3, 1, 0), Cell(2, -1, 0), Cell(3, -1, 0),
                 Cell(4, 0, 0), _out(5, 0, "out")]
    elif kind is Primitive.INVERTER_B:
        cells = [_inp(0, 0, "in"), Cell(1, 0, 0), Cell(2, 0, 0), Cell(3, -1, 0), _out(4, -1, "out")]
    elif kind is Primitive.MAJORITY:
        cells = [_inp(0, 1, "A"), _inp(-1, 0, "B"), _inp(0, -1, "C"), Cell(0, 0, 0), _out(1, 0, "M")]
    elif kind is Primitive.ZONE_CROSSOVER:
        arm = 3
        cells = [_inp(-arm - 1, 0, "H")]
        cells += [Cell(x, 0, 0) for x in range(-arm, arm)] + [_out(arm, 0, "Hout")]
        cells.append(_inp(0, arm + 1, "V"))
        cells += [Cell(0, y, 1) for y in range(arm, 1, -1)]
        cells += [Cell(0, 1, 2), Cell(0, -1, 2)]
        cells += [Cell(0, y, 3) for y in range(-2, -arm, -1)] + [_out(0, -arm, "Vout", 3)]
    else:
        cells = [_inp(0, 0, "in")]
        cells += [Cell(1 + i, 0, i // 2) for i in range(7)] + [_out(8, 0, "out", 3)]
    return CellLayout(tuple(cells))


def primitive_netlist(kind: Primitive | str) -> GateNetlist:
    """The gate-level equivalent of a primitive, with matching names and zones."""
    kind = Primitive(kind)
    nodes: list[GateNode]
    if kind in (Primitive.WIRE, Primitive.CORNER):
        nodes = [GateNode("in", Kind.INPUT, 0), GateNode("w", Kind.BUFFER, 0, ("in",)),
                 GateNode("out", Kind.OUTPUT, 0, ("w",))]
    elif kind in (Primitive.INVERTER_A, Primitive.INVERTER_B):
        nodes = [GateNode("in", Kind.INPUT, 0), GateNode("n", Kind.INVERTER, 0, ("in",)),
                 GateNode("out", Kind.OUTPUT, 0, ("n",))]
    elif kind is Primitive.MAJORITY:
        nodes = [GateNode(x, Kind.INPUT, 0) for x in "ABC"]
        nodes += [GateNode("m", Kind.MAJORITY, 0, ("A", "B", "C")), GateNode("M", Kind.OUTPUT, 0, ("m",))]
    elif kind is Primitive.ZONE_CROSSOVER:
        nodes = [GateNode("H", Kind.INPUT, 0), GateNode("V", Kind.INPUT, 0),
                 GateNode("h", Kind.BUFFER, 0, ("H",)), GateNode("Hout", Kind.OUTPUT, 0, ("h",))]
        prev = "V"
        for z in (1, 2, 3):
            nodes.append(GateNode(f"v{z}", Kind.BUFFER, z, (prev,)))
            prev = f"v{z}"
        nodes.append(GateNode("Vout", Kind.OUTPUT, 3, (prev,)))
    else:
        nodes = [GateNode("in", Kind.INPUT, 0)]
        prev = "in"
        for z in range(N_ZONES):
            nodes.append(GateNode(f"w{z}", Kind.BUFFER, z, (prev,)))
            prev = f"w{z}"
        nodes.append(GateNode("out", Kind.OUTPUT, 3, (prev,)))
    names = [n.name for n in nodes]
    return GateNetlist(tuple(nodes), tuple(n.name for n in nodes if n.kind is Kind.INPUT),
                       tuple(x for x, n in zip(names, nodes) if n.kind is Kind.OUTPUT))
