"""Shared domain types: logic levels, gate netlists, stimuli, traces.

Logic values are plain ints: ``0``, ``1`` and :data:`X` (``2``) for an
undriven/unknown level. Netlist nodes live in one of four clock zones; a
signal may only move from zone ``z - 1`` into zone ``z`` (one quarter
cycle) or stay inside its zone (combinational).
"""

from __future__ import annotations

import enum
import functools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx

X = 2
LEVELS = (0, 1, X)
N_ZONES = 4
SATURATION_THRESHOLD = 0.5


def level_char(v: int) -> str:
    return "x" if v == X else str(v)


def logic_of(p: float, threshold: float = SATURATION_THRESHOLD) -> int:
    """Map a cell polarization in [-1, 1] to a logic level.

    Polarizations whose magnitude is below ``threshold`` read as :data:`X`.
    """
    if not -1.0 <= p <= 1.0:
        raise ValueError(f"polarization {p} outside [-1, 1]")
    if abs(p) < threshold:
        return X
    return 1 if p > 0 else 0


class Kind(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"
    FIXED = "fixed"
    MAJORITY = "MV"
    INVERTER = "INV"
    BUFFER = "BUF"


ARITY = {
    Kind.INPUT: 0,
    Kind.FIXED: 0,
    Kind.OUTPUT: 1,
    Kind.MAJORITY: 3,
    Kind.INVERTER: 1,
    Kind.BUFFER: 1,
}


@dataclass(frozen=True)
class GateNode:
    """One netlist node.

    ``zone`` is ``None`` only for fixed-polarization nodes, which are
    constant drivers usable from any zone. ``polarization`` is set only for
    fixed nodes (``+1`` or ``-1``).
    """

    name: str
    kind: Kind
    zone: int | None
    fanins: tuple[str, ...] = ()
    polarization: int | None = None

    @property
    def value(self) -> int:
        if self.kind is not Kind.FIXED:
            raise AttributeError(f"{self.name} is not a fixed node")
        return 1 if self.polarization > 0 else 0


@dataclass(frozen=True)
class GateNetlist:
    nodes: tuple[GateNode, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate node names: {dup}")

    @functools.cached_property
    def by_name(self) -> dict[str, GateNode]:
        return {n.name: n for n in self.nodes}

    def graph(self) -> nx.DiGraph:
        """Fan-in graph with edges driver -> consumer."""
        g = nx.DiGraph()
        for n in self.nodes:
            g.add_node(n.name)
        for n in self.nodes:
            for f in n.fanins:
                g.add_edge(f, n.name)
        return g

    def count(self, *kinds: Kind) -> int:
        return sum(1 for n in self.nodes if n.kind in kinds)


@dataclass
class Violation:
    kind: str
    message: str
    nodes: tuple[str, ...] = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.ok:
            lines = ["ok"]
        else:
            lines = [f"{v.kind}: {v.message}" for v in self.violations]
        return "\n".join(lines + [f"note: {n}" for n in self.notes])


def _crosses(a: GateNode, b: GateNode) -> bool:
    return a.zone is not None and b.zone is not None and a.zone != b.zone


def validate_netlist(netlist: GateNetlist) -> ValidationReport:
    """Check arity, clock-zone adjacency and loop structure.

    Never raises; every problem becomes a :class:`Violation`.
    """
    rep = ValidationReport()
    nodes = netlist.by_name

    for n in netlist.nodes:
        if len(n.fanins) != ARITY[n.kind]:
            rep.violations.append(Violation(
                "arity", f"{n.kind.value} node {n.name} has {len(n.fanins)} fan-ins, "
                f"expected {ARITY[n.kind]}", (n.name,)))
        if n.kind is Kind.FIXED:
            if n.polarization not in (-1, 1):
                rep.violations.append(Violation(
                    "fixed", f"fixed node {n.name} polarization must be +1 or -1", (n.name,)))
        elif n.zone not in range(N_ZONES):
            rep.violations.append(Violation(
                "zone", f"node {n.name} has zone {n.zone!r}", (n.name,)))
        for f in n.fanins:
            if f not in nodes:
                rep.violations.append(Violation(
                    "undefined", f"{n.name} references undefined {f}", (n.name, f)))
    for name in netlist.inputs:
        if name not in nodes or nodes[name].kind is not Kind.INPUT:
            rep.violations.append(Violation("io", f"{name} is not an input node", (name,)))
    for name in netlist.outputs:
        if name not in nodes or nodes[name].kind is not Kind.OUTPUT:
            rep.violations.append(Violation("io", f"{name} is not an output node", (name,)))
    if rep.violations:
        return rep

    for n in netlist.nodes:
        for f in n.fanins:
            src = nodes[f]
            if src.zone is None or n.zone is None:
                continue
            if n.zone != src.zone and n.zone != (src.zone + 1) % N_ZONES:
                rep.violations.append(Violation(
                    "zone adjacency",
                    f"edge {f}@{src.zone} -> {n.name}@{n.zone} skips clock zones",
                    (f, n.name)))

    g = netlist.graph()
    same = nx.DiGraph()
    same.add_nodes_from(g.nodes)
    same.add_edges_from((u, v) for u, v in g.edges if not _crosses(nodes[u], nodes[v]))
    for scc in nx.strongly_connected_components(same):
        if len(scc) > 1 or any(same.has_edge(v, v) for v in scc):
            rep.violations.append(Violation(
                "combinational cycle",
                f"same-zone loop through {sorted(scc)}", tuple(sorted(scc))))

    # A loop holds state for whole clock cycles only if every cycle crosses a
    # multiple of four zone boundaries: assign crossing-count potentials
    # mod 4 inside each strongly connected component and look for conflicts.
    for scc in nx.strongly_connected_components(g):
        if len(scc) == 1:
            continue
        sub = g.subgraph(scc)
        start = next(iter(sorted(scc)))
        pot = {start: 0}
        bad = []
        stack = [start]
        while stack:
            u = stack.pop()
            for v in sub.successors(u):
                w = (pot[u] + _crosses(nodes[u], nodes[v])) % N_ZONES
                if v not in pot:
                    pot[v] = w
                    stack.append(v)
                elif pot[v] != w:
                    bad.append((u, v))
            for v in sub.predecessors(u):
                w = (pot[u] - _crosses(nodes[v], nodes[u])) % N_ZONES
                if v not in pot:
                    pot[v] = w
                    stack.append(v)
                elif pot[v] != w:
                    bad.append((v, u))
        if bad:
            rep.violations.append(Violation(
                "loop phase",
                f"loop through {sorted(scc)} crosses a number of zone boundaries "
                "that is not a multiple of 4", tuple(sorted(scc))))

    if rep.ok:
        depth = same_zone_depth(netlist)
        if depth > 1:
            rep.notes.append(f"max same-zone combinational depth {depth}")
    return rep


def same_zone_depth(netlist: GateNetlist) -> int:
    """Longest chain of logic gates evaluated within a single zone."""
    nodes = netlist.by_name
    logic = {Kind.MAJORITY, Kind.INVERTER, Kind.BUFFER}
    depth: dict[str, int] = {}
    same = nx.DiGraph()
    for n in netlist.nodes:
        same.add_node(n.name)
        for f in n.fanins:
            if not _crosses(nodes[f], n):
                same.add_edge(f, n.name)
    for name in nx.topological_sort(same):
        n = nodes[name]
        d = max((depth[p] for p in same.predecessors(name)), default=0)
        depth[name] = d + (n.kind in logic)
    return max(depth.values(), default=0)


@dataclass(frozen=True)
class Stimuli:
    """Per-clock-cycle input values, plus optional per-tick overrides.

    ``overrides`` maps an input name to an explicit waveform sampled once per
    quarter-cycle tick (typically the CLK input); it takes precedence over
    the per-cycle value.
    """

    values: Mapping[str, Sequence[int]]
    overrides: Mapping[str, Sequence[int]] = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.values.values()}
        if len(lengths) > 1:
            raise ValueError(f"stimulus sequences differ in length: {sorted(lengths)}")
        for name, seq in list(self.values.items()) + list(self.overrides.items()):
            if any(v not in (0, 1) for v in seq):
                raise ValueError(f"stimulus {name} has values outside {{0, 1}}")
        ticks = {len(v) for v in self.overrides.values()}
        if ticks and lengths and ticks != {4 * lengths.pop()}:
            raise ValueError("override waveforms must cover 4 ticks per cycle")

    @property
    def n_cycles(self) -> int:
        for v in self.values.values():
            return len(v)
        for v in self.overrides.values():
            return len(v) // 4
        return 0

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[str, int]]) -> Stimuli:
        rows = list(rows)
        names = list(rows[0]) if rows else []
        return cls({k: [r[k] for r in rows] for k in names})

    def padded(self, n_cycles: int) -> Stimuli:
        """Extend every sequence to ``n_cycles`` by repeating its last value."""
        if n_cycles <= self.n_cycles:
            return self
        extra = n_cycles - self.n_cycles
        vals = {k: list(v) + [v[-1]] * extra for k, v in self.values.items()}
        ovr = {k: list(v) + [v[-1]] * (4 * extra) for k, v in self.overrides.items()}
        return Stimuli(vals, ovr)

    def __add__(self, other: Stimuli) -> Stimuli:
        if set(self.values) != set(other.values):
            raise ValueError("cannot concatenate stimuli over different inputs")
        return Stimuli({k: list(self.values[k]) + list(other.values[k]) for k in self.values})


@dataclass
class Trace:
    """Per-tick logic levels for named signals; one tick is a quarter cycle."""

    signals: dict[str, list[int]]

    def __post_init__(self):
        lengths = {len(v) for v in self.signals.values()}
        if len(lengths) > 1:
            raise ValueError("trace signals differ in length")

    @property
    def n_ticks(self) -> int:
        for v in self.signals.values():
            return len(v)
        return 0

    def __getitem__(self, name: str) -> list[int]:
        return self.signals[name]

    def at(self, name: str, tick: int) -> int:
        return self.signals[name][tick]
