"""Zone-pipelined gate-level simulator.

At tick ``t`` the zone in Switch (``t mod 4``) re-evaluates its nodes in
topological order. Same-zone fan-ins are read fresh; fan-ins from the
previous zone are read from their latched values. Every other zone keeps
its latched values, so a signal advances exactly one zone per tick.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import networkx as nx

from .clocking import switching_zone
from .core import N_ZONES, X, GateNetlist, Kind, Stimuli, Trace

_OP_INPUT, _OP_COPY, _OP_INV, _OP_MV = range(4)


def majority(a: int, b: int, c: int) -> int:
    """Three-valued majority: two equal known inputs decide, otherwise X."""
    if a == b and a != X:
        return a
    if a == c and a != X:
        return a
    if b == c and b != X:
        return b
    return X


def invert(a: int) -> int:
    return X if a == X else 1 - a


_MV_TABLE = tuple(majority(a, b, c) for a in range(3) for b in range(3) for c in range(3))
_INV_TABLE = (1, 0, X)


class CombinationalCycleError(RuntimeError):
    pass


class _Compiled:
    """Index-based evaluation program for one netlist."""

    def __init__(self, netlist: GateNetlist):
        nodes = netlist.nodes
        self.names = [n.name for n in nodes]
        index = {name: i for i, name in enumerate(self.names)}
        self.index = index
        self.fixed = {index[n.name]: n.value for n in nodes if n.kind is Kind.FIXED}
        self.inputs = {index[n]: n for n in netlist.inputs}

        same = nx.DiGraph()
        for n in nodes:
            same.add_node(n.name)
            for f in n.fanins:
                src = nodes[index[f]]
                if src.zone is not None and src.zone == n.zone:
                    same.add_edge(f, n.name)
        try:
            order = list(nx.topological_sort(same))
        except nx.NetworkXUnfeasible as exc:
            raise CombinationalCycleError("same-zone combinational cycle") from exc

        by_name = netlist.by_name
        self.program: list[list[tuple]] = [[] for _ in range(N_ZONES)]
        for name in order:
            n = by_name[name]
            if n.kind is Kind.FIXED:
                continue
            i = index[name]
            fi = tuple(index[f] for f in n.fanins)
            if n.kind is Kind.INPUT:
                op = (_OP_INPUT, i, name)
            elif n.kind in (Kind.BUFFER, Kind.OUTPUT):
                op = (_OP_COPY, i, fi[0])
            elif n.kind is Kind.INVERTER:
                op = (_OP_INV, i, fi[0])
            else:
                op = (_OP_MV, i, fi)
            self.program[n.zone].append(op)

    def initial(self, init_zero: bool) -> list[int]:
        vals = [0 if init_zero else X] * len(self.names)
        for i, v in self.fixed.items():
            vals[i] = v
        return vals

    def tick(self, vals: list[int], t: int, sample) -> None:
        mv, inv = _MV_TABLE, _INV_TABLE
        for op in self.program[switching_zone(t)]:
            code = op[0]
            if code == _OP_MV:
                a, b, c = op[2]
                vals[op[1]] = mv[vals[a] * 9 + vals[b] * 3 + vals[c]]
            elif code == _OP_COPY:
                vals[op[1]] = vals[op[2]]
            elif code == _OP_INV:
                vals[op[1]] = inv[vals[op[2]]]
            else:
                vals[op[1]] = sample(op[2], t)


@functools.lru_cache(maxsize=256)
def _compile(netlist: GateNetlist) -> _Compiled:
    return _Compiled(netlist)


def _sampler(stimuli: Stimuli):
    values, overrides = stimuli.values, stimuli.overrides

    def sample(name: str, t: int) -> int:
        if name in overrides:
            return overrides[name][t]
        try:
            return values[name][t // 4]
        except KeyError:
            raise KeyError(f"no stimulus for input {name}") from None
    return sample


@dataclass(frozen=True)
class SimState:
    """Latched value of every node after ``tick`` (``-1`` before the first tick)."""

    latched: Mapping[str, int]
    tick: int = -1

    @classmethod
    def initial(cls, netlist: GateNetlist, init_zero: bool = False) -> SimState:
        prog = _compile(netlist)
        return cls(dict(zip(prog.names, prog.initial(init_zero))), -1)


def step(state: SimState, netlist: GateNetlist, stimuli: Stimuli) -> SimState:
    """Advance one tick: the zone now in Switch re-evaluates its nodes."""
    prog = _compile(netlist)
    vals = [state.latched[n] for n in prog.names]
    t = state.tick + 1
    prog.tick(vals, t, _sampler(stimuli))
    return SimState(dict(zip(prog.names, vals)), t)


def simulate(netlist: GateNetlist, stimuli: Stimuli, n_cycles: int | None = None, *,
             init_zero: bool = False, probes: Iterable[str] = ()) -> Trace:
    """Run ``4 * n_cycles`` ticks and record inputs, outputs and ``probes``.

    Each recorded sample is the latched value after that tick's evaluation.
    """
    if n_cycles is None:
        n_cycles = stimuli.n_cycles
    if stimuli.n_cycles < n_cycles:
        raise ValueError(f"stimuli cover {stimuli.n_cycles} cycles, {n_cycles} requested")
    missing = set(netlist.inputs) - set(stimuli.values) - set(stimuli.overrides)
    if missing:
        raise KeyError(f"no stimulus for inputs {sorted(missing)}")
    prog = _compile(netlist)
    watch = list(dict.fromkeys([*netlist.inputs, *netlist.outputs, *probes]))
    idx = [prog.index[n] for n in watch]
    rec: list[list[int]] = [[] for _ in watch]
    vals = prog.initial(init_zero)
    sample = _sampler(stimuli)
    for t in range(4 * n_cycles):
        prog.tick(vals, t, sample)
        for r, i in zip(rec, idx):
            r.append(vals[i])
    return Trace(dict(zip(watch, rec)))


def _crossing(netlist: GateNetlist):
    nodes = netlist.by_name

    def w(u: str, v: str) -> int:
        a, b = nodes[u].zone, nodes[v].zone
        return int(a is not None and b is not None and a != b)
    return w


def _intra_longest(g: nx.DiGraph, members: set[str], start: str, w) -> dict[str, int]:
    """Longest simple-path weight from ``start`` to each node of one SCC."""
    best = {start: 0}
    path = {start}

    def dfs(u: str, d: int):
        for v in g.successors(u):
            if v in members and v not in path:
                dv = d + w(u, v)
                if dv > best.get(v, -1):
                    best[v] = dv
                path.add(v)
                dfs(v, dv)
                path.remove(v)
    dfs(start, 0)
    return best


def longest_hops(netlist: GateNetlist, source: str) -> dict[str, int]:
    """Longest simple path (in zone crossings) from ``source`` to every reachable node.

    A simple path never re-enters a strongly connected component it has left,
    so the search runs over the component DAG and only enumerates paths
    inside each (small) feedback loop.
    """
    g = netlist.graph()
    w = _crossing(netlist)
    cond = nx.condensation(g)
    dist: dict[str, int] = {source: 0}
    for c in nx.topological_sort(cond):
        members = cond.nodes[c]["members"]
        entries = [(u, dist[u]) for u in members if u in dist]
        if not entries:
            continue
        if len(members) > 1:
            best: dict[str, int] = {}
            for u, d0 in entries:
                for v, d in _intra_longest(g, members, u, w).items():
                    best[v] = max(best.get(v, -1), d0 + d)
            dist.update(best)
        for u in members:
            if u not in dist:
                continue
            for v in g.successors(u):
                if v not in members:
                    dist[v] = max(dist.get(v, -1), dist[u] + w(u, v))
    return dist


def latency_quarter_cycles(netlist: GateNetlist, source: str, target: str) -> int:
    """Zone hops on the longest input-to-output path; divide by 4 for cycles."""
    dist = longest_hops(netlist, source)
    if target not in dist:
        raise ValueError(f"{target} is unreachable from {source}")
    return dist[target]


def max_latency(netlist: GateNetlist) -> int:
    """Worst-case latency over all connected input/output pairs."""
    best = 0
    for i in netlist.inputs:
        dist = longest_hops(netlist, i)
        for o in netlist.outputs:
            if o in dist:
                best = max(best, dist[o])
    return best


def latency_cycles(quarters: int) -> float:
    return quarters / 4


def settle_ticks(netlist: GateNetlist) -> int:
    """Ticks after which constant inputs give constant outputs."""
    return max_latency(netlist) + 4


def cycles_for(ticks: int) -> int:
    return math.ceil(ticks / 4)
