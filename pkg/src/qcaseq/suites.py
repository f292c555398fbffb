"""Seeded property and end-to-end check suites.

These run without a test framework so the command line can execute them
(``verify --all``). Each suite returns a :class:`VerificationReport`.
"""

from __future__ import annotations

import itertools
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, replace

import networkx as nx

from .behavioral import majority, max_latency, simulate
from .cells import (Cell, CellLayout, EngineParams, Primitive, build_primitive, kink_energy,
                    primitive_netlist, relax, run_layout)
from .circuits import CATALOG, _Builder, _mux, _xnor, build, build_counter_shift
from .clocking import ClockPhase, phase_at, switching_zone
from .core import LEVELS, N_ZONES, X, GateNetlist, GateNode, Kind, Stimuli, logic_of, validate_netlist
from .formats import netlists_isomorphic, parse_netlist, render_netlist, trace_from_csv, trace_from_vcd, \
    trace_to_csv, trace_to_vcd
from .metrics import layout_metrics, netlist_metrics
from .oracle import (Check, EdgeMode, FlipFlopKind, VerificationReport, _pulses, cff_random, counter_preamble,
                     counter_random, cpg_reference, ecff_random, edge_extract, eval_cff_equation, ff_next,
                     jk_drive, observe, ram_random, random_clock, trigger_indices, verify_cff_equation,
                     verify_sequence, verify_table4, verify_table5, verify_truth_table, TRUTH_TABLES)

DEFAULT_SEED = 20240611


def _add(rep: VerificationReport, name: str, passed: bool, detail: str = "") -> None:
    rep.checks.append(Check(name, {}, {}, {"detail": detail} if detail else {}, bool(passed)))


def _one_gate(kind: Kind, fanins: tuple[str, ...], fixed: dict[str, int] | None = None) -> GateNetlist:
    fixed = fixed or {}
    nodes = [GateNode(n, Kind.FIXED, None, (), p) for n, p in fixed.items()]
    ins = sorted({f for f in fanins if f not in fixed})
    nodes += [GateNode(n, Kind.INPUT, 0) for n in ins]
    nodes += [GateNode("g", kind, 0, fanins), GateNode("q", Kind.OUTPUT, 0, ("g",))]
    return GateNetlist(tuple(nodes), tuple(ins), ("q",))


def core_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("core properties")
    rng = random.Random(seed)
    odd = True
    for _ in range(500):
        p = rng.uniform(-1, 1)
        a, b = logic_of(p), logic_of(-p)
        if a != X and b != 1 - a:
            odd = False
    _add(rep, "logic_of is odd outside the X band", odd)
    for name in CATALOG:
        _add(rep, f"{name} netlist validates", validate_netlist(build(name).netlist).ok)
    for n in range(1, 9):
        _add(rep, f"counter_shift:{n} netlist validates", validate_netlist(build_counter_shift(n).netlist).ok)
    return rep


def clocking_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("clocking properties")
    one = all(sum(phase_at(z, t) is ClockPhase.SWITCH for z in range(N_ZONES)) == 1 for t in range(64))
    distinct = all(len({phase_at(z, t) for z in range(N_ZONES)}) == 4 for t in range(64))
    periodic = all(phase_at(z, t) == phase_at(z, t + 4) for z in range(N_ZONES) for t in range(64))
    agrees = all(phase_at(switching_zone(t), t) is ClockPhase.SWITCH for t in range(64))
    _add(rep, "exactly one zone in Switch per tick", one)
    _add(rep, "four distinct phases per tick", distinct)
    _add(rep, "phase period 4", periodic)
    _add(rep, "switching_zone is the zone in Switch", agrees)
    return rep


def behavioral_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("behavioral-engine properties")
    perm = all(majority(*p) == majority(*abc) for abc in itertools.product(LEVELS, repeat=3)
               for p in itertools.permutations(abc))
    _add(rep, "majority is permutation-invariant on 27 three-valued inputs", perm)

    def run1(net: GateNetlist, vals: dict[str, int]) -> int:
        return simulate(net, Stimuli({k: [v] for k, v in vals.items()}), 1)["q"][0]

    and_net = _one_gate(Kind.MAJORITY, ("a", "b", "m"), {"m": -1})
    or_net = _one_gate(Kind.MAJORITY, ("a", "b", "p"), {"p": 1})
    dup_net = _one_gate(Kind.MAJORITY, ("a", "a", "b"))
    ok_and = all(run1(and_net, {"a": a, "b": b}) == (a & b) for a, b in itertools.product((0, 1), repeat=2))
    ok_or = all(run1(or_net, {"a": a, "b": b}) == (a | b) for a, b in itertools.product((0, 1), repeat=2))
    ok_dup = all(run1(dup_net, {"a": a, "b": b}) == a for a, b in itertools.product((0, 1), repeat=2))
    _add(rep, "MV(a,b,-1) = a AND b", ok_and)
    _add(rep, "MV(a,b,+1) = a OR b", ok_or)
    _add(rep, "MV(a,a,b) = a", ok_dup)

    rng = random.Random(seed)
    h = build("ecff")
    s = ecff_random(rng, FlipFlopKind.JK, EdgeMode.DUAL)
    _add(rep, "determinism", simulate(h.netlist, s).signals == simulate(h.netlist, s).signals)

    for name in ("cff", "ecff", "ram1", "cpg"):
        c = build(name)
        settle = max_latency(c.netlist) + 4
        n = settle // 4 + 3
        vals = {i: [rng.randint(0, 1)] * n for i in c.inputs}
        tr = simulate(c.netlist, Stimuli(vals), probes=[x.name for x in c.netlist.nodes])
        ok = all(len(set(v[settle:])) <= 1 for v in tr.signals.values())
        _add(rep, f"quiescence of {name} under constant inputs", ok)

    # Causality: flipping one input at cycle k cannot change a node before
    # tick 4k + (its shortest zone distance from that input).
    c = build("cff")
    g = c.netlist.graph()
    nodes = c.netlist.by_name
    w = lambda u, v: int(nodes[u].zone is not None and nodes[v].zone is not None  # noqa: E731
                         and nodes[u].zone != nodes[v].zone)
    for e in g.edges:
        g.edges[e]["w"] = w(*e)
    ok = True
    for _ in range(5):
        base = {i: [rng.randint(0, 1) for _ in range(8)] for i in c.inputs}
        inp = rng.choice(c.inputs)
        k = rng.randint(2, 6)
        alt = {i: list(v) for i, v in base.items()}
        alt[inp][k] ^= 1
        names = [x.name for x in c.netlist.nodes]
        t1 = simulate(c.netlist, Stimuli(base), probes=names)
        t2 = simulate(c.netlist, Stimuli(alt), probes=names)
        dist = nx.single_source_dijkstra_path_length(g, inp, weight="w")
        for name in names:
            first = next((t for t in range(t1.n_ticks) if t1[name][t] != t2[name][t]), None)
            if first is not None and (name not in dist or first < 4 * k + dist[name]):
                ok = False
    _add(rep, "pipeline causality", ok)
    return rep


def cell_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("cell-engine properties")
    rng = random.Random(seed)
    sym = trans = mirror = True
    for _ in range(30):
        a = Cell(0, 0, 0)
        dx, dy = rng.randint(-3, 3), rng.randint(-3, 3)
        if (dx, dy) == (0, 0):
            continue
        b = Cell(dx, dy, 0)
        e = kink_energy(a, b)
        sym &= abs(e - kink_energy(b, a)) <= 1e-12 * abs(e) + 1e-40
        ox, oy = rng.randint(-5, 5), rng.randint(-5, 5)
        e2 = kink_energy(Cell(ox, oy, 0), Cell(ox + dx, oy + dy, 0))
        trans &= abs(e - e2) <= 1e-9 * abs(e) + 1e-40
        e3 = kink_energy(a, Cell(dx, -dy, 0))
        mirror &= abs(e - e3) <= 1e-9 * abs(e) + 1e-40
    _add(rep, "kink energy symmetric", sym)
    _add(rep, "kink energy translation-invariant", trans)
    _add(rep, "kink energy mirror-invariant", mirror)

    bounded = True
    lay = build_primitive(Primitive.MAJORITY)
    prev = None
    for t in range(12):
        res = relax(lay, {"A": rng.randint(0, 1), "B": rng.randint(0, 1), "C": rng.randint(0, 1)}, t, prev=prev)
        prev = res.polarizations
        bounded &= bool(((prev >= -1) & (prev <= 1)).all())
    _add(rep, "polarizations stay in [-1, 1]", bounded)

    for kind in Primitive:
        lay, net = build_primitive(kind), primitive_netlist(kind)
        agree, sat = True, 1.0
        for bits in itertools.product((0, 1), repeat=len(lay.inputs)):
            s = Stimuli({n: [b] * 3 for n, b in zip(lay.inputs, bits)})
            run = run_layout(lay, s)
            gate = simulate(net, s)
            agree &= all(run.trace[o][4:] == gate[o][4:] for o in lay.outputs)
            sat = min(sat, run.hold_saturation(lay))
        _add(rep, f"{kind.value}: cell and gate outputs agree", agree)
        _add(rep, f"{kind.value}: driven cells saturated in Hold", sat >= 0.5, f"min |P| {sat:.3f}")
    return rep


def circuit_properties(seed: int = DEFAULT_SEED, runs: int = 3) -> VerificationReport:
    rep = VerificationReport("circuit properties")
    for name in CATALOG:
        c = build(name)
        _add(rep, f"{name}: declared latency {c.declared_latency} = measured",
             c.declared_latency == max_latency(c.netlist))
    rep.extend(table1_reduction(seed, runs))
    rep.extend(cpg_pulse_width(seed, runs))
    rep.extend(ecff_trigger_counts())
    for n in (1, 2, 3):
        rep.extend(counter_period(n))
        rep.extend(shift_property(n, seed))
    return rep


def oracle_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("oracle properties")
    consistent = True
    for A, B, CLK, Qt in itertools.product((0, 1), repeat=4):
        d = eval_cff_equation(A, B, 0, 0, CLK, Qt)
        t = eval_cff_equation(A, B, 0, 1, CLK, Qt)
        if CLK:
            consistent &= d == ff_next(FlipFlopKind.D, A, B, Qt) and t == ff_next(FlipFlopKind.T, A, B, Qt)
        else:
            consistent &= d == Qt and t == Qt
    _add(rep, "equation reduces to D/T and holds when CLK=0", consistent)
    disjoint = union = superpose = True
    for c3, c4, old, clk in itertools.product((0, 1), repeat=4):
        o1, o2, out = cpg_reference(c3, c4, old, clk)
        union &= out == (o1 | o2)
        disjoint &= (o1 & o2) == 0
    for old, clk in itertools.product((0, 1), repeat=2):
        superpose &= cpg_reference(1, 1, old, clk)[2] == (cpg_reference(1, 0, old, clk)[2]
                                                         | cpg_reference(0, 1, old, clk)[2])
    _add(rep, "Output = Out1 OR Out2", union)
    _add(rep, "Out1 AND Out2 = 0", disjoint)
    _add(rep, "dual-mode superposition", superpose)
    rng = random.Random(seed)
    ok = True
    for _ in range(50):
        clk = [rng.randint(0, 1) for _ in range(rng.randint(1, 20))]
        dual = trigger_indices(edge_extract(clk, EdgeMode.DUAL))
        ok &= dual == (trigger_indices(edge_extract(clk, EdgeMode.RISING))
                       | trigger_indices(edge_extract(clk, EdgeMode.FALLING)))
    _add(rep, "edge_extract dual = rising union falling", ok)
    return rep


def metrics_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("metrics properties")
    rng = random.Random(seed)
    ok = True
    for kind in Primitive:
        lay = build_primitive(kind)
        dx, dy = rng.randint(-9, 9), rng.randint(-9, 9)
        moved = CellLayout(tuple(replace(c, x=c.x + dx, y=c.y + dy) for c in lay.cells), lay.geometry)
        a, b = layout_metrics(lay), layout_metrics(moved)
        ok &= a.cell_count == b.cell_count and abs(a.area_um2 - b.area_um2) < 1e-12
    _add(rep, "area and cell count translation-invariant", ok)
    cascade = _cascade_xnor_mux()
    lat = max_latency(cascade) / 4
    parts = netlist_metrics(build("xnor")).latency_cycles + netlist_metrics(build("mux21")).latency_cycles
    _add(rep, "cascade latency is additive", lat == parts, f"{lat} vs {parts}")
    return rep


def _cascade_xnor_mux() -> GateNetlist:
    """XNOR output F1 feeding the MUX's F1 input through contiguous zones."""
    b = _Builder()
    a, c2, bb, c1 = (b.input(n) for n in ("A", "C2", "B", "C1"))
    b.output("F2", _mux(b, c1, bb, _xnor(b, a, c2)))
    return b.netlist()


def io_properties(seed: int = DEFAULT_SEED) -> VerificationReport:
    rep = VerificationReport("io properties")
    for name in [*CATALOG, "counter_shift:3"]:
        net = build(name).netlist
        _add(rep, f"{name} round-trips through netlist text", netlists_isomorphic(net, parse_netlist(render_netlist(net))))
    rng = random.Random(seed)
    h = build("ecff")
    tr = simulate(h.netlist, ecff_random(rng, FlipFlopKind.T, EdgeMode.DUAL))
    same = trace_from_csv(trace_to_csv(tr)).signals == trace_from_vcd(trace_to_vcd(tr)).signals == tr.signals
    _add(rep, "csv and vcd decode to identical sequences", same)
    return rep


# Circuit-level checks shared by the acceptance tests.

def table1_reduction(seed: int = DEFAULT_SEED, runs: int = 10) -> VerificationReport:
    """CFF in each mode against the automaton and against the bare JK core."""
    rng = random.Random(seed)
    cff, jk = build("cff"), build("jk")
    rep = VerificationReport(f"CFF modes D/T/JK, {runs} runs each")
    for kind in FlipFlopKind:
        for r in range(runs):
            s = cff_random(rng, kind)
            rep.extend(verify_sequence(cff, s, "cff", title=f"{kind.value} run {r}"))
            a = observe(cff, s)["Q"]
            b = observe(jk, jk_drive(s))["Q"]
            warm = (cff.declared_latency + 4) // 4
            _add(rep, f"{kind.value} run {r}: CFF Q equals JK-core Q", a[warm:] == b[warm:])
    return rep


def cpg_pulse_width(seed: int = DEFAULT_SEED, runs: int = 10) -> VerificationReport:
    """Every Output pulse lasts 4 ticks when clock levels last >= 2 cycles."""
    rng = random.Random(seed)
    cpg = build("cpg")
    rep = VerificationReport("CPG pulse width")
    for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
        c3, c4 = edge.controls
        for r in range(runs):
            clk = random_clock(rng, 40, min_hold=2)
            s = Stimuli({"CLK": clk, "C3": [c3] * 40, "C4": [c4] * 40})
            out = simulate(cpg.netlist, s)["Output"][8:]
            widths = [len(list(g)) for v, g in itertools.groupby(out) if v == 1]
            # A pulse cut off by the end of the trace is not a full pulse.
            if out and out[-1] == 1:
                widths = widths[:-1]
            _add(rep, f"{edge.value} run {r}: pulse widths {sorted(set(widths))}",
                 bool(widths) and set(widths) == {4})
    return rep


def ecff_trigger_counts(n_periods: int = 8) -> VerificationReport:
    """T flip-flop with A=1 toggles once per trigger: count toggles per edge mode."""
    ecff = build("ecff")
    rep = VerificationReport("ECFF trigger counts")
    counts = {}
    for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
        c3, c4 = edge.controls
        rows = [{"A": 0, "B": 1, "C1": 1, "C2": 0, "C3": 1, "C4": 1, "CLK": k % 2} for k in range(2)]
        clk = [0, 0, 1, 1] * n_periods
        rows += [{"A": 1, "B": 0, "C1": 0, "C2": 1, "C3": c3, "C4": c4, "CLK": v} for v in clk]
        rows.append(dict(rows[-1]))
        q = observe(ecff, Stimuli.from_rows(rows))["Q"][1:]
        counts[edge] = sum(a != b for a, b in zip(q, q[1:]))
    single = counts[EdgeMode.RISING]
    _add(rep, f"toggles falling={counts[EdgeMode.FALLING]} rising={single} dual={counts[EdgeMode.DUAL]}",
         counts[EdgeMode.DUAL] == 2 * single == 2 * counts[EdgeMode.FALLING] and single > 0)
    return rep


def _square(n: int) -> list[int]:
    return [k % 2 for k in range(n)]


def counter_period(n: int, edges=(EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL)) -> VerificationReport:
    """Up-counter from 0: consecutive pre-trigger states step by 1 mod 2^n, period 2^n."""
    h = build_counter_shift(n)
    rep = VerificationReport(f"{n}-bit counter period")
    for edge in edges:
        c3, c4 = edge.controls
        rows = counter_preamble(n)
        body = 2 ** (n + 1) * (1 if edge is EdgeMode.DUAL else 2) + 2
        for level in _square(body + 1)[1:] if rows[-1]["CLK"] == 0 else _square(body):
            rows.append({"A": 1, "B": 0, "C1": 0, "C2": 1, "C3": c3, "C4": c4, "mode": 1, "CLK": level})
        s = Stimuli.from_rows(rows)
        trig = _pulses([{k: s.values[k][i] for k in s.values} for i in range(s.n_cycles)])
        obs = observe(h, s)
        start = len(counter_preamble(n))
        states = [sum(obs[f"Q{i}"][k - 1] << i for i in range(n)) if all(obs[f"Q{i}"][k - 1] in (0, 1) for i in range(n)) else None
                  for k in range(start, s.n_cycles) if trig[k] == 1]
        steps = all(b == (a + 1) % 2 ** n for a, b in zip(states, states[1:])) and None not in states
        period = next((p for p in range(1, len(states)) if states[p:] == states[:-p]), None)
        _add(rep, f"{edge.value}: {len(states)} triggers, period {period}",
             steps and period == 2 ** n and states[0] == 0)
    return rep


def shift_property(n: int, seed: int = DEFAULT_SEED,
                   edges=(EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL)) -> VerificationReport:
    """Qi just before trigger k equals the serial input at trigger k-i-1."""
    rng = random.Random(seed + n)
    h = build_counter_shift(n)
    rep = VerificationReport(f"{n}-bit shift register")
    for edge in edges:
        s = counter_random(rng, n, 0, edge, n_cycles=64 + 8 * n)
        rows = [{k: s.values[k][i] for k in s.values} for i in range(s.n_cycles)]
        trig = _pulses(rows)
        obs = observe(h, s)
        start = len(counter_preamble(n))
        ks = [k for k in range(start, s.n_cycles) if trig[k] == 1]
        serial = [rows[k]["A"] for k in ks]
        ok, checked = True, 0
        for j, k in enumerate(ks):
            for i in range(n):
                src = j - i - 1
                if src >= 0:
                    checked += 1
                    ok &= obs[f"Q{i}"][k - 1] == serial[src]
        _add(rep, f"{edge.value}: {checked} shift positions", ok and checked > 0)
    return rep


@dataclass
class Criterion:
    number: int
    title: str
    run: Callable[[int], tuple[bool, str]]


def _timed(rep_fn: Callable[[], VerificationReport], limit: float | None = None) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rep = rep_fn()
    dt = time.perf_counter() - t0
    ok = rep.ok and (limit is None or dt < limit)
    detail = f"{rep.n_pass}/{len(rep.checks)} checks, {dt:.2f} s" + (f" (limit {limit} s)" if limit else "")
    if not rep.ok:
        detail += "\n" + rep.to_text(5)
    return ok, detail


def _c1(seed: int):
    return _timed(verify_cff_equation, 1.0)


def _c2(seed: int):
    return _timed(lambda: table1_reduction(seed, 10))


def _c3(seed: int):
    def rep():
        r = verify_table4()
        ref, dom = TRUTH_TABLES["cpg"]
        r.extend(verify_truth_table(build("cpg"), ref, dom))
        r.extend(cpg_pulse_width(seed, 10))
        return r
    return _timed(rep)


def _c4(seed: int):
    return _timed(verify_table5)


def _c5(seed: int):
    def rep():
        rng = random.Random(seed)
        h = build("ecff")
        r = VerificationReport("ECFF nine configurations")
        for kind in FlipFlopKind:
            for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
                for run in range(3):
                    r.extend(verify_sequence(h, ecff_random(rng, kind, edge), "ecff",
                                             title=f"{edge.value} {kind.value} run {run}"))
        r.extend(ecff_trigger_counts())
        return r
    return _timed(rep)


def _c6(seed: int):
    def rep():
        rng = random.Random(seed)
        h = build("ram1")
        r = VerificationReport("RAM protocol")
        for _ in range(10):
            r.extend(verify_sequence(h, ram_random(rng, 32), "ram1"))
        return r
    return _timed(rep)


def _c7(seed: int):
    def rep():
        r = VerificationReport("counter / shift register")
        for n in (1, 2, 3, 4):
            r.extend(counter_period(n))
            r.extend(shift_property(n, seed))
        return r
    return _timed(rep, 10.0)


def _c8(seed: int):
    cff = netlist_metrics(build("cff")).latency_cycles
    ecff = netlist_metrics(build("ecff")).latency_cycles
    return cff == 2.75 and ecff == 3.75, f"CFF {cff} cycles, ECFF {ecff} cycles"


def _c9(seed: int):
    def rep():
        r = VerificationReport("cell primitives")
        params = EngineParams()
        worst_it = 0
        for kind in Primitive:
            lay, net = build_primitive(kind), primitive_netlist(kind)
            for bits in itertools.product((0, 1), repeat=len(lay.inputs)):
                s = Stimuli({n: [b] * 3 for n, b in zip(lay.inputs, bits)})
                run = run_layout(lay, s, params=params)
                gate = simulate(net, s)
                worst_it = max(worst_it, run.max_iterations)
                agree = all(run.trace[o][4:] == gate[o][4:] for o in lay.outputs)
                sat = run.hold_saturation(lay)
                _add(r, f"{kind.value} {bits}", agree and sat >= 0.5 and run.converged,
                     f"min |P| in Hold {sat:.3f}, {run.max_iterations} sweeps")
        r.notes.append(f"most sweeps in any relaxation: {worst_it}")
        return r
    return _timed(rep, 30.0)


def _c10(seed: int):
    def rep():
        r = VerificationReport("property suites")
        for s in property_suites(seed):
            r.extend(s)
        return r
    return _timed(rep)


CRITERIA = [
    Criterion(1, "CFF matches the next-state equation (64 points, race class separate)", _c1),
    Criterion(2, "CFF modes equal D/T/JK references over 10 random 64-cycle runs each", _c2),
    Criterion(3, "CPG: 12 table rows, 16 boolean points, 4-tick pulses", _c3),
    Criterion(4, "DCC: 8 table rows", _c4),
    Criterion(5, "ECFF: nine configurations, dual = 2x single triggers", _c5),
    Criterion(6, "RAM write/hold/read protocol, random 32-op scripts", _c6),
    Criterion(7, "Counter period 2^n and shift property, n = 1..4, three edge modes", _c7),
    Criterion(8, "Latency: CFF 2.75 and ECFF 3.75 cycles", _c8),
    Criterion(9, "Cell primitives: majority, inverters, 4-zone wire, crossover", _c9),
    Criterion(10, "Module property suites", _c10),
]


def property_suites(seed: int = DEFAULT_SEED) -> list[VerificationReport]:
    return [core_properties(seed), clocking_properties(seed), behavioral_properties(seed),
            cell_properties(seed), circuit_properties(seed), oracle_properties(seed),
            metrics_properties(seed), io_properties(seed)]


def run_acceptance(seed: int = DEFAULT_SEED, numbers: set[int] | None = None) -> list[tuple[Criterion, bool, str]]:
    out = []
    for c in CRITERIA:
        if numbers and c.number not in numbers:
            continue
        ok, detail = c.run(seed)
        out.append((c, ok, detail))
    return out
