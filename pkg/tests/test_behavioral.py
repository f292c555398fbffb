import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from qcaseq.behavioral import (SimState, invert, latency_quarter_cycles, majority, max_latency,
                               simulate, step)
from qcaseq.circuits import build
from qcaseq.core import LEVELS, X, GateNetlist, GateNode, Kind, Stimuli

levels = st.sampled_from(LEVELS)


def one_gate(kind, fanins, fixed=None):
    fixed = fixed or {}
    nodes = [GateNode(n, Kind.FIXED, None, (), p) for n, p in fixed.items()]
    ins = sorted({f for f in fanins if f not in fixed})
    nodes += [GateNode(n, Kind.INPUT, 0) for n in ins]
    nodes += [GateNode("g", kind, 0, tuple(fanins)), GateNode("q", Kind.OUTPUT, 0, ("g",))]
    return GateNetlist(tuple(nodes), tuple(ins), ("q",))


def run1(net, **vals):
    return simulate(net, Stimuli({k: [v] for k, v in vals.items()}), 1)["q"][0]


def wire4():
    nodes = [GateNode("in", Kind.INPUT, 0)]
    prev = "in"
    for z in range(4):
        nodes.append(GateNode(f"b{z}", Kind.BUFFER, z, (prev,)))
        prev = f"b{z}"
    nodes.append(GateNode("out", Kind.OUTPUT, 3, (prev,)))
    return GateNetlist(tuple(nodes), ("in",), ("out",))


@pytest.mark.parametrize("args,out", [((1, 1, X), 1), ((1, 0, X), X), ((0, X, 0), 0), ((X, X, 1), X)])
def test_majority_three_valued(args, out):
    assert majority(*args) == out


def test_invert():
    assert invert(0) == 1 and invert(1) == 0 and invert(X) == X


@given(levels, levels, levels)
def test_majority_permutation_invariant(a, b, c):
    ref = majority(a, b, c)
    assert all(majority(*p) == ref for p in itertools.permutations((a, b, c)))


@pytest.mark.parametrize("a,b", list(itertools.product((0, 1), repeat=2)))
def test_mv_identities_through_simulation(a, b):
    assert run1(one_gate(Kind.MAJORITY, ("a", "b", "m"), {"m": -1}), a=a, b=b) == a & b
    assert run1(one_gate(Kind.MAJORITY, ("a", "b", "p"), {"p": 1}), a=a, b=b) == a | b
    assert run1(one_gate(Kind.MAJORITY, ("a", "a", "b")), a=a, b=b) == a


def test_inverter_gate():
    assert run1(one_gate(Kind.INVERTER, ("a",)), a=0) == 1


def test_four_zone_wire_takes_one_cycle():
    # Input rises at the start of cycle 2 (tick 8); the zone-3 output holds
    # it by the end of tick 11, one cycle of elapsed time later.
    tr = simulate(wire4(), Stimuli({"in": [0, 0, 1, 1]}))
    assert tr["out"][10] == 0
    assert tr["out"][11:] == [1] * 5


def test_unknown_latches_start_as_x_and_init_zero_clears_them():
    tr = simulate(wire4(), Stimuli({"in": [1, 1]}))
    assert tr["out"][0] == X
    tr0 = simulate(wire4(), Stimuli({"in": [1, 1]}), init_zero=True)
    assert tr0["out"][0] == 0


def test_short_stimulus_rejected():
    with pytest.raises(ValueError):
        simulate(wire4(), Stimuli({"in": [1]}), 2)


def test_step_matches_simulate():
    net, s = wire4(), Stimuli({"in": [1, 0, 1]})
    st_ = SimState.initial(net)
    outs = []
    for _ in range(12):
        st_ = step(st_, net, s)
        outs.append(st_.latched["out"])
    assert outs == simulate(net, s)["out"]


def test_latency_examples():
    net = wire4()
    assert latency_quarter_cycles(net, "in", "out") == 3
    assert latency_quarter_cycles(one_gate(Kind.INVERTER, ("a",)), "a", "q") == 0
    chain = [GateNode("in", Kind.INPUT, 0)] + [
        GateNode(f"b{i}", Kind.BUFFER, (i + 1) % 4, (f"b{i - 1}" if i else "in",)) for i in range(4)]
    chain.append(GateNode("out", Kind.OUTPUT, 0, ("b3",)))
    assert latency_quarter_cycles(GateNetlist(tuple(chain), ("in",), ("out",)), "in", "out") == 4


def test_latency_unreachable():
    nodes = (GateNode("a", Kind.INPUT, 0), GateNode("b", Kind.INPUT, 0), GateNode("q", Kind.OUTPUT, 0, ("a",)))
    with pytest.raises(ValueError):
        latency_quarter_cycles(GateNetlist(nodes, ("a", "b"), ("q",)), "b", "q")


@pytest.mark.parametrize("name", ["cff", "ecff", "ram1"])
@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=5, deadline=None)
def test_determinism(name, seed):
    c = build(name)
    rng = random.Random(seed)
    s = Stimuli({i: [rng.randint(0, 1) for _ in range(12)] for i in c.inputs})
    assert simulate(c.netlist, s).signals == simulate(c.netlist, s).signals


@pytest.mark.parametrize("name", ["cff", "ecff", "ram1", "cpg", "dcc", "jk"])
@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=5, deadline=None)
def test_quiescence_under_constant_inputs(name, seed):
    c = build(name)
    rng = random.Random(seed)
    settle = max_latency(c.netlist) + 4
    n = settle // 4 + 3
    s = Stimuli({i: [rng.randint(0, 1)] * n for i in c.inputs})
    tr = simulate(c.netlist, s, probes=[x.name for x in c.netlist.nodes])
    for name_, v in tr.signals.items():
        assert len(set(v[settle:])) <= 1, name_


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_pipeline_causality(seed):
    c = build("cff")
    rng = random.Random(seed)
    nodes = c.netlist.by_name
    g = c.netlist.graph()
    for u, v in g.edges:
        g.edges[u, v]["w"] = int(nodes[u].zone is not None and nodes[v].zone is not None
                                 and nodes[u].zone != nodes[v].zone)
    base = {i: [rng.randint(0, 1) for _ in range(8)] for i in c.inputs}
    inp, k = rng.choice(c.inputs), rng.randint(2, 6)
    alt = {i: list(v) for i, v in base.items()}
    alt[inp][k] ^= 1
    names = [x.name for x in c.netlist.nodes]
    t1 = simulate(c.netlist, Stimuli(base), probes=names)
    t2 = simulate(c.netlist, Stimuli(alt), probes=names)
    dist = nx.single_source_dijkstra_path_length(g, inp, weight="w")
    for name in names:
        first = next((t for t in range(t1.n_ticks) if t1[name][t] != t2[name][t]), None)
        if first is not None:
            assert name in dist and first >= 4 * k + dist[name], name
