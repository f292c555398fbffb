import random

import pytest
from hypothesis import given, settings, strategies as st

from qcaseq.behavioral import max_latency
from qcaseq.circuits import CATALOG, build, build_counter_shift, counter_latency
from qcaseq.core import X, Stimuli, validate_netlist
from qcaseq.oracle import (RESET, TRUTH_TABLES, EdgeMode, FlipFlopKind, cff_point_stimuli,
                           counter_preamble, ecff_random, eval_cff_equation, jk_drive, observe,
                           verify_sequence, verify_truth_table)


def steady(name, **point):
    """Outputs after holding one input point long enough to settle."""
    h = build(name)
    hold = (h.declared_latency + 4) // 4 + 2
    out = observe(h, Stimuli({k: [v] * hold for k, v in point.items()}))
    return {o: v[-1] for o, v in out.items()}


def with_history(name, before, now):
    """Outputs for one cycle of ``now`` after a settled cycle of ``before``."""
    h = build(name)
    hold = (h.declared_latency + 4) // 4 + 2
    s = Stimuli({k: [before[k]] * hold + [now[k]] for k in now})
    out = observe(h, s)
    return {o: v[-1] for o, v in out.items()}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_builders_validate_and_declare_true_latency(name):
    h = build(name)
    assert validate_netlist(h.netlist).ok
    assert h.declared_latency == max_latency(h.netlist)


@pytest.mark.parametrize("n", range(1, 9))
def test_counter_latency_formula(n):
    h = build_counter_shift(n)
    assert validate_netlist(h.netlist).ok
    assert h.declared_latency == max_latency(h.netlist) == counter_latency(n)
    assert h.outputs == tuple(f"Q{i}" for i in range(n))


def test_build_by_name():
    assert build("counter_shift:3").outputs == ("Q0", "Q1", "Q2")
    with pytest.raises(KeyError):
        build("nope")


@pytest.mark.parametrize("a,c2,f1", [(1, 1, 1), (1, 0, 0), (0, 0, 1), (0, 1, 0)])
def test_xnor(a, c2, f1):
    assert steady("xnor", A=a, C2=c2)["F1"] == f1


@pytest.mark.parametrize("b,f1,c1,f2", [(1, 0, 1, 1), (1, 0, 0, 0), (0, 0, 0, 0), (1, 1, 0, 1), (0, 0, 1, 0)])
def test_mux21(b, f1, c1, f2):
    assert steady("mux21", B=b, F1=f1, C1=c1)["F2"] == f2


@pytest.mark.parametrize("name", ["mv", "xnor", "mux21", "cpg", "dcc"])
def test_truth_tables(name):
    ref, dom = TRUTH_TABLES[name]
    rep = verify_truth_table(build(name), ref, dom)
    assert rep.ok, rep.to_text()


def jk_rows(*rows):
    reset = {"J": 0, "K": 1, "CLK": 1}
    return Stimuli.from_rows([reset] + [dict(zip(("J", "K", "CLK"), r)) for r in rows])


def test_jk_examples():
    h = build("jk")
    # From Q = 0, J=1 K=0 with clock high sets Q.
    assert observe(h, jk_rows((1, 0, 1)))["Q"][1] == 1
    # With the clock low, Q = 1 holds whatever J and K say.
    assert observe(h, jk_rows((1, 0, 1), (0, 1, 0), (1, 1, 0)))["Q"][2:] == [1, 1]
    # From Q = 1, J=0 K=1 with clock high clears Q.
    q = observe(h, jk_rows((1, 0, 1), (0, 1, 1)))
    assert q["Q"][2] == 0 and q["Qbar"][2] == 1


@pytest.mark.parametrize("A,B,C1,C2,Qt,expected", [
    (1, 0, 0, 0, 0, 1),   # D loads A whatever Qt
    (1, 0, 0, 0, 1, 1),
    (1, 1, 1, 0, 1, 0),   # JK with J=1, K=1 from Qt=1
])
def test_cff_examples(A, B, C1, C2, Qt, expected):
    q = observe(build("cff"), cff_point_stimuli(A, B, C1, C2, 1, Qt))["Q"]
    assert q[2] == Qt
    assert q[3] == expected == eval_cff_equation(A, B, C1, C2, 1, Qt)


def test_cff_t_mode_toggles_from_zero():
    q = observe(build("cff"), cff_point_stimuli(1, 0, 0, 1, 1, 0))["Q"]
    assert q[3] == 1


def test_cff_holds_with_clock_low():
    rows = [dict(RESET, CLK=1), {"A": 1, "B": 0, "C1": 0, "C2": 0, "CLK": 1}]
    rows += [{"A": 0, "B": 1, "C1": 1, "C2": 1, "CLK": 0}] * 6
    s = Stimuli.from_rows(rows)
    assert verify_sequence(build("cff"), s, "cff").ok
    assert observe(build("cff"), s)["Q"][-1] == 1


@given(st.integers(0, 2**32 - 1), st.sampled_from(list(FlipFlopKind)))
@settings(max_examples=8, deadline=None)
def test_cff_equals_bare_jk_core(seed, kind):
    from qcaseq.oracle import cff_random
    rng = random.Random(seed)
    cff, jk = build("cff"), build("jk")
    s = cff_random(rng, kind)
    warm = (cff.declared_latency + 4) // 4
    assert observe(cff, s)["Q"][warm:] == observe(jk, jk_drive(s))["Q"][warm:]


def ram(rows):
    # A leading write of 0 gives the loop a known state; writing 1 into an
    # unknown loop stays unknown under three-valued evaluation.
    names = ("Input", "Enable", "WriteRead")
    rows = [(0, 1, 0)] + list(rows)
    return observe(build("ram1"), Stimuli.from_rows([dict(zip(names, r)) for r in rows]))["Out"][1:]


def test_ram_write_then_read():
    assert ram([(1, 1, 0), (0, 1, 1)])[1] == 1
    assert ram([(1, 1, 0), (0, 1, 0), (1, 1, 1)])[2] == 0


def test_ram_write_of_one_into_unknown_loop_stays_unknown():
    s = Stimuli.from_rows([{"Input": 1, "Enable": 1, "WriteRead": 0}] * 6
                          + [{"Input": 0, "Enable": 1, "WriteRead": 1}])
    assert observe(build("ram1"), s)["Out"][-1] == X


def test_ram_holds_across_disabled_cycles():
    out = ram([(1, 1, 0), (0, 0, 0), (0, 0, 1), (0, 0, 0), (0, 1, 1)])
    assert out[-1] == 1
    assert out[1:4] == [0, 0, 0]


@pytest.mark.parametrize("c3,c4,old,clk,out", [(1, 0, 1, 0, 1), (0, 1, 0, 1, 1), (1, 1, 1, 1, 0)])
def test_cpg_examples(c3, c4, old, clk, out):
    got = with_history("cpg", {"C3": c3, "C4": c4, "CLK": old}, {"C3": c3, "C4": c4, "CLK": clk})
    assert got["Output"] == out


@pytest.mark.parametrize("c3,delayed,current,out", [(0, 1, 0, 1), (1, 1, 0, 0), (1, 0, 1, 1)])
def test_dcc_examples(c3, delayed, current, out):
    got = with_history("dcc", {"C3": c3, "CLK": delayed}, {"C3": c3, "CLK": current})
    assert got["Output"] == out


def ecff_rows(kind, edge, data, clk):
    c1, c2 = {FlipFlopKind.D: (0, 0), FlipFlopKind.T: (0, 1), FlipFlopKind.JK: (1, 0)}[kind]
    c3, c4 = edge.controls
    rows = [dict(RESET, C3=1, C4=1, CLK=0), dict(RESET, C3=1, C4=1, CLK=1)]
    for (a, b), level in zip(data, clk):
        rows.append({"A": a, "B": b, "C1": c1, "C2": c2, "C3": c3, "C4": c4, "CLK": level})
    return Stimuli.from_rows(rows)


def test_ecff_rising_d_captures_once():
    clk = [1, 0, 0, 1, 1, 1]
    s = ecff_rows(FlipFlopKind.D, EdgeMode.RISING, [(1, 0)] * len(clk), clk)
    q = observe(build("ecff"), s)["Q"]
    assert q[2:5] == [0, 0, 0]          # falling edge and low level leave Q alone
    assert q[5:] == [1, 1, 1]           # the single rising edge captures A
    assert verify_sequence(build("ecff"), s, "ecff").ok


def test_ecff_falling_jk_toggles_once_per_falling_edge():
    clk = [1, 1, 0, 0, 1, 1, 0, 0, 1]
    s = ecff_rows(FlipFlopKind.JK, EdgeMode.FALLING, [(1, 1)] * len(clk), clk)
    q = observe(build("ecff"), s)["Q"][2:]
    changes = [i for i in range(1, len(q)) if q[i] != q[i - 1]]
    assert changes == [2, 6]


def test_ecff_dual_t_toggles_on_every_edge():
    clk = [1, 0, 1, 1, 0, 1]
    s = ecff_rows(FlipFlopKind.T, EdgeMode.DUAL, [(1, 0)] * len(clk), clk)
    q = observe(build("ecff"), s)["Q"][2:]
    assert q == [0, 1, 0, 0, 1, 0]


def test_ecff_without_edges_never_triggers():
    clk = [1, 0, 1, 0, 1, 0]
    s = ecff_rows(FlipFlopKind.T, EdgeMode.NONE, [(1, 0)] * len(clk), clk)
    assert set(observe(build("ecff"), s)["Q"][2:]) == {0}


@pytest.mark.parametrize("kind", list(FlipFlopKind))
@pytest.mark.parametrize("edge", [EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL])
def test_ecff_nine_configurations(kind, edge):
    rng = random.Random(hash((kind.value, edge.value)) & 0xFFFF)
    rep = verify_sequence(build("ecff"), ecff_random(rng, kind, edge), "ecff")
    assert rep.ok and rep.checks, rep.to_text()


def counter_stimuli(n, mode, serial=None, n_edges=8):
    rows = counter_preamble(n)
    clk = rows[-1]["CLK"]
    for k in range(n_edges):
        clk ^= 1
        a = 1 if mode else serial[k]
        rows.append({"A": a, "B": 0, "C1": 0, "C2": mode, "C3": 1, "C4": 1, "mode": mode, "CLK": clk})
    return Stimuli.from_rows(rows), len(counter_preamble(n))


def test_two_bit_counter_counts_dual_edges():
    s, start = counter_stimuli(2, 1)
    o = observe(build_counter_shift(2), s)
    states = [o["Q1"][k] * 2 + o["Q0"][k] for k in range(start, start + 5)]
    assert states == [1, 2, 3, 0, 1]


def test_two_bit_shift_register():
    s, start = counter_stimuli(2, 0, serial=[1, 0, 1, 0, 0, 0, 0, 0])
    o = observe(build_counter_shift(2), s)
    pairs = [(o["Q0"][k], o["Q1"][k]) for k in range(start, start + 3)]
    # The preamble cleared Q1, so the first pair shows 0 where a fresh
    # register would still be unknown.
    assert pairs == [(1, 0), (0, 1), (1, 0)]
    assert verify_sequence(build_counter_shift(2), s, "counter_shift:2").ok


def test_one_stage_counter_is_an_ecff():
    rng = random.Random(7)
    s = ecff_random(rng, FlipFlopKind.T, EdgeMode.DUAL)
    rows = [dict(r, mode=0) for r in (
        {k: s.values[k][i] for k in s.values} for i in range(s.n_cycles))]
    s1 = Stimuli.from_rows(rows)
    assert observe(build_counter_shift(1), s1)["Q0"] == observe(build("ecff"), s)["Q"]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("mode", [0, 1])
def test_counter_shift_matches_reference(n, mode):
    from qcaseq.oracle import counter_random
    rng = random.Random(n * 10 + mode)
    for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
        s = counter_random(rng, n, mode, edge, 48)
        rep = verify_sequence(build_counter_shift(n), s, f"counter_shift:{n}")
        assert rep.ok, rep.to_text()


def test_counter_shift_rejects_zero_stages():
    with pytest.raises(ValueError):
        build_counter_shift(0)
