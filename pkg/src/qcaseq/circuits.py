"""Gate-level builders for the configurable sequential circuits.

Every builder returns a :class:`CircuitHandle` whose netlist already passes
:func:`~qcaseq.core.validate_netlist`.

Timing model used by the builders: a signal is a physical node plus the
*hop* at which it carries the value belonging to clock cycle ``c`` (tick
``4c + hop``). Primary inputs sit at hop 0. Reading a node's previous-cycle
value is the same node at ``hop - 4``; the builder inserts buffers so that
every gate reads all of its fan-ins in the same cycle frame. A loop that
must hold state for one cycle is closed through a forward-declared node
whose definition sits exactly four hops later.
"""

from __future__ import annotations

import contextlib
import itertools
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from .behavioral import max_latency
from .core import N_ZONES, GateNetlist, GateNode, Kind, validate_netlist


@dataclass(frozen=True)
class Sig:
    node: str
    hop: int | None  # None: constant driver, usable at any hop


class _Builder:
    def __init__(self):
        self._nodes: dict[str, GateNode] = {}
        self._pending: dict[str, int] = {}
        self._cons: dict[tuple, str] = {}
        self._ids = itertools.count()
        self.prefix = ""
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.output_hops: dict[str, int] = {}

    @contextlib.contextmanager
    def scope(self, prefix: str):
        old, self.prefix = self.prefix, prefix
        try:
            yield
        finally:
            self.prefix = old

    def _fresh(self, stem: str) -> str:
        while True:
            name = f"{self.prefix}{stem}{next(self._ids)}"
            if name not in self._nodes and name not in self._pending:
                return name

    def _add(self, node: GateNode) -> str:
        if node.name in self._nodes:
            raise ValueError(f"node {node.name} defined twice")
        self._nodes[node.name] = node
        return node.name

    def _make(self, kind: Kind, fanins: list[str], zone: int, name: str | None = None) -> str:
        # Identical gates on identical wires in the same zone are one physical node.
        key = (kind, tuple(sorted(fanins)) if kind is Kind.MAJORITY else tuple(fanins), zone)
        if key in self._cons:
            return self._cons[key]
        stem = {Kind.MAJORITY: "mv", Kind.INVERTER: "inv", Kind.BUFFER: "buf"}[kind]
        name = self._add(GateNode(name or self._fresh(stem), kind, zone, tuple(fanins)))
        self._cons[key] = name
        return name

    def input(self, name: str, hop: int = 0) -> Sig:
        self._add(GateNode(name, Kind.INPUT, hop % N_ZONES))
        self.inputs.append(name)
        return Sig(name, hop)

    def fixed(self, polarization: int) -> Sig:
        name = "one" if polarization > 0 else "zero"
        if name not in self._nodes:
            self._add(GateNode(name, Kind.FIXED, None, (), polarization))
        return Sig(name, None)

    def _fixed_value(self, s: Sig) -> int | None:
        n = self._nodes.get(s.node)
        return n.polarization if n is not None and n.kind is Kind.FIXED else None

    def delay(self, s: Sig, hop: int, name: str | None = None) -> Sig:
        """Buffer ``s`` forward until it is available at ``hop``."""
        if s.hop is None:
            return s
        if hop < s.hop:
            raise ValueError(f"cannot move {s.node} back from hop {s.hop} to {hop}")
        cur = s
        while cur.hop < hop:
            last = cur.hop + 1 == hop
            node = self._make(Kind.BUFFER, [cur.node], (cur.hop + 1) % N_ZONES,
                              name if last else None)
            cur = Sig(node, cur.hop + 1)
        return cur

    def _args(self, fanins: list[Sig], hop: int) -> list[str]:
        out = []
        for f in fanins:
            if f.hop is None or f.hop == hop:
                out.append(f.node)
            elif f.hop > hop:
                raise ValueError(f"{f.node} at hop {f.hop} is too late for hop {hop}")
            else:
                out.append(self.delay(f, hop - 1).node)
        return out

    def gate(self, kind: Kind, fanins: list[Sig], hop: int | None = None,
             name: str | None = None) -> Sig:
        live = [f.hop for f in fanins if f.hop is not None]
        if not live:
            vals = [self._fixed_value(f) for f in fanins]
            if kind is Kind.INVERTER:
                return self.fixed(-vals[0])
            if kind is Kind.MAJORITY:
                return self.fixed(1 if sum(vals) > 0 else -1)
            return fanins[0]
        if hop is None:
            hop = max(live) + 1
        return Sig(self._make(kind, self._args(fanins, hop), hop % N_ZONES, name), hop)

    def AND(self, a: Sig, b: Sig, hop: int | None = None, name: str | None = None) -> Sig:
        return self.gate(Kind.MAJORITY, [a, b, self.fixed(-1)], hop, name)

    def OR(self, a: Sig, b: Sig, hop: int | None = None, name: str | None = None) -> Sig:
        return self.gate(Kind.MAJORITY, [a, b, self.fixed(+1)], hop, name)

    def INV(self, a: Sig, hop: int | None = None, name: str | None = None) -> Sig:
        return self.gate(Kind.INVERTER, [a], hop, name)

    def forward(self, hop: int, name: str | None = None) -> Sig:
        """Reserve a loop node whose value is defined four hops later."""
        name = name or self._fresh("loop")
        if name in self._nodes or name in self._pending:
            raise ValueError(f"node {name} defined twice")
        self._pending[name] = hop
        return Sig(name, hop)

    def define(self, fwd: Sig, kind: Kind, fanins: list[Sig]) -> Sig:
        hop = self._pending.pop(fwd.node) + N_ZONES
        self._add(GateNode(fwd.node, kind, hop % N_ZONES, tuple(self._args(fanins, hop))))
        return Sig(fwd.node, hop)

    def output(self, name: str, s: Sig, hop: int | None = None) -> None:
        hop = s.hop if hop is None else hop
        s = self.delay(s, hop)
        self._add(GateNode(name, Kind.OUTPUT, hop % N_ZONES, (s.node,)))
        self.outputs.append(name)
        self.output_hops[name] = hop

    def netlist(self) -> GateNetlist:
        if self._pending:
            raise ValueError(f"undefined loop nodes: {sorted(self._pending)}")
        return GateNetlist(tuple(self._nodes.values()), tuple(self.inputs), tuple(self.outputs))


@dataclass(frozen=True, eq=False)
class CircuitHandle:
    """A built circuit plus the timing facts needed to drive and read it.

    ``output_hops[o]`` is the tick offset at which output ``o`` carries the
    result for the inputs of cycle ``k``: read it at tick ``4k + hop``.
    ``taps`` names virtual inputs that are an input's previous-cycle value
    (e.g. ``CLK_old``). ``declared_latency`` is the designed worst-case
    input-to-output latency in quarter cycles.
    """

    name: str
    netlist: GateNetlist
    output_hops: Mapping[str, int]
    declared_latency: int
    taps: Mapping[str, str] = field(default_factory=dict)

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.netlist.inputs

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.netlist.outputs

    @property
    def latency_cycles(self) -> float:
        return self.declared_latency / 4


def _handle(name: str, b: _Builder, declared: int, taps: Mapping[str, str] | None = None
            ) -> CircuitHandle:
    net = b.netlist()
    rep = validate_netlist(net)
    if not rep.ok:
        raise AssertionError(f"builder {name} produced an invalid netlist:\n{rep}")
    measured = max_latency(net)
    if measured != declared:
        raise AssertionError(f"{name}: declared latency {declared}, measured {measured}")
    return CircuitHandle(name, net, dict(b.output_hops), declared, dict(taps or {}))


def _live(*sigs: Sig) -> int:
    return max(s.hop for s in sigs if s.hop is not None)


def _xnor(b: _Builder, a: Sig, c2: Sig) -> Sig:
    base = _live(a, c2)
    na = b.INV(a, base + 1)
    nc2 = b.INV(c2, base + 1)
    return b.OR(b.AND(a, c2, base + 2), b.AND(na, nc2, base + 2), base + 3)


def _mux(b: _Builder, sel: Sig, one: Sig, zero: Sig) -> Sig:
    """``sel ? one : zero`` as OR(AND(one, sel), AND(zero, NOT sel))."""
    base = _live(sel, one, zero)
    nsel = b.INV(sel)
    return b.OR(b.AND(one, sel, base + 1), b.AND(zero, nsel, base + 1), base + 2)


def _jk(b: _Builder, j: Sig, k: Sig, clk: Sig, t: int | None = None, tag: str = ""):
    """Level-sensitive JK stage: Q <- CLK ? J.Qn + Kn.Q : Q.

    The state loop is four hops long: the J/K product terms at ``t``, their OR
    at ``t+1``, the CLK gating at ``t+2`` and the state OR at ``t+3``.
    Returns ``(state, previous_state)``.
    """
    # K is inverted one zone after it arrives and buffered for one more, so
    # J, K and the fed-back state meet in a fresh zone.
    nk = b.INV(k)
    t_min = max(_live(j) + 1, nk.hop + 1, clk.hop - 1)
    t = t_min if t is None else t
    if t < t_min:
        raise ValueError(f"JK stage cannot start before hop {t_min}")
    qp = b.forward(t - 1, f"{tag}state")
    nq = b.INV(qp, t)
    jk = b.OR(b.AND(j, nq, t), b.AND(nk, qp, t), t + 1)
    nclk = b.INV(clk)
    g1 = b.AND(clk, jk, t + 2)
    g0 = b.AND(nclk, qp, t + 2)
    q = b.define(qp, Kind.MAJORITY, [g1, g0, b.fixed(+1)])
    return q, qp


def _cff(b: _Builder, a: Sig, bb: Sig, c1: Sig, c2: Sig, clk: Sig, t: int | None = None,
         tag: str = ""):
    f1 = _xnor(b, a, c2)
    f2 = _mux(b, c1, bb, f1)
    return _jk(b, a, f2, clk, t, tag)


def _cpg(b: _Builder, clk: Sig, c3: Sig, c4: Sig, tag: str = ""):
    base = _live(clk, c3, c4)
    old = b.delay(Sig(clk.node, clk.hop - N_ZONES), base, f"{tag}CLK_old")
    nclk = b.INV(clk, base + 1)
    nold = b.INV(old, base + 1)
    out1 = b.AND(b.AND(nclk, c3, base + 2), old, base + 3)
    out2 = b.AND(b.AND(clk, c4, base + 2), nold, base + 3)
    return out1, out2, b.OR(out1, out2, base + 4)


def _dcc(b: _Builder, clk: Sig, c3: Sig) -> Sig:
    """``C3 ? CLK : CLK_old``; the result at hop ``h`` is the cycle-``c`` mux value."""
    return _mux(b, c3, clk, Sig(clk.node, clk.hop - N_ZONES))


def _qbar(b: _Builder, q: Sig) -> Sig:
    # Same physical node as the loop's inverter.
    return b.INV(q, q.hop + 1)


def build_majority() -> CircuitHandle:
    b = _Builder()
    a, bb, c = b.input("A"), b.input("B"), b.input("C")
    b.output("M", b.gate(Kind.MAJORITY, [a, bb, c], 0))
    return _handle("mv", b, 0)


def build_xnor() -> CircuitHandle:
    """F1 = A.C2 + A'.C2'; a wire when C2 = 1, an inverter when C2 = 0."""
    b = _Builder()
    a, c2 = b.input("A"), b.input("C2")
    b.output("F1", _xnor(b, a, c2))
    return _handle("xnor", b, 3)


def build_mux21() -> CircuitHandle:
    """F2 = B.C1 + F1.C1'."""
    b = _Builder()
    bb, f1, c1 = b.input("B"), b.input("F1"), b.input("C1")
    b.output("F2", _mux(b, c1, bb, f1))
    return _handle("mux21", b, 2)


def build_jk_core() -> CircuitHandle:
    b = _Builder()
    j, k, clk = b.input("J"), b.input("K"), b.input("CLK")
    q, _ = _jk(b, j, k, clk)
    b.output("Q", q, q.hop + 1)
    b.output("Qbar", _qbar(b, q))
    return _handle("jk", b, 6)


def build_cff() -> CircuitHandle:
    """Level-triggered configurable flip-flop: XNOR -> MUX -> JK core.

    (C1, C2) = (0, 0) gives D, (0, 1) gives T, (1, x) gives JK with J = A,
    K = B. Latency is 11 quarter cycles.
    """
    b = _Builder()
    a, bb, c1, c2, clk = (b.input(n) for n in ("A", "B", "C1", "C2", "CLK"))
    q, _ = _cff(b, a, bb, c1, c2, clk)
    b.output("Q", q, q.hop + 1)
    b.output("Qbar", _qbar(b, q))
    return _handle("cff", b, 11)


def build_ram1() -> CircuitHandle:
    """Loop-based 1-bit RAM over a D-configured CFF (C2 tied to 0).

    Decode: the flip-flop clock is Enable, C1 = WriteRead, B = 0 and the data
    input is Input gated by NOT WriteRead. A write (E=1, WR=0) runs the CFF
    as D; a read (E=1, WR=1) runs it as JK with J = K = 0, which holds.
    ``Out`` shows the stored bit during a read and 0 otherwise.
    """
    b = _Builder()
    din, en, wr = b.input("Input"), b.input("Enable"), b.input("WriteRead")
    nwr = b.INV(wr)
    a = b.AND(din, nwr)
    q, _ = _cff(b, a, b.fixed(-1), wr, b.fixed(-1), en)
    rd = b.AND(en, wr)
    b.output("Out", b.AND(q, rd, q.hop + 1))
    return _handle("ram1", b, 13)


def build_cpg() -> CircuitHandle:
    """Clock pulse generator. CLK_old is CLK delayed by four zones (one cycle).

    Out1 = CLK'.C3.CLK_old (falling edge), Out2 = CLK.C4.CLK_old' (rising
    edge), Output = Out1 + Out2.
    """
    b = _Builder()
    clk, c3, c4 = b.input("CLK"), b.input("C3"), b.input("C4")
    out1, out2, out = _cpg(b, clk, c3, c4)
    b.output("Out1", out1)
    b.output("Out2", out2)
    b.output("Output", out)
    return _handle("cpg", b, 8, {"CLK_old": "CLK"})


def build_dcc() -> CircuitHandle:
    """Delay control circuit: Output = CLK when C3 = 1, previous-cycle CLK when C3 = 0."""
    b = _Builder()
    clk, c3 = b.input("CLK"), b.input("C3")
    b.output("Output", _dcc(b, clk, c3))
    return _handle("dcc", b, 6, {"CLK_old": "CLK"})


def _ecff(b: _Builder, a, bb, c1, c2, c3, c4, clk, tag: str = "", t: int | None = None):
    _, _, pulse = _cpg(b, clk, c3, c4, tag)
    return _cff(b, a, bb, c1, c2, pulse, t, tag)


def build_ecff() -> CircuitHandle:
    """Edge-configurable flip-flop: the CPG output clocks a CFF.

    (C3, C4) picks the edge (1,0 falling; 0,1 rising; 1,1 dual; 0,0 never),
    (C1, C2) picks D/T/JK. Latency is 15 quarter cycles, four more than the
    CFF because of the CLK_old tap.
    """
    b = _Builder()
    a, bb, c1, c2, c3, c4, clk = (b.input(n) for n in ("A", "B", "C1", "C2", "C3", "C4", "CLK"))
    q, _ = _ecff(b, a, bb, c1, c2, c3, c4, clk)
    b.output("Q", q, q.hop + 1)
    b.output("Qbar", _qbar(b, q))
    return _handle("ecff", b, 15)


STAGE_SKEW = 8


def counter_latency(n: int) -> int:
    """Designed latency of :func:`build_counter_shift`, in quarter cycles.

    One ECFF is 15. The longest path into each further stage runs once
    around the previous stage's state loop (four hops) on top of the
    eight-hop stage skew, so every extra stage adds 12.
    """
    return 15 + (STAGE_SKEW + N_ZONES) * (n - 1)


def build_counter_shift(n: int) -> CircuitHandle:
    """n-bit edge-configurable counter / shift register.

    Stage 0 is a full ECFF on (A, B, C1, C2). Stage i > 0 is an ECFF with
    C1 = 0 and C2 = mode, so it is D (shift) for mode = 0 and T (count) for
    mode = 1. Its data input is
    ``Q[i-1]_prev AND (NOT mode OR data[i-1])``: the previous stage's
    pre-trigger state when shifting, the carry chain when counting.

    Stage i runs ``8 i`` hops behind stage 0; its clock is CLK passed
    through a delay control circuit (C3 tied to 0, one cycle) plus two
    zones per stage. Outputs Q0..Q{n-1} are re-aligned to the last stage.
    """
    if n < 1:
        raise ValueError("counter needs at least one stage")
    b = _Builder()
    a, bb, c1, c2, c3, c4, clk, mode = (
        b.input(x) for x in ("A", "B", "C1", "C2", "C3", "C4", "CLK", "mode"))
    nmode = b.INV(mode)
    stage_clk = clk
    data = a
    states = []
    for i in range(n):
        skew = STAGE_SKEW * i
        with b.scope(f"s{i}_"):
            if i == 0:
                q, qp = _ecff(b, a, bb, c1, c2, c3, c4, clk, "s0_")
            else:
                dcc = _dcc(b, stage_clk, b.fixed(-1))
                # The DCC output in this frame is last cycle's clock, i.e.
                # this cycle's clock four hops later.
                stage_clk = b.delay(Sig(dcc.node, dcc.hop + N_ZONES), skew)
                prev_q = states[-1][1]
                data = b.AND(prev_q, b.OR(nmode, data))
                data = b.delay(data, skew)
                q, qp = _ecff(b, data, bb, b.fixed(-1), mode, c3, c4, stage_clk,
                              f"s{i}_", t=skew + 7)
        states.append((q, qp))
    last = states[-1][0].hop + 1
    for i, (q, _) in enumerate(states):
        b.output(f"Q{i}", q, last)
    return _handle(f"counter_shift:{n}", b, counter_latency(n))


CATALOG: dict[str, Callable[[], CircuitHandle]] = {
    "mv": build_majority,
    "xnor": build_xnor,
    "mux21": build_mux21,
    "jk": build_jk_core,
    "cff": build_cff,
    "ram1": build_ram1,
    "cpg": build_cpg,
    "dcc": build_dcc,
    "ecff": build_ecff,
}


def build(name: str, n: int | None = None) -> CircuitHandle:
    """Build a catalog circuit by name; ``counter_shift:<n>`` or ``n=`` for counters."""
    if name.startswith("counter_shift"):
        _, _, arg = name.partition(":")
        if arg:
            n = int(arg)
        if n is None:
            raise ValueError("counter_shift needs a stage count")
        return build_counter_shift(n)
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown circuit {name!r}; known: "
                       f"{', '.join([*CATALOG, 'counter_shift:<n>'])}") from None
