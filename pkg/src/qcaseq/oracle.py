"""Reference models and the verification harness.

The reference functions here are written directly from the boolean
definitions of each design and share no code with the simulators. The
harness drives a :class:`~qcaseq.circuits.CircuitHandle` through the
behavioral engine and compares its outputs with a reference, cycle by cycle.

Timing convention: every builder output ``o`` carries the result for the
inputs of clock cycle ``k`` at tick ``4k + output_hops[o]``. Sequential
references produce one expected value per cycle on the same index.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
import random
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field

from .behavioral import simulate
from .circuits import CircuitHandle, build
from .core import X, Stimuli, level_char

Point = Mapping[str, int]


class FlipFlopKind(enum.Enum):
    D = "D"
    T = "T"
    JK = "JK"

    @classmethod
    def from_controls(cls, c1: int, c2: int) -> FlipFlopKind:
        if c1:
            return cls.JK
        return cls.T if c2 else cls.D


class EdgeMode(enum.Enum):
    FALLING = "falling"
    RISING = "rising"
    DUAL = "dual"
    NONE = "none"

    @classmethod
    def from_controls(cls, c3: int, c4: int) -> EdgeMode:
        return {(1, 0): cls.FALLING, (0, 1): cls.RISING,
                (1, 1): cls.DUAL, (0, 0): cls.NONE}[(c3, c4)]

    @property
    def controls(self) -> tuple[int, int]:
        return {EdgeMode.FALLING: (1, 0), EdgeMode.RISING: (0, 1),
                EdgeMode.DUAL: (1, 1), EdgeMode.NONE: (0, 0)}[self]


KIND_CONTROLS = {FlipFlopKind.D: (0, 0), FlipFlopKind.T: (0, 1), FlipFlopKind.JK: (1, 0)}


def _bits(*vals: int) -> None:
    for v in vals:
        if v not in (0, 1):
            raise ValueError(f"expected a bit, got {v!r}")


def eval_cff_equation(A: int, B: int, C1: int, C2: int, CLK: int, Qt: int) -> int:
    """Next state of the level-triggered configurable flip-flop, sum of products."""
    _bits(A, B, C1, C2, CLK, Qt)
    n = lambda v: 1 - v  # noqa: E731
    reset = (B & C1) | (A & C2 & n(C1)) | (n(A) & n(C1) & n(C2))
    return ((A & n(Qt)) | (n(reset) & Qt)) & CLK | (n(CLK) & Qt)


def ff_next(kind: FlipFlopKind, in1: int, in2: int, Qt: int) -> int:
    _bits(in1, in2, Qt)
    if kind is FlipFlopKind.D:
        return in1
    if kind is FlipFlopKind.T:
        return in1 ^ Qt
    return (in1 & (1 - Qt)) | ((1 - in2) & Qt)


def cpg_reference(C3: int, C4: int, CLK_old: int, CLK: int) -> tuple[int, int, int]:
    _bits(C3, C4, CLK_old, CLK)
    out1 = (1 - CLK) & C3 & CLK_old
    out2 = CLK & C4 & (1 - CLK_old)
    return out1, out2, out1 | out2


def dcc_reference(C3: int, delayed: int, current: int) -> int:
    _bits(C3, delayed, current)
    return current if C3 else delayed


def edge_extract(clk: Sequence[int], mode: EdgeMode) -> list[int]:
    """Per-index trigger flags; index 0 never triggers."""
    if not clk:
        raise ValueError("empty clock sequence")
    want = {EdgeMode.FALLING: {(1, 0)}, EdgeMode.RISING: {(0, 1)},
            EdgeMode.DUAL: {(1, 0), (0, 1)}, EdgeMode.NONE: set()}[mode]
    return [0] + [int((a, b) in want) for a, b in zip(clk, clk[1:])]


def trigger_indices(triggers: Sequence[int]) -> set[int]:
    return {i for i, t in enumerate(triggers) if t}


def _lift(f: Callable[..., int], *args: int) -> int:
    """Evaluate a boolean function over arguments that may be X."""
    unknown = [i for i, a in enumerate(args) if a == X]
    if not unknown:
        return f(*args)
    results = set()
    for fill in itertools.product((0, 1), repeat=len(unknown)):
        trial = list(args)
        for i, v in zip(unknown, fill):
            trial[i] = v
        results.add(f(*trial))
    return results.pop() if len(results) == 1 else X


def _triggered(trig: int, nxt: int, q: int) -> int:
    return _lift(lambda t, a, b: a if t else b, trig, nxt, q)


def _cycles(stimuli: Stimuli) -> list[dict[str, int]]:
    names = list(stimuli.values)
    return [{k: stimuli.values[k][i] for k in names} for i in range(stimuli.n_cycles)]


def _kind(row: Point) -> FlipFlopKind:
    return FlipFlopKind.from_controls(row["C1"], row["C2"])


def _cff_level(stimuli: Stimuli, init: int) -> dict[str, list[int]]:
    q, out = init, []
    for r in _cycles(stimuli):
        nxt = _lift(lambda s: ff_next(_kind(r), r["A"], r["B"], s), q)
        q = _triggered(r["CLK"], nxt, q)
        out.append(q)
    return {"Q": out, "Qbar": [_lift(lambda v: 1 - v, v) for v in out]}


def _jk_level(stimuli: Stimuli, init: int) -> dict[str, list[int]]:
    q, out = init, []
    for r in _cycles(stimuli):
        nxt = _lift(lambda s: ff_next(FlipFlopKind.JK, r["J"], r["K"], s), q)
        q = _triggered(r["CLK"], nxt, q)
        out.append(q)
    return {"Q": out, "Qbar": [_lift(lambda v: 1 - v, v) for v in out]}


def _pulses(rows: list[dict[str, int]]) -> list[int]:
    prev = X
    out = []
    for r in rows:
        out.append(_lift(lambda old: cpg_reference(r["C3"], r["C4"], old, r["CLK"])[2], prev))
        prev = r["CLK"]
    return out


def _ecff(stimuli: Stimuli, init: int) -> dict[str, list[int]]:
    rows = _cycles(stimuli)
    q, out = init, []
    for r, trig in zip(rows, _pulses(rows)):
        nxt = _lift(lambda s: ff_next(_kind(r), r["A"], r["B"], s), q)
        q = _triggered(trig, nxt, q)
        out.append(q)
    return {"Q": out, "Qbar": [_lift(lambda v: 1 - v, v) for v in out]}


def _ram1(stimuli: Stimuli, init: int) -> dict[str, list[int]]:
    q, out = init, []
    for r in _cycles(stimuli):
        if r["Enable"] and not r["WriteRead"]:
            q = r["Input"]
        out.append(q if r["Enable"] and r["WriteRead"] else 0)
    return {"Out": out}


def _counter_shift(n: int, force_mode: int | None = None):
    def ref(stimuli: Stimuli, init: int) -> dict[str, list[int]]:
        rows = _cycles(stimuli)
        qs = [init] * n
        out: list[list[int]] = [[] for _ in range(n)]
        for r, trig in zip(rows, _pulses(rows)):
            mode = r["mode"] if force_mode is None else force_mode
            old = list(qs)
            data = r["A"]
            for i in range(n):
                if i == 0:
                    nxt = _lift(lambda s: ff_next(_kind(r), r["A"], r["B"], s), old[0])
                else:
                    data = _lift(lambda p, d: p & ((1 - mode) | d), old[i - 1], data)
                    kind = FlipFlopKind.T if mode else FlipFlopKind.D
                    nxt = _lift(lambda d, s: ff_next(kind, d, 0, s), data, old[i])
                qs[i] = _triggered(trig, nxt, old[i])
                out[i].append(qs[i])
        return {f"Q{i}": out[i] for i in range(n)}
    return ref


def sequential_reference(kind: str, stimuli: Stimuli, init: int = X) -> dict[str, list[int]]:
    """Expected outputs, one value per clock cycle, from a small automaton.

    ``kind`` is one of ``cff``, ``jk``, ``ecff``, ``ram1``,
    ``counter_shift:<n>`` (mode taken from the stimuli), ``counter:<n>``
    or ``shiftreg:<n>`` (mode forced). The automata read the same named
    inputs as the corresponding builders; ``init`` is the starting state.
    """
    name, _, arg = kind.partition(":")
    simple = {"cff": _cff_level, "jk": _jk_level, "ecff": _ecff, "ram1": _ram1}
    if name in simple:
        return simple[name](stimuli, init)
    force = {"counter_shift": None, "counter": 1, "shiftreg": 0}
    if name in force and arg:
        return _counter_shift(int(arg), force[name])(stimuli, init)
    raise ValueError(f"no sequential reference for {kind!r}")


@dataclass
class Check:
    name: str
    stimuli: dict
    expected: dict
    observed: dict
    passed: bool


@dataclass
class VerificationReport:
    title: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def n_pass(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def n_fail(self) -> int:
        return len(self.checks) - self.n_pass

    @property
    def ok(self) -> bool:
        return self.n_fail == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.title}: {self.n_pass}/{len(self.checks)} pass [{status}]"

    def extend(self, other: VerificationReport) -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    def to_text(self, max_failures: int = 10) -> str:
        lines = [self.summary()]
        for c in self.failures()[:max_failures]:
            lines.append(f"  MISMATCH {c.name}: expected {_fmt(c.expected)} "
                         f"observed {_fmt(c.observed)}  stimuli {_fmt(c.stimuli)}")
        if self.n_fail > max_failures:
            lines.append(f"  ... {self.n_fail - max_failures} more mismatches")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "title": self.title,
            "summary": {"total": len(self.checks), "pass": self.n_pass, "fail": self.n_fail},
            "checks": [asdict(c) for c in self.checks],
            "notes": self.notes,
        }, indent=1)


def _fmt(d: Mapping) -> str:
    parts = []
    for k, v in d.items():
        if isinstance(v, list):
            v = "".join(level_char(x) for x in v)
        elif isinstance(v, int):
            v = level_char(v)
        parts.append(f"{k}={v}")
    return " ".join(parts)


def _warmup_cycles(circuit: CircuitHandle) -> int:
    return math.ceil((circuit.declared_latency + 4) / 4)


def _run(circuit: CircuitHandle, stimuli: Stimuli, init_zero: bool = False):
    """Simulate long enough to read every output of the last stimulus cycle."""
    extra = math.ceil(max(circuit.output_hops.values()) / 4) + 1
    n = stimuli.n_cycles + extra
    trace = simulate(circuit.netlist, stimuli.padded(n), n, init_zero=init_zero)

    def read(out: str, k: int) -> int:
        return trace.at(out, 4 * k + circuit.output_hops[out])
    return trace, read


def _match(expected: int, observed: int) -> bool:
    return expected == X or expected == observed


def _point_stimuli(circuit: CircuitHandle, point: Point, hold: int) -> Stimuli:
    """Hold the point for ``hold`` cycles; a tapped input shows its tap value
    before the final cycle and its own value in it."""
    vals = {}
    for name in circuit.inputs:
        taps = [t for t, src in circuit.taps.items() if src == name and t in point]
        before = point[taps[0]] if taps else point[name]
        vals[name] = [before] * hold + [point[name]]
    return Stimuli(vals)


def verify_truth_table(circuit: CircuitHandle, ref: Callable[[Point], Mapping[str, int]],
                       domain: Iterable[Point], title: str | None = None) -> VerificationReport:
    """Drive every domain point to steady state and compare with ``ref``.

    ``ref`` maps a point to expected values for some or all outputs. Inputs
    named in ``circuit.taps`` give the previous-cycle value of their source.
    """
    rep = VerificationReport(title or f"truth table {circuit.name}")
    hold = _warmup_cycles(circuit) + 1
    for point in domain:
        point = dict(point)
        _, read = _run(circuit, _point_stimuli(circuit, point, hold))
        expected = dict(ref(point))
        observed = {o: read(o, hold) for o in expected}
        passed = all(_match(expected[o], observed[o]) for o in expected)
        if not circuit.taps:
            before = {o: read(o, hold - 1) for o in expected}
            if before != observed:
                passed = False
                rep.notes.append(f"non-quiescent at {_fmt(point)}")
        rep.checks.append(Check(_fmt(point), point, expected, observed, passed))
    return rep


def verify_sequence(circuit: CircuitHandle, stimuli: Stimuli,
                    ref: str | Callable[[Stimuli], Mapping[str, Sequence[int]]],
                    init_zero: bool = False, title: str | None = None) -> VerificationReport:
    """Compare the simulated outputs with a reference, cycle by cycle.

    Cycles whose output tick falls inside the warm-up window
    (declared latency + 4 ticks) are skipped; X in the reference is a
    don't-care, X in the simulation against a defined value is a mismatch.
    """
    if callable(ref):
        expected = ref(stimuli)
        label = getattr(ref, "__name__", "reference")
    else:
        expected = sequential_reference(ref, stimuli, 0 if init_zero else X)
        label = ref
    for name, seq in expected.items():
        if name not in circuit.outputs:
            raise ValueError(f"reference output {name} is not an output of {circuit.name}")
        if len(seq) != stimuli.n_cycles:
            raise ValueError(f"reference {name} has {len(seq)} cycles, stimuli {stimuli.n_cycles}")
    rep = VerificationReport(title or f"sequence {circuit.name} vs {label}")
    _, read = _run(circuit, stimuli, init_zero)
    limit = circuit.declared_latency + 4
    for k in range(stimuli.n_cycles):
        outs = [o for o in expected if 4 * k + circuit.output_hops[o] >= limit]
        if not outs:
            continue
        exp = {o: expected[o][k] for o in outs}
        obs = {o: read(o, k) for o in outs}
        ok = all(_match(exp[o], obs[o]) for o in outs)
        stim = {n: v[k] for n, v in stimuli.values.items()}
        rep.checks.append(Check(f"cycle {k}", stim, exp, obs, ok))
    return rep


def observe(circuit: CircuitHandle, stimuli: Stimuli, init_zero: bool = False
            ) -> dict[str, list[int]]:
    """Simulated outputs, one value per stimulus cycle, on the frame index."""
    _, read = _run(circuit, stimuli, init_zero)
    return {o: [read(o, k) for k in range(stimuli.n_cycles)] for o in circuit.outputs}


# Published truth tables, transcribed as (inputs..., outputs...).

TABLE2 = [  # A, B, C1, C2, CLK, Q
    (0, 0, 0, 0, 1, 0), (0, 0, 0, 1, 1, 0), (0, 0, 1, 0, 1, 0), (0, 0, 1, 1, 1, 0),
    (0, 1, 0, 0, 1, 0), (0, 1, 0, 1, 1, 0), (0, 1, 1, 0, 1, 0), (0, 1, 1, 1, 1, 0),
    (1, 0, 0, 0, 1, 1), (1, 0, 0, 1, 1, 0), (1, 0, 1, 0, 1, 1), (1, 0, 1, 1, 1, 1),
    (1, 1, 0, 0, 1, 1), (1, 1, 0, 1, 1, 0), (1, 1, 1, 0, 1, 1), (1, 1, 1, 1, 1, 0),
]

TABLE4 = [  # C3, C4, CLK_old, CLK, Out1, Out2, Output
    (1, 0, 0, 0, 0, 0, 0), (1, 0, 0, 1, 0, 0, 0), (1, 0, 1, 0, 1, 0, 1), (1, 0, 1, 1, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0), (0, 1, 0, 1, 0, 1, 1), (0, 1, 1, 0, 0, 0, 0), (0, 1, 1, 1, 0, 0, 0),
    (1, 1, 0, 0, 0, 0, 0), (1, 1, 0, 1, 0, 1, 1), (1, 1, 1, 0, 1, 0, 1), (1, 1, 1, 1, 0, 0, 0),
]

TABLE5 = [  # C3, delayed, current, Output
    (0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1), (0, 1, 1, 1),
    (1, 0, 0, 0), (1, 0, 1, 1), (1, 1, 0, 0), (1, 1, 1, 1),
]


def _all_points(names: Sequence[str]) -> list[dict[str, int]]:
    return [dict(zip(names, bits)) for bits in itertools.product((0, 1), repeat=len(names))]


def _cpg_ref(p: Point) -> dict[str, int]:
    return dict(zip(("Out1", "Out2", "Output"), cpg_reference(p["C3"], p["C4"], p["CLK_old"], p["CLK"])))


def _xnor_ref(p: Point) -> dict[str, int]:
    return {"F1": int(p["A"] == p["C2"])}


def _mux_ref(p: Point) -> dict[str, int]:
    return {"F2": p["B"] if p["C1"] else p["F1"]}


def _mv_ref(p: Point) -> dict[str, int]:
    return {"M": int(p["A"] + p["B"] + p["C"] >= 2)}


def _dcc_ref(p: Point) -> dict[str, int]:
    return {"Output": dcc_reference(p["C3"], p["CLK_old"], p["CLK"])}


TRUTH_TABLES: dict[str, tuple[Callable[[Point], Mapping[str, int]], list[dict[str, int]]]] = {
    "mv": (_mv_ref, _all_points(("A", "B", "C"))),
    "xnor": (_xnor_ref, _all_points(("A", "C2"))),
    "mux21": (_mux_ref, _all_points(("B", "F1", "C1"))),
    "cpg": (_cpg_ref, _all_points(("C3", "C4", "CLK_old", "CLK"))),
    "dcc": (_dcc_ref, _all_points(("C3", "CLK_old", "CLK"))),
}


def verify_table4(circuit: CircuitHandle | None = None) -> VerificationReport:
    circuit = circuit or build("cpg")
    rows = {r[:4]: r[4:] for r in TABLE4}

    def ref(p: Point) -> dict[str, int]:
        return dict(zip(("Out1", "Out2", "Output"), rows[(p["C3"], p["C4"], p["CLK_old"], p["CLK"])]))
    domain = [dict(zip(("C3", "C4", "CLK_old", "CLK"), r[:4])) for r in TABLE4]
    return verify_truth_table(circuit, ref, domain, "CPG vs published operation table")


def verify_table5(circuit: CircuitHandle | None = None) -> VerificationReport:
    circuit = circuit or build("dcc")
    rows = {r[:3]: r[3] for r in TABLE5}

    def ref(p: Point) -> dict[str, int]:
        return {"Output": rows[(p["C3"], p["CLK_old"], p["CLK"])]}
    domain = [dict(zip(("C3", "CLK_old", "CLK"), r[:3])) for r in TABLE5]
    return verify_truth_table(circuit, ref, domain, "DCC vs published operation table")


def is_race(A: int, B: int, C1: int, C2: int, CLK: int) -> bool:
    """CLK high with J = K = 1: the level-triggered loop toggles every cycle."""
    k = B if C1 else int(A == C2)
    return bool(CLK and A and k)


RESET = {"A": 0, "B": 1, "C1": 1, "C2": 0}  # JK with J=0, K=1 clears even an unknown state


def cff_point_stimuli(A: int, B: int, C1: int, C2: int, CLK: int, Qt: int,
                      hold: int = 4) -> Stimuli:
    """Clear, load ``Qt``, idle one cycle with CLK low, then apply the point.

    The point's response appears on cycle 3 onward.
    """
    rows = [dict(RESET, CLK=1)]
    rows.append({"A": Qt, "B": 0, "C1": 0, "C2": 0, "CLK": 1})
    rows.append({"A": A, "B": B, "C1": C1, "C2": C2, "CLK": 0})
    rows += [{"A": A, "B": B, "C1": C1, "C2": C2, "CLK": CLK}] * hold
    return Stimuli.from_rows(rows)


def verify_cff_equation(circuit: CircuitHandle | None = None) -> VerificationReport:
    """All 64 (A, B, C1, C2, CLK, Qt) points against the next-state equation.

    Race-around points are checked separately: Q must alternate every cycle.
    """
    circuit = circuit or build("cff")
    rep = VerificationReport("CFF vs next-state equation")
    for A, B, C1, C2, CLK, Qt in itertools.product((0, 1), repeat=6):
        point = {"A": A, "B": B, "C1": C1, "C2": C2, "CLK": CLK, "Qt": Qt}
        q = observe(circuit, cff_point_stimuli(A, B, C1, C2, CLK, Qt))["Q"]
        start = q[2]
        resp = q[3:7]
        exp = eval_cff_equation(A, B, C1, C2, CLK, Qt)
        if is_race(A, B, C1, C2, CLK):
            alt = [exp, 1 - exp] * 2
            rep.checks.append(Check(f"race-around {_fmt(point)}", point,
                                    {"Q": alt}, {"Q": resp}, start == Qt and resp == alt))
        else:
            rep.checks.append(Check(_fmt(point), point, {"Q": exp}, {"Q": resp[0]},
                                    start == Qt and resp == [exp] * 4))
    return rep


def table2_report() -> list[dict]:
    """Published CFF truth-table rows beside the equation under Qt = 0 and Qt = 1."""
    rows = []
    for A, B, C1, C2, CLK, Q in TABLE2:
        q0 = eval_cff_equation(A, B, C1, C2, CLK, 0)
        q1 = eval_cff_equation(A, B, C1, C2, CLK, 1)
        rows.append({"A": A, "B": B, "C1": C1, "C2": C2, "CLK": CLK, "published": Q,
                     "mode": FlipFlopKind.from_controls(C1, C2).value,
                     "Qt=0": q0, "Qt=1": q1, "agrees_Qt0": q0 == Q, "agrees_Qt1": q1 == Q})
    return rows


def table2_text() -> str:
    rows = table2_report()
    lines = ["A B C1 C2 CLK | pub | Qt=0 Qt=1 | mode"]
    for r in rows:
        lines.append(f"{r['A']} {r['B']} {r['C1']}  {r['C2']}  {r['CLK']}  |  {r['published']}  |"
                     f"  {r['Qt=0']}{' ' if r['agrees_Qt0'] else '*'}   {r['Qt=1']}"
                     f"{' ' if r['agrees_Qt1'] else '*'}  | {r['mode']}")
    a0 = sum(r["agrees_Qt0"] for r in rows)
    a1 = sum(r["agrees_Qt1"] for r in rows)
    lines.append(f"agreement: {a0}/16 with Qt=0, {a1}/16 with Qt=1 (* marks disagreement)")
    return "\n".join(lines)


# Randomized stimulus generators. Each starts with a preamble that brings
# the state loops out of X; the reference automata see the same cycles.

def _bit(rng: random.Random) -> int:
    return rng.randint(0, 1)


def cff_random(rng: random.Random, kind: FlipFlopKind, n_cycles: int = 64) -> Stimuli:
    c1, c2 = KIND_CONTROLS[kind]
    rows = [dict(RESET, CLK=1)]
    for _ in range(n_cycles - 1):
        a, b, clk = _bit(rng), _bit(rng), _bit(rng)
        if kind is FlipFlopKind.T or (kind is FlipFlopKind.JK and b):
            # Keep clear of the race-around class (CLK high with J = K = 1).
            clk = clk and not a
        rows.append({"A": a, "B": b, "C1": c1, "C2": c2, "CLK": int(clk)})
    return Stimuli.from_rows(rows)


def jk_drive(stimuli: Stimuli) -> Stimuli:
    """The J/K/CLK waveform a CFF presents to its JK core: J = A, K = F2."""
    rows = []
    for r in _cycles(stimuli):
        f2 = r["B"] if r["C1"] else int(r["A"] == r["C2"])
        rows.append({"J": r["A"], "K": f2, "CLK": r["CLK"]})
    return Stimuli.from_rows(rows)


def random_clock(rng: random.Random, n: int, min_hold: int = 1, start: int | None = None
                 ) -> list[int]:
    """Random clock whose levels last at least ``min_hold`` cycles."""
    level = _bit(rng) if start is None else start
    out: list[int] = []
    while len(out) < n:
        out += [level] * (min_hold + rng.randint(0, 2))
        level ^= 1
    return out[:n]


def _ecff_preamble() -> list[dict[str, int]]:
    return [dict(RESET, C3=1, C4=1, CLK=0), dict(RESET, C3=1, C4=1, CLK=1)]


def ecff_random(rng: random.Random, kind: FlipFlopKind, edge: EdgeMode,
                n_cycles: int = 64) -> Stimuli:
    c1, c2 = KIND_CONTROLS[kind]
    c3, c4 = edge.controls
    rows = _ecff_preamble()
    clk = random_clock(rng, n_cycles - len(rows), start=1)
    for level in clk:
        rows.append({"A": _bit(rng), "B": _bit(rng), "C1": c1, "C2": c2,
                     "C3": c3, "C4": c4, "CLK": level})
    return Stimuli.from_rows(rows)


def ram_random(rng: random.Random, n_ops: int = 32) -> Stimuli:
    """Random write/hold/read script, one operation per cycle, after a write of 0."""
    rows = [{"Input": 0, "Enable": 1, "WriteRead": 0}]
    for _ in range(n_ops):
        op = rng.choice(("write", "read", "hold"))
        if op == "write":
            rows.append({"Input": _bit(rng), "Enable": 1, "WriteRead": 0})
        elif op == "read":
            rows.append({"Input": _bit(rng), "Enable": 1, "WriteRead": 1})
        else:
            rows.append({"Input": _bit(rng), "Enable": 0, "WriteRead": _bit(rng)})
    return Stimuli.from_rows(rows)


def counter_preamble(n: int) -> list[dict[str, int]]:
    """Shift zeros through every stage: stage 0 clears, the rest load zeros."""
    rows = []
    for k in range(n + 2):
        rows.append(dict(RESET, C3=1, C4=1, mode=0, CLK=k % 2))
    return rows


def counter_random(rng: random.Random, n: int, mode: int, edge: EdgeMode,
                   n_cycles: int = 64, serial: Sequence[int] | None = None) -> Stimuli:
    """Counter (mode 1, stage 0 in T with A = 1) or shift register (mode 0,
    stage 0 in D with A the serial input) on a random clock."""
    c3, c4 = edge.controls
    rows = counter_preamble(n)
    clk = random_clock(rng, n_cycles - len(rows), start=rows[-1]["CLK"])
    for i, level in enumerate(clk):
        a = 1 if mode else (serial[i] if serial is not None else _bit(rng))
        rows.append({"A": a, "B": _bit(rng), "C1": 0, "C2": mode, "C3": c3, "C4": c4,
                     "mode": mode, "CLK": level})
    return Stimuli.from_rows(rows)


def triggered_states(circuit: CircuitHandle, stimuli: Stimuli, start: int = 0
                     ) -> tuple[list[int], dict[str, list[int]]]:
    """Output values sampled just before each trigger from cycle ``start`` on.

    Triggers come from the stimuli's own clock and edge controls.
    """
    rows = _cycles(stimuli)
    trig = _pulses(rows)
    obs = observe(circuit, stimuli)
    idx = [k for k in range(max(start, 1), len(rows)) if trig[k] == 1]
    return idx, {o: [obs[o][k - 1] for k in idx] for o in obs}


def run_random_suite(name: str, runs: int, seed: int, n: int = 2) -> VerificationReport:
    """Randomized sequential verification for one catalog circuit."""
    rng = random.Random(seed)
    rep = VerificationReport(f"random runs {name} (seed {seed}, {runs} runs)")
    if name in ("cff", "jk"):
        cff = build("cff")
        jk = build("jk")
        for kind in FlipFlopKind:
            for _ in range(runs):
                s = cff_random(rng, kind)
                rep.extend(verify_sequence(cff, s, "cff"))
                rep.extend(verify_sequence(jk, jk_drive(s), "jk"))
    elif name == "ecff":
        h = build("ecff")
        for kind in FlipFlopKind:
            for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
                for _ in range(runs):
                    rep.extend(verify_sequence(h, ecff_random(rng, kind, edge), "ecff"))
    elif name == "ram1":
        h = build("ram1")
        for _ in range(runs):
            rep.extend(verify_sequence(h, ram_random(rng), "ram1"))
    elif name.startswith("counter_shift"):
        _, _, arg = name.partition(":")
        n = int(arg) if arg else n
        h = build("counter_shift", n)
        for mode in (0, 1):
            for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL):
                for _ in range(runs):
                    rep.extend(verify_sequence(h, counter_random(rng, n, mode, edge),
                                               f"counter_shift:{n}"))
    elif name in TRUTH_TABLES:
        ref, domain = TRUTH_TABLES[name]
        rep.extend(verify_truth_table(build(name), ref, domain))
    else:
        raise KeyError(f"no random suite for {name!r}")
    return rep
