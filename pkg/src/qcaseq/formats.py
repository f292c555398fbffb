"""Text formats: netlists, cell layouts, stimuli and waveforms.

Netlist grammar (one statement per line, ``#`` starts a comment, keywords
are case-insensitive, names are ``[A-Za-z0-9_]+``)::

    input <name> @<zone>
    fixed <name> <+1|-1>
    <name> = MV(<a>,<b>,<c>) @<zone>
    <name> = INV(<a>) @<zone>
    <name> = BUF(<a>) @<zone>
    output <name> = <a> [@<zone>]

An output without a zone takes its driver's zone. Names may be used before
they are defined, which is how feedback loops are written.

Layout grammar, one cell per line::

    <x> <y> <90|45> <normal|fixed|input:<name>|output:<name>> <zone> [<polarization>]

Stimuli: a header row of input names, then one whitespace-separated row of
0/1 values per clock cycle.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

from vcd import VCDWriter
from vcd.reader import TokenKind, tokenize

from .cells import Cell, CellLayout, Geometry, Orientation, Role
from .core import X, GateNetlist, GateNode, Kind, Stimuli, Trace, level_char, validate_netlist


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + where)


NAME = r"[A-Za-z0-9_]+"
_ZONE = r"@\s*(?P<zone>\S+)"
_RULES = [
    ("input", re.compile(rf"input\s+(?P<name>{NAME})\s*{_ZONE}$", re.I)),
    ("fixed", re.compile(rf"fixed\s+(?P<name>{NAME})\s+(?P<pol>\S+)$", re.I)),
    ("output", re.compile(rf"output\s+(?P<name>{NAME})\s*=\s*(?P<src>{NAME})\s*(?:{_ZONE})?$", re.I)),
    ("gate", re.compile(
        rf"(?P<name>{NAME})\s*=\s*(?P<op>MV|INV|BUF)\s*\((?P<args>[^)]*)\)\s*{_ZONE}$", re.I)),
]
_OPS = {"MV": Kind.MAJORITY, "INV": Kind.INVERTER, "BUF": Kind.BUFFER}


def _zone(text: str, line: int, col: int) -> int:
    if text not in ("0", "1", "2", "3"):
        raise ParseError(f"zone must be 0-3, got {text!r}", line, col)
    return int(text)


def parse_netlist(text: str, validate: bool = True) -> GateNetlist:
    """Parse netlist text; raises :class:`ParseError` with a line/column."""
    nodes: dict[str, GateNode] = {}
    where: dict[str, int] = {}
    refs: list[tuple[str, int, int]] = []
    inputs, outputs = [], []
    pending_outputs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip()) + 1
        for kind, rx in _RULES:
            m = rx.match(stripped)
            if m:
                break
        else:
            raise ParseError(f"syntax error: {stripped!r}", lineno, indent)
        name = m["name"]
        if name in nodes:
            raise ParseError(f"duplicate definition of {name} (first at line {where[name]})",
                             lineno, indent + m.start("name"))
        zone_col = indent + (m.start("zone") if m.groupdict().get("zone") else 0)
        if kind == "input":
            node = GateNode(name, Kind.INPUT, _zone(m["zone"], lineno, zone_col))
            inputs.append(name)
        elif kind == "fixed":
            if m["pol"] not in ("+1", "-1", "1"):
                raise ParseError(f"fixed polarization must be +1 or -1, got {m['pol']!r}",
                                 lineno, indent + m.start("pol"))
            node = GateNode(name, Kind.FIXED, None, (), -1 if m["pol"] == "-1" else 1)
        elif kind == "output":
            zone = _zone(m["zone"], lineno, zone_col) if m["zone"] else None
            node = GateNode(name, Kind.OUTPUT, zone, (m["src"],))
            if zone is None:
                pending_outputs[name] = m["src"]
            refs.append((m["src"], lineno, indent + m.start("src")))
            outputs.append(name)
        else:
            args = [a.strip() for a in m["args"].split(",")]
            op = _OPS[m["op"].upper()]
            want = 3 if op is Kind.MAJORITY else 1
            if len(args) != want or not all(re.fullmatch(NAME, a) for a in args):
                raise ParseError(f"{m['op'].upper()} takes {want} name argument(s)",
                                 lineno, indent + m.start("args"))
            node = GateNode(name, op, _zone(m["zone"], lineno, zone_col), tuple(args))
            refs += [(a, lineno, indent + m.start("args")) for a in args]
        nodes[name] = node
        where[name] = lineno
    for ref, lineno, col in refs:
        if ref not in nodes:
            raise ParseError(f"undefined reference {ref}", lineno, col)
    for name, src in pending_outputs.items():
        zone = nodes[src].zone
        nodes[name] = GateNode(name, Kind.OUTPUT, 0 if zone is None else zone, (src,))
    net = GateNetlist(tuple(nodes.values()), tuple(inputs), tuple(outputs))
    if validate:
        rep = validate_netlist(net)
        if not rep.ok:
            v = rep.violations[0]
            lineno = where.get(v.nodes[-1]) if v.nodes else None
            raise ParseError(f"invalid netlist: {v.kind}: {v.message}", lineno)
    return net


def render_netlist(netlist: GateNetlist) -> str:
    lines = []
    for n in netlist.nodes:
        if n.kind is Kind.INPUT:
            lines.append(f"input {n.name} @{n.zone}")
        elif n.kind is Kind.FIXED:
            lines.append(f"fixed {n.name} {'+1' if n.polarization > 0 else '-1'}")
        elif n.kind is Kind.OUTPUT:
            src = netlist.by_name[n.fanins[0]]
            suffix = "" if src.zone == n.zone else f" @{n.zone}"
            lines.append(f"output {n.name} = {n.fanins[0]}{suffix}")
        else:
            lines.append(f"{n.name} = {n.kind.value}({','.join(n.fanins)}) @{n.zone}")
    return "\n".join(lines) + "\n"


def parse_layout(text: str, geometry: Geometry = Geometry()) -> CellLayout:
    cells = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) not in (5, 6):
            raise ParseError("expected: x y orientation role zone [polarization]", lineno)
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("cell coordinates must be integers", lineno) from None
        if parts[2] not in ("90", "45"):
            raise ParseError(f"orientation must be 90 or 45, got {parts[2]!r}", lineno)
        role_text, _, name = parts[3].partition(":")
        try:
            role = Role(role_text.lower())
        except ValueError:
            raise ParseError(f"unknown role {parts[3]!r}", lineno) from None
        if role in (Role.INPUT, Role.OUTPUT) and not re.fullmatch(NAME, name):
            raise ParseError(f"{role.value} cells need a name, as {role.value}:<name>", lineno)
        zone = _zone(parts[4], lineno, None)
        pol = None
        if len(parts) == 6:
            try:
                pol = float(parts[5])
            except ValueError:
                raise ParseError(f"bad polarization {parts[5]!r}", lineno) from None
        if role is Role.FIXED and pol not in (-1.0, 1.0):
            raise ParseError("fixed cells need polarization +1 or -1", lineno)
        cells.append(Cell(x, y, zone, role, Orientation(parts[2]), name or None, pol))
    try:
        return CellLayout(tuple(cells), geometry)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def render_layout(layout: CellLayout) -> str:
    lines = ["# x y orientation role zone [polarization]"]
    for c in layout.cells:
        role = c.role.value + (f":{c.name}" if c.role in (Role.INPUT, Role.OUTPUT) else "")
        pol = f" {c.polarization:+g}" if c.polarization is not None else ""
        lines.append(f"{c.x} {c.y} {c.orientation.value} {role} {c.zone}{pol}")
    return "\n".join(lines) + "\n"


def parse_stimuli(text: str) -> Stimuli:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    numbered = [(i, r) for i, r in enumerate(rows, 1) if r]
    if not numbered:
        raise ParseError("empty stimuli")
    (_, header), body = numbered[0], numbered[1:]
    for name in header:
        if not re.fullmatch(NAME, name):
            raise ParseError(f"bad signal name {name!r}", numbered[0][0])
    values: dict[str, list[int]] = {h: [] for h in header}
    for lineno, r in body:
        if len(r) != len(header):
            raise ParseError(f"expected {len(header)} values, got {len(r)}", lineno)
        for h, v in zip(header, r):
            if v not in ("0", "1"):
                raise ParseError(f"stimulus values must be 0 or 1, got {v!r}", lineno)
            values[h].append(int(v))
    return Stimuli(values)


def render_stimuli(stimuli: Stimuli) -> str:
    names = list(stimuli.values)
    lines = [" ".join(names)]
    for k in range(stimuli.n_cycles):
        lines.append(" ".join(str(stimuli.values[n][k]) for n in names))
    return "\n".join(lines) + "\n"


def trace_to_csv(trace: Trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(trace.signals)
    w.writerow(["tick", *names])
    for t in range(trace.n_ticks):
        w.writerow([t, *(level_char(trace.signals[n][t]) for n in names)])
    return buf.getvalue()


def trace_from_csv(text: str) -> Trace:
    rows = list(csv.reader(io.StringIO(text)))
    names = rows[0][1:]
    sig = {n: [] for n in names}
    for r in rows[1:]:
        for n, v in zip(names, r[1:]):
            sig[n].append(X if v == "x" else int(v))
    return Trace(sig)


def trace_to_vcd(trace: Trace, scope: str = "qca") -> str:
    """Value-change dump; one time unit is one tick (a quarter clock cycle)."""
    buf = io.StringIO()
    with VCDWriter(buf, timescale="1 ns", comment="1 time unit = 1 quarter clock cycle") as w:
        handles = {n: w.register_var(scope, n, "wire", size=1, init="x") for n in trace.signals}
        for t in range(trace.n_ticks):
            for n, h in handles.items():
                v = trace.signals[n][t]
                w.change(h, t, "x" if v == X else v)
        w.close(trace.n_ticks)
    return buf.getvalue()


def trace_from_vcd(text: str) -> Trace:
    ids: dict[str, str] = {}
    changes: list[tuple[int, str, int]] = []
    now = end = 0
    for tok in tokenize(io.BytesIO(text.encode())):
        if tok.kind is TokenKind.VAR:
            ids[tok.var.id_code] = tok.var.reference
        elif tok.kind is TokenKind.CHANGE_TIME:
            now = end = tok.time_change
        elif tok.kind is TokenKind.CHANGE_SCALAR:
            v = tok.scalar_change.value
            changes.append((now, ids[tok.scalar_change.id_code], X if v in "xXzZ" else int(v)))
    sig = {n: [X] * end for n in ids.values()}
    for t, n, v in changes:
        for k in range(t, end):
            sig[n][k] = v
    return Trace(sig)


def export_waveform(trace: Trace, fmt: str, path: str | Path | None = None) -> str:
    """Render a trace as ``csv`` or ``vcd``; write it to ``path`` if given."""
    if trace.n_ticks == 0:
        raise ValueError("empty trace")
    render = {"csv": trace_to_csv, "vcd": trace_to_vcd}
    if fmt not in render:
        raise ValueError(f"unknown waveform format {fmt!r}")
    text = render[fmt](trace)
    if path is not None:
        Path(path).write_text(text)
    return text


def read_waveform(path: str | Path) -> Trace:
    p = Path(path)
    text = p.read_text()
    return trace_from_vcd(text) if p.suffix == ".vcd" else trace_from_csv(text)


def netlists_isomorphic(a: GateNetlist, b: GateNetlist) -> bool:
    """Same node names, kinds, zones, fan-ins and I/O bindings."""
    key = lambda n: (n.kind, n.zone, n.fanins, n.polarization)  # noqa: E731
    return (set(a.inputs) == set(b.inputs) and set(a.outputs) == set(b.outputs)
            and {n.name: key(n) for n in a.nodes} == {n.name: key(n) for n in b.nodes})
