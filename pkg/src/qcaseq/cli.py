"""Command-line interface.

Exit status: 0 when every check passes, 1 on a verification failure, 2 on
usage, file or parse errors. Randomized commands print their seed; the
``QCA_SEED`` environment variable overrides the default.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .behavioral import simulate
from .cells import Primitive, build_primitive, run_layout
from .circuits import CATALOG, build
from .formats import (ParseError, export_waveform, parse_layout, parse_netlist, parse_stimuli,
                      render_netlist)
from .metrics import compare_to_paper
from .oracle import (TRUTH_TABLES, run_random_suite, table2_text, verify_cff_equation, verify_table4,
                     verify_table5, verify_truth_table)
from .suites import DEFAULT_SEED, property_suites, run_acceptance

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _msg(exc: Exception) -> str:
    return str(exc.args[0]) if exc.args else str(exc)


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("QCA_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QCA_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _circuit_name(name: str, n: int | None) -> str:
    if name == "counter_shift":
        return f"counter_shift:{2 if n is None else n}"
    return name


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _fmt_for(path: str | None, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "vcd" if path and path.endswith(".vcd") else "csv"


def cmd_build(args) -> int:
    try:
        h = build(_circuit_name(args.name, args.n))
    except (KeyError, ValueError) as exc:
        raise UsageError(_msg(exc)) from None
    header = (f"# {h.name}: latency {h.declared_latency} quarter cycles; "
              + ", ".join(f"{o} at tick 4k+{hop}" for o, hop in h.output_hops.items()) + "\n")
    _write(header + render_netlist(h.netlist), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = parse_netlist(_read(args.netlist))
    stim = parse_stimuli(_read(args.stimuli))
    n = args.cycles or stim.n_cycles
    if stim.n_cycles < n:
        raise UsageError(f"stimuli cover {stim.n_cycles} cycles, {n} requested")
    missing = set(net.inputs) - set(stim.values)
    if missing:
        raise UsageError(f"stimuli lack inputs: {', '.join(sorted(missing))}")
    trace = simulate(net, stim, n, init_zero=args.init_zero)
    _write(export_waveform(trace, _fmt_for(args.output, args.format)), args.output)
    return EXIT_OK


def cmd_truthtable(args) -> int:
    name = args.name
    reports = []
    if name == "cff":
        reports.append(verify_cff_equation())
        print(table2_text())
    elif name in TRUTH_TABLES:
        ref, domain = TRUTH_TABLES[name]
        reports.append(verify_truth_table(build(name), ref, domain))
        if name == "cpg":
            reports.append(verify_table4())
        if name == "dcc":
            reports.append(verify_table5())
    else:
        raise UsageError(f"no truth table for {name!r}; try: cff, {', '.join(TRUTH_TABLES)}")
    for r in reports:
        print(r.to_text(args.show))
        if args.json:
            Path(args.json).write_text(r.to_json())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_verify(args) -> int:
    seed = _seed(args.seed)
    print(f"seed {seed}")
    if args.all:
        ok = True
        for s in property_suites(seed):
            print(s.to_text(args.show))
            ok &= s.ok
        for c, passed, detail in run_acceptance(seed):
            print(f"criterion {c.number:2d} {'PASS' if passed else 'FAIL'}  {c.title}: {detail}")
            ok &= passed
        return EXIT_OK if ok else EXIT_FAIL
    if not args.name:
        raise UsageError("verify needs a circuit name or --all")
    name = _circuit_name(args.name, args.n)
    try:
        rep = run_random_suite(name, args.runs, seed)
    except (KeyError, ValueError) as exc:
        raise UsageError(_msg(exc)) from None
    print(rep.to_text(args.show))
    if args.json:
        Path(args.json).write_text(rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_metrics(args) -> int:
    try:
        table = compare_to_paper(_circuit_name(args.name, args.n))
    except (KeyError, ValueError) as exc:
        raise UsageError(_msg(exc)) from None
    _write(table.to_csv() if args.csv else table.to_text() + "\n", None)
    return EXIT_OK


def cmd_layout_sim(args) -> int:
    if args.layout.startswith("primitive:"):
        try:
            layout = build_primitive(args.layout.partition(":")[2])
        except ValueError:
            raise UsageError(f"unknown primitive; known: {', '.join(p.value for p in Primitive)}") from None
    else:
        layout = parse_layout(_read(args.layout))
    stim = parse_stimuli(_read(args.stimuli))
    missing = set(layout.inputs) - set(stim.values)
    if missing:
        raise UsageError(f"stimuli lack inputs: {', '.join(sorted(missing))}")
    run = run_layout(layout, stim, args.cycles)
    print(f"# {len(layout.cells)} cells, most sweeps {run.max_iterations}, "
          f"{'converged' if run.converged else 'NOT converged'}, "
          f"min |P| in Hold {run.hold_saturation(layout):.3f}", file=sys.stderr)
    _write(export_waveform(run.trace, _fmt_for(args.output, args.format)), args.output)
    return EXIT_OK if run.converged else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcaseq", description="QCA sequential circuit simulation and verification")
    sub = p.add_subparsers(dest="command", required=True)
    names = ", ".join([*CATALOG, "counter_shift:<n>"])

    b = sub.add_parser("build", help="write a catalog circuit as netlist text")
    b.add_argument("name", help=names)
    b.add_argument("--n", type=int, help="stages for counter_shift")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("simulate", help="run a netlist file on stimuli")
    s.add_argument("netlist")
    s.add_argument("--stimuli", required=True)
    s.add_argument("--cycles", type=int)
    s.add_argument("--init-zero", action="store_true", help="start latches at 0 instead of x")
    s.add_argument("--format", choices=("csv", "vcd"))
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("truthtable", help="exhaustive check against the reference")
    t.add_argument("name")
    t.add_argument("--show", type=int, default=10, help="mismatches to print")
    t.add_argument("--json", help="also write the report as JSON")
    t.set_defaults(func=cmd_truthtable)

    v = sub.add_parser("verify", help="randomized sequential verification")
    v.add_argument("name", nargs="?")
    v.add_argument("--n", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--runs", type=int, default=10)
    v.add_argument("--all", action="store_true", help="run every property suite and acceptance check")
    v.add_argument("--show", type=int, default=10)
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("metrics", help="measured metrics beside published figures")
    m.add_argument("name")
    m.add_argument("--n", type=int)
    m.add_argument("--csv", action="store_true")
    m.set_defaults(func=cmd_metrics)

    ls = sub.add_parser("layout-sim", help="cell-level simulation of a layout file or primitive:<kind>")
    ls.add_argument("layout")
    ls.add_argument("--stimuli", required=True)
    ls.add_argument("--cycles", type=int)
    ls.add_argument("--format", choices=("csv", "vcd"))
    ls.add_argument("-o", "--output")
    ls.set_defaults(func=cmd_layout_sim)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
