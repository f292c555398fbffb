"""Configurable flip-flop in D, T and JK modes.

Each line drives the gate-level CFF from a known prior state Qt through one
clocked cycle and compares the result with the next-state equation.
"""

import itertools

from qcaseq import build, eval_cff_equation
from qcaseq.oracle import cff_point_stimuli, observe

MODES = {"D": (0, 0), "T": (0, 1), "JK": (1, 0)}

cff = build("cff")
print(f"cff: {len(cff.netlist.nodes)} nodes, latency {cff.declared_latency / 4} cycles\n")
print("mode  A B Qt  sim  eq")
for mode, (c1, c2) in MODES.items():
    for a, b, qt in itertools.product((0, 1), repeat=3):
        q = observe(cff, cff_point_stimuli(a, b, c1, c2, 1, qt))["Q"][3]
        print(f"{mode:<4}  {a} {b} {qt:>2}  {q:>3}  {eval_cff_equation(a, b, c1, c2, 1, qt):>2}")
