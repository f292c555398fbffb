"""Metrics tables and waveform export.

Writes cff.csv and cff.vcd to the current directory.
"""

from qcaseq import build, compare_to_paper, export_waveform, simulate
from qcaseq.oracle import cff_point_stimuli

for name in ("cff", "ecff", "counter_shift:3"):
    print(compare_to_paper(name).to_text(), end="\n\n")

cff = build("cff")
trace = simulate(cff.netlist, cff_point_stimuli(1, 0, 0, 1, 1, 0))
for fmt in ("csv", "vcd"):
    export_waveform(trace, fmt, f"cff.{fmt}")
print(f"wrote cff.csv and cff.vcd ({trace.n_ticks} ticks)")
