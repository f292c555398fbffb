"""Edge selection on the edge-configurable flip-flop.

A T flip-flop with T = 1 is driven by the same clock under each edge mode;
the printout shows which edges make Q toggle.
"""

from qcaseq import EdgeMode, build
from qcaseq.core import Stimuli, level_char
from qcaseq.oracle import RESET, observe

clk = [1, 0, 0, 1, 1, 0, 1, 0]
ecff = build("ecff")
print("CLK      " + " ".join(map(str, clk)))
for edge in (EdgeMode.FALLING, EdgeMode.RISING, EdgeMode.DUAL, EdgeMode.NONE):
    c3, c4 = edge.controls
    rows = [dict(RESET, C3=1, C4=1, CLK=0), dict(RESET, C3=1, C4=1, CLK=1)]
    rows += [{"A": 1, "B": 0, "C1": 0, "C2": 1, "C3": c3, "C4": c4, "CLK": c} for c in clk]
    q = observe(ecff, Stimuli.from_rows(rows))["Q"][2:]
    print(f"{edge.name.lower():<8} " + " ".join(level_char(v) for v in q))
