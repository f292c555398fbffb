"""Two-bit counter and shift register built from chained ECFFs.

mode = 1 counts dual clock edges, mode = 0 shifts the serial input A.
"""

from qcaseq import build_counter_shift
from qcaseq.core import Stimuli, level_char
from qcaseq.oracle import counter_preamble, observe, sequential_reference

n = 2
h = build_counter_shift(n)
print(f"{h.name}: latency {h.declared_latency} quarter cycles\n")

for mode, serial in ((1, [1] * 8), (0, [1, 0, 1, 1, 0, 0, 0, 0])):
    rows = counter_preamble(n)
    clk = rows[-1]["CLK"]
    for a in serial:
        clk ^= 1
        rows.append({"A": a, "B": 0, "C1": 0, "C2": mode, "C3": 1, "C4": 1, "mode": mode, "CLK": clk})
    s = Stimuli.from_rows(rows)
    sim, ref = observe(h, s), sequential_reference(h.name, s)
    start = len(counter_preamble(n))
    print("counter" if mode else "shift register (A = " + "".join(map(str, serial)) + ")")
    for k in range(start, len(rows)):
        bits = "".join(level_char(sim[f"Q{i}"][k]) for i in reversed(range(n)))
        want = "".join(level_char(ref[f"Q{i}"][k]) for i in reversed(range(n)))
        print(f"  edge {k - start + 1}: Q1Q0 = {bits}  (reference {want})")
    print()
