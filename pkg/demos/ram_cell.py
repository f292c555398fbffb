"""One-bit RAM: write, hold with the enable low, then read back."""

from qcaseq import build
from qcaseq.core import Stimuli
from qcaseq.oracle import observe, sequential_reference

script = [
    ("write 0", 0, 1, 0),   # gives the storage loop a known state
    ("write 1", 1, 1, 0),
    ("idle", 0, 0, 0),
    ("idle", 0, 0, 1),
    ("read", 0, 1, 1),
    ("write 0", 0, 1, 0),
    ("read", 1, 1, 1),
]
s = Stimuli.from_rows([{"Input": i, "Enable": e, "WriteRead": w} for _, i, e, w in script])
ram = build("ram1")
sim, ref = observe(ram, s)["Out"], sequential_reference("ram1", s)["Out"]
for (op, *_), got, want in zip(script, sim, ref):
    print(f"{op:<8} Out={got} reference={want}")
