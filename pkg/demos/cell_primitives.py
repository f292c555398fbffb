"""Cell-level simulation of the layout primitives.

Every primitive is run over all of its input combinations; the output is
compared with the matching gate-level netlist.
"""

import itertools

from qcaseq import Primitive, build_primitive, run_layout, simulate
from qcaseq.cells import primitive_netlist
from qcaseq.core import Stimuli

for kind in Primitive:
    lay = build_primitive(kind)
    net = primitive_netlist(kind)
    agree = total = 0
    for bits in itertools.product((0, 1), repeat=len(lay.inputs)):
        s = Stimuli({n: [b] * 3 for n, b in zip(lay.inputs, bits)})
        run = run_layout(lay, s)
        gate = simulate(net, s)
        for o in lay.outputs:
            total += 1
            agree += run.trace[o][-1] == gate[o][-1]
    print(f"{kind.value:<15} {len(lay.cells):>3} cells  gate agreement {agree}/{total}  "
          f"min |P| {run.hold_saturation(lay):.3f}")
