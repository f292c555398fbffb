"""Gate- and cell-level simulation of configurable QCA sequential circuits."""

from .behavioral import (CombinationalCycleError, invert, latency_cycles, majority, max_latency,
                         simulate)
from .cells import (Cell, CellLayout, EngineParams, Geometry, Orientation, Primitive, Role,
                    build_primitive, kink_energy, relax, run_layout, simulate_layout)
from .circuits import CATALOG, CircuitHandle, build, build_counter_shift, counter_latency
from .clocking import ClockPhase, ClockSchedule, phase_at, switching_zone
from .core import (GateNetlist, GateNode, Kind, Stimuli, Trace, ValidationReport, Violation,
                   validate_netlist)
from .formats import (ParseError, export_waveform, parse_layout, parse_netlist, parse_stimuli,
                      read_waveform, render_layout, render_netlist, render_stimuli)
from .metrics import MetricsRecord, Source, compare_to_paper, layout_metrics, netlist_metrics
from .oracle import (EdgeMode, FlipFlopKind, VerificationReport, eval_cff_equation,
                     sequential_reference, verify_sequence, verify_truth_table)

__version__ = "0.1.0"

__all__ = [
    "CATALOG", "Cell", "CellLayout", "CircuitHandle", "ClockPhase", "ClockSchedule",
    "CombinationalCycleError", "EdgeMode", "EngineParams", "FlipFlopKind", "GateNetlist",
    "GateNode", "Geometry", "Kind", "MetricsRecord", "Orientation", "ParseError", "Primitive",
    "Role", "Source", "Stimuli", "Trace", "ValidationReport", "VerificationReport", "Violation",
    "build", "build_counter_shift", "build_primitive", "compare_to_paper", "counter_latency",
    "eval_cff_equation", "export_waveform", "invert", "kink_energy", "latency_cycles",
    "layout_metrics", "majority", "max_latency", "netlist_metrics", "parse_layout",
    "parse_netlist", "parse_stimuli", "phase_at", "read_waveform", "relax", "render_layout",
    "render_netlist", "render_stimuli", "run_layout", "sequential_reference", "simulate",
    "simulate_layout", "switching_zone", "validate_netlist", "verify_sequence",
    "verify_truth_table",
]
