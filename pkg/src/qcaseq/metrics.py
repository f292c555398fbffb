"""Cell count, area and latency figures, and comparison with published numbers."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

from .behavioral import max_latency
from .cells import CellLayout
from .circuits import CircuitHandle, build
from .core import Kind


class Source(enum.Enum):
    MEASURED = "Measured"
    PAPER = "PaperReported"


@dataclass(frozen=True)
class MetricsRecord:
    source: Source
    cell_count: int | None = None
    area_um2: float | None = None
    latency_cycles: float | None = None
    gate_count: int | None = None

    def __post_init__(self):
        if self.area_um2 is not None and self.area_um2 < 0:
            raise ValueError("negative area")
        if self.latency_cycles is not None:
            if self.latency_cycles < 0 or (self.latency_cycles * 4) % 1:
                raise ValueError("latency must be a non-negative multiple of 0.25 cycles")


def layout_metrics(layout: CellLayout) -> MetricsRecord:
    """Cell count and bounding-box area (one pitch added in each direction)."""
    if not layout.cells:
        raise ValueError("empty layout")
    xs = [c.x for c in layout.cells]
    ys = [c.y for c in layout.cells]
    pitch_um = layout.geometry.pitch / 1000
    w = (max(xs) - min(xs) + 1) * pitch_um
    h = (max(ys) - min(ys) + 1) * pitch_um
    return MetricsRecord(Source.MEASURED, len(layout.cells), w * h)


def netlist_metrics(circuit: CircuitHandle) -> MetricsRecord:
    net = circuit.netlist
    return MetricsRecord(Source.MEASURED, latency_cycles=max_latency(net) / 4,
                         gate_count=net.count(Kind.MAJORITY, Kind.INVERTER))


# Published layout figures: (cells, area in um^2, latency in cycles).
PAPER_METRICS: dict[str, tuple[int, float, float | None]] = {
    "cff": (159, 0.20, 2.75),
    "ecff": (242, 0.38, 3.75),
    "counter_shift:2": (464, 0.67, 5.75),
    "counter_shift:3": (786, 1.18, 7.75),
    "ram1": (209, 0.31, None),
}

NOT_MEASURABLE = "not measurable at gate level"


@dataclass
class Comparison:
    name: str
    rows: list[tuple[str, MetricsRecord]]

    def _cells(self) -> list[list[str]]:
        out = []
        for label, r in self.rows:
            gate_level = r.source is Source.MEASURED
            out.append([
                label, r.source.value,
                NOT_MEASURABLE if gate_level and r.cell_count is None else _s(r.cell_count),
                NOT_MEASURABLE if gate_level and r.area_um2 is None else _s(r.area_um2),
                _s(r.latency_cycles), _s(r.gate_count),
            ])
        return out

    HEADER = ["circuit", "source", "cells", "area_um2", "latency_cycles", "gates"]

    def to_text(self) -> str:
        rows = [self.HEADER] + self._cells()
        widths = [max(len(r[i]) for r in rows) for i in range(len(self.HEADER))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        w.writerows(self._cells())
        return buf.getvalue()


def _s(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def compare_to_paper(name: str) -> Comparison:
    """Measured gate-level metrics beside the published layout figures."""
    circuit = build(name)
    rows = [(circuit.name, netlist_metrics(circuit))]
    if circuit.name in PAPER_METRICS:
        cells, area, lat = PAPER_METRICS[circuit.name]
        rows.append((circuit.name, MetricsRecord(Source.PAPER, cells, area, lat)))
    return Comparison(circuit.name, rows)
