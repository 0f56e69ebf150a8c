"""
Echo Trace Plot

Input and output intensity against time, with echo windows marked.
"""
from typing import Optional, Tuple

import cv2
import numpy as np

from ..afc.propagation import EchoTrace
from .base import Plot

INPUT = (120, 120, 120)
OUTPUT = (100, 255, 100)
MARKER = (60, 60, 160)


class TracePlot(Plot):
    """Output intensity over the input pulse, one marker per echo"""

    def __init__(self, trace: EchoTrace, span_ns: Optional[float] = None, **kwargs):
        super().__init__(**kwargs)
        self.trace = trace
        orders = len(trace.echo_efficiencies)
        if span_ns is None:
            span_ns = (orders + 1) * 1e3 / trace.spacing if trace.spacing else 1000.0
        self.span_ns = span_ns

    def _visible(self) -> np.ndarray:
        t = self.trace.time_ns
        return (t >= -0.25 * self.span_ns) & (t <= self.span_ns)

    def limits(self) -> Tuple[float, float, float, float]:
        mask = self._visible()
        top = float(np.max(self.trace.input_intensity[mask]))
        return -0.25 * self.span_ns, self.span_ns, 0.0, max(top * 1.05, 1e-12)

    def labels(self) -> Tuple[str, str]:
        return "time (ns)", "intensity"

    def draw(self, image: np.ndarray):
        mask = self._visible()
        t = self.trace.time_ns[mask]
        self.polyline(image, t, self.trace.input_intensity[mask], INPUT)
        self.polyline(image, t, self.trace.intensity[mask], OUTPUT, 2)
        _, y0, _, y1 = self.area
        for order, time in self.trace.peak_times_ns:
            x = int(self.to_pixels([time], [0.0])[0, 0])
            cv2.line(image, (x, y0), (x, y1), MARKER, 1)
            eta = self.trace.efficiency(order)
            cv2.putText(image, f"{order}: {eta:.1%}", (x + 4, y0 + 34), cv2.FONT_HERSHEY_SIMPLEX,
                        0.4, MARKER, 1)
