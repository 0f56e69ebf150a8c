"""
Spectrum Plot

OD against detuning, optionally over a reference trace (e.g. the baseline).
"""
from typing import Optional, Tuple

import numpy as np

from ..material.spectrum import Spectrum
from .base import Plot

TRACE = (80, 200, 255)
REFERENCE = (120, 120, 120)


class SpectrumPlot(Plot):
    """Optical depth spectrum"""

    def __init__(self, spectrum: Spectrum, reference: Optional[Spectrum] = None, **kwargs):
        super().__init__(**kwargs)
        self.spectrum = spectrum
        self.reference = reference

    def limits(self) -> Tuple[float, float, float, float]:
        nu = self.spectrum.detuning
        top = float(np.max(self.spectrum.od))
        if self.reference is not None:
            top = max(top, float(np.max(self.reference.od)))
        return float(nu[0]), float(nu[-1]), 0.0, max(top * 1.05, 1e-6)

    def labels(self) -> Tuple[str, str]:
        return "detuning (MHz)", "OD"

    def draw(self, image: np.ndarray):
        if self.reference is not None:
            self.polyline(image, self.reference.detuning, self.reference.od, REFERENCE)
        self.polyline(image, self.spectrum.detuning, self.spectrum.od, TRACE, 2)
