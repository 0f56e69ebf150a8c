"""
Mismatch Heatmap

Colour-mapped mismatch over field (x) and storage time or spacing (y).
"""
from typing import Tuple

import cv2
import numpy as np

from ..commensurate.search import MismatchMap
from .base import Plot


class HeatmapPlot(Plot):
    """0 (perfect match) maps to the dark end of the colour map"""

    def __init__(self, data: MismatchMap, colormap: int = cv2.COLORMAP_VIRIDIS, **kwargs):
        super().__init__(**kwargs)
        self.data = data
        self.colormap = colormap

    def limits(self) -> Tuple[float, float, float, float]:
        return (float(self.data.fields[0]), float(self.data.fields[-1]),
                float(self.data.axis_values[0]), float(self.data.axis_values[-1]))

    def labels(self) -> Tuple[str, str]:
        return "B (G)", "storage time (ns)" if self.data.storage_time else "spacing (MHz)"

    def draw(self, image: np.ndarray):
        x0, y0, x1, y1 = self.area
        # rows = field, cols = y axis; image rows run top-down in y
        scaled = np.clip(self.data.values, 0.0, 1.0).T[::-1]
        gray = (scaled * 255).astype(np.uint8)
        colored = cv2.applyColorMap(gray, self.colormap)
        image[y0 + 1:y1, x0 + 1:x1] = cv2.resize(colored, (x1 - x0 - 1, y1 - y0 - 1),
                                                 interpolation=cv2.INTER_NEAREST)
