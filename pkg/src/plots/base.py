"""
Base Plot Class

All plots render to a BGR image with a framed plotting area, grid lines and
axis labels, and are written as PNG files.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence, Tuple

import cv2
import numpy as np

from ..core.errors import OutputError

BACKGROUND = (20, 20, 20)
GRID = (60, 60, 60)
FRAME = (100, 100, 100)
LABEL = (150, 150, 150)
FONT = cv2.FONT_HERSHEY_SIMPLEX


class Plot(ABC):
    """
    Base class for PNG plots.

    Subclasses implement draw() on the plotting area; render() adds the
    frame, grid and tick labels.
    """

    def __init__(self, size: Tuple[int, int] = (960, 540), margin: int = 60, title: str = ""):
        self.size = size
        self.margin = margin
        self.title = title

    @property
    def area(self) -> Tuple[int, int, int, int]:
        """(x0, y0, x1, y1) of the plotting area"""
        w, h = self.size
        return self.margin, self.margin // 2, w - self.margin // 2, h - self.margin

    @abstractmethod
    def limits(self) -> Tuple[float, float, float, float]:
        """(x_min, x_max, y_min, y_max) in data units"""

    @abstractmethod
    def draw(self, image: np.ndarray):
        """Draw the data onto the image"""

    def to_pixels(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Data coordinates to an (n, 2) int32 pixel array"""
        x0, y0, x1, y1 = self.area
        xmin, xmax, ymin, ymax = self.limits()
        px = x0 + (np.asarray(x) - xmin) / max(xmax - xmin, 1e-300) * (x1 - x0)
        py = y1 - (np.asarray(y) - ymin) / max(ymax - ymin, 1e-300) * (y1 - y0)
        return np.stack([px, py], axis=1).round().astype(np.int32)

    def polyline(self, image: np.ndarray, x: np.ndarray, y: np.ndarray,
                 color: Tuple[int, int, int], thickness: int = 1):
        points = self.to_pixels(x, y)
        cv2.polylines(image, [points.reshape(-1, 1, 2)], False, color, thickness, cv2.LINE_AA)

    def _ticks(self, lo: float, hi: float, count: int = 5) -> Sequence[float]:
        return np.linspace(lo, hi, count)

    def _draw_axes(self, image: np.ndarray, x_label: str, y_label: str):
        x0, y0, x1, y1 = self.area
        xmin, xmax, ymin, ymax = self.limits()
        for value in self._ticks(ymin, ymax):
            y = int(round(y1 - (value - ymin) / max(ymax - ymin, 1e-300) * (y1 - y0)))
            cv2.line(image, (x0, y), (x1, y), GRID, 1)
            cv2.putText(image, f"{value:.3g}", (4, y + 4), FONT, 0.35, LABEL, 1)
        for value in self._ticks(xmin, xmax):
            x = int(round(x0 + (value - xmin) / max(xmax - xmin, 1e-300) * (x1 - x0)))
            cv2.line(image, (x, y0), (x, y1), GRID, 1)
            cv2.putText(image, f"{value:.4g}", (x - 15, y1 + 16), FONT, 0.35, LABEL, 1)
        cv2.rectangle(image, (x0, y0), (x1, y1), FRAME, 1)
        cv2.putText(image, x_label, ((x0 + x1) // 2 - 40, self.size[1] - 12), FONT, 0.45, LABEL, 1)
        cv2.putText(image, y_label, (4, y0 - 8 if y0 > 12 else 12), FONT, 0.45, LABEL, 1)
        if self.title:
            cv2.putText(image, self.title, (x0 + 8, y0 + 18), FONT, 0.5, LABEL, 1)

    def labels(self) -> Tuple[str, str]:
        return "", ""

    def render(self) -> np.ndarray:
        w, h = self.size
        image = np.zeros((h, w, 3), dtype=np.uint8)
        image[:] = BACKGROUND
        self._draw_axes(image, *self.labels())
        self.draw(image)
        return image

    def save(self, path: Path) -> Path:
        path = Path(path)
        if not cv2.imwrite(str(path), self.render()):
            raise OutputError(f"cannot write plot {path}")
        return path
