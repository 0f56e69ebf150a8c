"""
Plots module

PNG renderers for spectra, echo traces and mismatch heatmaps.
"""
from .base import Plot
from .heatmap import HeatmapPlot
from .spectrum import SpectrumPlot
from .trace import TracePlot

__all__ = ['Plot', 'HeatmapPlot', 'SpectrumPlot', 'TracePlot']
