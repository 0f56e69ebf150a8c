"""
Comb metrics of a tailored spectrum

Folds the OD over one comb period and reads off the background, the mean
and the first Fourier harmonic. For a square comb od = d0 + d * rect the
harmonic-to-excess ratio is 2 sinc(pi/F), which gives the finesse.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ..core.errors import GridRangeError
from .comb import efficiency_analytic
from ..material.spectrum import Spectrum


@dataclass(frozen=True)
class CombMetrics:
    d0: float
    mean_od: float
    harmonic: float
    finesse: float
    tooth_od: float
    finesse_fwhm: float

    @property
    def efficiency(self) -> float:
        """Efficiency of the equivalent square comb"""
        if not np.isfinite(self.finesse) or self.finesse <= 1:
            return 0.0
        return efficiency_analytic(self.tooth_od, self.finesse, self.d0)


def _finesse_from_ratio(ratio: float) -> float:
    """Solve sinc(pi/F) = ratio for F > 1"""
    if ratio >= 1.0:
        return float('inf')
    if ratio <= 0.0:
        return 1.0
    x = brentq(lambda x: np.sinc(x) - ratio, 1e-12, 1.0)
    return 1.0 / x


def comb_metrics(spectrum: Spectrum, spacing: float, center: float = 0.0,
                 span: Optional[float] = None) -> CombMetrics:
    """
    Measure the realised comb in [center - span/2, center + span/2).

    Args:
        spectrum: Tailored spectrum
        spacing: Comb spacing (MHz)
        center: Region centre (MHz)
        span: Region width, whole periods; defaults to the grid span

    Returns:
        CombMetrics with harmonic finesse, equivalent tooth OD d = F (mean - d0)
        and the FWHM finesse for reference
    """
    grid = spectrum.grid
    if span is None:
        span = np.floor(grid.span / spacing) * spacing
    nu = grid.values
    region = (nu >= center - span / 2 - 1e-9) & (nu < center + span / 2 - 1e-9)
    bins = max(4, int(round(spacing / grid.step)))
    if np.count_nonzero(region) < bins:
        raise GridRangeError(f"comb region around {center:g} MHz holds less than one period")

    phase = np.mod((nu[region] - center) / spacing, 1.0)
    index = np.minimum((phase * bins).astype(int), bins - 1)
    totals = np.bincount(index, weights=spectrum.od[region], minlength=bins)
    counts = np.bincount(index, minlength=bins)
    profile = totals[counts > 0] / counts[counts > 0]
    angles = (np.arange(bins)[counts > 0] + 0.5) / bins * 2 * np.pi

    d0 = float(np.min(profile))
    mean = float(np.mean(profile))
    harmonic = float(2.0 * np.abs(np.mean(profile * np.exp(-1j * angles))))
    excess = mean - d0
    if excess <= 0:
        return CombMetrics(d0, mean, harmonic, float('inf'), 0.0, float('inf'))

    finesse = _finesse_from_ratio(harmonic / (2.0 * excess))
    tooth_od = finesse * excess if np.isfinite(finesse) else 0.0

    half_max = 0.5 * (d0 + float(np.max(profile)))
    width = np.count_nonzero(profile >= half_max) / len(profile) * spacing
    finesse_fwhm = spacing / width if width > 0 else float('inf')
    return CombMetrics(d0=d0, mean_od=mean, harmonic=harmonic, finesse=float(finesse),
                       tooth_od=float(tooth_od), finesse_fwhm=float(finesse_fwhm))
