"""
Ideal square combs and the analytic AFC efficiency

Teeth of width spacing/F carry OD d0 + d, troughs keep the background d0.
For a periodic comb the first echo of this profile has efficiency
(d/F)^2 exp(-d/F) sinc^2(pi/F) exp(-d0) with sinc(x) = sin(x)/x.
"""
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.ndimage import gaussian_filter1d
from scipy.optimize import minimize_scalar

from ..core.errors import RegimeError, UnderResolvedError
from ..core.logging_config import get_logger
from ..material.spectrum import DetuningGrid, Spectrum, synthetic_spectrum

logger = get_logger(__name__)

FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))

# Tooth-edge rounding in grid steps (FWHM)
DEFAULT_EDGE_STEPS = 4.0


class AFCSpec(BaseModel):
    """Square comb description"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    spacing: float = Field(default=6.0, gt=0, description="Comb spacing (MHz)")
    finesse: float = Field(default=4.5, gt=1)
    d: float = Field(default=12.0, ge=0, description="Tooth optical depth")
    d0: float = Field(default=0.4, ge=0, description="Background optical depth")
    bandwidth: Optional[float] = Field(default=None, gt=0,
                                       description="Window width (MHz); None fills the grid")
    centers: List[float] = Field(default_factory=lambda: [0.0])

    @model_validator(mode='after')
    def _check_teeth(self) -> 'AFCSpec':
        if self.bandwidth is not None and self.bandwidth / self.spacing < 2:
            raise ValueError("bandwidth must hold at least 2 teeth")
        if not self.centers:
            raise ValueError("at least one window centre is required")
        return self

    @property
    def tooth_width(self) -> float:
        return self.spacing / self.finesse


def _coverage(phase: np.ndarray, half: float, cell: float) -> np.ndarray:
    """Fraction of each grid cell (width ``cell`` in periods) covered by a tooth"""
    distance = np.abs(phase - np.round(phase))
    return np.clip((half - distance) / cell + 0.5, 0.0, 1.0)


def square_comb(spec: AFCSpec, grid: DetuningGrid,
                edge_steps: float = DEFAULT_EDGE_STEPS) -> Spectrum:
    """
    Render a square comb on a grid.

    Without a bandwidth the comb is periodic over the whole grid, phased so a
    tooth sits on centers[0]. With a bandwidth each window holds
    round(bandwidth/spacing) teeth and the OD outside the windows is d0 + d.

    Args:
        spec: Comb description
        grid: Detuning grid, step <= spacing / (4 F)
        edge_steps: Gaussian edge rounding in grid steps (0 disables it)

    Returns:
        Synthetic spectrum

    Raises:
        UnderResolvedError: grid too coarse for the teeth
    """
    if grid.step > spec.tooth_width / 4:
        raise UnderResolvedError(
            f"grid step {grid.step:g} MHz exceeds tooth width / 4 = {spec.tooth_width / 4:g} MHz")

    nu = grid.values
    half = 0.5 / spec.finesse
    cell = grid.step / spec.spacing
    if spec.bandwidth is None:
        phase = (nu - spec.centers[0]) / spec.spacing
        teeth = _coverage(phase, half, cell)
        mode = 'wrap'
    else:
        teeth = np.ones(grid.size)
        n = max(2, int(round(spec.bandwidth / spec.spacing)))
        for center in spec.centers:
            inside = np.abs(nu - center) <= spec.bandwidth / 2
            phase = (nu - center) / spec.spacing - (n - 1) / 2
            teeth[inside] = _coverage(phase[inside], half, cell)
        mode = 'nearest'

    if edge_steps > 0:
        teeth = gaussian_filter1d(teeth, edge_steps * FWHM_TO_SIGMA, mode=mode)

    od = spec.d0 + spec.d * teeth
    return synthetic_spectrum(grid, od, spec.d0 + spec.d)


def efficiency_analytic(d: float, F: float, d0: float) -> float:
    """(d/F)^2 exp(-d/F) sinc^2(pi/F) exp(-d0), sinc(x) = sin(x)/x"""
    if F <= 1:
        raise RegimeError(f"finesse must exceed 1, got {F}")
    # np.sinc(1/F) == sin(pi/F) / (pi/F)
    return float((d / F) ** 2 * np.exp(-d / F) * np.sinc(1.0 / F) ** 2 * np.exp(-d0))


def optimal_depth(F: float, d0: float = 0.0) -> float:
    """Pre-pumping OD maximizing efficiency_analytic: d = 2F (d0 factors out)"""
    if F <= 1:
        raise RegimeError(f"finesse must exceed 1, got {F}")
    return 2.0 * F


def optimal_finesse(d: float, d0: float = 0.0, max_finesse: float = 50.0) -> float:
    """Finesse maximizing efficiency_analytic at fixed d"""
    if d <= 0:
        raise RegimeError(f"optical depth must be positive, got {d}")
    result = minimize_scalar(lambda F: -efficiency_analytic(d, F, d0),
                             bounds=(1.0 + 1e-9, max_finesse), method='bounded',
                             options={'xatol': 1e-6})
    return float(result.x)
