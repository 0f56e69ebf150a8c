"""
Pump pulse trains and comb targets

A PumpTarget describes which frequency windows to tailor and at what comb
spacing; a PulseTrain describes the chirped pulse burning each pumped line.
pump_weight turns one pulse into a per-channel rate profile.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import erf

from ..core.errors import GridRangeError
from ..material.ion import IonClass
from ..material.spectrum import DetuningGrid

FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))


class AmplitudeShape(str, Enum):
    SECH = "sech"
    GAUSSIAN = "gaussian"


class ChirpShape(str, Enum):
    TANH = "tanh"
    LINEAR = "linear"


class PumpOrder(str, Enum):
    ASCENDING = "ascending"
    INTERLEAVED = "interleaved"


class PulseTrain(BaseModel):
    """Chirped pump pulse repeated over every pumped line, N_l times"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    t0: float = Field(default=0.15, gt=0, description="Single pulse duration (ms)")
    N_l: int = Field(default=600, ge=1, description="Sequence repetitions")
    delta_p: float = Field(default=4.2, gt=0, description="Chirp bandwidth per line (MHz)")
    amplitude_shape: AmplitudeShape = AmplitudeShape.SECH
    chirp_shape: ChirpShape = ChirpShape.TANH
    peak_rate: float = Field(default=1.0, ge=0, description="Peak pump rate (1/ms)")

    @property
    def adiabatic(self) -> bool:
        """sech amplitude with tanh chirp: square spectral footprint"""
        return self.amplitude_shape is AmplitudeShape.SECH and self.chirp_shape is ChirpShape.TANH


class PumpWindow(BaseModel):
    """One tailored frequency window; spacing and delta_p may override the target's"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    center: float = Field(default=0.0, description="Window centre (MHz)")
    bandwidth: float = Field(default=30.0, gt=0, description="Window width (MHz)")
    spacing: Optional[float] = Field(default=None, gt=0)
    delta_p: Optional[float] = Field(default=None, gt=0)


@dataclass(frozen=True)
class PumpLine:
    """A pumped line: one chirp of width delta_p centred on center"""
    window: int
    index: int
    center: float
    delta_p: float
    spacing: float


class PumpTarget(BaseModel):
    """Declarative comb target"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    comb_spacing: float = Field(default=6.0, gt=0, description="Comb spacing (MHz)")
    tooth_width: float = Field(default=1.33, gt=0, description="AFC tooth width (MHz)")
    windows: List[PumpWindow] = Field(default_factory=lambda: [PumpWindow()])
    wait_time: float = Field(default=5.0, ge=0, description="Wait after pumping (ms)")
    order: PumpOrder = PumpOrder.ASCENDING

    @model_validator(mode='after')
    def _check_target(self) -> 'PumpTarget':
        if self.tooth_width >= self.comb_spacing:
            raise ValueError("tooth_width must be smaller than comb_spacing")
        ordered = sorted(self.windows, key=lambda w: w.center)
        for left, right in zip(ordered, ordered[1:]):
            if left.center + left.bandwidth / 2 > right.center - right.bandwidth / 2 + 1e-9:
                raise ValueError(f"windows at {left.center:g} and {right.center:g} MHz overlap")
        return self

    def spacing_for(self, window: PumpWindow) -> float:
        return window.spacing or self.comb_spacing

    def line_count(self, window: PumpWindow) -> int:
        return max(1, int(round(window.bandwidth / self.spacing_for(window))))

    def pump_lines(self, default_delta_p: float) -> List[PumpLine]:
        """
        Pumped lines of every window, in pumping order.

        Lines sit at center + (k - (n-1)/2) * spacing with
        n = round(bandwidth / spacing); AFC teeth lie between them.
        """
        lines = []
        for w_index, window in enumerate(self.windows):
            spacing = self.spacing_for(window)
            n = self.line_count(window)
            delta_p = window.delta_p or default_delta_p
            indices = list(range(n))
            if self.order is PumpOrder.INTERLEAVED:
                indices = indices[0::2] + indices[1::2]
            for k in indices:
                center = window.center + (k - (n - 1) / 2) * spacing
                lines.append(PumpLine(w_index, k, center, delta_p, spacing))
        return lines

    def tooth_centers(self) -> List[float]:
        """Centres of the AFC teeth (absorbing peaks left between pumped lines)"""
        centers = []
        for window in self.windows:
            spacing = self.spacing_for(window)
            n = self.line_count(window)
            centers.extend(window.center + (k - (n - 2) / 2) * spacing for k in range(n - 1))
        return sorted(centers)


def pump_weight(train: PulseTrain, tooth_center: float, grid: DetuningGrid,
                ion: Optional[IonClass] = None,
                delta_p: Optional[float] = None) -> np.ndarray:
    """
    Spectral rate profile of one pump pulse, peak normalized to about 1.

    Adiabatic pulses burn a rectangle of width delta_p smoothed by the hole
    linewidth; other shapes give a Gaussian of FWHM sqrt(delta_p^2 + fwhm^2).
    A chirp narrower than one grid step pumps a single channel.

    Args:
        train: Pulse parameters
        tooth_center: Centre of the pumped line (MHz)
        grid: Detuning grid
        ion: Ion class (hole linewidth)
        delta_p: Override of train.delta_p

    Returns:
        Per-channel weight array

    Raises:
        GridRangeError: tooth_center outside the grid
    """
    ion = ion or IonClass()
    delta_p = delta_p or train.delta_p
    index = grid.index_of(tooth_center)

    if delta_p < grid.step:
        weight = np.zeros(grid.size)
        weight[index] = 1.0
        return weight

    x = grid.values - tooth_center
    if train.adiabatic:
        s = ion.hole_fwhm * FWHM_TO_SIGMA * np.sqrt(2.0)
        return 0.5 * (erf((x + delta_p / 2) / s) - erf((x - delta_p / 2) / s))

    width = np.hypot(delta_p, ion.hole_fwhm)
    return np.exp(-0.5 * (x / (width * FWHM_TO_SIGMA)) ** 2)


def check_lines_on_grid(lines: List[PumpLine], grid: DetuningGrid):
    """Raise GridRangeError naming the first pumped line outside the grid"""
    for line in lines:
        if not grid.contains(line.center):
            raise GridRangeError(
                f"window {line.window}: pumped line at {line.center:g} MHz outside grid "
                f"[{grid.start:g}, {grid.stop:g}]")
