"""
Detuning grid and absorption spectrum

A Spectrum holds the optical depth and the ground/excited populations on a
uniform detuning grid. Arrays are read-only views so a Spectrum can be shared
between threads and sweep points without copying.
"""
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import GridRangeError, UnderResolvedError
from ..core.logging_config import get_logger
from .ion import IonClass

logger = get_logger(__name__)


def _frozen(values, dtype=float) -> np.ndarray:
    """Read-only copy of an array"""
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class DetuningGrid:
    """Uniform detuning axis: start + k*step for k in [0, size)"""
    start: float
    step: float
    size: int

    def __post_init__(self):
        if not self.step > 0:
            raise GridRangeError(f"grid step must be positive, got {self.step}")
        if self.size < 2:
            raise GridRangeError(f"grid needs at least 2 channels, got {self.size}")

    @classmethod
    def from_range(cls, lo: float, hi: float, step: float) -> 'DetuningGrid':
        """Grid covering [lo, hi] inclusive"""
        if not step > 0 or hi <= lo:
            raise GridRangeError(f"empty detuning range [{lo}, {hi}] @ {step}")
        size = int(round((hi - lo) / step)) + 1
        return cls(float(lo), float(step), size)

    @property
    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.size)

    @property
    def stop(self) -> float:
        return self.start + self.step * (self.size - 1)

    @property
    def span(self) -> float:
        """Periodic span covered by the grid (size * step)"""
        return self.step * self.size

    @property
    def center(self) -> float:
        return 0.5 * (self.start + self.stop)

    def contains(self, nu: float) -> bool:
        return self.start - 0.5 * self.step <= nu <= self.stop + 0.5 * self.step

    def index_of(self, nu: float) -> int:
        """Nearest channel index; raises GridRangeError outside the grid"""
        if not self.contains(nu):
            raise GridRangeError(f"detuning {nu:g} MHz outside grid [{self.start:g}, {self.stop:g}]")
        return int(np.clip(round((nu - self.start) / self.step), 0, self.size - 1))

    def is_symmetric(self, center: float = 0.0, tol: float = 1e-9) -> bool:
        return abs((self.start + self.stop) / 2 - center) <= tol * max(1.0, abs(self.step))


class GridConfig(BaseModel):
    """Detuning range from a config file"""
    model_config = ConfigDict(extra='forbid')

    lo: float = Field(default=-50.0)
    hi: float = Field(default=50.0)
    step: float = Field(default=0.05, gt=0)

    @model_validator(mode='after')
    def _check_range(self) -> 'GridConfig':
        if self.hi <= self.lo:
            raise ValueError("hi must be larger than lo")
        return self

    def to_grid(self) -> DetuningGrid:
        return DetuningGrid.from_range(self.lo, self.hi, self.step)


# Population columns of ClassState.pops
G1, G2, EXCITED, BOTTLENECK = range(4)


@dataclass(frozen=True, eq=False)
class ClassState:
    """
    Per-class populations of the ion ensemble.

    A class is the set of ions whose g1 -> e1 line sits on one grid channel.
    It also absorbs at ``offsets`` channels away (g1 -> e2, g2 -> e1,
    g2 -> e2) with the matching ``strengths``. Classes whose lines reach into
    the grid from outside are kept as padding: ``pad_lo`` classes below the
    first channel and ``pad_hi`` above the last one.
    """
    offsets: Tuple[int, int, int, int]
    strengths: Tuple[float, float, float, float]
    pops: np.ndarray
    density: np.ndarray

    # Ground state addressed by each line
    LINE_STATE = (G1, G1, G2, G2)

    def __post_init__(self):
        object.__setattr__(self, 'pops', _frozen(self.pops))
        object.__setattr__(self, 'density', _frozen(self.density))

    @property
    def pad_lo(self) -> int:
        return max(self.offsets)

    @property
    def pad_hi(self) -> int:
        return -min(self.offsets)

    @property
    def grid_size(self) -> int:
        return self.pops.shape[0] - self.pad_lo - self.pad_hi

    @classmethod
    def equilibrium(cls, offsets: Tuple[int, int, int, int],
                    strengths: Tuple[float, float, float, float],
                    density: np.ndarray,
                    grid_pops: Optional[np.ndarray] = None) -> 'ClassState':
        """
        Build a class state around per-channel populations.

        Padding classes start in thermal equilibrium with the edge density.

        Args:
            offsets: Channel offsets of the four lines (first one is 0)
            strengths: Relative line strengths
            density: Per-channel absorber OD on the grid
            grid_pops: Optional (N, 4) populations of the on-grid classes
        """
        pad_lo, pad_hi = max(offsets), -min(offsets)
        n = len(density)
        pops = np.zeros((n + pad_lo + pad_hi, 4))
        pops[:, G1] = 0.5
        pops[:, G2] = 0.5
        if grid_pops is not None:
            pops[pad_lo:pad_lo + n] = grid_pops
        padded = np.pad(np.asarray(density, dtype=float), (pad_lo, pad_hi), mode='edge')
        return cls(tuple(offsets), tuple(strengths), pops, padded)

    def with_pops(self, pops: np.ndarray) -> 'ClassState':
        return replace(self, pops=pops)

    def grid_pops(self) -> np.ndarray:
        """(N, 4) populations of the classes centred on grid channels"""
        return self.pops[self.pad_lo:self.pad_lo + self.grid_size]

    def od(self) -> np.ndarray:
        """Optical depth seen on each grid channel"""
        n = self.grid_size
        weighted = self.density[:, None] * self.pops
        out = np.zeros(n)
        channels = np.arange(n) + self.pad_lo
        for offset, strength, state in zip(self.offsets, self.strengths, self.LINE_STATE):
            out += strength * weighted[channels - offset, state]
        return out / (0.5 * sum(self.strengths))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Absorption spectrum with per-channel populations.

    Attributes:
        grid: Detuning axis (MHz)
        od: Optical depth per channel
        pop_g1, pop_g2: Ground-doublet populations
        pop_exc: Excited plus bottleneck occupancy
        pop_bottleneck: Bottleneck part of pop_exc
        density: OD the channel shows at thermal equilibrium
        converged: False when pumping did not settle monotonically
        classes: Full class state when produced by the pumping model
    """
    grid: DetuningGrid
    od: np.ndarray
    pop_g1: np.ndarray
    pop_g2: np.ndarray
    pop_exc: np.ndarray
    pop_bottleneck: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None
    converged: bool = True
    classes: Optional[ClassState] = field(default=None, repr=False)

    def __post_init__(self):
        n = self.grid.size
        if self.pop_bottleneck is None:
            object.__setattr__(self, 'pop_bottleneck', np.zeros(n))
        if self.density is None:
            object.__setattr__(self, 'density', self.od)
        for name in ('od', 'pop_g1', 'pop_g2', 'pop_exc', 'pop_bottleneck', 'density'):
            array = _frozen(getattr(self, name))
            if array.shape != (n,):
                raise GridRangeError(f"{name} has shape {array.shape}, grid has {n} channels")
            object.__setattr__(self, name, array)

    @classmethod
    def from_classes(cls, grid: DetuningGrid, classes: ClassState,
                     converged: bool = True) -> 'Spectrum':
        pops = classes.grid_pops()
        return cls(
            grid=grid,
            od=classes.od(),
            pop_g1=pops[:, G1],
            pop_g2=pops[:, G2],
            pop_exc=pops[:, EXCITED] + pops[:, BOTTLENECK],
            pop_bottleneck=pops[:, BOTTLENECK],
            density=classes.density[classes.pad_lo:classes.pad_lo + grid.size],
            converged=converged,
            classes=classes,
        )

    @property
    def detuning(self) -> np.ndarray:
        return self.grid.values

    def total_population(self) -> np.ndarray:
        """g1 + g2 + excited per channel"""
        return self.pop_g1 + self.pop_g2 + self.pop_exc

    def grid_pops(self) -> np.ndarray:
        """(N, 4) populations in ClassState column order"""
        return np.stack([
            self.pop_g1,
            self.pop_g2,
            self.pop_exc - self.pop_bottleneck,
            self.pop_bottleneck,
        ], axis=1)

    def with_od(self, od: np.ndarray) -> 'Spectrum':
        return replace(self, od=od, classes=None)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'detuning_MHz': self.detuning,
            'od': self.od,
            'pop_g1': self.pop_g1,
            'pop_g2': self.pop_g2,
            'pop_exc': self.pop_exc,
            'pop_bottleneck': self.pop_bottleneck,
        })


def inhomogeneous_profile(grid: DetuningGrid, fwhm: Optional[float],
                          center: float = 0.0) -> np.ndarray:
    """Gaussian inhomogeneous line normalized to 1 at its peak (flat when fwhm is None)"""
    if fwhm is None:
        return np.ones(grid.size)
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    return np.exp(-0.5 * ((grid.values - center) / sigma) ** 2)


def baseline_spectrum(peak_od: float, passes: int, grid: DetuningGrid,
                      ion: Optional[IonClass] = None,
                      profile_fwhm: Optional[float] = None,
                      profile_center: float = 0.0) -> Spectrum:
    """
    Unpumped spectrum with both ground states equally occupied.

    Args:
        peak_od: Single-pass peak optical depth
        passes: Number of passes through the crystal
        grid: Detuning grid
        ion: Ion class (for the hole linewidth resolution check)
        profile_fwhm: Optional Gaussian inhomogeneous FWHM (MHz)
        profile_center: Centre of that profile (MHz)

    Returns:
        Spectrum with OD = peak_od * passes * profile
    """
    ion = ion or IonClass()
    if peak_od <= 0:
        raise GridRangeError(f"peak_od must be positive, got {peak_od}")
    if passes < 1:
        raise GridRangeError(f"passes must be >= 1, got {passes}")
    if grid.step > ion.hole_fwhm / 4:
        raise UnderResolvedError(
            f"grid step {grid.step:g} MHz does not resolve the {ion.hole_fwhm:g} MHz hole "
            f"(need <= {ion.hole_fwhm / 4:g} MHz)")

    od = peak_od * passes * inhomogeneous_profile(grid, profile_fwhm, profile_center)
    half = np.full(grid.size, 0.5)
    zero = np.zeros(grid.size)
    logger.debug(f"Baseline spectrum: OD {peak_od * passes:g} on {grid.size} channels")
    return Spectrum(grid=grid, od=od, pop_g1=half, pop_g2=half, pop_exc=zero, density=od)


def synthetic_spectrum(grid: DetuningGrid, od: np.ndarray, reference_od: float) -> Spectrum:
    """
    Wrap a computed OD profile in a Spectrum.

    Populations are nominal: the fraction of the reference OD still absorbing
    is split evenly over g1 and g2, and the removed part is counted in g2.
    """
    od = np.asarray(od, dtype=float)
    reference_od = max(float(reference_od), 1e-300)
    g1 = np.clip(0.5 * od / reference_od, 0.0, 1.0)
    return Spectrum(
        grid=grid,
        od=od,
        pop_g1=g1,
        pop_g2=1.0 - g1,
        pop_exc=np.zeros(grid.size),
        density=np.full(grid.size, reference_od),
    )
