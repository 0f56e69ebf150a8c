"""
Storage pipeline

pump -> wait -> propagate -> count. The comb comes either from the pumping
simulation, from an ideal square comb, or is the untouched baseline.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..core.errors import RegimeError
from ..core.logging_config import get_logger
from ..material.holes import HolePattern
from ..material.ion import IonClass
from ..material.spectrum import DetuningGrid, Spectrum
from ..pumping.decay import NoiseModel, model_noise
from ..pumping.pulses import PulseTrain, PumpTarget
from ..pumping.rate_model import relax, simulate_pumping
from .analysis import CombMetrics, comb_metrics
from .comb import AFCSpec, square_comb
from .counting import CountStats, count_statistics
from .propagation import EchoTrace, InputPulse, propagate

logger = get_logger(__name__)


class CombSource(str, Enum):
    PUMPED = "pumped"
    IDEAL = "ideal"
    NONE = "none"


@dataclass(frozen=True)
class StoreResult:
    spectrum: Spectrum
    trace: EchoTrace
    counts: CountStats
    noise_per_window: float
    metrics: Optional[CombMetrics] = None
    peak_rate: Optional[float] = None

    @property
    def efficiency(self) -> float:
        return self.trace.efficiency(1)

    def summary(self) -> dict:
        data = {
            'efficiency': self.efficiency,
            'transmission': self.trace.transmission,
            'echo_efficiencies': {str(m): eta for m, eta in self.trace.echo_efficiencies},
            'echo_peak_ns': {str(m): t for m, t in self.trace.peak_times_ns},
            'precursor': self.trace.precursor,
            'noise_per_window': self.noise_per_window,
            'converged': self.spectrum.converged,
            'counts': self.counts.to_dict(),
        }
        if self.peak_rate is not None:
            data['peak_rate'] = self.peak_rate
        if self.metrics is not None:
            data['comb'] = {
                'd0': self.metrics.d0,
                'finesse': self.metrics.finesse,
                'finesse_fwhm': self.metrics.finesse_fwhm,
                'tooth_od': self.metrics.tooth_od,
                'efficiency_analytic': self.metrics.efficiency,
            }
        return data


def _static_noise(noise: NoiseModel) -> float:
    """Background without a pumping history: the calibrated total when given"""
    if noise.target_total is not None:
        return noise.target_total
    return noise.leak + noise.dark


def run_store(baseline: Spectrum, pulse: InputPulse, *, source: CombSource = CombSource.PUMPED,
              comb: Optional[AFCSpec] = None, target: Optional[PumpTarget] = None,
              train: Optional[PulseTrain] = None, pattern: Optional[HolePattern] = None,
              ion: Optional[IonClass] = None, noise: Optional[NoiseModel] = None,
              mean_photon: float = 1.0, events: int = 10_000, window: float = 100.0,
              seed: int = 0, threads: int = 1) -> StoreResult:
    """
    Run one storage experiment.

    Args:
        baseline: Unpumped spectrum (sets the grid and pre-pumping OD)
        pulse: Input pulse
        source: Where the comb comes from
        comb: Square comb for the ideal source
        target, train, pattern: Pumping inputs for the pumped source
        ion: Ion constants
        noise: Background count model
        mean_photon, events, window, seed, threads: Counting parameters

    Returns:
        StoreResult with trace, counts and comb metrics
    """
    ion = ion or IonClass()
    noise = noise or NoiseModel()
    source = CombSource(source)
    grid: DetuningGrid = baseline.grid
    metrics = None
    spacing = None

    if source is CombSource.PUMPED:
        if target is None or train is None or pattern is None:
            raise RegimeError("pumped source needs a pump target, pulse train and hole pattern")
        pumped = simulate_pumping(baseline, target.model_copy(update={'wait_time': 0.0}),
                                  train, pattern, ion)
        spectrum = relax(pumped, target.wait_time, ion)
        noise_level = model_noise(pumped, target.wait_time, window, noise)
        window0 = target.windows[0]
        spacing = target.spacing_for(window0)
        metrics = comb_metrics(spectrum, spacing, center=window0.center,
                               span=target.line_count(window0) * spacing)
    elif source is CombSource.IDEAL:
        if comb is None:
            raise RegimeError("ideal source needs an AFC spec")
        spectrum = square_comb(comb, grid)
        spacing = comb.spacing
        noise_level = _static_noise(noise)
        metrics = comb_metrics(spectrum, spacing, center=comb.centers[0],
                               span=None if comb.bandwidth is None
                               else round(comb.bandwidth / spacing) * spacing)
    else:
        spectrum = baseline
        noise_level = _static_noise(noise)

    trace = propagate(spectrum, pulse, spacing=spacing, orders=3 if spacing else 0)
    counts = count_statistics(trace.efficiency(1), mean_photon, events, noise_level,
                              seed=seed, window=window, threads=threads)
    logger.info(f"Store ({source.value}): eta={trace.efficiency(1):.4f}, SNR={counts.snr:.4g}")
    return StoreResult(spectrum=spectrum, trace=trace, counts=counts,
                       noise_per_window=noise_level, metrics=metrics,
                       peak_rate=train.peak_rate if source is CombSource.PUMPED else None)
