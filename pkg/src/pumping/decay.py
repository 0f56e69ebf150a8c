"""
Hole decay and pump-induced noise

Closed-form hole-depth relaxation and the expected background counts in a
detection window after pumping.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import RegimeError
from ..core.logging_config import get_logger
from ..material.ion import IonClass
from ..material.spectrum import Spectrum

logger = get_logger(__name__)

# Detection window the emission scale refers to (ns)
REFERENCE_WINDOW_NS = 100.0


class NoiseModel(BaseModel):
    """Background count sources per detection window"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    leak: float = Field(default=5.5e-4, ge=0, description="Pump leakage counts per window")
    dark: float = Field(default=1e-5, ge=0, description="Detector dark counts per window")
    T_radiative: float = Field(default=0.8, gt=0, description="Fluorescence decay time (ms)")
    emission_scale: float = Field(default=0.0, ge=0,
                                  description="Counts per 100 ns per unit excited fraction")
    target_total: Optional[float] = Field(default=None, gt=0,
                                          description="Calibrate emission_scale to this total")


def hole_decay(depth_fast: float, depth_slow: float, t: float,
               ion: Optional[IonClass] = None) -> float:
    """Hole depth after t ms: fast part decays with T_bottleneck, slow with T_ground"""
    ion = ion or IonClass()
    if t < 0:
        raise RegimeError(f"decay time must be >= 0, got {t}")
    return depth_fast * np.exp(-t / ion.T_bottleneck) + depth_slow * np.exp(-t / ion.T_ground)


def _radiating_fraction(spec: Spectrum) -> float:
    return float(np.mean(spec.pop_exc - spec.pop_bottleneck))


def noise_counts(spec_after_pump: Spectrum, t_w: float, window: float,
                 leak: float, dark: float, emission_scale: float = 0.0,
                 T_radiative: float = 0.8) -> float:
    """
    Expected noise counts in one detection window.

    Args:
        spec_after_pump: Spectrum right after the last pump pulse
        t_w: Wait time before detection (ms)
        window: Detection window (ns)
        leak: Pump leakage counts per window
        dark: Dark counts per window
        emission_scale: Spontaneous counts per 100 ns per unit excited fraction
        T_radiative: Fluorescence decay time (ms)

    Returns:
        spontaneous + leak + dark
    """
    if window <= 0:
        raise RegimeError(f"detection window must be positive, got {window}")
    spontaneous = (emission_scale * _radiating_fraction(spec_after_pump)
                   * np.exp(-t_w / T_radiative) * window / REFERENCE_WINDOW_NS)
    return float(spontaneous + leak + dark)


def calibrate_emission_scale(spec_after_pump: Spectrum, t_w: float, window: float,
                             target_total: float, leak: float, dark: float,
                             T_radiative: float = 0.8) -> float:
    """Emission scale that makes noise_counts equal ``target_total`` at t_w"""
    excess = target_total - leak - dark
    if excess < 0:
        raise RegimeError(f"target noise {target_total:g} below leak + dark {leak + dark:g}")
    unit = _radiating_fraction(spec_after_pump) * np.exp(-t_w / T_radiative) * window / REFERENCE_WINDOW_NS
    if unit <= 0:
        raise RegimeError("no excited population left to calibrate spontaneous emission against")
    scale = excess / unit
    logger.info(f"Calibrated emission scale {scale:.4g} for {target_total:g} counts/window")
    return float(scale)


def model_noise(spec_after_pump: Spectrum, t_w: float, window: float, model: NoiseModel) -> float:
    """noise_counts with the sources of a NoiseModel, calibrating first if asked"""
    scale = model.emission_scale
    if model.target_total is not None:
        scale = calibrate_emission_scale(spec_after_pump, t_w, window, model.target_total,
                                         model.leak, model.dark, model.T_radiative)
    return noise_counts(spec_after_pump, t_w, window, model.leak, model.dark,
                        scale, model.T_radiative)
