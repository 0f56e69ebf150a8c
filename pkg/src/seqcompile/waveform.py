"""
AOM drive waveform of one segment

sech envelope with tanh chirp (adiabatic) or Gaussian envelope with linear
chirp, sampled for an arbitrary waveform generator.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..core.errors import RegimeError
from .schedule import AomSegment, Envelope

# Truncation parameter: envelope falls to sech(BETA) at the segment edges
DEFAULT_BETA = 5.3


@dataclass(frozen=True, eq=False)
class SampledWaveform:
    time_us: np.ndarray
    envelope: np.ndarray
    frequency_MHz: np.ndarray
    signal: np.ndarray


def sample_segment(segment: AomSegment, sample_rate: float = 500.0,
                   beta: float = DEFAULT_BETA) -> SampledWaveform:
    """
    Sample a segment's RF waveform.

    Args:
        segment: AOM segment
        sample_rate: Samples per microsecond
        beta: Edge truncation parameter

    Returns:
        SampledWaveform with time relative to the segment start
    """
    if sample_rate <= 2 * max(abs(segment.f_start_MHz), abs(segment.f_stop_MHz)):
        raise RegimeError(f"sample rate {sample_rate:g}/us below Nyquist for the segment")
    duration_us = segment.duration * 1e3
    n = max(2, int(round(duration_us * sample_rate)))
    t = np.linspace(0.0, duration_us, n)
    tau = 2.0 * t / duration_us - 1.0
    center = segment.rf_center
    half_sweep = 0.5 * (segment.f_stop_MHz - segment.f_start_MHz)

    if segment.envelope is Envelope.SECH:
        envelope = 1.0 / np.cosh(beta * tau)
        frequency = center + half_sweep * np.tanh(beta * tau) / np.tanh(beta)
    else:
        envelope = np.exp(-0.5 * (beta * tau / 2.0) ** 2)
        frequency = center + half_sweep * tau

    phase = 2.0 * np.pi * cumulative_trapezoid(frequency, t, initial=0.0)
    signal = segment.amplitude * envelope * np.sin(phase)
    return SampledWaveform(time_us=t, envelope=segment.amplitude * envelope,
                           frequency_MHz=frequency, signal=signal)
