"""
Pulse propagation through an absorption spectrum

The medium's transfer function has amplitude exp(-od/2) and the minimum
phase obtained from the Hilbert transform of its log-amplitude, which keeps
the impulse response causal. The output field is the inverse FFT of the
input spectrum times the transfer function; echoes of a comb with spacing
Delta appear at m/Delta.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import hilbert

from ..core.errors import AliasingError, GridRangeError, UnderResolvedError
from ..core.logging_config import get_logger
from ..material.spectrum import Spectrum

logger = get_logger(__name__)

# Intensity time-bandwidth product of a Gaussian pulse
TIME_BANDWIDTH = 2.0 * np.log(2.0) / np.pi

# Input durations used by the efficient and broadband memories (ns)
PULSE_PRESETS = {'efficient': 80.0, 'broadband': 25.0}


class InputPulse(BaseModel):
    """Gaussian input pulse"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    duration: float = Field(default=80.0, gt=0, description="Intensity FWHM (ns)")
    center: float = Field(default=0.0, description="Carrier detuning (MHz)")

    @classmethod
    def preset(cls, name: str, center: float = 0.0) -> 'InputPulse':
        return cls(duration=PULSE_PRESETS[name], center=center)

    @property
    def bandwidth(self) -> float:
        """Intensity spectrum FWHM (MHz)"""
        return TIME_BANDWIDTH / (self.duration * 1e-3)


@dataclass(frozen=True, eq=False)
class EchoTrace:
    """
    Output intensity after the medium, normalized to the input pulse energy.

    Attributes:
        time_ns: Time axis, input pulse centred at 0
        intensity: Output intensity per sample (sums to the output energy)
        input_intensity: Input intensity per sample (sums to 1)
        spacing: Comb spacing used for the echo windows (MHz)
        transmission: Energy in the window around t = 0
        echo_efficiencies: (order, efficiency) per echo
        peak_times_ns: (order, interpolated peak time) per echo
        precursor: Largest output intensity well before the input, over the input peak
    """
    time_ns: np.ndarray
    intensity: np.ndarray
    input_intensity: np.ndarray
    spacing: Optional[float]
    transmission: float
    echo_efficiencies: Tuple[Tuple[int, float], ...]
    peak_times_ns: Tuple[Tuple[int, float], ...]
    precursor: float

    def efficiency(self, order: int = 1) -> float:
        for m, eta in self.echo_efficiencies:
            if m == order:
                return eta
        return 0.0

    def peak_time(self, order: int = 1) -> float:
        for m, t in self.peak_times_ns:
            if m == order:
                return t
        raise KeyError(order)

    @property
    def total_energy(self) -> float:
        return float(np.sum(self.intensity))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'time_ns': self.time_ns,
            'input': self.input_intensity,
            'output': self.intensity,
        })


def estimate_spacing(spectrum: Spectrum) -> Optional[float]:
    """
    Dominant period of the OD profile (MHz), None for a featureless spectrum.

    Uses the strongest non-DC FFT bin, refined by parabolic interpolation.
    """
    od = spectrum.od - np.mean(spectrum.od)
    power = np.abs(np.fft.rfft(od))
    if len(power) < 3 or np.max(power[1:]) <= 1e-9 * max(1.0, float(np.mean(spectrum.od))) * len(od):
        return None
    k = int(np.argmax(power[1:])) + 1
    if 1 < k < len(power) - 1:
        a, b, c = power[k - 1], power[k], power[k + 1]
        denom = a - 2 * b + c
        if denom != 0:
            k = k + 0.5 * (a - c) / denom
    return float(spectrum.grid.span / k)


def _peak_time(time: np.ndarray, intensity: np.ndarray, mask: np.ndarray) -> float:
    """Peak position in a window, by a parabola through the log-intensity"""
    idx = np.flatnonzero(mask)
    i = idx[int(np.argmax(intensity[idx]))]
    if i <= 0 or i >= len(time) - 1:
        return float(time[i])
    y = np.log(np.maximum(intensity[i - 1:i + 2], 1e-300))
    denom = y[0] - 2 * y[1] + y[2]
    if denom >= 0:
        return float(time[i])
    shift = 0.5 * (y[0] - y[2]) / denom
    return float(time[i] + shift * (time[1] - time[0]))


def transfer_function(od: np.ndarray) -> np.ndarray:
    """Minimum-phase transfer function exp(-od/2 + i*phase) on an ascending grid"""
    log_amp = -0.5 * np.asarray(od, dtype=float)
    phase = -np.imag(hilbert(log_amp))
    return np.exp(log_amp + 1j * phase)


def propagate(spectrum: Spectrum, pulse: InputPulse, spacing: Optional[float] = None,
              orders: int = 3) -> EchoTrace:
    """
    Propagate a Gaussian pulse through the spectrum.

    Args:
        spectrum: Absorption spectrum (OD per channel)
        pulse: Input pulse
        spacing: Comb spacing for the echo windows, estimated when omitted
        orders: Number of echoes to integrate

    Returns:
        EchoTrace with transmission and per-echo efficiencies

    Raises:
        UnderResolvedError: pulse spectrum too wide or too narrow for the grid
        AliasingError: requested echoes do not fit in the FFT time window
    """
    grid = spectrum.grid
    bandwidth = pulse.bandwidth
    if bandwidth >= grid.span / 2:
        raise UnderResolvedError(
            f"pulse bandwidth {bandwidth:.3g} MHz exceeds half the grid span {grid.span / 2:g} MHz")
    if bandwidth < 4 * grid.step:
        raise UnderResolvedError(
            f"grid step {grid.step:g} MHz does not resolve the {bandwidth:.3g} MHz pulse spectrum")
    if not grid.contains(pulse.center):
        raise GridRangeError(f"pulse centre {pulse.center:g} MHz outside grid")

    if spacing is None:
        spacing = estimate_spacing(spectrum)
        orders = orders if spacing is not None else 0

    window_us = 1.0 / grid.step
    if spacing is not None and orders > 0 and (orders + 0.5) / spacing >= window_us / 2:
        raise AliasingError(
            f"echo {orders} at {orders / spacing * 1e3:.4g} ns wraps past the "
            f"{window_us / 2 * 1e3:.4g} ns time window; refine the grid step")

    tau_us = pulse.duration * 1e-3
    sigma_t = tau_us / (2.0 * np.sqrt(np.log(2.0)))
    field_in = np.exp(-2.0 * (np.pi * sigma_t * (grid.values - pulse.center)) ** 2)
    h = transfer_function(spectrum.od)

    time_us = np.fft.fftshift(np.fft.fftfreq(grid.size, d=grid.step))
    e_in = np.fft.fftshift(np.fft.ifft(field_in))
    e_out = np.fft.fftshift(np.fft.ifft(field_in * h))
    i_in = np.abs(e_in) ** 2
    norm = np.sum(i_in)
    i_in = i_in / norm
    i_out = np.abs(e_out) ** 2 / norm
    time_ns = time_us * 1e3

    if spacing is not None:
        half = 0.5e3 / spacing
        transmission = float(np.sum(i_out[np.abs(time_ns) <= half]))
        efficiencies, peaks = [], []
        for m in range(1, orders + 1):
            mask = np.abs(time_ns - m * 2 * half) <= half
            efficiencies.append((m, float(np.sum(i_out[mask]))))
            peaks.append((m, _peak_time(time_ns, i_out, mask)))
    else:
        transmission = float(np.sum(i_out))
        efficiencies, peaks = [], []

    before = time_ns < -3.0 * pulse.duration
    precursor = float(np.max(i_out[before]) / np.max(i_in)) if np.any(before) else 0.0
    logger.debug(f"Propagated {pulse.duration:g} ns pulse: T={transmission:.4g}, "
                 f"echoes={efficiencies}")
    return EchoTrace(
        time_ns=time_ns,
        intensity=i_out,
        input_intensity=i_in,
        spacing=spacing,
        transmission=transmission,
        echo_efficiencies=tuple(efficiencies),
        peak_times_ns=tuple(peaks),
        precursor=precursor,
    )
