"""
Pumping module

Pump pulse trains, the class-resolved rate model and noise estimates.
"""
from .decay import NoiseModel, calibrate_emission_scale, hole_decay, model_noise, noise_counts
from .pulses import (
    AmplitudeShape, ChirpShape, PulseTrain, PumpLine, PumpOrder, PumpTarget, PumpWindow,
    pump_weight,
)
from .rate_model import (
    PumpPulse, calibrate_peak_rate, line_offsets, optimize_peak_rate, relax, simulate_pumping,
    simulate_schedule,
)

__all__ = [
    'NoiseModel', 'calibrate_emission_scale', 'hole_decay', 'model_noise', 'noise_counts',
    'AmplitudeShape', 'ChirpShape', 'PulseTrain', 'PumpLine', 'PumpOrder', 'PumpTarget',
    'PumpWindow', 'pump_weight',
    'PumpPulse', 'calibrate_peak_rate', 'line_offsets', 'optimize_peak_rate', 'relax',
    'simulate_pumping', 'simulate_schedule',
]
