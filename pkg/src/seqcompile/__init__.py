"""
Sequence compiler module

Compiles pump targets into AOM/EOM RF schedules, checks their spectral
coverage and reads/writes schedule files.
"""
from .compiler import CoverageReport, LeakageWarning, compile_schedule, coverage
from .emit import dumps, emit, parse
from .hardware import HardwareLimits
from .schedule import ALL_TONES, AomSegment, EomTone, Envelope, RFSchedule, ScheduleMode
from .waveform import SampledWaveform, sample_segment

__all__ = [
    'CoverageReport', 'LeakageWarning', 'compile_schedule', 'coverage',
    'dumps', 'emit', 'parse',
    'HardwareLimits',
    'ALL_TONES', 'AomSegment', 'EomTone', 'Envelope', 'RFSchedule', 'ScheduleMode',
    'SampledWaveform', 'sample_segment',
]
