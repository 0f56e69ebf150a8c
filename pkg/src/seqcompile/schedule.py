"""
RF schedule

One repetition of AOM chirp segments plus the static EOM tones, repeated
``repetitions`` times. Optical detunings follow from the AOM centre, the
double-pass factor and the EOM sidebands passing the etalon.
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..pumping.rate_model import PumpPulse

# Segment tone index meaning "every transmitted tone"
ALL_TONES = -1


class ScheduleMode(str, Enum):
    AOM = "aom"
    BROADBAND = "broadband"
    MULTIWINDOW = "multiwindow"


class Envelope(str, Enum):
    SECH = "sech"
    GAUSSIAN = "gaussian"


class AomSegment(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    t_start_ms: float = Field(ge=0)
    t_stop_ms: float = Field(ge=0)
    f_start_MHz: float
    f_stop_MHz: float
    envelope: Envelope = Envelope.SECH
    amplitude: float = Field(default=1.0, ge=0)
    tone: int = Field(default=ALL_TONES, ge=ALL_TONES)
    window: int = Field(default=0, ge=0)
    spacing: float = Field(default=0.0, ge=0, description="Pumped-line spacing of the window (MHz)")

    @property
    def duration(self) -> float:
        return self.t_stop_ms - self.t_start_ms

    @property
    def rf_center(self) -> float:
        return 0.5 * (self.f_start_MHz + self.f_stop_MHz)


class EomTone(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    frequency_MHz: float = Field(gt=0)
    amplitude: float = Field(default=1.0, ge=0)


class RFSchedule(BaseModel):
    """Compiled pump schedule"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    mode: ScheduleMode = ScheduleMode.AOM
    repetitions: int = Field(default=0, ge=0)
    aom_center: float = Field(default=80.0, gt=0)
    double_pass: bool = True
    etalon_center: Optional[float] = None
    etalon_bandwidth: Optional[float] = Field(default=None, gt=0)
    eom_extinction: float = Field(default=20.0, gt=1)
    carrier_blocked: bool = False
    aom_segments: List[AomSegment] = Field(default_factory=list)
    eom_tones: List[EomTone] = Field(default_factory=list)

    @model_validator(mode='after')
    def _check_segments(self) -> 'RFSchedule':
        previous = 0.0
        for index, segment in enumerate(self.aom_segments):
            if segment.t_stop_ms < segment.t_start_ms:
                raise ValueError(f"segment {index} ends before it starts")
            if segment.t_start_ms < previous - 1e-12:
                raise ValueError(f"segment {index} overlaps the previous one")
            if segment.tone >= len(self.eom_tones):
                raise ValueError(f"segment {index} uses undefined tone {segment.tone}")
            previous = segment.t_stop_ms
        return self

    @property
    def pass_factor(self) -> float:
        return 2.0 if self.double_pass else 1.0

    @property
    def repetition_ms(self) -> float:
        return self.aom_segments[-1].t_stop_ms if self.aom_segments else 0.0

    @property
    def total_duration_ms(self) -> float:
        return self.repetition_ms * self.repetitions

    def transmits(self, optical: float) -> bool:
        """Whether the etalon passes an optical tone"""
        if self.etalon_center is None or self.etalon_bandwidth is None:
            return True
        return abs(optical - self.etalon_center) <= self.etalon_bandwidth / 2 + 1e-9

    def optical_tones(self) -> List[float]:
        """Optical tone offsets reaching the crystal, carrier included when transmitted"""
        tones = [0.0] if not self.carrier_blocked and self.transmits(0.0) else []
        for tone in self.eom_tones:
            tones.extend(x for x in (tone.frequency_MHz, -tone.frequency_MHz) if self.transmits(x))
        return sorted(tones)

    def segment_offset(self, segment: AomSegment) -> float:
        """Optical shift of a segment's chirp centre"""
        return (segment.rf_center - self.aom_center) * self.pass_factor

    def segment_tones(self, segment: AomSegment) -> Tuple[List[float], List[float]]:
        """(active, leaking) optical tones while a segment plays"""
        transmitted = self.optical_tones()
        if segment.tone == ALL_TONES:
            return transmitted, []
        f = self.eom_tones[segment.tone].frequency_MHz
        active = [x for x in transmitted if abs(abs(x) - f) <= 1e-9]
        leaking = [x for x in transmitted if x not in active]
        return active, leaking

    def pump_pulses(self) -> List[PumpPulse]:
        """Optical pump pulses of one repetition, leakage from suppressed tones included"""
        pulses = []
        for segment in self.aom_segments:
            offset = self.segment_offset(segment)
            delta_p = abs(segment.f_stop_MHz - segment.f_start_MHz) * self.pass_factor
            adiabatic = segment.envelope is Envelope.SECH
            active, leaking = self.segment_tones(segment)
            for tone in active:
                pulses.append(PumpPulse(tone + offset, delta_p, segment.duration,
                                        segment.amplitude, adiabatic))
            for tone in leaking:
                pulses.append(PumpPulse(tone + offset, delta_p, segment.duration,
                                        segment.amplitude / self.eom_extinction, adiabatic,
                                        leak=True))
        return pulses
