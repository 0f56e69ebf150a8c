"""
Pump hardware limits

Double-pass AOM (frequency shift doubled in optics), multi-tone EOM and an
etalon selecting which sidebands reach the crystal.
"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class HardwareLimits(BaseModel):
    """RF/optical limits of the pump chain"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    aom_bandwidth: float = Field(default=50.0, gt=0, description="AOM RF modulation range (MHz)")
    aom_center: float = Field(default=80.0, gt=0, description="AOM RF centre frequency (MHz)")
    aom_double_pass: bool = Field(default=True)
    eom_max_tones: int = Field(default=3, ge=1)
    eom_extinction: float = Field(default=20.0, gt=1, description="Suppressed/active tone amplitude ratio")
    eom_gain: float = Field(default=1.0, gt=0, description="Sideband amplitude per unit drive")
    etalon_bandwidth: float = Field(default=500.0, gt=0, description="Etalon passband (MHz)")
    etalon_center: Optional[float] = Field(default=None, description="Passband centre; None = centred on the windows")

    @property
    def pass_factor(self) -> float:
        return 2.0 if self.aom_double_pass else 1.0

    @property
    def optical_span(self) -> float:
        """Optical detuning range reachable by the AOM alone"""
        return self.aom_bandwidth * self.pass_factor

    def rf_for(self, optical: float) -> float:
        """AOM drive frequency for an optical offset"""
        return self.aom_center + optical / self.pass_factor

    def rf_in_range(self, rf: float, tol: float = 1e-9) -> bool:
        return abs(rf - self.aom_center) <= self.aom_bandwidth / 2 + tol
