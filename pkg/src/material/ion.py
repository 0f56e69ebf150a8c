"""
Ion class constants and Zeeman splittings

Material constants for a rare-earth ion with a doublet ground state and a
doublet excited state. Splittings grow linearly with the applied field.
"""
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Secondary class observed at 4500 G with a 6 MHz excited splitting
SECONDARY_MU_E = 6.0 / 4500.0


class IonClass(BaseModel):
    """Static material constants (defaults: Tm:YAG)"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    name: str = Field(default="Tm:YAG")
    mu_e: float = Field(default=0.006, gt=0, description="Excited splitting rate (MHz/G)")
    mu_g: float = Field(default=0.0285, gt=0, description="Ground splitting rate (MHz/G)")
    branching_ratio: float = Field(default=0.25, ge=0, le=1,
                                   description="Probability of decay through the bottleneck")
    ground_branching: float = Field(default=0.5, ge=0, le=1,
                                    description="Probability a relaxing ion lands in the other ground state")
    T_excited: float = Field(default=0.8, gt=0, description="Excited-state lifetime (ms)")
    T_bottleneck: float = Field(default=10.0, gt=0, description="Bottleneck lifetime (ms)")
    T_ground: float = Field(default=170.0, gt=0, description="Ground-state relaxation time (ms)")
    T2_opt: float = Field(default=38.0, gt=0, description="Optical coherence time (us)")
    hole_fwhm: float = Field(default=0.5, gt=0, description="Spectral hole linewidth (MHz)")
    rel_crossed: float = Field(default=0.25, gt=0, lt=1,
                               description="Spin-crossed / spin-conserved strength ratio")
    secondary_mu_e: float = Field(default=SECONDARY_MU_E, gt=0)
    secondary_fraction: float = Field(default=0.0, ge=0, le=1,
                                      description="Weight of the hole-only secondary class")

    @model_validator(mode='after')
    def _check_lifetimes(self) -> 'IonClass':
        if self.T_ground <= self.T_bottleneck:
            raise ValueError("T_ground must exceed T_bottleneck")
        return self


class FieldConfig(BaseModel):
    """Applied magnetic field"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    B: float = Field(default=0.0, ge=0, description="Field magnitude (G)")


def zeeman_splittings(ion: IonClass, field: FieldConfig) -> Tuple[float, float]:
    """
    Excited and ground doublet splittings at a field.

    Returns:
        (delta_e, delta_g) in MHz
    """
    return ion.mu_e * field.B, ion.mu_g * field.B


def splitting_ratio(ion: Optional[IonClass] = None) -> float:
    """Ground/excited splitting ratio, independent of field"""
    ion = ion or IonClass()
    return ion.mu_g / ion.mu_e
