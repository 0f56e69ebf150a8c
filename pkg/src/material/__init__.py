"""
Material module

Ion constants, Zeeman splittings, single-burn hole patterns and spectra.
"""
from .holes import FeatureKind, HoleFeature, HolePattern, Lineshape, burn_spectrum, hole_pattern
from .ion import FieldConfig, IonClass, splitting_ratio, zeeman_splittings
from .spectrum import (
    ClassState, DetuningGrid, GridConfig, Spectrum, baseline_spectrum,
    inhomogeneous_profile, synthetic_spectrum,
)

__all__ = [
    'FeatureKind', 'HoleFeature', 'HolePattern', 'Lineshape', 'burn_spectrum', 'hole_pattern',
    'FieldConfig', 'IonClass', 'splitting_ratio', 'zeeman_splittings',
    'ClassState', 'DetuningGrid', 'GridConfig', 'Spectrum', 'baseline_spectrum',
    'inhomogeneous_profile', 'synthetic_spectrum',
]
