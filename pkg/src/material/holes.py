"""
Hole and anti-hole pattern of a single-frequency burn

Burning at f0 empties the g1 state of every class that absorbs at f0. The
three classes addressed through the two g1 lines leave holes at 0 and
+-delta_e; the population they shelve in g2 adds absorption (anti-holes) at
+-delta_g, +-(delta_g - delta_e) and +-(delta_g + delta_e).
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import RegimeError
from ..core.logging_config import get_logger
from .ion import IonClass
from .spectrum import DetuningGrid, Spectrum, synthetic_spectrum

logger = get_logger(__name__)

# Offsets closer than this are one feature
MERGE_TOL = 1e-9


class FeatureKind(str, Enum):
    HOLE = "hole"
    ANTIHOLE = "antihole"


class Lineshape(str, Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"


@dataclass(frozen=True)
class HoleFeature:
    offset: float
    kind: FeatureKind
    weight: float


@dataclass(frozen=True)
class HolePattern:
    """Signed spectral features around the burn frequency, sorted by offset"""
    features: Tuple[HoleFeature, ...]
    delta_e: float
    delta_g: float
    rel_crossed: float

    @property
    def holes(self) -> List[HoleFeature]:
        return [f for f in self.features if f.kind is FeatureKind.HOLE]

    @property
    def antiholes(self) -> List[HoleFeature]:
        return [f for f in self.features if f.kind is FeatureKind.ANTIHOLE]

    @property
    def offsets(self) -> List[float]:
        return [f.offset for f in self.features]

    def profile(self, grid: DetuningGrid, fwhm: float,
                lineshape: Lineshape = Lineshape.GAUSSIAN,
                center: float = 0.0) -> np.ndarray:
        """
        Signed feature profile on a grid: holes positive, anti-holes negative.

        Each feature is a line of unit peak height scaled by its weight.
        """
        nu = grid.values - center
        out = np.zeros(grid.size)
        for feature in self.features:
            sign = 1.0 if feature.kind is FeatureKind.HOLE else -1.0
            out += sign * feature.weight * _line(nu - feature.offset, fwhm, lineshape)
        return out


def _line(x: np.ndarray, fwhm: float, lineshape: Lineshape) -> np.ndarray:
    if Lineshape(lineshape) is Lineshape.LORENTZIAN:
        return 1.0 / (1.0 + (2.0 * x / fwhm) ** 2)
    return np.exp(-4.0 * np.log(2.0) * (x / fwhm) ** 2)


def _merge(signed: List[Tuple[float, float]]) -> Tuple[HoleFeature, ...]:
    """Combine coincident offsets into one feature with the net signed weight"""
    merged: Dict[float, float] = {}
    keys: List[float] = []
    for offset, weight in signed:
        for key in keys:
            if abs(key - offset) <= MERGE_TOL:
                merged[key] += weight
                break
        else:
            keys.append(offset)
            merged[offset] = weight

    features = []
    for offset in sorted(keys):
        net = merged[offset]
        if abs(net) <= MERGE_TOL:
            continue
        kind = FeatureKind.HOLE if net > 0 else FeatureKind.ANTIHOLE
        features.append(HoleFeature(offset=0.0 if abs(offset) <= MERGE_TOL else offset,
                                    kind=kind, weight=abs(net)))
    return tuple(features)


def hole_pattern(delta_e: float, delta_g: float, ion: Optional[IonClass] = None) -> HolePattern:
    """
    Hole/anti-hole pattern produced by burning at a single frequency.

    Hole weights are 1 (centre) and r (side holes); anti-hole pair weights
    are 1, r and r^2 for the +-(dg - de), +-dg and +-(dg + de) pairs with
    r = rel_crossed, scaled so the anti-holes hold ground_branching of the
    burnt population.

    Args:
        delta_e: Excited splitting (MHz)
        delta_g: Ground splitting (MHz)
        ion: Ion class supplying rel_crossed and ground_branching

    Returns:
        HolePattern, coincident features merged by net weight
    """
    ion = ion or IonClass()
    if delta_e < 0 or delta_g < 0:
        raise RegimeError(f"splittings must be >= 0, got ({delta_e}, {delta_g})")

    r = ion.rel_crossed
    holes = [(0.0, 1.0), (delta_e, r), (-delta_e, r)]
    raw = [
        (delta_g - delta_e, 1.0), (-(delta_g - delta_e), 1.0),
        (delta_g, r), (-delta_g, r),
        (delta_g + delta_e, r * r), (-(delta_g + delta_e), r * r),
    ]
    scale = ion.ground_branching * sum(w for _, w in holes) / sum(w for _, w in raw)
    signed = holes + [(offset, -scale * w) for offset, w in raw]
    return HolePattern(features=_merge(signed), delta_e=delta_e, delta_g=delta_g,
                       rel_crossed=r)


def burn_spectrum(pattern: HolePattern, grid: DetuningGrid, peak_od: float = 1.0,
                  depth: float = 0.5, ion: Optional[IonClass] = None,
                  fwhm: Optional[float] = None,
                  lineshape: Lineshape = Lineshape.GAUSSIAN,
                  center: float = 0.0) -> Spectrum:
    """
    OD trace after a single-frequency burn (hole-burning measurement).

    Args:
        pattern: Features to render
        grid: Detuning grid
        peak_od: Unburnt OD
        depth: Fractional depth of the central hole
        ion: Ion class (hole linewidth and optional hole-only secondary class)
        fwhm: Feature width, defaults to the ion's hole linewidth
        lineshape: Gaussian or Lorentzian features
        center: Burn frequency (MHz)

    Returns:
        Spectrum with OD = peak_od * (1 - depth * profile)
    """
    ion = ion or IonClass()
    fwhm = fwhm or ion.hole_fwhm
    profile = pattern.profile(grid, fwhm, lineshape, center)

    if ion.secondary_fraction > 0 and pattern.delta_e > 0:
        secondary_e = ion.secondary_mu_e * pattern.delta_e / ion.mu_e
        r = ion.rel_crossed
        nu = grid.values - center
        for offset, weight in ((0.0, 1.0), (secondary_e, r), (-secondary_e, r)):
            profile = profile + ion.secondary_fraction * weight * _line(nu - offset, fwhm, lineshape)

    od = np.clip(peak_od * (1.0 - depth * profile), 0.0, None)
    logger.debug(f"Burn spectrum with {len(pattern.features)} features")
    return synthetic_spectrum(grid, od, peak_od)
