"""
Commensurate intrinsic pumping conditions

All holes and anti-holes of a single burn land on comb troughs or teeth when
delta_e / Delta is an integer and delta_g / Delta, |delta_g - delta_e| / Delta
and (delta_g + delta_e) / Delta are half-integers. The mismatch is half the
sum of the four distances to those values: 0 is a perfect match, 1 the worst.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import RegimeError
from ..core.logging_config import get_logger
from ..material.ion import FieldConfig, IonClass, zeeman_splittings

logger = get_logger(__name__)


@dataclass(frozen=True)
class CommensurateResidues:
    n1: float
    n2: float
    n3: float
    n4: float
    dist1: float
    dist2: float
    dist3: float
    dist4: float

    @property
    def distances(self) -> Tuple[float, float, float, float]:
        return self.dist1, self.dist2, self.dist3, self.dist4


def _distance_to_integer(x):
    return np.abs(x - np.round(x))


def _quotients(B, delta, ion: IonClass):
    delta_e = ion.mu_e * B
    delta_g = ion.mu_g * B
    n1 = delta_e / delta
    n2 = delta_g / delta - 0.5
    n3 = np.abs(delta_g - delta_e) / delta - 0.5
    n4 = (delta_g + delta_e) / delta - 0.5
    return n1, n2, n3, n4


def _check_domain(B: float, delta: float):
    if B <= 0 or delta <= 0:
        raise RegimeError(f"field and spacing must be positive, got B={B}, delta={delta}")


def residues(B: float, delta: float, ion: Optional[IonClass] = None) -> CommensurateResidues:
    """Quotients of the four conditions and their distances to admissible values"""
    ion = ion or IonClass()
    _check_domain(B, delta)
    quotients = _quotients(float(B), float(delta), ion)
    dists = [float(_distance_to_integer(n)) for n in quotients]
    return CommensurateResidues(*[float(n) for n in quotients], *dists)


def mismatch_values(B, delta, ion: Optional[IonClass] = None) -> np.ndarray:
    """Vectorized mismatch over broadcastable field and spacing arrays"""
    ion = ion or IonClass()
    B = np.asarray(B, dtype=float)
    delta = np.asarray(delta, dtype=float)
    total = sum(_distance_to_integer(n) for n in _quotients(B, delta, ion))
    return total / 2.0


def mismatch(B: float, delta: float, ion: Optional[IonClass] = None) -> float:
    """(dist1 + dist2 + dist3 + dist4) / 2"""
    _check_domain(B, delta)
    return float(mismatch_values(B, delta, ion))


def mean_distance_match(B: float, delta: float, ion: Optional[IonClass] = None) -> float:
    """Alternative match score 1 - (sum of distances) / 4"""
    return 1.0 - sum(residues(B, delta, ion).distances) / 4.0


def intrinsic_delta(B: float, ion: Optional[IonClass] = None) -> float:
    """Comb spacing for intrinsic pumping: 2 (delta_g - delta_e)"""
    ion = ion or IonClass()
    if B <= 0:
        raise RegimeError(f"field must be positive, got {B}")
    delta_e, delta_g = zeeman_splittings(ion, FieldConfig(B=B))
    if delta_g <= delta_e:
        raise RegimeError("intrinsic pumping needs delta_g > delta_e")
    return 2.0 * (delta_g - delta_e)


def linewidth_feasible(delta: float, ion: Optional[IonClass] = None) -> bool:
    """False (with a warning) when half the spacing is under two hole linewidths"""
    ion = ion or IonClass()
    ok = delta / 2 >= 2 * ion.hole_fwhm
    if not ok:
        logger.warning(f"Comb spacing {delta:g} MHz too narrow for the "
                       f"{ion.hole_fwhm:g} MHz hole linewidth")
    return ok


@dataclass(frozen=True)
class AuditPoint:
    B: float
    storage_ns: float
    delta: float
    mismatch: float
    match: float
    match_mean_distance: float
    quoted_match: float

    def to_dict(self) -> dict:
        return {
            'B_G': self.B,
            'storage_ns': self.storage_ns,
            'delta_MHz': self.delta,
            'mismatch': self.mismatch,
            'match': self.match,
            'match_mean_distance': self.match_mean_distance,
            'quoted_match': self.quoted_match,
        }


# (field G, storage time ns, quoted match) reported for Tm:YAG
QUOTED_POINTS = ((630.0, 250.0, 0.965), (158.0, 1000.0, 0.96), (647.5, 1000.0, 0.988))


def audit_points(ion: Optional[IonClass] = None,
                 points: Tuple[Tuple[float, float, float], ...] = QUOTED_POINTS) -> List[AuditPoint]:
    """Computed match values next to the quoted ones"""
    ion = ion or IonClass()
    report = []
    for B, storage_ns, quoted in points:
        delta = 1000.0 / storage_ns
        value = mismatch(B, delta, ion)
        report.append(AuditPoint(B=B, storage_ns=storage_ns, delta=delta, mismatch=value,
                                 match=1.0 - value,
                                 match_mean_distance=mean_distance_match(B, delta, ion),
                                 quoted_match=quoted))
    return report
