"""
Commensurate module

Commensurability conditions, mismatch maps, field search and the intrinsic
pumping spacing rule.
"""
from .conditions import (
    QUOTED_POINTS, AuditPoint, CommensurateResidues, audit_points, intrinsic_delta,
    linewidth_feasible, mean_distance_match, mismatch, mismatch_values, residues,
)
from .search import MismatchMap, axis, mismatch_map, search_field

__all__ = [
    'QUOTED_POINTS', 'AuditPoint', 'CommensurateResidues', 'audit_points', 'intrinsic_delta',
    'linewidth_feasible', 'mean_distance_match', 'mismatch', 'mismatch_values', 'residues',
    'MismatchMap', 'axis', 'mismatch_map', 'search_field',
]
