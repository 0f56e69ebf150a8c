"""
AFC module

Square combs, the analytic efficiency, FFT propagation, comb metrics,
photon counting and the storage pipeline.
"""
from .analysis import CombMetrics, comb_metrics
from .comb import AFCSpec, efficiency_analytic, optimal_depth, optimal_finesse, square_comb
from .counting import CountStats, count_histogram, count_statistics
from .propagation import EchoTrace, InputPulse, estimate_spacing, propagate, transfer_function
from .store import CombSource, StoreResult, run_store

__all__ = [
    'CombMetrics', 'comb_metrics',
    'AFCSpec', 'efficiency_analytic', 'optimal_depth', 'optimal_finesse', 'square_comb',
    'CountStats', 'count_histogram', 'count_statistics',
    'EchoTrace', 'InputPulse', 'estimate_spacing', 'propagate', 'transfer_function',
    'CombSource', 'StoreResult', 'run_store',
]
