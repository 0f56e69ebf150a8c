"""
Mismatch maps and field search

Maps evaluate the mismatch on a (field, spacing) grid, optionally with a
storage-time axis (t = 1000 / Delta ns). Rows are computed in parallel
chunks and reassembled in order, so the result does not depend on the
thread count. The field search scans a grid and refines every local
minimum with a golden-section search.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from ..core.errors import GridRangeError
from ..core.logging_config import get_logger
from ..material.ion import IonClass
from .conditions import mismatch_values

logger = get_logger(__name__)

# Field rows evaluated per worker task
ROWS_PER_TASK = 64


def axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive evenly spaced axis; a single point when lo == hi"""
    if step <= 0 or hi < lo:
        raise GridRangeError(f"empty range [{lo}, {hi}] @ {step}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


@dataclass(frozen=True, eq=False)
class MismatchMap:
    """Mismatch over field (rows) and spacing or storage time (columns)"""
    fields: np.ndarray
    axis_values: np.ndarray
    storage_time: bool
    values: np.ndarray

    def __post_init__(self):
        for name in ('fields', 'axis_values', 'values'):
            array = np.array(getattr(self, name), dtype=float, copy=True)
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    @property
    def spacings(self) -> np.ndarray:
        """Comb spacing of each column (MHz)"""
        return 1000.0 / self.axis_values if self.storage_time else self.axis_values

    def minima(self, threshold: float = 1e-6) -> List[Tuple[float, float, float]]:
        """(B, axis value, mismatch) of points at or below ``threshold``"""
        rows, cols = np.nonzero(self.values <= threshold)
        return [(float(self.fields[r]), float(self.axis_values[c]), float(self.values[r, c]))
                for r, c in zip(rows, cols)]

    def to_frame(self) -> pd.DataFrame:
        b, y = np.meshgrid(self.fields, self.axis_values, indexing='ij')
        column = 'storage_ns' if self.storage_time else 'delta_MHz'
        return pd.DataFrame({'B_G': b.ravel(), column: y.ravel(), 'mismatch': self.values.ravel()})


def mismatch_map(b_range: Tuple[float, float, float], y_range: Tuple[float, float, float],
                 ion: Optional[IonClass] = None, storage_time: bool = True,
                 threads: int = 1) -> MismatchMap:
    """
    Dense mismatch map.

    Args:
        b_range: (lo, hi, step) of the field axis (G)
        y_range: (lo, hi, step) of the storage-time (ns) or spacing (MHz) axis
        ion: Ion constants
        storage_time: Interpret y_range as storage time instead of spacing
        threads: Worker threads

    Returns:
        MismatchMap with values[i, j] = mismatch(fields[i], spacing[j])
    """
    ion = ion or IonClass()
    fields = axis(*b_range)
    ys = axis(*y_range)
    if fields[0] <= 0 or ys[0] <= 0:
        raise GridRangeError("field and spacing axes must be positive")
    spacings = 1000.0 / ys if storage_time else ys
    values = np.empty((len(fields), len(ys)))

    def rows(start: int) -> Tuple[int, np.ndarray]:
        block = fields[start:start + ROWS_PER_TASK, None]
        return start, mismatch_values(block, spacings[None, :], ion)

    starts = range(0, len(fields), ROWS_PER_TASK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [executor.submit(rows, s) for s in starts]
            for future in as_completed(futures):
                start, block = future.result()
                values[start:start + len(block)] = block
    else:
        for s in starts:
            start, block = rows(s)
            values[start:start + len(block)] = block

    logger.info(f"Mismatch map {len(fields)} x {len(ys)} computed")
    return MismatchMap(fields=fields, axis_values=ys, storage_time=storage_time, values=values)


def _refine(f, a: float, b: float, c: float, fb: float) -> Tuple[float, float]:
    """Golden-section refinement inside (a, c); keeps the grid point if no better"""
    try:
        result = minimize_scalar(f, bracket=(a, b, c), method='golden',
                                 options={'xtol': 0.01 / max(b, 1e-12)})
    except (ValueError, RuntimeError):
        return b, fb
    x = float(result.x)
    if a <= x <= c and float(result.fun) < fb:
        return x, float(result.fun)
    return b, fb


def search_field(delta: float, b_range: Tuple[float, float], ion: Optional[IonClass] = None,
                 top_k: int = 5, step: Optional[float] = None) -> List[Tuple[float, float]]:
    """
    Fields with the best commensurability for a comb spacing.

    Args:
        delta: Comb spacing (MHz)
        b_range: (lo, hi) field range (G)
        ion: Ion constants
        top_k: Number of results
        step: Scan step (G), defaults to 1/2000 of the range

    Returns:
        Up to top_k (B, mismatch) pairs sorted by mismatch
    """
    ion = ion or IonClass()
    lo, hi = b_range
    if hi <= lo or lo <= 0:
        raise GridRangeError(f"empty or non-positive field range [{lo}, {hi}]")
    step = step or (hi - lo) / 2000.0
    fields = axis(lo, hi, step)
    values = mismatch_values(fields, delta, ion)

    def f(b: float) -> float:
        return float(mismatch_values(min(max(b, lo), hi), delta, ion))

    candidates = []
    n = len(fields)
    for i in range(n):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i < n - 1 else np.inf
        if values[i] <= left and values[i] <= right:
            if 0 < i < n - 1:
                candidates.append(_refine(f, fields[i - 1], fields[i], fields[i + 1], values[i]))
            else:
                candidates.append((float(fields[i]), float(values[i])))

    candidates.sort(key=lambda item: (item[1], item[0]))
    results: List[Tuple[float, float]] = []
    for b, value in candidates:
        if all(abs(b - kept) > 2 * step for kept, _ in results):
            results.append((b, value))
        if len(results) >= top_k:
            break
    logger.info(f"Field search at {delta:g} MHz: best {results[:1]}")
    return results
