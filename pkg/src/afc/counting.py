"""
Photon counting statistics

Poisson sampling of signal and noise counts over many storage events. Every
chunk of events draws from its own Philox stream (jumped by chunk index), so
totals depend only on the seed and never on the number of worker threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from ..core.errors import RegimeError
from ..core.logging_config import get_logger
from .propagation import EchoTrace

logger = get_logger(__name__)

CHUNK_EVENTS = 100_000


@dataclass(frozen=True)
class CountStats:
    events: int
    mean_photon: float
    window: float
    signal_counts: int
    noise_counts: int
    snr: float
    eta: float
    noise_per_window: float

    @property
    def expected_snr(self) -> float:
        if self.noise_per_window <= 0:
            return float('inf')
        return self.eta * self.mean_photon / self.noise_per_window

    def to_dict(self) -> dict:
        return {
            'events': self.events,
            'mean_photon': self.mean_photon,
            'window_ns': self.window,
            'signal_counts': self.signal_counts,
            'noise_counts': self.noise_counts,
            'snr': self.snr,
            'eta': self.eta,
            'noise_per_window': self.noise_per_window,
        }


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(index + 1))


def _sample_chunk(seed: int, index: int, size: int, signal_mean: float,
                  noise_mean: float) -> Tuple[int, int]:
    rng = _stream(seed, index)
    signal = int(rng.poisson(signal_mean, size).sum())
    noise = int(rng.poisson(noise_mean, size).sum())
    return signal, noise


def count_statistics(eta: float, mean_photon: float, events: int, noise_per_window: float,
                     seed: int = 0, window: float = 100.0, threads: int = 1) -> CountStats:
    """
    Sample detected signal and noise counts over ``events`` storage attempts.

    Args:
        eta: Memory efficiency
        mean_photon: Mean photon number per input pulse
        events: Number of storage events
        noise_per_window: Mean noise counts per detection window
        seed: RNG seed
        window: Detection window (ns), reported only
        threads: Worker threads for the chunked sampling

    Returns:
        CountStats with snr = signal_counts / noise_counts
    """
    if not 0.0 <= eta <= 1.0:
        raise RegimeError(f"efficiency must lie in [0, 1], got {eta}")
    if events < 1:
        raise RegimeError(f"events must be >= 1, got {events}")

    chunks = [(i, min(CHUNK_EVENTS, events - i * CHUNK_EVENTS))
              for i in range((events + CHUNK_EVENTS - 1) // CHUNK_EVENTS)]
    signal_mean = eta * mean_photon

    def run(chunk):
        index, size = chunk
        return _sample_chunk(seed, index, size, signal_mean, noise_per_window)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(run, chunks))
    else:
        results = [run(chunk) for chunk in chunks]

    signal = sum(r[0] for r in results)
    noise = sum(r[1] for r in results)
    snr = signal / noise if noise > 0 else float('inf')
    logger.info(f"Counted {events} events: signal={signal}, noise={noise}, SNR={snr:.4g}")
    return CountStats(events=events, mean_photon=mean_photon, window=window,
                      signal_counts=signal, noise_counts=noise, snr=snr,
                      eta=eta, noise_per_window=noise_per_window)


def count_histogram(trace: EchoTrace, mean_photon: float, events: int,
                    noise_per_window: float, bin_ns: float = 5.0, seed: int = 0,
                    window: float = 100.0) -> pd.DataFrame:
    """
    Time-resolved photon counts (transmission and echoes) over many events.

    Returns:
        DataFrame with columns time_ns (bin centre), expected, counts
    """
    if bin_ns <= 0:
        raise RegimeError(f"bin width must be positive, got {bin_ns}")
    edges = np.arange(trace.time_ns[0], trace.time_ns[-1] + bin_ns, bin_ns)
    energy, _ = np.histogram(trace.time_ns, bins=edges, weights=trace.intensity)
    expected = events * (mean_photon * energy + noise_per_window * bin_ns / window)
    counts = _stream(seed, 0).poisson(expected)
    return pd.DataFrame({
        'time_ns': 0.5 * (edges[:-1] + edges[1:]),
        'expected': expected,
        'counts': counts,
    })
