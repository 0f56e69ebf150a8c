"""
Subcommand implementations

Each command computes its results in memory first and then writes every
output through one StagedOutput, so a failing command leaves nothing behind.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..afc.analysis import CombMetrics, comb_metrics
from ..afc.comb import efficiency_analytic
from ..afc.counting import count_histogram
from ..afc.store import CombSource, StoreResult, run_store
from ..commensurate.conditions import audit_points, linewidth_feasible
from ..commensurate.search import mismatch_map, search_field
from ..core.errors import ConfigError
from ..core.logging_config import get_logger
from ..core.output import StagedOutput
from ..material.holes import HolePattern, burn_spectrum
from ..material.spectrum import Spectrum
from ..plots import HeatmapPlot, SpectrumPlot, TracePlot
from ..pumping.pulses import PulseTrain
from ..pumping.rate_model import (
    calibrate_peak_rate, optimize_peak_rate, simulate_pumping, simulate_schedule,
)
from ..seqcompile.compiler import compile_schedule, coverage
from ..seqcompile.emit import dumps
from .config import RunConfig, with_override

logger = get_logger(__name__)


def _finite(value: Optional[float]) -> Optional[float]:
    """JSON-safe float: None for inf/nan"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _metrics_dict(metrics: CombMetrics) -> Dict[str, Any]:
    return {
        'd0': _finite(metrics.d0),
        'mean_od': _finite(metrics.mean_od),
        'finesse': _finite(metrics.finesse),
        'finesse_fwhm': _finite(metrics.finesse_fwhm),
        'tooth_od': _finite(metrics.tooth_od),
        'efficiency_analytic': _finite(metrics.efficiency),
    }


def _clean(data: Any) -> Any:
    if isinstance(data, np.generic):
        data = data.item()
    if isinstance(data, dict):
        return {k: _clean(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_clean(v) for v in data]
    if isinstance(data, float):
        return _finite(data)
    return data


# --- holeburn ---------------------------------------------------------------

def cmd_holeburn(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """Single-burn hole/anti-hole spectrum at the configured field"""
    pattern = config.pattern()
    burn = config.holeburn
    spectrum = burn_spectrum(pattern, config.grid.to_grid(), peak_od=config.spectrum.total_od,
                             depth=burn.depth, ion=config.ion, fwhm=burn.fwhm,
                             lineshape=burn.lineshape)
    features = pd.DataFrame({
        'offset_MHz': [f.offset for f in pattern.features],
        'kind': [f.kind.value for f in pattern.features],
        'weight': [f.weight for f in pattern.features],
    })
    summary = {
        'B_G': config.field.B,
        'delta_e_MHz': pattern.delta_e,
        'delta_g_MHz': pattern.delta_g,
        'holes_MHz': sorted(f.offset for f in pattern.holes),
        'antiholes_MHz': sorted(f.offset for f in pattern.antiholes),
    }
    with StagedOutput(out) as staged:
        staged.write_csv("holeburn.csv", spectrum.to_frame())
        staged.write_csv("features.csv", features)
        staged.write_json("summary.json", _clean(summary))
        SpectrumPlot(spectrum, title=f"hole burning, B = {config.field.B:g} G").save(
            staged.path("holeburn.png"))
    logger.info(f"holeburn: {len(pattern.features)} features written to {out}")
    return summary


# --- pump -------------------------------------------------------------------

@dataclass(frozen=True)
class PumpResult:
    baseline: Spectrum
    spectrum: Spectrum
    metrics: CombMetrics
    peak_rate: float


def _pump_train(config: RunConfig, baseline: Spectrum, pattern: HolePattern) -> PulseTrain:
    """Configured pulse train with peak_rate calibrated or optimized when asked"""
    train = config.pulse_train
    comb = config.comb
    if comb.calibrate_d0 is not None:
        rate = calibrate_peak_rate(baseline, config.pump_target, train, pattern,
                                   comb.calibrate_d0, config.ion)
    elif comb.optimize_rate:
        rate = optimize_peak_rate(baseline, config.pump_target, train, pattern, config.ion)
    else:
        return train
    return train.model_copy(update={'peak_rate': rate})


def run_pump(config: RunConfig) -> PumpResult:
    """Tailor the baseline with the configured target, directly or through the RF schedule"""
    baseline = config.baseline()
    pattern = config.pattern()
    target = config.pump_target
    linewidth_feasible(target.comb_spacing, config.ion)
    train = _pump_train(config, baseline, pattern)
    if config.comb.from_schedule:
        schedule = compile_schedule(target, train, config.hardware)
        pumped = simulate_schedule(baseline, schedule, pattern, config.ion,
                                   peak_rate=train.peak_rate, wait_time=target.wait_time)
    else:
        pumped = simulate_pumping(baseline, target, train, pattern, config.ion)
    window = target.windows[0]
    spacing = target.spacing_for(window)
    metrics = comb_metrics(pumped, spacing, center=window.center,
                           span=target.line_count(window) * spacing)
    return PumpResult(baseline, pumped, metrics, train.peak_rate)


def _pump_summary(result: PumpResult) -> Dict[str, Any]:
    total = result.spectrum.total_population()
    return {
        'converged': result.spectrum.converged,
        'peak_rate': result.peak_rate,
        'population_error': float(abs(total - 1.0).max()),
        'comb': _metrics_dict(result.metrics),
    }


def cmd_pump(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """Pumped spectrum after the wait time plus realised comb metrics"""
    result = run_pump(config)
    summary = _pump_summary(result)
    with StagedOutput(out) as staged:
        staged.write_csv("pump.csv", result.spectrum.to_frame())
        staged.write_json("summary.json", _clean(summary))
        SpectrumPlot(result.spectrum, reference=result.baseline, title="pumped spectrum").save(
            staged.path("pump.png"))
    return summary


# --- store ------------------------------------------------------------------

def run_store_config(config: RunConfig, threads: int = 1) -> StoreResult:
    """Storage experiment for the configured comb source"""
    train = config.pulse_train
    baseline = config.baseline()
    pattern = config.pattern()
    source = config.comb.source
    if source is CombSource.PUMPED:
        linewidth_feasible(config.pump_target.comb_spacing, config.ion)
        train = _pump_train(config, baseline, pattern)
    counting = config.counting
    return run_store(
        baseline, config.pulse, source=source, comb=config.comb.afc,
        target=config.pump_target, train=train, pattern=pattern, ion=config.ion,
        noise=config.noise, mean_photon=counting.mean_photon, events=counting.events,
        window=counting.window, seed=config.seed, threads=threads,
    )


def _store_summary(config: RunConfig, result: StoreResult) -> Dict[str, Any]:
    summary = result.summary()
    summary['source'] = config.comb.source.value
    summary['pulse_ns'] = config.pulse.duration
    if config.comb.source is CombSource.IDEAL:
        afc = config.comb.afc
        summary['efficiency_eq'] = efficiency_analytic(afc.d, afc.finesse, afc.d0)
    return _clean(summary)


def cmd_store(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """pump -> wait -> propagate -> count, with trace and count histogram"""
    result = run_store_config(config, threads)
    counting = config.counting
    histogram = count_histogram(result.trace, counting.mean_photon, counting.events,
                                result.noise_per_window, bin_ns=counting.bin_ns,
                                seed=config.seed, window=counting.window)
    summary = _store_summary(config, result)
    with StagedOutput(out) as staged:
        staged.write_csv("trace.csv", result.trace.to_frame())
        staged.write_csv("counts.csv", histogram)
        staged.write_csv("spectrum.csv", result.spectrum.to_frame())
        staged.write_json("summary.json", summary)
        TracePlot(result.trace, title=f"eta = {result.efficiency:.1%}").save(
            staged.path("trace.png"))
        SpectrumPlot(result.spectrum, title="stored-light comb").save(staged.path("spectrum.png"))
    logger.info(f"store: eta={result.efficiency:.4f}, SNR={result.counts.snr:.4g}")
    return summary


# --- commensurate -----------------------------------------------------------

def cmd_commensurate(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """Mismatch map, its minima, the quoted-point audit and an optional B search"""
    settings = config.commensurate
    data = mismatch_map(settings.b_range, settings.y_range, config.ion,
                        storage_time=settings.storage_time, threads=threads)
    column = 'storage_ns' if settings.storage_time else 'delta_MHz'
    minima = pd.DataFrame(data.minima(settings.threshold), columns=['B_G', column, 'mismatch'])
    summary: Dict[str, Any] = {
        'shape': list(data.values.shape),
        'minimum': float(data.values.min()),
        'minima_count': len(minima),
    }
    search = None
    if settings.search_delta is not None:
        ranked = search_field(settings.search_delta, settings.search_b_range, config.ion,
                              top_k=settings.top_k)
        search = pd.DataFrame(ranked, columns=['B_G', 'mismatch'])
        summary['search'] = {'delta_MHz': settings.search_delta,
                             'fields': [{'B_G': b, 'mismatch': m} for b, m in ranked]}
    if settings.audit:
        summary['audit'] = [p.to_dict() for p in audit_points(config.ion)]

    with StagedOutput(out) as staged:
        staged.write_csv("mismatch_map.csv", data.to_frame())
        staged.write_csv("minima.csv", minima)
        if search is not None:
            staged.write_csv("search.csv", search)
        staged.write_json("summary.json", _clean(summary))
        if data.values.shape[0] > 1 and data.values.shape[1] > 1:
            HeatmapPlot(data).save(staged.path("mismatch_map.png"))
    return summary


# --- compile ----------------------------------------------------------------

def cmd_compile(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """RF schedule in both formats plus the coverage report"""
    schedule = compile_schedule(config.pump_target, config.pulse_train, config.hardware)
    report = coverage(schedule, config.pump_target)
    summary = {
        'mode': schedule.mode.value,
        'segments': len(schedule.aom_segments),
        'optical_tones_MHz': schedule.optical_tones(),
        'repetition_ms': schedule.repetition_ms,
        'coverage': report.to_dict(),
    }
    with StagedOutput(out) as staged:
        staged.write_text("schedule.json", dumps(schedule, "json"))
        staged.write_text("schedule.csv", dumps(schedule, "csv"))
        staged.write_json("summary.json", _clean(summary))
    return summary


# --- sweep ------------------------------------------------------------------

def _sweep_point(config: RunConfig, command: str) -> Dict[str, Any]:
    if command == "pump":
        result = run_pump(config)
        return {'converged': result.spectrum.converged, **_metrics_dict(result.metrics)}
    stored = run_store_config(config)
    row = {
        'efficiency': stored.efficiency,
        'transmission': stored.trace.transmission,
        'noise_per_window': stored.noise_per_window,
        'snr': _finite(stored.counts.snr),
        'converged': stored.spectrum.converged,
    }
    if stored.metrics is not None:
        row.update({k: v for k, v in _metrics_dict(stored.metrics).items()
                    if k in ('d0', 'finesse', 'tooth_od')})
    return row


def cmd_sweep(config: RunConfig, out: Path, threads: int = 1) -> Dict[str, Any]:
    """
    Repeat ``store`` or ``pump`` over the values of one dotted parameter.

    Points run in parallel; rows keep the order of the configured values.
    """
    sweep = config.sweep
    if not sweep.parameter or not sweep.values:
        raise ConfigError(["sweep: parameter and values are required"])
    configs = [with_override(config, sweep.parameter, v) for v in sweep.values]
    logger.info(f"Sweeping {sweep.parameter} over {len(configs)} values ({sweep.command})")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            rows: List[Dict[str, Any]] = list(
                executor.map(lambda c: _sweep_point(c, sweep.command), configs))
    else:
        rows = [_sweep_point(c, sweep.command) for c in configs]

    points = [{sweep.parameter: v, **row} for v, row in zip(sweep.values, rows)]
    frame = pd.DataFrame(points)
    summary = {'parameter': sweep.parameter, 'command': sweep.command, 'points': points}
    with StagedOutput(out) as staged:
        staged.write_csv("sweep.csv", frame)
        staged.write_json("summary.json", _clean(summary))
    return summary


COMMANDS = {
    'holeburn': cmd_holeburn,
    'pump': cmd_pump,
    'store': cmd_store,
    'commensurate': cmd_commensurate,
    'compile': cmd_compile,
    'sweep': cmd_sweep,
}
