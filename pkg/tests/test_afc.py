import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from src.core.errors import AliasingError, RegimeError, UnderResolvedError
from src.material import DetuningGrid, baseline_spectrum
from src.pumping import NoiseModel, PulseTrain, PumpTarget, PumpWindow
from src.afc import (
    AFCSpec, CombSource, InputPulse, comb_metrics, count_histogram, count_statistics,
    efficiency_analytic, estimate_spacing, optimal_depth, optimal_finesse, propagate,
    run_store, square_comb, transfer_function,
)

# 120 MHz at 25 kHz: 20 periods of 6 MHz, resolves F = 10 teeth
FINE_GRID = DetuningGrid.from_range(-60.0, 59.975, 0.025)


def test_efficiency_reference_values():
    assert efficiency_analytic(12, 4.5, 0.4) == pytest.approx(0.28077, rel=1e-3)
    assert efficiency_analytic(4, 2, 0) == pytest.approx(0.2194, rel=1e-3)
    with pytest.raises(RegimeError):
        efficiency_analytic(4, 1.0, 0)


def test_optimal_depth_is_twice_finesse():
    assert optimal_depth(2.0) == 4.0
    result = minimize_scalar(lambda d: -efficiency_analytic(d, 2.0, 0.0),
                             bounds=(0.1, 20.0), method="bounded", options={"xatol": 1e-6})
    assert result.x == pytest.approx(4.0, abs=0.01)
    assert efficiency_analytic(4.0, 2.0, 0.0) / 2.0 == pytest.approx(0.5 * 0.2194, rel=1e-3)


def test_optimal_finesse_is_a_maximum():
    F = optimal_finesse(12.0, 0.4)
    best = efficiency_analytic(12.0, F, 0.4)
    assert best >= efficiency_analytic(12.0, F * 0.97, 0.4)
    assert best >= efficiency_analytic(12.0, F * 1.03, 0.4)
    with pytest.raises(RegimeError):
        optimal_finesse(0.0)


def test_square_comb_levels(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=4.5, d=12.0, d0=0.4), periodic_grid)
    assert spec.od.max() == pytest.approx(12.4, rel=1e-6)
    assert spec.od.min() == pytest.approx(0.4, rel=1e-6)
    assert spec.od[periodic_grid.index_of(0.0)] == pytest.approx(12.4, rel=1e-6)
    assert spec.od[periodic_grid.index_of(3.0)] == pytest.approx(0.4, rel=1e-6)
    assert spec.od.mean() == pytest.approx(0.4 + 12.0 / 4.5, rel=1e-9)


def test_windowed_comb_keeps_outside_absorption(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=3.0, d=2.0, d0=0.1, bandwidth=30.0),
                       periodic_grid)
    assert spec.od[periodic_grid.index_of(-50.0)] == pytest.approx(2.1)
    assert spec.od[periodic_grid.index_of(3.0)] == pytest.approx(0.1, abs=1e-6)


def test_square_comb_resolution():
    coarse = DetuningGrid.from_range(-30.0, 30.0, 0.5)
    with pytest.raises(UnderResolvedError):
        square_comb(AFCSpec(spacing=6.0, finesse=4.5), coarse)


def test_comb_metrics_recover_square_comb(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=4.5, d=12.0, d0=0.4), periodic_grid)
    metrics = comb_metrics(spec, 6.0)
    assert metrics.d0 == pytest.approx(0.4, abs=1e-6)
    assert metrics.finesse == pytest.approx(4.5, rel=0.05)
    assert metrics.tooth_od == pytest.approx(12.0, rel=0.05)
    assert metrics.efficiency == pytest.approx(0.2808, rel=0.05)


def test_flat_spectrum_has_no_comb(periodic_grid):
    flat = baseline_spectrum(1.0, 2, periodic_grid)
    assert estimate_spacing(flat) is None
    assert comb_metrics(flat, 6.0).tooth_od == 0.0


def test_estimate_spacing(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=3.0, d=4.0, d0=0.0), periodic_grid)
    assert estimate_spacing(spec) == pytest.approx(6.0, rel=1e-6)


def test_transfer_function_of_flat_medium():
    h = transfer_function(np.full(64, 2.0))
    assert np.allclose(np.abs(h), np.exp(-1.0))
    assert np.allclose(np.angle(h), 0.0)


@pytest.mark.parametrize("F", [2, 3, 4.5, 6, 10])
@pytest.mark.parametrize("d0", [0.0, 0.4])
def test_first_echo_matches_analytic_efficiency(F, d0):
    pulse = InputPulse(duration=20.0)
    for d in (1, 2, 4, 8, 12, 15):
        spec = square_comb(AFCSpec(spacing=6.0, finesse=F, d=d, d0=d0), FINE_GRID)
        trace = propagate(spec, pulse, spacing=6.0)
        assert trace.efficiency(1) == pytest.approx(efficiency_analytic(d, F, d0), rel=0.05), d


def test_echo_timing_and_precursor(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=4.5, d=12.0, d0=0.4), periodic_grid)
    trace = propagate(spec, InputPulse(duration=80.0))
    assert trace.spacing == pytest.approx(6.0)
    assert trace.peak_time(1) == pytest.approx(1000.0 / 6.0, abs=2.0)
    assert trace.peak_time(2) == pytest.approx(2000.0 / 6.0, abs=2.0)
    assert trace.precursor < 1e-6
    assert trace.total_energy < 1.0
    assert trace.efficiency(1) > trace.efficiency(2) > 0
    assert trace.efficiency(7) == 0.0


@pytest.mark.parametrize("spacing", [2.0, 3.0])
def test_echo_follows_spacing(periodic_grid, spacing):
    spec = square_comb(AFCSpec(spacing=spacing, finesse=4.5, d=12.0, d0=0.4), periodic_grid)
    trace = propagate(spec, InputPulse(duration=80.0), spacing=spacing)
    assert trace.peak_time(1) == pytest.approx(1000.0 / spacing, abs=2.0)
    assert trace.peak_time(2) == pytest.approx(2000.0 / spacing, abs=2.0)


def test_broadband_comb_echo():
    grid = DetuningGrid.from_range(-342.0, 341.9, 0.1)
    spec = square_comb(AFCSpec(spacing=18.0, finesse=2.0, d=2.2, d0=0.0), grid)
    trace = propagate(spec, InputPulse.preset("broadband"), spacing=18.0)
    assert trace.peak_time(1) == pytest.approx(55.6, abs=2.0)
    assert comb_metrics(spec, 18.0).finesse == pytest.approx(2.0, abs=0.2)


def test_propagation_resolution_checks(periodic_grid):
    spec = square_comb(AFCSpec(spacing=6.0, finesse=4.5), periodic_grid)
    with pytest.raises(UnderResolvedError):
        propagate(spec, InputPulse(duration=5.0))
    with pytest.raises(UnderResolvedError):
        propagate(spec, InputPulse(duration=10_000.0))
    with pytest.raises(AliasingError):
        propagate(spec, InputPulse(duration=80.0), spacing=0.3, orders=3)


def test_pulse_presets():
    assert InputPulse.preset("efficient").duration == 80.0
    assert InputPulse.preset("broadband").duration == 25.0
    assert InputPulse(duration=80.0).bandwidth == pytest.approx(2 * np.log(2) / np.pi / 0.08)


def test_count_statistics_snr():
    stats = count_statistics(0.285, 1.0, 1_000_000, 1.055e-3, seed=0)
    assert stats.snr == pytest.approx(270.0, rel=0.1)
    assert stats.expected_snr == pytest.approx(0.285 / 1.055e-3)
    assert stats.signal_counts == pytest.approx(285_000, rel=0.01)


def test_count_statistics_is_seeded_and_thread_independent():
    a = count_statistics(0.2, 1.0, 250_000, 1e-3, seed=7)
    b = count_statistics(0.2, 1.0, 250_000, 1e-3, seed=7, threads=4)
    c = count_statistics(0.2, 1.0, 250_000, 1e-3, seed=8)
    assert (a.signal_counts, a.noise_counts) == (b.signal_counts, b.noise_counts)
    assert (a.signal_counts, a.noise_counts) != (c.signal_counts, c.noise_counts)


def test_count_statistics_rejects_bad_input():
    with pytest.raises(RegimeError):
        count_statistics(1.5, 1.0, 100, 1e-3)
    with pytest.raises(RegimeError):
        count_statistics(0.2, 1.0, 0, 1e-3)


def test_count_histogram(periodic_grid):
    spec = square_comb(AFCSpec(), periodic_grid)
    trace = propagate(spec, InputPulse(duration=80.0), spacing=6.0)
    first = count_histogram(trace, 1.0, 10_000, 1e-3, bin_ns=5.0, seed=3)
    again = count_histogram(trace, 1.0, 10_000, 1e-3, bin_ns=5.0, seed=3)
    assert list(first.columns) == ["time_ns", "expected", "counts"]
    assert first.equals(again)
    assert (first["counts"] >= 0).all()
    echo = first[(first.time_ns - 1000.0 / 6.0).abs() <= 500.0 / 6.0]
    assert echo["expected"].sum() == pytest.approx(10_000 * trace.efficiency(1), rel=0.1)


def test_store_with_ideal_comb(periodic_grid):
    baseline = baseline_spectrum(2.0, 6, periodic_grid)
    result = run_store(baseline, InputPulse(duration=80.0), source=CombSource.IDEAL,
                       comb=AFCSpec(spacing=6.0, finesse=4.5, d=12.0, d0=0.4), events=20_000)
    assert 0.26 <= result.efficiency <= 0.31
    assert result.trace.peak_time(1) == pytest.approx(166.7, abs=2.0)
    summary = result.summary()
    assert summary["comb"]["d0"] == pytest.approx(0.4, abs=1e-6)
    assert summary["counts"]["events"] == 20_000


def test_store_without_pumping(periodic_grid):
    baseline = baseline_spectrum(1.0, 2, periodic_grid)
    result = run_store(baseline, InputPulse(duration=80.0), source=CombSource.NONE)
    assert result.efficiency == 0.0
    assert result.trace.transmission == pytest.approx(np.exp(-2.0), rel=1e-9)
    assert result.metrics is None
    assert result.noise_per_window == pytest.approx(5.6e-4)

    calibrated = run_store(baseline, InputPulse(duration=80.0), source=CombSource.NONE,
                           noise=NoiseModel(target_total=1.055e-3))
    assert calibrated.noise_per_window == 1.055e-3


def test_store_with_pumped_comb(small_grid, ion, zero_field_pattern):
    baseline = baseline_spectrum(1.0, 2, small_grid, ion)
    target = PumpTarget(comb_spacing=6.0, tooth_width=1.33, wait_time=5.0,
                        windows=[PumpWindow(center=0.0, bandwidth=12.0)])
    train = PulseTrain(t0=0.15, N_l=20, delta_p=2.0, peak_rate=5.0)
    result = run_store(baseline, InputPulse(duration=80.0), source="pumped", target=target,
                       train=train, pattern=zero_field_pattern, ion=ion, events=5_000)
    assert 0.0 <= result.efficiency < 1.0
    assert result.metrics is not None
    assert result.noise_per_window == pytest.approx(5.5e-4 + 1e-5)
    assert np.max(np.abs(result.spectrum.total_population() - 1.0)) < 1e-6


def test_pumped_store_needs_inputs(small_grid):
    baseline = baseline_spectrum(1.0, 1, small_grid)
    with pytest.raises(RegimeError):
        run_store(baseline, InputPulse(), source=CombSource.PUMPED)
