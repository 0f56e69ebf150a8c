import numpy as np
import pytest

from src.core.errors import CompileError, ConfigError, OutputError, RegimeError
from src.pumping import PulseTrain, PumpTarget, PumpWindow
from src.seqcompile import (
    ALL_TONES, AomSegment, Envelope, HardwareLimits, RFSchedule, ScheduleMode,
    compile_schedule, coverage, dumps, emit, parse, sample_segment,
)


def efficient_target():
    return PumpTarget(comb_spacing=6.0, tooth_width=1.33,
                      windows=[PumpWindow(center=0.0, bandwidth=30.0)])


def broadband_target():
    return PumpTarget(comb_spacing=18.0, tooth_width=9.0,
                      windows=[PumpWindow(center=0.0, bandwidth=630.0)])


def twobin_target():
    return PumpTarget(comb_spacing=6.0, tooth_width=1.33, windows=[
        PumpWindow(center=3000.0, bandwidth=30.0, spacing=6.0, delta_p=4.2),
        PumpWindow(center=3300.0, bandwidth=30.0, spacing=3.0, delta_p=1.8),
    ])


@pytest.fixture
def limits():
    return HardwareLimits()


@pytest.fixture
def twobin(limits):
    target = twobin_target()
    return target, compile_schedule(target, PulseTrain(t0=0.1, N_l=300, delta_p=4.2), limits)


def test_aom_only_schedule(limits):
    target = efficient_target()
    schedule = compile_schedule(target, PulseTrain(t0=0.15, N_l=600, delta_p=4.2), limits)
    assert schedule.mode is ScheduleMode.AOM
    assert len(schedule.aom_segments) == 5
    assert schedule.eom_tones == []
    assert schedule.repetition_ms == pytest.approx(0.75)
    assert schedule.total_duration_ms == pytest.approx(450.0)
    first = schedule.aom_segments[0]
    assert first.rf_center == pytest.approx(80.0 - 12.0 / 2)
    assert first.f_stop_MHz - first.f_start_MHz == pytest.approx(4.2 / 2)
    assert first.envelope is Envelope.SECH
    report = coverage(schedule, target)
    assert report.line_count == 5
    assert report.bandwidth == pytest.approx(30.0)
    assert report.leakage == ()


def test_broadband_schedule(limits):
    target = broadband_target()
    schedule = compile_schedule(target, PulseTrain(t0=0.1, N_l=300, delta_p=8.2), limits)
    assert schedule.mode is ScheduleMode.BROADBAND
    assert [t.frequency_MHz for t in schedule.eom_tones] == pytest.approx([90.0, 180.0, 270.0])
    assert schedule.optical_tones() == pytest.approx([-270, -180, -90, 0, 90, 180, 270])
    assert len(schedule.aom_segments) == 5
    assert all(s.tone == ALL_TONES for s in schedule.aom_segments)
    report = coverage(schedule, target)
    assert report.line_count == 35
    assert report.bandwidth == pytest.approx(630.0)
    assert report.lines[0] == pytest.approx(-306.0)
    assert report.lines[-1] == pytest.approx(306.0)


def test_broadband_needs_enough_tones():
    limits = HardwareLimits(eom_max_tones=2)
    with pytest.raises(CompileError) as info:
        compile_schedule(broadband_target(), PulseTrain(delta_p=8.2), limits)
    assert info.value.window == 0


def test_multiwindow_schedule(twobin):
    target, schedule = twobin
    assert schedule.mode is ScheduleMode.MULTIWINDOW
    assert schedule.etalon_center == pytest.approx(3150.0)
    assert schedule.carrier_blocked
    assert schedule.optical_tones() == pytest.approx([3000.0, 3300.0])
    assert len(schedule.aom_segments) == 15
    assert {s.window for s in schedule.aom_segments} == {0, 1}


def test_multiwindow_coverage_and_leakage(twobin):
    target, schedule = twobin
    report = coverage(schedule, target)
    assert report.line_count == 15
    assert report.bandwidth == pytest.approx(60.0)
    assert len(report.leakage) == 1
    warning = report.leakage[0]
    assert warning.window == 0
    assert warning.tone_MHz == pytest.approx(3300.0)
    assert warning.amplitude == pytest.approx(0.05)
    assert warning.positions == pytest.approx((3288.0, 3294.0, 3300.0, 3306.0, 3312.0))
    assert report.to_dict()["leakage"][0]["window"] == 0


def test_window_outside_etalon():
    limits = HardwareLimits(etalon_bandwidth=200.0)
    with pytest.raises(CompileError) as info:
        compile_schedule(twobin_target(), PulseTrain(t0=0.1, N_l=10), limits)
    assert info.value.window == 0
    assert "etalon" in str(info.value)


def test_window_below_carrier_cannot_use_upper_sideband(limits):
    target = PumpTarget(windows=[PumpWindow(center=-3000.0, bandwidth=30.0),
                                 PumpWindow(center=3000.0, bandwidth=30.0)])
    with pytest.raises(CompileError) as info:
        compile_schedule(target, PulseTrain(), limits)
    assert info.value.window == 0


def test_pump_pulses_include_leakage(twobin):
    _, schedule = twobin
    pulses = schedule.pump_pulses()
    assert len(pulses) == 30
    leaks = [p for p in pulses if p.leak]
    assert len(leaks) == 15
    assert all(p.amplitude == pytest.approx(0.05) for p in leaks)
    assert min(p.center for p in pulses if not p.leak) == pytest.approx(2988.0)


def test_json_schedule_round_trip(twobin):
    _, schedule = twobin
    text = dumps(schedule)
    assert parse(text) == schedule
    assert dumps(parse(text)) == text


def test_csv_schedule_round_trip(twobin, tmp_path):
    _, schedule = twobin
    path = emit(schedule, tmp_path / "schedule.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# afcmem-schedule v1 segments=15")
    assert len(lines) == 2 + 15 * 300 + 2
    assert parse(path) == schedule


def test_schedule_format_errors(tmp_path, twobin):
    _, schedule = twobin
    with pytest.raises(ConfigError):
        dumps(schedule, "xml")
    with pytest.raises(ConfigError):
        parse('{"format": "other", "version": 1}')
    with pytest.raises(OutputError):
        emit(schedule, tmp_path / "missing" / "schedule.json")


def test_schedule_rejects_overlapping_segments():
    segment = dict(f_start_MHz=70.0, f_stop_MHz=72.0)
    with pytest.raises(ValueError):
        RFSchedule(aom_segments=[AomSegment(t_start_ms=0.0, t_stop_ms=0.2, **segment),
                                 AomSegment(t_start_ms=0.1, t_stop_ms=0.3, **segment)])
    with pytest.raises(ValueError):
        RFSchedule(aom_segments=[AomSegment(t_start_ms=0.0, t_stop_ms=0.1, tone=0, **segment)])


def test_sample_segment():
    segment = AomSegment(t_start_ms=0.0, t_stop_ms=0.01, f_start_MHz=70.0, f_stop_MHz=72.0)
    wave = sample_segment(segment, sample_rate=500.0)
    assert len(wave.time_us) == 5000
    assert wave.frequency_MHz[0] == pytest.approx(70.0)
    assert wave.frequency_MHz[-1] == pytest.approx(72.0)
    assert np.max(wave.envelope) == pytest.approx(1.0, abs=1e-3)
    assert np.max(np.abs(wave.signal)) <= 1.0

    gaussian = sample_segment(segment.model_copy(update={"envelope": Envelope.GAUSSIAN}))
    assert np.allclose(np.diff(gaussian.frequency_MHz), np.diff(gaussian.frequency_MHz)[0])


def test_sample_segment_below_nyquist():
    segment = AomSegment(t_start_ms=0.0, t_stop_ms=0.01, f_start_MHz=70.0, f_stop_MHz=72.0)
    with pytest.raises(RegimeError):
        sample_segment(segment, sample_rate=100.0)
