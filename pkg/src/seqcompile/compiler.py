"""
Pump target compiler

Turns a PumpTarget into an RFSchedule:

- AOM only: every pumped line is within the AOM's optical reach.
- Broadband: one window wider than the AOM reach is tiled by EOM sidebands
  spaced by the largest multiple of the comb spacing the AOM can cover; the
  AOM pumps the central tile and every transmitted tone copies it.
- Multi-window: one EOM tone per window centre, the etalon passes the
  upper sidebands and blocks the carrier; windows are pumped one after the
  other inside each repetition.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import CompileError
from ..core.logging_config import get_logger
from ..pumping.pulses import PulseTrain, PumpLine, PumpTarget
from .hardware import HardwareLimits
from .schedule import ALL_TONES, AomSegment, EomTone, Envelope, RFSchedule, ScheduleMode

logger = get_logger(__name__)

# Optical positions closer than this are the same line (MHz)
LINE_TOL = 1e-6


def _reachable(offset: float, delta_p: float, limits: HardwareLimits) -> bool:
    return abs(offset) + delta_p / 2 <= limits.optical_span / 2 + 1e-9


def _segments(placements: List[Tuple[PumpLine, float, int]], train: PulseTrain,
              limits: HardwareLimits) -> List[AomSegment]:
    """One chirp segment per (line, optical AOM offset, tone)"""
    envelope = Envelope.SECH if train.adiabatic else Envelope.GAUSSIAN
    segments = []
    t = 0.0
    for line, offset, tone in placements:
        rf = limits.rf_for(offset)
        half = line.delta_p / 2 / limits.pass_factor
        f_start, f_stop = rf - half, rf + half
        if not (limits.rf_in_range(f_start) and limits.rf_in_range(f_stop)):
            raise CompileError(
                f"window {line.window}: sweep {f_start:.4g}-{f_stop:.4g} MHz outside the AOM range "
                f"{limits.aom_center - limits.aom_bandwidth / 2:g}-"
                f"{limits.aom_center + limits.aom_bandwidth / 2:g} MHz", window=line.window)
        segments.append(AomSegment(
            t_start_ms=t, t_stop_ms=t + train.t0, f_start_MHz=f_start, f_stop_MHz=f_stop,
            envelope=envelope, amplitude=1.0, tone=tone, window=line.window, spacing=line.spacing,
        ))
        t += train.t0
    return segments


def _broadband(target: PumpTarget, lines: List[PumpLine], train: PulseTrain,
               limits: HardwareLimits) -> RFSchedule:
    window = target.windows[0]
    spacing = target.spacing_for(window)
    tile = np.floor(limits.optical_span / spacing + 1e-9) * spacing
    if tile <= 0:
        raise CompileError(f"window 0: comb spacing {spacing:g} MHz exceeds the AOM reach", window=0)

    relative = [line.center - window.center for line in lines]
    tiles = [int(round(x / tile)) for x in relative]
    per_side = max(abs(k) for k in tiles)
    if per_side > limits.eom_max_tones:
        raise CompileError(
            f"window 0: {2 * per_side + 1} sub-bands of {tile:g} MHz need {per_side} EOM tones, "
            f"hardware has {limits.eom_max_tones}", window=0)

    base = [(line, x) for line, x, k in zip(lines, relative, tiles) if k == 0]
    expected = {round(x + k * tile, 6) for _, x in base for k in range(-per_side, per_side + 1)}
    if expected != {round(x, 6) for x in relative}:
        raise CompileError(f"window 0: {window.bandwidth:g} MHz is not tiled evenly by "
                           f"{tile:g} MHz sidebands", window=0)

    placements = []
    for line, x in base:
        offset = window.center + x
        if not _reachable(offset, line.delta_p, limits):
            raise CompileError(f"window 0: line at {offset:g} MHz outside the AOM reach", window=0)
        placements.append((line, offset, ALL_TONES))

    tones = [EomTone(frequency_MHz=k * tile, amplitude=1.0 / limits.eom_gain)
             for k in range(1, per_side + 1)]
    logger.info(f"Broadband schedule: {len(base)} segments x {2 * per_side + 1} tones "
                f"spaced {tile:g} MHz")
    return RFSchedule(
        mode=ScheduleMode.BROADBAND, repetitions=train.N_l, aom_center=limits.aom_center,
        double_pass=limits.aom_double_pass, eom_extinction=limits.eom_extinction,
        aom_segments=_segments(placements, train, limits), eom_tones=tones,
    )


def _multiwindow(target: PumpTarget, lines: List[PumpLine], train: PulseTrain,
                 limits: HardwareLimits) -> RFSchedule:
    windows = target.windows
    if len(windows) > limits.eom_max_tones:
        raise CompileError(f"{len(windows)} windows need more than {limits.eom_max_tones} EOM tones",
                           window=limits.eom_max_tones)

    centers = [w.center for w in windows]
    etalon_center = limits.etalon_center
    if etalon_center is None:
        etalon_center = 0.5 * (min(centers) + max(centers))
    for index, window in enumerate(windows):
        if window.center <= 0:
            raise CompileError(f"window {index} at {window.center:g} MHz cannot be reached by an "
                               f"upper EOM sideband", window=index)
        if abs(window.center - etalon_center) + window.bandwidth / 2 > limits.etalon_bandwidth / 2:
            raise CompileError(
                f"window {index} at {window.center:g} MHz outside the etalon passband "
                f"{etalon_center:g} +- {limits.etalon_bandwidth / 2:g} MHz", window=index)

    carrier_blocked = abs(etalon_center) > limits.etalon_bandwidth / 2
    if not carrier_blocked:
        logger.warning("Etalon passes the carrier; it pumps alongside every window")

    placements = []
    for line in lines:
        offset = line.center - windows[line.window].center
        if not _reachable(offset, line.delta_p, limits):
            raise CompileError(f"window {line.window}: line at {line.center:g} MHz outside the AOM "
                               f"reach of its tone", window=line.window)
        placements.append((line, offset, line.window))

    tones = [EomTone(frequency_MHz=c, amplitude=1.0 / limits.eom_gain) for c in centers]
    logger.info(f"Multi-window schedule: {len(windows)} tones, etalon at {etalon_center:g} MHz")
    return RFSchedule(
        mode=ScheduleMode.MULTIWINDOW, repetitions=train.N_l, aom_center=limits.aom_center,
        double_pass=limits.aom_double_pass, etalon_center=etalon_center,
        etalon_bandwidth=limits.etalon_bandwidth, eom_extinction=limits.eom_extinction,
        carrier_blocked=carrier_blocked, aom_segments=_segments(placements, train, limits),
        eom_tones=tones,
    )


def compile_schedule(target: PumpTarget, train: PulseTrain,
                     limits: HardwareLimits) -> RFSchedule:
    """
    Compile a pump target for the given hardware.

    Args:
        target: Windows and comb spacing
        train: Pulse duration, repetitions and chirp width
        limits: Hardware limits

    Returns:
        RFSchedule

    Raises:
        CompileError: naming the window that cannot be reached
    """
    lines = target.pump_lines(train.delta_p)
    if not lines:
        return RFSchedule(repetitions=train.N_l, aom_center=limits.aom_center,
                          double_pass=limits.aom_double_pass, eom_extinction=limits.eom_extinction)

    if all(_reachable(line.center, line.delta_p, limits) for line in lines):
        placements = [(line, line.center, ALL_TONES) for line in lines]
        logger.info(f"AOM-only schedule: {len(lines)} segments")
        return RFSchedule(
            mode=ScheduleMode.AOM, repetitions=train.N_l, aom_center=limits.aom_center,
            double_pass=limits.aom_double_pass, eom_extinction=limits.eom_extinction,
            aom_segments=_segments(placements, train, limits),
        )
    if len(target.windows) == 1 and target.windows[0].bandwidth > limits.optical_span:
        return _broadband(target, lines, train, limits)
    return _multiwindow(target, lines, train, limits)


@dataclass(frozen=True)
class LeakageWarning:
    window: int
    tone_MHz: float
    amplitude: float
    positions: Tuple[float, ...]


@dataclass(frozen=True)
class CoverageReport:
    lines: Tuple[float, ...]
    bandwidth: float
    leakage: Tuple[LeakageWarning, ...] = field(default_factory=tuple)

    @property
    def line_count(self) -> int:
        return len(self.lines)

    def to_dict(self) -> dict:
        return {
            'line_count': self.line_count,
            'bandwidth_MHz': self.bandwidth,
            'lines_MHz': list(self.lines),
            'leakage': [
                {'window': w.window, 'tone_MHz': w.tone_MHz, 'amplitude': w.amplitude,
                 'positions_MHz': list(w.positions)}
                for w in self.leakage
            ],
        }


def coverage(schedule: RFSchedule, target: PumpTarget) -> CoverageReport:
    """
    Pumped lines, covered bandwidth and spurious pumping of a schedule.

    Bandwidth is the extent of each window's lines plus one spacing, summed
    over windows. Suppressed EOM tones leak at 1/eom_extinction; a warning is
    raised where a leaked line lands on an AFC tooth.
    """
    per_window: Dict[int, List[float]] = {}
    spacing: Dict[int, float] = {}
    leaked: Dict[Tuple[int, float], List[float]] = {}
    for segment in schedule.aom_segments:
        offset = schedule.segment_offset(segment)
        active, leaking = schedule.segment_tones(segment)
        per_window.setdefault(segment.window, []).extend(t + offset for t in active)
        spacing[segment.window] = segment.spacing
        for tone in leaking:
            leaked.setdefault((segment.window, tone), []).append(tone + offset)

    lines: List[float] = []
    bandwidth = 0.0
    for window, positions in sorted(per_window.items()):
        unique = _unique(positions)
        lines.extend(unique)
        if unique:
            bandwidth += unique[-1] - unique[0] + spacing[window]

    teeth = np.array(target.tooth_centers())
    reach = 0.5 * target.tooth_width
    warnings = []
    for (window, tone), positions in sorted(leaked.items()):
        hits = tuple(x for x in _unique(positions)
                     if teeth.size and np.min(np.abs(teeth - x)) <= reach)
        if hits:
            amplitude = 1.0 / schedule.eom_extinction
            warnings.append(LeakageWarning(window, tone, amplitude, hits))
            logger.warning(f"Tone {tone:g} MHz leaks at {amplitude:.1%} onto {len(hits)} AFC teeth "
                           f"while window {window} is pumped")
    return CoverageReport(lines=tuple(_unique(lines)), bandwidth=float(bandwidth),
                          leakage=tuple(warnings))


def _unique(values: List[float]) -> List[float]:
    out: List[float] = []
    for x in sorted(values):
        if not out or x - out[-1] > LINE_TOL:
            out.append(float(x))
    return out
