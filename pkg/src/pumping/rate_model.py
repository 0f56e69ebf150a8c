"""
Optical pumping rate model

Each grid channel carries an ion class with four populations: the two
ground states g1/g2, the excited reservoir and the bottleneck level. A pump
pulse drives g1 and g2 out of the classes it addresses; excited ions return
to either ground state directly or through the bottleneck, and the ground
states equilibrate with each other on the T_ground time scale.

Rates are constant during one pulse, so every pulse is an exact matrix
exponential per class (scipy.linalg.expm on a stack of 4x4 generators).
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq, minimize_scalar

from ..core.errors import GridRangeError, RegimeError
from ..core.logging_config import get_logger
from ..material.holes import HolePattern
from ..material.ion import IonClass
from ..material.spectrum import BOTTLENECK, EXCITED, G1, G2, ClassState, DetuningGrid, Spectrum
from .pulses import PulseTrain, PumpTarget, check_lines_on_grid, pump_weight

logger = get_logger(__name__)

# Relative slack allowed before a rising tooth floor counts as non-monotone
MONOTONE_RTOL = 1e-9


@dataclass(frozen=True)
class PumpPulse:
    """One pump pulse in optical detuning coordinates"""
    center: float
    delta_p: float
    duration: float
    amplitude: float = 1.0
    adiabatic: bool = True
    leak: bool = False


def line_offsets(pattern: HolePattern, grid: DetuningGrid) -> Tuple[Tuple[int, ...], Tuple[float, ...]]:
    """
    Channel offsets and strengths of the four lines of a class.

    Lines: g1->e1 at 0, g1->e2 at +delta_e, g2->e1 at -delta_g and
    g2->e2 at -delta_g + delta_e, snapped to whole grid steps.
    """
    n_e = int(round(pattern.delta_e / grid.step))
    n_g = int(round(pattern.delta_g / grid.step))
    r = pattern.rel_crossed
    return (0, n_e, -n_g, -n_g + n_e), (1.0, r, r, 1.0)


def _class_state(spec: Spectrum, pattern: HolePattern) -> ClassState:
    offsets, strengths = line_offsets(pattern, spec.grid)
    classes = spec.classes
    if classes is not None and classes.offsets == offsets and classes.strengths == strengths:
        return classes
    return ClassState.equilibrium(offsets, strengths, spec.density, spec.grid_pops())


def _generators(ion: IonClass, rate_g1: np.ndarray, rate_g2: np.ndarray) -> np.ndarray:
    """Stack of (M, 4, 4) rate matrices, d(pops)/dt = G @ pops"""
    k_g = 0.5 / ion.T_ground
    gamma_e = 1.0 / ion.T_excited
    gamma_b = 1.0 / ion.T_bottleneck
    beta = ion.branching_ratio
    q = ion.ground_branching

    gen = np.zeros((len(rate_g1), 4, 4))
    gen[:, G1, G1] = -rate_g1 - k_g
    gen[:, G1, G2] = k_g
    gen[:, G1, EXCITED] = (1 - q) * (1 - beta) * gamma_e
    gen[:, G1, BOTTLENECK] = (1 - q) * gamma_b
    gen[:, G2, G1] = k_g
    gen[:, G2, G2] = -rate_g2 - k_g
    gen[:, G2, EXCITED] = q * (1 - beta) * gamma_e
    gen[:, G2, BOTTLENECK] = q * gamma_b
    gen[:, EXCITED, G1] = rate_g1
    gen[:, EXCITED, G2] = rate_g2
    gen[:, EXCITED, EXCITED] = -gamma_e
    gen[:, BOTTLENECK, EXCITED] = beta * gamma_e
    gen[:, BOTTLENECK, BOTTLENECK] = -gamma_b
    return gen


def _free_propagator(ion: IonClass, t: float) -> np.ndarray:
    zero = np.zeros(1)
    return expm(_generators(ion, zero, zero)[0] * t)


def _class_rates(classes: ClassState, profile: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pump rate on g1 and g2 of every class for a per-channel light profile"""
    m = classes.pops.shape[0]
    n = classes.grid_size
    rates = (np.zeros(m), np.zeros(m))
    base = np.arange(m) - classes.pad_lo
    for offset, strength, state in zip(classes.offsets, classes.strengths, ClassState.LINE_STATE):
        channel = base + offset
        valid = (channel >= 0) & (channel < n)
        target = rates[0] if state == G1 else rates[1]
        target[valid] += strength * profile[channel[valid]]
    return rates


def _pulse_propagator(classes: ClassState, ion: IonClass, profile: np.ndarray,
                      duration: float, free: np.ndarray) -> np.ndarray:
    rate_g1, rate_g2 = _class_rates(classes, profile)
    props = np.broadcast_to(free, (len(rate_g1), 4, 4)).copy()
    active = (rate_g1 > 0) | (rate_g2 > 0)
    if np.any(active):
        gen = _generators(ion, rate_g1[active], rate_g2[active])
        props[active] = expm(gen * duration)
    return props


def _run_train(classes: ClassState, grid: DetuningGrid, pulses: Sequence[PumpPulse],
               repetitions: int, peak_rate: float, ion: IonClass,
               floor_channels: np.ndarray) -> Tuple[ClassState, bool]:
    """Apply the pulse sequence ``repetitions`` times, tracking the tooth floors"""
    m = classes.pops.shape[0]
    rep = np.broadcast_to(np.eye(4), (m, 4, 4)).copy()
    free_cache = {}
    for pulse in pulses:
        if pulse.duration not in free_cache:
            free_cache[pulse.duration] = _free_propagator(ion, pulse.duration)
        profile = peak_rate * pulse.amplitude * _pulse_profile(pulse, grid, ion)
        step = _pulse_propagator(classes, ion, profile, pulse.duration, free_cache[pulse.duration])
        rep = np.matmul(step, rep)

    pops = np.array(classes.pops)
    floor = classes.od()[floor_channels]
    scale = max(float(np.max(classes.density)), 1e-300)
    converged = True
    for _ in range(repetitions):
        pops = np.einsum('mij,mj->mi', rep, pops)
        current = classes.with_pops(pops).od()[floor_channels]
        if np.any(current - floor > MONOTONE_RTOL * scale):
            converged = False
        floor = current
    return classes.with_pops(pops), converged


def _pulse_profile(pulse: PumpPulse, grid: DetuningGrid, ion: IonClass) -> np.ndarray:
    train = PulseTrain(delta_p=pulse.delta_p, t0=pulse.duration,
                       amplitude_shape='sech' if pulse.adiabatic else 'gaussian',
                       chirp_shape='tanh' if pulse.adiabatic else 'linear')
    return pump_weight(train, pulse.center, grid, ion)


def _relax_classes(classes: ClassState, ion: IonClass, t: float) -> ClassState:
    if t <= 0:
        return classes
    prop = _free_propagator(ion, t)
    return classes.with_pops(classes.pops @ prop.T)


def _pump(spec: Spectrum, pulses: List[PumpPulse], repetitions: int, peak_rate: float,
          pattern: HolePattern, ion: IonClass, wait_time: float) -> Spectrum:
    classes = _class_state(spec, pattern)
    converged = spec.converged
    if pulses and peak_rate > 0:
        floors = np.array(sorted({spec.grid.index_of(p.center) for p in pulses if not p.leak}),
                          dtype=int)
        classes, monotone = _run_train(classes, spec.grid, pulses, repetitions,
                                       peak_rate, ion, floors)
        if not monotone:
            logger.warning("Tooth floor OD did not decrease monotonically over repetitions")
            converged = False
    elif wait_time <= 0:
        return spec
    classes = _relax_classes(classes, ion, wait_time)
    return Spectrum.from_classes(spec.grid, classes, converged)


def simulate_pumping(spec: Spectrum, target: PumpTarget, train: PulseTrain,
                     pattern: HolePattern, ion: Optional[IonClass] = None) -> Spectrum:
    """
    Tailor a spectrum with a pulse train, then let it relax for the wait time.

    Args:
        spec: Starting spectrum
        target: Windows and comb spacing to pump
        train: Pulse parameters and repetition count
        pattern: Splittings at the working field (sets the class line offsets)
        ion: Ion constants

    Returns:
        Spectrum after pumping and target.wait_time of free evolution.
        ``converged`` is False when a tooth floor rose between repetitions.
    """
    ion = ion or IonClass()
    lines = target.pump_lines(train.delta_p)
    check_lines_on_grid(lines, spec.grid)
    pulses = [PumpPulse(line.center, line.delta_p, train.t0, 1.0, train.adiabatic)
              for line in lines]
    logger.info(f"Pumping {len(pulses)} lines x {train.N_l} repetitions "
                f"on {spec.grid.size} channels")
    result = _pump(spec, pulses, train.N_l, train.peak_rate, pattern, ion, target.wait_time)
    logger.info(f"Pumping finished (converged={result.converged})")
    return result


def simulate_schedule(spec: Spectrum, schedule, pattern: HolePattern,
                      ion: Optional[IonClass] = None, peak_rate: float = 1.0,
                      wait_time: float = 0.0) -> Spectrum:
    """
    Pump a spectrum with a compiled RF schedule.

    ``schedule`` provides ``pump_pulses()`` (optical PumpPulse list for one
    repetition, leakage included) and ``repetitions``. Leakage pulses that
    fall outside the grid are dropped.
    """
    ion = ion or IonClass()
    pulses = []
    for pulse in schedule.pump_pulses():
        if not spec.grid.contains(pulse.center):
            if pulse.leak:
                continue
            raise GridRangeError(f"scheduled line at {pulse.center:g} MHz outside grid")
        pulses.append(pulse)
    logger.info(f"Pumping schedule: {len(pulses)} pulses x {schedule.repetitions} repetitions")
    return _pump(spec, pulses, schedule.repetitions, peak_rate, pattern, ion, wait_time)


def relax(spectrum: Spectrum, t: float, ion: Optional[IonClass] = None) -> Spectrum:
    """
    Free evolution for t ms.

    Spectra from the pumping model evolve their full class state. Other
    spectra evolve per channel and scale the OD with the ground population.
    """
    ion = ion or IonClass()
    if t <= 0:
        return spectrum
    if spectrum.classes is not None:
        return Spectrum.from_classes(spectrum.grid, _relax_classes(spectrum.classes, ion, t),
                                     spectrum.converged)

    pops = spectrum.grid_pops() @ _free_propagator(ion, t).T
    before = spectrum.pop_g1 + spectrum.pop_g2
    after = pops[:, G1] + pops[:, G2]
    ratio = np.divide(after, before, out=np.ones_like(after), where=before > 0)
    return Spectrum(
        grid=spectrum.grid,
        od=spectrum.od * ratio,
        pop_g1=pops[:, G1],
        pop_g2=pops[:, G2],
        pop_exc=pops[:, EXCITED] + pops[:, BOTTLENECK],
        pop_bottleneck=pops[:, BOTTLENECK],
        density=spectrum.density,
        converged=spectrum.converged,
    )


def _window_metrics(spec: Spectrum, target: PumpTarget, train: PulseTrain,
                    pattern: HolePattern, ion: IonClass, log_rate: float):
    """Comb metrics over the first window after pumping at 10**log_rate"""
    from ..afc.analysis import comb_metrics

    window = target.windows[0]
    spacing = target.spacing_for(window)
    trial = train.model_copy(update={'peak_rate': 10.0 ** log_rate})
    pumped = simulate_pumping(spec, target, trial, pattern, ion)
    return comb_metrics(pumped, spacing, center=window.center,
                        span=target.line_count(window) * spacing)


def calibrate_peak_rate(spec: Spectrum, target: PumpTarget, train: PulseTrain,
                        pattern: HolePattern, target_d0: float,
                        ion: Optional[IonClass] = None,
                        rate_bounds: Tuple[float, float] = (1e-3, 1e3),
                        xtol: float = 1e-3) -> float:
    """
    Find the peak pump rate giving background OD ``target_d0`` after the wait.

    The background OD is the comb_metrics d0 over the first window.

    Returns:
        peak_rate (1/ms)

    Raises:
        RegimeError: target_d0 not reachable inside rate_bounds
    """
    ion = ion or IonClass()

    def residual(log_rate: float) -> float:
        return _window_metrics(spec, target, train, pattern, ion, log_rate).d0 - target_d0

    lo, hi = np.log10(rate_bounds[0]), np.log10(rate_bounds[1])
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo * f_hi > 0:
        raise RegimeError(
            f"background OD {target_d0:g} not reachable for peak_rate in {rate_bounds} "
            f"(lowest {min(f_lo, f_hi) + target_d0:.3g})")
    log_rate = brentq(residual, lo, hi, xtol=xtol)
    rate = 10.0 ** log_rate
    logger.info(f"Calibrated peak_rate = {rate:.4g} /ms for d0 = {target_d0:g}")
    return rate


def optimize_peak_rate(spec: Spectrum, target: PumpTarget, train: PulseTrain,
                       pattern: HolePattern, ion: Optional[IonClass] = None,
                       rate_bounds: Tuple[float, float] = (1e-2, 1e3),
                       xtol: float = 0.02) -> float:
    """
    Peak pump rate maximizing the square-comb efficiency of the first window.

    Stronger pumping lowers the background until ground-state refill during
    the wait sets a floor, then starts eating into the teeth. Searched on
    log10(rate) with bounded Brent.

    Returns:
        peak_rate (1/ms)

    Raises:
        RegimeError: no comb forms anywhere inside rate_bounds
    """
    ion = ion or IonClass()

    def loss(log_rate: float) -> float:
        return -_window_metrics(spec, target, train, pattern, ion, log_rate).efficiency

    lo, hi = np.log10(rate_bounds[0]), np.log10(rate_bounds[1])
    result = minimize_scalar(loss, bounds=(lo, hi), method='bounded', options={'xatol': xtol})
    if -result.fun <= 0:
        raise RegimeError(f"no comb forms for peak_rate in {rate_bounds}")
    rate = 10.0 ** result.x
    logger.info(f"Optimized peak_rate = {rate:.4g} /ms (efficiency {-result.fun:.4f})")
    return rate
