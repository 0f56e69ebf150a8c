import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import GridRangeError, RegimeError, UnderResolvedError
from src.material import (
    DetuningGrid, FeatureKind, FieldConfig, GridConfig, IonClass, Lineshape, baseline_spectrum,
    burn_spectrum, hole_pattern, inhomogeneous_profile, splitting_ratio, synthetic_spectrum,
    zeeman_splittings,
)


def test_zeeman_splittings_at_4500_gauss(ion):
    delta_e, delta_g = zeeman_splittings(ion, FieldConfig(B=4500))
    assert delta_e == pytest.approx(27.0)
    assert delta_g == pytest.approx(128.25)
    assert splitting_ratio(ion) == pytest.approx(4.75)


def test_ion_rejects_short_ground_lifetime():
    with pytest.raises(ValidationError):
        IonClass(T_ground=5.0, T_bottleneck=10.0)
    with pytest.raises(ValidationError):
        IonClass(rel_crossed=1.0)


def test_hole_pattern_at_4500_gauss(ion):
    pattern = hole_pattern(27.0, 128.25, ion)
    holes = sorted(f.offset for f in pattern.holes)
    antiholes = sorted(f.offset for f in pattern.antiholes)
    assert holes == pytest.approx([-27.0, 0.0, 27.0])
    assert antiholes == pytest.approx([-155.25, -128.25, -101.25, 101.25, 128.25, 155.25])


def test_hole_pattern_weights(ion):
    pattern = hole_pattern(27.0, 128.25, ion)
    weights = {round(f.offset, 6): f.weight for f in pattern.features}
    assert weights[0.0] == pytest.approx(1.0)
    assert weights[27.0] == pytest.approx(0.25)
    # Anti-hole pairs keep the 1 : r : r^2 ratio
    assert weights[128.25] / weights[101.25] == pytest.approx(0.25)
    assert weights[155.25] / weights[101.25] == pytest.approx(0.0625)
    total_holes = sum(f.weight for f in pattern.holes)
    total_antiholes = sum(f.weight for f in pattern.antiholes)
    assert total_antiholes == pytest.approx(ion.ground_branching * total_holes)


def test_hole_pattern_is_mirror_symmetric(ion):
    pattern = hole_pattern(2.22, 10.545, ion)
    offsets = np.array(pattern.offsets)
    assert np.allclose(np.sort(offsets), np.sort(-offsets))


def test_zero_field_leaves_single_hole(ion):
    pattern = hole_pattern(0.0, 0.0, ion)
    assert len(pattern.features) == 1
    assert pattern.features[0].kind is FeatureKind.HOLE
    assert pattern.features[0].offset == 0.0


def test_hole_pattern_rejects_negative_splitting(ion):
    with pytest.raises(RegimeError):
        hole_pattern(-1.0, 2.0, ion)


def test_grid_from_range():
    grid = DetuningGrid.from_range(-60.0, 59.95, 0.05)
    assert grid.size == 2400
    assert grid.span == pytest.approx(120.0)
    assert grid.values[0] == -60.0
    assert grid.index_of(0.0) == 1200
    with pytest.raises(GridRangeError):
        grid.index_of(75.0)


def test_grid_symmetry():
    assert DetuningGrid.from_range(-15.0, 15.0, 0.05).is_symmetric()
    assert not DetuningGrid.from_range(-60.0, 59.95, 0.05).is_symmetric()


def test_grid_config_validates_range():
    with pytest.raises(ValidationError):
        GridConfig(lo=10.0, hi=-10.0)
    assert GridConfig(lo=-1.0, hi=1.0, step=0.1).to_grid().size == 21


def test_baseline_spectrum(small_grid, ion):
    spec = baseline_spectrum(2.0, 6, small_grid, ion)
    assert np.allclose(spec.od, 12.0)
    assert np.allclose(spec.pop_g1, 0.5)
    assert np.allclose(spec.total_population(), 1.0)
    assert not spec.od.flags.writeable


def test_baseline_spectrum_needs_resolved_holes(ion):
    coarse = DetuningGrid.from_range(-10.0, 10.0, 0.2)
    with pytest.raises(UnderResolvedError):
        baseline_spectrum(1.0, 1, coarse, ion)


def test_inhomogeneous_profile(small_grid):
    profile = inhomogeneous_profile(small_grid, 10.0)
    assert profile.max() == pytest.approx(1.0)
    assert profile[small_grid.index_of(5.0)] == pytest.approx(0.5, rel=1e-6)
    assert np.all(inhomogeneous_profile(small_grid, None) == 1.0)


def test_burn_spectrum_shows_hole_and_antiholes(ion):
    grid = DetuningGrid.from_range(-200.0, 200.0, 0.1)
    pattern = hole_pattern(27.0, 128.25, ion)
    spec = burn_spectrum(pattern, grid, peak_od=1.0, depth=0.5, ion=ion)
    assert spec.od[grid.index_of(0.0)] == pytest.approx(0.5, abs=1e-6)
    assert spec.od[grid.index_of(27.0)] == pytest.approx(1.0 - 0.5 * 0.25, abs=1e-3)
    peak = grid.values[np.argmax(spec.od)]
    assert abs(abs(peak) - 101.25) <= 0.1
    assert spec.od.max() > 1.0


def test_burn_spectrum_lorentzian_is_wider(ion):
    grid = DetuningGrid.from_range(-10.0, 10.0, 0.05)
    pattern = hole_pattern(0.0, 0.0, ion)
    gauss = burn_spectrum(pattern, grid, depth=0.5, ion=ion)
    lorentz = burn_spectrum(pattern, grid, depth=0.5, ion=ion, lineshape=Lineshape.LORENTZIAN)
    far = grid.index_of(1.5)
    assert lorentz.od[far] < gauss.od[far]


def test_secondary_class_adds_hole_only_features():
    ion = IonClass(secondary_fraction=0.5)
    grid = DetuningGrid.from_range(-40.0, 40.0, 0.1)
    pattern = hole_pattern(27.0, 128.25, ion)
    spec = burn_spectrum(pattern, grid, depth=0.5, ion=ion)
    # 6 MHz excited splitting of the secondary class at 4500 G
    assert spec.od[grid.index_of(6.0)] < 1.0 - 0.05


def test_synthetic_spectrum_populations(small_grid):
    od = np.linspace(0.0, 4.0, small_grid.size)
    spec = synthetic_spectrum(small_grid, od, 4.0)
    assert np.allclose(spec.pop_g1 + spec.pop_g2, 1.0)
    assert spec.pop_g1[-1] == pytest.approx(0.5)
