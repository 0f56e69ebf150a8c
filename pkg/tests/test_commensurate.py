import numpy as np
import pytest

from src.core.errors import GridRangeError, RegimeError
from src.material import IonClass
from src.commensurate import (
    audit_points, axis, intrinsic_delta, linewidth_feasible, mean_distance_match,
    mismatch, mismatch_map, mismatch_values, residues, search_field,
)


def test_exact_match():
    assert mismatch(1000.0 / 3.0, 1.0) == pytest.approx(0.0, abs=1e-9)
    r = residues(1000.0 / 3.0, 1.0)
    assert (r.n1, r.n2, r.n3, r.n4) == pytest.approx((2.0, 9.0, 7.0, 11.0))


@pytest.mark.parametrize("n1", range(1, 21))
def test_zeros_follow_excited_quotient(n1):
    value = mismatch(n1 / 0.006, 1.0)
    if n1 % 4 == 2:
        assert value == pytest.approx(0.0, abs=1e-9)
    else:
        assert value > 0.1


def test_mismatch_range_and_domain():
    values = mismatch_values(np.linspace(10, 2000, 500)[:, None], np.linspace(0.5, 20, 40)[None, :])
    assert values.shape == (500, 40)
    assert values.min() >= 0.0 and values.max() <= 1.0
    with pytest.raises(RegimeError):
        mismatch(0.0, 1.0)
    with pytest.raises(RegimeError):
        mismatch(100.0, -1.0)


def test_mean_distance_match():
    assert mean_distance_match(1000.0 / 3.0, 1.0) == pytest.approx(1.0)
    assert mean_distance_match(630.0, 4.0) == pytest.approx(1.0 - 0.17625 / 4, abs=1e-6)


def test_search_finds_commensurate_field():
    results = search_field(4.0, (50.0, 2000.0))
    best, value = results[0]
    assert best == pytest.approx(4000.0 / 3.0, abs=0.05)
    assert value < 1e-3
    assert 1 <= len(results) <= 5
    assert [v for _, v in results] == sorted(v for _, v in results)


def test_search_rejects_empty_range():
    with pytest.raises(GridRangeError):
        search_field(4.0, (100.0, 50.0))


def test_axis():
    assert list(axis(50.0, 60.0, 5.0)) == [50.0, 55.0, 60.0]
    assert list(axis(630.0, 630.0, 1.0)) == [630.0]
    with pytest.raises(GridRangeError):
        axis(1.0, 2.0, 0.0)


def test_mismatch_map_shape_and_threads():
    first = mismatch_map((50, 700, 1), (50, 1000, 5))
    assert first.values.shape == (651, 191)
    again = mismatch_map((50, 700, 1), (50, 1000, 5), threads=4)
    assert np.array_equal(first.values, again.values)
    j = int(np.argmin(np.abs(first.axis_values - 250.0)))
    i = int(np.argmin(np.abs(first.fields - 630.0)))
    assert first.values[i, j] == pytest.approx(mismatch(630.0, 4.0))
    assert first.spacings[j] == pytest.approx(4.0)


def test_single_point_map():
    single = mismatch_map((630, 630, 1), (250, 250, 1))
    assert single.values.shape == (1, 1)
    assert single.values[0, 0] == pytest.approx(0.088125, abs=1e-6)
    assert len(single.to_frame()) == 1


def test_map_minima_and_frame():
    b = 1000.0 / 3.0
    result = mismatch_map((b, b, 1), (0.5, 2.0, 0.5), storage_time=False)
    minima = result.minima()
    assert len(minima) == 1
    assert minima[0][1] == pytest.approx(1.0)
    frame = result.to_frame()
    assert list(frame.columns) == ["B_G", "delta_MHz", "mismatch"]
    assert len(frame) == 4


def test_map_rejects_non_positive_axes():
    with pytest.raises(GridRangeError):
        mismatch_map((0, 10, 1), (50, 100, 5))


def test_audit_points():
    report = audit_points()
    assert [p.B for p in report] == [630.0, 158.0, 647.5]
    first = report[0]
    assert first.delta == pytest.approx(4.0)
    assert first.match == pytest.approx(1.0 - first.mismatch)
    assert first.mismatch == pytest.approx(0.088125, abs=1e-6)
    assert first.quoted_match == 0.965
    assert set(first.to_dict()) >= {"B_G", "storage_ns", "match", "quoted_match"}


def test_intrinsic_delta():
    assert intrinsic_delta(1000.0) == pytest.approx(45.0)
    with pytest.raises(RegimeError):
        intrinsic_delta(1000.0, IonClass(mu_e=0.03, mu_g=0.01))


def test_linewidth_feasible():
    assert linewidth_feasible(2.0)
    assert not linewidth_feasible(1.0)
    assert linewidth_feasible(1.0, IonClass(hole_fwhm=0.2))
