import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ddstc.signalset import (
    build_signalset, default_radii, label_bits, label_to_tuple, to_csv_rows, tuple_to_label,
    verify_signalset,
)


def test_four_relay_rate_one_points():
    S = build_signalset(2, 256)
    a, b = 1 / math.sqrt(3), math.sqrt(5 / 3)
    assert np.allclose(S.points, [[a, 0], [-a, 0], [0, b], [0, -b]], atol=1e-15)
    assert S.c1 == S.c2 == 0.0


def test_two_point_set():
    S = build_signalset(2, 16)
    assert np.array_equal(S.points, [[1.0, 0.0], [-1.0, 0.0]])


def test_printed_radii_are_reproduced():
    assert np.allclose(default_radii(4), [1 / math.sqrt(3), math.sqrt(5 / 3)], atol=1e-15)
    assert np.allclose(default_radii(8), [0.378, 0.8452, 1.1339, 1.3628], atol=1e-4)
    r = default_radii(16)
    assert r[0] == pytest.approx(0.3235, abs=1e-4)
    s3 = math.sqrt(3)
    assert r[1] == pytest.approx(s3 * r[0])
    assert r[4] == pytest.approx(3 * r[0])
    assert r[2] == pytest.approx(r[1] + (r[4] - r[1]) / 3)
    assert r[3] == pytest.approx(r[1] + 2 * (r[4] - r[1]) / 3)
    assert r[5] == pytest.approx((2 + s3) * r[0])
    assert r[6] == pytest.approx(r[2] + 2 * r[0])
    assert r[7] == pytest.approx(r[3] + 2 * r[0])


def test_generic_radii():
    assert np.allclose(default_radii(6), np.arange(1, 4) * math.sqrt(3 / 14))


@pytest.mark.parametrize("m", [2, 4, 6, 8, 10, 16, 20])
def test_radii_constraints(m):
    r = default_radii(m)
    assert np.all(np.diff(r) > 0)
    assert np.sum(r ** 2) == pytest.approx(m / 2, abs=1e-12)


def test_eight_relay_points():
    S = build_signalset(3, 16 ** 4)
    assert S.points.shape == (16, 4)
    r = S.radii
    assert np.array_equal(S.points[0], [r[0], 0, 0, 0])
    assert np.array_equal(S.points[3], [0, -r[1], 0, 0])
    assert np.array_equal(S.points[9], [-r[4], 0, 0, 0])
    assert np.array_equal(S.points[14], [0, 0, 0, r[7]])


@pytest.mark.parametrize("lam,Q", [(1, 16), (2, 16), (2, 256), (2, 4096), (3, 65536), (3, 256)])
def test_constructed_sets_pass(lam, Q):
    S = build_signalset(lam, Q)
    assert verify_signalset(S).ok
    assert S.group_power() == pytest.approx(1.0, abs=1e-12)
    assert np.all((np.abs(S.points) > 0).sum(axis=1) == 1)


@pytest.mark.parametrize("Q,radii", [
    (255, None), (3 ** 4, None), (256, [1.0, 1.0]), (256, [1.2, 0.6]), (256, [0.5, 1.0]),
    (256, [-0.5, math.sqrt(1.75)]), (256, [1.0]),
])
def test_build_errors(Q, radii):
    with pytest.raises(ValueError):
        build_signalset(2, Q, radii)


def test_duplicate_radius_fails_pm_condition():
    r = 1 / math.sqrt(2)
    pts = np.array([[r, 0], [-r, 0], [0, r], [0, -r]])
    rep = verify_signalset(pts)
    assert not rep.no_pm_equal and not rep.ok
    assert ("plus_minus", 0, 2) in rep.violations


def test_two_coordinate_point_fails():
    rep = verify_signalset(np.array([[1, 1], [-1, 0]]) / math.sqrt(2))
    assert not rep.single_coordinate


def test_single_point_is_vacuous():
    assert verify_signalset(np.array([[1.0, 0.0]])).ok


def test_label_examples():
    S = build_signalset(2, 256)
    assert label_to_tuple(S, 0x00) == (0, 0, 0, 0)
    assert label_to_tuple(S, 0xFF) == (3, 3, 3, 3)
    assert label_to_tuple(S, 0b01_00_00_11) == (1, 0, 0, 3)
    with pytest.raises(ValueError):
        label_to_tuple(S, 256)


@pytest.mark.parametrize("Q", [16, 256, 4096])
def test_label_round_trip(Q):
    S = build_signalset(2, Q)
    table = label_bits(S)
    for label in range(Q):
        t = label_to_tuple(S, label)
        assert tuple(table[label]) == t
        assert tuple_to_label(S, t) == label


def test_labels_need_power_of_two():
    S = build_signalset(2, 6 ** 4)
    with pytest.raises(ValueError):
        label_bits(S)


@given(st.integers(1, 5).map(lambda k: 2 * k), st.integers(1, 3))
def test_property_any_default_set_is_valid(m, lam):
    S = build_signalset(lam, m ** 4)
    assert verify_signalset(S).ok


def test_csv_rows():
    rows = to_csv_rows(build_signalset(2, 256))
    assert rows[0] == "group_dim,point_index,coord_1,coord_2"
    assert len(rows) == 5
    assert rows[1] == "2,1,0.5773502692,0"
