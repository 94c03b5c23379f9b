"""Viewing-geometry math tests.

Reference values come from trig recomputed independently here; the published
setup numbers (5.78'' phone diagonal seen from 10'' and 41'', 460 ppi) are
frozen as regression anchors.
"""

import math

import pytest

from screenveil.geometry import (
    RESOLVING_POWER_DEG,
    DisplaySpec,
    ViewingGeometry,
    angular_diameter,
    downscale_factor,
    optimal_grid_size,
)


def test_angular_diameter_matches_direct_trig():
    for size, dist in [(5.78, 10.0), (5.78, 41.0), (1.0, 1.0), (27.0, 18.5), (0.02, 300.0)]:
        expected = math.degrees(2.0 * math.atan(size / (2.0 * dist)))
        assert angular_diameter(size, dist) == pytest.approx(expected, abs=1e-12)


def test_angular_diameter_reference_setup():
    assert angular_diameter(5.78, 10) == pytest.approx(32.239, abs=0.01)
    assert angular_diameter(5.78, 41) == pytest.approx(8.064, abs=0.01)


def test_angular_diameter_rejects_nonpositive():
    with pytest.raises(ValueError):
        angular_diameter(0.0, 10.0)
    with pytest.raises(ValueError):
        angular_diameter(5.0, -1.0)


def test_downscale_factor_reference_setup():
    display = DisplaySpec(5.78, 1080, 2340)
    assert downscale_factor(10.0, 41.0, display) == pytest.approx(4.00, abs=0.05)


def test_downscale_factor_rounds_half_up_to_cents():
    display = DisplaySpec(5.78, 1080, 2340)
    factor = downscale_factor(10.0, 41.0, display)
    assert factor == round(factor, 2)
    # independent recomputation of the ratio, then the same 2-decimal rule
    near = math.degrees(2 * math.atan(5.78 / 20.0))
    far = math.degrees(2 * math.atan(5.78 / 82.0))
    assert factor == math.floor(near / far * 100 + 0.5) / 100


def test_downscale_factor_requires_farther_onlooker():
    display = DisplaySpec(5.78, 1080, 2340)
    with pytest.raises(ValueError):
        downscale_factor(41.0, 10.0, display)
    with pytest.raises(ValueError):
        downscale_factor(10.0, 10.0, display)


def test_optimal_grid_reference_setup():
    g_real, g_int = optimal_grid_size(ViewingGeometry(distance_in=10, ppi=460))
    assert g_real == pytest.approx(1.34, abs=0.01)
    assert g_int == 1


def test_optimal_grid_doubles_with_distance():
    g_real, g_int = optimal_grid_size(ViewingGeometry(distance_in=20, ppi=460))
    assert g_real == pytest.approx(2.68, abs=0.01)
    assert g_int == 3  # 2.68 rounds half-up to 3


def test_optimal_grid_matches_direct_formula():
    geom = ViewingGeometry(distance_in=14.5, ppi=163.0, font_term=1.2,
                           resolving_power_deg=0.02)
    expected = 163.0 * 2 * 14.5 * math.tan(math.radians(0.02) / 2) * 1.2
    g_real, g_int = optimal_grid_size(geom)
    assert g_real == pytest.approx(expected, abs=1e-12)
    assert g_int == max(1, math.floor(expected + 0.5))


def test_optimal_grid_never_below_one():
    # close viewer on a low-density panel: raw size under half a pixel
    g_real, g_int = optimal_grid_size(ViewingGeometry(distance_in=2.0, ppi=72.0))
    assert g_real < 0.5
    assert g_int == 1


def test_geometry_validation():
    with pytest.raises(ValueError):
        ViewingGeometry(distance_in=-1, ppi=460)
    with pytest.raises(ValueError):
        ViewingGeometry(distance_in=10, ppi=0)
    with pytest.raises(ValueError):
        ViewingGeometry(distance_in=10, ppi=460, font_term=0)
    with pytest.raises(ValueError):
        DisplaySpec(0.0, 100, 100)
    with pytest.raises(ValueError):
        DisplaySpec(5.78, 0, 100)


def test_display_ppi():
    # 3-4-5 triangle: 300x400 px on a 5'' diagonal is exactly 100 ppi
    assert DisplaySpec(5.0, 300, 400).ppi == pytest.approx(100.0)


def test_default_resolving_power():
    assert RESOLVING_POWER_DEG == pytest.approx(0.0167)
    assert ViewingGeometry(10, 460).resolving_power_deg == RESOLVING_POWER_DEG
